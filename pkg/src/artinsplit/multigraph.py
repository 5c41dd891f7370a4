"""Finite colored multigraphs and combinatorial maps between them.

Edges are directed at the data level (every edge has a tail and a head) but
walks may traverse them either way; loops and parallel edges are allowed.
Each edge carries a color naming the relation edge it came from.  All
operations are pure: graphs are never mutated after construction, and every
listing (components, blocks, cycles) comes back in a deterministic order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Optional


class StructureError(ValueError):
    """A graph or map references data that does not exist or is inconsistent."""


class DisconnectedError(ValueError):
    """Raised by operations that require a connected graph."""


@dataclass(frozen=True)
class Edge:
    """A directed colored edge.  `id` is unique within its graph."""

    id: str
    tail: str
    head: str
    color: str


class ColoredGraph:
    """An immutable multigraph with colored, directed edges.

    Vertices are identifiers (strings); ordering of vertices and of edge ids
    fixes the deterministic output order used everywhere downstream.
    """

    __slots__ = ("vertices", "edges", "_by_id", "_out", "_in")

    def __init__(self, vertices: Iterable[str], edges: Iterable[Edge]):
        vs = tuple(sorted(set(vertices)))
        es = tuple(sorted(edges, key=lambda e: e.id))
        by_id: dict[str, Edge] = {}
        vset = set(vs)
        out: dict[str, list[Edge]] = {v: [] for v in vs}
        inc: dict[str, list[Edge]] = {v: [] for v in vs}
        for e in es:
            if e.id in by_id:
                raise StructureError(f"duplicate edge id {e.id!r}")
            if e.tail not in vset or e.head not in vset:
                raise StructureError(f"edge {e.id!r} has a dangling endpoint")
            by_id[e.id] = e
            out[e.tail].append(e)
            inc[e.head].append(e)
        object.__setattr__(self, "vertices", vs)
        object.__setattr__(self, "edges", es)
        object.__setattr__(self, "_by_id", by_id)
        object.__setattr__(self, "_out", {v: tuple(l) for v, l in out.items()})
        object.__setattr__(self, "_in", {v: tuple(l) for v, l in inc.items()})

    def __setattr__(self, name, value):
        raise AttributeError("ColoredGraph is immutable")

    def edge(self, edge_id: str) -> Edge:
        try:
            return self._by_id[edge_id]
        except KeyError:
            raise StructureError(f"no edge {edge_id!r}") from None

    def has_edge(self, edge_id: str) -> bool:
        return edge_id in self._by_id

    def out_edges(self, v: str) -> tuple[Edge, ...]:
        return self._out[v]

    def in_edges(self, v: str) -> tuple[Edge, ...]:
        return self._in[v]

    def incident_ends(self, v: str) -> tuple[tuple[Edge, int], ...]:
        """All edge-ends at v as (edge, +1 for tail-end / -1 for head-end).

        A loop at v contributes two ends.
        """
        return tuple((e, +1) for e in self._out[v]) + tuple(
            (e, -1) for e in self._in[v]
        )

    def valence(self, v: str) -> int:
        # loops count twice, once per end
        return len(self._out[v]) + len(self._in[v])

    def colors(self) -> tuple[str, ...]:
        return tuple(sorted({e.color for e in self.edges}))

    def is_bouquet(self) -> bool:
        return len(self.vertices) == 1 and all(
            e.tail == e.head for e in self.edges
        )

    def restricted(self, edge_ids: Iterable[str]) -> "ColoredGraph":
        """Subgraph spanned by the given edges (only their endpoints kept)."""
        keep = set(edge_ids)
        es = [e for e in self.edges if e.id in keep]
        vs = {e.tail for e in es} | {e.head for e in es}
        return ColoredGraph(vs, es)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ColoredGraph)
            and self.vertices == other.vertices
            and self.edges == other.edges
        )

    def __hash__(self) -> int:
        return hash((self.vertices, self.edges))

    def __repr__(self) -> str:
        return (
            f"ColoredGraph({len(self.vertices)} vertices, "
            f"{len(self.edges)} edges)"
        )


def bouquet(colors: Iterable[str], vertex: str = "*") -> ColoredGraph:
    """One-vertex graph with a loop per color, the common target of all maps."""
    return ColoredGraph(
        [vertex],
        [Edge(f"x0:{c}", vertex, vertex, c) for c in sorted(set(colors))],
    )


@dataclass(frozen=True)
class GraphMap:
    """A combinatorial map: vertices to vertices, edges to edges.

    Edge images preserve the stored direction (tail goes to tail).  Colors
    must be preserved whenever the source palette is part of the target's.
    """

    source: ColoredGraph
    target: ColoredGraph
    vertex_map: Mapping[str, str]
    edge_map: Mapping[str, str]

    def vertex_image(self, v: str) -> str:
        return self.vertex_map[v]

    def edge_image(self, edge_id: str) -> Edge:
        return self.target.edge(self.edge_map[edge_id])

    def check(self) -> None:
        """Raise StructureError unless this is a well-formed combinatorial map."""
        tvs = set(self.target.vertices)
        for v in self.source.vertices:
            if v not in self.vertex_map:
                raise StructureError(f"vertex {v!r} has no image")
            if self.vertex_map[v] not in tvs:
                raise StructureError(f"image of vertex {v!r} is dangling")
        check_colors = set(self.source.colors()) <= set(self.target.colors())
        for e in self.source.edges:
            if e.id not in self.edge_map:
                raise StructureError(f"edge {e.id!r} has no image")
            img = self.target.edge(self.edge_map[e.id])
            if self.vertex_map[e.tail] != img.tail:
                raise StructureError(f"edge {e.id!r}: tail not preserved")
            if self.vertex_map[e.head] != img.head:
                raise StructureError(f"edge {e.id!r}: head not preserved")
            if check_colors and e.color != img.color:
                raise StructureError(f"edge {e.id!r}: color not preserved")


def is_immersion(m: GraphMap) -> bool:
    """True when m is locally injective on edge-ends, in both directions.

    At every source vertex no two distinct tail-ends may share an image edge,
    and likewise for head-ends.  Malformed maps raise StructureError.
    """
    m.check()
    for v in m.source.vertices:
        seen_out = set()
        for e in m.source.out_edges(v):
            img = m.edge_map[e.id]
            if img in seen_out:
                return False
            seen_out.add(img)
        seen_in = set()
        for e in m.source.in_edges(v):
            img = m.edge_map[e.id]
            if img in seen_in:
                return False
            seen_in.add(img)
    return True


def is_degree_n_cover(m: GraphMap, n: int) -> bool:
    """True when m is a covering map with every fiber of size exactly n."""
    m.check()
    vertex_fibers: dict[str, int] = {v: 0 for v in m.target.vertices}
    for v in m.source.vertices:
        vertex_fibers[m.vertex_map[v]] += 1
    if any(count != n for count in vertex_fibers.values()):
        return False
    edge_fibers: dict[str, int] = {e.id: 0 for e in m.target.edges}
    for e in m.source.edges:
        edge_fibers[m.edge_map[e.id]] += 1
    if any(count != n for count in edge_fibers.values()):
        return False
    # local bijectivity on stars: injective plus equal star sizes
    for v in m.source.vertices:
        w = m.vertex_map[v]
        if m.source.valence(v) != m.target.valence(w):
            return False
    return is_immersion(m)


def connected_components(g: ColoredGraph) -> list[ColoredGraph]:
    """Components as graphs, ordered by their smallest vertex id."""
    seen: set[str] = set()
    comps: list[ColoredGraph] = []
    for start in g.vertices:
        if start in seen:
            continue
        stack = [start]
        vs = set()
        while stack:
            v = stack.pop()
            if v in vs:
                continue
            vs.add(v)
            for e, _ in g.incident_ends(v):
                stack.append(e.head if e.tail == v else e.tail)
        seen |= vs
        es = [e for e in g.edges if e.tail in vs]
        comps.append(ColoredGraph(vs, es))
    comps.sort(key=lambda c: c.vertices[0])
    return comps


def free_rank(g: ColoredGraph) -> int:
    """First Betti number |E| - |V| + 1 of a connected graph."""
    if len(connected_components(g)) != 1:
        raise DisconnectedError(
            "free_rank requires a connected graph; split with "
            "connected_components first"
        )
    return len(g.edges) - len(g.vertices) + 1


def core(g: ColoredGraph) -> ColoredGraph:
    """Iteratively strip valence-1 vertices; a tree collapses to its least vertex."""
    if len(connected_components(g)) != 1:
        raise DisconnectedError("core requires a connected graph")
    alive_v = set(g.vertices)
    alive_e = {e.id: e for e in g.edges}
    valence = {v: g.valence(v) for v in g.vertices}
    queue = [v for v in g.vertices if valence[v] == 1]
    while queue:
        v = queue.pop()
        if v not in alive_v or valence[v] != 1:
            continue
        alive_v.discard(v)
        for e, _ in g.incident_ends(v):
            if e.id not in alive_e:
                continue
            del alive_e[e.id]
            other = e.head if e.tail == v else e.tail
            valence[other] -= 1
            valence[v] -= 1
            if other in alive_v and valence[other] == 1:
                queue.append(other)
    if not alive_e:
        return ColoredGraph([g.vertices[0]], [])
    return ColoredGraph(
        {v for v in alive_v}, [e for e in g.edges if e.id in alive_e]
    )


def blocks(g: ColoredGraph) -> list[frozenset[str]]:
    """Biconnected blocks as edge-id sets; every edge lands in exactly one.

    Loops are their own blocks.  Parallel edges share a block.  The list is
    ordered by each block's smallest edge id.
    """
    loop_ids = {e.id for e in g.edges if e.tail == e.head}
    out: list[frozenset[str]] = [frozenset([lid]) for lid in sorted(loop_ids)]

    def neighbours(v: str):
        ends = [
            (e, e.head if e.tail == v else e.tail)
            for e, _ in g.incident_ends(v)
            if e.id not in loop_ids
        ]
        return iter(sorted(ends, key=lambda t: t[0].id))

    index: dict[str, int] = {}
    low: dict[str, int] = {}
    counter = 0
    estack: list[str] = []
    used_edges: set[str] = set()

    for root in g.vertices:
        if root in index:
            continue
        index[root] = low[root] = counter
        counter += 1
        # frames: (vertex, id of the tree edge into it, end iterator)
        stack: list[tuple[str, Optional[str], object]] = [
            (root, None, neighbours(root))
        ]
        while stack:
            v, via, it = stack[-1]
            advanced = False
            for e, w in it:  # type: ignore[assignment]
                if e.id in used_edges:
                    continue
                used_edges.add(e.id)
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    estack.append(e.id)
                    stack.append((w, e.id, neighbours(w)))
                    advanced = True
                    break
                # w already visited and the edge unseen: w is an ancestor
                estack.append(e.id)
                low[v] = min(low[v], index[w])
            if advanced:
                continue
            stack.pop()
            if stack:
                parent = stack[-1][0]
                low[parent] = min(low[parent], low[v])
                if low[v] >= index[parent]:
                    block: list[str] = []
                    while estack:
                        eid = estack.pop()
                        block.append(eid)
                        if eid == via:
                            break
                    if block:
                        out.append(frozenset(block))
    out.sort(key=min)
    return out


@dataclass(frozen=True)
class Walk:
    """A walk in a graph: a start vertex and (edge id, direction) steps.

    Direction +1 traverses tail to head, -1 the other way.  Construction
    checks that consecutive steps are incident.
    """

    graph: ColoredGraph
    start: str
    steps: tuple[tuple[str, int], ...]

    def __post_init__(self):
        at = self.start
        if at not in set(self.graph.vertices):
            raise StructureError(f"walk starts at unknown vertex {at!r}")
        for eid, sign in self.steps:
            e = self.graph.edge(eid)
            a, b = (e.tail, e.head) if sign == +1 else (e.head, e.tail)
            if a != at:
                raise StructureError(f"walk step {eid!r} not incident at {at!r}")
            at = b

    def vertices(self) -> tuple[str, ...]:
        out = [self.start]
        at = self.start
        for eid, sign in self.steps:
            e = self.graph.edge(eid)
            at = e.head if sign == +1 else e.tail
            out.append(at)
        return tuple(out)

    @property
    def end(self) -> str:
        return self.vertices()[-1]

    def is_closed(self) -> bool:
        return self.end == self.start

    def is_simple_path(self) -> bool:
        vs = self.vertices()
        return len(set(vs)) == len(vs)

    def is_simple_cycle(self) -> bool:
        if not self.is_closed() or not self.steps:
            return False
        vs = self.vertices()[:-1]
        if len(set(vs)) != len(vs):
            return False
        eids = [eid for eid, _ in self.steps]
        return len(set(eids)) == len(eids)

    def word(self) -> tuple[tuple[str, int], ...]:
        """The color-and-exponent sequence this walk reads off."""
        return tuple(
            (self.graph.edge(eid).color, sign) for eid, sign in self.steps
        )
