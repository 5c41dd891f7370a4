"""Stallings fiber products, monochromality, and oppressive word sets.

Two immersions over the same bouquet pull back to their fiber product: the
graph whose vertices are pairs of vertices and whose edges are pairs of
equally-colored edges matched tail-to-tail.  Its connected components away
from the diagonal describe intersections of conjugates of the subgroups the
immersions represent; downstream certification asks whether every simple
cycle in those components is monochrome.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .multigraph import (
    ColoredGraph,
    Edge,
    GraphMap,
    StructureError,
    Walk,
    blocks,
    connected_components,
    free_rank,
    is_immersion,
)


class FiberInputError(ValueError):
    """The maps handed to fiber_product are unusable (wrong target, or not
    immersions, so the pullback would not represent subgroup intersections)."""


def _pair(u: str, v: str) -> str:
    return f"{u}|{v}"


@dataclass(frozen=True)
class FiberProduct:
    """The fiber product graph together with its component inventory.

    `components` is ordered by smallest vertex id.  `classification` runs in
    parallel with it; each entry is one of "diagonal", "tree", or
    "cycle-bearing".  Diagonal components exist only for a self-fiber, where
    the diagonal pairs (v, v) form full components isomorphic to the factor.
    """

    graph: ColoredGraph
    components: tuple[ColoredGraph, ...]
    classification: tuple[str, ...]
    diagonal_components: tuple[int, ...]
    proj1: GraphMap
    proj2: GraphMap

    @property
    def diagonal_component(self) -> Optional[int]:
        """The diagonal component id, when there is exactly one.

        None for a fiber of two different maps.  A disconnected self-fiber
        factor has one diagonal component per factor component; asking for
        "the" one is then ambiguous and raises StructureError.
        """
        if not self.diagonal_components:
            return None
        if len(self.diagonal_components) > 1:
            raise StructureError(
                "several diagonal components; use diagonal_components"
            )
        return self.diagonal_components[0]

    def nontrivial_components(self) -> tuple[int, ...]:
        """Indices of off-diagonal components containing at least one cycle."""
        return tuple(
            i
            for i, kind in enumerate(self.classification)
            if kind == "cycle-bearing"
        )

    def component_of_vertex(self, v: str) -> int:
        for i, comp in enumerate(self.components):
            if v in set(comp.vertices):
                return i
        raise StructureError(f"vertex {v!r} not in the fiber product")

    def branching_vertices(self, index: int) -> tuple[str, ...]:
        """Vertices of valence at least 3 in the given component."""
        comp = self.components[index]
        return tuple(v for v in comp.vertices if comp.valence(v) >= 3)


def fiber_product(rho1: GraphMap, rho2: GraphMap) -> FiberProduct:
    """Pull two bouquet immersions back to their fiber product.

    Vertices are all pairs (both maps hit the single bouquet vertex); edges
    are pairs of edges with the same image loop, matched positively since
    edge maps preserve direction.
    """
    if rho1.target != rho2.target:
        raise FiberInputError("the two maps have different targets")
    if not rho1.target.is_bouquet():
        raise FiberInputError("fiber products are taken over a bouquet")
    if not is_immersion(rho1) or not is_immersion(rho2):
        raise FiberInputError("fiber products require immersions")
    g1, g2 = rho1.source, rho2.source

    vertices = []
    vmap1: dict[str, str] = {}
    vmap2: dict[str, str] = {}
    for u in g1.vertices:
        for v in g2.vertices:
            p = _pair(u, v)
            vertices.append(p)
            vmap1[p] = u
            vmap2[p] = v

    by_loop: dict[str, list[Edge]] = {}
    for e in g2.edges:
        by_loop.setdefault(rho2.edge_map[e.id], []).append(e)
    edges = []
    emap1: dict[str, str] = {}
    emap2: dict[str, str] = {}
    for e1 in g1.edges:
        for e2 in by_loop.get(rho1.edge_map[e1.id], ()):
            eid = _pair(e1.id, e2.id)
            edges.append(
                Edge(
                    eid,
                    _pair(e1.tail, e2.tail),
                    _pair(e1.head, e2.head),
                    rho1.edge_image(e1.id).color,
                )
            )
            emap1[eid] = e1.id
            emap2[eid] = e2.id

    graph = ColoredGraph(vertices, edges)
    comps = tuple(connected_components(graph))

    diag_vertices: set[str] = set()
    if g1 == g2 and dict(rho1.edge_map) == dict(rho2.edge_map):
        diag_vertices = {_pair(v, v) for v in g1.vertices}
    diagonal = []
    classification = []
    for i, comp in enumerate(comps):
        if diag_vertices & set(comp.vertices):
            diagonal.append(i)
            classification.append("diagonal")
        elif len(comp.edges) >= len(comp.vertices):
            classification.append("cycle-bearing")
        else:
            classification.append("tree")

    proj1 = GraphMap(graph, g1, vmap1, emap1)
    proj2 = GraphMap(graph, g2, vmap2, emap2)
    proj1.check()
    proj2.check()
    return FiberProduct(
        graph=graph,
        components=comps,
        classification=tuple(classification),
        diagonal_components=tuple(diagonal),
        proj1=proj1,
        proj2=proj2,
    )


@dataclass(frozen=True)
class MonochromeVerdict:
    """Whether every simple cycle off the diagonal uses a single color.

    When not, `witness` is a simple cycle of the fiber graph using at least
    two colors and `witness_component` locates it.
    """

    all_monochrome: bool
    witness: Optional[Walk] = None
    witness_component: Optional[int] = None

    def witness_colors(self) -> tuple[str, ...]:
        if self.witness is None:
            return ()
        return tuple(sorted({c for c, _ in self.witness.word()}))


def monochrome_check(fp: FiberProduct) -> MonochromeVerdict:
    """Decide monochromality block by block.

    Two distinct edges lie on a common simple cycle exactly when they share
    a biconnected block, so a mixed simple cycle exists in some nontrivial
    component exactly when one of its blocks carries two colors.  A mixed
    block yields an explicit witness cycle through two differently colored
    edges.
    """
    for idx in fp.nontrivial_components():
        comp = fp.components[idx]
        for block in blocks(comp):
            cols = {comp.edge(eid).color for eid in block}
            if len(cols) < 2:
                continue
            e1 = comp.edge(min(block))
            e2 = comp.edge(
                min(eid for eid in block if comp.edge(eid).color != e1.color)
            )
            witness = _cycle_through(comp, block, e1, e2)
            witness = Walk(fp.graph, witness.start, witness.steps)
            assert witness.is_simple_cycle()
            return MonochromeVerdict(
                all_monochrome=False,
                witness=witness,
                witness_component=idx,
            )
    return MonochromeVerdict(all_monochrome=True)


def _step(e: Edge, from_vertex: str) -> tuple[str, int]:
    """The step traversing e away from one of its endpoints."""
    if e.tail == from_vertex:
        return (e.id, +1)
    if e.head == from_vertex:
        return (e.id, -1)
    raise StructureError(f"edge {e.id!r} not incident to {from_vertex!r}")


def _reverse_steps(steps: Sequence[tuple[str, int]]) -> list[tuple[str, int]]:
    return [(eid, -sign) for eid, sign in reversed(steps)]


def _bfs_steps(
    g: ColoredGraph,
    src: str,
    dst: str,
    banned_vertices: set[str],
    banned_edges: set[str],
) -> Optional[list[tuple[str, int]]]:
    """Steps of a shortest path src -> dst avoiding the banned items."""
    if src == dst:
        return []
    prev: dict[str, tuple[str, str, int]] = {}
    seen = {src}
    frontier = [src]
    while frontier:
        nxt = []
        for v in frontier:
            for e, _ in sorted(g.incident_ends(v), key=lambda t: t[0].id):
                if e.id in banned_edges:
                    continue
                w = e.head if e.tail == v else e.tail
                if w in seen or w in banned_vertices:
                    continue
                seen.add(w)
                prev[w] = (v, e.id, +1 if e.tail == v else -1)
                if w == dst:
                    steps = []
                    cur = w
                    while cur != src:
                        pv, eid, sign = prev[cur]
                        steps.append((eid, sign))
                        cur = pv
                    steps.reverse()
                    return steps
                nxt.append(w)
        frontier = nxt
    return None


def _cycle_through(
    g: ColoredGraph, block: frozenset[str], e1: Edge, e2: Edge
) -> Walk:
    """A simple cycle of the block through both of the given edges.

    One exists because any two edges of a biconnected block lie on a common
    simple cycle.  Three shapes: the edges are parallel, share one endpoint,
    or are disjoint (then joined by two vertex-disjoint paths).
    """
    sub = g.restricted(block)
    ends1 = {e1.tail, e1.head}
    ends2 = {e2.tail, e2.head}
    if ends1 == ends2:
        steps = [_step(e1, e1.tail), _step(e2, e1.head)]
        return Walk(g, e1.tail, tuple(steps))
    shared = ends1 & ends2
    if shared:
        v = min(shared)
        x = (ends1 - {v}).pop()
        y = (ends2 - {v}).pop()
        mid = _bfs_steps(sub, x, y, {v}, {e1.id, e2.id})
        assert mid is not None, "block not biconnected"
        steps = [_step(e1, v)] + mid + [_step(e2, y)]
        return Walk(g, v, tuple(steps))
    paths = _two_disjoint_paths(
        sub, (e1.tail, e1.head), (e2.tail, e2.head), {e1.id, e2.id}
    )
    assert paths is not None, "block not biconnected"
    sink_from_head, steps_from_head = paths[e1.head]
    _, steps_from_tail = paths[e1.tail]
    steps = (
        [(e1.id, +1)]
        + steps_from_head
        + [_step(e2, sink_from_head)]
        + _reverse_steps(steps_from_tail)
    )
    return Walk(g, e1.tail, tuple(steps))


def _two_disjoint_paths(
    g: ColoredGraph,
    sources: tuple[str, str],
    sinks: tuple[str, str],
    banned_edges: set[str],
) -> Optional[dict[str, tuple[str, list[tuple[str, int]]]]]:
    """Two vertex-disjoint paths joining the sources to the sinks, one each.

    Unit-capacity max flow on the split digraph: every vertex and every
    usable edge becomes a capacity-one arc, edges usable in either
    direction.  Returns {source: (sink, steps)} or None when no two such
    paths exist.  Sources and sinks are assumed pairwise distinct vertices.
    """
    S = ("S", "")
    T = ("T", "")
    cap: dict[tuple, int] = {}
    orig: dict[tuple, int] = {}

    def arc(a: tuple, b: tuple) -> None:
        cap[(a, b)] = cap.get((a, b), 0) + 1
        orig[(a, b)] = orig.get((a, b), 0) + 1
        cap.setdefault((b, a), 0)
        orig.setdefault((b, a), 0)

    for v in g.vertices:
        arc(("i", v), ("o", v))
    for e in g.edges:
        if e.id in banned_edges or e.tail == e.head:
            continue
        arc(("en", e.id), ("ex", e.id))
        arc(("o", e.tail), ("en", e.id))
        arc(("o", e.head), ("en", e.id))
        arc(("ex", e.id), ("i", e.tail))
        arc(("ex", e.id), ("i", e.head))
    for s in sources:
        arc(S, ("i", s))
    for t in sinks:
        arc(("o", t), T)

    adj: dict[tuple, list[tuple]] = {}
    for a, b in cap:
        adj.setdefault(a, []).append(b)
    for a in adj:
        adj[a].sort()

    pushed = 0
    for _ in range(2):
        prev: dict[tuple, tuple] = {}
        seen = {S}
        frontier = [S]
        reached = False
        while frontier and not reached:
            nxt = []
            for a in frontier:
                for b in adj.get(a, ()):
                    if b in seen or cap[(a, b)] <= 0:
                        continue
                    seen.add(b)
                    prev[b] = a
                    if b == T:
                        reached = True
                        break
                    nxt.append(b)
                if reached:
                    break
            frontier = nxt
        if not reached:
            break
        node = T
        while node != S:
            p = prev[node]
            cap[(p, node)] -= 1
            cap[(node, p)] += 1
            node = p
        pushed += 1
    if pushed < 2:
        return None

    net = {a: orig[a] - cap[a] for a in orig if orig[a] - cap[a] > 0}
    out: dict[str, tuple[str, list[tuple[str, int]]]] = {}
    for _ in range(2):
        trail = [S]
        node = S
        while node != T:
            nbr = min(b for (a, b) in net if a == node)
            net[(node, nbr)] -= 1
            if net[(node, nbr)] == 0:
                del net[(node, nbr)]
            trail.append(nbr)
            node = nbr
        source = trail[1][1]
        sink = trail[-2][1]
        steps: list[tuple[str, int]] = []
        for i in range(3, len(trail) - 2, 4):
            eid = trail[i][1]
            at = trail[i - 1][1]
            e = g.edge(eid)
            steps.append((eid, +1 if e.tail == at else -1))
        out[source] = (sink, steps)
    return out


def fill_rank_check(component: ColoredGraph) -> bool:
    """Whether the simple monochrome cycles span the whole cycle space.

    The monochrome simple cycles of a graph are exactly the simple cycles
    of its single-color subgraphs, and the simple cycles of any graph span
    its cycle space, so the span in question is the sum of the per-color
    cycle spaces.  Each is generated by fundamental cycles of a spanning
    forest of that color; comparing the mod-2 span of those against the
    free rank decides the question without enumerating cycles.
    """
    rank = free_rank(component)
    if rank == 0:
        return True

    tree_edges = _spanning_forest(component.edges)
    chord_bit = {
        e.id: i
        for i, e in enumerate(
            e for e in component.edges if e.id not in tree_edges
        )
    }

    vectors = []
    for color in component.colors():
        sub_edges = [e for e in component.edges if e.color == color]
        sub_tree = _spanning_forest(sub_edges)
        forest = ColoredGraph(
            {v for e in sub_edges for v in (e.tail, e.head)},
            [e for e in sub_edges if e.id in sub_tree],
        )
        for chord in sub_edges:
            if chord.id in sub_tree:
                continue
            if chord.tail == chord.head:
                path: list[tuple[str, int]] = []
            else:
                path = _bfs_steps(forest, chord.head, chord.tail, set(), set())
                assert path is not None
            cycle_ids = {chord.id} | {eid for eid, _ in path}
            mask = 0
            for eid in cycle_ids:
                if eid in chord_bit:
                    mask |= 1 << chord_bit[eid]
            vectors.append(mask)

    basis: dict[int, int] = {}
    for mask in vectors:
        while mask:
            lead = mask.bit_length() - 1
            if lead in basis:
                mask ^= basis[lead]
            else:
                basis[lead] = mask
                break
    return len(basis) == rank


def _spanning_forest(edges: Sequence[Edge]) -> set[str]:
    """Ids of a spanning forest chosen greedily in edge-id order."""
    parent: dict[str, str] = {}

    def find(x: str) -> str:
        root = x
        while parent.get(root, root) != root:
            root = parent[root]
        while parent.get(x, x) != x:
            parent[x], x = root, parent[x]
        return root

    chosen: set[str] = set()
    for e in sorted(edges, key=lambda e: e.id):
        ru, rv = find(e.tail), find(e.head)
        if ru != rv:
            parent[ru] = rv
            chosen.add(e.id)
    return chosen


@dataclass(frozen=True)
class OppressiveWord:
    """One word of the oppressive set with the path pair that produced it."""

    word: tuple[tuple[str, int], ...]
    mu1: Walk
    mu2: Optional[Walk]


@dataclass(frozen=True)
class OppressiveSet:
    """All words read off admissible path pairs, one witness pair per word."""

    rho: GraphMap
    basepoint: str
    elements: tuple[OppressiveWord, ...]

    def words(self) -> tuple[tuple[tuple[str, int], ...], ...]:
        return tuple(el.word for el in self.elements)

    def is_empty(self) -> bool:
        return not self.elements


def oppressive_set(rho: GraphMap, y0: str) -> OppressiveSet:
    """Enumerate the oppressive words of an immersion at a basepoint.

    A word is the color sequence of mu1 followed by mu2, where mu1 is a
    nontrivial simple path from y0 ending at some y1 != y0, and mu2 is
    either empty or a simple path into y0 from some y2 with y2 != y1 and
    y2 != y0.  Reading any such word from y0 can never trace back to y0,
    because forward and backward lifts through an immersion are unique.
    The set is empty exactly when no nontrivial simple path leaves y0,
    which for a connected source means the map is an embedding.

    Simple paths are enumerated exhaustively, so this is intended for
    small graphs.  Each distinct word appears once, with the witness pair
    that is shortest in the enumeration order.
    """
    if not rho.target.is_bouquet():
        raise FiberInputError("oppressive sets are defined over a bouquet")
    if not is_immersion(rho):
        raise FiberInputError("oppressive sets require an immersion")
    if y0 not in set(rho.source.vertices):
        raise StructureError(f"basepoint {y0!r} not in the source")

    outward = _simple_paths_from(rho.source, y0)

    def word_of(walk: Walk) -> tuple[tuple[str, int], ...]:
        return tuple(
            (rho.edge_image(eid).color, sign) for eid, sign in walk.steps
        )

    best: dict[tuple, tuple[tuple, OppressiveWord]] = {}
    for mu1 in outward:
        y1 = mu1.end
        inward: list[Optional[Walk]] = [None]
        for back in outward:
            if back.end not in (y0, y1):
                inward.append(
                    Walk(rho.source, back.end, tuple(_reverse_steps(back.steps)))
                )
        for mu2 in inward:
            word = word_of(mu1)
            if mu2 is not None:
                word = word + word_of(mu2)
            key = (
                len(mu1.steps) + (len(mu2.steps) if mu2 else 0),
                mu1.steps,
                mu2.steps if mu2 else (),
            )
            if word not in best or key < best[word][0]:
                best[word] = (key, OppressiveWord(word, mu1, mu2))

    elements = tuple(
        best[w][1] for w in sorted(best, key=lambda w: (len(w), w))
    )
    return OppressiveSet(rho=rho, basepoint=y0, elements=elements)


def _simple_paths_from(g: ColoredGraph, y0: str) -> list[Walk]:
    """Every nontrivial simple path starting at y0, in search order."""
    out: list[Walk] = []
    steps: list[tuple[str, int]] = []
    visited = {y0}

    def extend(at: str) -> None:
        for e, _ in sorted(
            g.incident_ends(at), key=lambda t: (t[0].id, -t[1])
        ):
            w = e.head if e.tail == at else e.tail
            if w in visited:
                continue
            steps.append((e.id, +1 if e.tail == at else -1))
            visited.add(w)
            out.append(Walk(g, y0, tuple(steps)))
            extend(w)
            visited.discard(w)
            steps.pop()

    extend(y0)
    return out


@dataclass(frozen=True)
class TraceResult:
    """Outcome of following a word letter by letter from a base vertex.

    outcome is "closes" (full trace returning to the base), "exits" (full
    trace ending elsewhere; `vertex` says where), or "no-edge" (the letter
    at `failed_index` has no continuation at `vertex`).
    """

    outcome: str
    vertex: str
    failed_index: Optional[int] = None


def traces_word(
    Y: ColoredGraph, y0: str, word: Sequence[tuple[str, int]]
) -> TraceResult:
    """Follow a word of (color, direction) letters through Y from y0.

    Y must immerse into the bouquet of its own colors, so each letter has
    at most one continuation; a repeated choice raises StructureError.
    """
    if y0 not in set(Y.vertices):
        raise StructureError(f"base vertex {y0!r} not in the graph")
    at = y0
    for i, (color, sign) in enumerate(word):
        if sign == +1:
            candidates = [e for e in Y.out_edges(at) if e.color == color]
        else:
            candidates = [e for e in Y.in_edges(at) if e.color == color]
        if len(candidates) > 1:
            raise StructureError(
                f"two {color!r} edges leave {at!r}; the graph does not "
                "immerse in its bouquet"
            )
        if not candidates:
            return TraceResult(outcome="no-edge", vertex=at, failed_index=i)
        e = candidates[0]
        at = e.head if sign == +1 else e.tail
    if at == y0:
        return TraceResult(outcome="closes", vertex=at)
    return TraceResult(outcome="exits", vertex=at)
