"""Partial orientations and the admissibility criterion.

An orientation assigns to each edge of label >= 3 a tail endpoint (`iota`).
The obstruction to admissibility is an almost misdirected cycle: a closed
non-backtracking walk (a1, ..., an, a1) whose initial path (a1, ..., an)
can be directed so that consecutive edges strictly alternate, where label-2
edges may be directed freely and oriented edges must follow their iota.

The decision procedure works on the sign double cover of the defining
graph: each edge {a, b} lifts to {a+, b-} and {a-, b+}, and a lift {t+, h-}
is collapsed when iota = t, or when the label is 2 (then both lifts are
collapsed).  Misdirected paths correspond exactly to paths inside the
collapsed subgraph, which reduces admissibility to a forest test plus
connectivity patterns.  A bounded search over explicit closed walks,
`oracle_almost_misdirected`, provides an independent check.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .defining_graph import (
    Cycle,
    DefiningGraph,
    canonical_cycle,
    enumerate_cycles,
    require_valid,
)
from .multigraph import ColoredGraph, Edge


def plus(v: str) -> str:
    return v + "+"


def minus(v: str) -> str:
    return v + "-"


@dataclass(frozen=True)
class DoubleCoverGraph:
    """The sign double cover with per-lift collapse flags."""

    graph: ColoredGraph
    collapsed: frozenset[str]

    def collapsed_subgraph(self) -> ColoredGraph:
        return self.graph.restricted(self.collapsed)


def double_cover(g: DefiningGraph) -> DoubleCoverGraph:
    """Build the sign double cover of an oriented defining graph.

    The lift of {a, b} through a+ and b- has id "dc:<color>:p", the other
    "dc:<color>:m".  Lift {t+, h-} is flagged collapsed when iota is t or
    the label is 2.
    """
    require_valid(g, oriented=True)
    vertices = [plus(v) for v in g.vertices] + [minus(v) for v in g.vertices]
    edges = []
    collapsed = set()
    for e in g.sorted_edges:
        pid = f"dc:{e.color}:p"
        mid = f"dc:{e.color}:m"
        edges.append(Edge(pid, plus(e.u), minus(e.v), e.color))
        edges.append(Edge(mid, minus(e.u), plus(e.v), e.color))
        if e.label == 2:
            collapsed.add(pid)
            collapsed.add(mid)
        elif e.iota == e.u:
            collapsed.add(pid)
        else:
            collapsed.add(mid)
    return DoubleCoverGraph(
        ColoredGraph(vertices, edges), frozenset(collapsed)
    )


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a, b) -> bool:
        """Join the classes of a and b; False when already joined."""
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[ra] = rb
        return True


def has_collapsed_cycle(dc: DoubleCoverGraph) -> bool:
    """True when the collapsed lifts contain a cycle (are not a forest)."""
    uf = _UnionFind(dc.graph.vertices)
    for eid in sorted(dc.collapsed):
        e = dc.graph.edge(eid)
        if not uf.union(e.tail, e.head):
            return True
    return False


@dataclass(frozen=True)
class WitnessCycle:
    """A closed walk of the defining graph with a direction extension.

    `vertices` lists the walk (v1, ..., vn); the closing edge returns to v1.
    `tails[i]` directs edge (v[i], v[i+1]); the final entry belongs to the
    closing edge and is None when that edge has no orientation of its own.
    """

    vertices: tuple[str, ...]
    tails: tuple[Optional[str], ...]

    def __len__(self) -> int:
        return len(self.vertices)

    def canonical(self) -> Cycle:
        return canonical_cycle(self.vertices)


def check_witness(g: DefiningGraph, w: WitnessCycle) -> bool:
    """Re-verify a witness: a genuine cycle whose initial path misdirects."""
    return _expression_misdirects(g, w.vertices) is not None


def _is_cycle_expression(g: DefiningGraph, seq: tuple[str, ...]) -> bool:
    n = len(seq)
    if n < 3:
        return False
    for i in range(n):
        if g.edge_between(seq[i], seq[(i + 1) % n]) is None:
            return False
        if seq[(i + 2) % n] == seq[i]:
            return False  # backtracking
    return True


def _expression_misdirects(
    g: DefiningGraph, seq: tuple[str, ...]
) -> Optional[tuple[Optional[str], ...]]:
    """Tails making the path (seq[0], ..., seq[-1]) alternate, if any.

    Checks the fixed expression only; callers rotate.  Returns a full tails
    tuple including the closing edge's own iota.
    """
    if not _is_cycle_expression(g, seq):
        return None
    n = len(seq)
    for first_forward in (True, False):
        tails: list[Optional[str]] = []
        ok = True
        for i in range(n - 1):
            e = g.edge_between(seq[i], seq[i + 1])
            assert e is not None
            forward = first_forward if i % 2 == 0 else not first_forward
            want_tail = seq[i] if forward else seq[i + 1]
            if e.label >= 3 and e.iota != want_tail:
                ok = False
                break
            tails.append(want_tail)
        if ok:
            closing = g.edge_between(seq[-1], seq[0])
            assert closing is not None
            tails.append(closing.iota)
            return tuple(tails)
    return None


def oracle_almost_misdirected(
    g: DefiningGraph, max_len: int = 10
) -> Optional[WitnessCycle]:
    """Search closed walks up to max_len for an almost misdirected one.

    Exhaustive within the length bound, and independent of the double-cover
    criterion.  Returns the first witness in a deterministic order, or None.
    """
    require_valid(g, oriented=True)
    for cyc in enumerate_cycles(g, max_len):
        n = len(cyc)
        for direction in (cyc, tuple(reversed(cyc))):
            for shift in range(n):
                expr = direction[shift:] + direction[:shift]
                tails = _expression_misdirects(g, expr)
                if tails is not None:
                    return WitnessCycle(vertices=expr, tails=tails)
    return None


@dataclass(frozen=True)
class AdmissibilityVerdict:
    admissible: bool
    witness: Optional[WitnessCycle] = None
    reason: Optional[str] = None


def _components(dc: DoubleCoverGraph) -> _UnionFind:
    uf = _UnionFind(dc.graph.vertices)
    for eid in sorted(dc.collapsed):
        e = dc.graph.edge(eid)
        uf.union(e.tail, e.head)
    return uf


def is_admissible(g: DefiningGraph) -> AdmissibilityVerdict:
    """Decide admissibility of (graph, iota); inadmissible verdicts carry a
    witness cycle that re-checks as almost misdirected.

    The criterion: the collapsed subgraph of the sign double cover is a
    forest, no vertex has its two lifts connected inside it, and for no edge
    are the endpoints of its uncollapsed lift connected.
    """
    require_valid(g, oriented=True)
    dc = double_cover(g)
    if has_collapsed_cycle(dc):
        return AdmissibilityVerdict(
            admissible=False,
            witness=_witness_from_collapsed_cycle(g, dc),
            reason="collapsed lifts contain a cycle",
        )
    uf = _components(dc)
    candidates: list[tuple[int, str, str, str]] = []
    for v in sorted(g.vertices):
        if uf.find(minus(v)) == uf.find(plus(v)):
            candidates.append((0, v, minus(v), plus(v)))
    for e in g.sorted_edges:
        if e.label == 2:
            continue
        pid, mid = f"dc:{e.color}:p", f"dc:{e.color}:m"
        if pid not in dc.collapsed and uf.find(plus(e.u)) == uf.find(minus(e.v)):
            candidates.append((1, e.color, plus(e.u), minus(e.v)))
        if mid not in dc.collapsed and uf.find(minus(e.u)) == uf.find(plus(e.v)):
            candidates.append((1, e.color, minus(e.u), plus(e.v)))
    if not candidates:
        return AdmissibilityVerdict(admissible=True)
    witness = _witness_from_patterns(g, dc, candidates)
    reason = (
        "two lifts of one vertex are joined by collapsed lifts"
        if candidates[0][0] == 0
        else "an uncollapsed lift closes a collapsed path"
    )
    return AdmissibilityVerdict(admissible=False, witness=witness, reason=reason)


def _collapsed_adjacency(dc: DoubleCoverGraph) -> dict[str, list[tuple[str, str]]]:
    adj: dict[str, list[tuple[str, str]]] = {v: [] for v in dc.graph.vertices}
    for eid in sorted(dc.collapsed):
        e = dc.graph.edge(eid)
        adj[e.tail].append((e.head, eid))
        adj[e.head].append((e.tail, eid))
    return adj


def _shortest_collapsed_path(
    dc: DoubleCoverGraph, src: str, dst: str
) -> Optional[list[str]]:
    """Vertex list of a shortest path through collapsed lifts (BFS)."""
    adj = _collapsed_adjacency(dc)
    prev: dict[str, Optional[str]] = {src: None}
    queue = [src]
    while queue:
        nxt: list[str] = []
        for v in queue:
            for w, _ in sorted(adj[v]):
                if w not in prev:
                    prev[w] = v
                    nxt.append(w)
        if dst in prev:
            break
        queue = nxt
    if dst not in prev:
        return None
    path = [dst]
    while prev[path[-1]] is not None:
        path.append(prev[path[-1]])  # type: ignore[arg-type]
    path.reverse()
    return path


def _project(quarter: str) -> tuple[str, int]:
    """Split a double-cover vertex name into (base name, sign)."""
    return quarter[:-1], +1 if quarter.endswith("+") else -1


def _tails_from_lift_path(path: list[str]) -> list[str]:
    """Direction extension read off a path of collapsed lifts.

    Traversing a collapsed lift, the endpoint with positive sign is the
    tail of the projected edge.
    """
    tails = []
    for a, b in zip(path, path[1:]):
        na, sa = _project(a)
        nb, _ = _project(b)
        tails.append(na if sa == +1 else nb)
    return tails


def _strip_wrap_backtracking(
    g: DefiningGraph, path: list[str]
) -> list[str]:
    """Shrink a closed lift projection until its wrap-around is immersed.

    `path` runs between the two lifts of one vertex; if its projection
    re-uses the first edge as the last, peel both ends, which exposes the
    same situation one vertex further in.
    """
    while len(path) >= 5:
        first, _ = _project(path[1])
        last, _ = _project(path[-2])
        if first != last:
            break
        path = path[1:-1]
    return path


def _witness_from_patterns(
    g: DefiningGraph,
    dc: DoubleCoverGraph,
    candidates: list[tuple[int, str, str, str]],
) -> WitnessCycle:
    best: Optional[tuple[int, int, str, list[str], int]] = None
    for rank, (kind, label_key, src, dst) in enumerate(sorted(candidates)):
        path = _shortest_collapsed_path(dc, src, dst)
        assert path is not None
        entry = (len(path), kind, label_key, path, rank)
        if best is None or entry[:2] < best[:2]:
            best = entry
    assert best is not None
    _, kind, _, path, _ = best
    if kind == 0:
        path = _strip_wrap_backtracking(g, path)
        vertices = tuple(_project(q)[0] for q in path[:-1])
        tails = _tails_from_lift_path(path)
        # last path edge closes the cycle; its tail entry is already there
        return WitnessCycle(vertices=vertices, tails=tuple(tails))
    vertices = tuple(_project(q)[0] for q in path)
    tails = _tails_from_lift_path(path)
    closing = g.edge_between(vertices[-1], vertices[0])
    assert closing is not None
    tails.append(closing.iota)
    return WitnessCycle(vertices=vertices, tails=tuple(tails))


def _witness_from_collapsed_cycle(
    g: DefiningGraph, dc: DoubleCoverGraph
) -> WitnessCycle:
    cycle = _find_collapsed_cycle(dc)
    by_name: dict[str, list[int]] = {}
    for i, q in enumerate(cycle):
        by_name.setdefault(_project(q)[0], []).append(i)
    split = None
    for name in sorted(by_name):
        if len(by_name[name]) == 2:
            i, j = by_name[name]
            if {_project(cycle[i])[1], _project(cycle[j])[1]} == {+1, -1}:
                split = (i, j)
                break
    n = len(cycle)
    if split is not None:
        i, j = split
        arc1 = cycle[i : j + 1]
        arc2 = cycle[j:] + cycle[: i + 1]
        path = list(arc1 if len(arc1) <= len(arc2) else arc2)
        path = _strip_wrap_backtracking(g, path)
        vertices = tuple(_project(q)[0] for q in path[:-1])
        return WitnessCycle(
            vertices=vertices, tails=tuple(_tails_from_lift_path(path))
        )
    # no vertex meets the cycle in both signs: the projection is a genuine
    # even misdirected cycle
    vertices = tuple(_project(q)[0] for q in cycle)
    tails = _tails_from_lift_path(list(cycle) + [cycle[0]])
    return WitnessCycle(vertices=vertices, tails=tuple(tails))


def _find_collapsed_cycle(dc: DoubleCoverGraph) -> tuple[str, ...]:
    """Vertices of some simple cycle inside the collapsed subgraph."""
    adj = _collapsed_adjacency(dc)
    seen: set[str] = set()
    for root in sorted(dc.graph.vertices):
        if root in seen or not adj[root]:
            continue
        parent_edge: dict[str, Optional[str]] = {root: None}
        parent: dict[str, Optional[str]] = {root: None}
        stack = [root]
        order = []
        while stack:
            v = stack.pop()
            if v in seen:
                continue
            seen.add(v)
            order.append(v)
            for w, eid in sorted(adj[v]):
                if eid == parent_edge[v]:
                    continue
                if w in seen:
                    # back edge: walk tree paths to the common ancestor
                    pa: list[str] = [v]
                    while parent[pa[-1]] is not None:
                        pa.append(parent[pa[-1]])  # type: ignore[arg-type]
                    pb: list[str] = [w]
                    while parent[pb[-1]] is not None:
                        pb.append(parent[pb[-1]])  # type: ignore[arg-type]
                    sa, sb = set(pa), set(pb)
                    meet = next(x for x in pa if x in sb)
                    ca = pa[: pa.index(meet) + 1]
                    cb = pb[: pb.index(meet) + 1]
                    return tuple(ca + list(reversed(cb))[1:-1])
                parent[w] = v
                parent_edge[w] = eid
                stack.append(w)
    raise AssertionError("no cycle in collapsed subgraph")


class SearchSpaceError(ValueError):
    """The orientation search space is too large to explore."""


MAX_ORIENTABLE_EDGES = 24


def find_admissible_orientation(
    g: DefiningGraph,
) -> Optional[dict[tuple[str, str], str]]:
    """Backtracking search for an admissible orientation, or None.

    Edges are assigned in (label, endpoints) order.  A partial assignment is
    abandoned as soon as its collapsed lifts contain a cycle, connect the
    two lifts of a vertex, or connect a lift pair that any completion would
    be forced to either close into a cycle or leave as a failing pattern.
    Since collapsed subgraphs only grow, all three conditions are permanent.
    """
    require_valid(g, oriented=False)
    orientable = sorted(
        (e for e in g.edges if e.label >= 3), key=lambda e: (e.label, e.key)
    )
    if len(orientable) > MAX_ORIENTABLE_EDGES:
        raise SearchSpaceError(
            f"{len(orientable)} orientable edges exceed the search bound "
            f"{MAX_ORIENTABLE_EDGES}"
        )

    assignment: dict[tuple[str, str], str] = {}

    def viable() -> bool:
        trial = g.with_orientation(assignment)
        uf = _UnionFind(
            [plus(v) for v in g.vertices] + [minus(v) for v in g.vertices]
        )
        for e in trial.sorted_edges:
            lifts = []
            if e.label == 2:
                lifts = [(plus(e.u), minus(e.v)), (minus(e.u), plus(e.v))]
            elif e.key in assignment:
                t = assignment[e.key]
                h = e.other(t)
                lifts = [(plus(t), minus(h))]
            for a, b in lifts:
                if not uf.union(a, b):
                    return False  # forest violated
        for v in g.vertices:
            if uf.find(plus(v)) == uf.find(minus(v)):
                return False
        for e in trial.sorted_edges:
            if e.label == 2:
                continue
            t = assignment.get(e.key)
            if t != e.u and uf.find(plus(e.u)) == uf.find(minus(e.v)):
                return False
            if t != e.v and uf.find(minus(e.u)) == uf.find(plus(e.v)):
                return False
        return True

    def search(i: int) -> bool:
        if not viable():
            return False
        if i == len(orientable):
            return True
        e = orientable[i]
        for choice in (e.u, e.v):
            assignment[e.key] = choice
            if search(i + 1):
                return True
            del assignment[e.key]
        return False

    if search(0):
        return dict(assignment)
    return None
