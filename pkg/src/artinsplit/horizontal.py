"""Level graphs of the presentation complex and the free splitting.

For an oriented defining graph the presentation complex has a vertical
height function; its level sets at heights 0, 1/2 and 1/4 are graphs:

* x0: one loop per defining edge (the bouquet of relation generators),
* x_half: the defining graph with every edge doubled,
* x_quarter: a double cover of x_half whose vertices are signed copies
  a+ and a- of the defining vertices,
* the collapsed quarter graph: x_quarter with one parallel family per
  edge collapsed and the remaining edges subdivided, so that each color
  maps onto its loop combinatorially.

The fundamental groups of these graphs are the vertex and edge groups of
the splitting certified by `compute_splitting`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .defining_graph import (
    DefiningGraph,
    all_labels_even,
    is_bipartite,
    is_connected,
    require_valid,
)
from .multigraph import (
    ColoredGraph,
    DisconnectedError,
    Edge,
    GraphMap,
    bouquet,
    connected_components,
    free_rank,
    is_degree_n_cover,
    is_immersion,
)
from .orientation import (
    AdmissibilityVerdict,
    WitnessCycle,
    is_admissible,
    plus,
    minus,
)


class InadmissibleOrientation(ValueError):
    """An operation requiring admissibility got an inadmissible orientation."""

    def __init__(self, verdict: AdmissibilityVerdict):
        self.verdict = verdict
        super().__init__(verdict.reason or "orientation is not admissible")


@dataclass(frozen=True)
class HorizontalFamily:
    """The three level graphs, the covering map between the upper two, and
    the deck involution of the cover as a vertex swap."""

    x0: ColoredGraph
    x_half: ColoredGraph
    x_quarter: ColoredGraph
    cover: GraphMap
    deck: dict[str, str]


def build_family(g: DefiningGraph) -> HorizontalFamily:
    """Construct x0, x_half, x_quarter and the degree-2 cover between them.

    Only the parities of the labels matter here: an even edge lifts to two
    parallel families joining a+ to b- and a- to b+, an odd edge to the
    crossing family joining a+ to b+ and a- to b-.
    """
    require_valid(g, oriented=False)
    colors = [e.color for e in g.sorted_edges]
    x0 = bouquet(colors)

    half_vertices = list(g.vertices)
    half_edges = []
    q_vertices = [plus(v) for v in g.vertices] + [minus(v) for v in g.vertices]
    q_edges = []
    vmap: dict[str, str] = {}
    emap: dict[str, str] = {}
    deck: dict[str, str] = {}
    for v in g.vertices:
        vmap[plus(v)] = v
        vmap[minus(v)] = v
        deck[plus(v)] = minus(v)
        deck[minus(v)] = plus(v)
    for e in g.sorted_edges:
        c = e.color
        half_edges.append(Edge(f"xh:{c}:p", e.u, e.v, c))
        half_edges.append(Edge(f"xh:{c}:d", e.u, e.v, c))
        q_edges.append(Edge(f"xq:{c}:p+", plus(e.u), minus(e.v), c))
        q_edges.append(Edge(f"xq:{c}:p-", minus(e.u), plus(e.v), c))
        if e.label % 2 == 0:
            q_edges.append(Edge(f"xq:{c}:d+", plus(e.u), minus(e.v), c))
            q_edges.append(Edge(f"xq:{c}:d-", minus(e.u), plus(e.v), c))
        else:
            q_edges.append(Edge(f"xq:{c}:d+", plus(e.u), plus(e.v), c))
            q_edges.append(Edge(f"xq:{c}:d-", minus(e.u), minus(e.v), c))
        emap[f"xq:{c}:p+"] = f"xh:{c}:p"
        emap[f"xq:{c}:p-"] = f"xh:{c}:p"
        emap[f"xq:{c}:d+"] = f"xh:{c}:d"
        emap[f"xq:{c}:d-"] = f"xh:{c}:d"
    x_half = ColoredGraph(half_vertices, half_edges)
    x_quarter = ColoredGraph(q_vertices, q_edges)
    cover = GraphMap(x_quarter, x_half, vmap, emap)
    cover.check()
    return HorizontalFamily(
        x0=x0, x_half=x_half, x_quarter=x_quarter, cover=cover, deck=deck
    )


def deck_involution_on_quarter(family: HorizontalFamily) -> GraphMap:
    """The sign swap of x_quarter as a graph automorphism.

    Only meaningful as the edge-group twist in the amalgam case, so a
    disconnected x_quarter is refused.
    """
    if len(connected_components(family.x_quarter)) != 1:
        raise DisconnectedError(
            "x_quarter is disconnected; the splitting is an HNN extension "
            "and has no single-component involution"
        )
    emap = {}
    for e in family.x_quarter.edges:
        swapped = e.id[:-1] + ("-" if e.id.endswith("+") else "+")
        emap[e.id] = swapped
    m = GraphMap(family.x_quarter, family.x_quarter, dict(family.deck), emap)
    m.check()
    return m


@dataclass(frozen=True)
class Segment:
    """A maximal run of collapsed-quarter edges covering one source edge.

    `edge_ids` follow the flow direction: every edge of the collapsed
    quarter graph maps onto its color's loop positively.
    """

    source_edge: str
    edge_ids: tuple[str, ...]
    start: str
    end: str

    @property
    def length(self) -> int:
        return len(self.edge_ids)


@dataclass(frozen=True)
class CollapsedQuarter:
    """x_quarter after collapsing one parallel family per edge and
    subdividing the rest; `rho` is the induced map onto the bouquet."""

    graph: ColoredGraph
    rho: GraphMap
    old_class: dict[str, str]
    new_vertices: tuple[str, ...]
    collapsed_quarter_edges: tuple[str, ...]
    segments: dict[str, tuple[Segment, ...]]
    admissible: bool
    witness: Optional[WitnessCycle]
    rho_immersion: bool

    def segment_lengths(self, color: str) -> tuple[int, ...]:
        return tuple(sorted(s.length for s in self.segments[color]))


def build_collapsed(g: DefiningGraph) -> CollapsedQuarter:
    """Collapse-and-subdivide x_quarter into the graph immersing over x0.

    Per edge {a, b} with label M and tail t = iota (h the head): the
    parallel copy through t+ and h- collapses; for M = 2 both parallel
    copies collapse.  The doubled copies subdivide into:

    * M = 2m + 1: two runs of m edges (h+ to t+ and h- to t-), plus the
      surviving length-1 copy t- to h+; one (2m+1)-cycle in total.
    * M = 2: two length-1 loops, one at each collapsed class.
    * M = 2m >= 4: a closed run of m edges at the collapsed class and a
      run of m - 1 edges h+ to t-, closing through the surviving copy into
      an m-cycle; two m-cycles in total.

    The construction is performed for any valid orientation; the verdict
    and `rho_immersion` record whether it yields an immersion.
    """
    require_valid(g, oriented=True)
    verdict = is_admissible(g)

    # vertex classes of the collapse
    members: dict[str, list[str]] = {}
    uf_parent: dict[str, str] = {}
    quarterpoints = [plus(v) for v in g.vertices] + [
        minus(v) for v in g.vertices
    ]
    for q in quarterpoints:
        uf_parent[q] = q

    def find(x: str) -> str:
        while uf_parent[x] != x:
            uf_parent[x] = uf_parent[uf_parent[x]]
            x = uf_parent[x]
        return x

    collapsed_sources: list[str] = []
    for e in g.sorted_edges:
        pairs = []
        if e.label == 2:
            pairs = [
                (plus(e.u), minus(e.v), f"xq:{e.color}:p+"),
                (minus(e.u), plus(e.v), f"xq:{e.color}:p-"),
            ]
        else:
            t = e.iota
            assert t is not None
            h = e.other(t)
            side = "p+" if t == e.u else "p-"
            pairs = [(plus(t), minus(h), f"xq:{e.color}:{side}")]
        for a, b, src in pairs:
            collapsed_sources.append(src)
            ra, rb = find(a), find(b)
            if ra != rb:
                uf_parent[ra] = rb
    for q in quarterpoints:
        members.setdefault(find(q), []).append(q)
    old_class = {}
    class_name = {}
    for root, qs in members.items():
        name = "/".join(sorted(qs))
        class_name[root] = name
        for q in qs:
            old_class[q] = name

    vertices: set[str] = set(old_class.values())
    edges: list[Edge] = []
    new_vertices: list[str] = []
    segments: dict[str, tuple[Segment, ...]] = {}

    def add_run(source_edge: str, color: str, u: str, w: str, k: int) -> Segment:
        """k edges from u to w along the flow, subdividing source_edge."""
        chain = [u]
        for i in range(1, k):
            nv = f"xb:{color}:{source_edge.rsplit(':', 1)[1]}:{i}"
            chain.append(nv)
            vertices.add(nv)
            new_vertices.append(nv)
        chain.append(w)
        ids = []
        for i in range(k):
            eid = f"xb:{color}:{source_edge.rsplit(':', 1)[1]}:e{i + 1}"
            edges.append(Edge(eid, chain[i], chain[i + 1], color))
            ids.append(eid)
        return Segment(
            source_edge=source_edge, edge_ids=tuple(ids), start=u, end=w
        )

    for e in g.sorted_edges:
        c = e.color
        segs: list[Segment] = []
        if e.label == 2:
            ka = old_class[plus(e.u)]
            kb = old_class[minus(e.u)]
            segs.append(add_run(f"xq:{c}:d+", c, ka, ka, 1))
            segs.append(add_run(f"xq:{c}:d-", c, kb, kb, 1))
        else:
            t = e.iota
            assert t is not None
            h = e.other(t)
            m = e.label // 2
            surv_side = "p-" if t == e.u else "p+"
            surv = add_run(
                f"xq:{c}:{surv_side}",
                c,
                old_class[minus(t)],
                old_class[plus(h)],
                1,
            )
            segs.append(surv)
            if e.label % 2 == 1:
                segs.append(
                    add_run(
                        f"xq:{c}:d+", c,
                        old_class[plus(h)], old_class[plus(t)], m,
                    )
                )
                segs.append(
                    add_run(
                        f"xq:{c}:d-", c,
                        old_class[minus(h)], old_class[minus(t)], m,
                    )
                )
            else:
                closed_side = "d+" if t == e.u else "d-"
                open_side = "d-" if t == e.u else "d+"
                segs.append(
                    add_run(
                        f"xq:{c}:{closed_side}", c,
                        old_class[minus(h)], old_class[plus(t)], m,
                    )
                )
                segs.append(
                    add_run(
                        f"xq:{c}:{open_side}", c,
                        old_class[plus(h)], old_class[minus(t)], m - 1,
                    )
                )
        segments[c] = tuple(segs)

    graph = ColoredGraph(vertices, edges)
    x0 = bouquet([e.color for e in g.sorted_edges])
    rho = GraphMap(
        graph,
        x0,
        {v: "*" for v in graph.vertices},
        {e.id: f"x0:{e.color}" for e in graph.edges},
    )
    rho.check()
    return CollapsedQuarter(
        graph=graph,
        rho=rho,
        old_class=old_class,
        new_vertices=tuple(sorted(new_vertices)),
        collapsed_quarter_edges=tuple(sorted(collapsed_sources)),
        segments=segments,
        admissible=verdict.admissible,
        witness=verdict.witness,
        rho_immersion=is_immersion(rho),
    )


@dataclass(frozen=True)
class SplittingCertificate:
    """A free splitting of the group over free subgroups.

    Amalgam: F(rank_a) amalgamated with F(rank_b) over an edge group
    F(rank_c) sitting inside the second factor with index `index_c_in_b`;
    the deck involution of the quarter cover gives the twist between the
    two halves.  HNN: base F(rank_a) with the edge group F(rank_b)
    attached along its two embeddings into the base.
    """

    kind: str  # "amalgam" | "hnn"
    rank_a: int
    rank_b: int
    rank_c: Optional[int]
    index_c_in_b: Optional[int]

    def to_json_dict(self) -> dict:
        out: dict = {"kind": self.kind, "rank_a": self.rank_a,
                     "rank_b": self.rank_b}
        if self.kind == "amalgam":
            out["rank_c"] = self.rank_c
            out["index_c_in_b"] = self.index_c_in_b
        return out


def compute_splitting(g: DefiningGraph) -> SplittingCertificate:
    """Derive the splitting with exact ranks; cross-checked on the graphs.

    Amalgam case (some odd label, or non-bipartite graph): ranks |E|,
    1 - |V| + 2|E| and 1 - 2|V| + 4|E|.  HNN case (bipartite, all labels
    even): base of rank |E| with a rank 1 - |V| + 2|E| edge group attached
    along its two embeddings.
    """
    require_valid(g, oriented=True)
    if not is_connected(g):
        raise DisconnectedError(
            "the splitting requires a connected defining graph; analyze "
            "connected components separately"
        )
    verdict = is_admissible(g)
    if not verdict.admissible:
        raise InadmissibleOrientation(verdict)
    family = build_family(g)
    nv, ne = len(g.vertices), len(g.edges)
    rank_a = ne
    rank_b = 1 - nv + 2 * ne
    comps = connected_components(family.x_quarter)
    hnn = is_bipartite(g) and all_labels_even(g)
    assert (len(comps) == 2) == hnn
    assert free_rank(family.x0) == rank_a
    assert free_rank(family.x_half) == rank_b
    assert is_degree_n_cover(family.cover, 2)
    if hnn:
        for comp in comps:
            assert free_rank(comp) == rank_b
        return SplittingCertificate(
            kind="hnn",
            rank_a=rank_a,
            rank_b=rank_b,
            rank_c=None,
            index_c_in_b=None,
        )
    rank_c = 1 - 2 * nv + 4 * ne
    assert free_rank(family.x_quarter) == rank_c
    assert rank_c == 2 * rank_b - 1
    return SplittingCertificate(
        kind="amalgam",
        rank_a=rank_a,
        rank_b=rank_b,
        rank_c=rank_c,
        index_c_in_b=2,
    )
