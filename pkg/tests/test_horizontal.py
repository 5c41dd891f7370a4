import random

import pytest
from artinsplit import (
    DefiningGraph,
    DisconnectedError,
    InadmissibleOrientation,
    InvalidDefiningGraph,
    build_collapsed,
    build_family,
    compute_splitting,
    connected_components,
    deck_involution_on_quarter,
    free_rank,
    is_degree_n_cover,
    is_immersion,
)
from generators import random_admissible_graph


def single_edge(label, iota="a"):
    if label == 2:
        iota = None
    return DefiningGraph.build(["a", "b"], [("a", "b", label, iota)])


def triangle(labels=(3, 3, 3)):
    return DefiningGraph.build(
        ["a", "b", "c"],
        [
            ("a", "b", labels[0], "a"),
            ("b", "c", labels[1], "b"),
            ("a", "c", labels[2], "c"),
        ],
    )


SQUARE_EVEN = DefiningGraph.build(
    ["a", "b", "c", "d"],
    [
        ("a", "b", 4, "a"),
        ("b", "c", 4, "b"),
        ("c", "d", 4, "c"),
        ("a", "d", 6, "d"),
    ],
)


class TestFamily:
    def test_level_graph_sizes(self):
        g = triangle()
        fam = build_family(g)
        assert len(fam.x0.edges) == 3 and fam.x0.is_bouquet()
        assert len(fam.x_half.vertices) == 3
        assert len(fam.x_half.edges) == 6
        assert len(fam.x_quarter.vertices) == 6
        assert len(fam.x_quarter.edges) == 12

    def test_quarter_edge_families(self):
        fam = build_family(single_edge(3))
        by_id = {e.id: e for e in fam.x_quarter.edges}
        # the d family preserves signs, the p family exchanges them
        assert (by_id["xq:a-b:d+"].tail, by_id["xq:a-b:d+"].head) == ("a+", "b+")
        assert (by_id["xq:a-b:p+"].tail, by_id["xq:a-b:p+"].head) == ("a+", "b-")

    def test_cover_is_degree_two(self):
        for g in (triangle(), SQUARE_EVEN, single_edge(2)):
            fam = build_family(g)
            assert is_degree_n_cover(fam.cover, 2)

    def test_deck_involution_is_an_automorphism_over_the_cover(self):
        fam = build_family(triangle((4, 5, 6)))
        deck = deck_involution_on_quarter(fam)
        assert is_degree_n_cover(deck, 1)  # bijective on stars
        for v in fam.x_quarter.vertices:
            assert deck.vertex_map[deck.vertex_map[v]] == v
            assert fam.cover.vertex_map[deck.vertex_map[v]] == fam.cover.vertex_map[v]
        for e in fam.x_quarter.edges:
            assert fam.cover.edge_map[deck.edge_map[e.id]] == fam.cover.edge_map[e.id]

    def test_component_dichotomy(self):
        assert len(connected_components(build_family(SQUARE_EVEN).x_quarter)) == 2
        assert len(connected_components(build_family(triangle()).x_quarter)) == 1
        # bipartite but one odd label: connected
        path = DefiningGraph.build(
            ["a", "b", "c"], [("a", "b", 4, "a"), ("b", "c", 5, "b")]
        )
        assert len(connected_components(build_family(path).x_quarter)) == 1

    def test_partial_orientation_is_enough(self):
        bare = DefiningGraph.build(["a", "b"], [("a", "b", 5, None)])
        fam = build_family(bare)  # level graphs do not need iota
        assert len(fam.x_quarter.edges) == 4


class TestCollapsed:
    def test_odd_label_gives_one_long_cycle(self):
        for label in (3, 5, 7):
            col = build_collapsed(single_edge(label))
            m = (label - 1) // 2
            assert col.segment_lengths("a-b") == (1, m, m)
            comps = connected_components(col.graph)
            assert len(comps) == 1
            assert len(col.graph.edges) == label
            assert all(col.graph.valence(v) == 2 for v in col.graph.vertices)

    def test_even_label_gives_two_cycles(self):
        for label in (4, 6, 8):
            col = build_collapsed(single_edge(label))
            m = label // 2
            assert col.segment_lengths("a-b") == (1, m - 1, m)
            comps = connected_components(col.graph)
            assert len(comps) == 2
            assert sorted(len(c.edges) for c in comps) == [m, m]
            assert all(col.graph.valence(v) == 2 for v in col.graph.vertices)

    def test_label_two_gives_two_loops(self):
        col = build_collapsed(single_edge(2))
        assert sorted(set(col.old_class.values())) == ["a+/b-", "a-/b+"]
        assert all(e.tail == e.head for e in col.graph.edges)
        assert len(col.graph.edges) == 2

    def test_class_names_merge_collapsed_lift(self):
        col = build_collapsed(single_edge(5))
        assert col.old_class["a+"] == "a+/b-"
        assert col.old_class["b-"] == "a+/b-"
        assert col.old_class["a-"] == "a-"

    def test_rho_immerses_when_admissible(self):
        col = build_collapsed(triangle((5, 4, 4)))
        assert col.admissible and col.rho_immersion
        assert is_immersion(col.rho)
        for e in col.graph.edges:
            assert col.rho.edge_image(e.id).color == e.color

    def test_rho_fails_to_immerse_when_inadmissible(self):
        bad = DefiningGraph.build(
            ["a", "b", "c"],
            [("a", "b", 3, "a"), ("b", "c", 3, "b"), ("a", "c", 3, "a")],
        )
        col = build_collapsed(bad)
        assert not col.admissible
        assert col.witness is not None
        assert not col.rho_immersion

    def test_segments_tile_the_graph(self):
        rng = random.Random(31)
        for _ in range(15):
            g = random_admissible_graph(rng, max_vertices=5, max_extra_edges=2)
            col = build_collapsed(g)
            seen = []
            for segs in col.segments.values():
                for s in segs:
                    seen.extend(s.edge_ids)
            assert sorted(seen) == sorted(e.id for e in col.graph.edges)
            assert len(seen) == len(set(seen))


class TestSplitting:
    def test_triangle_ranks(self):
        cert = compute_splitting(triangle())
        assert (cert.kind, cert.rank_a, cert.rank_b, cert.rank_c) == (
            "amalgam", 3, 4, 7,
        )
        assert cert.index_c_in_b == 2

    def test_even_square_is_hnn(self):
        cert = compute_splitting(SQUARE_EVEN)
        assert cert.kind == "hnn"
        assert (cert.rank_a, cert.rank_b) == (4, 5)
        assert cert.rank_c is None and cert.index_c_in_b is None

    def test_path_ranks(self):
        path = DefiningGraph.build(
            ["a", "b", "c"], [("a", "b", 3, "a"), ("b", "c", 4, "b")]
        )
        cert = compute_splitting(path)
        assert (cert.kind, cert.rank_a, cert.rank_b, cert.rank_c) == (
            "amalgam", 2, 2, 3,
        )

    def test_inadmissible_orientation_refused(self):
        bad = DefiningGraph.build(
            ["a", "b", "c"],
            [("a", "b", 3, "a"), ("b", "c", 3, "b"), ("a", "c", 3, "a")],
        )
        with pytest.raises(InadmissibleOrientation) as e:
            compute_splitting(bad)
        assert e.value.verdict.witness is not None

    def test_disconnected_refused(self):
        g = DefiningGraph.build(
            ["a", "b", "c", "d"],
            [("a", "b", 3, "a"), ("c", "d", 3, "c")],
        )
        with pytest.raises(DisconnectedError):
            compute_splitting(g)

    def test_partial_orientation_refused(self):
        g = DefiningGraph.build(["a", "b"], [("a", "b", 3, None)])
        with pytest.raises(InvalidDefiningGraph):
            compute_splitting(g)

    def test_json_shape(self):
        amal = compute_splitting(triangle()).to_json_dict()
        assert amal == {
            "kind": "amalgam",
            "rank_a": 3,
            "rank_b": 4,
            "rank_c": 7,
            "index_c_in_b": 2,
        }
        hnn = compute_splitting(SQUARE_EVEN).to_json_dict()
        assert hnn == {"kind": "hnn", "rank_a": 4, "rank_b": 5}

    def test_amalgam_edge_group_doubles_the_half_rank(self):
        rng = random.Random(17)
        for _ in range(20):
            g = random_admissible_graph(rng, max_vertices=6, max_extra_edges=3)
            cert = compute_splitting(g)
            if cert.kind == "amalgam":
                assert cert.rank_c == 2 * cert.rank_b - 1
            else:
                assert cert.rank_c is None
        # x_quarter rank checks run inside compute_splitting as asserts


def test_collapsed_rank_matches_quarter_rank():
    # collapsing a forest of quarter edges and subdividing preserves pi_1
    rng = random.Random(13)
    for _ in range(15):
        g = random_admissible_graph(rng, max_vertices=5, max_extra_edges=2)
        fam = build_family(g)
        col = build_collapsed(g)
        quarter_comps = connected_components(fam.x_quarter)
        col_comps = connected_components(col.graph)
        assert len(quarter_comps) == len(col_comps)
        assert sorted(free_rank(c) for c in quarter_comps) == sorted(
            free_rank(c) for c in col_comps
        )
