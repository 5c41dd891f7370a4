import random

import pytest
from artinsplit import (
    ColoredGraph,
    DefiningGraph,
    Edge,
    FiberInputError,
    GraphMap,
    StructureError,
    bouquet,
    build_collapsed,
    fiber_product,
    fill_rank_check,
    free_rank,
    is_immersion,
    monochrome_check,
    oppressive_set,
    traces_word,
)
from generators import (
    random_admissible_graph,
    random_bouquet_immersion,
    random_colored_graph,
)
from oracles import has_mixed_simple_cycle, monochrome_cycles_fill


def triangle(labels, tails=("a", "b", "c")):
    return DefiningGraph.build(
        ["a", "b", "c"],
        [
            ("a", "b", labels[0], tails[0]),
            ("b", "c", labels[1], tails[1]),
            ("a", "c", labels[2], tails[2]),
        ],
    )


def self_fiber(g):
    col = build_collapsed(g)
    assert col.admissible
    return col, fiber_product(col.rho, col.rho)


def immersion_on(graph, colors):
    x0 = bouquet(colors)
    return GraphMap(
        graph,
        x0,
        {v: "*" for v in graph.vertices},
        {e.id: f"x0:{e.color}" for e in graph.edges},
    )


class TestFiberProduct:
    def test_rejects_non_immersions(self):
        g = ColoredGraph(
            ["u", "v", "w"],
            [Edge("1", "u", "v", "a"), Edge("2", "u", "w", "a")],
        )
        rho = immersion_on(g, ["a"])
        with pytest.raises(FiberInputError, match="immersion"):
            fiber_product(rho, rho)

    def test_rejects_mismatched_targets(self):
        g = ColoredGraph(["u"], [Edge("1", "u", "u", "a")])
        rho1 = immersion_on(g, ["a"])
        rho2 = immersion_on(g, ["a", "b"])
        with pytest.raises(FiberInputError):
            fiber_product(rho1, rho2)

    def test_art333_self_fiber(self):
        col, fp = self_fiber(triangle((3, 3, 3)))
        assert len(col.graph.vertices) == 3 and len(col.graph.edges) == 9
        assert fp.classification == ("diagonal", "cycle-bearing", "cycle-bearing")
        assert fp.diagonal_component == 0
        assert fp.nontrivial_components() == (1, 2)
        for i in fp.nontrivial_components():
            assert free_rank(fp.components[i]) == 7

    def test_projections_are_immersions(self):
        _, fp = self_fiber(triangle((3, 4, 5)))
        assert is_immersion(fp.proj1)
        assert is_immersion(fp.proj2)

    def test_diagonal_is_a_union_of_components(self):
        rng = random.Random(41)
        for _ in range(25):
            rho = random_bouquet_immersion(rng)
            fp = fiber_product(rho, rho)
            diag = {f"{v}|{v}" for v in rho.source.vertices}
            for i, comp in enumerate(fp.components):
                hit = diag & set(comp.vertices)
                if hit:
                    assert i in fp.diagonal_components
                    assert set(comp.vertices) <= diag
            # diagonal components together carry the whole diagonal
            covered = set()
            for i in fp.diagonal_components:
                covered |= set(fp.components[i].vertices)
            assert covered == diag

    def test_component_lookup(self):
        _, fp = self_fiber(triangle((3, 3, 3)))
        for i, comp in enumerate(fp.components):
            for v in comp.vertices:
                assert fp.component_of_vertex(v) == i
        with pytest.raises(StructureError):
            fp.component_of_vertex("nope|nope")

    def test_branching_vertices_have_high_valence(self):
        _, fp = self_fiber(triangle((5, 5, 5)))
        for i in fp.nontrivial_components():
            comp = fp.components[i]
            branching = set(fp.branching_vertices(i))
            for v in comp.vertices:
                assert (comp.valence(v) >= 3) == (v in branching)


class TestMonochrome:
    def test_all_odd_triangle_is_mixed(self):
        _, fp = self_fiber(triangle((5, 5, 5)))
        verdict = monochrome_check(fp)
        assert not verdict.all_monochrome
        assert verdict.witness.is_simple_cycle()
        assert len(verdict.witness_colors()) >= 2
        idx = verdict.witness_component
        assert fp.classification[idx] == "cycle-bearing"
        assert idx not in fp.diagonal_components
        walk_vertices = set(verdict.witness.vertices())
        assert walk_vertices <= set(fp.components[idx].vertices)

    def test_even_pair_triangle_is_monochrome(self):
        _, fp = self_fiber(triangle((4, 4, 6)))
        assert monochrome_check(fp).all_monochrome

    def test_matches_exhaustive_cycle_search(self):
        labels = [(3, 3, 3), (3, 3, 4), (3, 4, 4), (4, 4, 4), (4, 4, 5), (5, 5, 5)]
        for ls in labels:
            _, fp = self_fiber(triangle(ls))
            verdict = monochrome_check(fp)
            mixed = any(
                has_mixed_simple_cycle(fp.components[i])
                for i in fp.nontrivial_components()
            )
            assert verdict.all_monochrome == (not mixed)

    def test_matches_exhaustive_search_on_random_graphs(self):
        rng = random.Random(43)
        done = 0
        while done < 12:
            g = random_admissible_graph(rng, max_vertices=4, max_extra_edges=2)
            if sum(e.label for e in g.edges) > 14:
                continue  # keep the brute-force search tractable
            col = build_collapsed(g)
            fp = fiber_product(col.rho, col.rho)
            verdict = monochrome_check(fp)
            mixed = any(
                has_mixed_simple_cycle(fp.components[i])
                for i in fp.nontrivial_components()
            )
            assert verdict.all_monochrome == (not mixed)
            done += 1


class TestFillRank:
    def test_single_color_cycle_fills(self):
        g = ColoredGraph(
            ["0", "1"],
            [Edge("1", "0", "1", "a"), Edge("2", "1", "0", "a")],
        )
        assert fill_rank_check(g)

    def test_mixed_cycle_does_not_fill(self):
        g = ColoredGraph(
            ["0", "1"],
            [Edge("1", "0", "1", "a"), Edge("2", "1", "0", "b")],
        )
        assert not fill_rank_check(g)

    def test_matches_exhaustive_span(self):
        rng = random.Random(47)
        for _ in range(40):
            g = random_colored_graph(rng, max_vertices=5, max_edges=7)
            assert fill_rank_check(g) == monochrome_cycles_fill(g)

    def test_on_fiber_components(self):
        _, fp = self_fiber(triangle((4, 4, 4)))
        for i in fp.nontrivial_components():
            comp = fp.components[i]
            assert fill_rank_check(comp) == monochrome_cycles_fill(comp)


class TestOppressive:
    def test_rejects_non_immersion(self):
        g = ColoredGraph(
            ["u", "v", "w"],
            [Edge("1", "u", "v", "a"), Edge("2", "u", "w", "a")],
        )
        with pytest.raises(FiberInputError):
            oppressive_set(immersion_on(g, ["a"]), "u")

    def test_single_edge_graph(self):
        g = ColoredGraph(["u", "v"], [Edge("1", "u", "v", "a")])
        rho = immersion_on(g, ["a"])
        assert oppressive_set(rho, "u").words() == ((("a", 1),),)
        assert oppressive_set(rho, "v").words() == ((("a", -1),),)

    def test_embedded_vertex_with_loops_is_empty(self):
        g = ColoredGraph(["u"], [Edge("1", "u", "u", "a")])
        ops = oppressive_set(immersion_on(g, ["a"]), "u")
        assert ops.is_empty()

    def test_two_edge_path_enumeration(self):
        g = ColoredGraph(
            ["u", "v", "w"],
            [Edge("1", "u", "v", "a"), Edge("2", "v", "w", "b")],
        )
        ops = oppressive_set(immersion_on(g, ["a", "b"]), "u")
        assert set(ops.words()) == {
            (("a", 1),),
            (("a", 1), ("b", 1)),
            (("a", 1), ("b", -1), ("a", -1)),
            (("a", 1), ("b", 1), ("a", -1)),
        }

    def test_witness_paths_recorded(self):
        g = ColoredGraph(
            ["u", "v", "w"],
            [Edge("1", "u", "v", "a"), Edge("2", "v", "w", "b")],
        )
        ops = oppressive_set(immersion_on(g, ["a", "b"]), "u")
        for el in ops.elements:
            assert el.mu1.start == "u"
            assert el.mu1.end != "u"
            assert el.mu1.is_simple_path()
            if el.mu2 is not None:
                assert el.mu2.end == "u"
                assert el.mu2.start not in ("u", el.mu1.end)

    def test_no_word_closes(self):
        rng = random.Random(53)
        for _ in range(30):
            rho = random_bouquet_immersion(rng, max_vertices=5)
            y0 = min(rho.source.vertices)
            ops = oppressive_set(rho, y0)
            assert ops.is_empty() == (len(rho.source.vertices) == 1)
            for word in ops.words():
                assert traces_word(rho.source, y0, word).outcome != "closes"


class TestTracesWord:
    def setup_method(self):
        self.g = ColoredGraph(
            ["u", "v"],
            [Edge("1", "u", "v", "a"), Edge("2", "v", "u", "b")],
        )

    def test_closes(self):
        r = traces_word(self.g, "u", [("a", 1), ("b", 1)])
        assert r.outcome == "closes" and r.vertex == "u"

    def test_exits(self):
        r = traces_word(self.g, "u", [("a", 1)])
        assert r.outcome == "exits" and r.vertex == "v"

    def test_no_edge_reports_position(self):
        r = traces_word(self.g, "u", [("a", 1), ("a", 1)])
        assert r.outcome == "no-edge"
        assert r.failed_index == 1
        assert r.vertex == "v"

    def test_inverse_letters_follow_heads(self):
        r = traces_word(self.g, "u", [("b", -1), ("a", -1)])
        assert r.outcome == "closes"

    def test_ambiguous_graph_rejected(self):
        g = ColoredGraph(
            ["u", "v", "w"],
            [Edge("1", "u", "v", "a"), Edge("2", "u", "w", "a")],
        )
        with pytest.raises(StructureError):
            traces_word(g, "u", [("a", 1)])
