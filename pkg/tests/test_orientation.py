import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from artinsplit import (
    DefiningGraph,
    SearchSpaceError,
    check_witness,
    double_cover,
    find_admissible_orientation,
    has_collapsed_cycle,
    is_admissible,
    oracle_almost_misdirected,
)
from artinsplit.orientation import MAX_ORIENTABLE_EDGES
from generators import (
    random_defining_graph,
    with_random_orientation,
)


def triangle(labels=(3, 3, 3), tails=("a", "b", "c")):
    return DefiningGraph.build(
        ["a", "b", "c"],
        [
            ("a", "b", labels[0], tails[0]),
            ("b", "c", labels[1], tails[1]),
            ("a", "c", labels[2], tails[2]),
        ],
    )


CYCLIC = triangle()
# two tails at the same vertex close an almost misdirected triangle
CLASHING = triangle(tails=("a", "b", "a"))
ALL_TWOS = DefiningGraph.build(
    ["a", "b", "c"],
    [("a", "b", 2, None), ("b", "c", 2, None), ("a", "c", 2, None)],
)


class TestDoubleCover:
    def test_shape_and_ids(self):
        dc = double_cover(CYCLIC)
        assert set(dc.graph.vertices) == {
            "a+", "a-", "b+", "b-", "c+", "c-"
        }
        assert len(dc.graph.edges) == 6
        assert dc.graph.has_edge("dc:a-b:p") and dc.graph.has_edge("dc:a-b:m")

    def test_collapsed_lift_follows_iota(self):
        dc = double_cover(CYCLIC)
        # iota a on edge a-b collapses the lift through a+ and b-
        assert len(dc.collapsed) == 3
        sub = dc.collapsed_subgraph()
        pairs = {frozenset((e.tail, e.head)) for e in sub.edges}
        assert frozenset(("a+", "b-")) in pairs

    def test_label_two_collapses_both_lifts(self):
        dc = double_cover(ALL_TWOS)
        assert len(dc.collapsed) == 6

    def test_collapsed_cycle_detection(self):
        assert has_collapsed_cycle(double_cover(ALL_TWOS))
        assert not has_collapsed_cycle(double_cover(CYCLIC))


class TestIsAdmissible:
    def test_cyclic_triangle_is_admissible_for_any_labels(self):
        for labels in [(3, 3, 3), (5, 4, 4), (9, 3, 7)]:
            assert is_admissible(triangle(labels)).admissible

    def test_clashing_tails_are_inadmissible(self):
        verdict = is_admissible(CLASHING)
        assert not verdict.admissible
        assert verdict.reason
        assert verdict.witness is not None
        assert check_witness(CLASHING, verdict.witness)

    def test_label_two_triangle_is_inadmissible(self):
        verdict = is_admissible(ALL_TWOS)
        assert not verdict.admissible
        assert "cycle" in verdict.reason
        assert check_witness(ALL_TWOS, verdict.witness)

    def test_forests_are_always_admissible(self):
        rng = random.Random(9)
        for _ in range(50):
            g = random_defining_graph(rng, max_vertices=6, max_extra_edges=0)
            oriented = with_random_orientation(rng, g)
            assert is_admissible(oriented).admissible

    def test_verdict_is_deterministic(self):
        v1 = is_admissible(CLASHING)
        v2 = is_admissible(CLASHING)
        assert v1.witness == v2.witness
        assert v1.reason == v2.reason


class TestOracle:
    def test_no_cycle_on_cyclic_triangle(self):
        assert oracle_almost_misdirected(CYCLIC) is None

    def test_finds_cycle_on_clashing_triangle(self):
        w = oracle_almost_misdirected(CLASHING)
        assert w is not None
        assert check_witness(CLASHING, w)

    def test_bound_is_respected(self):
        # the offending cycle has length 3, so bound 2 must miss it
        assert oracle_almost_misdirected(CLASHING, max_len=2) is None


class TestFindOrientation:
    def test_triangle_search_succeeds(self):
        assignment = find_admissible_orientation(triangle().with_orientation(
            {("a", "b"): None, ("b", "c"): None, ("a", "c"): None}
        ))
        assert assignment is not None
        oriented = triangle().with_orientation(assignment)
        assert is_admissible(oriented).admissible
        for (u, v), t in assignment.items():
            assert t in (u, v)

    def test_no_orientation_for_all_twos(self):
        assert find_admissible_orientation(ALL_TWOS) is None

    def test_provided_tails_do_not_leak_into_search(self):
        # search ranges over orientable edges regardless of present iota
        assignment = find_admissible_orientation(CLASHING)
        assert assignment is not None
        assert is_admissible(CLASHING.with_orientation(assignment)).admissible

    def test_search_space_guard(self):
        names = [f"v{i}" for i in range(8)]
        rows = [
            (u, v, 3, None)
            for i, u in enumerate(names)
            for v in names[i + 1 :]
        ]
        big = DefiningGraph.build(names, rows)
        assert len(rows) > MAX_ORIENTABLE_EDGES
        with pytest.raises(SearchSpaceError):
            find_admissible_orientation(big)


@settings(max_examples=80, deadline=None)
@given(seed=st.integers(0, 10**9))
def test_criterion_matches_bounded_oracle(seed):
    rng = random.Random(seed)
    g = with_random_orientation(
        rng, random_defining_graph(rng, max_vertices=6, max_extra_edges=3)
    )
    verdict = is_admissible(g)
    witness = oracle_almost_misdirected(g, max_len=10)
    assert verdict.admissible == (witness is None)
    if not verdict.admissible:
        assert check_witness(g, verdict.witness)
        assert check_witness(g, witness)
