import itertools

import pytest
from hypothesis import given, settings, strategies as st

from beyondgen.constraints import (ClassSpec, IsoMode, Kind, PartialEdge, _match_crossings, crossing_prohibited,
                                   drawing_satisfies, fan_triangle_edges, gap_assignment_bruteforce,
                                   gap_assignment_exists, gap_pseudoforest_feasible)
from beyondgen.embedding import GraphSpec
from beyondgen.generator import base_set

from conftest import generated


def test_parse_names():
    assert ClassSpec.parse("2planar") == ClassSpec(Kind.KPLANAR, 2)
    assert ClassSpec.parse("fan-planar").kind is Kind.FANPLANAR
    assert ClassSpec.parse("gapplanar", oriented=True).iso_mode is IsoMode.ORIENTATION_PRESERVING
    assert ClassSpec.parse("simple").name == "simple"
    for name in ["1planar", "3planar", "quasiplanar", "fanplanar", "fancrossingfree", "gapplanar"]:
        assert ClassSpec.parse(name).name == name
    for bad in ["0planar", "rac", "planar", ""]:
        with pytest.raises(ValueError):
            ClassSpec.parse(bad)
    with pytest.raises(ValueError):
        ClassSpec(Kind.QUASIPLANAR, 3)


def test_crossed_square_is_in_every_class():
    _, crossed = base_set(GraphSpec(2, 2))
    for name in ["1planar", "quasiplanar", "fanplanar", "fancrossingfree", "gapplanar"]:
        assert drawing_satisfies(ClassSpec.parse(name), crossed)


def _class_counts():
    """Which classes each simple drawing of K5 belongs to."""
    return {name: sum(drawing_satisfies(ClassSpec.parse(name), d) for d in generated("simple", "K5").drawings)
            for name in ["1planar", "2planar", "3planar", "quasiplanar", "fanplanar", "fancrossingfree", "gapplanar"]}


def test_global_predicates_on_all_simple_k5():
    counts = _class_counts()
    assert counts == {
        "1planar": 1, "2planar": 4, "3planar": 5, "quasiplanar": 5,
        "fanplanar": 5, "fancrossingfree": 1, "gapplanar": 5,
    }


def test_incremental_check_matches_definition_on_k4():
    # a K4 drawing with one crossing: a new crossing of either crossed edge is
    # refused by 1-planarity but allowed by 2-planarity
    d = [g for g in generated("simple", "K4").drawings if g.n_crossings == 1][0]
    x = d.crossing_vertices()[0]
    e, f = d.cross_of[x]
    free = [v for v in d.real_vertices()]
    p = PartialEdge(ends=(free[0],))
    target_ok = [c for c in (e, f) if free[0] not in d.edges[c]]
    for c in target_ok:
        assert crossing_prohibited(ClassSpec.parse("1planar"), d, p, c)
        assert not crossing_prohibited(ClassSpec.parse("2planar"), d, p, c)
    # edges incident to the partial edge are always prohibited
    for c, uv in enumerate(d.edges):
        if free[0] in uv:
            assert crossing_prohibited(ClassSpec.simple(), d, p, c)


@settings(max_examples=300, deadline=None)
@given(st.integers(min_value=1, max_value=8).flatmap(
    lambda n: st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)).filter(lambda t: t[0] != t[1]),
                       max_size=12).map(lambda links: (n, links))))
def test_gap_feasibility_agrees_with_bruteforce(case):
    n, links = case
    brute = gap_assignment_bruteforce(n, links)
    assert gap_pseudoforest_feasible(n, links) == brute
    assert (_match_crossings(n, links) == len(links)) == brute


def test_gap_bruteforce_exhaustive_small():
    # every crossing graph on 4 edges with up to 6 links, exhaustively
    pairs = list(itertools.combinations(range(4), 2))
    for r in range(0, 7):
        for links in itertools.combinations_with_replacement(pairs, r):
            assert gap_pseudoforest_feasible(4, links) == gap_assignment_bruteforce(4, links)


def test_gap_planar_drawing_predicate():
    for d in generated("gapplanar", "K6").drawings:
        assert gap_assignment_exists(d)


def test_fan_triangles_absent_where_definitions_coincide():
    # in bipartite graphs pairwise adjacent crossers always share an endpoint
    for d in generated("fanplanar", "K3,4").drawings:
        assert fan_triangle_edges(d) == []
