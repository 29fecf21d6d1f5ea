"""Insertion of a vertex v adjacent to two opposite vertices of a plane 4-cycle."""

from collections import Counter

import pytest

from beyondgen.constraints import ClassSpec
from beyondgen.embedding import GraphSpec
from beyondgen.generator import base_set
from beyondgen.isomorphism import bruteforce_isomorphic, dedupe
from beyondgen.pathways import enumerate_half_pathways, enumerate_pathways

SIMPLE = ClassSpec.simple()


@pytest.fixture
def cycle():
    planar, _ = base_set(GraphSpec(2, 2))
    return planar


def test_ten_half_pathways(cycle):
    u1 = cycle.vertex_by_label("a0")
    hps = enumerate_half_pathways(cycle, u1, SIMPLE, "b2")
    assert len(hps) == 10
    # two corners; from each: stay, cross one of two edges, cross both
    assert Counter(h.length for h in hps) == {0: 2, 1: 4, 2: 4}
    assert len({h.anchor for h in hps}) == 2
    for h in hps:
        h.drawing.validate()
        crossed = [cycle.seg_edge[x >> 1] for x in h.crossed]
        # edges at u1 are never crossed and stay prohibited
        for e, (p, q) in enumerate(cycle.edges):
            if u1 in (p, q):
                assert e not in crossed and e in h.prohibited
        # an edge already crossed cannot be crossed again
        assert set(crossed) <= h.prohibited


def test_one_planar_keeps_short_half_pathways(cycle):
    u1 = cycle.vertex_by_label("a0")
    hps = enumerate_half_pathways(cycle, u1, ClassSpec.parse("1planar"), "b2")
    assert Counter(h.length for h in hps) == {0: 2, 1: 4}


def test_five_pathways_dedupe_to_three(cycle):
    u1 = cycle.vertex_by_label("a0")
    u2 = cycle.vertex_by_label("a1")
    first = [h for h in enumerate_half_pathways(cycle, u1, SIMPLE, "b2") if h.length == 0][0]
    v = first.drawing.vertex_by_label("b2")
    pws = enumerate_pathways(first.drawing, v, u2, SIMPLE)
    assert len(pws) == 5
    assert Counter(p.length for p in pws) == {0: 1, 1: 2, 2: 2}
    drawings = [p.drawing for p in pws]
    for d in drawings:
        d.graph = GraphSpec(2, 3)
        d.validate()
    reps = dedupe(drawings)
    assert len(reps) == 3
    # the two one-crossing pathways are isomorphic, as are the two two-crossing ones
    by_len = {}
    for p in pws:
        by_len.setdefault(p.length, []).append(p.drawing)
    assert bruteforce_isomorphic(*by_len[1]) and bruteforce_isomorphic(*by_len[2])
    assert not bruteforce_isomorphic(by_len[1][0], by_len[2][0])


def test_double_crossing_needs_two_crossings_on_an_edge_and_a_fan(cycle):
    u1 = cycle.vertex_by_label("a0")
    u2 = cycle.vertex_by_label("a1")
    for name in ["2planar", "quasiplanar", "fanplanar", "fancrossingfree", "gapplanar", "1planar"]:
        spec = ClassSpec.parse(name)
        first = [h for h in enumerate_half_pathways(cycle, u1, spec, "b2") if h.length == 0][0]
        v = first.drawing.vertex_by_label("b2")
        n = len(enumerate_pathways(first.drawing, v, u2, spec))
        # crossing a0b0 and a0b1 puts two crossings on the new edge, made by adjacent edges
        assert n == (3 if name in ("1planar", "fancrossingfree") else 5), name


def test_existing_edge_is_refused(cycle):
    with pytest.raises(ValueError):
        enumerate_pathways(cycle, cycle.vertex_by_label("a0"), cycle.vertex_by_label("b0"), SIMPLE)
