import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from beyondgen.constraints import ClassSpec, IsoMode
from beyondgen.embedding import GraphSpec
from beyondgen.generator import base_set, iter_vertex_extensions
from beyondgen.isomorphism import (DedupeIndex, are_isomorphic, base_darts, bruteforce_isomorphic, canonical_key,
                                   edge_type_census, try_extend)

from conftest import generated, relabel

SIMPLE = ClassSpec.simple()


def raw_extensions(start, target):
    out = []
    for d in start:
        out.extend(iter_vertex_extensions(d, GraphSpec.parse(target), SIMPLE))
    return out


def small_pool():
    """Raw K4 and K2,3 drawings with at most eight planarization vertices."""
    k4 = raw_extensions(base_set(GraphSpec(3)), "K4")
    k23 = raw_extensions(base_set(GraphSpec(2, 2)), "K2,3")
    return [d for d in k4 + k23 if d.n_vertices <= 8]


POOL = small_pool()


@pytest.mark.parametrize("mode", list(IsoMode))
def test_three_isomorphism_tests_agree(mode):
    assert len(POOL) > 50
    keys = [canonical_key(d, mode) for d in POOL]
    for i, j in itertools.combinations_with_replacement(range(len(POOL)), 2):
        g1, g2 = POOL[i], POOL[j]
        if g1.graph != g2.graph:
            continue
        brute = bruteforce_isomorphic(g1, g2, mode)
        assert are_isomorphic(g1, g2, mode) == brute, (i, j)
        assert (keys[i] == keys[j]) == brute, (i, j)


def test_class_sizes_of_small_pool():
    k4 = [d for d in POOL if d.graph == GraphSpec(4)]
    assert len(k4) == 8
    assert len({canonical_key(d) for d in k4}) == 2


@settings(max_examples=80, deadline=None)
@given(st.data())
def test_relabelling_and_mirroring_keep_the_key(data):
    d = data.draw(st.sampled_from(generated("3planar", "K3,3").drawings + generated("4planar", "K6").drawings))
    perm = data.draw(st.permutations(range(d.n_vertices)))
    mirror = data.draw(st.booleans())
    g = relabel(d, list(perm), mirror)
    g.validate()
    assert canonical_key(g) == canonical_key(d)
    base = base_darts(d)[0]
    assert any(try_extend(d, g, base, b, mirror) for b in base_darts(g))
    if not mirror:
        assert canonical_key(g, IsoMode.ORIENTATION_PRESERVING) == canonical_key(d, IsoMode.ORIENTATION_PRESERVING)


def test_mirror_images_can_differ_without_reflections():
    # some 2-planar K7 drawing is chiral: it and its mirror are distinct oriented classes
    oriented = generated("2planar", "K7", oriented=True).drawings
    reflective = generated("2planar", "K7").drawings
    assert len(oriented) > len(reflective)
    chiral = [d for d in reflective
              if canonical_key(d, IsoMode.ORIENTATION_PRESERVING)
              != canonical_key(relabel(d, list(range(d.n_vertices)), True), IsoMode.ORIENTATION_PRESERVING)]
    assert chiral


def test_census_rejects_quickly():
    planar, crossed = base_set(GraphSpec(2, 2))
    assert edge_type_census(planar) == (4, 0, 0)
    assert edge_type_census(crossed) == (2, 4, 0)
    assert not are_isomorphic(planar, crossed)


def test_dedupe_index_keeps_first_representative():
    pool = [d for d in POOL if d.graph == GraphSpec(2, 3)]
    idx = DedupeIndex()
    firsts = [d for d in pool if idx.add(d)]
    assert idx.offered == len(pool)
    assert idx.drawings == firsts
    assert all(d in idx for d in pool)
    rng = random.Random(3)
    d = rng.choice(pool)
    assert relabel(d, rng.sample(range(d.n_vertices), d.n_vertices)) in idx
