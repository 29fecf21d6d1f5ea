import pytest
from hypothesis import given, settings, strategies as st

from beyondgen.embedding import (Drawing, EmbeddingError, GraphSpec, InvariantError, iter_records,
                                 parse_record)
from beyondgen.generator import base_set

from conftest import generated


def pool():
    return (base_set(GraphSpec(3)) + base_set(GraphSpec(2, 2)) + generated("simple", "K5").drawings
            + generated("3planar", "K3,3").drawings)


def test_graph_spec_parse_and_normalize():
    assert GraphSpec.parse("K5") == GraphSpec(5)
    assert GraphSpec.parse("k4,3") == GraphSpec(3, 4)
    assert str(GraphSpec(4, 3)) == "K3,4"
    assert GraphSpec(3, 4).n_edges == 12
    for bad in ("K2", "K1,4", "G5", "K3,"):
        with pytest.raises(ValueError):
            GraphSpec.parse(bad)


@pytest.mark.parametrize("d", pool(), ids=lambda d: repr(d))
def test_euler_and_face_bookkeeping(d):
    d.validate()
    faces = d.faces()
    assert d.n_vertices - d.n_segments + len(faces) == 2
    assert sum(f.degree for f in faces) == 2 * d.n_segments
    # every crossing has degree four
    for x in d.crossing_vertices():
        assert len(d.darts_at(x)) == 4


def test_dual_neighbors_are_symmetric():
    d = generated("simple", "K5").drawings[-1]
    for f in d.faces():
        for s, g in d.dual_neighbors(f.id):
            assert (s, f.id) in d.dual_neighbors(g)
    with pytest.raises(ValueError):
        d.dual_neighbors(10_000)


def test_planar_triangle_has_two_faces():
    (t,) = base_set(GraphSpec(3))
    assert sorted(t.face_degrees()) == [3, 3]
    assert t.n_crossings == 0


def test_crossed_square_structure():
    planar, crossed = base_set(GraphSpec(2, 2))
    assert crossed.n_crossings == 1
    assert sorted(crossed.face_degrees()) == [3, 3, 6]
    x = crossed.crossing_vertices()[0]
    e, f = crossed.cross_of[x]
    assert not crossed.edges_adjacent(e, f)


def test_manual_edge_insertion():
    (t,) = base_set(GraphSpec(3))
    g, _ = t.begin_edge(t.darts_at(0)[0], "k3")
    g.validate()
    assert g.labels[-1] == "k3" and g.n_vertices == 4 and g.edge_between(0, 3) >= 0
    # second edge from the new vertex, closed at vertex 1 without crossing
    g1, tip = g.begin_edge(g.darts_at(3)[0])
    corner = next(x ^ 1 for x in g1.face_walk(tip) if g1.org[x ^ 1] == 1)
    h = g1.close_edge(tip, corner)
    h.validate()
    assert h.edge_between(3, 1) >= 0 and h.n_crossings == 0
    # the same edge routed across (0, 2) instead, then closed at vertex 1
    e02 = t.edge_between(0, 2)
    walk = g1.face_walk(tip)
    if not any(g1.seg_edge[x >> 1] == e02 for x in walk):
        pytest.skip("edge (0,2) not on this face")
    g2, tip2 = g1.cross(tip, next(x for x in walk if g1.seg_edge[x >> 1] == e02))
    corner2 = next(x ^ 1 for x in g2.face_walk(tip2) if g2.org[x ^ 1] == 1)
    h2 = g2.close_edge(tip2, corner2)
    h2.validate()
    assert h2.crossers(e02) == [h2.edge_between(3, 1)]


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_text_round_trip(data):
    d = data.draw(st.sampled_from(pool()))
    text = d.to_text("simple")
    back, cls = parse_record(text.splitlines())
    assert cls == "simple"
    assert back.to_text("simple") == text
    def cyc(rings):
        return [r[r.index(min(r)):] + r[:r.index(min(r))] for r in rings]

    assert cyc(back.rotations()) == cyc(d.rotations())
    assert sorted(back.face_degrees()) == sorted(d.face_degrees())


def test_multi_record_split_and_errors():
    ds = generated("2planar", "K5").drawings
    text = "# comment\n" + "\n".join(d.to_text("2planar") for d in ds)
    blocks = list(iter_records(text))
    assert len(blocks) == len(ds)
    with pytest.raises(EmbeddingError):
        list(iter_records("v 0 real k0\n"))
    with pytest.raises(EmbeddingError):
        parse_record(["drawing x K3", "v 0 blob"])


def test_tampered_crossing_degree_is_rejected():
    planar, crossed = base_set(GraphSpec(2, 2))
    lines = crossed.to_text().splitlines()
    # drop one neighbour from the crossing's rotation
    lines = [ln if not ln.startswith("rot 4 ") else "rot 4 0 1 2" for ln in lines]
    with pytest.raises(EmbeddingError):
        parse_record(lines)


def test_adjacent_crossing_is_not_simple():
    # two edges of a path a-b-c crossing each other at x
    labels = ["k0", "k1", "k2", None, "k3"]
    with pytest.raises(InvariantError):
        Drawing.from_rotations(labels, [None, None, None, (0, 1), None],
                               [[0, 3, 1], [1, 3, 2], [0, 4], [4, 2]],
                               [[3, 4], [3], [3, 4], [0, 1, 2, 1], [0, 2]])
