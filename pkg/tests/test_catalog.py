import pytest

from beyondgen.catalog import (CatalogCorruption, CatalogNotFound, find_checkpoint, load_set, parse_report,
                               read_index, report, save_set, serialize_set)
from beyondgen.constraints import ClassSpec
from beyondgen.embedding import GraphSpec, InvariantError
from beyondgen.generator import DrawingSet, LevelStats, base_set, default_schedule, generate_all

from conftest import generated

G = GraphSpec.parse


def test_round_trip(tmp_path):
    ds = generated("2planar", "K3,4")
    rec = save_set(ds, tmp_path)
    back = load_set(tmp_path, G("K3,4"), ClassSpec.parse("2planar"))
    assert serialize_set(back) == serialize_set(ds)
    assert [sorted(d.face_degrees()) for d in back.drawings] == [sorted(d.face_degrees()) for d in ds.drawings]
    assert back.raw_generated == rec.raw_generated == 526
    assert [s.non_iso for s in back.levels] == [s.non_iso for s in ds.levels]


def test_index_reports_unique_one_planar_k6(tmp_path):
    rec = save_set(generated("1planar", "K6"), tmp_path)
    assert rec.non_iso == 1 and rec.verdict == "member"
    (row,) = read_index(tmp_path)
    assert row == rec


def test_base_set_round_trip(tmp_path):
    spec = ClassSpec.parse("1planar")
    base = base_set(G("K2,2"))
    ds = DrawingSet(G("K2,2"), spec, base, [G("K2,2")], [LevelStats(G("K2,2"), 2, 2, 0.0)])
    save_set(ds, tmp_path)
    assert len(load_set(tmp_path, G("K2,2"), spec).drawings) == 2


def test_save_is_idempotent(tmp_path):
    ds = generated("1planar", "K3,4")
    rec = save_set(ds, tmp_path)
    path = tmp_path / rec.path
    before = path.stat().st_mtime_ns
    rec2 = save_set(ds, tmp_path)
    assert path.stat().st_mtime_ns == before
    assert rec2.sha256 == rec.sha256 and len(read_index(tmp_path)) == 1


def test_missing_record(tmp_path):
    with pytest.raises(CatalogNotFound):
        load_set(tmp_path, G("K5"), ClassSpec.parse("1planar"))
    save_set(generated("1planar", "K5"), tmp_path)
    with pytest.raises(CatalogNotFound):
        load_set(tmp_path, G("K5"), ClassSpec.parse("1planar", oriented=True))


def test_tampered_rotation_is_rejected(tmp_path):
    rec = save_set(generated("1planar", "K5"), tmp_path)
    path = tmp_path / rec.path
    lines = path.read_text().splitlines()
    x = next(int(ln.split()[1]) for ln in lines if " cross " in ln)
    lines = [" ".join(ln.split()[:-1]) if ln.startswith(f"rot {x} ") else ln for ln in lines]
    path.write_text("\n".join(lines) + "\n")
    with pytest.raises(InvariantError):
        load_set(tmp_path, G("K5"), ClassSpec.parse("1planar"))


def test_stale_hash_is_rejected(tmp_path):
    rec = save_set(generated("1planar", "K5"), tmp_path)
    path = tmp_path / rec.path
    path.write_text(path.read_text() + "# edited\n")
    with pytest.raises(CatalogCorruption):
        load_set(tmp_path, G("K5"), ClassSpec.parse("1planar"))


def test_set_violating_its_class_is_rejected(tmp_path):
    ds = generated("2planar", "K5")
    as_one = DrawingSet(ds.graph, ClassSpec.parse("1planar"), ds.drawings, ds.schedule, ds.levels)
    rec = save_set(as_one, tmp_path)
    with pytest.raises(CatalogCorruption):
        load_set(tmp_path, G("K5"), ClassSpec.parse("1planar"))


def test_report_rows_and_parse_back(tmp_path):
    spec = ClassSpec.parse("1planar")
    generate_all(G("K7"), spec, on_level=lambda ds: save_set(ds, tmp_path))
    records = [r for r in read_index(tmp_path) if r.graph != "K3"]
    assert [(r.graph, r.non_iso) for r in records] == [("K4", 2), ("K5", 1), ("K6", 1), ("K7", 0)]
    assert records[-1].verdict == "nonmember"
    table = report(records)
    assert table.splitlines()[0].split()[:5] == ["class", "graph", "verdict", "general", "non_iso"]
    assert len(table.splitlines()) == 5
    assert parse_report(report(records, "tsv")) == records


def test_empty_report_is_header_only():
    assert len(report([]).splitlines()) == 1
    assert parse_report(report([], "tsv")) == []


def test_checkpoint_resume(tmp_path):
    spec = ClassSpec.parse("3planar")
    sched = default_schedule(G("K3,4"))
    generate_all(G("K3,3"), spec, sched[:3], on_level=lambda ds: save_set(ds, tmp_path))
    start = find_checkpoint(tmp_path, sched, spec)
    assert start.graph == G("K3,3") and start.non_iso == 69
    resumed = generate_all(G("K3,4"), spec, sched, start=start)
    assert serialize_set(resumed) == serialize_set(generated("3planar", "K3,4"))
    # a different schedule prefix is not reused
    other = [G("K2,2"), G("K2,3"), G("K2,4"), G("K3,4")]
    assert find_checkpoint(tmp_path, other, spec).graph == G("K2,3")
