"""On-disk catalog of drawing sets, checkpoints and result tables.

Layout::

    <root>/index.tsv
    <root>/<class>/<graph>/set.txt

``set.txt`` is a short header followed by one drawing record per block, in
the record format of :mod:`beyondgen.embedding`.  It contains no timings, so
two runs with the same inputs write byte-identical files.  Wall time lives in
the index only, next to the content hash of the set file.
"""

from __future__ import annotations

import csv
import hashlib
import io
import os
import tempfile
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Union

from .constraints import ClassSpec, IsoMode, drawing_satisfies
from .embedding import EmbeddingError, GraphSpec, InvariantError, iter_records, parse_record
from .generator import DrawingSet, LevelStats, parse_schedule, schedule_fingerprint
from .isomorphism import canonical_key

__all__ = [
    "CatalogRecord",
    "CatalogError",
    "CatalogNotFound",
    "CatalogCorruption",
    "class_dir_name",
    "serialize_set",
    "save_set",
    "load_set",
    "read_index",
    "find_checkpoint",
    "report",
    "parse_report",
]

INDEX_NAME = "index.tsv"
SET_NAME = "set.txt"
FORMAT_TAG = "beyondgen-set 1"

PathLike = Union[str, os.PathLike]


class CatalogError(Exception):
    """Base class for catalog failures; messages carry the offending path."""


class CatalogNotFound(CatalogError, LookupError):
    pass


class CatalogCorruption(CatalogError, InvariantError):
    pass


@dataclass
class CatalogRecord:
    cls: str
    graph: str
    iso_mode: str
    schedule: str
    non_iso: int
    raw_generated: int
    seconds: float
    verdict: str
    path: str
    sha256: str

    @property
    def key(self) -> tuple:
        return self.cls, self.graph, self.iso_mode


_COLUMNS = [f.name for f in fields(CatalogRecord)]


def class_dir_name(spec: ClassSpec) -> str:
    """Directory name of a class; orientation-preserving sets get a suffix."""
    if spec.iso_mode is IsoMode.ORIENTATION_PRESERVING:
        return f"{spec.name}-oriented"
    return spec.name


def _verdict(ds: DrawingSet) -> str:
    return "member" if ds.drawings else "nonmember"


def _produced_by(ds: DrawingSet) -> str:
    """Fingerprint of the schedule prefix that ends at the set's graph."""
    sched = list(ds.schedule)
    if ds.graph in sched:
        sched = sched[: sched.index(ds.graph) + 1]
    return schedule_fingerprint(sched)


def serialize_set(ds: DrawingSet) -> str:
    """Canonical text of a drawing set (deterministic, no timings)."""
    out = io.StringIO()
    out.write(f"# {FORMAT_TAG}\n")
    out.write(f"# class {ds.spec.name}\n")
    out.write(f"# graph {ds.graph}\n")
    out.write(f"# iso_mode {ds.spec.iso_mode.value}\n")
    out.write(f"# schedule {_produced_by(ds)}\n")
    levels = " ".join(f"{s.graph}:{s.raw_generated}:{s.non_iso}" for s in ds.levels)
    out.write(f"# levels {levels}\n")
    out.write(f"# count {len(ds.drawings)}\n")
    for d in ds.drawings:
        out.write("\n")
        out.write(d.to_text(ds.spec.name))
    return out.getvalue()


def _atomic_write(path: Path, data: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_index(root: PathLike) -> List[CatalogRecord]:
    path = Path(root) / INDEX_NAME
    if not path.exists():
        return []
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            return _parse_rows(fh.read(), "\t", path)
    except OSError as exc:
        raise CatalogError(f"{path}: {exc}") from exc


def _write_index(root: Path, records: Sequence[CatalogRecord]) -> None:
    _atomic_write(root / INDEX_NAME, _delimited(records, "\t"))


def save_set(ds: DrawingSet, root: PathLike, seconds: Optional[float] = None,
             verdict: Optional[str] = None) -> CatalogRecord:
    """Write ``ds`` under ``root`` and upsert its index row.

    Rewriting identical content leaves the set file untouched.
    """
    root = Path(root)
    rel = Path(class_dir_name(ds.spec)) / str(ds.graph) / SET_NAME
    path = root / rel
    text = serialize_set(ds)
    digest = hashlib.sha256(text.encode("utf-8")).hexdigest()
    try:
        current = path.read_text(encoding="utf-8") if path.exists() else None
        if current != text:
            _atomic_write(path, text)
        rec = CatalogRecord(
            cls=ds.spec.name,
            graph=str(ds.graph),
            iso_mode=ds.spec.iso_mode.value,
            schedule=_produced_by(ds),
            non_iso=len(ds.drawings),
            raw_generated=ds.raw_generated,
            seconds=round(ds.seconds if seconds is None else seconds, 3),
            verdict=verdict or _verdict(ds),
            path=rel.as_posix(),
            sha256=digest,
        )
        records = [r for r in read_index(root) if r.key != rec.key]
        old = [r for r in read_index(root) if r.key == rec.key]
        if old and old[0].sha256 == digest and seconds is None:
            rec.seconds = old[0].seconds  # same content: keep the original timing
        records.append(rec)
        records.sort(key=_row_order)
        _write_index(root, records)
    except OSError as exc:
        raise CatalogError(f"{path}: {exc}") from exc
    return rec


def _row_order(r: CatalogRecord) -> tuple:
    try:
        g = GraphSpec.parse(r.graph)
        gk = (g.bipartite, g.a, g.b)
    except ValueError:
        gk = (True, 0, 0)
    return r.cls, r.iso_mode, gk


def _lookup(root: Path, spec: ClassSpec, graph: GraphSpec) -> CatalogRecord:
    key = (spec.name, str(graph), spec.iso_mode.value)
    for r in read_index(root):
        if r.key == key:
            return r
    raise CatalogNotFound(f"{root / INDEX_NAME}: no set for {spec.name} {graph} ({spec.iso_mode.value})")


def load_set(root: PathLike, graph: GraphSpec, spec: ClassSpec, check_isomorphism: bool = True) -> DrawingSet:
    """Read a stored set back and re-validate it.

    Every drawing is checked against the embedding invariants and the class
    predicate; counts and the content hash must agree with the index, and
    (unless disabled) the drawings must be pairwise non-isomorphic.
    """
    root = Path(root)
    rec = _lookup(root, spec, graph)
    path = root / rec.path
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise CatalogNotFound(f"{path}: set file is missing") from None
    except OSError as exc:
        raise CatalogError(f"{path}: {exc}") from exc
    header: Dict[str, str] = {}
    for line in text.splitlines():
        if not line.startswith("# "):
            break
        key, _, value = line[2:].partition(" ")
        header[key] = value
    if FORMAT_TAG.split()[0] not in header:
        raise CatalogCorruption(f"{path}: missing set header")
    drawings = []
    for i, block in enumerate(iter_records(text)):
        try:
            d, cls = parse_record(block)
        except EmbeddingError as exc:
            raise CatalogCorruption(f"{path}: drawing {i}: {exc}") from exc
        if cls != spec.name or d.graph != graph:
            raise CatalogCorruption(f"{path}: drawing {i} is labelled {cls} {d.graph}")
        if not drawing_satisfies(spec, d):
            raise CatalogCorruption(f"{path}: drawing {i} violates {spec.name}")
        drawings.append(d)
    if len(drawings) != rec.non_iso or str(len(drawings)) != header.get("count"):
        raise CatalogCorruption(f"{path}: holds {len(drawings)} drawings, index says {rec.non_iso}")
    if hashlib.sha256(text.encode("utf-8")).hexdigest() != rec.sha256:
        raise CatalogCorruption(f"{path}: content hash differs from the index (stale or edited)")
    if check_isomorphism:
        keys = {canonical_key(d, spec.iso_mode) for d in drawings}
        if len(keys) != len(drawings):
            raise CatalogCorruption(f"{path}: set contains isomorphic drawings")
    levels = []
    for tok in header.get("levels", "").split():
        g, raw, non = tok.split(":")
        levels.append(LevelStats(GraphSpec.parse(g), int(raw), int(non), 0.0))
    schedule = parse_schedule(header.get("schedule", "").replace(">", " "))
    return DrawingSet(graph, spec, drawings, schedule, levels)


def find_checkpoint(root: PathLike, schedule: Sequence[GraphSpec], spec: ClassSpec) -> Optional[DrawingSet]:
    """The largest stored level of ``schedule`` produced by the same schedule prefix."""
    root = Path(root)
    have = {r.key: r for r in read_index(root)}
    for i in range(len(schedule) - 1, -1, -1):
        r = have.get((spec.name, str(schedule[i]), spec.iso_mode.value))
        if r is not None and r.schedule == schedule_fingerprint(schedule[: i + 1]):
            return load_set(root, schedule[i], spec)
    return None


# ---------------------------------------------------------------------- reports

_REPORT_COLUMNS = ["cls", "graph", "verdict", "raw_generated", "non_iso", "seconds", "iso_mode", "schedule"]
_HEADINGS = {"cls": "class", "raw_generated": "general", "non_iso": "non_iso"}


def _delimited(records: Iterable[CatalogRecord], sep: str, columns: Sequence[str] = _COLUMNS) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, delimiter=sep, lineterminator="\n")
    w.writerow([_HEADINGS.get(c, c) for c in columns])
    for r in records:
        row = asdict(r)
        w.writerow([row[c] for c in columns])
    return buf.getvalue()


def _parse_rows(text: str, sep: str, where: object = "<report>") -> List[CatalogRecord]:
    rows = list(csv.reader(io.StringIO(text), delimiter=sep))
    if not rows:
        return []
    inverse = {v: k for k, v in _HEADINGS.items()}
    head = [inverse.get(h, h) for h in rows[0]]
    out = []
    for n, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != len(head):
            raise CatalogCorruption(f"{where}: line {n} has {len(row)} fields, expected {len(head)}")
        vals = dict(zip(head, row))
        kw = {}
        for f in fields(CatalogRecord):
            v = vals.get(f.name, "")
            if f.name in ("non_iso", "raw_generated"):
                kw[f.name] = int(v)
            elif f.name == "seconds":
                kw[f.name] = float(v)
            else:
                kw[f.name] = v
        out.append(CatalogRecord(**kw))
    return out


def report(records: Sequence[CatalogRecord], fmt: str = "table") -> str:
    """Render records as an aligned text table or as tab-delimited rows.

    Rows are ordered by class, iso mode and graph size; column order is fixed.
    """
    records = sorted(records, key=_row_order)
    if fmt in ("tsv", "delimited"):
        return _delimited(records, "\t")
    if fmt not in ("table", "text"):
        raise ValueError(f"unknown report format {fmt!r}")
    head = [_HEADINGS.get(c, c) for c in _REPORT_COLUMNS]
    body = [[str(asdict(r)[c]) for c in _REPORT_COLUMNS] for r in records]
    widths = [max(len(x) for x in col) for col in zip(head, *body)]
    lines = ["  ".join(x.ljust(w) for x, w in zip(row, widths)).rstrip() for row in [head] + body]
    return "\n".join(lines) + "\n"


def parse_report(text: str) -> List[CatalogRecord]:
    """Inverse of ``report(records, "tsv")``."""
    return _parse_rows(text, "\t")
