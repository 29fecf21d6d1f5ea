"""Command-line front end.

Exit status: 0 on success, 1 on a count mismatch or runtime failure, 2 on a
usage error, 3 when a budget stopped a run (a checkpoint is reported when a
catalog directory is in use).
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
import time
from importlib import resources
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from .catalog import CatalogError, class_dir_name, find_checkpoint, read_index, report, save_set
from .constraints import ClassSpec
from .embedding import EmbeddingError, GraphSpec, iter_records, parse_record
from .generator import (Budget, BudgetExceeded, DrawingSet, Member, NonMember, default_schedule,
                        generate_all, membership, parse_schedule, sample_dfs)
from .render import RenderError, render_svg

EXIT_MISMATCH = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3

ENV_CATALOG = "BEYONDGEN_CATALOG"


class UsageError(Exception):
    pass


def _graph(text: str) -> GraphSpec:
    try:
        return GraphSpec.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _schedule(text: str):
    try:
        return parse_schedule(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _class_name(text: str) -> str:
    try:
        ClassSpec.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    return text


def _positive(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return n


def _spec(args) -> ClassSpec:
    return ClassSpec.parse(args.cls, oriented=args.oriented)


def _root(args, required: bool = False) -> Optional[Path]:
    root = args.out if args.out is not None else os.environ.get(ENV_CATALOG)
    if required and not root:
        raise UsageError(f"a catalog directory is needed: pass --out or set {ENV_CATALOG}")
    return Path(root) if root else None


def _budget(args) -> Optional[Budget]:
    if args.budget is None and args.max_seconds is None:
        return None
    return Budget(max_drawings=args.budget, max_seconds=args.max_seconds)


def _print_levels(ds: DrawingSet) -> None:
    print(f"{'graph':<8} {'general':>9} {'non_iso':>9} {'seconds':>9}")
    for s in ds.levels:
        print(f"{str(s.graph):<8} {s.raw_generated:>9} {s.non_iso:>9} {s.seconds:>9.3f}")


def _run_generation(args, start: Optional[DrawingSet] = None) -> int:
    spec = _spec(args)
    schedule = args.schedule or default_schedule(args.graph)
    root = _root(args)
    last: List[Optional[str]] = [None]

    def checkpoint(ds: DrawingSet) -> None:
        if root is not None:
            rec = save_set(ds, root)
            last[0] = str(root / rec.path)

    t0 = time.perf_counter()
    try:
        ds = generate_all(args.graph, spec, schedule, _budget(args), start=start, on_level=checkpoint,
                          jobs=args.jobs)
    except BudgetExceeded as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        if last[0] is not None:
            print(f"checkpoint: {last[0]} ({exc.partial.graph}); continue with 'resume'", file=sys.stderr)
        else:
            print("no checkpoint written (no catalog directory)", file=sys.stderr)
        return EXIT_BUDGET
    wall = time.perf_counter() - t0
    if args.verbose:
        _print_levels(ds)
    print(f"General: {ds.raw_generated}")
    print(f"Non-Iso: {ds.non_iso}")
    print(f"Time: {wall:.3f}")
    if root is not None:
        print(f"saved: {root / save_set(ds, root, seconds=ds.seconds).path}")
    return 0


def cmd_generate(args) -> int:
    return _run_generation(args)


def cmd_resume(args) -> int:
    spec = _spec(args)
    root = _root(args, required=True)
    schedule = args.schedule or default_schedule(args.graph)
    start = find_checkpoint(root, schedule, spec)
    if start is None:
        print("no checkpoint found; starting from the base case", file=sys.stderr)
    else:
        print(f"resuming from {start.graph}", file=sys.stderr)
    return _run_generation(args, start)


def _write_certificate(d, spec: ClassSpec, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(d.to_text(spec.name), encoding="utf-8")


def _certificate_targets(args, spec: ClassSpec) -> List[Path]:
    out = []
    if args.cert:
        out.append(Path(args.cert))
    root = _root(args)
    if root is not None:
        out.append(root / class_dir_name(spec) / str(args.graph) / "certificate.txt")
    return out


def cmd_check(args) -> int:
    spec = _spec(args)
    verdict = membership(args.graph, spec, args.schedule, _budget(args))
    if isinstance(verdict, Member):
        print("Member")
        for path in _certificate_targets(args, spec):
            _write_certificate(verdict.certificate, spec, path)
            print(f"certificate: {path}")
        return 0
    if isinstance(verdict, NonMember):
        print("NonMember")
        return 0
    print(f"Unknown ({verdict.reason})")
    return EXIT_BUDGET


def cmd_sample(args) -> int:
    spec = _spec(args)
    budget = Budget(max_drawings=args.budget if args.budget is not None else 200_000, max_seconds=args.max_seconds)
    verdict = sample_dfs(args.graph, spec, budget, seed=args.seed, width=args.width, per_node=args.per_node,
                         schedule=args.schedule)
    if isinstance(verdict, Member):
        print("Member")
        for path in _certificate_targets(args, spec):
            _write_certificate(verdict.certificate, spec, path)
            print(f"certificate: {path}")
        return 0
    print(f"Unknown ({verdict.reason})")
    return 0


def cmd_render(args) -> int:
    try:
        text = Path(args.input).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {args.input}: {exc}") from None
    blocks = list(iter_records(text))
    if not blocks:
        raise UsageError(f"{args.input} holds no drawing records")
    if not 0 <= args.index < len(blocks):
        raise UsageError(f"--index {args.index} out of range (file holds {len(blocks)} drawings)")
    d, cls = parse_record(blocks[args.index])
    face = args.face if args.face == "auto" else int(args.face)
    svg = render_svg(d, face, title=f"{cls} {d.graph}")
    Path(args.output).write_text(svg, encoding="utf-8")
    print(f"wrote {args.output}")
    return 0


def cmd_report(args) -> int:
    root = _root(args, required=True)
    sys.stdout.write(report(read_index(root), args.format))
    return 0


# ---------------------------------------------------------------------- count


def read_expected(text: str) -> List[Tuple[str, GraphSpec, int, Optional[int]]]:
    rows = []
    for n, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "\t" not in line:
            # graph names contain commas, so only tabs can separate columns
            raise UsageError(f"expected-counts line {n}: use tab-separated columns")
        tok = line.split("\t")
        if len(tok) not in (3, 4):
            raise UsageError(f"expected-counts line {n}: need class, graph, non_iso[, raw_generated]")
        raw = int(tok[3]) if len(tok) == 4 and tok[3].strip() else None
        rows.append((tok[0].strip(), GraphSpec.parse(tok[1]), int(tok[2]), raw))
    return rows


def default_expected_text() -> str:
    return resources.files("beyondgen").joinpath("data/expected_counts.tsv").read_text(encoding="utf-8")


def cmd_count(args) -> int:
    if args.expected:
        try:
            text = Path(args.expected).read_text(encoding="utf-8")
        except OSError as exc:
            raise UsageError(f"cannot read {args.expected}: {exc}") from None
    else:
        text = default_expected_text()
    rows = read_expected(text)
    if args.cls:
        wanted = ClassSpec.parse(args.cls).name
        rows = [r for r in rows if ClassSpec.parse(r[0]).name == wanted]
    if args.max_vertices:
        rows = [r for r in rows if r[1].n_vertices <= args.max_vertices]
    # one run per (class, family) up to the largest graph; smaller graphs
    # are read off the intermediate levels of the default schedule
    groups: Dict[Tuple[str, bool], GraphSpec] = {}
    for cls, g, _, _ in rows:
        key = (ClassSpec.parse(cls).name, g.bipartite)
        top = groups.get(key)
        if top is None or g.n_vertices > top.n_vertices:
            groups[key] = g
    levels: Dict[Tuple[str, str], Tuple[int, int]] = {}
    for (cls, _), top in groups.items():
        spec = ClassSpec.parse(cls, oriented=args.oriented)
        ds = generate_all(top, spec, jobs=args.jobs)
        for s in ds.levels:
            levels[(cls, str(s.graph))] = (s.non_iso, s.raw_generated)
    bad = 0
    for cls, g, non_iso, raw in rows:
        name = ClassSpec.parse(cls).name
        got = levels.get((name, str(g)))
        if got is None:
            print(f"SKIP {name} {g}: not on the default schedule")
            bad += 1
            continue
        ok = got[0] == non_iso and (raw is None or got[1] == raw)
        want = f"{non_iso}" + (f"/{raw}" if raw is not None else "")
        print(f"{'OK  ' if ok else 'FAIL'} {name} {g}: non_iso={got[0]} general={got[1]} expected {want}")
        bad += not ok
    print(f"{len(rows) - bad} of {len(rows)} rows match")
    return EXIT_MISMATCH if bad else 0


# ---------------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="beyondgen", description="Exhaustive generation of beyond-planar drawings "
                                "of complete and complete bipartite graphs.")
    p.add_argument("--log-level", default="WARNING", help="logging level (default: WARNING)")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, graph=True):
        sp.add_argument("--class", dest="cls", type=_class_name, required=True,
                        help="1planar..5planar, simple, quasiplanar, fanplanar, fancrossingfree, gapplanar")
        if graph:
            sp.add_argument("--graph", type=_graph, required=True, help="K<n> or K<a>,<b>")
        sp.add_argument("--schedule", type=_schedule, default=None,
                        help="insertion schedule, e.g. 'K2,2 K2,3 K3,3' (default: standard growth)")
        sp.add_argument("--out", default=None, help=f"catalog directory (default: ${ENV_CATALOG})")
        mode = sp.add_mutually_exclusive_group()
        mode.add_argument("--reflections", dest="oriented", action="store_false",
                          help="mirror images count as isomorphic (default)")
        mode.add_argument("--oriented", dest="oriented", action="store_true",
                          help="only orientation-preserving isomorphisms")
        sp.set_defaults(oriented=False)
        sp.add_argument("--budget", type=_positive, default=None, help="maximum number of generated drawings")
        sp.add_argument("--max-seconds", type=float, default=None, help="wall-clock limit")

    g = sub.add_parser("generate", help="generate all non-isomorphic drawings")
    common(g)
    g.add_argument("--jobs", type=_positive, default=1, help="worker processes per level")
    g.add_argument("-v", "--verbose", action="store_true", help="print per-level counts")
    g.set_defaults(func=cmd_generate)

    r = sub.add_parser("resume", help="continue a generation from its last stored level")
    common(r)
    r.add_argument("--jobs", type=_positive, default=1)
    r.add_argument("-v", "--verbose", action="store_true")
    r.set_defaults(func=cmd_resume)

    c = sub.add_parser("check", help="decide membership and write a certificate")
    common(c)
    c.add_argument("--cert", default=None, help="write the certificate drawing here")
    c.set_defaults(func=cmd_check)

    s = sub.add_parser("sample", help="depth-first search for one certificate")
    common(s)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--width", type=_positive, default=3, help="children explored per level")
    s.add_argument("--per-node", type=_positive, default=2000, help="extensions produced per node")
    s.add_argument("--cert", default=None, help="write the certificate drawing here")
    s.set_defaults(func=cmd_sample)

    k = sub.add_parser("count", help="compare counts with an expected-counts file")
    k.add_argument("--expected", default=None, help="tab-separated class, graph, non_iso[, raw_generated]")
    k.add_argument("--class", dest="cls", type=_class_name, default=None, help="only rows of this class")
    k.add_argument("--max-vertices", type=_positive, default=None, help="skip larger graphs")
    k.add_argument("--oriented", action="store_true")
    k.add_argument("--jobs", type=_positive, default=1)
    k.set_defaults(func=cmd_count)

    v = sub.add_parser("render", help="draw one stored drawing as SVG")
    v.add_argument("--in", dest="input", required=True, help="drawing or set file")
    v.add_argument("--out", dest="output", required=True, help="SVG file to write")
    v.add_argument("--index", type=int, default=0, help="which record of the file (default: first)")
    v.add_argument("--face", default="auto", help="outer face id, or 'auto'")
    v.set_defaults(func=cmd_render)

    t = sub.add_parser("report", help="print the catalog index")
    t.add_argument("--out", default=None, help=f"catalog directory (default: ${ENV_CATALOG})")
    t.add_argument("--format", choices=["table", "tsv"], default="table")
    t.set_defaults(func=cmd_report)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=getattr(logging, str(args.log_level).upper(), logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        if isinstance(exc, EmbeddingError):
            print(f"error: {exc}", file=sys.stderr)
            return 1
        parser.print_usage(sys.stderr)
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (CatalogError, RenderError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
