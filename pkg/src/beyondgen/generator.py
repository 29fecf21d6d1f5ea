"""Vertex-by-vertex generation of all non-isomorphic drawings of a graph."""

from __future__ import annotations

import logging
import multiprocessing
import random
import time
from dataclasses import dataclass, field
from typing import Callable, Iterator, List, Optional, Sequence, Tuple

from .constraints import ClassSpec, Kind, drawing_satisfies
from .embedding import Drawing, GraphSpec
from .isomorphism import DedupeIndex
from .pathways import iter_half_pathways, iter_pathways

__all__ = [
    "Budget",
    "BudgetExceeded",
    "LevelStats",
    "DrawingSet",
    "Member",
    "NonMember",
    "Unknown",
    "base_set",
    "default_schedule",
    "parse_schedule",
    "schedule_fingerprint",
    "next_vertex",
    "swap_sides",
    "iter_vertex_extensions",
    "extend_by_vertex",
    "iter_extensions",
    "generate_all",
    "membership",
    "sample_dfs",
]

log = logging.getLogger(__name__)


# ---------------------------------------------------------------------- schedules


def default_schedule(target: GraphSpec) -> List[GraphSpec]:
    """Base case first, then one vertex per step up to ``target``.

    Bipartite graphs alternate sides up to the square, then grow the larger side.
    """
    if not target.bipartite:
        return [GraphSpec(n) for n in range(3, target.a + 1)]
    out = [GraphSpec(2, 2)]
    x, y = 2, 2
    while (x, y) != (target.a, target.b):
        if x == y or x == target.a:
            y += 1
        else:
            x += 1
        out.append(GraphSpec(x, y))
    return out


def parse_schedule(text: str) -> List[GraphSpec]:
    return [GraphSpec.parse(tok) for tok in text.replace(";", " ").replace("->", " ").split()]


def schedule_fingerprint(schedule: Sequence[GraphSpec]) -> str:
    return ">".join(str(g) for g in schedule)


def _check_schedule(schedule: Sequence[GraphSpec]) -> None:
    if not schedule:
        raise ValueError("empty schedule")
    if schedule[0] not in (GraphSpec(3), GraphSpec(2, 2)):
        raise ValueError(f"schedule must start at K3 or K2,2, not {schedule[0]}")
    for g, h in zip(schedule, schedule[1:]):
        if g.bipartite != h.bipartite or h.n_vertices != g.n_vertices + 1:
            raise ValueError(f"schedule step {g} -> {h} does not add exactly one vertex")
        if g.bipartite and not (h.a >= g.a and h.b >= g.b):
            raise ValueError(f"schedule step {g} -> {h} is not a one-vertex extension")


def next_vertex(d: Drawing, target: GraphSpec) -> List[Tuple[str, List[int], bool]]:
    """Ways to add one vertex to ``d`` so that it becomes a drawing of ``target``.

    Each option is ``(label, neighbors, swap)``; with ``swap`` the side letters
    of the result must be exchanged so that side ``a`` stays the smaller one.
    A square ``K_{a,a}`` can grow on either side, so it yields two options.
    """
    real = d.real_vertices()
    if not target.bipartite:
        return [(f"k{len(real)}", real, False)]
    side_a = [v for v in real if d.labels[v][0] == "a"]
    side_b = [v for v in real if d.labels[v][0] == "b"]
    na, nb = len(side_a), len(side_b)
    out = []
    if (na, nb + 1) == (target.a, target.b):
        out.append((f"b{nb}", side_a, False))
    if (nb, na + 1) == (target.a, target.b):
        out.append((f"a{na}", side_b, True))
    elif (na + 1, nb) == (target.a, target.b):
        out.append((f"a{na}", side_b, False))
    if not out:
        raise ValueError(f"{target} is not a one-vertex extension of {d.graph}")
    return out


def swap_sides(d: Drawing) -> None:
    """Exchange side letters ``a`` and ``b`` of all real labels, in place."""
    flip = {"a": "b", "b": "a"}
    d.labels = [None if lab is None else flip[lab[0]] + lab[1:] for lab in d.labels]


def iter_vertex_extensions(d: Drawing, target: GraphSpec, spec: ClassSpec) -> Iterator[Drawing]:
    """All extensions of ``d`` to ``target`` over every admissible side choice."""
    for label, neighbors, swap in next_vertex(d, target):
        for g in iter_extensions(d, label, neighbors, spec, target):
            if swap:
                swap_sides(g)
            yield g


# ---------------------------------------------------------------------- base cases


def base_set(spec: GraphSpec) -> List[Drawing]:
    """The drawings the recursion starts from: planar K3, or both K2,2 drawings."""
    if spec == GraphSpec(3):
        return [Drawing.from_rotations(["k0", "k1", "k2"], [None] * 3, [[0, 1], [1, 2], [0, 2]],
                                       [[1, 2], [2, 0], [0, 1]], graph=spec)]
    if spec == GraphSpec(2, 2):
        labels = ["a0", "a1", "b0", "b1"]
        planar = Drawing.from_rotations(labels, [None] * 4, [[0, 2], [0, 3], [1, 2], [1, 3]],
                                        [[2, 3], [2, 3], [0, 1], [0, 1]], graph=spec)
        crossed = Drawing.from_rotations(labels + [None], [None] * 4 + [(0, 3)],
                                         [[0, 4, 2], [0, 3], [1, 2], [1, 4, 3]],
                                         [[4, 3], [4, 2], [1, 4], [0, 4], [0, 1, 2, 3]], graph=spec)
        return [planar, crossed]
    raise ValueError(f"no base case for {spec}; use K3 or K2,2")


# ---------------------------------------------------------------------- extension


def iter_extensions(d: Drawing, label: str, neighbors: Sequence[int], spec: ClassSpec,
                    graph: Optional[GraphSpec] = None) -> Iterator[Drawing]:
    """Every way to add vertex ``label`` adjacent to ``neighbors`` (in that order)."""
    v = d.n_vertices
    rest = list(neighbors[1:])

    def route(g: Drawing, i: int) -> Iterator[Drawing]:
        if i == len(rest):
            g.graph = graph
            yield g
            return
        for _, _, _, g2 in iter_pathways(g, v, rest[i], spec):
            yield from route(g2, i + 1)

    for _, _, g, _ in iter_half_pathways(d, neighbors[0], spec, label):
        yield from route(g, 0)


def extend_by_vertex(d: Drawing, label: str, neighbors: Sequence[int], spec: ClassSpec,
                     graph: Optional[GraphSpec] = None) -> List[Drawing]:
    return list(iter_extensions(d, label, neighbors, spec, graph))


# ---------------------------------------------------------------------- results


class BudgetExceeded(RuntimeError):
    """Generation stopped on a resource limit; ``partial`` holds the last full level."""

    def __init__(self, message: str, partial: "DrawingSet"):
        super().__init__(message)
        self.partial = partial
        self.checkpoint: Optional[str] = None


@dataclass
class Budget:
    max_drawings: Optional[int] = None  # raw drawings produced, summed over levels
    max_seconds: Optional[float] = None

    def __post_init__(self) -> None:
        self._start = time.perf_counter()
        self.used = 0

    def charge(self, n: int = 1) -> bool:
        """Account for ``n`` drawings; False once a limit is crossed."""
        self.used += n
        if self.max_drawings is not None and self.used > self.max_drawings:
            return False
        if self.max_seconds is not None and time.perf_counter() - self._start > self.max_seconds:
            return False
        return True


@dataclass
class LevelStats:
    graph: GraphSpec
    raw_generated: int
    non_iso: int
    seconds: float


@dataclass
class DrawingSet:
    graph: GraphSpec
    spec: ClassSpec
    drawings: List[Drawing]
    schedule: List[GraphSpec] = field(default_factory=list)
    levels: List[LevelStats] = field(default_factory=list)

    @property
    def non_iso(self) -> int:
        return len(self.drawings)

    @property
    def raw_generated(self) -> int:
        return self.levels[-1].raw_generated if self.levels else len(self.drawings)

    @property
    def seconds(self) -> float:
        return sum(s.seconds for s in self.levels)

    def __len__(self) -> int:
        return len(self.drawings)


@dataclass
class Member:
    certificate: Drawing


@dataclass
class NonMember:
    pass


@dataclass
class Unknown:
    reason: str = "budget"


# ---------------------------------------------------------------------- drivers


def _extend_one(args) -> List[Drawing]:
    d, graph, spec = args
    return list(iter_vertex_extensions(d, graph, spec))


def _level(prev: Sequence[Drawing], graph: GraphSpec, spec: ClassSpec, budget: Optional[Budget],
           jobs: int = 1) -> Tuple[DedupeIndex, bool]:
    """Extend every representative and dedupe in input order.

    With ``jobs > 1`` the extensions are computed by a process pool; results
    are consumed in the order of ``prev`` so the output does not depend on it.
    """
    index = DedupeIndex(spec.iso_mode)
    if jobs > 1 and len(prev) > 1:
        with multiprocessing.Pool(jobs) as pool:
            for batch in pool.imap(_extend_one, [(d, graph, spec) for d in prev]):
                for g in batch:
                    index.add(g)
                    if budget is not None and not budget.charge():
                        pool.terminate()
                        return index, False
        return index, True
    for d in prev:
        for g in iter_vertex_extensions(d, graph, spec):
            index.add(g)
            if budget is not None and not budget.charge():
                return index, False
    return index, True


def generate_all(target: GraphSpec, spec: ClassSpec, schedule: Optional[Sequence[GraphSpec]] = None,
                 budget: Optional[Budget] = None, start: Optional["DrawingSet"] = None,
                 on_level: Optional[Callable[[DrawingSet], None]] = None, jobs: int = 1) -> DrawingSet:
    """All non-isomorphic drawings of ``target`` in the class ``spec``.

    ``start`` resumes from a previously completed level of the same schedule.
    ``on_level`` is called with every completed level (used for checkpoints).
    ``jobs`` extends the representatives of a level in that many processes.
    Raises :class:`BudgetExceeded` with the last completed level on a budget abort.
    """
    schedule = list(schedule) if schedule is not None else default_schedule(target)
    _check_schedule(schedule)
    if schedule[-1] != target:
        raise ValueError(f"schedule ends at {schedule[-1]}, not {target}")
    if start is None:
        t0 = time.perf_counter()
        base = base_set(schedule[0])
        current = DrawingSet(schedule[0], spec, base, schedule,
                             [LevelStats(schedule[0], len(base), len(base), time.perf_counter() - t0)])
        if on_level is not None:
            on_level(current)
    else:
        if start.graph not in schedule:
            raise ValueError(f"resume point {start.graph} is not on the schedule")
        current = start
    pos = schedule.index(current.graph)
    for graph in schedule[pos + 1:]:
        t0 = time.perf_counter()
        index, complete = _level(current.drawings, graph, spec, budget, jobs)
        if not complete:
            raise BudgetExceeded(f"budget exhausted while building {graph} ({spec})", current)
        stats = LevelStats(graph, index.offered, len(index), time.perf_counter() - t0)
        log.info("%s %s: general=%d non-iso=%d (%.2fs)", spec, graph, stats.raw_generated, stats.non_iso, stats.seconds)
        reps = [d.normalized() for d in index.drawings]
        current = DrawingSet(graph, spec, reps, schedule, current.levels + [stats])
        if on_level is not None:
            on_level(current)
        if not current.drawings:
            # nothing to extend: all larger graphs on the schedule are empty too
            for rest in schedule[schedule.index(graph) + 1:]:
                current = DrawingSet(rest, spec, [], schedule, current.levels + [LevelStats(rest, 0, 0, 0.0)])
            break
    return current


def membership(target: GraphSpec, spec: ClassSpec, schedule: Optional[Sequence[GraphSpec]] = None,
               budget: Optional[Budget] = None):
    """Member (with certificate), NonMember, or Unknown on budget abort."""
    schedule = list(schedule) if schedule is not None else default_schedule(target)
    if len(schedule) == 1:
        return Member(base_set(target)[0])
    try:
        prev = generate_all(schedule[-2], spec, schedule[:-1], budget)
    except BudgetExceeded:
        return Unknown("budget")
    for d in prev.drawings:
        for g in iter_vertex_extensions(d, target, spec):
            if not drawing_satisfies(spec, g):
                raise AssertionError("generated drawing violates its class")
            return Member(g)
        if budget is not None and not budget.charge(0):
            return Unknown("budget")
    return NonMember()


def _sample_score(spec: ClassSpec, d: Drawing) -> Tuple[int, int]:
    """Order for sampled children: fewest edges at their crossing quota, then fewest crossings.

    Saturated edges block later routes, while crossing-minimal drawings tend
    to saturate early; other classes have no quota and use the crossing count.
    """
    counts = [len(c) - 2 for c in d.chains]
    full = sum(c >= spec.k for c in counts) if spec.kind is Kind.KPLANAR else 0
    return full, sum(counts)


def sample_dfs(target: GraphSpec, spec: ClassSpec, budget: Optional[Budget] = None, seed: int = 0,
               width: int = 3, per_node: int = 2000, schedule: Optional[Sequence[GraphSpec]] = None):
    """Depth-first search for one certificate, keeping few children per level.

    At every level at most ``per_node`` extensions of the current drawing are
    produced and deduplicated; the ``width`` best children by
    :func:`_sample_score` (ties broken by a seeded shuffle) are explored in turn.  Returns Member or
    Unknown; Unknown says nothing about non-membership.
    """
    rng = random.Random(seed)
    schedule = list(schedule) if schedule is not None else default_schedule(target)
    _check_schedule(schedule)
    budget = budget if budget is not None else Budget(max_drawings=200_000)
    exhausted = False

    def descend(d: Drawing, depth: int) -> Optional[Drawing]:
        nonlocal exhausted
        if depth == len(schedule) - 1:
            return d
        graph = schedule[depth + 1]
        index = DedupeIndex(spec.iso_mode)
        for g in iter_vertex_extensions(d, graph, spec):
            index.add(g)
            if not budget.charge():
                exhausted = True
                break
            if index.offered >= per_node:
                break
        children = index.drawings
        rng.shuffle(children)
        children.sort(key=lambda g: _sample_score(spec, g))
        for child in children[:width]:
            if exhausted:
                return None
            found = descend(child, depth + 1)
            if found is not None:
                return found
        return None

    for d in base_set(schedule[0]):
        found = descend(d, 0)
        if found is not None:
            if not drawing_satisfies(spec, found):
                raise AssertionError("sampled certificate violates its class")
            found.validate()
            return Member(found)
        if exhausted:
            break
    return Unknown("budget" if exhausted else "search exhausted")
