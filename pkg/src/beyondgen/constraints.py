"""Beyond-planarity classes: global predicates and per-crossing prohibition."""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .embedding import Drawing

__all__ = [
    "Kind",
    "IsoMode",
    "ClassSpec",
    "PartialEdge",
    "ProhibitionContext",
    "drawing_satisfies",
    "gap_assignment_exists",
    "gap_assignment_bruteforce",
    "gap_pseudoforest_feasible",
    "crossing_graph",
    "crossing_prohibited",
    "fan_triangle_edges",
]


class Kind(enum.Enum):
    KPLANAR = "kplanar"
    QUASIPLANAR = "quasiplanar"
    FANPLANAR = "fanplanar"
    FANCROSSINGFREE = "fancrossingfree"
    GAPPLANAR = "gapplanar"


class IsoMode(enum.Enum):
    ORIENTATION_PRESERVING = "oriented"
    INCLUDE_REFLECTIONS = "reflections"


@dataclass(frozen=True)
class ClassSpec:
    kind: Kind
    k: int = 0
    iso_mode: IsoMode = IsoMode.INCLUDE_REFLECTIONS

    def __post_init__(self) -> None:
        if self.kind is Kind.KPLANAR and self.k < 1:
            raise ValueError("k-planar needs k >= 1")
        if self.kind is not Kind.KPLANAR and self.k:
            raise ValueError(f"{self.kind.value} takes no parameter")

    @classmethod
    def parse(cls, text: str, oriented: bool = False) -> "ClassSpec":
        t = text.strip().lower().replace("-", "").replace("_", "")
        mode = IsoMode.ORIENTATION_PRESERVING if oriented else IsoMode.INCLUDE_REFLECTIONS
        if t.endswith("planar") and t[:-6].isdigit():
            return cls(Kind.KPLANAR, int(t[:-6]), mode)
        if t == "simple":
            return cls.simple(mode)
        for kind in Kind:
            if kind is not Kind.KPLANAR and t == kind.value:
                return cls(kind, 0, mode)
        raise ValueError(f"unknown class {text!r}")

    @classmethod
    def simple(cls, iso_mode: IsoMode = IsoMode.INCLUDE_REFLECTIONS) -> "ClassSpec":
        """Only simplicity is enforced (no edge can be crossed more often than this)."""
        return cls(Kind.KPLANAR, 10**6, iso_mode)

    @property
    def name(self) -> str:
        if self.kind is Kind.KPLANAR:
            return "simple" if self.k >= 10**6 else f"{self.k}planar"
        return self.kind.value

    def with_mode(self, iso_mode: IsoMode) -> "ClassSpec":
        return ClassSpec(self.kind, self.k, iso_mode)

    def __str__(self) -> str:
        return self.name


# ---------------------------------------------------------------------- global checks


def crossing_graph(d: Drawing) -> List[Tuple[int, int]]:
    """One link per crossing vertex between the two original edges it joins."""
    return [c for c in d.cross_of if c is not None]


def _crosser_sets(d: Drawing) -> List[set]:
    out: List[set] = [set() for _ in d.edges]
    for c in d.cross_of:
        if c is not None:
            a, b = c
            out[a].add(b)
            out[b].add(a)
    return out


def _adjacent(edges: Sequence[Tuple[int, int]], e: int, f: int) -> bool:
    a, b = edges[e]
    c, g = edges[f]
    return a == c or a == g or b == c or b == g


def gap_pseudoforest_feasible(n_nodes: int, links: Sequence[Tuple[int, int]]) -> bool:
    """True iff no connected component has more links than nodes."""
    parent = list(range(n_nodes))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in links:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
    nodes: Dict[int, int] = {}
    count: Dict[int, int] = {}
    for x in range(n_nodes):
        r = find(x)
        nodes[r] = nodes.get(r, 0) + 1
    for a, _ in links:
        r = find(a)
        count[r] = count.get(r, 0) + 1
    return all(count[r] <= nodes[r] for r in count)


def _match_crossings(n_nodes: int, links: Sequence[Tuple[int, int]]) -> int:
    """Size of a maximum matching of crossings into distinct incident edges."""
    owner = [-1] * n_nodes

    def augment(c: int, seen: List[bool]) -> bool:
        for e in links[c]:
            if seen[e]:
                continue
            seen[e] = True
            if owner[e] < 0 or augment(owner[e], seen):
                owner[e] = c
                return True
        return False

    size = 0
    for c in range(len(links)):
        if augment(c, [False] * n_nodes):
            size += 1
    return size


def gap_assignment_exists(d: Drawing) -> bool:
    """Can every crossing be charged to one of its edges, at most one per edge?"""
    links = crossing_graph(d)
    n = len(d.edges)
    matched = _match_crossings(n, links) == len(links)
    assert matched == gap_pseudoforest_feasible(n, links), "matching and pseudoforest tests disagree"
    return matched


def gap_assignment_bruteforce(n_nodes: int, links: Sequence[Tuple[int, int]]) -> bool:
    for choice in itertools.product((0, 1), repeat=len(links)):
        load = [0] * n_nodes
        ok = True
        for link, side in zip(links, choice):
            e = link[side]
            load[e] += 1
            if load[e] > 1:
                ok = False
                break
        if ok:
            return True
    return False


def drawing_satisfies(spec: ClassSpec, d: Drawing) -> bool:
    kind = spec.kind
    if kind is Kind.KPLANAR:
        return all(len(ch) - 2 <= spec.k for ch in d.chains)
    if kind is Kind.GAPPLANAR:
        return gap_assignment_exists(d)
    crossers = _crosser_sets(d)
    edges = d.edges
    if kind is Kind.QUASIPLANAR:
        for e, xs in enumerate(crossers):
            for f, g in itertools.combinations(sorted(xs), 2):
                if g in crossers[f]:
                    return False
        return True
    for xs in crossers:
        for f, g in itertools.combinations(sorted(xs), 2):
            adj = _adjacent(edges, f, g)
            if kind is Kind.FANPLANAR and not adj:
                return False
            if kind is Kind.FANCROSSINGFREE and adj:
                return False
    return True


def fan_triangle_edges(d: Drawing) -> List[int]:
    """Edges whose crossers are pairwise adjacent but share no common endpoint."""
    out = []
    for e, xs in enumerate(_crosser_sets(d)):
        if len(xs) < 3:
            continue
        xs = sorted(xs)
        if not all(_adjacent(d.edges, f, g) for f, g in itertools.combinations(xs, 2)):
            continue
        common = set(d.edges[xs[0]])
        for f in xs[1:]:
            common &= set(d.edges[f])
        if not common:
            out.append(e)
    return out


# ---------------------------------------------------------------------- incremental test


@dataclass
class PartialEdge:
    """The edge being routed: its endpoints and the original edges crossed so far."""

    ends: Tuple[int, ...]
    crossed: Tuple[int, ...] = ()


class ProhibitionContext:
    """Per-drawing data used when deciding whether one more crossing is allowed.

    Built once for the drawing that existed before the new edge was started;
    the partial edge itself is described by a :class:`PartialEdge`.
    """

    def __init__(self, spec: ClassSpec, d: Drawing, ends: Sequence[int]):
        self.spec = spec
        self.edges = d.edges
        self.ends = tuple(v for v in ends if v >= 0)
        self.count = [len(ch) - 2 for ch in d.chains]
        self.crossers = _crosser_sets(d)
        self.incident = [bool(set(uv) & set(self.ends)) for uv in d.edges]
        if spec.kind is Kind.GAPPLANAR:
            self._gap_components(d)

    def _gap_components(self, d: Drawing) -> None:
        n = len(d.edges)
        parent = list(range(n))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        links = crossing_graph(d)
        for a, b in links:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb
        self.comp = [find(x) for x in range(n)]
        self.comp_nodes: Dict[int, int] = {}
        self.comp_links: Dict[int, int] = {}
        for x in range(n):
            self.comp_nodes[self.comp[x]] = self.comp_nodes.get(self.comp[x], 0) + 1
        for a, _ in links:
            r = self.comp[a]
            self.comp_links[r] = self.comp_links.get(r, 0) + 1

    def prohibited(self, crossed: Sequence[int], c: int) -> bool:
        """Would crossing original edge ``c`` next break simplicity or the class?"""
        if c >= len(self.edges) or self.incident[c] or c in crossed:
            return True
        spec = self.spec
        kind = spec.kind
        if kind is Kind.KPLANAR:
            return self.count[c] >= spec.k or len(crossed) >= spec.k
        if kind is Kind.QUASIPLANAR:
            xs = self.crossers[c]
            return any(e in xs for e in crossed)
        if kind is Kind.FANCROSSINGFREE:
            edges, ends = self.edges, self.ends
            for x in self.crossers[c]:
                a, b = edges[x]
                if a in ends or b in ends:
                    return True
            return any(_adjacent(edges, e, c) for e in crossed)
        if kind is Kind.FANPLANAR:
            edges, ends = self.edges, self.ends
            for x in self.crossers[c]:
                a, b = edges[x]
                if a not in ends and b not in ends:
                    return True
            return not all(_adjacent(edges, e, c) for e in crossed)
        # gap-planar: the merged component of the new edge must stay a pseudoforest
        comps = {self.comp[e] for e in crossed}
        comps.add(self.comp[c])
        nodes = 1 + sum(self.comp_nodes[r] for r in comps)
        links = len(crossed) + 1 + sum(self.comp_links.get(r, 0) for r in comps)
        return links > nodes


def crossing_prohibited(spec: ClassSpec, d: Drawing, partial: PartialEdge, candidate: int) -> bool:
    return ProhibitionContext(spec, d, partial.ends).prohibited(partial.crossed, candidate)
