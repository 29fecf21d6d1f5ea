"""Planarized drawings on the sphere as flat half-edge maps.

A drawing is stored as a rotation system over *darts*.  Segment ``s`` of the
planarization owns darts ``2*s`` and ``2*s + 1``, which are twins (``d ^ 1``).
For every dart ``d`` we keep its origin vertex, the next dart counter-clockwise
around that origin (``rot``) and the previous one (``rinv``).  Faces are the
orbits of ``d -> rot[d ^ 1]``; the face of ``d`` lies on its right-hand side.

A *corner* is named by the dart ``c`` leaving a vertex: it is the angle between
``c`` and ``rot[c]``.  A new dart spliced after ``c`` lands in that corner.

Drawings are never mutated once handed out.  All growth goes through
:meth:`Drawing.begin_edge`, :meth:`Drawing.cross` and :meth:`Drawing.close_edge`
which return fresh copies.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple

__all__ = [
    "GraphSpec",
    "Face",
    "Drawing",
    "EmbeddingError",
    "InvariantError",
    "PathwayError",
    "TIP",
]

TIP = -1  # origin of the free end of a curve that is still being routed


class EmbeddingError(ValueError):
    """Malformed rotation system (twin or orbit mismatch)."""


class InvariantError(EmbeddingError):
    """A drawing violates planarity, simplicity or crossing structure."""


class PathwayError(EmbeddingError):
    """A curve cannot be realized in the current arrangement."""


_GRAPH_RE = re.compile(r"^K(\d+)(?:,(\d+))?$")


@dataclass(frozen=True, order=True)
class GraphSpec:
    """A complete graph ``K<n>`` (``b == 0``) or complete bipartite ``K<a>,<b>``."""

    a: int
    b: int = 0

    def __post_init__(self) -> None:
        if self.b == 0:
            if self.a < 3:
                raise ValueError(f"complete graph needs n >= 3, got K{self.a}")
        else:
            if self.a < 2 or self.b < 2:
                raise ValueError(f"bipartite graph needs both sides >= 2, got K{self.a},{self.b}")
            if self.a > self.b:
                lo, hi = self.b, self.a
                object.__setattr__(self, "a", lo)
                object.__setattr__(self, "b", hi)

    @property
    def bipartite(self) -> bool:
        return self.b > 0

    @property
    def n_vertices(self) -> int:
        return self.a + self.b

    @property
    def n_edges(self) -> int:
        return self.a * self.b if self.bipartite else self.a * (self.a - 1) // 2

    @classmethod
    def parse(cls, text: str) -> "GraphSpec":
        m = _GRAPH_RE.match(text.strip().upper().replace(" ", "").replace("_", "").replace("{", "").replace("}", ""))
        if not m:
            raise ValueError(f"graph must look like K<n> or K<a>,<b>: {text!r}")
        a = int(m.group(1))
        b = int(m.group(2)) if m.group(2) else 0
        return cls(a, b)

    def __str__(self) -> str:
        return f"K{self.a},{self.b}" if self.bipartite else f"K{self.a}"


@dataclass(frozen=True)
class Face:
    """One face of the planarization: its boundary darts in walking order.

    ``corners[i]`` is the vertex reached at the end of ``boundary[i]``.
    """

    id: int
    boundary: Tuple[int, ...]
    corners: Tuple[int, ...]

    @property
    def degree(self) -> int:
        return len(self.boundary)


class Drawing:
    """Planarization of a simple topological drawing on the sphere."""

    __slots__ = ("graph", "labels", "cross_of", "org", "rot", "rinv", "seg_edge", "edges", "chains")

    def __init__(self) -> None:
        self.graph: Optional[GraphSpec] = None
        self.labels: List[Optional[str]] = []  # "a0", "b2", "k3" for real vertices; None for crossings
        self.cross_of: List[Optional[Tuple[int, int]]] = []
        self.org: List[int] = []
        self.rot: List[int] = []
        self.rinv: List[int] = []
        self.seg_edge: List[int] = []
        self.edges: List[Tuple[int, int]] = []
        self.chains: List[List[int]] = []  # vertex sequence of every original edge, endpoint to endpoint

    # ------------------------------------------------------------------ basics

    @property
    def n_vertices(self) -> int:
        return len(self.labels)

    @property
    def n_segments(self) -> int:
        return len(self.seg_edge)

    @property
    def n_crossings(self) -> int:
        return sum(1 for c in self.cross_of if c is not None)

    def is_real(self, v: int) -> bool:
        return self.labels[v] is not None

    def real_vertices(self) -> List[int]:
        return [v for v, lab in enumerate(self.labels) if lab is not None]

    def crossing_vertices(self) -> List[int]:
        return [v for v, c in enumerate(self.cross_of) if c is not None]

    def vertex_by_label(self, label: str) -> int:
        return self.labels.index(label)

    def head(self, d: int) -> int:
        return self.org[d ^ 1]

    def face_next(self, d: int) -> int:
        return self.rot[d ^ 1]

    def darts_at(self, v: int, start: Optional[int] = None) -> List[int]:
        """Darts leaving ``v`` in counter-clockwise order."""
        if start is None:
            start = self.org.index(v)
        out = [start]
        d = self.rot[start]
        while d != start:
            out.append(d)
            d = self.rot[d]
        return out

    def first_darts(self) -> List[int]:
        first = [-1] * self.n_vertices
        for d, v in enumerate(self.org):
            if v >= 0 and first[v] < 0:
                first[v] = d
        return first

    def degree(self, v: int) -> int:
        return len(self.darts_at(v))

    def crossings_on(self, e: int) -> List[int]:
        return self.chains[e][1:-1]

    def crossing_count(self, e: int) -> int:
        return len(self.chains[e]) - 2

    def crossers(self, e: int) -> List[int]:
        """Original edges crossing ``e``, in order along ``e``."""
        out = []
        for x in self.chains[e][1:-1]:
            a, b = self.cross_of[x]
            out.append(b if a == e else a)
        return out

    def edges_adjacent(self, e: int, f: int) -> bool:
        a, b = self.edges[e]
        return a in self.edges[f] or b in self.edges[f]

    def edge_between(self, u: int, w: int) -> int:
        for i, (a, b) in enumerate(self.edges):
            if (a == u and b == w) or (a == w and b == u):
                return i
        return -1

    def segment_kind(self, s: int) -> int:
        """0 for real-real, 1 for real-crossing, 2 for crossing-crossing."""
        return (self.labels[self.org[2 * s]] is None) + (self.labels[self.org[2 * s + 1]] is None)

    # ------------------------------------------------------------------ faces

    def face_walk(self, d: int) -> List[int]:
        rot = self.rot
        out = [d]
        x = rot[d ^ 1]
        while x != d:
            out.append(x)
            x = rot[x ^ 1]
        return out

    def face_ids(self) -> Tuple[List[int], int]:
        """Face index per dart and the number of faces."""
        fid = [-1] * len(self.org)
        rot = self.rot
        nf = 0
        for d in range(len(fid)):
            if fid[d] >= 0:
                continue
            x = d
            while fid[x] < 0:
                fid[x] = nf
                x = rot[x ^ 1]
            if x != d:
                raise EmbeddingError("face traversal is not a permutation")
            nf += 1
        return fid, nf

    def faces(self) -> List[Face]:
        fid, nf = self.face_ids()
        starts = [-1] * nf
        for d, f in enumerate(fid):
            if starts[f] < 0:
                starts[f] = d
        out = []
        for f, d in enumerate(starts):
            walk = self.face_walk(d)
            out.append(Face(f, tuple(walk), tuple(self.org[x ^ 1] for x in walk)))
        return out

    def dual_neighbors(self, f: int) -> List[Tuple[int, int]]:
        """``(segment, face across it)`` for every boundary dart of face ``f``."""
        fid, nf = self.face_ids()
        if not 0 <= f < nf:
            raise ValueError(f"unknown face id {f}")
        start = fid.index(f)
        return [(d >> 1, fid[d ^ 1]) for d in self.face_walk(start)]

    def corners(self, v: int) -> List[int]:
        return self.darts_at(v)

    def face_degrees(self) -> List[int]:
        return sorted(f.degree for f in self.faces())

    # ------------------------------------------------------------------ growth

    def copy(self) -> "Drawing":
        c = Drawing.__new__(Drawing)
        c.graph = self.graph
        c.labels = self.labels[:]
        c.cross_of = self.cross_of[:]
        c.org = self.org[:]
        c.rot = self.rot[:]
        c.rinv = self.rinv[:]
        c.seg_edge = self.seg_edge[:]
        c.edges = self.edges[:]
        c.chains = self.chains[:]
        return c

    def _add_segment(self, u: int, w: int, edge: int) -> int:
        s = len(self.seg_edge)
        self.seg_edge.append(edge)
        self.org.extend((u, w))
        self.rot.extend((2 * s, 2 * s + 1))
        self.rinv.extend((2 * s, 2 * s + 1))
        return s

    def _splice_after(self, c: int, n: int) -> None:
        rot, rinv = self.rot, self.rinv
        nxt = rot[c]
        rot[c] = n
        rinv[n] = c
        rot[n] = nxt
        rinv[nxt] = n

    def _replace(self, old: int, new: int) -> None:
        rot, rinv = self.rot, self.rinv
        p, q = rinv[old], rot[old]
        if p == old:
            rot[new] = rinv[new] = new
        else:
            rot[p] = new
            rinv[new] = p
            rot[new] = q
            rinv[q] = new
        rot[old] = rinv[old] = old

    def begin_edge(self, corner: int, new_label: Optional[str] = None) -> Tuple["Drawing", int]:
        """Start a new original edge at the corner ``corner``.

        With ``new_label`` the far end is a fresh real vertex sitting in the
        corner's face; otherwise the far end is a free tip (origin ``TIP``)
        that must later be closed with :meth:`close_edge`.  Returns the new
        drawing and the dart leaving the far end.
        """
        d = self.copy()
        u = d.org[corner]
        if new_label is not None:
            t = len(d.labels)
            d.labels.append(new_label)
            d.cross_of.append(None)
        else:
            t = TIP
        e = len(d.edges)
        d.edges.append((u, t))
        d.chains.append([u, t])
        s = d._add_segment(u, t, e)
        d._splice_after(corner, 2 * s)
        return d, 2 * s + 1

    def cross(self, tip: int, dart: int) -> Tuple["Drawing", int]:
        """Extend the curve ending at ``tip`` across the segment of ``dart``.

        ``dart`` must lie on the face containing the tip, so the curve enters
        from the right-hand side of ``dart`` and leaves to the other side.
        Returns the new drawing and the new tip dart.
        """
        g = self.copy()
        org = g.org
        s = dart >> 1
        e_old = g.seg_edge[s]
        e_new = g.seg_edge[tip >> 1]
        if e_old == e_new:
            raise PathwayError("curve would cross itself")
        a, b = org[dart], org[dart ^ 1]
        x = len(g.labels)
        g.labels.append(None)
        g.cross_of.append((e_old, e_new) if e_old < e_new else (e_new, e_old))
        t = org[tip]
        # dart keeps a -> x; dart^1 now leaves x; a new segment x -> b takes its place at b
        s2 = g._add_segment(x, b, e_old)
        g._replace(dart ^ 1, 2 * s2 + 1)
        org[dart ^ 1] = x
        # tip dart (t -> p) becomes x -> p; a new segment x -> t carries the free end
        s3 = g._add_segment(x, t, e_new)
        if t != TIP:
            g._replace(tip, 2 * s3 + 1)
        org[tip] = x
        ring = (2 * s2, 2 * s3, dart ^ 1, tip)
        rot, rinv = g.rot, g.rinv
        for i in range(4):
            rot[ring[i]] = ring[(i + 1) % 4]
            rinv[ring[(i + 1) % 4]] = ring[i]
        chain = g.chains[e_old][:]
        i = chain.index(a)
        if i + 1 < len(chain) and chain[i + 1] == b:
            chain.insert(i + 1, x)
        else:
            chain.insert(i, x)
        g.chains[e_old] = chain
        nchain = g.chains[e_new][:]
        nchain.insert(len(nchain) - 1, x)
        g.chains[e_new] = nchain
        return g, 2 * s3 + 1

    def close_edge(self, tip: int, corner: int) -> "Drawing":
        """Attach the free tip to the corner ``corner`` of a vertex."""
        if self.org[tip] != TIP:
            raise PathwayError("dart is not a free tip")
        g = self.copy()
        u = g.org[corner]
        e = g.seg_edge[tip >> 1]
        g.org[tip] = u
        g._splice_after(corner, tip)
        a, _ = g.edges[e]
        g.edges[e] = (a, u)
        chain = g.chains[e][:]
        chain[-1] = u
        g.chains[e] = chain
        return g

    # ------------------------------------------------------------------ checks

    def validate(self) -> None:
        """Raise :class:`InvariantError` unless every drawing invariant holds."""
        nd = len(self.org)
        if nd % 2 or len(self.rot) != nd or len(self.rinv) != nd or len(self.seg_edge) * 2 != nd:
            raise EmbeddingError("dart arrays have inconsistent lengths")
        rot, rinv, org = self.rot, self.rinv, self.org
        for d in range(nd):
            if org[d] < 0 or org[d] >= self.n_vertices:
                raise EmbeddingError(f"dart {d} has no valid origin")
            if rinv[rot[d]] != d:
                raise EmbeddingError(f"rotation inverse broken at dart {d}")
            if org[rot[d]] != org[d]:
                raise EmbeddingError(f"rotation at dart {d} leaves its vertex")
            if org[d] == org[d ^ 1]:
                raise InvariantError(f"segment {d >> 1} is a loop")
        seen = [False] * nd
        nv = self.n_vertices
        first = self.first_darts()
        for v in range(nv):
            if first[v] < 0:
                raise InvariantError(f"vertex {v} is isolated")
            for d in self.darts_at(v, first[v]):
                seen[d] = True
        if not all(seen):
            raise EmbeddingError("a vertex rotation is not a single cycle")
        _, nf = self.face_ids()
        if nv - nd // 2 + nf != 2:
            raise InvariantError(f"Euler characteristic {nv - nd // 2 + nf} != 2")
        # planarization must be simple: no parallel segments
        pairs = set()
        for s in range(nd // 2):
            key = (min(org[2 * s], org[2 * s + 1]), max(org[2 * s], org[2 * s + 1]))
            if key in pairs:
                raise InvariantError(f"parallel segments between {key}")
            pairs.add(key)
        self._validate_edges(first)

    def _validate_edges(self, first: List[int]) -> None:
        org = self.org
        seg_at = {}
        for s, e in enumerate(self.seg_edge):
            seg_at[(org[2 * s], org[2 * s + 1])] = (2 * s, e)
            seg_at[(org[2 * s + 1], org[2 * s])] = (2 * s + 1, e)
        used = 0
        pair_crossings = set()
        for e, (chain, ends) in enumerate(zip(self.chains, self.edges)):
            if (chain[0], chain[-1]) != ends:
                raise InvariantError(f"edge {e} chain does not join its endpoints")
            if not (self.is_real(chain[0]) and self.is_real(chain[-1])):
                raise InvariantError(f"edge {e} has a non-real endpoint")
            if len(set(chain)) != len(chain):
                raise InvariantError(f"edge {e} passes a vertex twice")
            for p, q in zip(chain, chain[1:]):
                hit = seg_at.get((p, q))
                if hit is None or hit[1] != e:
                    raise InvariantError(f"edge {e} chain step {p}->{q} is not a segment of it")
                used += 1
            for x in chain[1:-1]:
                if self.cross_of[x] is None or e not in self.cross_of[x]:
                    raise InvariantError(f"edge {e} runs through non-crossing vertex {x}")
        if used != self.n_segments:
            raise InvariantError("some segments belong to no edge chain")
        for x, pair in enumerate(self.cross_of):
            if pair is None:
                continue
            e, f = pair
            if e == f or self.edges_adjacent(e, f):
                raise InvariantError(f"crossing {x} joins adjacent or identical edges")
            if pair in pair_crossings:
                raise InvariantError(f"edges {e} and {f} cross twice")
            pair_crossings.add(pair)
            ring = self.darts_at(x, first[x])
            if len(ring) != 4:
                raise InvariantError(f"crossing {x} has degree {len(ring)}")
            owners = [self.seg_edge[d >> 1] for d in ring]
            if owners[0] != owners[2] or owners[1] != owners[3] or {owners[0], owners[1]} != {e, f}:
                raise InvariantError(f"crossing {x} does not alternate between its edges")
        for v, lab in enumerate(self.labels):
            if (lab is None) == (self.cross_of[v] is None):
                raise InvariantError(f"vertex {v} is neither real nor crossing")

    # ------------------------------------------------------------------ construction

    @classmethod
    def from_rotations(
        cls,
        labels: Sequence[Optional[str]],
        cross_of: Sequence[Optional[Tuple[int, int]]],
        chains: Sequence[Sequence[int]],
        rotations: Sequence[Sequence[int]],
        graph: Optional[GraphSpec] = None,
        validate: bool = True,
    ) -> "Drawing":
        """Build a drawing from per-vertex neighbor rotations and edge chains."""
        d = cls()
        d.graph = graph
        d.labels = list(labels)
        d.cross_of = [tuple(sorted(c)) if c is not None else None for c in cross_of]
        dart_of = {}
        for e, chain in enumerate(chains):
            chain = list(chain)
            d.chains.append(chain)
            d.edges.append((chain[0], chain[-1]))
            for p, q in zip(chain, chain[1:]):
                if (p, q) in dart_of:
                    raise InvariantError(f"segment {p}-{q} listed twice")
                s = d._add_segment(p, q, e)
                dart_of[(p, q)] = 2 * s
                dart_of[(q, p)] = 2 * s + 1
        for v, ring in enumerate(rotations):
            try:
                ds = [dart_of[(v, w)] for w in ring]
            except KeyError as exc:
                raise EmbeddingError(f"rotation of {v} names a non-neighbor {exc}") from None
            for i, x in enumerate(ds):
                y = ds[(i + 1) % len(ds)]
                d.rot[x] = y
                d.rinv[y] = x
        if validate:
            d.validate()
        return d

    def normalized(self) -> "Drawing":
        """Equal drawing with darts numbered as a parsed record would number them.

        Enumeration order follows dart ids, so generation keeps its
        representatives in this form; a level read back from disk then
        extends exactly like the in-memory one.
        """
        return Drawing.from_rotations(self.labels, self.cross_of, self.chains, self.rotations(),
                                      graph=self.graph, validate=False)

    def rotations(self) -> List[List[int]]:
        first = self.first_darts()
        return [[self.head(x) for x in self.darts_at(v, first[v])] for v in range(self.n_vertices)]

    # ------------------------------------------------------------------ text format

    def to_text(self, class_name: str = "-") -> str:
        lines = [f"drawing {class_name} {self.graph if self.graph is not None else '-'}"]
        for v, lab in enumerate(self.labels):
            if lab is not None:
                lines.append(f"v {v} real {lab}")
            else:
                a, b = self.cross_of[v]
                lines.append(f"v {v} cross {a} {b}")
        for v, ring in enumerate(self.rotations()):
            k = ring.index(min(ring))
            ring = ring[k:] + ring[:k]
            lines.append("rot " + str(v) + " " + " ".join(map(str, ring)))
        for e, chain in enumerate(self.chains):
            lines.append(f"e {e} {chain[0]} {chain[-1]} crossings " + " ".join(map(str, chain[1:-1])))
        return "\n".join(line.rstrip() for line in lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> Tuple["Drawing", str]:
        """Parse one record; returns the drawing and its class name."""
        return parse_record(text.splitlines())

    # ------------------------------------------------------------------ misc

    def __repr__(self) -> str:
        return (
            f"Drawing({self.graph}, vertices={self.n_vertices}, "
            f"segments={self.n_segments}, crossings={self.n_crossings})"
        )


def parse_record(lines: Iterable[str]) -> Tuple[Drawing, str]:
    header = None
    labels: dict = {}
    cross: dict = {}
    rots: dict = {}
    chains: dict = {}
    for raw in lines:
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tok = line.split()
        try:
            if tok[0] == "drawing":
                header = tok
            elif tok[0] == "v":
                v = int(tok[1])
                if tok[2] == "real":
                    labels[v] = tok[3]
                elif tok[2] == "cross":
                    cross[v] = (int(tok[3]), int(tok[4]))
                else:
                    raise EmbeddingError(f"unknown vertex kind {tok[2]!r}")
            elif tok[0] == "rot":
                rots[int(tok[1])] = [int(t) for t in tok[2:]]
            elif tok[0] == "e":
                e, u, w = int(tok[1]), int(tok[2]), int(tok[3])
                if tok[4] != "crossings":
                    raise EmbeddingError(f"malformed edge line {line!r}")
                chains[e] = [u] + [int(t) for t in tok[5:]] + [w]
            else:
                raise EmbeddingError(f"unknown record line {line!r}")
        except (IndexError, ValueError) as exc:
            if isinstance(exc, EmbeddingError):
                raise
            raise EmbeddingError(f"malformed line {line!r}") from None
    if header is None or len(header) != 3:
        raise EmbeddingError("missing drawing header")
    nv = len(labels) + len(cross)
    if set(labels) | set(cross) != set(range(nv)) or set(rots) != set(range(nv)):
        raise EmbeddingError("vertex ids are not dense")
    if set(chains) != set(range(len(chains))):
        raise EmbeddingError("edge ids are not dense")
    graph = None if header[2] == "-" else GraphSpec.parse(header[2])
    d = Drawing.from_rotations(
        [labels.get(v) for v in range(nv)],
        [cross.get(v) for v in range(nv)],
        [chains[e] for e in range(len(chains))],
        [rots[v] for v in range(nv)],
        graph=graph,
    )
    return d, header[1]


def iter_records(text: str) -> Iterator[List[str]]:
    """Split a multi-drawing file into record line blocks."""
    block: List[str] = []
    for line in text.splitlines():
        if line.startswith("drawing "):
            if block:
                yield block
            block = [line]
        elif line.strip() and not line.lstrip().startswith("#"):
            if not block:
                raise EmbeddingError(f"record line before any drawing header: {line!r}")
            block.append(line)
    if block:
        yield block
