"""Isomorphism of planarized drawings.

Two planarizations are isomorphic when some *base mapping* (one segment of
each, with an endpoint correspondence of matching vertex kinds) extends to a
bijection of vertices, segments and faces that keeps segment endpoints and
the cyclic order along every face.  :func:`try_extend` grows such a mapping
face by face.  :func:`canonical_key` encodes the same relation as a hashable
value: a breadth-first code from every admissible base dart, minimized, so
that deduplication of large sets needs one key per drawing instead of a
pairwise scan.
"""

from __future__ import annotations

import itertools
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .constraints import IsoMode
from .embedding import Drawing

__all__ = [
    "edge_type_census",
    "base_darts",
    "try_extend",
    "are_isomorphic",
    "canonical_key",
    "dedupe",
    "DedupeIndex",
    "bruteforce_isomorphic",
]

Census = Tuple[int, int, int]


def edge_type_census(d: Drawing) -> Census:
    """Segments with two real ends, one real end, and two crossing ends."""
    counts = [0, 0, 0]
    labels, org = d.labels, d.org
    for s in range(d.n_segments):
        counts[(labels[org[2 * s]] is None) + (labels[org[2 * s + 1]] is None)] += 1
    return counts[0], counts[1], counts[2]


def _base_type(census: Census) -> int:
    positive = [(c, t) for t, c in enumerate(census) if c > 0]
    return min(positive)[1]


def base_darts(d: Drawing, census: Optional[Census] = None) -> List[int]:
    """Darts of the least frequent segment type, both directions."""
    if census is None:
        census = edge_type_census(d)
    t = _base_type(census)
    labels, org = d.labels, d.org
    out = []
    for s in range(d.n_segments):
        if (labels[org[2 * s]] is None) + (labels[org[2 * s + 1]] is None) == t:
            out.extend((2 * s, 2 * s + 1))
    return out


def try_extend(g1: Drawing, g2: Drawing, d1: int, d2: int, reverse: bool = False) -> bool:
    """Grow the base mapping ``d1 -> d2`` face by face; report whether it closes.

    With ``reverse`` the second drawing is read in its mirror image, i.e. the
    face left of ``d1`` is matched with the face right of ``d2`` and that
    boundary is walked in the opposite sense.
    """
    if len(g1.org) != len(g2.org) or g1.n_vertices != g2.n_vertices:
        return False
    rot1 = g1.rot
    rot2 = g2.rinv if reverse else g2.rot
    org1, org2 = g1.org, g2.org
    real1 = [lab is not None for lab in g1.labels]
    real2 = [lab is not None for lab in g2.labels]
    deg1 = _degrees(g1)
    deg2 = _degrees(g2)
    nd = len(org1)
    dmap = [-1] * nd
    dinv = [-1] * nd
    vmap = [-1] * g1.n_vertices
    vinv = [-1] * g2.n_vertices
    face_done = [False] * nd  # dart of g1 whose face has been walked

    def bind_vertex(a: int, b: int) -> bool:
        if vmap[a] < 0 and vinv[b] < 0:
            if real1[a] != real2[b] or deg1[a] != deg2[b]:
                return False
            vmap[a] = b
            vinv[b] = a
            return True
        return vmap[a] == b and vinv[b] == a

    def bind_dart(a: int, b: int) -> bool:
        if dmap[a] < 0 and dinv[b] < 0:
            dmap[a] = b
            dinv[b] = a
            return True
        return dmap[a] == b and dinv[b] == a

    # the base mapping itself: a segment plus its endpoint correspondence
    if not (bind_vertex(org1[d1], org2[d2]) and bind_vertex(org1[d1 ^ 1], org2[d2 ^ 1])):
        return False
    pending = [(d1, d2)]
    while pending:
        a0, b0 = pending.pop()
        if face_done[a0]:
            if dmap[a0] != b0:
                return False
            continue
        a, b = a0, b0
        # walk both face boundaries in step, mapping corners and segments
        while True:
            if face_done[a]:
                return False
            face_done[a] = True
            if not (bind_dart(a, b) and bind_dart(a ^ 1, b ^ 1)):
                return False
            if not (bind_vertex(org1[a], org2[b]) and bind_vertex(org1[a ^ 1], org2[b ^ 1])):
                return False
            pending.append((a ^ 1, b ^ 1))
            a = rot1[a ^ 1]
            b = rot2[b ^ 1]
            if a == a0 or b == b0:
                if not (a == a0 and b == b0):
                    return False  # face degrees differ
                break
    return all(x >= 0 for x in dmap)


def _degrees(d: Drawing) -> List[int]:
    deg = [0] * d.n_vertices
    for v in d.org:
        deg[v] += 1
    return deg


def are_isomorphic(g1: Drawing, g2: Drawing, mode: IsoMode = IsoMode.INCLUDE_REFLECTIONS) -> bool:
    c1 = edge_type_census(g1)
    if c1 != edge_type_census(g2):
        return False
    if g1.n_segments == 0:
        return g1.n_vertices == g2.n_vertices
    d1 = base_darts(g1, c1)[0]
    orientations = (False, True) if mode is IsoMode.INCLUDE_REFLECTIONS else (False,)
    for reverse in orientations:
        for d2 in base_darts(g2, c1):
            if try_extend(g1, g2, d1, d2, reverse):
                return True
    return False


# ---------------------------------------------------------------------- canonical codes


def _bfs_code(org: List[int], rot: List[int], real: List[bool], nv: int, start: int, best: Optional[List[int]]):
    """Breadth-first code of the map seen from ``start``.

    Returns None as soon as the code is known to exceed ``best``.
    """
    lab = [-1] * nv
    lab[org[start]] = 0
    entry = [start]
    out: List[int] = []
    tight = best is not None  # out is still a prefix of best
    done = 0
    i = 0
    while i < len(entry):
        e = entry[i]
        i += 1
        out.append(-1 if real[org[e]] else -2)
        x = e
        while True:
            y = x ^ 1
            h = org[y]
            lv = lab[h]
            if lv < 0:
                lv = lab[h] = len(entry)
                entry.append(y)
            out.append(lv)
            x = rot[x]
            if x == e:
                break
        if tight:
            n = len(out)
            mine = out[done:n]
            theirs = best[done:n]
            if mine != theirs:
                if mine > theirs:
                    return None
                tight = False
            done = n
    return out


def canonical_key(d: Drawing, mode: IsoMode = IsoMode.INCLUDE_REFLECTIONS) -> tuple:
    """Hashable key; equal keys exactly when :func:`are_isomorphic` holds."""
    census = edge_type_census(d)
    org = d.org
    real = [lab is not None for lab in d.labels]
    nv = d.n_vertices
    best: Optional[List[int]] = None
    rots = (d.rot, d.rinv) if mode is IsoMode.INCLUDE_REFLECTIONS else (d.rot,)
    for rot in rots:
        for start in base_darts(d, census):
            code = _bfs_code(org, rot, real, nv, start, best)
            if code is not None and (best is None or code < best):
                best = code
    return census, tuple(best) if best is not None else ()


class DedupeIndex:
    """Streaming filter keeping the first drawing of every isomorphism class."""

    def __init__(self, mode: IsoMode = IsoMode.INCLUDE_REFLECTIONS):
        self.mode = mode
        self._seen: Dict[tuple, int] = {}
        self.drawings: List[Drawing] = []
        self.offered = 0

    def add(self, d: Drawing) -> bool:
        self.offered += 1
        key = canonical_key(d, self.mode)
        if key in self._seen:
            return False
        self._seen[key] = len(self.drawings)
        self.drawings.append(d)
        return True

    def __contains__(self, d: Drawing) -> bool:
        return canonical_key(d, self.mode) in self._seen

    def __len__(self) -> int:
        return len(self.drawings)


def dedupe(drawings: Iterable[Drawing], mode: IsoMode = IsoMode.INCLUDE_REFLECTIONS) -> List[Drawing]:
    index = DedupeIndex(mode)
    for d in drawings:
        index.add(d)
    return index.drawings


# ---------------------------------------------------------------------- oracle


def bruteforce_isomorphic(g1: Drawing, g2: Drawing, mode: IsoMode = IsoMode.INCLUDE_REFLECTIONS) -> bool:
    """Try every kind- and degree-preserving vertex bijection; small drawings only."""
    n = g1.n_vertices
    if n != g2.n_vertices or g1.n_segments != g2.n_segments:
        return False
    deg1, deg2 = _degrees(g1), _degrees(g2)
    cls1 = [(g1.labels[v] is None, deg1[v]) for v in range(n)]
    cls2 = [(g2.labels[v] is None, deg2[v]) for v in range(n)]
    if sorted(cls1) != sorted(cls2):
        return False
    dart2 = {(g2.org[x], g2.org[x ^ 1]): x for x in range(len(g2.org))}
    groups: Dict[tuple, List[int]] = {}
    for v in range(n):
        groups.setdefault(cls1[v], []).append(v)
    keys = sorted(groups)
    targets = [[w for w in range(n) if cls2[w] == k] for k in keys]
    rot2s = [g2.rot, g2.rinv] if mode is IsoMode.INCLUDE_REFLECTIONS else [g2.rot]
    for choice in itertools.product(*(itertools.permutations(t) for t in targets)):
        perm = [0] * n
        for k, images in zip(keys, choice):
            for v, w in zip(groups[k], images):
                perm[v] = w
        dmap = []
        for x in range(len(g1.org)):
            y = dart2.get((perm[g1.org[x]], perm[g1.org[x ^ 1]]))
            if y is None:
                break
            dmap.append(y)
        else:
            for rot2 in rot2s:
                if all(rot2[dmap[x]] == dmap[g1.rot[x]] for x in range(len(dmap))):
                    return True
    return False
