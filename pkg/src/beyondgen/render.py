"""SVG export of a planarization via a barycentric (Tutte) layout.

The outer face is pinned to a regular polygon and every other vertex is
placed at the average of its neighbours.  Planarizations need not be
3-connected, so each layout is audited; on failure another outer face is
tried, and after that every inner face is filled with a ring of dummy
vertices and a centre (used for the layout only), which removes the
separation pairs that let parts of the drawing collapse onto each other.
"""

from __future__ import annotations

import math
from typing import List, Optional, Sequence, Union
from xml.sax.saxutils import escape

import numpy as np

from .embedding import Drawing

__all__ = ["RenderError", "layout", "audit_layout", "render_svg"]


class RenderError(RuntimeError):
    pass


def _boundary_vertices(d: Drawing, darts: Sequence[int]) -> List[int]:
    return [d.org[x] for x in darts]


def _tutte(d: Drawing, outer: Sequence[int], stellate: bool) -> np.ndarray:
    fid, _ = d.face_ids()
    ring = _boundary_vertices(d, outer)
    n = d.n_vertices
    nbrs: List[List[int]] = [[] for _ in range(n)]
    for x in range(len(d.org)):
        nbrs[d.org[x]].append(d.org[x ^ 1])
    total = n
    if stellate:
        # a ring of fresh vertices inside every inner face, each joined to
        # two consecutive boundary occurrences, plus a centre on the ring;
        # repeated boundary vertices get distinct ring neighbours this way
        outer_face = fid[outer[0]]
        for f in d.faces():
            if f.id == outer_face:
                continue
            walk = _boundary_vertices(d, f.boundary)
            k = len(walk)
            ring_ids = list(range(total, total + k))
            centre = total + k
            total += k + 1
            nbrs.extend([] for _ in range(k + 1))
            for i, w in enumerate(ring_ids):
                for v in (walk[i], walk[(i + 1) % k], ring_ids[(i + 1) % k], centre):
                    nbrs[w].append(v)
                    nbrs[v].append(w)
    pos = np.zeros((total, 2))
    fixed = np.zeros(total, dtype=bool)
    k = len(ring)
    for i, v in enumerate(ring):
        t = 2 * math.pi * i / k
        pos[v] = (math.cos(t), math.sin(t))
        fixed[v] = True
    free = np.flatnonzero(~fixed)
    if free.size:
        where = {v: i for i, v in enumerate(free)}
        lap = np.zeros((free.size, free.size))
        rhs = np.zeros((free.size, 2))
        for v in free:
            i = where[v]
            lap[i, i] = len(nbrs[v])
            for w in nbrs[v]:
                if fixed[w]:
                    rhs[i] += pos[w]
                else:
                    lap[i, where[w]] -= 1
        try:
            pos[free] = np.linalg.solve(lap, rhs)
        except np.linalg.LinAlgError as exc:
            raise RenderError(f"singular layout system: {exc}") from None
    return pos[:n]


def _orient(p, q, r) -> float:
    return (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])


def _segments_touch(p1, p2, q1, q2, eps: float) -> bool:
    """True if closed segments come within the orientation tolerance of meeting."""
    d1 = _orient(q1, q2, p1)
    d2 = _orient(q1, q2, p2)
    d3 = _orient(p1, p2, q1)
    d4 = _orient(p1, p2, q2)
    if ((d1 > eps and d2 < -eps) or (d1 < -eps and d2 > eps)) and ((d3 > eps and d4 < -eps) or (d3 < -eps and d4 > eps)):
        return True

    def on(a, b, c, dv):
        return abs(dv) <= eps and min(a[0], b[0]) - eps <= c[0] <= max(a[0], b[0]) + eps \
            and min(a[1], b[1]) - eps <= c[1] <= max(a[1], b[1]) + eps

    return on(q1, q2, p1, d1) or on(q1, q2, p2, d2) or on(p1, p2, q1, d3) or on(p1, p2, q2, d4)


def audit_layout(d: Drawing, pos: np.ndarray, point_tol: float = 1e-9, cross_tol: float = 1e-6) -> Optional[str]:
    """Reason why ``pos`` is not a plane straight-line drawing, or None."""
    span = float(np.ptp(pos, axis=0).max()) if len(pos) else 0.0
    if span <= 0:
        return "all points coincide"
    for u in range(len(pos)):
        dist = np.hypot(*(pos[u + 1:] - pos[u]).T) if u + 1 < len(pos) else np.zeros(0)
        if dist.size and dist.min() <= point_tol * span:
            return f"vertex {u} coincides with another vertex"
    segs = [(d.org[2 * s], d.org[2 * s + 1]) for s in range(d.n_segments)]
    eps = cross_tol * span * span
    for i, (a, b) in enumerate(segs):
        for c, e in segs[i + 1:]:
            if a in (c, e) or b in (c, e):
                continue
            if _segments_touch(pos[a], pos[b], pos[c], pos[e], eps):
                return f"segments {a}-{b} and {c}-{e} meet away from a vertex"
    return None


def layout(d: Drawing, face: Union[str, int] = "auto") -> np.ndarray:
    """Planar straight-line positions of every planarization vertex."""
    faces = d.faces()
    if face == "auto":
        order = sorted(faces, key=lambda f: (-f.degree, f.id))
    else:
        chosen = [f for f in faces if f.id == int(face)]
        if not chosen:
            raise RenderError(f"no face {face}")
        order = chosen + sorted((f for f in faces if f.id != int(face)), key=lambda f: (-f.degree, f.id))
    reasons = []
    for stellate in (False, True):
        for f in order:
            ring = _boundary_vertices(d, f.boundary)
            if len(set(ring)) != len(ring):
                continue  # boundary is not a simple cycle
            try:
                pos = _tutte(d, f.boundary, stellate)
            except RenderError as exc:
                reasons.append(str(exc))
                continue
            why = audit_layout(d, pos)
            if why is None:
                return pos
            reasons.append(f"face {f.id}: {why}")
    raise RenderError("no usable layout: " + "; ".join(reasons[-3:]))


def render_svg(d: Drawing, face: Union[str, int] = "auto", size: int = 480, title: Optional[str] = None) -> str:
    """SVG with labelled real vertices, crossing markers and one polyline per edge."""
    pos = layout(d, face)
    margin = 28.0
    lo, hi = pos.min(axis=0), pos.max(axis=0)
    scale = (size - 2 * margin) / float(max(hi - lo))
    pts = (pos - lo) * scale + margin
    pts[:, 1] = size - pts[:, 1]  # y axis points down in SVG

    def xy(v: int) -> str:
        return f"{pts[v, 0]:.2f},{pts[v, 1]:.2f}"

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">']
    if title:
        out.append(f"<title>{escape(title)}</title>")
    out.append('<g fill="none" stroke="#333" stroke-width="1.5">')
    for e, chain in enumerate(d.chains):
        out.append(f'<polyline class="edge" data-edge="{e}" points="{" ".join(xy(v) for v in chain)}"/>')
    out.append("</g>")
    for x in d.crossing_vertices():
        out.append(f'<rect class="crossing" x="{pts[x, 0] - 3:.2f}" y="{pts[x, 1] - 3:.2f}" width="6" height="6" fill="#c00"/>')
    for v in d.real_vertices():
        out.append(f'<circle class="vertex" cx="{pts[v, 0]:.2f}" cy="{pts[v, 1]:.2f}" r="10" fill="#fff" stroke="#000"/>')
        out.append(f'<text x="{pts[v, 0]:.2f}" y="{pts[v, 1] + 4:.2f}" font-size="10" text-anchor="middle">'
                   f"{escape(d.labels[v])}</text>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
