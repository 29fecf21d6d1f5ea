"""Enumeration of half-pathways and pathways for new edges.

The partial curve is inserted into the drawing as it grows, so the face that
holds its free end is always a face of the updated arrangement.  A curve can
therefore never cross itself: its own segments are simply prohibited.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, List, Tuple

from .constraints import ClassSpec, ProhibitionContext
from .embedding import Drawing

__all__ = [
    "HalfPathway",
    "Pathway",
    "enumerate_half_pathways",
    "enumerate_pathways",
    "iter_half_pathways",
    "iter_pathways",
]


@dataclass(frozen=True)
class HalfPathway:
    anchor: int  # corner dart of the anchor vertex in the input drawing
    crossed: Tuple[int, ...]  # crossed darts of the input drawing, in order
    prohibited: frozenset
    destination: int  # face of ``drawing`` holding the new vertex
    drawing: Drawing

    @property
    def length(self) -> int:
        return len(self.crossed)


@dataclass(frozen=True)
class Pathway:
    start: int  # corner dart of the source vertex
    crossed: Tuple[int, ...]
    prohibited: frozenset
    target: int
    end: int  # corner dart of the target vertex
    drawing: Drawing

    @property
    def length(self) -> int:
        return len(self.crossed)


def _prohibited_set(ctx: ProhibitionContext, crossed: Tuple[int, ...]) -> frozenset:
    return frozenset(e for e in range(len(ctx.edges)) if ctx.prohibited(crossed, e))


def iter_half_pathways(
    d: Drawing, u1: int, spec: ClassSpec, label: str
) -> Iterator[Tuple[int, Tuple[int, ...], Drawing, int]]:
    """Yield ``(anchor, crossed darts, drawing, tip dart)`` for every valid half-pathway.

    Each yielded drawing contains the new real vertex ``label`` (with id
    ``d.n_vertices``) joined to ``u1``.
    """
    ctx = ProhibitionContext(spec, d, (u1,))
    seg_edge_limit = len(d.edges)
    prohibited = ctx.prohibited
    for anchor in d.darts_at(u1):
        g, tip = d.begin_edge(anchor, label)
        stack = [(g, tip, (), ())]
        while stack:
            g, tip, crossed, darts = stack.pop()
            yield anchor, darts, g, tip
            seg_edge = g.seg_edge
            children = []
            for x in g.face_walk(tip):
                c = seg_edge[x >> 1]
                if c >= seg_edge_limit or prohibited(crossed, c):
                    continue
                g2, tip2 = g.cross(tip, x)
                children.append((g2, tip2, crossed + (c,), darts + (x,)))
            stack.extend(reversed(children))


def iter_pathways(
    d: Drawing, v: int, target: int, spec: ClassSpec
) -> Iterator[Tuple[int, Tuple[int, ...], int, Drawing]]:
    """Yield ``(start corner, crossed darts, end corner, drawing)`` for every valid pathway."""
    ctx = ProhibitionContext(spec, d, (v, target))
    seg_edge_limit = len(d.edges)
    prohibited = ctx.prohibited
    for start in d.darts_at(v):
        g, tip = d.begin_edge(start)
        stack = [(g, tip, (), ())]
        while stack:
            g, tip, crossed, darts = stack.pop()
            org, seg_edge = g.org, g.seg_edge
            walk = g.face_walk(tip)
            for x in walk:
                if org[x ^ 1] == target:
                    yield start, darts, x ^ 1, g.close_edge(tip, x ^ 1)
            children = []
            for x in walk:
                c = seg_edge[x >> 1]
                if c >= seg_edge_limit or prohibited(crossed, c):
                    continue
                g2, tip2 = g.cross(tip, x)
                children.append((g2, tip2, crossed + (c,), darts + (x,)))
            stack.extend(reversed(children))


def enumerate_half_pathways(d: Drawing, u1: int, spec: ClassSpec, label: str = "new") -> List[HalfPathway]:
    ctx = ProhibitionContext(spec, d, (u1,))
    out = []
    for anchor, darts, g, tip in iter_half_pathways(d, u1, spec, label):
        crossed = tuple(d.seg_edge[x >> 1] for x in darts)
        fid, _ = g.face_ids()
        out.append(HalfPathway(anchor, darts, _prohibited_set(ctx, crossed), fid[tip], g))
    return out


def enumerate_pathways(d: Drawing, v: int, target: int, spec: ClassSpec) -> List[Pathway]:
    if d.edge_between(v, target) >= 0:
        raise ValueError(f"edge ({v}, {target}) is already drawn")
    ctx = ProhibitionContext(spec, d, (v, target))
    out = []
    for start, darts, end, g in iter_pathways(d, v, target, spec):
        crossed = tuple(d.seg_edge[x >> 1] for x in darts)
        out.append(Pathway(start, darts, _prohibited_set(ctx, crossed), target, end, g))
    return out
