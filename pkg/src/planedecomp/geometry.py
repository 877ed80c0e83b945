"""Exact integer predicates on planar points.

Everything downstream (cell assignment, witness search, planarity checks,
verification) reduces to the orientation sign of a point triple, so this
module is the single place where geometry happens.  All predicates run on
integer coordinates with exact arithmetic; there is no floating point and no
epsilon anywhere in this file.

Coordinates are bounded by ``M_MAX`` (2**62).  Python integers do not
overflow, but the bound keeps file formats, hashing and rendering sane, and
it documents the range within which the bulk (numpy int64) helpers below are
allowed to operate: those guard at ``BULK_COORD_MAX`` (2**29, so the
orientation determinant stays within int64) and fall back to the scalar
predicates beyond it.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import GeneralPositionError, InputDomainError

M_MAX = 2**62
BULK_COORD_MAX = 2**29


@dataclass(frozen=True, order=True)
class Point:
    """An exact lattice point.  Immutable, hashable, lexicographically ordered."""

    x: int
    y: int

    def __post_init__(self) -> None:
        if not (isinstance(self.x, int) and isinstance(self.y, int)):
            raise InputDomainError(f"coordinates must be int, got {self!r}")
        if abs(self.x) > M_MAX or abs(self.y) > M_MAX:
            raise InputDomainError(f"coordinate exceeds M_MAX=2**62: {self!r}")


@dataclass(frozen=True)
class Segment:
    """A closed segment with distinct endpoints."""

    a: Point
    b: Point

    def __post_init__(self) -> None:
        if self.a == self.b:
            raise InputDomainError(f"degenerate segment at {self.a!r}")


class Orientation(enum.IntEnum):
    """Sign of the orientation determinant for an ordered point triple."""

    CW = -1
    COLLINEAR = 0
    CCW = 1


def orientation(a: Point, b: Point, c: Point) -> Orientation:
    """Exact sign of (b-a) x (c-a).

    CCW means c lies strictly left of the directed line a->b.  The value of
    the enum equals the determinant sign, so orientation(a,b,c) can be used
    directly in sign arithmetic.
    """
    d = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
    if d > 0:
        return Orientation.CCW
    if d < 0:
        return Orientation.CW
    return Orientation.COLLINEAR


def _cross_sign(ax: int, ay: int, bx: int, by: int, cx: int, cy: int) -> int:
    # Inner-loop form of orientation() on raw coordinates.
    d = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
    return (d > 0) - (d < 0)


def segments_cross(s1: Segment, s2: Segment) -> bool:
    """True iff the two segments share no endpoint and their relative
    interiors intersect (a proper crossing).

    Touching configurations are not crossings: a shared endpoint returns
    False outright, and an endpoint of one segment lying on the other is a
    plain False (the relative interiors still miss each other).  Collinear
    segments that overlap in more than a point have no usable answer under
    the general-position contract and raise GeneralPositionError instead of
    masking a generator bug with a boolean.
    """
    p, q = s1.a, s1.b
    r, s = s2.a, s2.b
    if p == r or p == s or q == r or q == s:
        return False
    d1 = _cross_sign(p.x, p.y, q.x, q.y, r.x, r.y)
    d2 = _cross_sign(p.x, p.y, q.x, q.y, s.x, s.y)
    d3 = _cross_sign(r.x, r.y, s.x, s.y, p.x, p.y)
    d4 = _cross_sign(r.x, r.y, s.x, s.y, q.x, q.y)
    if d1 == 0 and d2 == 0 and d3 == 0 and d4 == 0:
        # All four endpoints on one line.  Any contact without a shared
        # endpoint means an overlap of positive length.
        if _collinear_segments_touch(p, q, r, s):
            raise GeneralPositionError(
                f"collinear overlapping segments: {s1!r} and {s2!r}"
            )
        return False
    return d1 * d2 < 0 and d3 * d4 < 0


def _collinear_segments_touch(p: Point, q: Point, r: Point, s: Point) -> bool:
    # 1D interval overlap along the dominant axis of the common line.
    if p.x != q.x:
        lo1, hi1 = sorted((p.x, q.x))
        lo2, hi2 = sorted((r.x, s.x))
    else:
        lo1, hi1 = sorted((p.y, q.y))
        lo2, hi2 = sorted((r.y, s.y))
    return max(lo1, lo2) <= min(hi1, hi2)


def point_in_triangle_strict(p: Point, t1: Point, t2: Point, t3: Point) -> bool:
    """True iff p lies strictly inside the triangle t1 t2 t3.

    The triangle must be non-degenerate; boundary points (p on an edge or at
    a vertex) return False.
    """
    base = orientation(t1, t2, t3)
    if base == Orientation.COLLINEAR:
        raise InputDomainError(f"degenerate triangle {t1!r} {t2!r} {t3!r}")
    return (
        orientation(t1, t2, p) == base
        and orientation(t2, t3, p) == base
        and orientation(t3, t1, p) == base
    )


def convex_hull(points: Sequence[Point]) -> list[Point]:
    """Strictly convex hull, counterclockwise, starting at the
    lexicographically smallest point.  Collinear boundary points are dropped.

    A single point hulls to itself and two points hull to the pair; three or
    more collinear points hull to the two extremes.  Duplicate input points
    are an input-domain error.
    """
    if not points:
        raise InputDomainError("convex_hull of empty point sequence")
    if len(set(points)) != len(points):
        raise InputDomainError("convex_hull input contains duplicate points")
    pts = sorted(points)
    if len(pts) <= 2:
        return pts

    def half(seq: Iterable[Point]) -> list[Point]:
        out: list[Point] = []
        for p in seq:
            while len(out) >= 2 and orientation(out[-2], out[-1], p) != Orientation.CCW:
                out.pop()
            out.append(p)
        return out

    lower = half(pts)
    upper = half(reversed(pts))
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 2:  # all points collinear collapse to the two extremes
        return [pts[0], pts[-1]]
    return hull


def point_in_convex_polygon(p: Point, poly: Sequence[Point], strict: bool = False) -> bool:
    """Membership in a CCW convex polygon; strict=True excludes the boundary."""
    n = len(poly)
    if n < 3:
        raise InputDomainError("polygon needs at least 3 vertices")
    for i in range(n):
        o = orientation(poly[i], poly[(i + 1) % n], p)
        if o == Orientation.CW or (strict and o == Orientation.COLLINEAR):
            return False
    return True


def squared_distance_extremes(points: Sequence[Point]) -> tuple[int, int]:
    """(min, max) squared pairwise distance over all point pairs, exactly.

    Chunked int64 matrix arithmetic; squared distances here stay far below
    2**63 because Point coordinates in every pipeline are bounded by a few
    times 2**21.  Above BULK_COORD_MAX the scalar loop takes over.  Duplicate
    points (min distance 0) are an input-domain error.
    """
    n = len(points)
    if n < 2:
        raise InputDomainError("need at least two points for distance extremes")
    if max(max(abs(p.x), abs(p.y)) for p in points) > BULK_COORD_MAX:
        return _squared_extremes_scalar(points)
    xs = np.fromiter((p.x for p in points), dtype=np.int64, count=n)
    ys = np.fromiter((p.y for p in points), dtype=np.int64, count=n)
    best_min: Optional[int] = None
    best_max = 0
    chunk = max(1, min(n, 4_000_000 // max(n, 1)))
    for i0 in range(0, n, chunk):
        i1 = min(n, i0 + chunk)
        dx = xs[i0:i1, None] - xs[None, :]
        dy = ys[i0:i1, None] - ys[None, :]
        sq = dx * dx + dy * dy
        rows = np.arange(i0, i1)
        sq[rows - i0, rows] = -1  # mask self-pairs
        m = int(sq.max())
        if m > best_max:
            best_max = m
        sq[rows - i0, rows] = m + 1
        lo = int(sq.min())
        if best_min is None or lo < best_min:
            best_min = lo
    assert best_min is not None
    if best_min == 0:
        raise InputDomainError("duplicate points (min pairwise distance 0)")
    return best_min, best_max


def _squared_extremes_scalar(points: Sequence[Point]) -> tuple[int, int]:
    best_min: Optional[int] = None
    best_max = 0
    n = len(points)
    for i in range(n):
        pi = points[i]
        for j in range(i + 1, n):
            pj = points[j]
            sq = (pi.x - pj.x) ** 2 + (pi.y - pj.y) ** 2
            if best_min is None or sq < best_min:
                best_min = sq
            if sq > best_max:
                best_max = sq
    assert best_min is not None
    if best_min == 0:
        raise InputDomainError("duplicate points (min pairwise distance 0)")
    return best_min, best_max


def star_pair_crossing(
    xs: np.ndarray,
    ys: np.ndarray,
    center_a: int,
    leaves_a: np.ndarray,
    center_b: int,
    leaves_b: np.ndarray,
) -> Optional[tuple[int, int]]:
    """First crossing between the edge sets of two stars, or None.

    Star A is the edge set {center_a -- t : t in leaves_a}, likewise star B.
    Returns (t, u) leaf indices of a crossing pair.  Edges within one star
    share the center and can never cross, so only cross-star pairs are
    examined.  Exact: int64 orientation signs when coordinates fit
    BULK_COORD_MAX, scalar fallback otherwise.  Pairs whose four endpoint
    orientations all vanish are re-examined by segments_cross so a collinear
    overlap raises as usual.
    """
    la = np.asarray(leaves_a, dtype=np.int64)
    lb = np.asarray(leaves_b, dtype=np.int64)
    if la.size == 0 or lb.size == 0:
        return None
    if int(max(np.abs(xs).max(), np.abs(ys).max())) > BULK_COORD_MAX:
        return _star_pair_crossing_scalar(xs, ys, center_a, la, center_b, lb)

    ax, ay = int(xs[center_a]), int(ys[center_a])
    bx, by = int(xs[center_b]), int(ys[center_b])
    tx, ty = xs[la], ys[la]
    ux, uy = xs[lb], ys[lb]

    # orientation(a, t, b) and orientation(a, t, u): edge a-t versus b and u
    d1 = np.sign((tx - ax) * (by - ay) - (ty - ay) * (bx - ax))[:, None]
    d2 = np.sign((tx[:, None] - ax) * (uy[None, :] - ay) - (ty[:, None] - ay) * (ux[None, :] - ax))
    # orientation(b, u, a) and orientation(b, u, t)
    d3 = np.sign((ux - bx) * (ay - by) - (uy - by) * (ax - bx))[None, :]
    d4 = np.sign((ux[None, :] - bx) * (ty[:, None] - by) - (uy[None, :] - by) * (tx[:, None] - bx))

    shared = (
        ((tx[:, None] == ux[None, :]) & (ty[:, None] == uy[None, :]))
        | ((tx == bx) & (ty == by))[:, None]
        | ((ux == ax) & (uy == ay))[None, :]
    )
    if ax == bx and ay == by:
        return None  # identical centers: every pair shares an endpoint
    crossing = (d1 * d2 < 0) & (d3 * d4 < 0) & ~shared
    degenerate = (d1 == 0) & (d2 == 0) & (d3 == 0) & (d4 == 0) & ~shared
    if degenerate.any():
        for i, j in zip(*np.nonzero(degenerate)):
            segments_cross(
                Segment(Point(ax, ay), Point(int(tx[i]), int(ty[i]))),
                Segment(Point(bx, by), Point(int(ux[j]), int(uy[j]))),
            )
    if crossing.any():
        i, j = np.nonzero(crossing)
        return int(la[i[0]]), int(lb[j[0]])
    return None


def _star_pair_crossing_scalar(
    xs: np.ndarray,
    ys: np.ndarray,
    center_a: int,
    leaves_a: np.ndarray,
    center_b: int,
    leaves_b: np.ndarray,
) -> Optional[tuple[int, int]]:
    ca = Point(int(xs[center_a]), int(ys[center_a]))
    cb = Point(int(xs[center_b]), int(ys[center_b]))
    for t in leaves_a:
        st = Segment(ca, Point(int(xs[t]), int(ys[t])))
        for u in leaves_b:
            su = Segment(cb, Point(int(xs[u]), int(ys[u])))
            if segments_cross(st, su):
                return int(t), int(u)
    return None


def segment_intersects_open_box(
    seg: Segment, x0: int, y0: int, x1: int, y1: int
) -> bool:
    """True iff the segment meets the open axis-aligned box (x0,x1) x (y0,y1).

    Exact rational clipping: the closed-box parameter interval [t0, t1] is
    computed with Fractions; if it has positive length, its midpoint decides
    (for a convex region the strictly-interior parameter set is either empty
    or the whole open interval, so one interior sample settles it).
    """
    if x1 <= x0 or y1 <= y0:
        raise InputDomainError("empty box")
    ax, ay, bx, by = seg.a.x, seg.a.y, seg.b.x, seg.b.y
    t0 = Fraction(0)
    t1 = Fraction(1)
    for p, d, lo, hi in ((ax, bx - ax, x0, x1), (ay, by - ay, y0, y1)):
        if d == 0:
            # Segment parallel to this axis pair: outside the slab, or
            # running exactly on a boundary line, means no interior point.
            if p <= lo or p >= hi:
                return False
            continue
        ta = Fraction(lo - p, d)
        tb = Fraction(hi - p, d)
        if ta > tb:
            ta, tb = tb, ta
        t0 = max(t0, ta)
        t1 = min(t1, tb)
        if t0 >= t1:
            return False
    tm = (t0 + t1) / 2
    px = ax + tm * (bx - ax)
    py = ay + tm * (by - ay)
    return x0 < px < x1 and y0 < py < y1
