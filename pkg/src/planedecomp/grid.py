"""Grid analysis and the four-cell witness search.

The pipeline covers the point set with a k x k grid of half-open square
cells and keeps the cells holding at least n/(3k^2) points (rich cells).
From the hull of all rich-cell corners it picks the boundary cells, fans
convex wedges out of a hub cell, and then hunts for a rich cell that sits
strictly inside one of the fan triangles while meeting no wedge boundary
segment.  That cell plus the triangle's three cells form the four-cell
witness: for every choice of one point per cell, the point from the inner
cell lands strictly inside the triangle of the other three, which is the
geometric fact the special decomposition rests on.

All tests in this module are exact.  Cell corners are integer points by
construction (the grid side is a multiple of k), so the strict corner
predicate and the open-box segment tests run on integers and Fractions
only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .errors import GenerationError, InputDomainError
from .geometry import (
    Point,
    Segment,
    convex_hull,
    segment_intersects_open_box,
)
from .pointsets import PointSet

_JITTER_BUDGET = 4096


class DegenerateHullError(InputDomainError):
    """All rich cells collinear: no star triangulation exists."""


@dataclass(frozen=True)
class GridConfig:
    """A k x k grid over a square that strictly contains every point.

    side is a multiple of k and no point lies on an internal grid line, so
    every cell corner is a lattice point and every point is strictly
    interior to its half-open cell.  n0 is the instance-size threshold
    ceil(12 k^2 / alpha^2) below which the per-cell upper bound is not
    guaranteed; alpha_certified records whether the tight (pre-expansion)
    bounding square met side <= alpha * sqrt(n) * scale.
    """

    k: int
    origin: Point
    side: int
    alpha: float
    n0: int
    alpha_certified: bool

    @property
    def cell_width(self) -> int:
        return self.side // self.k

    def cell_box(self, col: int, row: int) -> tuple[int, int, int, int]:
        w = self.cell_width
        x0 = self.origin.x + col * w
        y0 = self.origin.y + row * w
        return x0, y0, x0 + w, y0 + w

    def cell_corners(self, col: int, row: int) -> list[Point]:
        x0, y0, x1, y1 = self.cell_box(col, row)
        return [Point(x0, y0), Point(x1, y0), Point(x1, y1), Point(x0, y1)]


@dataclass(frozen=True)
class Cell:
    col: int
    row: int
    point_indices: tuple[int, ...]


def bounding_square(ps: PointSet, alpha: float) -> tuple[Point, int, bool]:
    """Smallest containing axis-aligned square, expanded by one sub-unit so
    no point touches the boundary.

    Returns (origin, side, certified) where certified says the tight square
    fit inside side alpha * sqrt(n) * scale (exact rational comparison).
    """
    xs = [p.x for p in ps.points]
    ys = [p.y for p in ps.points]
    tight = max(max(xs) - min(xs), max(ys) - min(ys))
    certified = Fraction(alpha) ** 2 * len(ps) * ps.scale**2 >= tight * tight
    return Point(min(xs) - 1, min(ys) - 1), tight + 2, certified


def instance_threshold(k: int, alpha: float) -> int:
    """ceil(12 k^2 / alpha^2), computed exactly on the float's value."""
    f = Fraction(12 * k * k) / Fraction(alpha) ** 2
    return -(-f.numerator // f.denominator)


def build_grid(ps: PointSet, alpha: float, k: int) -> GridConfig:
    """Grid construction: bound, round the side up to a multiple of k, then
    deterministically jitter (origin one sub-unit down-left, side +2k) until
    no point sits on an internal grid line."""
    if k < 1:
        raise InputDomainError(f"k must be >= 1, got {k}")
    origin, side, certified = bounding_square(ps, alpha)
    side += (-side) % k
    ox, oy = origin.x, origin.y
    for _ in range(_JITTER_BUDGET):
        w = side // k
        if not any(
            (p.x - ox) % w == 0 or (p.y - oy) % w == 0 for p in ps.points
        ):
            return GridConfig(
                k=k,
                origin=Point(ox, oy),
                side=side,
                alpha=alpha,
                n0=instance_threshold(k, alpha),
                alpha_certified=certified,
            )
        ox -= 1
        oy -= 1
        side += 2 * k
    raise GenerationError(f"grid jitter budget exhausted at k={k}")


def assign_cells(ps: PointSet, gc: GridConfig) -> list[Cell]:
    """All k^2 cells in (col, row) order, each point in exactly one cell.

    Pure half-open interval arithmetic.  build_grid already guarantees
    points are strictly inside the square and off the internal lines.
    """
    w = gc.cell_width
    buckets: dict[tuple[int, int], list[int]] = {}
    for i, p in enumerate(ps.points):
        col = (p.x - gc.origin.x) // w
        row = (p.y - gc.origin.y) // w
        if not (0 <= col < gc.k and 0 <= row < gc.k):
            raise InputDomainError(f"point {i} outside the grid square")
        buckets.setdefault((col, row), []).append(i)
    return [
        Cell(col, row, tuple(buckets.get((col, row), ())))
        for col in range(gc.k)
        for row in range(gc.k)
    ]


def rich_threshold_met(count: int, n: int, k: int) -> bool:
    # count >= n / (3 k^2), compared without rounding
    return 3 * k * k * count >= n


def rich_cells(cells: Sequence[Cell], n: int, k: int) -> list[Cell]:
    """Cells holding at least n/(3k^2) points (non-strict, exact compare)."""
    return [c for c in cells if rich_threshold_met(len(c.point_indices), n, k)]


def cluster_size(n: int, k: int) -> int:
    """m = ceil(n / (3 k^2)); every rich cell holds at least m points."""
    return -(-n // (3 * k * k))


def cell_upper_bound_check(
    cells: Sequence[Cell], n: int, k: int, alpha: float, min_sq: int, scale: int
) -> bool:
    """True iff every cell holds at most 2 alpha^2 n / k^2 points.

    alpha must be the min-distance-normalized density ratio (the bound is
    scale free); min_sq and scale document the normalization the caller
    used.  Only meaningful when n >= instance_threshold(k, alpha).
    """
    if min_sq <= 0 or scale <= 0:
        raise InputDomainError("min_sq and scale must be positive")
    bound = 2 * Fraction(alpha) ** 2 * n
    return all(len(c.point_indices) * k * k <= bound for c in cells)


def rich_count_check(rich_count: int, k: int, alpha: float) -> bool:
    """True iff rich_count >= k^2 / (3 alpha^2), exactly."""
    return 3 * Fraction(alpha) ** 2 * rich_count >= k * k


@dataclass(frozen=True)
class StarTriangulation:
    """Wedge fan from a hub cell over the rich-cell hull.

    ring lists the other boundary cells clockwise from the hub.  wedges
    holds the convex hulls (CCW vertex lists) of hub+ring[j] for each j
    followed by ring[j]+ring[j+1] for consecutive pairs: 2|C| - 3 in all
    for |C| boundary cells.  boundary_segments are the deduped polygon
    edges of all wedges; fan_triangles are the hulls of the cell triples
    (hub, ring[j], ring[j+1]), which together cover the rich hull and whose
    interiors the wedges do not reach.
    """

    hub: Cell
    ring: tuple[Cell, ...]
    hull: tuple[Point, ...]
    wedges: tuple[tuple[Point, ...], ...]
    boundary_segments: tuple[Segment, ...]

    @property
    def boundary_cells(self) -> tuple[Cell, ...]:
        return (self.hub,) + self.ring

    def triangle_triples(self) -> list[tuple[Cell, Cell, Cell]]:
        return [
            (self.hub, self.ring[j], self.ring[j + 1])
            for j in range(len(self.ring) - 1)
        ]


def _pair_hull(gc: GridConfig, a: Cell, b: Cell) -> tuple[Point, ...]:
    corners = set(gc.cell_corners(a.col, a.row)) | set(gc.cell_corners(b.col, b.row))
    return tuple(convex_hull(sorted(corners)))


def fan_triangle_hull(gc: GridConfig, a: Cell, b: Cell, c: Cell) -> tuple[Point, ...]:
    corners = (
        set(gc.cell_corners(a.col, a.row))
        | set(gc.cell_corners(b.col, b.row))
        | set(gc.cell_corners(c.col, c.row))
    )
    return tuple(convex_hull(sorted(corners)))


def build_star_triangulation(rich: Sequence[Cell], gc: GridConfig) -> StarTriangulation:
    """Hub, clockwise ring, wedges and their boundary segments.

    The hull of all rich-cell corners is strictly convex, so each hull
    vertex is a corner of exactly one rich cell (a corner shared by two
    cells is the midpoint of two other corners and gets dropped).  Boundary
    cells are ordered by their first hull vertex; the hub is the leftmost
    (ties: bottommost) of them and the rest are labeled clockwise.
    """
    if len(rich) < 3:
        raise DegenerateHullError(f"need >= 3 rich cells, have {len(rich)}")
    owner: dict[Point, Cell] = {}
    for c in rich:
        for p in gc.cell_corners(c.col, c.row):
            prev = owner.get(p)
            if prev is None or (c.col, c.row) < (prev.col, prev.row):
                owner[p] = c
    hull = convex_hull(sorted(owner))
    if len(hull) < 3:
        raise DegenerateHullError("rich cells are collinear")

    ccw_cells: list[Cell] = []
    for v in hull:
        c = owner[v]
        if c not in ccw_cells:
            ccw_cells.append(c)
    if len(ccw_cells) < 3:
        raise DegenerateHullError("fewer than 3 boundary cells")
    hub = min(ccw_cells, key=lambda c: (c.col, c.row))
    at = ccw_cells.index(hub)
    rotated = ccw_cells[at:] + ccw_cells[:at]
    ring = tuple(reversed(rotated[1:]))  # clockwise from the hub

    wedges: list[tuple[Point, ...]] = [_pair_hull(gc, hub, c) for c in ring]
    wedges.extend(_pair_hull(gc, ring[j], ring[j + 1]) for j in range(len(ring) - 1))

    seen: set[tuple[Point, Point]] = set()
    segs: list[Segment] = []
    for poly in wedges:
        for i in range(len(poly)):
            a, b = poly[i], poly[(i + 1) % len(poly)]
            key = (a, b) if a < b else (b, a)
            if key not in seen:
                seen.add(key)
                segs.append(Segment(key[0], key[1]))
    return StarTriangulation(
        hub=hub,
        ring=ring,
        hull=tuple(hull),
        wedges=tuple(wedges),
        boundary_segments=tuple(segs),
    )


def cell_meets_any_segment(
    gc: GridConfig, col: int, row: int, segments: Iterable[Segment]
) -> bool:
    box = gc.cell_box(col, row)
    return any(segment_intersects_open_box(s, *box) for s in segments)


def cells_crossed(segments: Iterable[Segment], gc: GridConfig) -> set[tuple[int, int]]:
    """All cells whose open interior some segment meets.  Exact.

    Per segment, candidate cells are narrowed to the rows its rational clip
    against each column slab can reach, then settled by the open-box test.
    """
    w = gc.cell_width
    ox, oy = gc.origin.x, gc.origin.y
    out: set[tuple[int, int]] = set()
    for seg in segments:
        ax, ay, bx, by = seg.a.x, seg.a.y, seg.b.x, seg.b.y
        clo = max(0, min((ax - ox) // w, (bx - ox) // w))
        chi = min(gc.k - 1, max((ax - ox) // w, (bx - ox) // w))
        for col in range(clo, chi + 1):
            x0 = ox + col * w
            x1 = x0 + w
            if ax == bx:
                t0, t1 = Fraction(0), Fraction(1)
                if not (x0 <= ax <= x1):
                    continue
            else:
                ta = Fraction(x0 - ax, bx - ax)
                tb = Fraction(x1 - ax, bx - ax)
                t0, t1 = (ta, tb) if ta <= tb else (tb, ta)
                t0 = max(t0, Fraction(0))
                t1 = min(t1, Fraction(1))
                if t0 > t1:
                    continue
            ya = ay + t0 * (by - ay)
            yb = ay + t1 * (by - ay)
            ylo, yhi = (ya, yb) if ya <= yb else (yb, ya)
            rlo = max(0, math.floor((ylo - oy) / w) - 1)
            rhi = min(gc.k - 1, math.floor((yhi - oy) / w) + 1)
            for row in range(rlo, rhi + 1):
                if (col, row) in out:
                    continue
                if segment_intersects_open_box(seg, *gc.cell_box(col, row)):
                    out.add((col, row))
    return out


def _box_corners(box: tuple[int, int, int, int]) -> list[tuple[int, int]]:
    x0, y0, x1, y1 = box
    if x1 <= x0 or y1 <= y0:
        raise InputDomainError(f"degenerate box {box!r}")
    return [(x0, y0), (x1, y0), (x1, y1), (x0, y1)]


def containment_predicate(
    box1: tuple[int, int, int, int],
    box2: tuple[int, int, int, int],
    box3: tuple[int, int, int, int],
    box4: tuple[int, int, int, int],
) -> bool:
    """True iff every choice of one point per box puts the box4 point
    strictly inside the triangle of the box1..box3 points (with a fixed
    triangle orientation).

    The orientation determinant is affine in each of its three arguments,
    so over a product of convex polygons its sign is constant iff it is
    constant and nonzero on all corner triples.  Checked per triangle side
    (i,j): the 16 corner lines of box_i x box_j must see all 8 corners of
    box4 and the remaining box strictly on one common side.  3*16*8 sign
    tests, early exit; any collinear corner triple fails conservatively.
    """
    corners = [_box_corners(b) for b in (box1, box2, box3, box4)]
    for i, j, l in ((0, 1, 2), (1, 2, 0), (0, 2, 1)):
        targets = corners[3] + corners[l]
        side = 0
        for px, py in corners[i]:
            for qx, qy in corners[j]:
                dqx = qx - px
                dqy = qy - py
                for rx, ry in targets:
                    d = dqx * (ry - py) - dqy * (rx - px)
                    if d == 0:
                        return False
                    s = 1 if d > 0 else -1
                    if side == 0:
                        side = s
                    elif s != side:
                        return False
    return True


@dataclass(frozen=True)
class FourCellWitness:
    """Four cells passing the containment predicate, with their clusters.

    cells = (triangle corner 1, corner 2, corner 3, inner cell); clusters
    hold the first m point indices of each cell, ascending.
    """

    cells: tuple[Cell, Cell, Cell, Cell]
    clusters: tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...], tuple[int, ...]]
    m: int

    def __post_init__(self) -> None:
        if self.m < 1:
            raise InputDomainError(f"m must be >= 1, got {self.m}")
        for ci, cl in zip(self.cells, self.clusters):
            if len(cl) != self.m:
                raise InputDomainError(
                    f"cluster of cell ({ci.col},{ci.row}) has {len(cl)} points, need {self.m}"
                )


def find_four_cell_witness(
    tri: StarTriangulation,
    rich: Sequence[Cell],
    gc: GridConfig,
    m: int,
) -> Optional[FourCellWitness]:
    """Deterministic scan for the witness: fan triangles in label order,
    candidate rich cells in (col, row) order, first hit wins.

    A candidate qualifies if the strict corner predicate holds against the
    triangle's cells and no wedge boundary segment meets its interior.
    """
    candidates = sorted(rich, key=lambda c: (c.col, c.row))
    for t1, t2, t3 in tri.triangle_triples():
        excluded = {(t.col, t.row) for t in (t1, t2, t3)}
        b1 = gc.cell_box(t1.col, t1.row)
        b2 = gc.cell_box(t2.col, t2.row)
        b3 = gc.cell_box(t3.col, t3.row)
        for cand in candidates:
            if (cand.col, cand.row) in excluded:
                continue
            if not containment_predicate(b1, b2, b3, gc.cell_box(cand.col, cand.row)):
                continue
            if cell_meets_any_segment(gc, cand.col, cand.row, tri.boundary_segments):
                continue
            cells = (t1, t2, t3, cand)
            clusters = tuple(tuple(sorted(c.point_indices)[:m]) for c in cells)
            return FourCellWitness(cells=cells, clusters=clusters, m=m)
    return None


def hull_vertex_bound_holds(vertex_count: int, c_prime: float, k: int) -> bool:
    """vertex_count <= c_prime * k^(2/3), compared exactly via cubes."""
    return Fraction(c_prime) ** 3 * k * k >= vertex_count**3


def crossed_cells_bound_holds(crossed_count: int, c_prime: float, k: int) -> bool:
    """crossed_count <= 8 c_prime k^(5/3), compared exactly via cubes."""
    return 512 * Fraction(c_prime) ** 3 * k**5 >= crossed_count**3
