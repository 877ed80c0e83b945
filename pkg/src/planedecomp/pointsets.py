"""Point sets: construction, generators, density statistics, file IO.

A PointSet is an immutable list of distinct lattice points in general
position (no three collinear), together with the sub-unit ``scale``: one
"unit" of the underlying model maps to ``scale`` lattice steps, so integer
coordinates can carry fractional perturbations exactly.

General position is certified at construction.  The certificate is an exact
O(n^2 log n) scan: for each anchor point, the direction to every other point
is reduced by its gcd to a canonical primitive vector; two other points
share a direction from some anchor iff the three are collinear.  Generators
enforce the same property incrementally while drawing, so they skip the
final rescan; load() always rescans.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from random import Random
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import FormatError, GenerationError, GeneralPositionError, InputDomainError
from .geometry import Point, squared_distance_extremes

DEFAULT_SCALE = 2**16

# Minimum density ratio of any large planar set (disk-packing volume bound,
# rounded to a closed form): sqrt(2) * 3**(1/4) / sqrt(pi) ~ 1.05.
ALPHA_LOWER_LIMIT = math.sqrt(2.0) * 3.0**0.25 / math.sqrt(math.pi)
# Sets at least this large get flagged when alpha_effective < 1.0, since the
# volume bound (with slack relaxed to 1.0) rules that out for honest inputs.
VOLUME_FLAG_MIN_N = 10_000


@dataclass(frozen=True)
class PointSet:
    """Distinct points in general position plus the sub-unit scale."""

    points: tuple[Point, ...]
    scale: int = DEFAULT_SCALE
    _certified: bool = field(default=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.scale < 1:
            raise InputDomainError(f"scale must be >= 1, got {self.scale}")
        if len(self.points) == 0:
            raise InputDomainError("empty point set")
        seen: dict[tuple[int, int], int] = {}
        for i, p in enumerate(self.points):
            key = (p.x, p.y)
            if key in seen:
                raise InputDomainError(f"duplicate point at indices {seen[key]} and {i}")
            seen[key] = i
        if not self._certified:
            triple = find_collinear_triple(self.points)
            if triple is not None:
                raise GeneralPositionError(
                    f"collinear triple at indices {triple[0]}, {triple[1]}, {triple[2]}"
                )

    def __len__(self) -> int:
        return len(self.points)

    def coords(self) -> tuple[np.ndarray, np.ndarray]:
        """int64 coordinate arrays (xs, ys); cached after the first call."""
        cached = self.__dict__.get("_coords")
        if cached is None:
            n = len(self.points)
            xs = np.fromiter((p.x for p in self.points), dtype=np.int64, count=n)
            ys = np.fromiter((p.y for p in self.points), dtype=np.int64, count=n)
            cached = (xs, ys)
            object.__setattr__(self, "_coords", cached)
        return cached


@dataclass(frozen=True)
class DensityStats:
    """Pairwise distance extremes and the effective density ratio.

    alpha_effective is the smallest float (to within one ulp) with
    alpha^2 * n * min_sq >= max_sq, i.e. the smallest alpha for which the
    spread D(A) is at most alpha * sqrt(n) in units of the min distance.
    volume_flag marks sets of at least VOLUME_FLAG_MIN_N points whose
    alpha_effective falls below 1.0, which the volume bound forbids.
    """

    n: int
    min_sq: int
    max_sq: int
    alpha_effective: float
    volume_flag: bool


def density_stats(ps: PointSet) -> DensityStats:
    min_sq, max_sq = squared_distance_extremes(ps.points)
    n = len(ps)
    alpha = math.sqrt(max_sq / (n * min_sq))
    # Nudge by ulps until alpha is the smallest float certifying the
    # density exactly; the sqrt estimate may sit on either side.
    while Fraction(alpha) ** 2 * n * min_sq < max_sq:
        alpha = math.nextafter(alpha, math.inf)
    while alpha > 0:
        lower = math.nextafter(alpha, 0.0)
        if Fraction(lower) ** 2 * n * min_sq < max_sq:
            break
        alpha = lower
    flag = n >= VOLUME_FLAG_MIN_N and alpha < 1.0
    return DensityStats(n=n, min_sq=min_sq, max_sq=max_sq, alpha_effective=alpha, volume_flag=flag)


def is_alpha_dense(stats: DensityStats, alpha: float) -> bool:
    """Exact check that max_sq <= alpha^2 * n * min_sq (rational compare)."""
    return Fraction(alpha) ** 2 * stats.n * stats.min_sq >= stats.max_sq


# ---------------------------------------------------------------------------
# general position

def _direction_keys(xs: np.ndarray, ys: np.ndarray, px: int, py: int) -> np.ndarray:
    """Canonical primitive direction from (px,py) to each point, as one key.

    Zero vectors (duplicates of the anchor) map to the reserved key 0, which
    callers must handle.
    """
    dx = xs - px
    dy = ys - py
    g = np.gcd(np.abs(dx), np.abs(dy))
    nz = g > 0
    rdx = np.zeros_like(dx)
    rdy = np.zeros_like(dy)
    rdx[nz] = dx[nz] // g[nz]
    rdy[nz] = dy[nz] // g[nz]
    flip = (rdx < 0) | ((rdx == 0) & (rdy < 0))
    rdx[flip] = -rdx[flip]
    rdy[flip] = -rdy[flip]
    # rdx in [0, 2^31), rdy in (-2^31, 2^31): pack into one int64
    return (rdx << 32) ^ (rdy + (1 << 31))


def find_collinear_triple(points: Sequence[Point]) -> Optional[tuple[int, int, int]]:
    """Indices of some collinear triple, or None.  Exact at every size."""
    n = len(points)
    if n < 3:
        return None
    if max(max(abs(p.x), abs(p.y)) for p in points) > 2**30:
        return _find_collinear_triple_py(points)
    xs = np.fromiter((p.x for p in points), dtype=np.int64, count=n)
    ys = np.fromiter((p.y for p in points), dtype=np.int64, count=n)
    for i in range(n - 2):
        keys = _direction_keys(xs[i + 1 :], ys[i + 1 :], int(xs[i]), int(ys[i]))
        order = np.argsort(keys, kind="stable")
        sk = keys[order]
        dup = np.nonzero(sk[1:] == sk[:-1])[0]
        if dup.size:
            j = int(order[dup[0]]) + i + 1
            k = int(order[dup[0] + 1]) + i + 1
            return i, j, k
    return None


def _find_collinear_triple_py(points: Sequence[Point]) -> Optional[tuple[int, int, int]]:
    # Exact fallback for coordinates outside the int64-safe window.
    n = len(points)
    for i in range(n - 2):
        pi = points[i]
        seen: dict[tuple[int, int], int] = {}
        for j in range(i + 1, n):
            dx = points[j].x - pi.x
            dy = points[j].y - pi.y
            g = math.gcd(dx, dy)
            if g == 0:
                # duplicate point; distinctness is enforced elsewhere
                return i, j, j
            dx, dy = dx // g, dy // g
            if dx < 0 or (dx == 0 and dy < 0):
                dx, dy = -dx, -dy
            if (dx, dy) in seen:
                return i, seen[(dx, dy)], j
            seen[(dx, dy)] = j
    return None


def _collides(xs: np.ndarray, ys: np.ndarray, x: int, y: int) -> bool:
    """True if (x,y) duplicates a listed point or completes a collinear
    triple with two of them.  xs/ys hold the points accepted so far."""
    if xs.size == 0:
        return False
    keys = _direction_keys(xs, ys, x, y)
    if (keys == 0).any():
        return True
    if xs.size == 1:
        return False
    sk = np.sort(keys)
    return bool((sk[1:] == sk[:-1]).any())


class _IncrementalSet:
    """Grow-only buffer with the incremental general-position check."""

    def __init__(self, capacity: int) -> None:
        self.xs = np.empty(capacity, dtype=np.int64)
        self.ys = np.empty(capacity, dtype=np.int64)
        self.n = 0

    def ok(self, x: int, y: int) -> bool:
        return not _collides(self.xs[: self.n], self.ys[: self.n], x, y)

    def add(self, x: int, y: int) -> None:
        self.xs[self.n] = x
        self.ys[self.n] = y
        self.n += 1


_RETRY_BUDGET = 400


def gen_perturbed_grid(
    side: int,
    perturbation: float,
    seed: int,
    scale: int = DEFAULT_SCALE,
) -> PointSet:
    """side x side lattice, each point offset by up to perturbation*scale
    per coordinate, resampled until the set stays in general position.

    perturbation is a fraction of one unit; 0 <= perturbation < 0.5 keeps
    neighbors from swapping.  An unperturbable collinear layout (for example
    perturbation=0 with side >= 3) exhausts the retry budget and raises.
    """
    if side < 1:
        raise InputDomainError(f"side must be >= 1, got {side}")
    if not (0.0 <= perturbation < 0.5):
        raise InputDomainError(f"perturbation must be in [0, 0.5), got {perturbation}")
    if (side + 1) * scale > 2**30:
        raise InputDomainError("side * scale too large for the exact int64 checks")
    rng = Random(seed)
    reach = int(perturbation * scale)
    buf = _IncrementalSet(side * side)
    pts: list[Point] = []
    for j in range(side):
        for i in range(side):
            for _ in range(_RETRY_BUDGET):
                x = i * scale + (rng.randint(-reach, reach) if reach else 0)
                y = j * scale + (rng.randint(-reach, reach) if reach else 0)
                if buf.ok(x, y):
                    break
            else:
                raise GenerationError(
                    f"grid point ({i},{j}) cannot be placed in general position "
                    f"after {_RETRY_BUDGET} retries (perturbation={perturbation})"
                )
            buf.add(x, y)
            pts.append(Point(x, y))
    return PointSet(tuple(pts), scale, _certified=True)


def gen_uniform_unit_square(n: int, seed: int, scale: int = DEFAULT_SCALE) -> PointSet:
    """n points uniform on the lattice inside [0, scale]^2, general position
    enforced by redrawing colliding points."""
    if n < 1:
        raise InputDomainError(f"n must be >= 1, got {n}")
    if scale > 2**30:
        raise InputDomainError("scale too large for the exact int64 checks")
    rng = Random(seed)
    buf = _IncrementalSet(n)
    pts: list[Point] = []
    for idx in range(n):
        for _ in range(_RETRY_BUDGET):
            x = rng.randint(0, scale)
            y = rng.randint(0, scale)
            if buf.ok(x, y):
                break
        else:
            raise GenerationError(f"uniform point {idx} exhausted {_RETRY_BUDGET} retries")
        buf.add(x, y)
        pts.append(Point(x, y))
    return PointSet(tuple(pts), scale, _certified=True)


_REFLECTION_PERTURBATION = 0.05


def gen_reflection_lowerbound(a: int, seed: int = 0, scale: int = DEFAULT_SCALE) -> PointSet:
    """Centrally symmetric set of n = (2a+1)^2 - 1 points whose diameter
    matching pairwise crosses.

    Half the points perturb the lattice points of {-a..a}^2 with y > 0 or
    (y = 0, x < 0); the other half are their exact reflections through the
    origin (which is excluded).  Every segment point--reflection passes
    through the origin, so any two such segments meet at a common interior
    point: a crossing family of size n/2.  Reflection is exact, so the
    family survives the perturbation.
    """
    if a < 1:
        raise InputDomainError(f"a must be >= 1, got {a}")
    if (a + 1) * scale > 2**30:
        raise InputDomainError("a * scale too large for the exact int64 checks")
    rng = Random(seed)
    reach = int(_REFLECTION_PERTURBATION * scale)
    base_lattice = [
        (i, j)
        for j in range(-a, a + 1)
        for i in range(-a, a + 1)
        if j > 0 or (j == 0 and i < 0)
    ]
    n = (2 * a + 1) ** 2 - 1
    buf = _IncrementalSet(n)
    pts: list[Point] = []
    for i, j in base_lattice:
        for _ in range(_RETRY_BUDGET):
            x = i * scale + rng.randint(-reach, reach)
            y = j * scale + rng.randint(-reach, reach)
            if x == 0 and y == 0:
                continue
            # Check the point and its mirror against the set so far plus
            # each other; the mirror of an accepted pair stays consistent.
            if not buf.ok(x, y):
                continue
            buf.add(-x, -y)
            good = buf.ok(x, y)
            buf.n -= 1
            if good:
                break
        else:
            raise GenerationError(f"reflection pair ({i},{j}) exhausted retries")
        buf.add(x, y)
        buf.add(-x, -y)
        pts.append(Point(x, y))
        pts.append(Point(-x, -y))
    return PointSet(tuple(pts), scale, _certified=True)


def reflection_matching(ps: PointSet) -> list[tuple[int, int]]:
    """Index pairs (i, j), i < j, with point j the exact mirror of point i.

    On a reflection-lowerbound set this is the crossing family of size n/2;
    on other sets whatever mirror pairs exist are returned.
    """
    where = {(p.x, p.y): i for i, p in enumerate(ps.points)}
    out: list[tuple[int, int]] = []
    for i, p in enumerate(ps.points):
        j = where.get((-p.x, -p.y))
        if j is not None and i < j:
            out.append((i, j))
    return out


# ---------------------------------------------------------------------------
# file format
#
# Line 1:        "<n> <scale>"
# Lines 2..n+1:  "<x> <y>"   (decimal integers, single spaces, LF endings)

def dumps_points(ps: PointSet) -> str:
    lines = [f"{len(ps)} {ps.scale}"]
    lines.extend(f"{p.x} {p.y}" for p in ps.points)
    return "\n".join(lines) + "\n"


def save_points(ps: PointSet, path: str | Path) -> None:
    Path(path).write_text(dumps_points(ps), encoding="ascii", newline="\n")


def loads_points(text: str) -> PointSet:
    lines = text.splitlines()
    if not lines:
        raise FormatError("empty point file")
    head = lines[0].split()
    if len(head) != 2:
        raise FormatError(f"bad header {lines[0]!r}: expected '<n> <scale>'")
    try:
        n, scale = int(head[0]), int(head[1])
    except ValueError as e:
        raise FormatError(f"bad header {lines[0]!r}: {e}") from None
    body = [ln for ln in lines[1:] if ln.strip()]
    if len(body) != n:
        raise FormatError(f"header says {n} points, file has {len(body)}")
    pts: list[Point] = []
    for lineno, ln in enumerate(body, start=2):
        parts = ln.split()
        if len(parts) != 2:
            raise FormatError(f"line {lineno}: expected '<x> <y>', got {ln!r}")
        try:
            pts.append(Point(int(parts[0]), int(parts[1])))
        except ValueError:
            raise FormatError(f"line {lineno}: non-integer coordinate in {ln!r}") from None
    return PointSet(tuple(pts), scale)


def load_points(path: str | Path) -> PointSet:
    return loads_points(Path(path).read_text(encoding="ascii"))
