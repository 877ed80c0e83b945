"""Independent reference implementations the tests compare against.

Everything here takes the slow, obviously-correct route: rational
parametric line intersection, Cramer-solved barycentric coordinates,
plain recursive clique enumeration, brute-force double loops.  None of it
shares logic with the library's sign-based predicates beyond arithmetic.
"""

from fractions import Fraction
from itertools import combinations
import random

from planedecomp import (
    GeneralPositionError,
    Point,
    PointSet,
    Segment,
    convex_hull,
    segments_cross,
)

CROSS = "cross"
APART = "apart"
DEGENERATE = "degenerate"


def classify_pair_predicate(s1: Segment, s2: Segment) -> str:
    try:
        return CROSS if segments_cross(s1, s2) else APART
    except GeneralPositionError:
        return DEGENERATE


def classify_pair_oracle(s1: Segment, s2: Segment) -> str:
    """Rational parametric intersection.

    Solves a1 + t d1 = a2 + u d2 over the rationals.  Proper crossing
    means strict interior parameters on both segments and no shared
    endpoint.  Four collinear endpoints with interval contact is the
    degenerate outcome the library refuses to classify.
    """
    if {s1.a, s1.b} & {s2.a, s2.b}:
        return APART
    d1x, d1y = s1.b.x - s1.a.x, s1.b.y - s1.a.y
    d2x, d2y = s2.b.x - s2.a.x, s2.b.y - s2.a.y
    wx, wy = s2.a.x - s1.a.x, s2.a.y - s1.a.y
    denom = d1x * d2y - d1y * d2x
    if denom == 0:
        if d1x * wy - d1y * wx != 0:
            return APART  # parallel, different lines
        # all four endpoints on one line: project s2 onto s1's parameter
        if d1x != 0:
            ta = Fraction(s2.a.x - s1.a.x, d1x)
            tb = Fraction(s2.b.x - s1.a.x, d1x)
        else:
            ta = Fraction(s2.a.y - s1.a.y, d1y)
            tb = Fraction(s2.b.y - s1.a.y, d1y)
        lo, hi = (ta, tb) if ta <= tb else (tb, ta)
        return DEGENERATE if hi >= 0 and lo <= 1 else APART
    t = Fraction(wx * d2y - wy * d2x, denom)
    u = Fraction(wx * d1y - wy * d1x, denom)
    return CROSS if 0 < t < 1 and 0 < u < 1 else APART


def strict_inside_oracle(p: Point, a: Point, b: Point, c: Point) -> bool:
    """Barycentric test by solving p - a = u (b - a) + v (c - a)."""
    m11, m12 = b.x - a.x, c.x - a.x
    m21, m22 = b.y - a.y, c.y - a.y
    det = m11 * m22 - m12 * m21
    if det == 0:
        raise ValueError("degenerate triangle")
    rx, ry = p.x - a.x, p.y - a.y
    u = Fraction(rx * m22 - ry * m12, det)
    v = Fraction(m11 * ry - m21 * rx, det)
    return u > 0 and v > 0 and u + v < 1


def brute_extremes(points) -> tuple[int, int]:
    best_min = None
    best_max = None
    for p, q in combinations(points, 2):
        d = (p.x - q.x) ** 2 + (p.y - q.y) ** 2
        best_min = d if best_min is None else min(best_min, d)
        best_max = d if best_max is None else max(best_max, d)
    return best_min, best_max


def max_family_enumerate(ps: PointSet) -> int:
    """Largest pairwise-crossing edge set by plain recursive enumeration."""
    n = len(ps)
    edges = [(a, b) for a in range(n) for b in range(a + 1, n)]
    segs = [Segment(ps.points[a], ps.points[b]) for a, b in edges]
    ne = len(edges)
    crosses = [[False] * ne for _ in range(ne)]
    for i in range(ne):
        for j in range(i + 1, ne):
            crosses[i][j] = crosses[j][i] = segments_cross(segs[i], segs[j])

    best = 0

    def grow(chosen: list[int], start: int) -> None:
        nonlocal best
        best = max(best, len(chosen))
        for i in range(start, ne):
            if all(crosses[i][j] for j in chosen):
                chosen.append(i)
                grow(chosen, i + 1)
                chosen.pop()

    grow([], 0)
    return best


def count_4tuples_hull_oracle(ps: PointSet) -> int:
    """A 4-subset has an interior point iff its convex hull is a triangle."""
    return sum(
        1
        for quad in combinations(ps.points, 4)
        if len(convex_hull(list(quad))) == 3
    )


def random_gp_pointset(rng: random.Random, n: int, span: int, scale: int = 65536) -> PointSet:
    """Rejection-sampled general-position point set for property tests."""
    for _ in range(200):
        pts = []
        seen = set()
        while len(pts) < n:
            p = (rng.randint(0, span), rng.randint(0, span))
            if p not in seen:
                seen.add(p)
                pts.append(Point(*p))
        try:
            return PointSet(tuple(pts), scale=scale)
        except Exception:
            continue
    raise RuntimeError("could not sample a general-position set")
