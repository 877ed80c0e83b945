"""Independent certification of decompositions and brute-force oracles.

Nothing in here trusts the decomposer: every check recomputes its answer
from the point coordinates and the raw edge lists.  The only shared code
is the exact geometric predicate layer, which both sides must agree on by
definition.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .decompose import Decomposition, PlaneSubgraph
from .errors import InputDomainError, SizeLimitError
from .geometry import Segment, segments_cross, star_pair_crossing
from .grid import (
    Cell,
    DegenerateHullError,
    GridConfig,
    build_star_triangulation,
    cell_upper_bound_check,
    cells_crossed,
    crossed_cells_bound_holds,
    hull_vertex_bound_holds,
    rich_cells,
    rich_count_check,
)
from .pointsets import PointSet, density_stats, is_alpha_dense

MAX_CLIQUE_N = 16
MAX_4TUPLE_N = 200


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of the four decomposition checks.

    failures pairs a subgraph index with a human-readable detail; index -1
    marks decomposition-wide problems.  All four flags are true exactly
    when failures is empty.
    """

    partition_ok: bool
    planarity_ok: bool
    count_ok: bool
    shape_ok: bool
    failures: tuple[tuple[int, str], ...]

    @property
    def all_ok(self) -> bool:
        return self.partition_ok and self.planarity_ok and self.count_ok and self.shape_ok

    def render(self) -> str:
        def line(name: str, ok: bool, ok_detail: str) -> str:
            if ok:
                return f"CHECK {name} PASS {ok_detail}"
            relevant = [f for f in self.failures if f[1].startswith(name + ":")]
            detail = relevant[0][1] if relevant else "failed"
            more = f" (+{len(relevant) - 1} more)" if len(relevant) > 1 else ""
            return f"CHECK {name} FAIL {detail}{more}"

        return "\n".join(
            (
                line("partition", self.partition_ok, "every edge exactly once"),
                line("planarity", self.planarity_ok, "no crossing inside any subgraph"),
                line("count", self.count_ok, "subgraph count matches the mode"),
                line("shape", self.shape_ok, "all subgraphs are stars or two-star forests"),
            )
        )


def _normalized_edges(sg: PlaneSubgraph) -> tuple[np.ndarray, np.ndarray]:
    u = np.minimum(sg.edges[:, 0], sg.edges[:, 1])
    v = np.maximum(sg.edges[:, 0], sg.edges[:, 1])
    return u, v


def _check_partition(
    n: int, subgraphs: Sequence[PlaneSubgraph], failures: list[tuple[int, str]]
) -> bool:
    want = n * (n - 1) // 2
    if not subgraphs:
        if want == 0:
            return True
        failures.append((-1, f"partition: no subgraphs but {want} edges required"))
        return False
    parts_u = []
    parts_v = []
    owner_parts = []
    ok = True
    for idx, sg in enumerate(subgraphs):
        u, v = _normalized_edges(sg)
        if u.min() < 0 or v.max() >= n:
            failures.append((idx, f"partition: subgraph {idx} has a vertex index out of range"))
            ok = False
            continue
        loops = np.nonzero(u == v)[0]
        if loops.size:
            failures.append(
                (idx, f"partition: subgraph {idx} has a self-loop at vertex {int(u[loops[0]])}")
            )
            ok = False
            continue
        parts_u.append(u)
        parts_v.append(v)
        owner_parts.append(np.full(u.shape, idx, dtype=np.int64))
    if not ok:
        return False

    u = np.concatenate(parts_u)
    v = np.concatenate(parts_v)
    owner = np.concatenate(owner_parts)
    keys = u * np.int64(n) + v
    order = np.argsort(keys, kind="stable")
    keys = keys[order]
    owner = owner[order]

    dup = np.nonzero(keys[1:] == keys[:-1])[0]
    if dup.size:
        at = int(dup[0])
        eu, ev = divmod(int(keys[at]), n)
        failures.append(
            (
                int(owner[at]),
                f"partition: edge {eu}-{ev} appears in subgraphs "
                f"{int(owner[at])} and {int(owner[at + 1])}",
            )
        )
        ok = False
    if (keys.shape[0] - dup.size) < want:
        # some edge of the complete graph is missing
        detail = f"partition: {keys.shape[0] - dup.size} distinct edges, {want} required"
        if n <= 2000:
            grid_u, grid_v = np.triu_indices(n, k=1)
            missing = np.setdiff1d(grid_u * np.int64(n) + grid_v, keys, assume_unique=False)
            if missing.size:
                mu, mv = divmod(int(missing[0]), n)
                detail += f"; first missing {mu}-{mv}"
        failures.append((-1, detail))
        ok = False
    elif keys.shape[0] > want and not dup.size:
        failures.append((-1, f"partition: {keys.shape[0]} edges exceed C({n},2)={want}"))
        ok = False
    return ok


def _star_center_ok(u: np.ndarray, v: np.ndarray, center: int) -> bool:
    return bool(np.all((u == center) | (v == center)))


def _check_shape(
    n: int, subgraphs: Sequence[PlaneSubgraph], failures: list[tuple[int, str]]
) -> tuple[bool, list[bool]]:
    # returns overall flag plus a per-subgraph "structurally sound" list the
    # planarity pass uses to pick its scan strategy
    ok = True
    sound: list[bool] = []
    for idx, sg in enumerate(subgraphs):
        u, v = _normalized_edges(sg)
        good = True
        if any(c < 0 or c >= n for c in sg.centers):
            failures.append((idx, f"shape: subgraph {idx} center out of range"))
            good = False
        elif sg.kind == "star":
            if not _star_center_ok(u, v, sg.centers[0]):
                failures.append(
                    (idx, f"shape: subgraph {idx} has an edge missing its center {sg.centers[0]}")
                )
                good = False
        else:
            c1, c2 = sg.centers
            at1 = (u == c1) | (v == c1)
            at2 = (u == c2) | (v == c2)
            if bool(np.any(at1 & at2)):
                failures.append((idx, f"shape: subgraph {idx} joins its centers {c1}-{c2}"))
                good = False
            elif not bool(np.all(at1 | at2)):
                failures.append(
                    (idx, f"shape: subgraph {idx} has an edge at neither center {c1} nor {c2}")
                )
                good = False
            else:
                leaves1 = np.where(u == c1, v, u)[at1]
                leaves2 = np.where(u == c2, v, u)[at2]
                shared = np.intersect1d(leaves1, leaves2)
                if shared.size:
                    failures.append(
                        (
                            idx,
                            f"shape: subgraph {idx} stars share leaf {int(shared[0])}, "
                            "not a two-star forest",
                        )
                    )
                    good = False
        sound.append(good)
        ok = ok and good
    return ok, sound


def _check_planarity(
    ps: PointSet,
    subgraphs: Sequence[PlaneSubgraph],
    sound: list[bool],
    failures: list[tuple[int, str]],
) -> bool:
    # a structurally sound star can never self-cross (every edge pair
    # shares the center), and a sound two-star forest can only cross
    # between its stars, which one bulk scan settles; anything unsound
    # gets the full quadratic scan
    xs, ys = ps.coords()
    ok = True
    for idx, sg in enumerate(subgraphs):
        if sound[idx] and sg.kind == "star":
            continue
        if sound[idx] and sg.kind == "twostar":
            c1, c2 = sg.centers
            u, v = _normalized_edges(sg)
            at1 = (u == c1) | (v == c1)
            leaves1 = np.where(u == c1, v, u)[at1]
            leaves2 = np.where(u == c2, v, u)[~at1]
            hit = star_pair_crossing(xs, ys, c1, leaves1, c2, leaves2)
            if hit is not None:
                failures.append(
                    (
                        idx,
                        f"planarity: subgraph {idx} edges {c1}-{hit[0]} and "
                        f"{c2}-{hit[1]} cross",
                    )
                )
                ok = False
            continue
        crossing = _first_crossing(ps, sg.edges)
        if crossing is not None:
            (a, b), (c, d) = crossing
            failures.append(
                (idx, f"planarity: subgraph {idx} edges {a}-{b} and {c}-{d} cross")
            )
            ok = False
    return ok


def _first_crossing(
    ps: PointSet, edges: np.ndarray
) -> Optional[tuple[tuple[int, int], tuple[int, int]]]:
    rows = [(int(a), int(b)) for a, b in edges.tolist()]
    segs = [Segment(ps.points[a], ps.points[b]) for a, b in rows]
    for i in range(len(segs)):
        for j in range(i + 1, len(segs)):
            if segments_cross(segs[i], segs[j]):
                return rows[i], rows[j]
    return None


def is_plane(ps: PointSet, edges: Sequence[tuple[int, int]]) -> bool:
    """Exhaustive quadratic crossing scan over an explicit edge list."""
    arr = np.asarray(list(edges), dtype=np.int64).reshape(-1, 2)
    if arr.size and (arr.min() < 0 or arr.max() >= len(ps)):
        raise InputDomainError("edge index out of range")
    if arr.size and bool((arr[:, 0] == arr[:, 1]).any()):
        raise InputDomainError("self-loop edge")
    return _first_crossing(ps, arr) is None


def _check_count(
    n: int, d: Decomposition, failures: list[tuple[int, str]]
) -> bool:
    got = len(d.subgraphs)
    if d.mode == "witness":
        if d.m < 1:
            failures.append((-1, f"count: witness mode with m={d.m}"))
            return False
        if got != n - d.m:
            failures.append((-1, f"count: {got} subgraphs, witness mode needs n-m={n - d.m}"))
            return False
        return True
    if d.mode == "fallback":
        if got != n - 1:
            failures.append((-1, f"count: {got} subgraphs, fallback needs n-1={n - 1}"))
            return False
        return True
    failures.append((-1, f"count: unknown mode {d.mode!r}"))
    return False


def verify_partition(ps: PointSet, d: Decomposition) -> VerificationReport:
    """Certify a decomposition: partition, planarity, count, shape.

    Failures are collected, never thrown; the report's flags summarize
    them.  The scan recomputes everything from coordinates and edge lists.
    """
    n = len(ps)
    failures: list[tuple[int, str]] = []
    partition_ok = _check_partition(n, d.subgraphs, failures)
    shape_ok, sound = _check_shape(n, d.subgraphs, failures)
    planarity_ok = _check_planarity(ps, d.subgraphs, sound, failures)
    count_ok = _check_count(n, d, failures)
    return VerificationReport(
        partition_ok=partition_ok,
        planarity_ok=planarity_ok,
        count_ok=count_ok,
        shape_ok=shape_ok,
        failures=tuple(failures),
    )


@dataclass(frozen=True)
class CrossingFamily:
    """A set of pairwise properly crossing edges.

    plane_tree_bound is n - p for family size p: a crossing family of size
    p certifies the complete graph splits into n - p plane trees, so any
    exact maximum gives the best such bound this route offers.
    """

    edges: tuple[tuple[int, int], ...]
    plane_tree_bound: int

    @property
    def size(self) -> int:
        return len(self.edges)


def check_crossing_family(ps: PointSet, edges: Sequence[tuple[int, int]]) -> bool:
    """True iff all pairs of the given edges properly cross (vacuous for
    fewer than two edges).  Shared endpoints do not count as crossing."""
    rows = [(int(a), int(b)) for a, b in edges]
    for a, b in rows:
        if not (0 <= a < len(ps) and 0 <= b < len(ps)) or a == b:
            raise InputDomainError(f"bad edge ({a}, {b})")
    segs = [Segment(ps.points[a], ps.points[b]) for a, b in rows]
    return all(
        segments_cross(segs[i], segs[j])
        for i in range(len(segs))
        for j in range(i + 1, len(segs))
    )


def _color_order(cand: int, adj: list[int]) -> list[tuple[int, int]]:
    # greedy coloring for the branch-and-bound cutoff: vertices emitted in
    # nondecreasing color, color = clique-size upper bound at that vertex
    order: list[tuple[int, int]] = []
    color = 0
    rest = cand
    while rest:
        color += 1
        pool = rest
        while pool:
            bit = pool & -pool
            v = bit.bit_length() - 1
            pool &= ~bit & ~adj[v]
            rest &= ~bit
            order.append((v, color))
    return order


def max_crossing_family_exact(ps: PointSet, limit_n: int = MAX_CLIQUE_N) -> CrossingFamily:
    """Maximum pairwise-crossing edge set, exactly, as a max clique in the
    edge crossing graph (branch and bound with a coloring bound).

    Exponential in principle; capped at limit_n points because the crossing
    graph has C(n,2) vertices.  Larger sets should certify a known family
    with check_crossing_family instead.
    """
    n = len(ps)
    if n > limit_n:
        raise SizeLimitError(f"n={n} exceeds the exact-solver cap {limit_n}")
    edges = [(a, b) for a in range(n) for b in range(a + 1, n)]
    segs = [Segment(ps.points[a], ps.points[b]) for a, b in edges]
    ne = len(edges)
    adj = [0] * ne
    for i in range(ne):
        for j in range(i + 1, ne):
            if segments_cross(segs[i], segs[j]):
                adj[i] |= 1 << j
                adj[j] |= 1 << i

    best_size = 0
    best_mask = 0

    def expand(rsize: int, rmask: int, cand: int) -> None:
        nonlocal best_size, best_mask
        for v, bound in reversed(_color_order(cand, adj)):
            if rsize + bound <= best_size:
                return
            bit = 1 << v
            nxt = cand & adj[v]
            if nxt:
                expand(rsize + 1, rmask | bit, nxt)
            elif rsize + 1 > best_size:
                best_size = rsize + 1
                best_mask = rmask | bit
            cand &= ~bit

    if ne:
        expand(0, 0, (1 << ne) - 1)
    family = tuple(edges[i] for i in range(ne) if best_mask >> i & 1)
    return CrossingFamily(edges=family, plane_tree_bound=n - len(family))


def count_4tuples(ps: PointSet) -> int:
    """Unordered 4-subsets with one member strictly inside the triangle of
    the other three.  Ordered count (the usual statement) is 6x this.

    For each candidate interior point d the triangles containing it are
    counted through the winding signs s(i,j) = sign of the cross product of
    (p_i - d) and (p_j - d): d is inside triangle (i,j,k) iff s(i,j),
    s(j,k), s(k,i) agree, so the count is the number of monochromatic
    directed 3-cycles, i.e. trace(A^3)/6 summed over both sign classes.
    """
    n = len(ps)
    if n > MAX_4TUPLE_N:
        raise SizeLimitError(f"n={n} exceeds the 4-tuple counting cap {MAX_4TUPLE_N}")
    if n < 4:
        return 0
    xs, ys = ps.coords()
    total = 0
    for d in range(n):
        ax = np.delete(xs - xs[d], d)
        ay = np.delete(ys - ys[d], d)
        cross = np.outer(ax, ay) - np.outer(ay, ax)
        pos = (cross > 0).astype(np.float64)
        neg = (cross < 0).astype(np.float64)
        # trace(A^3) without forming A^3: counts are < n^3 so float64 is exact
        tri = float(np.sum((pos @ pos) * pos.T)) + float(np.sum((neg @ neg) * neg.T))
        total += int(round(tri)) // 6
    return total


def lemma_bounds_report(
    ps: PointSet,
    gc: GridConfig,
    cells: Sequence[Cell],
    c_prime: float = 4.0,
) -> str:
    """Quantitative grid diagnostics as CHECK lines.

    density: effective density ratio against the configured alpha.
    cell_upper_bound: no cell above 2 alpha^2 n / k^2 (NA below the
    instance threshold, where the bound is not promised).
    rich_count: at least k^2/(3 alpha^2) rich cells.
    hull_vertices and crossed_cells: hull size and wedge-boundary coverage
    against the configured c_prime (NA when the rich cells are degenerate).
    All comparisons are exact; the printed numbers are rounded for reading.
    """
    n = len(ps)
    k = gc.k
    alpha = gc.alpha
    stats = density_stats(ps)
    lines = []

    dense = is_alpha_dense(stats, alpha)
    lines.append(
        f"CHECK density {'PASS' if dense else 'FAIL'} "
        f"alpha_effective={stats.alpha_effective:.4f} alpha={alpha:.4f}"
    )

    biggest = max(len(c.point_indices) for c in cells)
    if n < gc.n0:
        lines.append(
            f"CHECK cell_upper_bound NA n={n} below instance threshold n0={gc.n0}"
        )
    else:
        ub_ok = cell_upper_bound_check(cells, n, k, alpha, stats.min_sq, ps.scale)
        bound = 2 * alpha * alpha * n / (k * k)
        lines.append(
            f"CHECK cell_upper_bound {'PASS' if ub_ok else 'FAIL'} "
            f"max_cell={biggest} bound={bound:.2f}"
        )

    rich = rich_cells(cells, n, k)
    rc_ok = rich_count_check(len(rich), k, alpha)
    lines.append(
        f"CHECK rich_count {'PASS' if rc_ok else 'FAIL'} "
        f"rich={len(rich)} needed={k * k / (3 * alpha * alpha):.2f}"
    )

    try:
        tri = build_star_triangulation(rich, gc)
    except DegenerateHullError as exc:
        lines.append(f"CHECK hull_vertices NA {exc}")
        lines.append(f"CHECK crossed_cells NA {exc}")
        return "\n".join(lines)

    v = len(tri.hull)
    hv_ok = hull_vertex_bound_holds(v, c_prime, k)
    lines.append(
        f"CHECK hull_vertices {'PASS' if hv_ok else 'FAIL'} "
        f"v={v} bound={c_prime * k ** (2 / 3):.2f}"
    )
    crossed = len(cells_crossed(tri.boundary_segments, gc))
    cc_ok = crossed_cells_bound_holds(crossed, c_prime, k)
    lines.append(
        f"CHECK crossed_cells {'PASS' if cc_ok else 'FAIL'} "
        f"crossed={crossed} bound={8 * c_prime * k ** (5 / 3):.2f}"
    )
    return "\n".join(lines)
