"""Decomposition of the complete geometric graph into plane subgraphs.

Given a four-cell witness with m points clustered per cell, the complete
graph on the 4m cluster points splits into 3m plane two-star forests; every
other point gets a plane star.  Total: n - m subgraphs, strictly below the
trivial n - 1.  Every emitted forest is certified non-crossing before it is
returned; nothing here is trusted without a check.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .errors import (
    CertificationError,
    DecompositionInfeasible,
    FormatError,
    InputDomainError,
)
from .geometry import star_pair_crossing
from .grid import (
    Cell,
    DegenerateHullError,
    FourCellWitness,
    assign_cells,
    build_grid,
    build_star_triangulation,
    cluster_size,
    containment_predicate,
    find_four_cell_witness,
    instance_threshold,
    rich_cells,
)
from .pointsets import PointSet, density_stats

DEFAULT_K_MAX = 32
DEFAULT_C_PRIME = 4.0

MODE_WITNESS = "witness"
MODE_FALLBACK = "fallback"


@dataclass(frozen=True, eq=False)
class PlaneSubgraph:
    """A star or two-star forest, as an explicit edge list.

    edges is an (E, 2) int64 array of vertex indices, one row per edge,
    normalized u < v, nonempty.  centers has one entry for a star and two
    for a two-star forest.
    """

    kind: str
    centers: tuple[int, ...]
    edges: np.ndarray

    def __post_init__(self) -> None:
        if self.kind not in ("star", "twostar"):
            raise InputDomainError(f"unknown subgraph kind {self.kind!r}")
        want = 1 if self.kind == "star" else 2
        if len(self.centers) != want:
            raise InputDomainError(
                f"{self.kind} needs {want} center(s), got {len(self.centers)}"
            )
        if want == 2 and self.centers[0] == self.centers[1]:
            raise InputDomainError("twostar centers must be distinct")
        e = np.asarray(self.edges, dtype=np.int64)
        if e.ndim != 2 or e.shape[1] != 2 or e.shape[0] == 0:
            raise InputDomainError("edges must be a nonempty (E, 2) array")
        object.__setattr__(self, "edges", e)

    @property
    def edge_count(self) -> int:
        return int(self.edges.shape[0])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PlaneSubgraph):
            return NotImplemented
        return (
            self.kind == other.kind
            and self.centers == other.centers
            and np.array_equal(self.edges, other.edges)
        )


@dataclass(frozen=True)
class Decomposition:
    ps: PointSet
    subgraphs: tuple[PlaneSubgraph, ...]
    k: int
    m: int
    mode: str
    notes: tuple[str, ...] = field(default=(), compare=False)

    @property
    def n(self) -> int:
        return len(self.ps)

    @property
    def subgraph_count(self) -> int:
        return len(self.subgraphs)

    @property
    def total_edges(self) -> int:
        return sum(sg.edge_count for sg in self.subgraphs)

    @property
    def c_realized(self) -> float:
        return len(self.subgraphs) / len(self.ps)


def _dedup_star_edges(
    center: int, targets: Sequence[int], seen: set[tuple[int, int]]
) -> tuple[list[tuple[int, int]], list[int]]:
    # targets ascending; global first-seen filter; returns rows and the
    # leaves actually kept
    rows: list[tuple[int, int]] = []
    leaves: list[int] = []
    for t in targets:
        if t == center:
            continue
        key = (center, t) if center < t else (t, center)
        if key in seen:
            continue
        seen.add(key)
        rows.append(key)
        leaves.append(t)
    return rows, leaves


def decompose_special(witness: FourCellWitness, ps: PointSet) -> list[PlaneSubgraph]:
    """The 3m two-star forests on the witness clusters.

    Three families pair the i-th centers: family 1 joins star(B1[i] over
    B1+B2) with star(B3[i] over B3+B4); family 2 joins star(B2[i] over
    B2+B3) with star(B4[i] over B4+B1); family 3 joins star(B1[i] over
    B1+B3) with star(B2[i] over B2+B4).  Duplicate edges are removed by a
    single global first-seen filter over the fixed emission order (family,
    then pair index, then target index ascending), so the forests cover
    every edge among the 4m cluster points exactly once.

    The two target sets inside one pairing are disjoint, so each forest is
    a genuine two-star; its planarity is certified here with an exact
    crossing scan between the two stars and a CertificationError aborts the
    run on any hit.
    """
    b1, b2, b3, b4 = witness.clusters
    m = witness.m
    flat = [i for cl in witness.clusters for i in cl]
    if len(set(flat)) != 4 * m:
        raise InputDomainError("witness clusters overlap")
    if min(flat) < 0 or max(flat) >= len(ps):
        raise InputDomainError("witness cluster index out of range")

    xs, ys = ps.coords()
    seen: set[tuple[int, int]] = set()
    out: list[PlaneSubgraph] = []
    families = (
        (b1, sorted(b1 + b2), b3, sorted(b3 + b4)),
        (b2, sorted(b2 + b3), b4, sorted(b4 + b1)),
        (b1, sorted(b1 + b3), b2, sorted(b2 + b4)),
    )
    for ca, ta, cb, tb in families:
        for i in range(m):
            rows_a, leaves_a = _dedup_star_edges(ca[i], ta, seen)
            rows_b, leaves_b = _dedup_star_edges(cb[i], tb, seen)
            hit = star_pair_crossing(
                xs,
                ys,
                ca[i],
                np.asarray(leaves_a, dtype=np.int64),
                cb[i],
                np.asarray(leaves_b, dtype=np.int64),
            )
            if hit is not None:
                raise CertificationError(
                    f"witness violation: stars at {ca[i]} and {cb[i]} cross "
                    f"(leaves {hit[0]} and {hit[1]})"
                )
            out.append(
                PlaneSubgraph(
                    kind="twostar",
                    centers=(ca[i], cb[i]),
                    edges=np.asarray(rows_a + rows_b, dtype=np.int64),
                )
            )
    covered = sum(sg.edge_count for sg in out)
    if covered != (4 * m) * (4 * m - 1) // 2:
        raise CertificationError(
            f"family emission covered {covered} edges, expected C({4 * m},2)"
        )
    return out


def _remaining_stars(n: int, clusters: Sequence[Sequence[int]]) -> list[PlaneSubgraph]:
    # one star per non-cluster point, processed in index order: edges to
    # every cluster point plus to later non-cluster points, which is what
    # the global first-seen filter leaves for them
    b = np.asarray(sorted(i for cl in clusters for i in cl), dtype=np.int64)
    mask = np.ones(n, dtype=bool)
    mask[b] = False
    rest = np.nonzero(mask)[0].astype(np.int64)
    subs: list[PlaneSubgraph] = []
    for pos in range(rest.shape[0]):
        r = int(rest[pos])
        targets = np.sort(np.concatenate([b, rest[pos + 1 :]]))
        edges = np.column_stack(
            [np.minimum(targets, r), np.maximum(targets, r)]
        )
        subs.append(PlaneSubgraph(kind="star", centers=(r,), edges=edges))
    return subs


def _fallback_stars(n: int) -> list[PlaneSubgraph]:
    subs = []
    for i in range(n - 1):
        targets = np.arange(i + 1, n, dtype=np.int64)
        edges = np.column_stack([np.full(targets.shape, i, dtype=np.int64), targets])
        subs.append(PlaneSubgraph(kind="star", centers=(i,), edges=edges))
    return subs


def decompose_fallback(ps: PointSet, notes: Sequence[str] = ()) -> Decomposition:
    """The trivial decomposition: n - 1 stars, star i covering all j > i."""
    return Decomposition(
        ps=ps,
        subgraphs=tuple(_fallback_stars(len(ps))),
        k=0,
        m=0,
        mode=MODE_FALLBACK,
        notes=tuple(notes),
    )


def _check_edge_accounting(d: Decomposition) -> Decomposition:
    n = d.n
    if d.total_edges != n * (n - 1) // 2:
        raise CertificationError(
            f"edge accounting failed: {d.total_edges} != C({n},2)"
        )
    return d


def _witness_decomposition(
    ps: PointSet, witness: FourCellWitness, k: int, notes: Sequence[str]
) -> Decomposition:
    forests = decompose_special(witness, ps)
    stars = _remaining_stars(len(ps), witness.clusters)
    return _check_edge_accounting(
        Decomposition(
            ps=ps,
            subgraphs=tuple(forests + stars),
            k=k,
            m=witness.m,
            mode=MODE_WITNESS,
            notes=tuple(notes),
        )
    )


def _try_k(ps: PointSet, alpha: float, k: int) -> Optional[FourCellWitness]:
    gc = build_grid(ps, alpha, k)
    cells = assign_cells(ps, gc)
    rich = rich_cells(cells, len(ps), k)
    if len(rich) < 4:
        return None
    try:
        tri = build_star_triangulation(rich, gc)
    except DegenerateHullError:
        return None
    return find_four_cell_witness(tri, rich, gc, cluster_size(len(ps), k))


def theoretical_k(alpha: float, c_prime: float) -> int:
    """ceil((24 c' alpha^2)^3) + 1, exact on the floats' values."""
    f = (24 * Fraction(c_prime) * Fraction(alpha) ** 2) ** 3
    return -(-f.numerator // f.denominator) + 1


def decompose(
    ps: PointSet,
    alpha: Optional[float] = None,
    mode: str = "adaptive",
    *,
    k_max: int = DEFAULT_K_MAX,
    c_prime: float = DEFAULT_C_PRIME,
) -> Decomposition:
    """Decompose the complete graph on ps into plane subgraphs.

    Adaptive mode scans k = 2..k_max for the smallest grid granularity that
    yields a four-cell witness and emits n - m subgraphs; without a witness
    it degrades to the n - 1 star fallback.  Theoretical mode instead uses
    the guarantee-regime k derived from alpha and c_prime; that k is
    astronomic for any desk-scale input, so it refuses (with the numbers)
    when k^2 exceeds n, and falls back when n is below the instance
    threshold.  alpha=None measures the input's own effective density and
    uses that.
    """
    n = len(ps)
    stats = density_stats(ps)
    if alpha is None:
        alpha = stats.alpha_effective
    if alpha <= 0:
        raise InputDomainError(f"alpha must be positive, got {alpha}")
    if k_max < 2:
        raise InputDomainError(f"k_max must be >= 2, got {k_max}")
    if c_prime <= 0:
        raise InputDomainError(f"c_prime must be positive, got {c_prime}")
    notes = [f"alpha={alpha!r}", f"alpha_effective={stats.alpha_effective!r}"]
    if stats.volume_flag:
        notes.append("volume flag: declared density below the packing limit")

    mode = mode.lower()
    if mode == "adaptive":
        for k in range(2, k_max + 1):
            witness = _try_k(ps, alpha, k)
            if witness is not None:
                notes.append(f"witness at k={k}")
                return _witness_decomposition(ps, witness, k, notes)
        notes.append(f"no witness for any k <= {k_max}")
        return decompose_fallback(ps, notes)
    if mode == "theoretical":
        k = theoretical_k(alpha, c_prime)
        n0 = instance_threshold(k, alpha)
        notes.append(f"theoretical k={k} n0={n0}")
        if k * k > n:
            raise DecompositionInfeasible(
                f"guarantee-regime grid needs k={k} ({k * k} cells) but n={n}; "
                f"the regime starts at n0={n0}. Use adaptive mode at desk scale."
            )
        if n <= n0:
            notes.append(f"n={n} below the instance threshold n0={n0}")
            return decompose_fallback(ps, notes)
        witness = _try_k(ps, alpha, k)
        if witness is None:
            notes.append(f"no witness at the theoretical k={k}")
            return decompose_fallback(ps, notes)
        return _witness_decomposition(ps, witness, k, notes)
    if mode == "fallback":
        return decompose_fallback(ps, notes)
    raise InputDomainError(f"unknown mode {mode!r}")


_FIFTH_CELLS = ((0, 0), (4, 0), (2, 4), (2, 1))


def _fifth_interval(a: int, s: int) -> tuple[int, int]:
    # tightest integer bounds containing the open strip a/5 < x/s < (a+1)/5,
    # closed to the square boundary at the outer edges
    lo = 0 if a == 0 else a * s // 5 + 1
    hi = s if a == 4 else (a + 1) * s // 5
    return lo, hi


def _fifth_box(a: int, b: int, s: int) -> tuple[int, int, int, int]:
    x0, x1 = _fifth_interval(a, s)
    y0, y1 = _fifth_interval(b, s)
    return x0, y0, x1, y1


def decompose_random_mode(ps: PointSet) -> Decomposition:
    """Decomposition for points drawn uniformly from the scaled unit square.

    Four fixed fifth-by-fifth subsquares (bottom-left, bottom-right, top
    middle, lower middle) always satisfy the containment predicate, so any
    point clusters inside them form a witness with no search.  m is the
    smallest cluster size, capped at ceil(n/50); if a subsquare holds fewer
    than 2 points the trivial fallback is used instead.
    """
    n = len(ps)
    s = ps.scale
    xs, ys = ps.coords()
    if xs.min() < 0 or ys.min() < 0 or xs.max() > s or ys.max() > s:
        raise InputDomainError("random mode expects points inside the scaled unit square")

    members: list[np.ndarray] = []
    for a, b in _FIFTH_CELLS:
        inside = (
            (a * s < 5 * xs)
            & (5 * xs < (a + 1) * s)
            & (b * s < 5 * ys)
            & (5 * ys < (b + 1) * s)
        )
        members.append(np.nonzero(inside)[0])
    sizes = [int(idx.shape[0]) for idx in members]
    notes = [f"subsquare sizes {sizes}"]
    if min(sizes) < 2:
        notes.append("a distinguished subsquare holds fewer than 2 points")
        return decompose_fallback(ps, notes)

    boxes = [_fifth_box(a, b, s) for a, b in _FIFTH_CELLS]
    if not containment_predicate(*boxes):
        # cannot happen for these fixed subsquares; guarded anyway
        notes.append("containment predicate failed on the fixed subsquares")
        return decompose_fallback(ps, notes)

    m = min(min(sizes), -(-n // 50))
    cells = tuple(
        Cell(col=a, row=b, point_indices=tuple(int(i) for i in idx))
        for (a, b), idx in zip(_FIFTH_CELLS, members)
    )
    clusters = tuple(tuple(int(i) for i in idx[:m]) for idx in members)
    witness = FourCellWitness(cells=cells, clusters=clusters, m=m)
    notes.append(f"random-structure witness with m={m}")
    return _witness_decomposition(ps, witness, 5, notes)


def caratheodory_lower_bound(witness: FourCellWitness) -> int:
    """m^4: ordered 4-tuples with the fourth point inside the triangle of
    the first three, one per choice of cluster representatives."""
    return witness.m**4


def dumps_decomposition(d: Decomposition) -> str:
    """Text form: header 'n k m mode subgraph_count', then one line per
    subgraph 'kind centers : u-v u-v ...'.  Bit-exact across runs."""
    parts = [f"{d.n} {d.k} {d.m} {d.mode} {d.subgraph_count}"]
    for sg in d.subgraphs:
        head = " ".join(str(c) for c in sg.centers)
        body = " ".join(f"{u}-{v}" for u, v in sg.edges.tolist())
        parts.append(f"{sg.kind} {head} : {body}")
    parts.append("")
    return "\n".join(parts)


def save_decomposition(d: Decomposition, path: str) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(dumps_decomposition(d))


def loads_decomposition(text: str, ps: PointSet) -> Decomposition:
    """Parse and format-check a decomposition against its point set.

    Only structural validity is enforced here (field shapes, index bounds,
    no self-loops).  Whether the subgraphs actually partition the complete
    graph is the verifier's business.
    """
    lines = text.splitlines()
    if not lines:
        raise FormatError("empty decomposition text")
    head = lines[0].split()
    if len(head) != 5:
        raise FormatError(f"header needs 5 fields, got {len(head)}")
    try:
        n, k, m = int(head[0]), int(head[1]), int(head[2])
        count = int(head[4])
    except ValueError as exc:
        raise FormatError(f"non-integer header field: {exc}") from None
    mode = head[3]
    if mode not in (MODE_WITNESS, MODE_FALLBACK):
        raise FormatError(f"unknown mode {mode!r}")
    if n != len(ps):
        raise FormatError(f"point count mismatch: header {n}, point set {len(ps)}")
    if k < 0 or m < 0 or count < 0:
        raise FormatError("negative header field")
    body = lines[1:]
    if len(body) != count:
        raise FormatError(f"header promises {count} subgraphs, found {len(body)}")

    subs: list[PlaneSubgraph] = []
    for ln_no, ln in enumerate(body, start=2):
        left, sep, right = ln.partition(" : ")
        if not sep:
            raise FormatError(f"line {ln_no}: missing ' : ' separator")
        fields = left.split()
        if fields and fields[0] == "star" and len(fields) == 2:
            kind = "star"
        elif fields and fields[0] == "twostar" and len(fields) == 3:
            kind = "twostar"
        else:
            raise FormatError(f"line {ln_no}: bad subgraph head {left!r}")
        try:
            centers = tuple(int(f) for f in fields[1:])
        except ValueError:
            raise FormatError(f"line {ln_no}: non-integer center") from None
        if any(c < 0 or c >= n for c in centers):
            raise FormatError(f"line {ln_no}: center index out of range")
        if right.startswith("-") or "--" in right:
            raise FormatError(f"line {ln_no}: malformed edge token")
        pair_tokens = right.split()
        flat_tokens = right.replace("-", " ").split()
        if not pair_tokens or len(flat_tokens) != 2 * len(pair_tokens):
            raise FormatError(f"line {ln_no}: malformed edge list")
        try:
            flat = np.array([int(t) for t in flat_tokens], dtype=np.int64)
        except ValueError:
            raise FormatError(f"line {ln_no}: non-integer vertex") from None
        edges = flat.reshape(-1, 2)
        if edges.min() < 0 or edges.max() >= n:
            raise FormatError(f"line {ln_no}: vertex index out of range")
        if bool((edges[:, 0] == edges[:, 1]).any()):
            raise FormatError(f"line {ln_no}: self-loop edge")
        subs.append(PlaneSubgraph(kind=kind, centers=centers, edges=edges))
    return Decomposition(ps=ps, subgraphs=tuple(subs), k=k, m=m, mode=mode)


def load_decomposition(path: str, ps: PointSet) -> Decomposition:
    try:
        with open(path, "r", encoding="ascii") as fh:
            text = fh.read()
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc}") from None
    except UnicodeDecodeError as exc:
        raise FormatError(f"{path} is not ascii text: {exc}") from None
    return loads_decomposition(text, ps)
