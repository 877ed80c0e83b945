"""Command-line front end.

Exit codes: 0 all requested checks passed, 1 a verification or pipeline
guarantee failed, 2 bad input (files, formats, parameters).
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from .decompose import (
    DEFAULT_C_PRIME,
    DEFAULT_K_MAX,
    decompose,
    decompose_fallback,
    decompose_random_mode,
    load_decomposition,
    save_decomposition,
)
from .errors import (
    CertificationError,
    DecompositionInfeasible,
    FormatError,
    GeneralPositionError,
    GenerationError,
    InputDomainError,
    SizeLimitError,
)
from .grid import DegenerateHullError, assign_cells, build_grid, build_star_triangulation, rich_cells
from .pointsets import (
    DEFAULT_SCALE,
    density_stats,
    gen_perturbed_grid,
    gen_reflection_lowerbound,
    gen_uniform_unit_square,
    load_points,
    save_points,
)
from .render import render_scene
from .verify import lemma_bounds_report, verify_partition


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="planedecomp",
        description="Decompose complete geometric graphs on dense point sets "
        "into fewer than n plane subgraphs, and verify the results.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="write a point file")
    gen_kind = gen.add_subparsers(dest="kind", required=True)
    g_grid = gen_kind.add_parser("grid", help="perturbed integer grid")
    g_grid.add_argument("--side", type=int, required=True)
    g_grid.add_argument("--perturb", type=float, default=0.2)
    g_ref = gen_kind.add_parser("reflection", help="point-reflection lower-bound set")
    g_ref.add_argument("--a", type=int, required=True)
    g_uni = gen_kind.add_parser("uniform", help="uniform points in the scaled unit square")
    g_uni.add_argument("--n", type=int, required=True)
    for p in (g_grid, g_ref, g_uni):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--scale", type=int, default=DEFAULT_SCALE)
        p.add_argument("--out", required=True)

    dec = sub.add_parser("decompose", help="decompose a point file")
    dec.add_argument("points")
    dec.add_argument(
        "--mode",
        choices=("adaptive", "theoretical", "random", "fallback"),
        default="adaptive",
    )
    dec.add_argument("--alpha", type=float, default=None,
                     help="density parameter; default: measure the input")
    dec.add_argument("--k-max", type=int, default=DEFAULT_K_MAX)
    dec.add_argument("--c-prime", type=float, default=DEFAULT_C_PRIME)
    dec.add_argument("--out", required=True)

    ver = sub.add_parser("verify", help="verify a decomposition against its points")
    ver.add_argument("points")
    ver.add_argument("decomposition")

    st = sub.add_parser("stats", help="density and grid diagnostics")
    st.add_argument("points")
    st.add_argument("--alpha", type=float, default=None)
    st.add_argument("--k", type=int, default=5)
    st.add_argument("--c-prime", type=float, default=DEFAULT_C_PRIME)

    ren = sub.add_parser("render", help="draw an SVG figure")
    ren.add_argument("points")
    ren.add_argument("--decomposition", default=None)
    ren.add_argument("--subgraph", type=int, default=0)
    ren.add_argument("--highlight", default=None,
                     help="comma-separated u-v edge list drawn bold")
    ren.add_argument("--k", type=int, default=None,
                     help="draw the k x k grid with rich cells shaded")
    ren.add_argument("--alpha", type=float, default=None)
    ren.add_argument("--out", required=True)
    return parser


def _cmd_generate(args: argparse.Namespace) -> int:
    if args.kind == "grid":
        ps = gen_perturbed_grid(
            side=args.side, perturbation=args.perturb, seed=args.seed, scale=args.scale
        )
    elif args.kind == "reflection":
        ps = gen_reflection_lowerbound(a=args.a, seed=args.seed, scale=args.scale)
    else:
        ps = gen_uniform_unit_square(n=args.n, seed=args.seed, scale=args.scale)
    save_points(ps, args.out)
    stats = density_stats(ps)
    print(f"{len(ps)} {ps.scale} {stats.alpha_effective}")
    return 0


def _cmd_decompose(args: argparse.Namespace) -> int:
    ps = load_points(args.points)
    if args.mode == "random":
        d = decompose_random_mode(ps)
    elif args.mode == "fallback":
        d = decompose_fallback(ps)
    else:
        d = decompose(
            ps, alpha=args.alpha, mode=args.mode,
            k_max=args.k_max, c_prime=args.c_prime,
        )
    save_decomposition(d, args.out)
    print(f"{d.n} {d.k} {d.m} {d.mode} {d.subgraph_count} {d.c_realized}")
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    ps = load_points(args.points)
    d = load_decomposition(args.decomposition, ps)
    report = verify_partition(ps, d)
    print(report.render())
    return 0 if report.all_ok else 1


def _cmd_stats(args: argparse.Namespace) -> int:
    ps = load_points(args.points)
    stats = density_stats(ps)
    alpha = args.alpha if args.alpha is not None else stats.alpha_effective
    print(f"n {stats.n} scale {ps.scale}")
    print(f"alpha_effective {stats.alpha_effective}")
    print(f"min_sq {stats.min_sq} max_sq {stats.max_sq}")
    if stats.volume_flag:
        print("volume_flag declared density below the packing limit")
    gc = build_grid(ps, alpha, args.k)
    cells = assign_cells(ps, gc)
    by_pos = {(c.col, c.row): len(c.point_indices) for c in cells}
    print(f"k {gc.k} side {gc.side} origin {gc.origin.x} {gc.origin.y}")
    for row in range(gc.k - 1, -1, -1):
        print("cells " + " ".join(str(by_pos[(col, row)]) for col in range(gc.k)))
    rich = rich_cells(cells, len(ps), gc.k)
    print(f"rich {len(rich)} of {gc.k * gc.k}")
    report = lemma_bounds_report(ps, gc, cells, c_prime=args.c_prime)
    print(report)
    return 0 if " FAIL " not in report else 1


def _parse_highlight(spec: str) -> list[tuple[int, int]]:
    edges = []
    for tok in spec.replace(",", " ").split():
        left, sep, right = tok.partition("-")
        if not sep or not left.isdigit() or not right.isdigit():
            raise InputDomainError(f"bad highlight token {tok!r}, want u-v")
        edges.append((int(left), int(right)))
    return edges


def _cmd_render(args: argparse.Namespace) -> int:
    if not args.out.endswith(".svg"):
        raise InputDomainError(f"render writes SVG only, got {args.out!r}")
    ps = load_points(args.points)
    gc = None
    cells = None
    tri = None
    if args.k is not None:
        stats = density_stats(ps)
        alpha = args.alpha if args.alpha is not None else stats.alpha_effective
        gc = build_grid(ps, alpha, args.k)
        cells = assign_cells(ps, gc)
        try:
            tri = build_star_triangulation(rich_cells(cells, len(ps), gc.k), gc)
        except DegenerateHullError:
            tri = None
    d = None
    if args.decomposition is not None:
        d = load_decomposition(args.decomposition, ps)
        if not (0 <= args.subgraph < len(d.subgraphs)):
            raise InputDomainError(
                f"subgraph index {args.subgraph} out of range 0..{len(d.subgraphs) - 1}"
            )
    highlight = _parse_highlight(args.highlight) if args.highlight else None
    if highlight:
        n = len(ps)
        for u, v in highlight:
            if not (0 <= u < n and 0 <= v < n):
                raise InputDomainError(f"highlight vertex out of range: {u}-{v}")
    render_scene(
        ps,
        args.out,
        grid_config=gc,
        cells=cells,
        triangulation=tri,
        decomposition=d,
        subgraph_index=args.subgraph,
        highlight_edges=highlight,
    )
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {
        "generate": _cmd_generate,
        "decompose": _cmd_decompose,
        "verify": _cmd_verify,
        "stats": _cmd_stats,
        "render": _cmd_render,
    }
    try:
        return handlers[args.command](args)
    except (CertificationError, DecompositionInfeasible) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (
        FormatError,
        InputDomainError,
        GenerationError,
        GeneralPositionError,
        SizeLimitError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
