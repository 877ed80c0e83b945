"""The independent verifier: partition, shape, planarity and count checks,
crossing-family certification, the exact maximum-family solver, the 4-tuple
counter, and the quantitative grid report."""

import math
from random import Random

import numpy as np
import pytest

from oracles import count_4tuples_hull_oracle, max_family_enumerate, random_gp_pointset
from planedecomp.decompose import (
    Decomposition,
    PlaneSubgraph,
    decompose,
    decompose_fallback,
    decompose_random_mode,
)
from planedecomp.errors import InputDomainError, SizeLimitError
from planedecomp.geometry import Point
from planedecomp.grid import assign_cells, build_grid
from planedecomp.pointsets import PointSet, gen_uniform_unit_square
from planedecomp.verify import (
    CrossingFamily,
    VerificationReport,
    check_crossing_family,
    count_4tuples,
    is_plane,
    lemma_bounds_report,
    max_crossing_family_exact,
    verify_partition,
)


def ps_of(coords, scale):
    return PointSet(tuple(Point(x, y) for x, y in coords), scale)


SQUARE = [(0, 0), (10, 0), (10, 10), (0, 10)]


def square_witness_decomposition():
    """A clean 3-subgraph witness decomposition of the square: the crossing
    diagonals live in different subgraphs."""
    ps = ps_of(SQUARE, 10)
    subs = (
        PlaneSubgraph(kind="twostar", centers=(0, 1), edges=[(0, 2), (1, 3)]),
        PlaneSubgraph(kind="star", centers=(0,), edges=[(0, 1), (0, 3)]),
        PlaneSubgraph(kind="star", centers=(2,), edges=[(1, 2), (2, 3)]),
    )
    return ps, Decomposition(ps=ps, subgraphs=subs, k=2, m=1, mode="witness")


class TestAcceptsValid:
    def test_fallback_small(self):
        ps = ps_of([(0, 0), (10, 1), (3, 8), (7, 5)], 16)
        rep = verify_partition(ps, decompose_fallback(ps))
        assert rep.all_ok and rep.failures == ()

    def test_grid900_witness(self, grid900):
        rep = verify_partition(grid900, decompose(grid900))
        assert rep.all_ok and rep.failures == ()

    def test_uniform300_random_mode(self, uniform300):
        rep = verify_partition(uniform300, decompose_random_mode(uniform300))
        assert rep.all_ok and rep.failures == ()

    def test_clustered_witness(self, witness100):
        from planedecomp.decompose import decompose_special

        ps, w = witness100
        d = Decomposition(
            ps=ps, subgraphs=tuple(decompose_special(w, ps)), k=0, m=w.m, mode="witness"
        )
        rep = verify_partition(ps, d)
        assert rep.all_ok

    def test_single_point(self):
        ps = ps_of([(3, 4)], 8)
        d = Decomposition(ps=ps, subgraphs=(), k=0, m=0, mode="fallback")
        rep = verify_partition(ps, d)
        assert rep.all_ok

    def test_render_all_pass(self):
        ps = ps_of([(0, 0), (10, 1), (3, 8)], 16)
        rep = verify_partition(ps, decompose_fallback(ps))
        lines = rep.render().splitlines()
        assert len(lines) == 4
        assert all(ln.startswith("CHECK ") and " PASS " in ln for ln in lines)
        assert [ln.split()[1] for ln in lines] == [
            "partition",
            "planarity",
            "count",
            "shape",
        ]

    def test_decomposer_outputs_verify_across_seeds(self):
        # the verifier accepts whatever the decomposer emits, over many
        # deterministic configurations and both decomposition routes
        for seed in range(200):
            n = 10 + (seed % 7) * 15
            ps = gen_uniform_unit_square(n, seed=seed)
            if seed % 3 == 0:
                d = decompose_random_mode(ps)
            else:
                d = decompose(ps, k_max=8)
            rep = verify_partition(ps, d)
            assert rep.all_ok, (seed, rep.failures[:2])

    def test_witness_count_ratio_bound(self, grid900):
        # witness mode with grid granularity k keeps the subgraph count at
        # most (1 - 1/(3k^2)) n, since m = ceil(n / (3k^2))
        d = decompose(grid900)
        n, k = len(grid900), d.k
        assert d.subgraph_count * 3 * k * k <= (3 * k * k - 1) * n


class TestDetectsCorruption:
    def test_duplicate_edge(self):
        ps = ps_of([(0, 0), (10, 1), (3, 8), (7, 5)], 16)
        d = decompose_fallback(ps)
        subs = list(d.subgraphs)
        e = subs[0].edges.tolist()
        subs[0] = PlaneSubgraph(kind="star", centers=(0,), edges=e + [e[0]])
        bad = Decomposition(ps=ps, subgraphs=tuple(subs), k=0, m=0, mode="fallback")
        rep = verify_partition(ps, bad)
        assert not rep.partition_ok
        assert rep.planarity_ok and rep.count_ok and rep.shape_ok
        assert any("appears in subgraphs" in f[1] for f in rep.failures)

    def test_dropped_edge(self):
        ps = ps_of([(0, 0), (10, 1), (3, 8), (7, 5)], 16)
        d = decompose_fallback(ps)
        subs = list(d.subgraphs)
        subs[0] = PlaneSubgraph(
            kind="star", centers=(0,), edges=subs[0].edges[:-1]
        )
        bad = Decomposition(ps=ps, subgraphs=tuple(subs), k=0, m=0, mode="fallback")
        rep = verify_partition(ps, bad)
        assert not rep.partition_ok
        assert rep.planarity_ok and rep.count_ok and rep.shape_ok
        assert any("first missing 0-3" in f[1] for f in rep.failures)

    def test_swapped_edge_breaks_partition(self):
        # 0-3 rewritten to 1-3: one edge now missing, another duplicated
        ps = ps_of([(0, 0), (10, 1), (3, 8), (7, 5)], 16)
        subs = (
            PlaneSubgraph(kind="star", centers=(0,), edges=[(0, 1), (0, 2), (1, 3)]),
            PlaneSubgraph(kind="star", centers=(1,), edges=[(1, 2), (1, 3)]),
            PlaneSubgraph(kind="star", centers=(2,), edges=[(2, 3)]),
        )
        bad = Decomposition(ps=ps, subgraphs=subs, k=0, m=0, mode="fallback")
        rep = verify_partition(ps, bad)
        assert not rep.partition_ok
        assert not rep.shape_ok  # (1,3) does not touch center 0
        assert any("appears in subgraphs 0 and 1" in f[1] for f in rep.failures)
        assert any("first missing 0-3" in f[1] for f in rep.failures)

    def test_mislabeled_center_isolates_shape(self):
        ps = ps_of([(0, 0), (10, 1), (3, 8), (7, 5)], 16)
        subs = (
            PlaneSubgraph(kind="star", centers=(3,), edges=[(0, 1), (0, 2), (0, 3)]),
            PlaneSubgraph(kind="star", centers=(1,), edges=[(1, 2), (1, 3)]),
            PlaneSubgraph(kind="star", centers=(2,), edges=[(2, 3)]),
        )
        bad = Decomposition(ps=ps, subgraphs=subs, k=0, m=0, mode="fallback")
        rep = verify_partition(ps, bad)
        assert not rep.shape_ok
        assert rep.partition_ok and rep.planarity_ok and rep.count_ok
        assert any("missing its center 3" in f[1] for f in rep.failures)

    def test_crossing_twostar_isolates_planarity(self):
        ps, d = square_witness_decomposition()
        rep = verify_partition(ps, d)
        # the fixture is crafted to be wrong in exactly one way: the two
        # stars of subgraph 0 are the crossing diagonals
        assert not rep.planarity_ok
        assert rep.partition_ok and rep.count_ok and rep.shape_ok
        assert any(
            "planarity: subgraph 0 edges 0-2 and 1-3 cross" == f[1]
            for f in rep.failures
        )

    def test_unsound_subgraph_gets_the_full_scan(self):
        # wrong center claim plus a genuine crossing: both failures reported
        ps = ps_of(SQUARE, 10)
        subs = (
            PlaneSubgraph(kind="star", centers=(0,), edges=[(0, 2), (1, 3)]),
            PlaneSubgraph(kind="star", centers=(0,), edges=[(0, 1), (0, 3)]),
            PlaneSubgraph(kind="star", centers=(2,), edges=[(1, 2), (2, 3)]),
        )
        d = Decomposition(ps=ps, subgraphs=subs, k=2, m=1, mode="witness")
        rep = verify_partition(ps, d)
        assert not rep.shape_ok
        assert not rep.planarity_ok
        assert rep.partition_ok and rep.count_ok

    def test_miscount(self, uniform300):
        d = decompose_random_mode(uniform300)
        bad = Decomposition(
            ps=uniform300, subgraphs=d.subgraphs, k=d.k, m=d.m + 1, mode="witness"
        )
        rep = verify_partition(uniform300, bad)
        assert not rep.count_ok
        assert rep.partition_ok and rep.planarity_ok and rep.shape_ok

    def test_witness_mode_requires_positive_m(self):
        ps = ps_of([(0, 0), (10, 1)], 16)
        d = Decomposition(
            ps=ps,
            subgraphs=(PlaneSubgraph(kind="star", centers=(0,), edges=[(0, 1)]),),
            k=1,
            m=0,
            mode="witness",
        )
        rep = verify_partition(ps, d)
        assert not rep.count_ok
        assert any("witness mode with m=0" in f[1] for f in rep.failures)

    def test_unknown_mode_fails_count(self):
        ps = ps_of([(0, 0), (10, 1)], 16)
        d = Decomposition(
            ps=ps,
            subgraphs=(PlaneSubgraph(kind="star", centers=(0,), edges=[(0, 1)]),),
            k=0,
            m=0,
            mode="magic",
        )
        rep = verify_partition(ps, d)
        assert not rep.count_ok

    def test_out_of_range_vertex(self):
        ps = ps_of([(0, 0), (10, 1), (3, 8)], 16)
        subs = (
            PlaneSubgraph(kind="star", centers=(0,), edges=[(0, 1), (0, 7)]),
            PlaneSubgraph(kind="star", centers=(1,), edges=[(1, 2)]),
        )
        d = Decomposition(ps=ps, subgraphs=subs, k=0, m=0, mode="fallback")
        rep = verify_partition(ps, d)
        assert not rep.partition_ok

    def test_render_fail_lines_and_suffix(self):
        ps = ps_of([(0, 0), (10, 1), (3, 8)], 16)
        subs = (
            PlaneSubgraph(kind="star", centers=(0,), edges=[(0, 7)]),
            PlaneSubgraph(kind="star", centers=(1,), edges=[(1, 9)]),
        )
        d = Decomposition(ps=ps, subgraphs=subs, k=0, m=0, mode="fallback")
        rep = verify_partition(ps, d)
        text = rep.render()
        line = next(ln for ln in text.splitlines() if ln.startswith("CHECK partition"))
        assert " FAIL " in line and "(+1 more)" in line

    def test_flags_match_failures(self, uniform300):
        good = verify_partition(uniform300, decompose_random_mode(uniform300))
        assert good.all_ok == (good.failures == ()) == True  # noqa: E712
        ps, d = square_witness_decomposition()
        bad = verify_partition(ps, d)
        assert not bad.all_ok and bad.failures != ()


class TestIsPlane:
    def test_diagonals_cross(self):
        ps = ps_of(SQUARE, 10)
        assert not is_plane(ps, [(0, 2), (1, 3)])

    def test_star_is_plane(self):
        ps = ps_of(SQUARE, 10)
        assert is_plane(ps, [(0, 1), (0, 2), (0, 3)])

    def test_empty_is_plane(self):
        ps = ps_of(SQUARE, 10)
        assert is_plane(ps, [])

    def test_validation(self):
        ps = ps_of(SQUARE, 10)
        with pytest.raises(InputDomainError):
            is_plane(ps, [(0, 9)])
        with pytest.raises(InputDomainError):
            is_plane(ps, [(1, 1)])


class TestCrossingFamily:
    def test_reflection_matching_certifies(self):
        from planedecomp.pointsets import gen_reflection_lowerbound, reflection_matching

        ps = gen_reflection_lowerbound(a=2)
        fam = reflection_matching(ps)
        assert len(fam) == len(ps) // 2
        assert check_crossing_family(ps, fam)

    def test_shared_endpoint_is_not_crossing(self):
        ps = ps_of(SQUARE, 10)
        assert not check_crossing_family(ps, [(0, 2), (0, 1)])

    def test_vacuous_cases(self):
        ps = ps_of(SQUARE, 10)
        assert check_crossing_family(ps, [])
        assert check_crossing_family(ps, [(0, 2)])

    def test_bad_edge_rejected(self):
        ps = ps_of(SQUARE, 10)
        with pytest.raises(InputDomainError):
            check_crossing_family(ps, [(0, 0)])
        with pytest.raises(InputDomainError):
            check_crossing_family(ps, [(0, 11)])


class TestMaxFamilyExact:
    def test_convex_square(self):
        fam = max_crossing_family_exact(ps_of(SQUARE, 10))
        assert fam.size == 2
        assert sorted(fam.edges) == [(0, 2), (1, 3)]
        assert fam.plane_tree_bound == 2

    def test_triangle_with_interior_point(self):
        ps = ps_of([(0, 0), (100, 0), (50, 90), (45, 40)], 100)
        assert max_crossing_family_exact(ps).size == 1

    def test_convex_hexagon(self):
        pts = [
            (
                round(100 * math.cos(i * math.pi / 3 + 0.1)),
                round(100 * math.sin(i * math.pi / 3 + 0.1)),
            )
            for i in range(6)
        ]
        ps = ps_of(pts, 100)
        fam = max_crossing_family_exact(ps)
        assert fam.size == 3
        assert sorted(fam.edges) == [(0, 3), (1, 4), (2, 5)]

    def test_matches_enumeration_oracle(self):
        rng = Random(17)
        for trial in range(20):
            n = 4 + trial % 7  # 4..10
            ps = random_gp_pointset(rng, n, span=500)
            fam = max_crossing_family_exact(ps)
            assert fam.size == max_family_enumerate(ps), trial
            assert check_crossing_family(ps, fam.edges)
            assert fam.plane_tree_bound == n - fam.size

    def test_size_cap(self):
        rng = Random(3)
        ps = random_gp_pointset(rng, 17, span=10000)
        with pytest.raises(SizeLimitError):
            max_crossing_family_exact(ps)

    def test_two_points_no_family_of_two(self):
        ps = ps_of([(0, 0), (5, 7)], 8)
        assert max_crossing_family_exact(ps).size == 1


class TestCount4Tuples:
    def test_convex_square_has_none(self):
        assert count_4tuples(ps_of(SQUARE, 10)) == 0

    def test_triangle_with_interior_point(self):
        ps = ps_of([(0, 0), (100, 0), (50, 90), (45, 40)], 100)
        assert count_4tuples(ps) == 1

    def test_below_four_points(self):
        assert count_4tuples(ps_of([(0, 0), (10, 1), (3, 8)], 16)) == 0

    def test_matches_hull_oracle(self):
        rng = Random(31)
        for trial in range(8):
            ps = random_gp_pointset(rng, 12, span=2000)
            assert count_4tuples(ps) == count_4tuples_hull_oracle(ps), trial

    def test_size_cap(self):
        rng = Random(5)
        ps = random_gp_pointset(rng, 201, span=10**6)
        with pytest.raises(SizeLimitError):
            count_4tuples(ps)


class TestLemmaReport:
    def test_grid900_k5_all_pass(self, grid900, grid900_alpha):
        gc = build_grid(grid900, grid900_alpha, 5)
        cells = assign_cells(grid900, gc)
        text = lemma_bounds_report(grid900, gc, cells)
        lines = text.splitlines()
        assert len(lines) == 5
        assert all(" PASS " in ln for ln in lines)
        assert "max_cell=36" in lines[1]
        assert "rich=25" in lines[2]
        assert "v=4" in lines[3]
        assert "crossed=8" in lines[4]

    def test_below_threshold_is_na(self):
        ps = gen_uniform_unit_square(20, seed=0)
        gc = build_grid(ps, 1.0, 5)
        cells = assign_cells(ps, gc)
        text = lemma_bounds_report(ps, gc, cells)
        assert "CHECK cell_upper_bound NA" in text
        assert "n0=300" in text

    def test_degenerate_hull_is_na(self):
        coords = [(2, 4), (25, 6), (44, 1), (62, 0), (85, 0), (106, 5)]
        ps = ps_of(coords, 8)
        gc = build_grid(ps, 3.0, 3)
        cells = assign_cells(ps, gc)
        lines = lemma_bounds_report(ps, gc, cells).splitlines()
        assert len(lines) == 5
        assert lines[3].startswith("CHECK hull_vertices NA")
        assert lines[4].startswith("CHECK crossed_cells NA")

    def test_undersized_alpha_fails_density_and_richness(self, grid900):
        gc = build_grid(grid900, 0.5, 5)
        cells = assign_cells(grid900, gc)
        text = lemma_bounds_report(grid900, gc, cells)
        assert "CHECK density FAIL" in text
        assert "CHECK rich_count FAIL" in text
        assert "CHECK cell_upper_bound NA" in text  # n0 = 1200 > 900


class TestReportDataclass:
    def test_crossing_family_size(self):
        fam = CrossingFamily(edges=((0, 2), (1, 3)), plane_tree_bound=2)
        assert fam.size == 2

    def test_all_ok_requires_all_flags(self):
        rep = VerificationReport(
            partition_ok=True,
            planarity_ok=False,
            count_ok=True,
            shape_ok=True,
            failures=((0, "planarity: x"),),
        )
        assert not rep.all_ok
        assert "CHECK planarity FAIL planarity: x" in rep.render()
