"""Shared fixtures: the deterministic workhorse point sets."""

from random import Random

import pytest

from planedecomp.errors import GeneralPositionError
from planedecomp.geometry import Point
from planedecomp.grid import Cell, FourCellWitness
from planedecomp.pointsets import (
    PointSet,
    density_stats,
    gen_perturbed_grid,
    gen_uniform_unit_square,
)


@pytest.fixture(scope="session")
def grid900():
    return gen_perturbed_grid(side=30, perturbation=0.2, seed=7)


@pytest.fixture(scope="session")
def grid900_alpha(grid900):
    return density_stats(grid900).alpha_effective


@pytest.fixture(scope="session")
def uniform300():
    return gen_uniform_unit_square(300, seed=3)


def clustered_witness_set(m, seed=42):
    """Four clusters of m points in boxes forming a containment witness.

    The boxes sit at the corners of a tall triangle with the fourth well
    inside; the whole set is the 4m cluster points, so a decomposition of
    it has no leftover stars.  Returns (point_set, witness).
    """
    boxes = [
        (0, 0, 6000, 6000),
        (194000, 0, 200000, 6000),
        (97000, 194000, 103000, 200000),
        (97000, 76000, 103000, 82000),
    ]
    rng = Random(seed)
    for _ in range(100):
        pts, used = [], set()
        for x0, y0, x1, y1 in boxes:
            for _ in range(m):
                while True:
                    p = (rng.randint(x0 + 1, x1 - 1), rng.randint(y0 + 1, y1 - 1))
                    if p not in used:
                        used.add(p)
                        break
                pts.append(Point(*p))
        try:
            ps = PointSet(tuple(pts), 200000)
            break
        except GeneralPositionError:
            continue
    else:
        raise AssertionError("could not draw a general-position cluster set")
    clusters = tuple(tuple(range(m * i, m * (i + 1))) for i in range(4))
    cells = tuple(Cell(i, 0, c) for i, c in enumerate(clusters))
    witness = FourCellWitness(cells=cells, clusters=clusters, m=m)
    return ps, witness


@pytest.fixture(scope="session")
def witness100():
    return clustered_witness_set(25)
