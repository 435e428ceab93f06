"""Shared test helpers: independent oracles and randomized mesh generators."""

import random

import pytest

from tmesh_splines.rational import rat
from tmesh_splines.mesh import TMesh, build_from_cells, tensor_mesh
from tmesh_splines.fixtures import load_fixture, fixture_mesh


def bspline_hbc_dim(gx: int, gy: int, m: int, n: int) -> int:
    """Classical knot-count dimension of the HBC space of bi-degree (m, n)
    and smoothness (m-1, n-1) over a tensor mesh with gx/gy interior lines.

    Independent of the rank oracle: per direction a maximally smooth spline
    vanishing with all derivatives up to m-1 at both ends has g - m + 1
    B-splines when positive.
    """
    return max(0, gx - m + 1) * max(0, gy - n + 1)


def bspline_open_dim(gx: int, gy: int, m: int, n: int) -> int:
    """Dimension of the same space without boundary conditions:
    (m + 1 + gx) per direction (each interior line adds one dof)."""
    return (m + 1 + gx) * (n + 1 + gy)


_FRACTIONS = (rat(1, 2), rat(1, 3), rat(2, 3))


def random_tmesh(seed: int, rows: int = 2, cols: int = 2, splits: int = 5) -> TMesh:
    """Random regular T-mesh: a tensor base grid refined by repeatedly
    splitting one cell with a full chord.  Always valid and deterministic."""
    rng = random.Random(seed)
    cells = [(rat(i), rat(i + 1), rat(j), rat(j + 1))
             for i in range(cols) for j in range(rows)]
    for _ in range(splits):
        idx = rng.randrange(len(cells))
        x0, x1, y0, y1 = cells.pop(idx)
        f = _FRACTIONS[rng.randrange(len(_FRACTIONS))]
        if rng.random() < 0.5:
            c = x0 + f * (x1 - x0)
            cells.extend([(x0, c, y0, y1), (c, x1, y0, y1)])
        else:
            c = y0 + f * (y1 - y0)
            cells.extend([(x0, x1, y0, c), (x0, x1, c, y1)])
    return build_from_cells(cells)


@pytest.fixture
def fig2():
    return load_fixture("fig2")


@pytest.fixture
def fig5():
    return load_fixture("fig5")


@pytest.fixture
def fig6():
    return load_fixture("fig6")


@pytest.fixture
def fig9():
    return load_fixture("fig9")


@pytest.fixture
def fig11_t1():
    return load_fixture("fig11_t1")


@pytest.fixture
def grid3():
    """The 3x3-vertex tensor grid (0,1,2) x (0,1,2)."""
    return tensor_mesh([0, 1, 2], [0, 1, 2])
