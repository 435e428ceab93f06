import random

import pytest

from tmesh_splines.rational import rat
from tmesh_splines.mesh import tensor_mesh, build_from_cells, extend
from tmesh_splines.oracle import (
    SpaceSpec, InvalidSpec, TooLarge, assemble_system, dim_oracle,
    nullspace_basis,
)
from tmesh_splines.hierarchy import generate_random
from conftest import bspline_hbc_dim, bspline_open_dim, random_tmesh


def test_space_spec_validation():
    SpaceSpec(0, 0, -1, -1)
    SpaceSpec(3, 2, 2, 0)
    with pytest.raises(InvalidSpec):
        SpaceSpec(1, 1, 1, 0)
    with pytest.raises(InvalidSpec):
        SpaceSpec(2, 2, -2, 0)
    with pytest.raises(InvalidSpec):
        SpaceSpec(-1, 0, -1, -1)


def test_row_counts_single_cell():
    sc = tensor_mesh([0, 1], [0, 1])
    system = assemble_system(sc, SpaceSpec(1, 1, 0, 0, hbc=True))
    assert system.matrix.nrows == 8  # 4 boundary segments x 2 rows
    assert system.unknowns == 4
    assert system.dimension() == 0

    none_at_all = assemble_system(tensor_mesh([0, 1, 2], [0, 1, 2]),
                                  SpaceSpec(0, 0, -1, -1, hbc=True))
    assert none_at_all.matrix.nrows == 0
    assert none_at_all.dimension() == 4  # one constant per cell


def test_assembly_deterministic(grid3):
    a = assemble_system(grid3, SpaceSpec(2, 2, 1, 1, hbc=True))
    b = assemble_system(grid3, SpaceSpec(2, 2, 1, 1, hbc=True))
    assert a.matrix.rows == b.matrix.rows


def test_tensor_grid_bspline_counts():
    rng = random.Random(2)
    for _ in range(12):
        gx = rng.randrange(0, 4)
        gy = rng.randrange(0, 4)
        xs = sorted(rng.sample(range(10), gx + 2))
        ys = sorted(rng.sample(range(10), gy + 2))
        mesh = tensor_mesh(xs, ys)
        for m in (1, 2, 3):
            spec = SpaceSpec(m, m, m - 1, m - 1, hbc=True)
            assert dim_oracle(mesh, spec) == bspline_hbc_dim(gx, gy, m, m)
        assert dim_oracle(mesh, SpaceSpec(2, 2, 1, 1)) == bspline_open_dim(gx, gy, 2, 2)


def test_single_cell_spaces():
    sc = tensor_mesh([0, 1], [0, 1])
    assert dim_oracle(sc, SpaceSpec(2, 2, 1, 1)) == 9
    assert dim_oracle(sc, SpaceSpec(2, 2, 0, 0, hbc=False)) == 9
    assert dim_oracle(sc, SpaceSpec(2, 2, 1, 1, hbc=True)) == 0


def test_fig2_and_fig6_paper_values(fig2, fig6):
    assert dim_oracle(fig2, SpaceSpec(1, 1, 0, 0, hbc=True)) == 6
    assert dim_oracle(fig2, SpaceSpec(2, 2, 1, 1, hbc=True)) == 1
    assert dim_oracle(fig6.realized, SpaceSpec(2, 2, 1, 1, hbc=True)) == 1


def test_nullspace_basis_hat(grid3):
    system = assemble_system(grid3, SpaceSpec(1, 1, 0, 0, hbc=True))
    basis = nullspace_basis(system)
    assert len(basis) == 1
    hat = basis[0]
    center = hat.evaluate((rat(1), rat(1)))
    assert center != 0
    hat = hat.scaled(1 / center)
    assert hat.evaluate((rat(1), rat(1))) == 1
    assert hat.evaluate((rat(1, 2), rat(1, 2))) == rat(1, 4)
    assert hat.evaluate((rat(2), rat(2))) == 0


def test_nullspace_empty():
    sc = tensor_mesh([0, 1], [0, 1])
    system = assemble_system(sc, SpaceSpec(1, 1, 0, 0, hbc=True))
    assert nullspace_basis(system) == []


def test_bernstein_assembly_agrees():
    for seed in range(6):
        mesh = random_tmesh(seed, 2, 2, splits=4)
        for spec in (SpaceSpec(1, 1, 0, 0, hbc=True),
                     SpaceSpec(2, 2, 1, 1, hbc=True),
                     SpaceSpec(2, 2, 0, 0)):
            assert dim_oracle(mesh, spec) == dim_oracle(mesh, spec, basis="bernstein")


def test_affine_invariance():
    for seed in range(5):
        mesh = random_tmesh(seed, 2, 2, splits=5)
        sx, sy = rat(3, 2), rat(5, 7)
        tx, ty = rat(-4), rat(9, 2)
        cells = [(sx * x0 + tx, sx * x1 + tx, sy * y0 + ty, sy * y1 + ty)
                 for x0, x1, y0, y1 in mesh.cells]
        moved = build_from_cells(cells)
        for spec in (SpaceSpec(1, 1, 0, 0, hbc=True), SpaceSpec(2, 2, 1, 1, hbc=True)):
            assert dim_oracle(mesh, spec) == dim_oracle(moved, spec)


def test_extension_margin_invariance(fig2):
    dims = {dim_oracle(extend(fig2, 2, 2, m), SpaceSpec(2, 2, 1, 1, hbc=True))
            for m in (rat(1, 4), rat(1, 3), rat(2))}
    assert len(dims) == 1


def test_size_guard():
    h = generate_random(0, 5, 5, 0, 0)
    with pytest.raises(TooLarge):
        dim_oracle(h.realized, SpaceSpec(29, 29, 0, 0))


def test_hierarchical_formula_spot(fig6):
    mesh = fig6.realized
    st = mesh.stats
    assert dim_oracle(mesh, SpaceSpec(2, 2, 1, 1, hbc=True)) == st.V_plus - st.E + 2
