import pytest

from tmesh_splines.rational import rat, ZERO, ONE
from tmesh_splines.mesh import tensor_mesh
from tmesh_splines.oracle import SpaceSpec, assemble_system, nullspace_basis
from tmesh_splines.piecewise import (
    PiecewisePoly, apply_D, apply_I, poly_equal, constant_one,
    integral_on_hline, integral_on_vline, integral_dy_on_hline,
    DegreeZero, NoHBC, OutsideDomain,
)
from tmesh_splines.fixtures import fixture_mesh
from conftest import random_tmesh


def _mono(mesh, ci, m, n, entries):
    """PiecewisePoly with given {(a,b): coeff} on one cell, centered terms."""
    f = PiecewisePoly(mesh, m, n)
    grid = [[ZERO] * (n + 1) for _ in range(m + 1)]
    for (a, b), v in entries.items():
        grid[a][b] = rat(v)
    f.set_grid(ci, grid)
    return f


def test_apply_D_monomials():
    sc = tensor_mesh([-1, 1], [-1, 1])  # center at origin: local = global coords
    xy = _mono(sc, 0, 1, 1, {(1, 1): 1})
    d = apply_D(xy)
    assert d.grid(0) == ((rat(1),),)
    x2y2 = _mono(sc, 0, 2, 2, {(2, 2): 1})
    d = apply_D(x2y2)
    assert d.evaluate((rat(1, 2), rat(1, 3))) == 4 * rat(1, 2) * rat(1, 3)
    with pytest.raises(DegreeZero):
        apply_D(_mono(sc, 0, 0, 0, {(0, 0): 1}))


def test_apply_I_constant_cell():
    sc = tensor_mesh([0, 1], [0, 1])
    g = constant_one(sc, 0, 0)
    g.hbc = True
    f = apply_I(g)
    for p in ((rat(1, 2), rat(1, 2)), (rat(1, 3), rat(3, 4)), (rat(1), rat(1))):
        assert f.evaluate(p) == p[0] * p[1]


def test_apply_I_hat_center_value(grid3):
    system = assemble_system(grid3, SpaceSpec(1, 1, 0, 0, hbc=True))
    hat = nullspace_basis(system)[0]
    hat = hat.scaled(1 / hat.evaluate((rat(1), rat(1))))
    f = apply_I(hat)
    # integral of the hat over the lower-left quadrant: int xy over [0,1]^2
    assert f.evaluate((rat(1), rat(1))) == rat(1, 4)
    # total integral of a hat with peak 1 over a 2x2 support is 1
    assert f.evaluate((rat(2), rat(2))) == 1


def test_apply_I_requires_hbc():
    sc = tensor_mesh([0, 1], [0, 1])
    with pytest.raises(NoHBC):
        apply_I(constant_one(sc, 0, 0))


def test_I_D_roundtrip_on_spline_spaces():
    for name, spec in (("fig6", SpaceSpec(1, 1, 0, 0, hbc=True)),
                       ("fig2", SpaceSpec(1, 1, 0, 0, hbc=True)),
                       ("fig6", SpaceSpec(2, 2, 1, 1, hbc=True))):
        mesh = fixture_mesh(name)
        for f in nullspace_basis(assemble_system(mesh, spec)):
            g = apply_D(f)
            g.hbc = True  # image of an HBC spline vanishes outside as well
            back = apply_I(g)
            assert poly_equal(back, f)


def test_image_of_D_has_zero_total_integral(fig2):
    mesh = fixture_mesh("fig2")
    basis = nullspace_basis(assemble_system(mesh, SpaceSpec(2, 2, 1, 1, hbc=True)))
    f = basis[0]
    g = apply_D(f)
    g.hbc = True
    integ = apply_I(g)
    xl, xr, yb, yt = mesh.domain
    assert integ.evaluate((xr, yt)) == 0  # telescoped double integral vanishes


def test_evaluate_outside():
    sc = tensor_mesh([0, 1], [0, 1])
    f = constant_one(sc, 0, 0)
    with pytest.raises(OutsideDomain):
        f.evaluate((rat(2), rat(2)))
    f.hbc = True
    assert f.evaluate((rat(2), rat(2))) == 0


def test_evaluate_continuous_across_edges():
    mesh = fixture_mesh("fig6")
    basis = nullspace_basis(assemble_system(mesh, SpaceSpec(1, 1, 0, 0, hbc=True)))
    pts = [(rat(1), rat(3, 2)), (rat(3, 2), rat(1)), (rat(2), rat(3, 2)),
           (rat(1), rat(1)), (rat(3, 2), rat(3, 2))]
    for f in basis:
        for p in pts:
            vals = {f.evaluate(p, sx, sy) for sx in (1, -1) for sy in (1, -1)}
            assert len(vals) == 1


def test_refine_and_equal():
    coarse = tensor_mesh([0, 2], [0, 2])
    f = _mono(coarse, 0, 1, 1, {(0, 0): 3, (1, 1): 2})
    fine = tensor_mesh([0, 1, 2], [0, 1, 2])
    g = f.refine_to(fine)
    for p in ((rat(1, 2), rat(1, 2)), (rat(3, 2), rat(1)), (rat(2), rat(2))):
        assert f.evaluate(p) == g.evaluate(p)
    assert poly_equal(f, g)
    h = g.plus(g.scaled(-1))
    assert not h.coeffs


def test_line_integrals_closed_form(grid3):
    hat = nullspace_basis(assemble_system(grid3, SpaceSpec(1, 1, 0, 0, hbc=True)))[0]
    hat = hat.scaled(1 / hat.evaluate((rat(1), rat(1))))
    # along y=1 the hat is the 1D tent: integral = 1
    assert integral_on_hline(hat, rat(1), rat(0), rat(2), +1) == 1
    assert integral_on_hline(hat, rat(1), rat(0), rat(2), -1) == 1
    assert integral_on_vline(hat, rat(1), rat(0), rat(2), +1) == 1
    # d/dy jump across y=1 at the ridge: tent slope flips from +1 to -1
    below = integral_dy_on_hline(hat, rat(1), rat(0), rat(2), -1)
    above = integral_dy_on_hline(hat, rat(1), rat(0), rat(2), +1)
    assert below == 1 and above == -1
    # partial span
    assert integral_on_hline(hat, rat(1), rat(0), rat(1), +1) == rat(1, 2)


def test_line_integral_agrees_with_brute_sampling():
    # piecewise-linear restriction: trapezoid on each micro-interval is exact,
    # so compare against midpoint-corrected sums over fine rational steps
    mesh = fixture_mesh("fig6")
    basis = nullspace_basis(assemble_system(mesh, SpaceSpec(1, 1, 0, 0, hbc=True)))
    f = basis[2]
    y = rat(3, 2)
    exact = integral_on_hline(f, y, rat(0), rat(3), +1)
    steps = 48
    total = ZERO
    for k in range(steps):
        a = rat(3 * k, steps)
        b = rat(3 * (k + 1), steps)
        fa = f.evaluate((a, y), 1, 1)
        fb = f.evaluate((b, y), -1, 1)
        total += (b - a) * (fa + fb) / 2
    assert total == exact
