"""Piecewise polynomials over T-meshes, with exact line integrals.

A PiecewisePoly stores one (m+1) x (n+1) coefficient grid per cell in local
monomials about the cell center,

    p(x, y) = sum C[a][b] (x - cx)^a (y - cy)^b,

the representation used by the rank oracle.  Centered monomials keep the
rational entries small.  The module also provides the mixed-partial-
derivative operator and its inverse, the cumulative double integral.
"""

from __future__ import annotations

from functools import lru_cache

from .rational import rat, ZERO, ONE
from .mesh import TMesh, tensor_mesh, MeshError


class OutsideDomain(MeshError):
    """Point evaluation outside the mesh of a non-HBC function."""


class DegreeZero(MeshError):
    """The mixed partial derivative needs bi-degree >= (1, 1)."""


class NoHBC(MeshError):
    """The operation requires a function vanishing outside the domain."""


@lru_cache(maxsize=None)
def _binom(n, k):
    if k < 0 or k > n:
        return 0
    r = 1
    for i in range(k):
        r = r * (n - i) // (i + 1)
    return r


def _falling(a, k):
    r = 1
    for i in range(k):
        r *= a - i
    return r


def cell_center(cell):
    x0, x1, y0, y1 = cell
    return ((x0 + x1) / 2, (y0 + y1) / 2)


def _zero_grid(m, n):
    return tuple(tuple(ZERO for _ in range(n + 1)) for _ in range(m + 1))


class PiecewisePoly:
    """A per-cell polynomial of bi-degree (m, n) over a T-mesh."""

    def __init__(self, mesh: TMesh, m: int, n: int, coeffs=None, hbc=False):
        self.mesh = mesh
        self.m = m
        self.n = n
        # cell index -> grid; cells absent from the dict are identically zero.
        self.coeffs = dict(coeffs) if coeffs else {}
        self.hbc = hbc

    def grid(self, ci):
        g = self.coeffs.get(ci)
        return g if g is not None else _zero_grid(self.m, self.n)

    def set_grid(self, ci, grid):
        grid = tuple(tuple(rat(v) for v in row) for row in grid)
        if any(v != 0 for row in grid for v in row):
            self.coeffs[ci] = grid
        else:
            self.coeffs.pop(ci, None)

    # -- evaluation ---------------------------------------------------------

    def eval_in_cell(self, ci, x, y):
        g = self.coeffs.get(ci)
        if g is None:
            return ZERO
        cx, cy = cell_center(self.mesh.cells[ci])
        dx, dy = x - cx, y - cy
        total = ZERO
        for a in range(self.m, -1, -1):
            row = ZERO
            grow = g[a]
            for b in range(self.n, -1, -1):
                row = row * dy + grow[b]
            total = total * dx + row
        return total

    def evaluate(self, p, sx=1, sy=1):
        """Exact value at p; the (sx, sy) bias picks the cell on mesh lines."""
        ci = self.mesh.locate_cell(p, sx, sy)
        if ci is None:
            if self.hbc:
                return ZERO
            raise OutsideDomain(f"{p} outside the mesh domain")
        return self.eval_in_cell(ci, p[0], p[1])

    def dx_in_cell(self, ci):
        """Coefficient grid of d/dx on one cell (degree (m-1, n))."""
        g = self.grid(ci)
        return tuple(tuple(g[a + 1][b] * (a + 1) for b in range(self.n + 1))
                     for a in range(self.m))

    def dy_in_cell(self, ci):
        g = self.grid(ci)
        return tuple(tuple(g[a][b + 1] * (b + 1) for b in range(self.n))
                     for a in range(self.m + 1))

    # -- algebra ------------------------------------------------------------

    def scaled(self, c) -> "PiecewisePoly":
        c = rat(c)
        out = PiecewisePoly(self.mesh, self.m, self.n, hbc=self.hbc)
        if c != 0:
            for ci, g in self.coeffs.items():
                out.coeffs[ci] = tuple(tuple(v * c for v in row) for row in g)
        return out

    def plus(self, other: "PiecewisePoly") -> "PiecewisePoly":
        if other.mesh is not self.mesh and other.mesh != self.mesh:
            raise MeshError("cannot add functions over different meshes")
        if (other.m, other.n) != (self.m, self.n):
            raise MeshError("cannot add functions of different bi-degree")
        out = PiecewisePoly(self.mesh, self.m, self.n, self.coeffs,
                            hbc=self.hbc and other.hbc)
        for ci, g in other.coeffs.items():
            mine = out.grid(ci)
            out.set_grid(ci, tuple(tuple(mine[a][b] + g[a][b]
                                         for b in range(self.n + 1))
                                   for a in range(self.m + 1)))
        return out

    def coeff_vector(self, cell_count=None):
        """Dense unknown vector in cell-major, then (a, b)-major order."""
        count = cell_count if cell_count is not None else len(self.mesh.cells)
        vec = []
        for ci in range(count):
            g = self.grid(ci)
            for a in range(self.m + 1):
                vec.extend(g[a])
        return vec

    # -- refinement ---------------------------------------------------------

    def refine_to(self, finer: TMesh) -> "PiecewisePoly":
        """Re-expand over a mesh whose cells each lie inside one cell here."""
        out = PiecewisePoly(finer, self.m, self.n, hbc=self.hbc)
        for ci, cell in enumerate(finer.cells):
            cx, cy = cell_center(cell)
            src = self.mesh.locate_cell((cx, cy))
            if src is None:
                if not self.hbc:
                    raise MeshError("refinement mesh leaves the source domain")
                continue
            g = self.coeffs.get(src)
            if g is None:
                continue
            scx, scy = cell_center(self.mesh.cells[src])
            out.set_grid(ci, _recenter(g, self.m, self.n, cx - scx, cy - scy))
        return out


def _recenter(g, m, n, dx, dy):
    """Shift a centered-monomial grid to a center offset by (dx, dy)."""
    new = [[ZERO] * (n + 1) for _ in range(m + 1)]
    for a in range(m + 1):
        for b in range(n + 1):
            v = g[a][b]
            if v == 0:
                continue
            pa = ONE
            for aa in range(a, -1, -1):
                w = v * _binom(a, aa) * pa
                pb = ONE
                for bb in range(b, -1, -1):
                    new[aa][bb] += w * _binom(b, bb) * pb
                    pb *= dy
                pa *= dx
    return new


def common_refinement(mesh_a: TMesh, mesh_b: TMesh) -> TMesh:
    """Tensor mesh over the union of the two meshes' line coordinates."""
    if mesh_a.domain != mesh_b.domain:
        raise MeshError("meshes occupy different domains")
    xs = {mesh_a.domain[0], mesh_a.domain[1]}
    ys = {mesh_a.domain[2], mesh_a.domain[3]}
    for m in (mesh_a, mesh_b):
        xs.update(x for x, _, _ in m.vsegments)
        ys.update(y for y, _, _ in m.hsegments)
    return tensor_mesh(sorted(xs), sorted(ys))


def poly_equal(f: PiecewisePoly, g: PiecewisePoly) -> bool:
    """Exact equality of two piecewise polynomials as functions."""
    if (f.m, f.n) != (g.m, g.n):
        return False
    if f.mesh == g.mesh:
        fine = f.mesh
        fa, ga = f, g
    else:
        fine = common_refinement(f.mesh, g.mesh)
        fa, ga = f.refine_to(fine), g.refine_to(fine)
    for ci in range(len(fine.cells)):
        if fa.grid(ci) != ga.grid(ci):
            return False
    return True


# -- mixed partial derivative and its inverse ---------------------------------


def apply_D(f: PiecewisePoly) -> PiecewisePoly:
    """Per-cell mixed partial derivative d^2/(dx dy)."""
    if f.m < 1 or f.n < 1:
        raise DegreeZero("apply_D needs bi-degree >= (1, 1)")
    out = PiecewisePoly(f.mesh, f.m - 1, f.n - 1, hbc=f.hbc)
    for ci, g in f.coeffs.items():
        out.set_grid(ci, tuple(tuple(g[a + 1][b + 1] * (a + 1) * (b + 1)
                                     for b in range(f.n))
                               for a in range(f.m)))
    return out


def _poly1_antiderivative(coeffs):
    """1D antiderivative coefficients: c_k t^k -> c_k/(k+1) t^(k+1)."""
    return [ZERO] + [c / (k + 1) for k, c in enumerate(coeffs)]


def _poly1_eval(coeffs, t):
    v = ZERO
    for c in reversed(coeffs):
        v = v * t + c
    return v


def apply_I(g: PiecewisePoly) -> PiecewisePoly:
    """Cumulative double integral I(g)(x,y) = iint_{s<=x, t<=y} g.

    Requires g to vanish outside its domain (HBC).  The result is a
    piecewise polynomial of bi-degree (m+1, n+1) over the tensor-product
    refinement of the mesh (the integral's pieces can break on extensions
    of l-edge lines, never elsewhere).
    """
    if not g.hbc:
        raise NoHBC("apply_I needs a function vanishing outside the domain")
    mesh = g.mesh
    xs = sorted({mesh.domain[0], mesh.domain[1]} | {x for x, _, _ in mesh.vsegments})
    ys = sorted({mesh.domain[2], mesh.domain[3]} | {y for y, _, _ in mesh.hsegments})
    fine = tensor_mesh(xs, ys)
    gf = g.refine_to(fine)
    nx, ny = len(xs) - 1, len(ys) - 1
    m1, n1 = g.m + 1, g.n + 1

    def fine_idx(i, j):
        return fine.locate_cell(((xs[i] + xs[i + 1]) / 2, (ys[j] + ys[j + 1]) / 2))

    # corner[i][j] = I(g)(xs[i], ys[j]); column/row strip cumulative pieces.
    corner = [[ZERO] * (ny + 1) for _ in range(nx + 1)]
    cellint = [[ZERO] * ny for _ in range(nx)]
    for i in range(nx):
        for j in range(ny):
            ci = fine_idx(i, j)
            grid = gf.grid(ci)
            cx, cy = cell_center(fine.cells[ci])
            total = ZERO
            for a in range(g.m + 1):
                fx = ((xs[i + 1] - cx) ** (a + 1) - (xs[i] - cx) ** (a + 1)) / (a + 1)
                for b in range(g.n + 1):
                    if grid[a][b] == 0:
                        continue
                    fy = ((ys[j + 1] - cy) ** (b + 1) - (ys[j] - cy) ** (b + 1)) / (b + 1)
                    total += grid[a][b] * fx * fy
            cellint[i][j] = total
    for i in range(nx):
        for j in range(ny):
            corner[i + 1][j + 1] = (corner[i][j + 1] + corner[i + 1][j]
                                    - corner[i][j] + cellint[i][j])

    out = PiecewisePoly(fine, m1, n1, hbc=False)
    for i in range(nx):
        for j in range(ny):
            ci = fine_idx(i, j)
            grid = gf.grid(ci)
            cx, cy = cell_center(fine.cells[ci])
            dx0, dy0 = xs[i] - cx, ys[j] - cy
            res = [[ZERO] * (n1 + 1) for _ in range(m1 + 1)]
            # Local term: F(u,v) - F(u,dy0) - F(dx0,v) + F(dx0,dy0) with
            # F the double antiderivative of the cell polynomial and
            # u = x - cx, v = y - cy.
            for a in range(g.m + 1):
                for b in range(g.n + 1):
                    w = grid[a][b]
                    if w == 0:
                        continue
                    w = w / ((a + 1) * (b + 1))
                    res[a + 1][b + 1] += w
                    res[a + 1][0] -= w * dy0 ** (b + 1)
                    res[0][b + 1] -= w * dx0 ** (a + 1)
                    res[0][0] += w * dx0 ** (a + 1) * dy0 ** (b + 1)
            # Column strip: integral over [xs[i], x] of g below ys[j].
            anti = _poly1_antiderivative(_strip_poly_x(gf, fine, xs, ys, i, j, cx))
            for a, v in enumerate(anti):
                res[a][0] += v
            res[0][0] -= _poly1_eval(anti, dx0)
            # Row strip: integral over [ys[j], y] of g left of xs[i].
            anti = _poly1_antiderivative(_strip_poly_y(gf, fine, xs, ys, i, j, cy))
            for b, v in enumerate(anti):
                res[0][b] += v
            res[0][0] -= _poly1_eval(anti, dy0)
            res[0][0] += corner[i][j]
            out.set_grid(ci, res)
    return out


def _strip_poly_x(gf, fine, xs, ys, i, j, cx):
    """Coefficients in (x - cx) of t -> integral_{-inf}^{ys[j]} g(x, t) dt
    for x inside column strip i (a polynomial of degree m there)."""
    m, n = gf.m, gf.n
    acc = [ZERO] * (m + 1)
    for jj in range(j):
        ci = fine.locate_cell(((xs[i] + xs[i + 1]) / 2, (ys[jj] + ys[jj + 1]) / 2))
        grid = gf.grid(ci)
        ccx, ccy = cell_center(fine.cells[ci])
        for a in range(m + 1):
            coef = ZERO
            for b in range(n + 1):
                if grid[a][b] == 0:
                    continue
                coef += grid[a][b] * ((ys[jj + 1] - ccy) ** (b + 1)
                                      - (ys[jj] - ccy) ** (b + 1)) / (b + 1)
            if coef == 0:
                continue
            # shift from center ccx to cx (same strip, so ccx == cx)
            acc[a] += coef
    return acc


def _strip_poly_y(gf, fine, xs, ys, i, j, cy):
    m, n = gf.m, gf.n
    acc = [ZERO] * (n + 1)
    for ii in range(i):
        ci = fine.locate_cell(((xs[ii] + xs[ii + 1]) / 2, (ys[j] + ys[j + 1]) / 2))
        grid = gf.grid(ci)
        ccx, ccy = cell_center(fine.cells[ci])
        for b in range(n + 1):
            coef = ZERO
            for a in range(m + 1):
                if grid[a][b] == 0:
                    continue
                coef += grid[a][b] * ((xs[ii + 1] - ccx) ** (a + 1)
                                      - (xs[ii] - ccx) ** (a + 1)) / (a + 1)
            if coef == 0:
                continue
            acc[b] += coef  # ccy == cy within the row strip
    return acc


# -- exact line integrals ------------------------------------------------------


def integral_on_hline(f: PiecewisePoly, y, x0, x1, side):
    """integral_{x0}^{x1} f(s, y +- 0) ds, one-sided limit chosen by side.

    side=+1 evaluates in the cells above the line, side=-1 below.  Exact.
    """
    if x1 <= x0:
        return ZERO
    return _piecewise_h(f, y, x0, x1, side, lambda ci: f.grid(ci), f.m, f.n)


def integral_dy_on_hline(f: PiecewisePoly, y, x0, x1, side):
    """integral_{x0}^{x1} (df/dy)(s, y +- 0) ds, exact."""
    if x1 <= x0:
        return ZERO
    return _piecewise_h(f, y, x0, x1, side, lambda ci: f.dy_in_cell(ci), f.m, f.n - 1)


def _piecewise_h(f, y, x0, x1, side, grid_of, dm, dn):
    mesh = f.mesh
    xs, _, _ = mesh._grid
    cuts = [x0] + [x for x in xs if x0 < x < x1] + [x1]
    total = ZERO
    for a, b in zip(cuts, cuts[1:]):
        ci = mesh.locate_cell(((a + b) / 2, y), 1, side)
        if ci is None:
            continue
        grid = grid_of(ci)
        if not any(v != 0 for row in grid for v in row):
            continue
        cx, cy = cell_center(mesh.cells[ci])
        dyv = y - cy
        total += _integrate_poly_x(grid, dm, dn, dyv, a - cx, b - cx)
    return total


def integral_on_vline(f: PiecewisePoly, x, y0, y1, side):
    if y1 <= y0:
        return ZERO
    return _piecewise_v(f, x, y0, y1, side, lambda ci: f.grid(ci), f.m, f.n)


def integral_dx_on_vline(f: PiecewisePoly, x, y0, y1, side):
    if y1 <= y0:
        return ZERO
    return _piecewise_v(f, x, y0, y1, side, lambda ci: f.dx_in_cell(ci), f.m - 1, f.n)


def _piecewise_v(f, x, y0, y1, side, grid_of, dm, dn):
    mesh = f.mesh
    _, ys, _ = mesh._grid
    cuts = [y0] + [y for y in ys if y0 < y < y1] + [y1]
    total = ZERO
    for a, b in zip(cuts, cuts[1:]):
        ci = mesh.locate_cell((x, (a + b) / 2), side, 1)
        if ci is None:
            continue
        grid = grid_of(ci)
        if not any(v != 0 for row in grid for v in row):
            continue
        cx, cy = cell_center(mesh.cells[ci])
        dxv = x - cx
        total += _integrate_poly_y(grid, dm, dn, dxv, a - cy, b - cy)
    return total


def _integrate_poly_x(grid, dm, dn, dy, u0, u1):
    """integral over u in [u0, u1] of sum grid[a][b] u^a dy^b."""
    total = ZERO
    for a in range(dm + 1):
        fa = (u1 ** (a + 1) - u0 ** (a + 1)) / (a + 1)
        pb = ONE
        row = ZERO
        for b in range(dn + 1):
            v = grid[a][b]
            if v != 0:
                row += v * pb
            pb *= dy
        total += row * fa
    return total


def _integrate_poly_y(grid, dm, dn, dx, v0, v1):
    total = ZERO
    pa = ONE
    for a in range(dm + 1):
        row = ZERO
        for b in range(dn + 1):
            v = grid[a][b]
            if v != 0:
                row += v * ((v1 ** (b + 1) - v0 ** (b + 1)) / (b + 1))
        total += row * pa
        pa *= dx
    return total


def constant_one(mesh: TMesh, m=0, n=0) -> PiecewisePoly:
    """The constant-1 function represented at bi-degree (m, n)."""
    f = PiecewisePoly(mesh, m, n)
    for ci in range(len(mesh.cells)):
        g = [[ZERO] * (n + 1) for _ in range(m + 1)]
        g[0][0] = ONE
        f.set_grid(ci, g)
    return f
