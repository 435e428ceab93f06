"""Brute-force exact dimension oracle for spline spaces over T-meshes.

The space S(m,n,alpha,beta) (optionally with homogeneous boundary
conditions) is realized as the nullspace of a sparse rational constraint
matrix over the per-cell polynomial coefficients: for every interior minimal
segment the traces of the transverse derivatives up to the smoothness order
must match between the two adjacent cells, and under HBC the same traces
must vanish along boundary segments.  Two polynomials of degree n agreeing
on a positive-length segment are identical, so coefficient matching of the
full trace polynomial is exact and sufficient even across T-junction
segments.

The dimension is unknowns minus exact rank.  This module is the ground
truth the formulas and embedding systems are verified against.
"""

from __future__ import annotations

from dataclasses import dataclass

from .rational import rat, ZERO, ONE
from .mesh import TMesh, MeshError
from .linalg import RationalMatrix
from .piecewise import PiecewisePoly, cell_center, _binom, _falling


MAX_UNKNOWNS = 20000


class InvalidSpec(MeshError):
    """Inconsistent degree/smoothness parameters."""


class TooLarge(MeshError):
    """The constraint system exceeds the desk-scale unknown guard."""


@dataclass(frozen=True)
class SpaceSpec:
    """Bi-degree (m, n), smoothness (alpha, beta), and the HBC flag."""

    m: int
    n: int
    alpha: int
    beta: int
    hbc: bool = False

    def __post_init__(self):
        if self.m < 0 or self.n < 0:
            raise InvalidSpec("degrees must be >= 0")
        if self.alpha < -1 or self.alpha > self.m - 1:
            raise InvalidSpec(f"alpha={self.alpha} out of range for m={self.m}")
        if self.beta < -1 or self.beta > self.n - 1:
            raise InvalidSpec(f"beta={self.beta} out of range for n={self.n}")

    def bar_name(self) -> str:
        bar = "S̄" if self.hbc else "S"
        return f"{bar}({self.m},{self.n},{self.alpha},{self.beta})"


class SplineSystem:
    """Assembled constraint system for one (mesh, space) pair."""

    def __init__(self, mesh: TMesh, spec: SpaceSpec, matrix: RationalMatrix, basis: str):
        self.mesh = mesh
        self.spec = spec
        self.matrix = matrix
        self.basis = basis
        self.unknowns = matrix.ncols

    def dimension(self) -> int:
        return self.unknowns - self.matrix.rank()

    def unknown_index(self, ci: int, a: int, b: int) -> int:
        return ci * (self.spec.m + 1) * (self.spec.n + 1) + a * (self.spec.n + 1) + b


def _check_size(mesh: TMesh, spec: SpaceSpec) -> int:
    unknowns = len(mesh.cells) * (spec.m + 1) * (spec.n + 1)
    if unknowns > MAX_UNKNOWNS:
        raise TooLarge(f"{unknowns} unknowns exceed the {MAX_UNKNOWNS} guard")
    return unknowns


def _segments_with_sides(mesh: TMesh):
    """(vertical segs, horizontal segs) with adjacent cell indices."""
    bottom, top, left, right = mesh._cells_by_side
    vsegs = []
    for x, y0, y1 in mesh.vsegments:
        cl = mesh._find_side_cell(right, x, y0, y1)
        cr = mesh._find_side_cell(left, x, y0, y1)
        vsegs.append((x, y0, y1, cl, cr))
    hsegs = []
    for y, x0, x1 in mesh.hsegments:
        cb = mesh._find_side_cell(top, y, x0, x1)
        ct = mesh._find_side_cell(bottom, y, x0, x1)
        hsegs.append((y, x0, x1, cb, ct))
    return vsegs, hsegs


def _monomial_trace_x(spec, cell, xe, k):
    """Trace of d^k/dx^k at x=xe in powers of y.

    Returns coeff[(a, b)][j]: contribution of unknown (a, b) to the y^j
    coefficient, as two factor tables (xfac[a], ymat[b][j]).
    """
    m, n = spec.m, spec.n
    cx, cy = cell_center(cell)
    dx = xe - cx
    xfac = [ZERO] * (m + 1)
    for a in range(k, m + 1):
        xfac[a] = rat(_falling(a, k)) * dx ** (a - k)
    ymat = [[ZERO] * (n + 1) for _ in range(n + 1)]
    for b in range(n + 1):
        for j in range(b + 1):
            ymat[b][j] = rat(_binom(b, j)) * (-cy) ** (b - j)
    return xfac, ymat


def _monomial_trace_y(spec, cell, ye, k):
    m, n = spec.m, spec.n
    cx, cy = cell_center(cell)
    dy = ye - cy
    yfac = [ZERO] * (n + 1)
    for b in range(k, n + 1):
        yfac[b] = rat(_falling(b, k)) * dy ** (b - k)
    xmat = [[ZERO] * (m + 1) for _ in range(m + 1)]
    for a in range(m + 1):
        for i in range(a + 1):
            xmat[a][i] = rat(_binom(a, i)) * (-cx) ** (a - i)
    return yfac, xmat


def _bernstein_1d_in_powers(lo, hi, deg):
    """pows[b][j]: y^j coefficient of B_b^deg((y - lo)/(hi - lo))."""
    w = hi - lo
    pows = [None] * (deg + 1)
    for b in range(deg + 1):
        # binom(deg,b) * u^b (1-u)^(deg-b), u = (y - lo)/w
        # u in powers of y: (y - lo)/w
        u = [-lo / w, ONE / w]
        one_minus_u = [ONE + lo / w, -ONE / w]
        poly = [rat(_binom(deg, b))]
        for _ in range(b):
            poly = _poly_mul(poly, u)
        for _ in range(deg - b):
            poly = _poly_mul(poly, one_minus_u)
        poly += [ZERO] * (deg + 1 - len(poly))
        pows[b] = poly
    return pows


def _poly_mul(p, q):
    out = [ZERO] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            if b != 0:
                out[i + j] += a * b
    return out


def _bernstein_trace_x(spec, cell, xe, k):
    """Bernstein-basis analogue of _monomial_trace_x.

    Returns (xtab, ymat) where xtab[a] multiplies unknown column a and ymat
    maps the b index to y-power coefficients.
    """
    m, n = spec.m, spec.n
    x0, x1, y0, y1 = cell
    w = x1 - x0
    xtab = [ZERO] * (m + 1)
    scale = rat(_falling(m, k)) / w ** k
    if xe == x0:
        for t in range(k + 1):
            xtab[t] += scale * (-1) ** (k - t) * _binom(k, t)
    elif xe == x1:
        for t in range(k + 1):
            xtab[m - k + t] += scale * (-1) ** (k - t) * _binom(k, t)
    else:  # pragma: no cover - segments lie on cell sides
        raise MeshError("trace not on a cell side")
    ymat = _bernstein_1d_in_powers(y0, y1, n)
    return xtab, ymat


def _bernstein_trace_y(spec, cell, ye, k):
    m, n = spec.m, spec.n
    x0, x1, y0, y1 = cell
    h = y1 - y0
    ytab = [ZERO] * (n + 1)
    scale = rat(_falling(n, k)) / h ** k
    if ye == y0:
        for t in range(k + 1):
            ytab[t] += scale * (-1) ** (k - t) * _binom(k, t)
    elif ye == y1:
        for t in range(k + 1):
            ytab[n - k + t] += scale * (-1) ** (k - t) * _binom(k, t)
    else:  # pragma: no cover
        raise MeshError("trace not on a cell side")
    xmat = _bernstein_1d_in_powers(x0, x1, m)
    return ytab, xmat


def assemble_system(mesh: TMesh, spec: SpaceSpec, basis: str = "monomial") -> SplineSystem:
    """Assemble the smoothness (+ HBC) constraint matrix.

    Row order is deterministic: interior vertical segments, interior
    horizontal segments, then (under HBC) boundary vertical and horizontal
    segments; within a segment, derivative order k then trace power j.
    """
    if basis not in ("monomial", "bernstein"):
        raise InvalidSpec(f"unknown basis {basis!r}")
    unknowns = _check_size(mesh, spec)
    m, n, alpha, beta = spec.m, spec.n, spec.alpha, spec.beta
    stride = (m + 1) * (n + 1)
    mat = RationalMatrix(unknowns)
    vsegs, hsegs = _segments_with_sides(mesh)
    trace_x = _monomial_trace_x if basis == "monomial" else _bernstein_trace_x
    trace_y = _monomial_trace_y if basis == "monomial" else _bernstein_trace_y

    def add_x_rows(xe, cells_and_signs):
        for k in range(alpha + 1):
            parts = []
            for ci, sign in cells_and_signs:
                xfac, ymat = trace_x(spec, mesh.cells[ci], xe, k)
                parts.append((ci, sign, xfac, ymat))
            for j in range(n + 1):
                row = {}
                for ci, sign, xfac, ymat in parts:
                    base = ci * stride
                    for a in range(m + 1):
                        xa = xfac[a]
                        if xa == 0:
                            continue
                        for b in range(n + 1):
                            v = ymat[b][j]
                            if v == 0:
                                continue
                            col = base + a * (n + 1) + b
                            row[col] = row.get(col, ZERO) + sign * xa * v
                mat.add_row(row)

    def add_y_rows(ye, cells_and_signs):
        for k in range(beta + 1):
            parts = []
            for ci, sign in cells_and_signs:
                yfac, xmat = trace_y(spec, mesh.cells[ci], ye, k)
                parts.append((ci, sign, yfac, xmat))
            for i in range(m + 1):
                row = {}
                for ci, sign, yfac, xmat in parts:
                    base = ci * stride
                    for b in range(n + 1):
                        yb = yfac[b]
                        if yb == 0:
                            continue
                        for a in range(m + 1):
                            v = xmat[a][i]
                            if v == 0:
                                continue
                            col = base + a * (n + 1) + b
                            row[col] = row.get(col, ZERO) + sign * yb * v
                mat.add_row(row)

    boundary_v, boundary_h = [], []
    for x, y0, y1, cl, cr in vsegs:
        if cl is not None and cr is not None:
            add_x_rows(x, [(cl, ONE), (cr, -ONE)])
        else:
            boundary_v.append((x, cl if cl is not None else cr))
    for y, x0, x1, cb, ct in hsegs:
        if cb is not None and ct is not None:
            add_y_rows(y, [(cb, ONE), (ct, -ONE)])
        else:
            boundary_h.append((y, cb if cb is not None else ct))
    if spec.hbc:
        for x, ci in boundary_v:
            add_x_rows(x, [(ci, ONE)])
        for y, ci in boundary_h:
            add_y_rows(y, [(ci, ONE)])
    return SplineSystem(mesh, spec, mat, basis)


def dim_oracle(mesh: TMesh, spec: SpaceSpec, basis: str = "monomial") -> int:
    """Exact dimension of the spline space via nullity of the system."""
    return assemble_system(mesh, spec, basis).dimension()


def nullspace_basis(system: SplineSystem):
    """Exact rational basis of the solution space as PiecewisePoly values."""
    if system.basis != "monomial":
        raise InvalidSpec("nullspace_basis expects the monomial assembly")
    vecs = system.matrix.nullspace()
    m, n = system.spec.m, system.spec.n
    stride = (m + 1) * (n + 1)
    out = []
    for vec in vecs:
        f = PiecewisePoly(system.mesh, m, n, hbc=system.spec.hbc)
        for ci in range(len(system.mesh.cells)):
            base = ci * stride
            grid = [[vec[base + a * (n + 1) + b] for b in range(n + 1)]
                    for a in range(m + 1)]
            f.set_grid(ci, grid)
        out.append(f)
    return out


def rank(matrix: RationalMatrix) -> int:
    """Exact rank of a rational matrix (deterministic elimination)."""
    return matrix.rank()
