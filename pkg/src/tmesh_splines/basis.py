"""Basis constructions for the bilinear C^0 space with HBC.

Two bases are built, both indexed by crossing vertices:

* the cardinal basis (b_i is 1 at its vertex, 0 at the others), which is
  nonnegative, compactly supported, and sums to one over the core region of
  an extended mesh;
* the hierarchical basis built level by level over a hierarchical mesh:
  tensor hats of the base grid, the hat on a subdivided cell for each new
  cross center, and the two-cell hat for each new mid-edge crossing vertex
  (kink lines only through the vertex itself).

The cardinal basis solves the oracle system plus interpolation rows (the
crossing vertices form a determining set, so the interpolation matrix on the
nullspace is invertible); the hierarchical basis is written down directly as
products of one-dimensional tents.
"""

from __future__ import annotations

from dataclasses import dataclass

from .rational import rat, ZERO, ONE
from .mesh import TMesh, MeshError, NoCrossingVertices, extend
from .hierarchy import HMesh, annotate_levels, NotHierarchical
from .oracle import SpaceSpec, assemble_system, nullspace_basis
from .linalg import RationalMatrix, matrix_from_dense, inverse
from .piecewise import PiecewisePoly, cell_center, constant_one


class SingularSystem(MeshError):
    """Interpolation at the crossing vertices failed; internal bug."""


CARDINAL = "cardinal"
HIERARCHICAL = "hierarchical"


@dataclass
class BasisSet:
    functions: tuple
    anchors: tuple
    kind: str

    def __len__(self):
        return len(self.functions)


def evaluate(f: PiecewisePoly, p):
    """Exact value of f at p (0 outside the domain for HBC functions)."""
    return f.evaluate(p)


def cardinal_bilinear_basis(mesh: TMesh) -> BasisSet:
    """For each crossing vertex v_i the unique HBC bilinear spline with
    b_i(v_j) = delta_ij."""
    anchors = mesh.crossing_vertices
    if not anchors:
        raise NoCrossingVertices("cardinal basis needs V+ >= 1")
    null = nullspace_basis(assemble_system(mesh, SpaceSpec(1, 1, 0, 0, hbc=True)))
    if len(null) != len(anchors):
        raise SingularSystem(
            f"nullity {len(null)} != V+ {len(anchors)}; oracle or mesh bug")
    g = matrix_from_dense([[f.evaluate(v) for f in null] for v in anchors])
    ginv = inverse(g)
    if ginv is None:
        raise SingularSystem("interpolation matrix at crossing vertices is singular")
    funcs = []
    for k in range(len(anchors)):
        f = PiecewisePoly(mesh, 1, 1, hbc=True)
        for j, nj in enumerate(null):
            c = ginv.entry(j, k)
            if c != 0:
                f = f.plus(nj.scaled(c))
        f.hbc = True
        funcs.append(f)
    return BasisSet(tuple(funcs), tuple(anchors), CARDINAL)


def _tent(lo, mid, hi):
    """Knot triple of a 1D tent: returns ((a,b) on [lo,mid], (a,b) on [mid,hi])
    with the tent written as a + b*t on each piece."""
    left = (-lo / (mid - lo), ONE / (mid - lo))
    right = (hi / (hi - mid), -ONE / (hi - mid))
    return left, right


def _product_grid(cell, seg_x, seg_y):
    """Coefficient grid of (ax + bx*x)(ay + by*y) about the cell center."""
    ax, bx = seg_x
    ay, by = seg_y
    cx, cy = cell_center(cell)
    fa = ax + bx * cx
    fb = ay + by * cy
    return ((fa * fb, fa * by), (bx * fb, bx * by))


def _fill_tent_product(f: PiecewisePoly, mesh: TMesh, xknots, yknots):
    """Write the tent-product hat with the given 1D knot triples into f."""
    xl, xm, xh = xknots
    yl, ym, yh = yknots
    tx = _tent(xl, xm, xh)
    ty = _tent(yl, ym, yh)
    for ci, cell in enumerate(mesh.cells):
        x0, x1, y0, y1 = cell
        if x0 < xl or x1 > xh or y0 < yl or y1 > yh:
            continue
        sx = tx[0] if x1 <= xm else tx[1]
        sy = ty[0] if y1 <= ym else ty[1]
        if (x0 < xm < x1) or (y0 < ym < y1):
            raise NotHierarchical("cell straddles a hat knot line")
        f.set_grid(ci, _product_grid(cell, sx, sy))


def hierarchical_basis(h: HMesh) -> BasisSet:
    """The level-by-level basis of the bilinear HBC space: one function per
    crossing vertex, anchored at it."""
    if h.extension is not None:
        raise NotHierarchical("hierarchical basis is built on plain hierarchical meshes")
    mesh = h.realized
    ann = annotate_levels(h)
    anchors = sorted(mesh.crossing_vertices,
                     key=lambda v: (max(ann.vertex_level[v]), v[1], v[0]))
    if not anchors:
        raise NoCrossingVertices("hierarchical basis needs V+ >= 1")
    subdivided = h.subdivided_cells()
    funcs = []
    for v in anchors:
        kh, kv = ann.vertex_level[v]
        f = PiecewisePoly(mesh, 1, 1, hbc=True)
        if kh == kv == 0:
            xs, ys = h.base_x, h.base_y
            i, j = xs.index(v[0]), ys.index(v[1])
            _fill_tent_product(f, mesh, (xs[i - 1], xs[i], xs[i + 1]),
                               (ys[j - 1], ys[j], ys[j + 1]))
        elif kh == kv:
            cell = next((c for c in subdivided
                         if c.level == kh - 1 and c.center == v), None)
            if cell is None:
                raise NotHierarchical(f"no inserted cross centered at {v}")
            _fill_tent_product(f, mesh, (cell.x0, v[0], cell.x1),
                               (cell.y0, v[1], cell.y1))
        else:
            k = max(kh, kv)
            if kh > kv:
                # Horizontal arm of level k through v: the two subdivided
                # cells are horizontally adjacent across the edge at x=v[0].
                cells = [c for c in subdivided if c.level == k - 1
                         and c.center[1] == v[1] and (c.x1 == v[0] or c.x0 == v[0])]
            else:
                cells = [c for c in subdivided if c.level == k - 1
                         and c.center[0] == v[0] and (c.y1 == v[1] or c.y0 == v[1])]
            if len(cells) != 2:
                raise NotHierarchical(f"mid-edge vertex {v} lacks its two subdivided cells")
            x0 = min(c.x0 for c in cells)
            x1 = max(c.x1 for c in cells)
            y0 = min(c.y0 for c in cells)
            y1 = max(c.y1 for c in cells)
            _fill_tent_product(f, mesh, (x0, v[0], x1), (y0, v[1], y1))
        funcs.append(f)
    return BasisSet(tuple(funcs), tuple(anchors), HIERARCHICAL)


def linear_independence_check(bs: BasisSet) -> bool:
    """Exact rank check of the stacked coefficient vectors."""
    if not bs.functions:
        return True
    mesh = bs.functions[0].mesh
    count = len(mesh.cells)
    mat = RationalMatrix(4 * count)
    for f in bs.functions:
        mat.add_row({i: v for i, v in enumerate(f.coeff_vector(count)) if v != 0})
    return mat.rank() == len(bs.functions)


def nonnegativity_check(f: PiecewisePoly) -> bool:
    """Bilinear extrema sit at cell corners, so corner checks decide >= 0."""
    for ci in f.coeffs:
        x0, x1, y0, y1 = f.mesh.cells[ci]
        for p in ((x0, y0), (x1, y0), (x0, y1), (x1, y1)):
            if f.eval_in_cell(ci, p[0], p[1]) < 0:
                return False
    return True


def basis_sum(bs: BasisSet) -> PiecewisePoly:
    total = PiecewisePoly(bs.functions[0].mesh, 1, 1, hbc=True)
    for f in bs.functions:
        total = total.plus(f)
    return total


def partition_of_unity_check(mesh0: TMesh, margin=None) -> bool:
    """Extend mesh0 for the bilinear space, build the cardinal basis there,
    and compare the exact coefficient sum with 1 on every cell inside the
    original domain."""
    ext = extend(mesh0, 1, 1, margin)
    bs = cardinal_bilinear_basis(ext)
    total = basis_sum(bs)
    one = constant_one(ext, 1, 1)
    xl, xr, yb, yt = mesh0.domain
    for ci, (x0, x1, y0, y1) in enumerate(ext.cells):
        if xl <= x0 and x1 <= xr and yb <= y0 and y1 <= yt:
            if total.grid(ci) != one.grid(ci):
                return False
    return True
