"""Dimension computation through the mixed-partial-derivative embedding.

The derivative d^2/(dx dy) maps the HBC space of bi-degree (m,n) and
smoothness (m-1,n-1) injectively into the one of bi-degree (m-1,n-1); the
cumulative integral inverts it.  An element g of the image space integrates
back into the source space iff a finite family of integral constraints along
l-edges holds, so

    dim (source space) = dim (image space) - rank (constraint system).

This module assembles those constraint systems exactly, in every form used
by the analysis:

* bilinear target (image space = piecewise constants, one unknown per cell):
  the raw per-l-edge jump form (E+4 rows) and the reduced per-line/span form
  (E+2 rows, defective rank exactly 1 when V+ > 0);
* biquadratic target (image space = bilinear HBC splines, unknowns are
  coefficients in a chosen basis): the raw derivative-jump form per interior
  l-edge (E rows), the three-line collinearity form using nearest line
  coordinates, and the support-l-edge form using the level structure;
* the ordered constraint matrix of a crossing-vertex-connected hierarchical
  mesh: one row deleted, rows sorted by (level, branch, distance), columns
  permuted so the characteristic-vertex coefficients sit on the diagonal;
  the matrix is then checked to vanish below the diagonal with a nonzero
  diagonal, which pins the rank at E-1.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .rational import rat, ZERO, ONE
from .mesh import TMesh, LEdge, MeshError, NoCrossingVertices
from .hierarchy import (
    HMesh, annotate_levels, branch_decomposition, support_ledges,
    BranchDecomposition, NotCvc, NotHierarchical,
)
from .oracle import SpaceSpec, assemble_system, nullspace_basis
from .linalg import RationalMatrix
from .piecewise import (
    PiecewisePoly, apply_D, apply_I,
    integral_on_hline, integral_on_vline,
    integral_dy_on_hline, integral_dx_on_vline,
)
from .basis import BasisSet, hierarchical_basis, cardinal_bilinear_basis


class TriangularityViolated(MeshError):
    """The ordered matrix has a bad entry; ordering/tie-break bug."""


@dataclass
class EmbeddingConstraints:
    """A constraint system over the image space of the derivative operator."""

    target: str
    matrix: RationalMatrix
    labels: list  # one (kind, ledge-or-line) per row
    basis_kind: str

    @property
    def nrows(self):
        return self.matrix.nrows

    def rank(self) -> int:
        return self.matrix.rank()

    def defective_rank(self) -> int:
        return self.nrows - self.rank()


# -- bilinear target: unknowns are the per-cell constants ----------------------


def _cells_on_hline(mesh: TMesh, y, lo, hi, side):
    """(cell, overlap length) pairs along y over [lo, hi] on one side."""
    out = []
    for ci, (x0, x1, y0, y1) in enumerate(mesh.cells):
        if side > 0 and y0 != y:
            continue
        if side < 0 and y1 != y:
            continue
        a, b = max(x0, lo), min(x1, hi)
        if a < b:
            out.append((ci, b - a))
    return out


def _cells_on_vline(mesh: TMesh, x, lo, hi, side):
    out = []
    for ci, (x0, x1, y0, y1) in enumerate(mesh.cells):
        if side > 0 and x0 != x:
            continue
        if side < 0 and x1 != x:
            continue
        a, b = max(y0, lo), min(y1, hi)
        if a < b:
            out.append((ci, b - a))
    return out


def _jump_row_cells(mesh: TMesh, ledge: LEdge):
    """Row of  integral_l g(minus side) - integral_l g(plus side)  over cells."""
    row = {}
    if ledge.orientation == "h":
        parts = (_cells_on_hline(mesh, ledge.coord, ledge.lo, ledge.hi, -1),
                 _cells_on_hline(mesh, ledge.coord, ledge.lo, ledge.hi, +1))
    else:
        parts = (_cells_on_vline(mesh, ledge.coord, ledge.lo, ledge.hi, -1),
                 _cells_on_vline(mesh, ledge.coord, ledge.lo, ledge.hi, +1))
    for sign, cells in zip((ONE, -ONE), parts):
        for ci, length in cells:
            row[ci] = row.get(ci, ZERO) + sign * length
    return row


def bilinear_constraints_raw(mesh: TMesh) -> EmbeddingConstraints:
    """The per-l-edge jump form: E+4 rows (boundary l-edges included)."""
    mat = RationalMatrix(len(mesh.cells))
    labels = []
    for l in mesh.all_ledges():
        mat.add_row(_jump_row_cells(mesh, l))
        labels.append(("jump", l))
    return EmbeddingConstraints("bilinear-HBC", mat, labels, "cell-constants")


def bilinear_constraints(mesh: TMesh) -> EmbeddingConstraints:
    """The reduced form: per tensor-line jump rows for all but the last
    l-edge on each line plus one full-width span integral per strip of the
    associated tensor mesh; E+2 rows in total."""
    xl, xr, yb, yt = mesh.domain
    mat = RationalMatrix(len(mesh.cells))
    labels = []
    for orient in ("h", "v"):
        ledges = [l for l in mesh.all_ledges() if l.orientation == orient]
        by_line = {}
        for l in ledges:
            by_line.setdefault(l.coord, []).append(l)
        coords = sorted(by_line)
        for c in coords:
            group = sorted(by_line[c], key=lambda l: l.lo)
            for l in group[:-1]:
                mat.add_row(_jump_row_cells(mesh, l))
                labels.append(("jump", l))
        for c0, c1 in zip(coords, coords[1:]):
            mid = (c0 + c1) / 2
            row = {}
            if orient == "h":
                for ci, (x0, x1, y0, y1) in enumerate(mesh.cells):
                    if y0 < mid < y1:
                        row[ci] = x1 - x0
            else:
                for ci, (x0, x1, y0, y1) in enumerate(mesh.cells):
                    if x0 < mid < x1:
                        row[ci] = y1 - y0
            mat.add_row(row)
            labels.append(("span", (orient, c0, c1)))
    expected = len(mesh.ledges) + 2
    assert mat.nrows == expected, f"{mat.nrows} rows != E+2 = {expected}"
    return EmbeddingConstraints("bilinear-HBC", mat, labels, "cell-constants")


# -- biquadratic target: unknowns are coefficients in a bilinear HBC basis -----


def _line_integral(f: PiecewisePoly, ledge_like, coord=None):
    """integral of f along a horizontal/vertical stretch inside the domain."""
    orient, c, lo, hi = ledge_like
    mesh = f.mesh
    if orient == "h":
        side = -1 if c == mesh.domain[3] else 1
        return integral_on_hline(f, c, lo, hi, side)
    side = -1 if c == mesh.domain[1] else 1
    return integral_on_vline(f, c, lo, hi, side)


def _djump_functional(f: PiecewisePoly, ledge: LEdge):
    """integral_l of the transverse-derivative jump of f across the l-edge."""
    if ledge.orientation == "h":
        below = integral_dy_on_hline(f, ledge.coord, ledge.lo, ledge.hi, -1)
        above = integral_dy_on_hline(f, ledge.coord, ledge.lo, ledge.hi, +1)
    else:
        below = integral_dx_on_vline(f, ledge.coord, ledge.lo, ledge.hi, -1)
        above = integral_dx_on_vline(f, ledge.coord, ledge.lo, ledge.hi, +1)
    return below - above


def bilinear_hbc_basis_functions(mesh: TMesh):
    """Default expansion basis: the oracle nullspace of the bilinear space."""
    return nullspace_basis(assemble_system(mesh, SpaceSpec(1, 1, 0, 0, hbc=True)))


def _funcs_of(mesh, funcs):
    if funcs is None:
        return bilinear_hbc_basis_functions(mesh)
    if isinstance(funcs, BasisSet):
        return list(funcs.functions)
    return list(funcs)


def raw_biquadratic_constraints(mesh: TMesh, funcs=None,
                                include_boundary=False) -> EmbeddingConstraints:
    """Derivative-jump rows per interior l-edge (E rows), expressed over any
    basis of the bilinear HBC space (default: oracle nullspace).  With
    include_boundary the four boundary rows are kept (E+4 rows)."""
    funcs = _funcs_of(mesh, funcs)
    ledges = mesh.all_ledges() if include_boundary else mesh.ledges
    mat = RationalMatrix(len(funcs))
    labels = []
    for l in ledges:
        mat.add_row({j: _djump_functional(f, l) for j, f in enumerate(funcs)})
        labels.append(("djump", l))
    return EmbeddingConstraints("biquadratic-HBC", mat, labels,
                                "bilinear-HBC-basis")


def collinear_constraints(mesh_or_h, funcs=None) -> EmbeddingConstraints:
    """Three-line collinearity rows per interior l-edge, using the nearest
    distinct line coordinates of the associated tensor mesh (boundary
    included); row-by-row proportional to the derivative-jump rows."""
    mesh = mesh_or_h.realized if isinstance(mesh_or_h, HMesh) else mesh_or_h
    funcs = _funcs_of(mesh, funcs)
    xl, xr, yb, yt = mesh.domain
    hcoords = sorted({yb, yt} | {l.coord for l in mesh.ledges if l.orientation == "h"})
    vcoords = sorted({xl, xr} | {l.coord for l in mesh.ledges if l.orientation == "v"})
    mat = RationalMatrix(len(funcs))
    labels = []
    for l in mesh.ledges:
        coords = hcoords if l.orientation == "h" else vcoords
        i = coords.index(l.coord)
        prev_c, next_c = coords[i - 1], coords[i + 1]
        row = {}
        for j, f in enumerate(funcs):
            mid = _line_integral(f, (l.orientation, l.coord, l.lo, l.hi))
            lo_i = _line_integral(f, (l.orientation, prev_c, l.lo, l.hi))
            hi_i = _line_integral(f, (l.orientation, next_c, l.lo, l.hi))
            row[j] = ((next_c - prev_c) * mid
                      - (next_c - l.coord) * lo_i
                      - (l.coord - prev_c) * hi_i)
        mat.add_row(row)
        labels.append(("collinear", l))
    return EmbeddingConstraints("biquadratic-HBC", mat, labels,
                                "bilinear-HBC-basis")


def support_constraint_row(h: HMesh, ledge: LEdge, funcs):
    """One support-l-edge collinearity row for an interior l-edge."""
    lo_sup, hi_sup = support_ledges(h, ledge)
    lo_c, hi_c = lo_sup.coord, hi_sup.coord
    row = {}
    for j, f in enumerate(funcs):
        mid = _line_integral(f, (ledge.orientation, ledge.coord, ledge.lo, ledge.hi))
        lo_i = _line_integral(f, (ledge.orientation, lo_c, ledge.lo, ledge.hi))
        hi_i = _line_integral(f, (ledge.orientation, hi_c, ledge.lo, ledge.hi))
        v = ((hi_c - lo_c) * mid
             - (hi_c - ledge.coord) * lo_i
             - (ledge.coord - lo_c) * hi_i)
        if v != 0:
            row[j] = v
    return row


def biquadratic_constraints(h, funcs=None) -> EmbeddingConstraints:
    """Support-l-edge form: one row per interior l-edge, the three integrals
    taken along the l-edge and its two support l-edges.  For hierarchical
    meshes the rows obey the level-structure sparsity; for an all-level-0
    mesh the form coincides with the collinearity form."""
    if not isinstance(h, HMesh):
        # No hierarchy: every l-edge has level 0 and the support lines are
        # the nearest line coordinates, i.e. the collinearity form.
        return collinear_constraints(h, funcs)
    mesh = h.realized
    funcs = _funcs_of(mesh, funcs)
    mat = RationalMatrix(len(funcs))
    labels = []
    for l in mesh.ledges:
        mat.add_row(support_constraint_row(h, l, funcs))
        labels.append(("support", l))
    return EmbeddingConstraints("biquadratic-HBC", mat, labels,
                                "bilinear-HBC-basis")


# -- ordered constraint matrix -------------------------------------------------


@dataclass
class OrderingReport:
    ledges: list  # constraints in order (without the deleted one)
    deleted: LEdge
    char_vertices: list
    column_anchors: list  # anchor of each matrix column
    branch_counts: dict
    T: int
    diag: list = field(default_factory=list)

    def summary(self):
        return {
            "T": self.T,
            "deleted": str(self.deleted),
            "branches_per_level": self.branch_counts,
        }


def ordered_constraint_matrix(h: HMesh, bs: BasisSet = None):
    """The ordered/permuted constraint matrix of a crossing-vertex-connected
    hierarchical mesh, with the triangularity verification.

    Level-0 rows use the transformed pure-integral form (the exact row form
    in which level-0 constraints touch only on-l-edge coefficients); higher
    rows use the support-l-edge form.  The deleted row is the one of the
    level-0 entering l-edge.  Raises TriangularityViolated if any entry
    below the diagonal is nonzero or a diagonal entry vanishes.
    """
    mesh = h.realized
    if not mesh.crossing_vertices:
        raise NoCrossingVertices("ordered matrix needs V+ > 0")
    bd = branch_decomposition(h)
    if bs is None:
        bs = hierarchical_basis(h)
    funcs = list(bs.functions)
    anchors = list(bs.anchors)
    ann = bd.annotation

    level0_branch = next(b for b in bd.branches if b.level == 0)
    deleted = level0_branch.entering
    ordered = [l for l in bd.ordered_ledges() if l != deleted]
    T = len(ordered)
    assert T == len(mesh.ledges) - 1

    char = [bd.branch_of[l].char_vertex[l] for l in ordered]
    if len(set(char)) != T:
        raise TriangularityViolated("characteristic vertices are not distinct")
    col_anchors = char + sorted((a for a in anchors if a not in set(char)),
                                key=lambda v: (v[1], v[0]))
    col_of = {a: i for i, a in enumerate(col_anchors)}
    perm = [anchors.index(a) for a in col_anchors]

    mat = RationalMatrix(len(funcs))
    for l in ordered:
        if ann.ledge_level[l] == 0:
            vals = [_line_integral(f, (l.orientation, l.coord, l.lo, l.hi))
                    for f in funcs]
        else:
            raw = support_constraint_row(h, l, funcs)
            vals = [raw.get(j, ZERO) for j in range(len(funcs))]
        mat.add_row({c: vals[perm[c]] for c in range(len(funcs)) if vals[perm[c]] != 0})

    diag = []
    for i in range(T):
        row = mat.rows[i]
        for j in range(i):
            if row.get(j, ZERO) != 0:
                raise TriangularityViolated(
                    f"row {i} ({ordered[i]}) has a nonzero entry at earlier "
                    f"characteristic vertex {col_anchors[j]}")
        d = row.get(i, ZERO)
        if d == 0:
            raise TriangularityViolated(
                f"row {i} ({ordered[i]}) has zero diagonal at {col_anchors[i]}")
        diag.append(d)

    report = OrderingReport(
        ledges=ordered, deleted=deleted, char_vertices=char,
        column_anchors=col_anchors, branch_counts=bd.branch_counts(),
        T=T, diag=diag,
    )
    return mat, report


# -- structural sparsity checks (level-structure propositions) ------------------


def row_sparsity_violations(h: HMesh, bs: BasisSet = None):
    """Check the support-form rows against the level-structure sparsity:

    * a level-0 row (in transformed integral form) touches only coefficients
      of crossing vertices on its l-edge;
    * a level-k>0 horizontal row touches only on-l-edge coefficients plus
      coefficients of vertices with horizontal level < k and vertical level
      > k (symmetrically for vertical rows).

    Returns a list of (ledge, anchor) violations (empty when all hold).
    """
    mesh = h.realized
    if bs is None:
        bs = hierarchical_basis(h)
    ann = annotate_levels(h)
    funcs = list(bs.functions)
    anchors = list(bs.anchors)
    bad = []
    for l in mesh.ledges:
        k = ann.ledge_level[l]
        if k == 0:
            vals = [_line_integral(f, (l.orientation, l.coord, l.lo, l.hi))
                    for f in funcs]
        else:
            raw = support_constraint_row(h, l, funcs)
            vals = [raw.get(j, ZERO) for j in range(len(funcs))]
        for a, v in zip(anchors, vals):
            if v == 0:
                continue
            if l.contains_point(a):
                continue
            if k == 0:
                bad.append((l, a))
                continue
            kh, kv = ann.vertex_level[a]
            if l.orientation == "h":
                ok = kh < k < kv
            else:
                ok = kv < k < kh
            if not ok:
                bad.append((l, a))
    return bad


def case1a_zero_coefficients(h: HMesh, bs: BasisSet = None):
    """For every level-k>0 row and every basis function whose anchor has
    same-side level < k and transverse level <= k, the support-form
    coefficient cancels exactly (the collinearity cancellation).  Returns
    the list of violations."""
    mesh = h.realized
    if bs is None:
        bs = hierarchical_basis(h)
    ann = annotate_levels(h)
    funcs = list(bs.functions)
    anchors = list(bs.anchors)
    bad = []
    for l in mesh.ledges:
        k = ann.ledge_level[l]
        if k == 0:
            continue
        raw = support_constraint_row(h, l, funcs)
        for j, a in enumerate(anchors):
            kh, kv = ann.vertex_level[a]
            if l.orientation == "h":
                case1a = kh < k and kv <= k
            else:
                case1a = kv < k and kh <= k
            if case1a and raw.get(j, ZERO) != 0:
                bad.append((l, a))
    return bad
