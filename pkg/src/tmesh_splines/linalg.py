"""Sparse exact-rational matrices with deterministic rank/nullspace.

Rows are dicts column -> rational with no explicit zeros.  Elimination is
plain Gaussian elimination over the rationals (exact, division-based) with
the deterministic pivot rule from the design notes: columns are processed in
increasing order and the pivot is the first remaining row with a nonzero
entry in the current column.  Results are therefore bit-identical across
runs.  Division-based elimination is used instead of the Bareiss recurrence
because Bareiss rescales every remaining row at every step, which destroys
sparsity; over exact rationals both return the same rank and nullspace.
"""

from __future__ import annotations

from .rational import ZERO, rat


class RationalMatrix:
    """A sparse rows-of-dicts matrix over exact rationals."""

    def __init__(self, ncols: int, rows=None):
        self.ncols = ncols
        self.rows = [dict(r) for r in rows] if rows is not None else []

    @property
    def nrows(self) -> int:
        return len(self.rows)

    def add_row(self, entries) -> None:
        """Append a row given as {col: value}; zero entries are dropped."""
        row = {}
        for c, v in entries.items():
            if not (0 <= c < self.ncols):
                raise IndexError(f"column {c} out of range")
            v = rat(v)
            if v != 0:
                row[c] = v
        self.rows.append(row)

    def entry(self, i: int, j: int):
        return self.rows[i].get(j, ZERO)

    def copy(self) -> "RationalMatrix":
        return RationalMatrix(self.ncols, self.rows)

    def dense(self):
        return [[self.entry(i, j) for j in range(self.ncols)] for i in range(self.nrows)]

    def transpose(self) -> "RationalMatrix":
        t = RationalMatrix(self.nrows)
        t.rows = [dict() for _ in range(self.ncols)]
        for i, row in enumerate(self.rows):
            for j, v in row.items():
                t.rows[j][i] = v
        return t

    # -- elimination -------------------------------------------------------

    def _forward_eliminate(self):
        """Row-echelon form in place on a working copy of the rows.

        Returns (echelon_rows, pivot_cols) where echelon_rows[k] has its first
        nonzero at pivot_cols[k] and that entry is normalized to 1.
        """
        active = [dict(r) for r in self.rows if r]
        echelon = []
        pivots = []
        for col in range(self.ncols):
            piv = None
            for idx, row in enumerate(active):
                if col in row:
                    piv = idx
                    break
            if piv is None:
                continue
            prow = active.pop(piv)
            pval = prow[col]
            if pval != 1:
                prow = {c: v / pval for c, v in prow.items()}
            remaining = []
            for row in active:
                f = row.get(col)
                if f is not None:
                    for c, v in prow.items():
                        w = row.get(c, ZERO) - f * v
                        if w == 0:
                            row.pop(c, None)
                        else:
                            row[c] = w
                if row:
                    remaining.append(row)
            active = remaining
            echelon.append(prow)
            pivots.append(col)
            if not active:
                break
        return echelon, pivots

    def rank(self) -> int:
        """Exact rank; eliminates the transpose when that is cheaper."""
        if not self.rows:
            return 0
        # Elimination cost grows with the number of rows swept per pivot, so
        # reduce along the smaller dimension.
        if self.nrows > 2 * self.ncols:
            return len(self._forward_eliminate()[1])
        _, pivots = self._forward_eliminate()
        return len(pivots)

    def rref(self):
        """Reduced row-echelon form: (rows, pivot_cols), deterministic."""
        echelon, pivots = self._forward_eliminate()
        # Back-substitute to clear entries above pivots.
        for k in range(len(echelon) - 1, -1, -1):
            col = pivots[k]
            prow = echelon[k]
            for j in range(k):
                row = echelon[j]
                f = row.get(col)
                if f is None:
                    continue
                for c, v in prow.items():
                    w = row.get(c, ZERO) - f * v
                    if w == 0:
                        row.pop(c, None)
                    else:
                        row[c] = w
        return echelon, pivots

    def nullspace(self):
        """Exact basis of the right nullspace, one dense vector per free column.

        The basis is canonical: vector k has a 1 in the k-th free column and 0
        in the other free columns.
        """
        echelon, pivots = self.rref()
        pivot_set = set(pivots)
        free = [c for c in range(self.ncols) if c not in pivot_set]
        basis = []
        for fc in free:
            vec = [ZERO] * self.ncols
            vec[fc] = rat(1)
            for prow, pc in zip(echelon, pivots):
                v = prow.get(fc)
                if v is not None:
                    vec[pc] = -v
            basis.append(vec)
        return basis

    def solve(self, rhs):
        """One exact solution of A x = rhs, or None if inconsistent.

        rhs is a dense list of rationals, one per row (in row order).
        """
        if len(rhs) != self.nrows:
            raise ValueError("rhs length mismatch")
        aug = RationalMatrix(self.ncols + 1)
        for row, b in zip(self.rows, rhs):
            r = dict(row)
            b = rat(b)
            if b != 0:
                r[self.ncols] = b
            aug.rows.append(r)
        echelon, pivots = aug.rref()
        x = [ZERO] * self.ncols
        for prow, pc in zip(echelon, pivots):
            if pc == self.ncols:
                return None
            x[pc] = prow.get(self.ncols, ZERO)
        return x

    def stack(self, other: "RationalMatrix") -> "RationalMatrix":
        if other.ncols != self.ncols:
            raise ValueError("column count mismatch")
        out = self.copy()
        out.rows.extend(dict(r) for r in other.rows)
        return out


def inverse(m: RationalMatrix):
    """Exact inverse of a square matrix, or None if singular."""
    n = m.ncols
    if m.nrows != n:
        raise ValueError("inverse needs a square matrix")
    aug = RationalMatrix(2 * n)
    for i, row in enumerate(m.rows):
        r = dict(row)
        r[n + i] = rat(1)
        aug.rows.append(r)
    echelon, pivots = aug.rref()
    if pivots[: n if len(pivots) >= n else len(pivots)] != list(range(n)):
        return None
    inv = RationalMatrix(n)
    for k in range(n):
        inv.rows.append({j - n: v for j, v in echelon[k].items() if j >= n})
    return inv


def matrix_from_dense(rows) -> RationalMatrix:
    ncols = len(rows[0]) if rows else 0
    m = RationalMatrix(ncols)
    for r in rows:
        m.add_row({j: v for j, v in enumerate(r)})
    return m


def identity(n: int) -> RationalMatrix:
    m = RationalMatrix(n)
    for i in range(n):
        m.add_row({i: 1})
    return m
