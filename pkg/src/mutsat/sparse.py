"""Deterministic exact sparse linear algebra.

Matrices are row-dicts of column-dicts holding nonzero field scalars
(rationals or rational functions; the code never looks inside).  All
elimination uses one fixed pivot rule -- lowest column index first,
then lowest row index -- so repeated runs generate identical bases.
"""

from __future__ import annotations


class SingularMatrixError(ValueError):
    """A matrix required to be invertible is singular."""


class SparseMatrix:
    __slots__ = ("rows", "cols", "rowdata")

    def __init__(self, rows: int, cols: int, rowdata=None):
        self.rows = rows
        self.cols = cols
        self.rowdata = rowdata if rowdata is not None else {}

    @staticmethod
    def from_entries(rows, cols, entries):
        """entries: iterable of (r, c, value); zeros are dropped."""
        rd = {}
        for r, c, v in entries:
            if v == 0:
                continue
            if not (0 <= r < rows and 0 <= c < cols):
                raise IndexError("entry (%d, %d) out of range" % (r, c))
            rd.setdefault(r, {})[c] = v
        return SparseMatrix(rows, cols, rd)

    @staticmethod
    def from_dense(rows_list):
        rows = len(rows_list)
        cols = len(rows_list[0]) if rows else 0
        return SparseMatrix.from_entries(
            rows, cols,
            ((r, c, v) for r, row in enumerate(rows_list) for c, v in enumerate(row)),
        )

    @staticmethod
    def identity(n, one):
        return SparseMatrix(n, n, {i: {i: one} for i in range(n)})

    @staticmethod
    def diagonal(values):
        n = len(values)
        return SparseMatrix(n, n, {i: {i: v} for i, v in enumerate(values) if v != 0})

    # -- queries --------------------------------------------------------

    def get(self, r, c):
        row = self.rowdata.get(r)
        return row.get(c) if row else None

    def entries(self):
        for r, row in self.rowdata.items():
            for c, v in row.items():
                yield r, c, v

    def sorted_entries(self):
        for r in sorted(self.rowdata):
            row = self.rowdata[r]
            for c in sorted(row):
                yield r, c, row[c]

    def nnz(self):
        return sum(len(row) for row in self.rowdata.values())

    def is_zero(self):
        return not self.rowdata

    def __eq__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return (
            self.rows == other.rows
            and self.cols == other.cols
            and self.rowdata == other.rowdata
        )

    def column_adjacency(self):
        """cols[c] = list of (row, value); for repeated vector application."""
        cols = {}
        for r, row in self.rowdata.items():
            for c, v in row.items():
                cols.setdefault(c, []).append((r, v))
        return cols

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        if self.rows != other.rows or self.cols != other.cols:
            raise ValueError("shape mismatch")
        rd = {r: dict(row) for r, row in self.rowdata.items()}
        for r, row in other.rowdata.items():
            mine = rd.setdefault(r, {})
            for c, v in row.items():
                w = mine.get(c)
                w = v if w is None else w + v
                if w == 0:
                    mine.pop(c, None)
                else:
                    mine[c] = w
            if not mine:
                del rd[r]
        return SparseMatrix(self.rows, self.cols, rd)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, k):
        if k == 0:
            return SparseMatrix(self.rows, self.cols)
        return SparseMatrix(
            self.rows,
            self.cols,
            {r: {c: v * k for c, v in row.items()} for r, row in self.rowdata.items()},
        )

    def __mul__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        if self.cols != other.rows:
            raise ValueError("shape mismatch in product")
        ord_ = other.rowdata
        rd = {}
        for r, row in self.rowdata.items():
            acc = {}
            for k, v in row.items():
                orow = ord_.get(k)
                if not orow:
                    continue
                for c, w in orow.items():
                    u = acc.get(c)
                    p = v * w
                    u = p if u is None else u + p
                    if u == 0:
                        acc.pop(c, None)
                    else:
                        acc[c] = u
            if acc:
                rd[r] = acc
        return SparseMatrix(self.rows, other.cols, rd)

    def transpose(self):
        rd = {}
        for r, row in self.rowdata.items():
            for c, v in row.items():
                rd.setdefault(c, {})[r] = v
        return SparseMatrix(self.cols, self.rows, rd)

    def kron(self, other):
        """Kronecker product; left factor index varies slowest."""
        rd = {}
        orows, ocols = other.rows, other.cols
        for r1, row1 in self.rowdata.items():
            for r2, row2 in other.rowdata.items():
                dest = {}
                for c1, v1 in row1.items():
                    for c2, v2 in row2.items():
                        dest[c1 * ocols + c2] = v1 * v2
                rd[r1 * orows + r2] = dest
        return SparseMatrix(self.rows * orows, self.cols * ocols, rd)

    def apply_vec(self, vec: dict) -> dict:
        """Matrix times sparse column vector {index: value}."""
        out = {}
        for r, row in self.rowdata.items():
            acc = None
            for c, v in row.items():
                x = vec.get(c)
                if x is None:
                    continue
                p = v * x
                acc = p if acc is None else acc + p
            if acc is not None and acc != 0:
                out[r] = acc
        return out

    def apply_vec_by_cols(self, coladj, vec: dict) -> dict:
        """Same product via a precomputed column adjacency (fast when vec is sparse)."""
        out = {}
        for c, x in vec.items():
            hits = coladj.get(c)
            if not hits:
                continue
            for r, v in hits:
                w = out.get(r)
                p = v * x
                w = p if w is None else w + p
                if w == 0:
                    out.pop(r, None)
                else:
                    out[r] = w
        return out

    def hstack(self, other):
        if self.rows != other.rows:
            raise ValueError("row count mismatch")
        rd = {r: dict(row) for r, row in self.rowdata.items()}
        off = self.cols
        for r, row in other.rowdata.items():
            mine = rd.setdefault(r, {})
            for c, v in row.items():
                mine[c + off] = v
        return SparseMatrix(self.rows, self.cols + other.cols, rd)

    def vstack(self, other):
        if self.cols != other.cols:
            raise ValueError("column count mismatch")
        rd = {r: dict(row) for r, row in self.rowdata.items()}
        off = self.rows
        for r, row in other.rowdata.items():
            rd[r + off] = dict(row)
        return SparseMatrix(self.rows + other.rows, self.cols, rd)

    def take_rows(self, indices):
        rd = {}
        for i, r in enumerate(indices):
            row = self.rowdata.get(r)
            if row:
                rd[i] = dict(row)
        return SparseMatrix(len(indices), self.cols, rd)

    def take_cols(self, indices):
        pos = {c: i for i, c in enumerate(indices)}
        rd = {}
        for r, row in self.rowdata.items():
            dest = {pos[c]: v for c, v in row.items() if c in pos}
            if dest:
                rd[r] = dest
        return SparseMatrix(self.rows, len(indices), rd)

    @staticmethod
    def from_columns(rows, columns):
        """Assemble from a list of sparse column vectors {row: value}."""
        rd = {}
        for c, col in enumerate(columns):
            for r, v in col.items():
                rd.setdefault(r, {})[c] = v
        return SparseMatrix(rows, len(columns), rd)

    def column(self, c) -> dict:
        out = {}
        for r, row in self.rowdata.items():
            v = row.get(c)
            if v is not None:
                out[r] = v
        return out


# -- elimination --------------------------------------------------------


def _rref(rowdata, cols, aug_cols=0):
    """In-place reduced row echelon form with the fixed pivot rule.

    rowdata: dict row -> dict col -> value, modified in place; columns
    [cols, cols+aug_cols) are carried along but never pivoted.  Returns
    pivots as an ordered dict {pivot_col: row_key}.
    """
    pivots = {}
    used = set()
    row_keys = sorted(rowdata)
    for c in range(cols):
        pr = None
        for r in row_keys:
            if r in used:
                continue
            row = rowdata.get(r)
            if row and row.get(c):
                pr = r
                break
        if pr is None:
            continue
        used.add(pr)
        pivots[c] = pr
        prow = rowdata[pr]
        pv = prow[c]
        if pv != 1:
            inv = 1 / pv
            for cc in list(prow):
                prow[cc] = prow[cc] * inv
            prow[c] = pv * inv  # exact one of the right scalar type
        for r in row_keys:
            if r == pr:
                continue
            row = rowdata.get(r)
            if not row:
                continue
            f = row.get(c)
            if f is None or f == 0:
                continue
            for cc, v in prow.items():
                w = row.get(cc)
                w = -f * v if w is None else w - f * v
                if w == 0:
                    row.pop(cc, None)
                else:
                    row[cc] = w
            if not row:
                rowdata.pop(r, None)
    return pivots


def null_space(m: SparseMatrix):
    """Deterministic basis of the right null space.

    Basis vectors (one per free column, in column order) are returned
    as sparse dicts normalised so their first nonzero entry is 1.
    """
    rd = {r: dict(row) for r, row in m.rowdata.items()}
    pivots = _rref(rd, m.cols)
    one = 1
    for row in m.rowdata.values():
        for v in row.values():
            one = v / v
            break
        else:
            continue
        break
    basis = []
    for f in range(m.cols):
        if f in pivots:
            continue
        vec = {f: one}
        for pc, pr in pivots.items():
            v = rd.get(pr, {}).get(f)
            if v is not None and v != 0:
                vec[pc] = -v
        first = min(vec)
        lead = vec[first]
        if lead != 1:
            inv = 1 / lead
            vec = {i: v * inv for i, v in vec.items()}
        basis.append(vec)
    return basis


def rank(m: SparseMatrix) -> int:
    rd = {r: dict(row) for r, row in m.rowdata.items()}
    return len(_rref(rd, m.cols))


def invert(m: SparseMatrix, one) -> SparseMatrix:
    """Exact inverse by [M | I] elimination; SingularMatrixError if singular."""
    if m.rows != m.cols:
        raise SingularMatrixError("only square matrices invert")
    n = m.rows
    rd = {r: dict(row) for r, row in m.rowdata.items()}
    for r in range(n):
        rd.setdefault(r, {})[n + r] = one
    pivots = _rref(rd, n, aug_cols=n)
    if len(pivots) != n:
        raise SingularMatrixError("matrix is singular")
    out = {}
    for c, pr in pivots.items():
        row = rd[pr]
        dest = {cc - n: v for cc, v in row.items() if cc >= n}
        if dest:
            out[c] = dest
    return SparseMatrix(n, n, out)


def partitioned_inverse_projection(P: SparseMatrix, Q: SparseMatrix, one) -> SparseMatrix:
    """Top block R of (P|Q)^-1, so that RP = I and RQ = 0.

    R recovers coordinates along the summand that P includes; a singular
    (P|Q) signals a degenerate sample point in pointwise mode.
    """
    A = P.hstack(Q)
    if A.rows != A.cols:
        raise SingularMatrixError("(P|Q) is not square")
    inv = invert(A, one)
    return inv.take_rows(range(P.cols))


def solve_in_span(basis_cols, targets, zero):
    """Coordinates of each target in the exact span of the basis columns.

    basis_cols / targets: sparse column dicts.  Returns a list of
    coefficient lists, or None if some target leaves the span (checked
    exactly).
    """
    k = len(basis_cols)
    rows = sorted({r for col in basis_cols for r in col} | {r for t in targets for r in t})
    pos = {r: i for i, r in enumerate(rows)}
    rd = {}
    for c, col in enumerate(basis_cols):
        for r, v in col.items():
            rd.setdefault(pos[r], {})[c] = v
    for j, t in enumerate(targets):
        for r, v in t.items():
            rd.setdefault(pos[r], {})[k + j] = v
    pivots = _rref(rd, k, aug_cols=len(targets))
    if len(pivots) != k:
        raise SingularMatrixError("basis columns are dependent")
    # any row without a pivot must have been eliminated entirely
    for r, row in rd.items():
        if r not in pivots.values() and row:
            return None
    sols = []
    for j in range(len(targets)):
        sol = [zero] * k
        for c, pr in pivots.items():
            v = rd.get(pr, {}).get(k + j)
            if v is not None:
                sol[c] = v
        sols.append(sol)
    return sols
