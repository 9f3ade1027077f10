"""Exact rational linear algebra.

Dense matrices carry an explicit shape so that zero-dimensional spaces
(common for vertex spaces of quiver representations) behave correctly.
Large sparse homogeneous systems go through :func:`sparse_nullspace`,
which keeps an incrementally reduced echelon form keyed by column.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from gmpy2 import mpq

Scalar = Fraction


def frac(value) -> Fraction:
    """Coerce ints, strings like ``"3/2"`` and Fractions to Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        return Fraction(value.strip())
    return Fraction(value)


class Mat:
    """Dense matrix over Q with explicit shape."""

    __slots__ = ("nrows", "ncols", "rows")

    def __init__(self, rows: Sequence[Sequence], ncols: int | None = None):
        rows = [[frac(v) for v in r] for r in rows]
        if ncols is None:
            if not rows:
                raise ValueError("ncols required for a matrix with no rows")
            ncols = len(rows[0])
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged matrix rows")
        self.nrows = len(rows)
        self.ncols = ncols
        self.rows = rows

    @classmethod
    def _raw(cls, rows: list[list[Fraction]], ncols: int) -> "Mat":
        m = cls.__new__(cls)
        m.nrows = len(rows)
        m.ncols = ncols
        m.rows = rows
        return m

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "Mat":
        z = Fraction(0)
        return cls._raw([[z] * ncols for _ in range(nrows)], ncols)

    @classmethod
    def identity(cls, n: int) -> "Mat":
        m = cls.zeros(n, n)
        for i in range(n):
            m.rows[i][i] = Fraction(1)
        return m

    @classmethod
    def scalar(cls, n: int, c) -> "Mat":
        m = cls.zeros(n, n)
        c = frac(c)
        for i in range(n):
            m.rows[i][i] = c
        return m

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, idx):
        i, j = idx
        return self.rows[i][j]

    def __setitem__(self, idx, value):
        i, j = idx
        self.rows[i][j] = frac(value)

    def copy(self) -> "Mat":
        return Mat._raw([list(r) for r in self.rows], self.ncols)

    @property
    def T(self) -> "Mat":
        return Mat._raw([list(c) for c in zip(*self.rows)] if self.nrows else
                        [[] for _ in range(self.ncols)], self.nrows)

    def __matmul__(self, other: "Mat") -> "Mat":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        out = []
        ocols = other.ncols
        orows = other.rows
        zero = Fraction(0)
        for r in self.rows:
            acc = [zero] * ocols
            for k, a in enumerate(r):
                if a:
                    ok = orows[k]
                    for j in range(ocols):
                        b = ok[j]
                        if b:
                            acc[j] += a * b
            out.append(acc)
        return Mat._raw(out, ocols)

    def apply(self, vec: Sequence[Fraction]) -> list[Fraction]:
        if len(vec) != self.ncols:
            raise ValueError("vector length mismatch")
        zero = Fraction(0)
        out = []
        for r in self.rows:
            s = zero
            for a, b in zip(r, vec):
                if a and b:
                    s += a * b
            out.append(s)
        return out

    def _check_same(self, other: "Mat"):
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: "Mat") -> "Mat":
        self._check_same(other)
        return Mat._raw([[a + b for a, b in zip(r, s)]
                         for r, s in zip(self.rows, other.rows)], self.ncols)

    def __sub__(self, other: "Mat") -> "Mat":
        self._check_same(other)
        return Mat._raw([[a - b for a, b in zip(r, s)]
                         for r, s in zip(self.rows, other.rows)], self.ncols)

    def __neg__(self) -> "Mat":
        return Mat._raw([[-a for a in r] for r in self.rows], self.ncols)

    def scale(self, c) -> "Mat":
        c = frac(c)
        return Mat._raw([[c * a for a in r] for r in self.rows], self.ncols)

    def __eq__(self, other) -> bool:
        return isinstance(other, Mat) and self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        return hash((self.shape, tuple(tuple(r) for r in self.rows)))

    def is_zero(self) -> bool:
        return all(not a for r in self.rows for a in r)

    def trace(self) -> Fraction:
        if self.nrows != self.ncols:
            raise ValueError("trace of non-square matrix")
        return sum((self.rows[i][i] for i in range(self.nrows)), Fraction(0))

    def nnz(self) -> int:
        return sum(1 for r in self.rows for a in r if a)

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(a) for a in r) for r in self.rows)
        return f"Mat({self.nrows}x{self.ncols}: [{body}])"


def block_diag(blocks: Sequence[Mat]) -> Mat:
    nr = sum(b.nrows for b in blocks)
    nc = sum(b.ncols for b in blocks)
    out = Mat.zeros(nr, nc)
    r0 = c0 = 0
    for b in blocks:
        for i, row in enumerate(b.rows):
            out.rows[r0 + i][c0:c0 + b.ncols] = row
        r0 += b.nrows
        c0 += b.ncols
    return out


def vstack(blocks: Sequence[Mat], ncols: int | None = None) -> Mat:
    if not blocks:
        if ncols is None:
            raise ValueError("ncols required for empty vstack")
        return Mat.zeros(0, ncols)
    nc = blocks[0].ncols
    rows = []
    for b in blocks:
        if b.ncols != nc:
            raise ValueError("vstack column mismatch")
        rows.extend(list(r) for r in b.rows)
    return Mat._raw(rows, nc)


def hstack(blocks: Sequence[Mat]) -> Mat:
    return vstack([b.T for b in blocks]).T


# ----------------------------------------------------------------- dense algebra


def rref(m: Mat) -> tuple[Mat, list[int]]:
    """Reduced row echelon form and pivot columns."""
    rows = [list(r) for r in m.rows]
    pivots: list[int] = []
    r = 0
    for c in range(m.ncols):
        if r == len(rows):
            break
        p = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = 1 / rows[r][c]
        pr = [a * inv for a in rows[r]]
        rows[r] = pr
        for i in range(len(rows)):
            if i != r:
                f = rows[i][c]
                if f:
                    ri = rows[i]
                    for j in range(c, m.ncols):
                        if pr[j]:
                            ri[j] -= f * pr[j]
        pivots.append(c)
        r += 1
    return Mat._raw(rows[:r], m.ncols), pivots


def rank(m: Mat) -> int:
    """Rank by fraction-free (Bareiss) elimination on a cleared-denominator copy."""
    if m.nrows == 0 or m.ncols == 0:
        return 0
    rows = [_integer_row(r) for r in m.rows]
    nr, nc = len(rows), m.ncols
    rk = 0
    prev = 1
    for c in range(nc):
        if rk == nr:
            break
        p = next((i for i in range(rk, nr) if rows[i][c]), None)
        if p is None:
            continue
        rows[rk], rows[p] = rows[p], rows[rk]
        piv = rows[rk][c]
        for i in range(rk + 1, nr):
            a = rows[i][c]
            ri = rows[i]
            pk = rows[rk]
            for j in range(c, nc):
                ri[j] = (piv * ri[j] - a * pk[j]) // prev
        prev = piv
        rk += 1
    return rk


def _integer_row(r: Sequence[Fraction]) -> list[int]:
    den = 1
    for a in r:
        if a.denominator != 1:
            den = den * a.denominator // _gcd(den, a.denominator)
    return [int(a * den) for a in r]


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def det(m: Mat) -> Fraction:
    """Determinant via Bareiss fraction-free elimination."""
    if m.nrows != m.ncols:
        raise ValueError("determinant of non-square matrix")
    n = m.nrows
    if n == 0:
        return Fraction(1)
    scale = Fraction(1)
    rows = []
    for r in m.rows:
        den = 1
        for a in r:
            if a.denominator != 1:
                den = den * a.denominator // _gcd(den, a.denominator)
        scale /= den
        rows.append([int(a * den) for a in r])
    sign = 1
    prev = 1
    for c in range(n - 1):
        p = next((i for i in range(c, n) if rows[i][c]), None)
        if p is None:
            return Fraction(0)
        if p != c:
            rows[c], rows[p] = rows[p], rows[c]
            sign = -sign
        piv = rows[c][c]
        for i in range(c + 1, n):
            a = rows[i][c]
            ri = rows[i]
            pc = rows[c]
            for j in range(c + 1, n):
                ri[j] = (piv * ri[j] - a * pc[j]) // prev
            ri[c] = 0
        prev = piv
    return sign * rows[n - 1][n - 1] * scale


def nullspace(m: Mat) -> Mat:
    """Basis of the right kernel, one vector per row.

    Each basis vector has a 1 in its own free column and 0 in the other free
    columns, so coordinates of a kernel vector are read off the free columns.
    """
    R, piv = rref(m)
    free = [c for c in range(m.ncols) if c not in set(piv)]
    basis = []
    for f in free:
        v = [Fraction(0)] * m.ncols
        v[f] = Fraction(1)
        for i, p in enumerate(piv):
            v[p] = -R.rows[i][f]
        basis.append(v)
    return Mat._raw(basis, m.ncols)


def free_columns(m: Mat) -> list[int]:
    _, piv = rref(m)
    ps = set(piv)
    return [c for c in range(m.ncols) if c not in ps]


def row_basis(m: Mat) -> Mat:
    """Reduced echelon basis of the row space."""
    return rref(m)[0]


def solve(a: Mat, b: Sequence[Fraction]) -> list[Fraction] | None:
    """One solution of ``a @ x = b`` or None when inconsistent."""
    if len(b) != a.nrows:
        raise ValueError("right-hand side length mismatch")
    aug = Mat._raw([list(r) + [frac(v)] for r, v in zip(a.rows, b)], a.ncols + 1)
    R, piv = rref(aug)
    if piv and piv[-1] == a.ncols:
        return None
    x = [Fraction(0)] * a.ncols
    for i, p in enumerate(piv):
        x[p] = R.rows[i][a.ncols]
    return x


def solve_matrix(a: Mat, b: Mat) -> Mat | None:
    """Solve ``a @ X = b`` column by column; None if some column is inconsistent."""
    cols = []
    for j in range(b.ncols):
        x = solve(a, [b.rows[i][j] for i in range(b.nrows)])
        if x is None:
            return None
        cols.append(x)
    if not cols:
        return Mat.zeros(a.ncols, 0)
    return Mat._raw([list(r) for r in zip(*cols)], len(cols)) if a.ncols else Mat.zeros(0, b.ncols)


def inverse(m: Mat) -> Mat:
    if m.nrows != m.ncols:
        raise ValueError("inverse of non-square matrix")
    n = m.nrows
    aug = Mat._raw([list(r) + [Fraction(int(i == j)) for j in range(n)]
                    for i, r in enumerate(m.rows)], 2 * n)
    R, piv = rref(aug)
    if piv[:n] != list(range(n)) or len(piv) < n:
        raise ZeroDivisionError("matrix is singular")
    return Mat._raw([r[n:] for r in R.rows], n)


def charpoly(m: Mat) -> list[Fraction]:
    """Characteristic polynomial det(tI - m), coefficients from degree 0 upward.

    Uses reduction to upper Hessenberg form followed by the standard
    recurrence on leading principal minors.
    """
    if m.nrows != m.ncols:
        raise ValueError("charpoly of non-square matrix")
    n = m.nrows
    h = [list(r) for r in m.rows]
    for c in range(n - 2):
        p = next((i for i in range(c + 1, n) if h[i][c]), None)
        if p is None:
            continue
        if p != c + 1:
            h[p], h[c + 1] = h[c + 1], h[p]
            for r in h:
                r[p], r[c + 1] = r[c + 1], r[p]
        piv = h[c + 1][c]
        for i in range(c + 2, n):
            f = h[i][c] / piv
            if f:
                for j in range(n):
                    h[i][j] -= f * h[c + 1][j]
                for r in h:
                    r[c + 1] += f * r[i]
    # p_k(t) = (t - h_kk) p_{k-1}(t) - sum_i h_ik prod(h_{j,j-1}) p_{i-1}(t)
    polys: list[list[Fraction]] = [[Fraction(1)]]
    for k in range(n):
        prev = polys[-1]
        new = [Fraction(0)] + list(prev)
        for i, c in enumerate(prev):
            new[i] -= h[k][k] * c
        prod = Fraction(1)
        for i in range(k - 1, -1, -1):
            prod *= h[i + 1][i]
            if not prod:
                break
            coef = prod * h[i][k]
            if coef:
                for d, c in enumerate(polys[i]):
                    new[d] -= coef * c
        polys.append(new)
    return polys[-1]


def poly_eval_matrix(coeffs: Sequence[Fraction], m: Mat) -> Mat:
    """Evaluate a polynomial (low degree first) at a square matrix by Horner."""
    n = m.nrows
    acc = Mat.zeros(n, n)
    for c in reversed(coeffs):
        acc = acc @ m
        if c:
            for i in range(n):
                acc.rows[i][i] += c
    return acc


def kernel_dim(m: Mat) -> int:
    return m.ncols - rank(m)


def span_contains(basis: Mat, vec: Sequence[Fraction]) -> bool:
    if basis.nrows == 0:
        return all(not v for v in vec)
    return rank(vstack([basis, Mat([list(vec)], basis.ncols)])) == rank(basis)


def intersect_spaces(a: Mat, b: Mat) -> Mat:
    """Row-space intersection of two subspaces given by spanning rows."""
    if a.ncols != b.ncols:
        raise ValueError("ambient dimension mismatch")
    if a.nrows == 0 or b.nrows == 0:
        return Mat.zeros(0, a.ncols)
    # solve u @ a = w @ b
    sys = vstack([a, -b]).T
    ker = nullspace(sys)
    vecs = [Mat([k[:a.nrows]], a.nrows) @ a for k in ker.rows]
    if not vecs:
        return Mat.zeros(0, a.ncols)
    return row_basis(vstack(vecs))


# --------------------------------------------------------------- sparse systems

SparseRow = dict


def _to_mpq(v):
    if isinstance(v, Fraction):
        return mpq(v.numerator, v.denominator)
    return mpq(v)


def _to_fraction(v) -> Fraction:
    return Fraction(int(v.numerator), int(v.denominator))


class SparseEliminator:
    """Incremental reduced row echelon form for sparse rows.

    Pivot rows are kept mutually reduced, so a new row needs a single pass
    over its own support before it can contribute a new pivot.  Arithmetic
    runs on gmpy2 rationals; results come back as Fractions.
    """

    def __init__(self, ncols: int, avoid: int | None = None):
        self.ncols = ncols
        self.avoid = avoid  # column only used as a pivot when nothing else is left
        self.pivot_rows: dict[int, dict[int, Fraction]] = {}
        self.col_users: dict[int, set[int]] = {}

    @property
    def rank(self) -> int:
        return len(self.pivot_rows)

    def reduce(self, row: dict[int, Fraction]) -> dict:
        row = {c: _to_mpq(v) for c, v in row.items() if v}
        hits = [c for c in row if c in self.pivot_rows]
        for c in hits:
            f = row.get(c)
            if not f:
                continue
            for cc, vv in self.pivot_rows[c].items():
                nv = row.get(cc, 0) - f * vv
                if nv:
                    row[cc] = nv
                else:
                    row.pop(cc, None)
        return row

    def add(self, row: dict[int, Fraction]) -> bool:
        """Insert a row; returns True if it increased the rank."""
        row = self.reduce(row)
        if not row:
            return False
        best = None
        best_cost = None
        for c in row:
            if c == self.avoid and len(row) > 1:
                continue
            cost = len(self.col_users.get(c, ()))
            if best is None or cost < best_cost or (cost == best_cost and c < best):
                best, best_cost = c, cost
        inv = 1 / row[best]
        row = {c: v * inv for c, v in row.items()}
        # eliminate the new pivot column from existing pivot rows
        for p in list(self.col_users.get(best, ())):
            prow = self.pivot_rows[p]
            f = prow.get(best)
            if not f:
                continue
            for cc, vv in row.items():
                nv = prow.get(cc, 0) - f * vv
                if nv:
                    if cc not in prow:
                        self.col_users.setdefault(cc, set()).add(p)
                    prow[cc] = nv
                else:
                    if cc in prow:
                        del prow[cc]
                        self.col_users[cc].discard(p)
        self.pivot_rows[best] = row
        for cc in row:
            if cc != best:
                self.col_users.setdefault(cc, set()).add(best)
        return True

    def nullspace(self) -> list[dict[int, Fraction]]:
        free = [c for c in range(self.ncols) if c not in self.pivot_rows]
        basis = []
        for f in free:
            v = {f: Fraction(1)}
            for p in self.col_users.get(f, ()):
                val = self.pivot_rows[p].get(f)
                if val:
                    v[p] = _to_fraction(-val)
            basis.append(v)
        return basis


def sparse_nullspace(rows: Iterable[dict[int, Fraction]], ncols: int) -> list[dict[int, Fraction]]:
    el = SparseEliminator(ncols)
    for r in rows:
        el.add(r)
    return el.nullspace()


def sparse_rank(rows: Iterable[dict[int, Fraction]], ncols: int) -> int:
    el = SparseEliminator(ncols)
    for r in rows:
        el.add(r)
    return el.rank


def sparse_solve(rows: Iterable[tuple[dict[int, Fraction], Fraction]], nvars: int) -> dict[int, Fraction] | None:
    """One solution of the sparse system ``sum row[k] x_k = rhs`` (free variables 0), or None."""
    el = SparseEliminator(nvars + 1, avoid=nvars)
    for row, rhs in rows:
        r = dict(row)
        if rhs:
            r[nvars] = -Fraction(rhs)
        el.add(r)
    if nvars in el.pivot_rows:
        return None
    out = {}
    for p, row in el.pivot_rows.items():
        v = row.get(nvars)
        if v:
            out[p] = -_to_fraction(v)
    return out


def dense_row(row: dict[int, Fraction], ncols: int) -> list[Fraction]:
    out = [Fraction(0)] * ncols
    for c, v in row.items():
        out[c] = v
    return out
