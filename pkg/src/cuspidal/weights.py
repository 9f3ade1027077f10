"""Finite weight windows of cuspidal sl(n+1)-modules.

The modules live on Laurent-type monomials ``u^p t^lambda dt_I`` where
``lambda`` runs over ``mu + (root lattice)``.  We keep a finite box of weights
``mu + delta`` with ``sum(delta) = 0`` and ``max|delta_i| <= radius``; a weight
is *interior* when every root vector maps it back into the box.  Identities
are only asserted on interior weights.

Weights are indexed by the integer shift ``delta``.  A basis vector at shift
``delta`` of a k-form window has total weight ``w = mu + delta`` (the torus
acts on ``t^lambda dt_I`` by ``lambda + 1_I``), so the monomial part is
``t^(w - 1_I)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import sympy

from .linalg import (Mat, charpoly, det, free_columns, inverse, nullspace, rank, row_basis,
                     solve, vstack)

Shift = tuple[int, ...]


class WindowError(ValueError):
    pass


@dataclass(frozen=True)
class ExponentVector:
    mu: tuple[Fraction, ...]

    def __post_init__(self):
        mu = tuple(Fraction(v) for v in self.mu)
        if len(mu) < 2:
            raise WindowError("need at least two exponents (n >= 1)")
        object.__setattr__(self, "mu", mu)

    @classmethod
    def parse(cls, text: str) -> "ExponentVector":
        try:
            return cls(tuple(Fraction(a.strip()) for a in text.split(",") if a.strip()))
        except (ValueError, ZeroDivisionError) as exc:
            raise WindowError(f"bad exponent vector {text!r}") from exc

    @property
    def n(self) -> int:
        return len(self.mu) - 1

    @property
    def norm(self) -> Fraction:
        return sum(self.mu, Fraction(0))

    @property
    def is_cuspidal(self) -> bool:
        return all(m.denominator != 1 for m in self.mu)

    def shifted(self, delta: Sequence) -> "ExponentVector":
        return ExponentVector(tuple(m + Fraction(d) for m, d in zip(self.mu, delta)))

    def __str__(self) -> str:
        return ",".join(str(m) for m in self.mu)


def unit(n: int, i: int) -> Shift:
    return tuple(int(k == i) for k in range(n + 1))


def add_shift(a: Shift, b: Shift) -> Shift:
    return tuple(x + y for x, y in zip(a, b))


def root(n: int, i: int, j: int) -> Shift:
    """Weight shift of ``E_ij``: ``e_i - e_j``."""
    return tuple(int(k == i) - int(k == j) for k in range(n + 1))


def box_shifts(n: int, radius: int) -> list[Shift]:
    out = []
    for head in itertools.product(range(-radius, radius + 1), repeat=n):
        last = -sum(head)
        if -radius <= last <= radius:
            out.append(tuple(head) + (last,))
    return sorted(out)


# ------------------------------------------------------------------ operators


@dataclass
class OperatorMatrix:
    """Weight-homogeneous operator: ``blocks[delta]`` maps ``M^delta`` to ``N^(delta + shift)``."""

    shift: Shift
    blocks: dict[Shift, Mat] = field(default_factory=dict)

    def compose(self, other: "OperatorMatrix") -> "OperatorMatrix":
        """``self`` after ``other``, wherever both blocks exist."""
        out = {}
        for d, b in other.blocks.items():
            mid = add_shift(d, other.shift)
            a = self.blocks.get(mid)
            if a is not None:
                out[d] = a @ b
        return OperatorMatrix(add_shift(self.shift, other.shift), out)

    def _combine(self, other: "OperatorMatrix", sign: int) -> "OperatorMatrix":
        if self.shift != other.shift:
            raise WindowError("adding operators of different weights")
        out = {}
        for d in self.blocks.keys() & other.blocks.keys():
            out[d] = self.blocks[d] + other.blocks[d] if sign > 0 else self.blocks[d] - other.blocks[d]
        return OperatorMatrix(self.shift, out)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def scale(self, c) -> "OperatorMatrix":
        return OperatorMatrix(self.shift, {d: b.scale(c) for d, b in self.blocks.items()})

    def restrict(self, keys: Iterable[Shift]) -> "OperatorMatrix":
        return OperatorMatrix(self.shift, {d: self.blocks[d] for d in keys if d in self.blocks})

    def is_zero_on(self, keys: Iterable[Shift]) -> bool:
        return all(self.blocks[d].is_zero() for d in keys if d in self.blocks)


# ------------------------------------------------------------- window modules


class WindowModule:
    """Common interface: weights, per-weight dimension and E_ij blocks."""

    n: int
    radius: int
    mu: ExponentVector

    def __init__(self):
        self._memo: dict = {}
        self._shifts = box_shifts(self.n, self.radius)
        self._shift_set = set(self._shifts)

    @property
    def shifts(self) -> list[Shift]:
        return self._shifts

    def contains(self, d: Shift) -> bool:
        return d in self._shift_set

    def is_interior(self, d: Shift) -> bool:
        return max(abs(v) for v in d) <= self.radius - 1

    def interior(self) -> list[Shift]:
        return [d for d in self._shifts if self.is_interior(d)]

    def weight(self, d: Shift) -> tuple[Fraction, ...]:
        return tuple(m + v for m, v in zip(self.mu.mu, d))

    def dim(self, d: Shift) -> int:
        raise NotImplementedError

    def _block(self, i: int, j: int, d: Shift) -> Mat:
        raise NotImplementedError

    def block(self, i: int, j: int, d: Shift) -> Mat | None:
        """Matrix of ``E_ij`` from shift ``d``; None when the image leaves the window."""
        target = add_shift(d, root(self.n, i, j))
        if not self.contains(target):
            return None
        key = ("E", i, j, d)
        got = self._memo.get(key)
        if got is None:
            got = self._block(i, j, d)
            self._memo[key] = got
        return got

    def operator(self, i: int, j: int) -> OperatorMatrix:
        key = ("op", i, j)
        got = self._memo.get(key)
        if got is None:
            blocks = {}
            for d in self._shifts:
                b = self.block(i, j, d)
                if b is not None:
                    blocks[d] = b
            got = OperatorMatrix(root(self.n, i, j), blocks)
            self._memo[key] = got
        return got

    def element(self, coeffs: dict[tuple[int, int], Fraction]) -> OperatorMatrix:
        """Operator of ``sum c_ij E_ij``; all terms must share one weight shift."""
        ops = [self.operator(i, j).scale(c) for (i, j), c in coeffs.items() if c]
        if not ops:
            raise WindowError("empty Lie algebra element")
        acc = ops[0]
        for o in ops[1:]:
            acc = acc + o
        return acc


def _subsets(n: int, k: int) -> list[tuple[int, ...]]:
    return list(itertools.combinations(range(n + 1), k))


def contraction_matrix(n: int, k: int) -> Mat:
    """``i_E`` from ambient k-forms to (k-1)-forms in the ``t^(w - 1_I) dt_I`` bases."""
    src = _subsets(n, k)
    if k == 0:
        return Mat.zeros(0, 1)
    tgt = {s: r for r, s in enumerate(_subsets(n, k - 1))}
    m = Mat.zeros(len(tgt), len(src))
    for c, I in enumerate(src):
        for pos, a in enumerate(I):
            rest = I[:pos] + I[pos + 1:]
            m.rows[tgt[rest]][c] += (-1) ** pos
    return m


def fiber_dimension(n: int, k: int) -> int:
    """Dimension of the ``i_E``-kernel inside ambient k-forms of one weight."""
    if k == 0:
        return 1
    return nullspace(contraction_matrix(n, k)).nrows


def ambient_differential(n: int, k: int, w: Sequence[Fraction]) -> Mat:
    """``d`` from ambient k-forms to (k+1)-forms at total weight ``w``."""
    src = _subsets(n, k)
    tgt = {s: r for r, s in enumerate(_subsets(n, k + 1))}
    m = Mat.zeros(len(tgt), len(src))
    for c, I in enumerate(src):
        for l in range(n + 1):
            if l in I:
                continue
            sign = (-1) ** sum(1 for a in I if a < l)
            J = tuple(sorted(I + (l,)))
            m.rows[tgt[J]][c] += sign * w[l]
    return m


def ambient_lie(n: int, k: int, i: int, j: int, w: Sequence[Fraction]) -> Mat:
    """Lie derivative along ``t_i d/dt_j`` on ambient k-forms of total weight ``w``."""
    subs = _subsets(n, k)
    index = {s: r for r, s in enumerate(subs)}
    m = Mat.zeros(len(subs), len(subs))
    for c, I in enumerate(subs):
        lam_j = w[j] - (1 if j in I else 0)
        if i == j:
            m.rows[c][c] += w[i]
            continue
        m.rows[c][c] += lam_j
        if j in I and i not in I:
            between = sum(1 for a in I if a != j and min(i, j) < a < max(i, j))
            J = tuple(sorted([a for a in I if a != j] + [i]))
            m.rows[index[J]][c] += (-1) ** between
    return m


class FormWindow(WindowModule):
    """Window of ``Omega^k(mu)`` (``k = 0`` gives ``F_mu``), optionally log-extended.

    ``log_degree`` adds ``u, u^2, ...`` with ``u = sum_l log_coeffs[l] log t_l``
    (all coefficients 1 by default, i.e. ``u = log(t_0...t_n)``).  With
    ``exceptional=True`` (sl(2) only) the u-powers are inert except that
    ``E_10`` gains the term ``u^(p-1) E_01^{-1}``.
    """

    def __init__(self, mu: ExponentVector, radius: int, degree: int = 0, log_degree: int = 0,
                 log_coeffs: Sequence | None = None, exceptional: bool = False):
        self.mu = mu
        self.n = mu.n
        self.radius = radius
        self.degree = degree
        self.log_degree = log_degree
        if radius < 1:
            raise WindowError("radius must be positive")
        if not 0 <= degree <= self.n:
            raise WindowError("form degree outside 0..n")
        if log_degree < 0:
            raise WindowError("log degree must be non-negative")
        self.log_coeffs = tuple(Fraction(c) for c in (log_coeffs or [1] * (self.n + 1)))
        if len(self.log_coeffs) != self.n + 1:
            raise WindowError("one log coefficient per variable")
        self.exceptional = exceptional
        if exceptional and (self.n != 1 or degree != 0):
            raise WindowError("the exceptional action is defined for sl(2) functions only")
        self.subsets = _subsets(self.n, degree)
        self.kernel = nullspace(contraction_matrix(self.n, degree)) if degree else Mat.identity(1)
        self.coord_cols = free_columns(contraction_matrix(self.n, degree)) if degree else [0]
        super().__init__()

    @property
    def fiber_dim(self) -> int:
        return self.kernel.nrows

    def dim(self, d: Shift) -> int:
        return (self.log_degree + 1) * self.fiber_dim if self.contains(d) else 0

    def coords(self, vec: Sequence[Fraction]) -> list[Fraction]:
        """Kernel coordinates of an ambient form lying in the kernel."""
        return [vec[c] for c in self.coord_cols]

    def restrict_ambient(self, amb: Mat) -> Mat:
        """Matrix of an ambient operator on kernel bases (image must stay in the kernel)."""
        cols = [self.coords(amb.apply(v)) for v in self.kernel.rows]
        return Mat([list(r) for r in zip(*cols)], len(cols))

    def base_block(self, i: int, j: int, d: Shift) -> Mat:
        key = ("base", i, j, d)
        got = self._memo.get(key)
        if got is None:
            got = self.restrict_ambient(ambient_lie(self.n, self.degree, i, j, self.weight(d)))
            self._memo[key] = got
        return got

    def _block(self, i: int, j: int, d: Shift) -> Mat:
        f = self.fiber_dim
        m = self.log_degree
        base = self.base_block(i, j, d)
        out = Mat.zeros((m + 1) * f, (m + 1) * f)
        for p in range(m + 1):
            for r in range(f):
                out.rows[p * f + r][p * f:(p + 1) * f] = base.rows[r]
        if m == 0:
            return out
        if self.exceptional:
            if (i, j) == (1, 0):
                # E_01^{-1} from d to d + e_1 - e_0: t^lam -> t^(lam - e_0 + e_1) / (lam_1 + 1)
                coef = 1 / (self.weight(d)[1] + 1)
                for p in range(1, m + 1):
                    out.rows[(p - 1) * f][p * f] += coef
            return out
        # derivative of u^p: p * (t_i d/dt_j u) * u^(p-1) = p * log_coeffs[j] * (t_i / t_j) * u^(p-1)
        c = self.log_coeffs[j] if i != j else self.log_coeffs[i]
        for p in range(1, m + 1):
            for r in range(f):
                out.rows[(p - 1) * f + r][p * f + r] += p * c
        return out

    def multiplication(self, i: int, j: int, coeff=1) -> OperatorMatrix:
        """Multiplication by ``coeff * t_i / t_j`` (an operator of weight ``e_i - e_j``)."""
        blocks = {}
        size = (self.log_degree + 1) * self.fiber_dim
        for d in self.shifts:
            if self.contains(add_shift(d, root(self.n, i, j))):
                blocks[d] = Mat.scalar(size, coeff)
        return OperatorMatrix(root(self.n, i, j), blocks)


def build_functions(mu: ExponentVector, radius: int, log_degree: int = 0, **kw) -> FormWindow:
    return FormWindow(mu, radius, 0, log_degree, **kw)


def build_forms(mu: ExponentVector, k: int, radius: int) -> FormWindow:
    if mu.norm != 0:
        raise WindowError("forms Omega^k(mu) are built here only for |mu| = 0")
    if not mu.is_cuspidal:
        raise WindowError("forms require non-integral exponents")
    return FormWindow(mu, radius, k)


def log_extend(M: FormWindow, m: int) -> FormWindow:
    return FormWindow(M.mu, M.radius, M.degree, m, M.log_coeffs, M.exceptional)


class NaturalTensorWindow(WindowModule):
    """``factor (x) V`` with V the natural module (basis ``t_0..t_n``, weights ``e_a``).

    The tensor window has radius ``factor.radius - 1`` so every component of
    every weight is present.  Total weight is ``factor.mu + e_0 + delta``.
    """

    def __init__(self, factor: WindowModule):
        self.factor = factor
        self.n = factor.n
        self.radius = factor.radius - 1
        if self.radius < 1:
            raise WindowError("factor window too small to tensor")
        self.mu = factor.mu.shifted(unit(self.n, 0))
        super().__init__()

    def component(self, d: Shift, a: int) -> Shift:
        return add_shift(add_shift(d, unit(self.n, 0)), tuple(-v for v in unit(self.n, a)))

    def offsets(self, d: Shift) -> list[int]:
        out, o = [], 0
        for a in range(self.n + 1):
            out.append(o)
            o += self.factor.dim(self.component(d, a))
        return out + [o]

    def dim(self, d: Shift) -> int:
        return self.offsets(d)[-1] if self.contains(d) else 0

    def _block(self, i: int, j: int, d: Shift) -> Mat:
        t = add_shift(d, root(self.n, i, j))
        so, to = self.offsets(d), self.offsets(t)
        out = Mat.zeros(to[-1], so[-1])
        for a in range(self.n + 1):
            fb = self.factor.block(i, j, self.component(d, a))
            if fb is None:
                raise WindowError("tensor component left the factor window")
            for r, row in enumerate(fb.rows):
                for c, v in enumerate(row):
                    if v:
                        out.rows[to[a] + r][so[a] + c] += v
        # E_ij t_j = t_i; the factor vector keeps its weight
        if i == j:
            for r in range(so[i], so[i + 1]):
                out.rows[r][r] += 1
        else:
            for r in range(so[j + 1] - so[j]):
                out.rows[to[i] + r][so[j] + r] += 1
        return out


# ----------------------------------------------------------------- de Rham


def de_rham(src: FormWindow, tgt: FormWindow) -> OperatorMatrix:
    """The differential ``Omega^k(mu) -> Omega^(k+1)(mu)`` on kernel coordinates."""
    if src.mu != tgt.mu or tgt.degree != src.degree + 1 or src.radius != tgt.radius:
        raise WindowError("de Rham needs matching windows of consecutive degree")
    if src.log_degree or tgt.log_degree:
        raise WindowError("de Rham is implemented on plain form windows")
    blocks = {}
    for d in src.shifts:
        amb = ambient_differential(src.n, src.degree, src.weight(d))
        cols = [tgt.coords(amb.apply(v)) for v in src.kernel.rows]
        blocks[d] = Mat([list(r) for r in zip(*cols)], len(cols)) if tgt.fiber_dim else Mat.zeros(0, src.fiber_dim)
    return OperatorMatrix(tuple([0] * (src.n + 1)), blocks)


def cartan_identity_holds(n: int, k: int, w: Sequence[Fraction]) -> bool:
    """``d i_E + i_E d = (sum w) Id`` on ambient k-forms of total weight ``w``."""
    total = sum(w, Fraction(0))
    size = len(_subsets(n, k))
    acc = Mat.scalar(size, -total)
    if k >= 1:
        acc = acc + ambient_differential(n, k - 1, w) @ contraction_matrix(n, k)
    if k <= n:
        acc = acc + contraction_matrix(n, k + 1) @ ambient_differential(n, k, w)
    return acc.is_zero()


@dataclass
class DeRhamReport:
    n: int
    radius: int
    squares_vanish: bool
    cartan_formula: bool
    exact: bool
    bad_weights: list[tuple[int, Shift]]
    dims: list[int]


def de_rham_report(mu: ExponentVector, radius: int) -> DeRhamReport:
    n = mu.n
    forms = [build_forms(mu, k, radius) for k in range(n + 1)]
    ds = [de_rham(forms[k], forms[k + 1]) for k in range(n)]
    sq = all(ds[k + 1].compose(ds[k]).is_zero_on(forms[k].shifts) for k in range(n - 1))
    cartan = all(cartan_identity_holds(n, k, forms[0].weight(d))
                 for k in range(n + 1) for d in forms[0].shifts)
    bad = []
    for d in forms[0].shifts:
        ranks = [rank(ds[k].blocks[d]) for k in range(n)]
        if ranks and ranks[0] != forms[0].fiber_dim:
            bad.append((0, d))
        for k in range(1, n + 1):
            prev = ranks[k - 1]
            nxt = ranks[k] if k < n else 0
            if prev + nxt != forms[k].fiber_dim:
                bad.append((k, d))
    return DeRhamReport(n, radius, sq, cartan, not bad, bad, [f.fiber_dim for f in forms])


@dataclass
class SubWindow:
    """Per-weight subspaces (rows in the parent's coordinates)."""

    parent: WindowModule
    spaces: dict[Shift, Mat]

    def dim(self, d: Shift) -> int:
        return self.spaces[d].nrows

    def stable_under(self, i: int, j: int) -> bool:
        for d in self.parent.interior():
            b = self.parent.block(i, j, d)
            t = add_shift(d, root(self.parent.n, i, j))
            tgt = self.spaces[t]
            for v in self.spaces[d].rows:
                img = b.apply(v)
                if tgt.nrows == 0:
                    if any(img):
                        return False
                elif solve(tgt.T, img) is None:
                    return False
        return True


def simple_Lk(mu: ExponentVector, k: int, radius: int) -> SubWindow:
    """``ker d`` on ``Omega^k(mu)``, checked equal to ``d(Omega^(k-1)(mu))`` per weight."""
    n = mu.n
    if not 1 <= k <= n:
        raise WindowError("L_k needs 1 <= k <= n")
    prev = build_forms(mu, k - 1, radius)
    cur = build_forms(mu, k, radius)
    d_in = de_rham(prev, cur)
    d_out = de_rham(cur, build_forms(mu, k + 1, radius)) if k < n else None
    spaces = {}
    for d in cur.shifts:
        ker = nullspace(d_out.blocks[d]) if d_out is not None else Mat.identity(cur.fiber_dim)
        img = d_in.blocks[d]
        im_rows = row_basis(img.T) if img.ncols else Mat.zeros(0, cur.fiber_dim)
        if rank(ker) != im_rows.nrows or (ker.nrows and rank(vstack([ker, im_rows])) != ker.nrows):
            raise WindowError(f"kernel and image of d differ at shift {d}")
        spaces[d] = row_basis(ker) if ker.nrows else ker
    return SubWindow(cur, spaces)


# ------------------------------------------------------------------ Casimir


def casimir_matrix(M: WindowModule) -> OperatorMatrix:
    """Quadratic Casimir ``sum_{i!=j} E_ij E_ji + (1/(n+1)) sum_{i<j} (E_ii - E_jj)^2`` on interior weights."""
    n = M.n
    blocks = {}
    for d in M.interior():
        size = M.dim(d)
        acc = Mat.zeros(size, size)
        for i in range(n + 1):
            for j in range(n + 1):
                if i == j:
                    continue
                mid = add_shift(d, root(n, j, i))
                acc = acc + M.block(i, j, mid) @ M.block(j, i, d)
        for i in range(n + 1):
            for j in range(i + 1, n + 1):
                h = M.block(i, i, d) - M.block(j, j, d)
                acc = acc + (h @ h).scale(Fraction(1, n + 1))
        blocks[d] = acc
    return OperatorMatrix(tuple([0] * (n + 1)), blocks)


def highest_weight_casimir(nu: Sequence[Fraction]) -> Fraction:
    """Casimir eigenvalue on a highest-weight module with gl-weight ``nu`` (same normalization)."""
    n = len(nu) - 1
    nu = [Fraction(v) for v in nu]
    tot = sum(nu, Fraction(0))
    val = sum((v * v for v in nu), Fraction(0)) - tot * tot / (n + 1)
    val += sum((nu[i] - nu[j] for i in range(n + 1) for j in range(i + 1, n + 1)), Fraction(0))
    return val


def scalar_value(op: OperatorMatrix) -> Fraction | None:
    """The common scalar if every block is the same scalar matrix, else None."""
    val = None
    for b in op.blocks.values():
        if b.nrows == 0:
            continue
        c = b.rows[0][0]
        if b != Mat.scalar(b.nrows, c):
            return None
        if val is None:
            val = c
        elif val != c:
            return None
    return val


@dataclass
class LogCasimirReport:
    ok: bool
    base: Fraction | None
    correction: Fraction | None
    expected_correction: Fraction
    checked: int


def log_casimir_report(mu: ExponentVector, radius: int, exceptional: bool = False) -> LogCasimirReport:
    """``Omega(u f) = u Omega(f) + c f`` entrywise on the first log extension of ``F_mu``.

    ``c = n(n + 1 + 2|mu|)``, which is ``2(1 + |mu|)`` for sl(2).  The
    exceptional sl(2) action (``|mu| = -1``) is compared against ``c = 2``.
    """
    n = mu.n
    M = build_functions(mu, radius, 1, exceptional=exceptional)
    base = highest_weight_casimir([mu.norm] + [Fraction(0)] * n)
    want = Fraction(2) if exceptional else n * (n + 1 + 2 * mu.norm)
    f = M.fiber_dim
    cas = casimir_matrix(M)
    ok = True
    seen = None
    for d, C in cas.blocks.items():
        expect = Mat.zeros(2 * f, 2 * f)
        for r in range(2 * f):
            expect.rows[r][r] = base
        for r in range(f):
            expect.rows[r][f + r] = want
        if C != expect:
            ok = False
        if seen is None:
            seen = C.rows[0][f]
    return LogCasimirReport(ok, base, seen, want, len(cas.blocks))


@dataclass
class ProjectionReport:
    k: int
    ok: bool
    idempotent: bool
    tensor_dims: dict[Shift, int]
    projected_dims: dict[Shift, int]
    expected: int
    other_eigenvalues: list[Fraction]


def _generalized_kernel(A: Mat) -> tuple[Mat, Mat]:
    """Generalized kernel of ``A`` and the complementary stable image, as spanning rows."""
    n = A.nrows
    P = Mat.identity(n)
    for _ in range(n):
        P = P @ A
    ker = nullspace(P)
    img = row_basis(P.T) if n else Mat.zeros(0, 0)
    return ker, img


def casimir_projection_check(mu: ExponentVector, k: int, radius: int) -> ProjectionReport:
    """Dimension of the zero-Casimir part of ``Omega^(k-1)(mu - e_0) (x) V`` per interior weight."""
    n = mu.n
    if mu.norm != 0:
        raise WindowError("the projection check needs |mu| = 0")
    if not 1 <= k <= n:
        raise WindowError("k outside 1..n")
    factor = FormWindow(mu.shifted([-1] + [0] * n), radius, k - 1)
    T = NaturalTensorWindow(factor)
    cas = casimir_matrix(T)
    expected = fiber_dimension(n, k) + fiber_dimension(n, k - 1)
    tensor_dims, proj_dims = {}, {}
    idem = True
    others: set[Fraction] = set()
    for d, C in cas.blocks.items():
        ker, img = _generalized_kernel(C)
        tensor_dims[d] = C.nrows
        proj_dims[d] = ker.nrows
        basis = vstack([ker, img], ncols=C.nrows) if C.nrows else Mat.zeros(0, 0)
        if basis.nrows != C.nrows or rank(basis) != C.nrows:
            idem = False
            continue
        # projection onto ker along img, in the standard basis
        B = basis.T
        D = Mat.zeros(C.nrows, C.nrows)
        for r in range(ker.nrows):
            D.rows[r][r] = Fraction(1)
        proj = B @ D @ inverse(B)
        if proj @ proj != proj or not (proj @ C - C @ proj).is_zero():
            idem = False
        cp = charpoly(C)
        for root_ in _rational_roots(cp):
            if root_ != 0:
                others.add(root_)
    ok = idem and all(v == expected for v in proj_dims.values())
    return ProjectionReport(k, ok, idem, tensor_dims, proj_dims, expected, sorted(others))


def _rational_roots(coeffs: Sequence[Fraction]) -> list[Fraction]:
    t = sympy.Symbol("t")
    p = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(coeffs)], t)
    out = []
    for r in sympy.roots(p, filter="Q").keys():
        out.append(Fraction(int(r.p), int(r.q)))
    return out


# ------------------------------------------------------- cuspidality, grading


@dataclass
class CuspidalReport:
    ok: bool
    failures: list[tuple[int, int, Shift]]
    checked: int


def check_cuspidal(M: WindowModule) -> CuspidalReport:
    """Every root vector block on interior weights is square and invertible."""
    fails = []
    checked = 0
    for i in range(M.n + 1):
        for j in range(M.n + 1):
            if i == j:
                continue
            for d in M.interior():
                b = M.block(i, j, d)
                checked += 1
                if b.nrows != b.ncols or det(b) == 0:
                    fails.append((i, j, d))
    return CuspidalReport(not fails, fails, checked)


def z_grading(M: FormWindow) -> dict[Shift, Fraction]:
    """Eigenvalue of ``z = sum_{i>=1} E_ii - n E_00`` per weight, by direct action."""
    if M.n < 2 or M.degree != 0 or M.log_degree != 0:
        raise WindowError("z-grading is defined here on plain F_mu windows with n >= 2")
    out = {}
    for d in M.shifts:
        acc = M.block(0, 0, d).scale(-M.n)
        for i in range(1, M.n + 1):
            acc = acc + M.block(i, i, d)
        val = acc.rows[0][0]
        if acc != Mat.scalar(acc.nrows, val):
            raise WindowError("z does not act diagonally")
        out[d] = val
    return out


def z_formula(mu: ExponentVector, d: Shift) -> Fraction:
    """``|mu| + (n+1)(k - mu_0)`` with ``k = mu_0 - lambda_0 = -delta_0``."""
    k = -d[0]
    return mu.norm + (mu.n + 1) * (k - mu.mu[0])


def bracket_holds(M: WindowModule, a: tuple[int, int], b: tuple[int, int]) -> bool:
    """``[E_a, E_b] = delta_jk E_il - delta_li E_kj`` on interior weights."""
    i, j = a
    k, l = b
    A, B = M.operator(i, j), M.operator(k, l)
    lhs = A.compose(B) - B.compose(A)
    coeffs: dict = {}
    if j == k:
        coeffs[(i, l)] = coeffs.get((i, l), 0) + 1
    if l == i:
        coeffs[(k, j)] = coeffs.get((k, j), 0) - 1
    coeffs = {key: c for key, c in coeffs.items() if c}
    keys = M.interior()
    if not coeffs:
        return lhs.is_zero_on(keys)
    rhs = M.element(coeffs)
    diff = lhs - rhs
    return all(d in diff.blocks and diff.blocks[d].is_zero() for d in keys if d in lhs.blocks)


def window_table(M: WindowModule) -> list[str]:
    return [f"shift={','.join(map(str, d))} dim={M.dim(d)} interior={int(M.is_interior(d))}"
            for d in M.shifts]
