"""Relative Lie algebra 1-cocycles on weight windows.

A cochain assigns to a root vector ``E_ij`` a weight-homogeneous operator of
weight ``e_i - e_j``.  In *relative* mode the Cartan subalgebra goes to zero;
in *generalized* mode each ``E_ii`` may go to a scalar ``s_i``, so a Cartan
element ``sum a_i E_ii`` goes to ``sum a_i s_i``.

Window H^1 takes the Chevalley generators ``e_i = E_{i-1,i}`` and
``f_i = E_{i,i-1}`` with the Serre presentation of sl(n+1).  Each relation,
pushed through the cocycle identity, becomes a linear constraint at every
weight where all the blocks involved exist (for sl(2) these are exactly the
interior weights).  Coboundaries come from weight-preserving maps supported
on the whole window.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .linalg import Mat, SparseEliminator, inverse, sparse_solve
from .weights import ExponentVector, OperatorMatrix, Shift, WindowModule, add_shift, root

Gen = tuple[int, int]
RELATIVE, GENERALIZED = "relative", "generalized"


class ZeroWindow(WindowModule):
    """The zero module on a window."""

    def __init__(self, n: int, radius: int):
        self.n = n
        self.radius = radius
        self.mu = ExponentVector(tuple(Fraction(0) for _ in range(n + 1)))
        super().__init__()

    def dim(self, d: Shift) -> int:
        return 0

    def _block(self, i: int, j: int, d: Shift) -> Mat:
        return Mat.zeros(0, 0)


# ------------------------------------------------------------------ cochains


@dataclass
class Cocycle:
    """Values on root vectors plus, in generalized mode, scalars on the ``E_ii``."""

    module: WindowModule
    values: dict[Gen, OperatorMatrix]
    cartan: dict[int, Fraction] = field(default_factory=dict)
    mode: str = RELATIVE

    def __post_init__(self):
        for (i, j), op in self.values.items():
            if i == j:
                raise ValueError("Cartan values go in `cartan`, not `values`")
            if op.shift != root(self.module.n, i, j):
                raise ValueError(f"value on E_{i}{j} has the wrong weight")
        if self.mode == RELATIVE and any(self.cartan.values()):
            raise ValueError("relative cocycles vanish on the Cartan subalgebra")

    def cartan_scalar(self, coeffs: dict[int, int]) -> Fraction:
        return sum((Fraction(c) * self.cartan.get(i, Fraction(0)) for i, c in coeffs.items()), Fraction(0))

    def __add__(self, other: "Cocycle") -> "Cocycle":
        vals = {g: self.values[g] + other.values[g] for g in self.values if g in other.values}
        car = {i: Fraction(self.cartan.get(i, 0)) + other.cartan.get(i, 0)
               for i in set(self.cartan) | set(other.cartan)}
        mode = GENERALIZED if GENERALIZED in (self.mode, other.mode) else RELATIVE
        return Cocycle(self.module, vals, car, mode)


def all_roots(n: int) -> list[Gen]:
    return [(i, j) for i in range(n + 1) for j in range(n + 1) if i != j]


def multiplier_cochain(M: WindowModule, b: dict[Gen, Fraction]) -> Cocycle:
    """``c(E_ij) = b_ij t_i/t_j`` on the listed root vectors."""
    return Cocycle(M, {g: M.multiplication(g[0], g[1], Fraction(c)) for g, c in b.items()})


def log_cocycle(M: WindowModule, coeffs: Sequence | None = None) -> Cocycle:
    """``c(E_ij) = u_j t_i/t_j`` and ``c(E_ii) = u_i``: the derivative of ``sum u_l log t_l``.

    With all ``u_l`` equal the Cartan part vanishes on sl(n+1) and the cocycle
    is relative; otherwise it needs generalized mode.
    """
    n = M.n
    u = [Fraction(c) for c in (coeffs or [1] * (n + 1))]
    vals = {g: M.multiplication(g[0], g[1], u[g[1]]) for g in all_roots(n)}
    if len(set(u)) == 1:
        return Cocycle(M, vals)
    return Cocycle(M, vals, {i: u[i] for i in range(n + 1)}, GENERALIZED)


def inverse_operator(M: WindowModule, i: int, j: int) -> OperatorMatrix:
    """``E_ij^{-1}`` where defined (root vectors act bijectively on cuspidal windows)."""
    op = M.operator(i, j)
    out = {}
    for d, b in op.blocks.items():
        out[add_shift(d, op.shift)] = inverse(b)
    return OperatorMatrix(root(M.n, j, i), out)


def x_inverse_cocycle(M: WindowModule, b=1) -> Cocycle:
    """sl(2): ``c(X) = 0``, ``c(Y) = b X^{-1}`` with ``X = E_01``, ``Y = E_10``."""
    if M.n != 1:
        raise ValueError("defined for sl(2) only")
    X = M.operator(0, 1)
    zero = OperatorMatrix(X.shift, {d: Mat.zeros(blk.nrows, blk.ncols) for d, blk in X.blocks.items()})
    return Cocycle(M, {(0, 1): zero, (1, 0): inverse_operator(M, 0, 1).scale(Fraction(b))})


def coboundary(M: WindowModule, phi: OperatorMatrix, gens: Iterable[Gen] | None = None) -> Cocycle:
    """``c(g) = [g, phi]`` for a weight-preserving ``phi``."""
    if any(phi.shift):
        raise ValueError("phi must preserve weights")
    vals = {}
    for g in gens or all_roots(M.n):
        A = M.operator(*g)
        vals[g] = A.compose(phi) - phi.compose(A)
    return Cocycle(M, vals)


def _bracket(a: Gen, b: Gen) -> dict[Gen, int]:
    """``[E_ij, E_kl] = delta_jk E_il - delta_li E_kj`` in the E basis."""
    i, j = a
    k, l = b
    out: dict[Gen, int] = {}
    if j == k:
        out[(i, l)] = out.get((i, l), 0) + 1
    if l == i:
        out[(k, j)] = out.get((k, j), 0) - 1
    return {g: c for g, c in out.items() if c}


@dataclass
class CocycleCheck:
    ok: bool
    pairs_checked: int
    failures: list[tuple[Gen, Gen, Shift]]


def check_cocycle(c: Cocycle) -> CocycleCheck:
    """``c([g1,g2]) = [g1, c(g2)] - [g2, c(g1)]`` for every pair of assigned root vectors.

    Pairs whose bracket leaves the span of the assigned root vectors and the
    Cartan subalgebra are skipped.  Each identity is tested at every weight
    where all blocks exist.
    """
    M = c.module
    gens = sorted(c.values)
    fails = []
    checked = 0
    for a_idx, g1 in enumerate(gens):
        for g2 in gens[a_idx + 1:]:
            br = _bracket(g1, g2)
            diag = {i: v for (i, j), v in br.items() if i == j}
            offd = {g: v for g, v in br.items() if g[0] != g[1]}
            if any(g not in c.values for g in offd):
                continue
            checked += 1
            A1, A2 = M.operator(*g1), M.operator(*g2)
            rhs = (A1.compose(c.values[g2]) - c.values[g2].compose(A1)) \
                - (A2.compose(c.values[g1]) - c.values[g1].compose(A2))
            scal = c.cartan_scalar(diag)
            for d, blk in rhs.blocks.items():
                lhs = Mat.scalar(blk.nrows, scal) if not offd else None
                missing = False
                for g, v in offd.items():
                    b = c.values[g].blocks.get(d)
                    if b is None:
                        missing = True
                        break
                    lhs = b.scale(v) if lhs is None else lhs + b.scale(v)
                if missing:
                    continue
                if lhs != blk:
                    fails.append((g1, g2, d))
    return CocycleCheck(not fails, checked, fails)


def solve_coboundary(c: Cocycle) -> OperatorMatrix | None:
    """A weight-preserving ``phi`` with ``c(g) = [g, phi]`` wherever ``c(g)`` is given, or None."""
    M = c.module
    if any(c.cartan.values()):
        return None  # [h, phi] = 0 for weight-preserving phi
    index: dict[Shift, int] = {}
    nv = 0
    for d in M.shifts:
        index[d] = nv
        nv += M.dim(d) ** 2
    rows = []
    for g, val in c.values.items():
        A = M.operator(*g)
        for d, cb in val.blocks.items():
            if d not in A.blocks:
                continue
            t = add_shift(d, A.shift)
            a = A.blocks[d]
            ds, dt = M.dim(d), M.dim(t)
            # (a phi_d - phi_t a)[r][s] = cb[r][s]
            for r in range(dt):
                for s in range(ds):
                    eq: dict[int, Fraction] = {}
                    for q in range(ds):
                        if a.rows[r][q]:
                            k = index[d] + q * ds + s
                            eq[k] = eq.get(k, 0) + a.rows[r][q]
                    for q in range(dt):
                        if a.rows[q][s]:
                            k = index[t] + r * dt + q
                            eq[k] = eq.get(k, 0) - a.rows[q][s]
                    rows.append(({k: v for k, v in eq.items() if v}, cb.rows[r][s]))
    sol = sparse_solve(rows, nv)
    if sol is None:
        return None
    blocks = {}
    for d in M.shifts:
        size, o = M.dim(d), index[d]
        blocks[d] = Mat([[sol.get(o + r * size + s, Fraction(0)) for s in range(size)] for r in range(size)], size)
    return OperatorMatrix(tuple(0 for _ in range(M.n + 1)), blocks)


def is_coboundary(c: Cocycle) -> bool:
    return solve_coboundary(c) is not None


def self_extension_nontrivial(c: Cocycle) -> bool:
    """True iff ``c`` is not of the form ``[., phi]`` on the window."""
    return not is_coboundary(c)


# ------------------------------------------------------------- window H^1


def chevalley(n: int) -> tuple[list[Gen], list[Gen]]:
    es = [(i - 1, i) for i in range(1, n + 1)]
    fs = [(i, i - 1) for i in range(1, n + 1)]
    return es, fs


# A term is (coeff, left word, generator or ("h", i), right word); words act right to left.
Term = tuple[Fraction, tuple[Gen, ...], object, tuple[Gen, ...]]


def _bracket_left(g: Gen, expr: list[Term]) -> list[Term]:
    """``[g, X] = g X - X g`` for a cochain expression X."""
    out = []
    for c, left, gen, right in expr:
        out.append((c, (g,) + left, gen, right))
        out.append((-c, left, gen, right + (g,)))
    return out


def _neg(expr: list[Term]) -> list[Term]:
    return [(-c, l, g, r) for c, l, g, r in expr]


def relation_terms(n: int, mode: str) -> list[list[Term]]:
    """Cocycle constraints from the Serre presentation of sl(n+1); each expression must vanish."""
    es, fs = chevalley(n)
    one = Fraction(1)
    rels: list[list[Term]] = []
    for a in range(n):
        for b in range(n):
            # [e_a, c(f_b)] - [f_b, c(e_a)] = delta_ab c(h_a)
            expr = _bracket_left(es[a], [(one, (), fs[b], ())]) + _neg(_bracket_left(fs[b], [(one, (), es[a], ())]))
            if a == b and mode == GENERALIZED:
                # h_a = E_aa - E_{a+1,a+1}
                expr += [(-one, (), ("h", a), ()), (one, (), ("h", a + 1), ())]
            rels.append(expr)
    for gens in (es, fs):
        for a in range(n):
            for b in range(n):
                if a == b:
                    continue
                ga, gb = gens[a], gens[b]
                cu = _bracket_left(ga, [(one, (), gb, ())]) + _neg(_bracket_left(gb, [(one, (), ga, ())]))
                if abs(a - b) > 1:
                    if a < b:
                        rels.append(cu)  # c([g_a, g_b]) = 0
                    continue
                # c([g_a, u]) = [g_a, c(u)] - [u, c(g_a)] with u = [g_a, g_b]
                expr = _bracket_left(ga, cu)
                for c, w in ((one, (ga, gb)), (-one, (gb, ga))):
                    expr += [(-c, w, ga, ()), (c, (), ga, w)]
                rels.append(expr)
    return rels


def block_offset(M: WindowModule, N: WindowModule) -> Shift | None:
    """Integer shift ``o`` with ``N^(d+o)`` of the same sl(n+1)-weight as ``M^d``; None if none exists."""
    n = M.n
    s = (N.mu.norm - M.mu.norm) / (n + 1)
    off = [m - m2 + s for m, m2 in zip(M.mu.mu, N.mu.mu)]
    if any(v.denominator != 1 for v in off):
        return None
    return tuple(int(v) for v in off)


def _dot_right(row: list[dict], mat: Mat, s: int) -> dict:
    acc: dict = {}
    for q, e in enumerate(row):
        v = mat.rows[q][s]
        if v:
            for k, c in e.items():
                acc[k] = acc.get(k, 0) + c * v
    return acc


def _dot_left(arow: list, sym: list[list[dict]], s: int) -> dict:
    acc: dict = {}
    for q, v in enumerate(arow):
        if v:
            for k, c in sym[q][s].items():
                acc[k] = acc.get(k, 0) + v * c
    return acc


class _System:
    """Unknown blocks of ``c: M -> N`` on the generators, and the symbolic evaluator."""

    def __init__(self, M: WindowModule, N: WindowModule, off: Shift, gens: Sequence[Gen], scalars: int):
        self.M, self.N, self.off = M, N, off
        self.offsets: dict[tuple[Gen, Shift], int] = {}
        o = 0
        for g in gens:
            sh = root(M.n, *g)
            for d in M.shifts:
                t = self.to_n(add_shift(d, sh))
                if N.contains(t):
                    self.offsets[(g, d)] = o
                    o += N.dim(t) * M.dim(d)
        self.scalar_base = o
        self.nvars = o + scalars

    def to_n(self, d: Shift) -> Shift:
        return add_shift(d, self.off)

    def unknown(self, g, d: Shift):
        """Symbolic block (entries are sparse dicts) and its target in N, or None."""
        M, N = self.M, self.N
        if isinstance(g[0], str):
            size = M.dim(d)
            v = self.scalar_base + g[1]
            return [[({v: Fraction(1)} if r == s else {}) for s in range(size)] for r in range(size)], self.to_n(d)
        o = self.offsets.get((g, d))
        if o is None:
            return None
        t = self.to_n(add_shift(d, root(M.n, *g)))
        cols = M.dim(d)
        return [[{o + r * cols + s: Fraction(1)} for s in range(cols)] for r in range(N.dim(t))], t

    def evaluate(self, term: Term, d: Shift):
        c, left, gen, right = term
        M, N = self.M, self.N
        cur = d
        mat = None
        for g in reversed(right):
            b = M.block(g[0], g[1], cur)
            if b is None:
                return None
            mat = b if mat is None else b @ mat
            cur = add_shift(cur, root(M.n, *g))
        got = self.unknown(gen, cur)
        if got is None:
            return None
        sym, cur = got
        if mat is not None:
            sym = [[_dot_right(row, mat, s) for s in range(mat.ncols)] for row in sym]
        width = mat.ncols if mat is not None else M.dim(d)
        for g in reversed(left):
            b = N.block(g[0], g[1], cur)
            if b is None:
                return None
            sym = [[_dot_left(b.rows[r], sym, s) for s in range(width)] for r in range(b.nrows)]
            cur = add_shift(cur, root(M.n, *g))
        if c != 1:
            sym = [[{k: c * v for k, v in e.items()} for e in row] for row in sym]
        return sym


@dataclass
class WindowH1:
    radius: int
    unknowns: int
    equations: list[dict[int, Fraction]]
    dim_cocycles: int
    dim_coboundaries: int
    boundaries_are_cocycles: bool

    @property
    def dim_H1(self) -> int:
        return self.dim_cocycles - self.dim_coboundaries


def window_h1(M: WindowModule, mode: str = RELATIVE, N: WindowModule | None = None) -> WindowH1:
    """H^1 of the window with coefficients in ``Hom(M, N)`` (``N = M`` by default)."""
    if mode not in (RELATIVE, GENERALIZED):
        raise ValueError(f"unknown mode {mode!r}")
    n = M.n
    if N is None or N is M:
        N = M
        off: Shift | None = tuple(0 for _ in range(n + 1))
    else:
        if mode == GENERALIZED:
            raise ValueError("generalized mode needs N = M")
        off = block_offset(M, N)
        if off is None:
            return WindowH1(M.radius, 0, [], 0, 0, True)  # no common weights: every cochain is zero
    es, fs = chevalley(n)
    gens = es + fs
    # scalars c(h) = s Id only exist on a nonzero module
    scalars = n + 1 if mode == GENERALIZED and any(M.dim(d) for d in M.shifts) else 0
    system = _System(M, N, off, gens, scalars)
    eqs: list[dict[int, Fraction]] = []
    for expr in relation_terms(n, mode):
        for d in M.shifts:
            total: list | None = None
            for term in expr:
                sym = system.evaluate(term, d)
                if sym is None:
                    total = None
                    break
                if total is None:
                    total = sym
                else:
                    for rt, rs in zip(total, sym):
                        for e, f in zip(rt, rs):
                            for k, v in f.items():
                                e[k] = e.get(k, 0) + v
            if total is None:
                continue
            for row in total:
                for e in row:
                    e = {k: v for k, v in e.items() if v}
                    if e:
                        eqs.append(e)
    if scalars:
        # only differences of the s_i are seen by sl(n+1)
        eqs.append({system.scalar_base + i: Fraction(1) for i in range(n + 1)})
    zel = SparseEliminator(system.nvars)
    for e in eqs:
        zel.add(e)
    users: dict[int, list[int]] = {}
    for idx, e in enumerate(eqs):
        for k in e:
            users.setdefault(k, []).append(idx)
    # coboundaries: phi_d : M^d -> N^(d+off) a matrix unit, c(g) = g phi - phi g
    bel = SparseEliminator(system.nvars)
    inside = True
    for d in M.shifts:
        dn = system.to_n(d)
        if not N.contains(dn):
            continue
        for r in range(N.dim(dn)):
            for s in range(M.dim(d)):
                vec: dict[int, Fraction] = {}
                for g in gens:
                    sh = root(n, *g)
                    o = system.offsets.get((g, d))
                    if o is not None:
                        a = N.block(g[0], g[1], dn)
                        cols = M.dim(d)
                        for q in range(a.nrows):
                            v = a.rows[q][r]
                            if v:
                                vec[o + q * cols + s] = vec.get(o + q * cols + s, 0) + v
                    src = tuple(x - y for x, y in zip(d, sh))
                    o2 = system.offsets.get((g, src))
                    if o2 is not None:
                        a = M.block(g[0], g[1], src)
                        cols = M.dim(src)
                        for q in range(a.ncols):
                            v = a.rows[s][q]
                            if v:
                                vec[o2 + r * cols + q] = vec.get(o2 + r * cols + q, 0) - v
                vec = {k: v for k, v in vec.items() if v}
                if not vec:
                    continue
                bel.add(dict(vec))
                touched = {e for k in vec for e in users.get(k, ())}
                if any(sum((eqs[e].get(k, 0) * v for k, v in vec.items()), Fraction(0)) for e in touched):
                    inside = False
    return WindowH1(M.radius, system.nvars, eqs, system.nvars - zel.rank, bel.rank, inside)


@dataclass
class CohomologyReport:
    mode: str
    radii: list[int]
    dim_cocycles: list[int]
    dim_coboundaries: list[int]
    dim_H1: list[int]
    stable: bool
    boundaries_are_cocycles: bool

    def lines(self) -> list[str]:
        out = []
        for r, z, b, h in zip(self.radii, self.dim_cocycles, self.dim_coboundaries, self.dim_H1):
            out.append(f"radius={r} mode={self.mode} dim_cocycles={z} dim_coboundaries={b} dim_H1={h}")
        out.append(f"mode={self.mode} stable={self.stable} boundaries_are_cocycles={self.boundaries_are_cocycles}")
        return out


def h1_dimension(make_module: Callable[[int], WindowModule], radii: Iterable[int], mode: str = RELATIVE,
                 make_target: Callable[[int], WindowModule] | None = None) -> CohomologyReport:
    """Window H^1 across a radius sweep; ``make_module(radius)`` builds each window."""
    radii = list(radii)
    zs, bs, hs = [], [], []
    inside = True
    for r in radii:
        res = window_h1(make_module(r), mode, make_target(r) if make_target else None)
        zs.append(res.dim_cocycles)
        bs.append(res.dim_coboundaries)
        hs.append(res.dim_H1)
        inside = inside and res.boundaries_are_cocycles
    return CohomologyReport(mode, radii, zs, bs, hs, len(set(hs)) <= 1, inside)


def write_matrix_market(path: str, equations: Sequence[dict[int, Fraction]], ncols: int) -> None:
    """Coordinate dump of a constraint system; rational entries are written as ``p/q``."""
    nnz = sum(len(e) for e in equations)
    lines = ["%%MatrixMarket matrix coordinate rational general", f"{len(equations)} {ncols} {nnz}"]
    for i, e in enumerate(equations, 1):
        for k in sorted(e):
            lines.append(f"{i} {k + 1} {Fraction(e[k])}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
