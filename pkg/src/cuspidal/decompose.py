"""Krull-Schmidt decomposition of representations into strings and bands.

Splitting works on the endomorphism algebra: a random endomorphism's
characteristic polynomial is factored over Q, and the primary components
``ker f(phi)^e`` are subrepresentations.  A piece is accepted as an
isotypic block ``N^m`` once the rank of the trace form on ``End`` equals
``m^2`` and a random endomorphism has an irreducible factor of degree ``m``.
Each block is then matched against explicit string or band models and the
match is certified by an isomorphism.  The final direct sum is re-checked
against the input.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt
from typing import Iterator, Sequence

import sympy

from .linalg import (Mat, charpoly, intersect_spaces, nullspace, poly_eval_matrix, rank,
                     row_basis, solve, vstack)
from .quiver import (QuiverRep, build, direct_sum, find_isomorphism, hom_space, restrict,
                     socle_filtration, top_filtration)
from .strings import (L, R, BandDescriptor, Descriptor, GradedPolygon, GradedString,
                      descriptor_key, predicted_socle, reverse, step)


class DecompositionError(RuntimeError):
    """The input could not be split into certified string and band summands."""


@dataclass
class Decomposition:
    summands: Counter = field(default_factory=Counter)

    def lines(self) -> list[str]:
        items = sorted(self.summands.items(), key=lambda kv: descriptor_key(kv[0]))
        return [f"{m} × {d.to_text()}" for d, m in items]

    def rebuild(self, n: int) -> QuiverRep:
        parts = []
        for d, m in sorted(self.summands.items(), key=lambda kv: descriptor_key(kv[0])):
            parts.extend([build(d)] * m)
        return direct_sum(parts, n)


# ---------------------------------------------------------------- splitting


def _trace_form_rank(basis: Sequence[Sequence[Mat]]) -> int:
    """Rank of ``(a, b) -> tr(ab)`` on End; equals the dimension of End modulo its radical."""
    vecs = []
    tvecs = []
    for f in basis:
        v: dict = {}
        w: dict = {}
        for i, blk in enumerate(f):
            for r, row in enumerate(blk.rows):
                for c, val in enumerate(row):
                    if val:
                        v[(i, r, c)] = val
                        w[(i, c, r)] = val
        vecs.append(v)
        tvecs.append(w)
    k = len(basis)
    T = Mat.zeros(k, k)
    for a in range(k):
        va = vecs[a]
        for b in range(a, k):
            wb = tvecs[b]
            if len(va) > len(wb):
                s = sum((val * va[key] for key, val in wb.items() if key in va), Fraction(0))
            else:
                s = sum((val * wb[key] for key, val in va.items() if key in wb), Fraction(0))
            T.rows[a][b] = s
            T.rows[b][a] = s
    return rank(T)


def _poly_from_coeffs(coeffs: Sequence[Fraction]) -> sympy.Poly:
    t = sympy.Symbol("t")
    return sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(coeffs)], t, domain="QQ")


def _coeffs_from_poly(p: sympy.Poly) -> list[Fraction]:
    out = []
    for c in reversed(p.all_coeffs()):
        c = sympy.Rational(c)
        out.append(Fraction(int(c.p), int(c.q)))
    return out


def _factor_charpoly(phi: Sequence[Mat]) -> list[tuple[list[Fraction], int]]:
    total = None
    for blk in phi:
        if blk.nrows == 0:
            continue
        p = _poly_from_coeffs(charpoly(blk))
        total = p if total is None else total * p
    if total is None:
        return []
    _, factors = sympy.factor_list(total)
    return [(_coeffs_from_poly(sympy.Poly(f, total.gen).monic()), e) for f, e in factors]


def _poly_power(coeffs: list[Fraction], e: int) -> list[Fraction]:
    out = [Fraction(1)]
    for _ in range(e):
        new = [Fraction(0)] * (len(out) + len(coeffs) - 1)
        for i, a in enumerate(out):
            for j, b in enumerate(coeffs):
                new[i + j] += a * b
        out = new
    return out


@dataclass
class _Piece:
    rep: QuiverRep
    mult: int


def split_isotypic(M: QuiverRep, rng: random.Random, tries: int = 8) -> list[_Piece]:
    """Split ``M`` into blocks ``N^m`` with ``N`` indecomposable."""
    if M.total_dim == 0:
        return []
    H = hom_space(M, M)
    trace_rank = None
    for _ in range(tries):
        coeffs = [rng.randint(-50, 50) for _ in range(H.dim)]
        phi = H.combine(coeffs)
        factors = _factor_charpoly(phi)
        if len(factors) > 1:
            pieces = []
            for f, e in factors:
                fe = _poly_power(f, e)
                spaces = [nullspace(poly_eval_matrix(fe, blk)) if blk.nrows else Mat.zeros(0, 0)
                          for blk in phi]
                pieces.extend(split_isotypic(restrict(M, spaces), rng, tries))
            return pieces
        f, _ = factors[0]
        deg = len(f) - 1
        if trace_rank is None:
            trace_rank = _trace_form_rank(H.basis)
        if trace_rank == deg * deg:
            return [_Piece(M, deg)]
        if deg > 1 and trace_rank == deg and isqrt(deg) ** 2 != deg:
            raise DecompositionError(
                f"summand with endomorphism residue field of degree {deg}; "
                "it has no string or band model over Q")
    raise DecompositionError(
        f"no splitting endomorphism found (End dim {H.dim}, semisimple rank {trace_rank})")


# ------------------------------------------------------------ identification


def _rank_profile(M: QuiverRep) -> tuple[tuple[int, ...], tuple[int, ...]]:
    return tuple(rank(b) for b in M.x), tuple(rank(b) for b in M.y)


def candidate_strings(n: int, dims: Sequence[int], rx: Sequence[int], ry: Sequence[int]) -> Iterator[GradedString]:
    """Strings whose label counts and per-label x/y edge counts match."""
    total = sum(dims)
    if total == 0:
        return
    need = list(dims)
    nx = list(rx)
    ny = list(ry)
    labels: list[int] = []
    dirs: list[str] = []

    def rec():
        if len(labels) == total:
            if not any(nx) and not any(ny):
                yield GradedString(n, tuple(labels), tuple(dirs))
            return
        a = labels[-1]
        for d in (L, R):
            b = step(n, a, d)
            if need[b - 1] == 0:
                continue
            if d == R:
                if nx[a - 1] == 0:
                    continue
                nx[a - 1] -= 1
            else:
                if ny[b - 1] == 0:
                    continue
                ny[b - 1] -= 1
            need[b - 1] -= 1
            labels.append(b)
            dirs.append(d)
            yield from rec()
            labels.pop()
            dirs.pop()
            need[b - 1] += 1
            if d == R:
                nx[a - 1] += 1
            else:
                ny[b - 1] += 1

    for start in range(1, n + 1):
        if need[start - 1]:
            need[start - 1] -= 1
            labels.append(start)
            yield from rec()
            labels.pop()
            need[start - 1] += 1


def candidate_polygons(n: int, counts: Sequence[int], rx: Sequence[int], ry: Sequence[int]) -> list[GradedPolygon]:
    k = sum(counts)
    if k < 2:
        return []
    found = set()
    start = min(a for a in range(1, n + 1) if counts[a - 1])
    c = list(counts)
    # walks of k edges returning to the start; the start vertex is counted once
    c[start - 1] -= 1
    need = c + [0]
    for s in _closed_walks(n, start, k, need, list(rx), list(ry)):
        labels, dirs = s
        if R not in dirs or L not in dirs:
            continue
        p = GradedPolygon(n, labels, dirs)
        if p.is_primitive():
            found.add(p.canonical())
    return sorted(found, key=lambda p: (p.labels, p.dirs))


def _closed_walks(n, start, k, need, nx, ny):
    labels = [start]
    dirs: list[str] = []

    def rec():
        a = labels[-1]
        last = len(dirs) == k - 1
        for d in (L, R):
            b = step(n, a, d)
            if last:
                if b != start:
                    continue
            elif need[b - 1] == 0:
                continue
            if d == R:
                if nx[a - 1] == 0:
                    continue
                nx[a - 1] -= 1
            else:
                if ny[b - 1] == 0:
                    continue
                ny[b - 1] -= 1
            dirs.append(d)
            if last:
                if not any(nx) and not any(ny):
                    yield tuple(labels), tuple(dirs)
            else:
                need[b - 1] -= 1
                labels.append(b)
                yield from rec()
                labels.pop()
                need[b - 1] += 1
            dirs.pop()
            if d == R:
                nx[a - 1] += 1
            else:
                ny[b - 1] += 1

    yield from rec()


# relations are subspaces of V_source (+) V_target, stored as spanning rows


def _graph(A: Mat) -> Mat:
    p = A.ncols
    cols = A.T
    return Mat([[Fraction(int(i == j)) for j in range(p)] + cols.rows[i] for i in range(p)], p + A.nrows)


def _cograph(B: Mat) -> Mat:
    """Relation ``{(B v, v)}`` for ``B: V_target -> V_source``."""
    q = B.ncols
    cols = B.T
    return Mat([cols.rows[j] + [Fraction(int(i == j)) for i in range(q)] for j in range(q)], B.nrows + q)


def _compose(R1: Mat, p: int, q: int, R2: Mat, s: int) -> Mat:
    if R1.nrows == 0 or R2.nrows == 0:
        return Mat.zeros(0, p + s)
    V1 = Mat([r[p:] for r in R1.rows], q)
    V2 = Mat([r[:q] for r in R2.rows], q)
    sysm = vstack([V1, -V2]).T
    ker = nullspace(sysm) if q else Mat.identity(R1.nrows + R2.nrows)
    out = []
    for kv in ker.rows:
        a, b = kv[:R1.nrows], kv[R1.nrows:]
        u = [sum((a[t] * R1.rows[t][j] for t in range(R1.nrows)), Fraction(0)) for j in range(p)]
        w = [sum((b[t] * R2.rows[t][q + j] for t in range(R2.nrows)), Fraction(0)) for j in range(s)]
        out.append(u + w)
    if not out:
        return Mat.zeros(0, p + s)
    return row_basis(Mat(out, p + s))


def _image(S: Mat, Rel: Mat, p: int, q: int) -> Mat:
    diag = Mat([list(r) + list(r) for r in S.rows], 2 * p) if S.nrows else Mat.zeros(0, 2 * p)
    comp = _compose(diag, p, p, Rel, q)
    if comp.nrows == 0:
        return Mat.zeros(0, q)
    return row_basis(Mat([r[p:] for r in comp.rows], q))


def _stable_parts(rel: Mat, d: int) -> tuple[Mat, Mat]:
    """Stable image of the whole space and the union of images of zero."""
    top = Mat.identity(d)
    for _ in range(d + 2):
        nxt = _image(top, rel, d, d)
        if nxt.nrows == top.nrows:
            break
        top = nxt
    low = Mat.zeros(0, d)
    for _ in range(d + 2):
        nxt = _image(low, rel, d, d)
        nxt = row_basis(vstack([low, nxt])) if low.nrows and nxt.nrows else (nxt if nxt.nrows else low)
        if nxt.nrows == low.nrows:
            break
        low = nxt
    return top, low


def band_eigenvalues(M: QuiverRep, poly: GradedPolygon) -> list[Fraction]:
    """Rational eigenvalues of the automorphism induced by walking once around ``poly``."""
    k = len(poly)
    base = poly.labels[0] - 1
    d0 = M.dims[base]
    rel = None
    cur = d0
    for e in range(k):
        a = poly.labels[e] - 1
        b = poly.labels[(e + 1) % k] - 1
        step_rel = _graph(M.x[a]) if poly.dirs[e] == R else _cograph(M.y[b])
        if rel is None:
            rel = step_rel
        else:
            rel = _compose(rel, d0, cur, step_rel, M.dims[b])
        cur = M.dims[b]
    inv = Mat([r[d0:] + r[:d0] for r in rel.rows], 2 * d0) if rel.nrows else Mat.zeros(0, 2 * d0)
    c_top, c_low = _stable_parts(rel, d0)
    i_top, i_low = _stable_parts(inv, d0)
    flat = intersect_spaces(c_top, i_top)
    sharp_parts = [m for m in (intersect_spaces(c_low, i_top), intersect_spaces(c_top, i_low)) if m.nrows]
    sharp = row_basis(vstack(sharp_parts)) if sharp_parts else Mat.zeros(0, d0)
    comp = []
    acc = sharp
    for w in flat.rows:
        trial = vstack([acc, Mat([w], d0)]) if acc.nrows else Mat([w], d0)
        if rank(trial) > acc.nrows:
            comp.append(w)
            acc = row_basis(trial)
    if not comp:
        return []
    # restrict the relation to flat x flat
    box = vstack([Mat([list(f) + [Fraction(0)] * d0 for f in flat.rows], 2 * d0),
                  Mat([[Fraction(0)] * d0 + list(f) for f in flat.rows], 2 * d0)])
    rel_f = intersect_spaces(rel, box)
    basis = vstack([Mat(comp, d0), sharp]) if sharp.nrows else Mat(comp, d0)
    first = Mat([r[:d0] for r in rel_f.rows], d0).T if rel_f.nrows else Mat.zeros(d0, 0)
    cols = []
    for w in comp:
        coef = solve(first, w)
        if coef is None:
            raise DecompositionError("band walk: basis vector outside the domain")
        v = [sum((coef[t] * rel_f.rows[t][d0 + j] for t in range(rel_f.nrows)), Fraction(0)) for j in range(d0)]
        sol = solve(basis.T, v)
        if sol is None:
            raise DecompositionError("band walk: image leaves the stable part")
        cols.append(sol[:len(comp)])
    T = Mat([list(r) for r in zip(*cols)], len(comp))
    p = _poly_from_coeffs(charpoly(T))
    roots = []
    for f, _ in sympy.factor_list(p)[1]:
        if sympy.degree(f) == 1:
            c = _coeffs_from_poly(sympy.Poly(f, p.gen).monic())
            roots.append(-c[0])
    return sorted(set(roots))


def identify(piece: QuiverRep, mult: int, seed: int = 0) -> Descriptor:
    """Find a string or band ``N`` with ``N^mult`` isomorphic to ``piece``."""
    n = piece.n
    if any(d % mult for d in piece.dims):
        raise DecompositionError("isotypic block dimensions are not divisible by its multiplicity")
    dims = [d // mult for d in piece.dims]
    rx, ry = _rank_profile(piece)
    if any(v % mult for v in rx + ry):
        raise DecompositionError("isotypic block ranks are not divisible by its multiplicity")
    rx = [v // mult for v in rx]
    ry = [v // mult for v in ry]
    soc = socle_filtration(piece).divided(mult)
    top = top_filtration(piece).divided(mult)
    if soc is None or top is None:
        raise DecompositionError("isotypic block socle layers are not divisible")

    def matches(candidate_rep: QuiverRep) -> bool:
        return find_isomorphism(direct_sum([candidate_rep] * mult), piece, seed) is not None

    for s in candidate_strings(n, dims, rx, ry):
        if predicted_socle(s) != soc or predicted_socle(reverse(s)) != top:
            continue
        if matches(build(s)):
            return s
    g = 0
    for d in dims:
        g = gcd(g, d)
    for r in range(1, g + 1):
        if g % r or any(v % r for v in rx + ry):
            continue
        counts = [d // r for d in dims]
        for poly in candidate_polygons(n, counts, [v // r for v in rx], [v // r for v in ry]):
            if predicted_socle(poly, r) != soc:
                continue
            for lam in band_eigenvalues(piece, poly):
                if lam == 0:
                    continue
                b = BandDescriptor(poly, lam, r)
                if matches(build(b)):
                    return b
    raise DecompositionError(f"no string or band model for a block with dims {tuple(dims)} x{mult}")


def decompose(M: QuiverRep, seed: int = 0) -> Decomposition:
    """Multiset of canonical summand descriptors, certified by an isomorphism."""
    rng = random.Random(seed)
    result = Decomposition()
    for piece in split_isotypic(M, rng):
        d = identify(piece.rep, piece.mult, seed)
        result.summands[d] += piece.mult
    rebuilt = result.rebuild(M.n)
    if find_isomorphism(rebuilt, M, seed) is None:
        raise DecompositionError("rebuilt direct sum is not isomorphic to the input")
    return result
