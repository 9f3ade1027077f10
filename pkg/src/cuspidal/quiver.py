"""Finite-dimensional representations of Q_n with ``xy = yx = 0`` and nilpotent x, y.

A representation stores one vector space per label and, for each label
``i``, the blocks ``x[i]: V_i -> V_{pi1(i)}`` and ``y[i]: V_i -> V_{pi2(i)}``.
Labels are 1-based in the public API; internally lists are 0-based.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .linalg import (Mat, SparseEliminator, block_diag, det, dense_row, inverse,
                     nullspace, rank, rref, solve, vstack)
from .strings import (R, BandDescriptor, GradedPolygon, GradedString, SocleSeries,
                      pi1, pi2)


class RepresentationError(ValueError):
    """Base class for malformed representations."""


class ShapeError(RepresentationError):
    pass


class RelationError(RepresentationError):
    pass


class NilpotencyError(RepresentationError):
    pass


class NotASubmodule(RepresentationError):
    pass


class QuiverRep:
    """Representation of Q_n by exact rational matrices."""

    def __init__(self, n: int, dims: Sequence[int], x: Sequence[Mat], y: Sequence[Mat], check: bool = True):
        self.n = n
        self.dims = tuple(int(d) for d in dims)
        self.x = list(x)
        self.y = list(y)
        if check:
            self.validate()

    # label helpers (0-based)
    def p1(self, i: int) -> int:
        return pi1(self.n, i + 1) - 1

    def p2(self, i: int) -> int:
        return pi2(self.n, i + 1) - 1

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def validate(self):
        n = self.n
        if len(self.dims) != n or len(self.x) != n or len(self.y) != n:
            raise ShapeError("need one space and one x, y block per label")
        if any(d < 0 for d in self.dims):
            raise ShapeError("negative dimension")
        for i in range(n):
            if self.x[i].shape != (self.dims[self.p1(i)], self.dims[i]):
                raise ShapeError(f"x block at label {i + 1} has shape {self.x[i].shape}")
            if self.y[i].shape != (self.dims[self.p2(i)], self.dims[i]):
                raise ShapeError(f"y block at label {i + 1} has shape {self.y[i].shape}")
        for i in range(n):
            if not (self.x[self.p2(i)] @ self.y[i]).is_zero():
                raise RelationError(f"xy != 0 on label {i + 1}")
            if not (self.y[self.p1(i)] @ self.x[i]).is_zero():
                raise RelationError(f"yx != 0 on label {i + 1}")
        for blocks, name, p in ((self.x, "x", self.p1), (self.y, "y", self.p2)):
            for i in range(n):
                sq = blocks[p(i)] @ blocks[i] if p(i) != i else blocks[i]
                acc = sq
                for _ in range(self.dims[i]):
                    if acc.is_zero():
                        break
                    acc = acc @ sq
                if not acc.is_zero():
                    raise NilpotencyError(f"{name} is not nilpotent on label {i + 1}")

    def __repr__(self) -> str:
        return f"QuiverRep(n={self.n}, dims={self.dims})"

    def blocks(self):
        """Yield ``(name, source, target, matrix)`` for every arrow block."""
        for i in range(self.n):
            yield "x", i, self.p1(i), self.x[i]
            yield "y", i, self.p2(i), self.y[i]

    def same_matrices(self, other: "QuiverRep") -> bool:
        return (self.n == other.n and self.dims == other.dims
                and self.x == other.x and self.y == other.y)


def zero_rep(n: int) -> QuiverRep:
    return QuiverRep(n, [0] * n, [Mat.zeros(0, 0)] * n, [Mat.zeros(0, 0)] * n)


def _empty_blocks(n: int, dims: Sequence[int]):
    x = [Mat.zeros(dims[pi1(n, i + 1) - 1], dims[i]) for i in range(n)]
    y = [Mat.zeros(dims[pi2(n, i + 1) - 1], dims[i]) for i in range(n)]
    return x, y


def _positions(labels: Sequence[int], width: int = 1) -> list[int]:
    """Index of each position's first basis vector inside its label space."""
    seen: dict[int, int] = {}
    out = []
    for a in labels:
        out.append(seen.get(a, 0))
        seen[a] = seen.get(a, 0) + width
    return out


def build_string_rep(s: GradedString) -> QuiverRep:
    n = s.n
    dims = list(s.dims)
    x, y = _empty_blocks(n, dims)
    idx = _positions(s.labels)
    for i, d in enumerate(s.dirs):
        a, b = s.labels[i] - 1, s.labels[i + 1] - 1
        if d == R:
            x[a].rows[idx[i + 1]][idx[i]] = Fraction(1)
        else:
            y[b].rows[idx[i]][idx[i + 1]] = Fraction(1)
    return QuiverRep(n, dims, x, y)


def jordan_block(lam, r: int) -> Mat:
    m = Mat.scalar(r, lam)
    for i in range(r - 1):
        m.rows[i][i + 1] = Fraction(1)
    return m


def build_polygon_rep(p: GradedPolygon, lam=1, r: int = 1, jordan_arrow: int = 0) -> QuiverRep:
    """Band-shaped representation of any polygon (symmetric ones allowed).

    Each vertex carries ``Q^r``.  Going once around, the clockwise maps
    (``x`` on R edges, ``y^{-1}`` on L edges) are identities except on
    ``jordan_arrow`` which carries ``J_r(lam)``.
    """
    n, k = p.n, len(p)
    dims = [r * d for d in p.dims]
    x, y = _empty_blocks(n, dims)
    off = _positions(p.labels, r)
    J = jordan_block(lam, r)
    Jinv = inverse(J)
    for e in range(k):
        a, b = p.labels[e] - 1, p.labels[(e + 1) % k] - 1
        oa, ob = off[e], off[(e + 1) % k]
        if e == jordan_arrow % k:
            mat = J if p.dirs[e] == R else Jinv
        else:
            mat = Mat.identity(r)
        for s in range(r):
            for t in range(r):
                v = mat.rows[s][t]
                if not v:
                    continue
                if p.dirs[e] == R:
                    x[a].rows[ob + s][oa + t] = v
                else:
                    y[b].rows[oa + s][ob + t] = v
    return QuiverRep(n, dims, x, y)


def build_band_rep(b: BandDescriptor, jordan_arrow: int = 0) -> QuiverRep:
    return build_polygon_rep(b.polygon, b.lam, b.r, jordan_arrow)


def build(desc) -> QuiverRep:
    if isinstance(desc, GradedString):
        return build_string_rep(desc)
    if isinstance(desc, BandDescriptor):
        return build_band_rep(desc)
    if isinstance(desc, GradedPolygon):
        return build_polygon_rep(desc)
    raise TypeError(f"cannot build {type(desc).__name__}")


def polygon_monodromy(rep: QuiverRep, p: GradedPolygon, r: int = 1) -> Mat:
    """Product of the clockwise maps around a polygon-shaped representation."""
    k = len(p)
    off = _positions(p.labels, r)
    acc = Mat.identity(r)
    for e in range(k):
        a, b = p.labels[e] - 1, p.labels[(e + 1) % k] - 1
        oa, ob = off[e], off[(e + 1) % k]
        if p.dirs[e] == R:
            d = Mat([[rep.x[a].rows[ob + s][oa + t] for t in range(r)] for s in range(r)], r)
        else:
            d = inverse(Mat([[rep.y[b].rows[oa + s][ob + t] for t in range(r)] for s in range(r)], r))
        acc = d @ acc
    return acc


# ------------------------------------------------------------ basic algebra


def direct_sum(reps: Sequence[QuiverRep], n: int | None = None) -> QuiverRep:
    if not reps:
        if n is None:
            raise ValueError("n required for an empty direct sum")
        return zero_rep(n)
    n = reps[0].n
    if any(m.n != n for m in reps):
        raise ShapeError("direct sum of representations of different quivers")
    dims = [sum(m.dims[i] for m in reps) for i in range(n)]
    x = [block_diag([m.x[i] for m in reps]) for i in range(n)]
    y = [block_diag([m.y[i] for m in reps]) for i in range(n)]
    return QuiverRep(n, dims, x, y, check=False)


def change_basis(m: QuiverRep, P: Sequence[Mat]) -> QuiverRep:
    """Transport ``m`` along invertible per-label matrices ``P``."""
    Pinv = [inverse(p) for p in P]
    x = [P[m.p1(i)] @ m.x[i] @ Pinv[i] for i in range(m.n)]
    y = [P[m.p2(i)] @ m.y[i] @ Pinv[i] for i in range(m.n)]
    return QuiverRep(m.n, m.dims, x, y, check=False)


def random_basis_change(dims: Sequence[int], rng: random.Random, mixes: int = 2) -> list[Mat]:
    """Sparse invertible matrices: a permutation plus a few elementary operations."""
    out = []
    for d in dims:
        perm = list(range(d))
        rng.shuffle(perm)
        P = Mat.zeros(d, d)
        for i, j in enumerate(perm):
            P.rows[i][j] = Fraction(1)
        for _ in range(mixes if d > 1 else 0):
            a, b = rng.sample(range(d), 2)
            c = Fraction(rng.choice([-2, -1, 1, 2]))
            P.rows[a] = [u + c * v for u, v in zip(P.rows[a], P.rows[b])]
        out.append(P)
    return out


def scramble(m: QuiverRep, seed: int = 0, mixes: int = 2) -> QuiverRep:
    return change_basis(m, random_basis_change(m.dims, random.Random(seed), mixes))


def dual(m: QuiverRep) -> QuiverRep:
    """Dual representation: ``x`` on ``V_i^*`` is the transpose of ``x`` into ``V_i``."""
    x = [m.x[m.p1(i)].T for i in range(m.n)]
    y = [m.y[m.p2(i)].T for i in range(m.n)]
    return QuiverRep(m.n, m.dims, x, y, check=False)


# ------------------------------------------------------------------ Hom spaces


@dataclass
class HomSpace:
    source: QuiverRep
    target: QuiverRep
    basis: list[list[Mat]]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def combine(self, coeffs: Sequence) -> list[Mat]:
        out = [Mat.zeros(self.target.dims[i], self.source.dims[i]) for i in range(self.source.n)]
        for c, f in zip(coeffs, self.basis):
            if c:
                out = [o + b.scale(c) for o, b in zip(out, f)]
        return out


def _sparse_cols(m: Mat) -> list[list[tuple[int, Fraction]]]:
    cols: list[list[tuple[int, Fraction]]] = [[] for _ in range(m.ncols)]
    for i, r in enumerate(m.rows):
        for j, v in enumerate(r):
            if v:
                cols[j].append((i, v))
    return cols


def _sparse_rows(m: Mat) -> list[list[tuple[int, Fraction]]]:
    return [[(j, v) for j, v in enumerate(r) if v] for r in m.rows]


def hom_equations(M: QuiverRep, N: QuiverRep):
    """Sparse linear equations for graded maps ``M -> N`` commuting with x and y."""
    if M.n != N.n:
        raise ShapeError("Hom between representations of different quivers")
    n = M.n
    offs = []
    o = 0
    for i in range(n):
        offs.append(o)
        o += N.dims[i] * M.dims[i]
    nvars = o

    def var(a: int, r: int, c: int) -> int:
        return offs[a] + r * M.dims[a] + c

    rows = []
    for name in ("x", "y"):
        for i in range(n):
            j = M.p1(i) if name == "x" else M.p2(i)
            bm = (M.x if name == "x" else M.y)[i]
            bn = (N.x if name == "x" else N.y)[i]
            mcols = _sparse_cols(bm)
            nrows_ = _sparse_rows(bn)
            # f_j @ bm - bn @ f_i = 0, entry (r, c)
            for r in range(N.dims[j]):
                for c in range(M.dims[i]):
                    eq: dict[int, Fraction] = {}
                    for s, v in mcols[c]:
                        k = var(j, r, s)
                        eq[k] = eq.get(k, 0) + v
                    for s, v in nrows_[r]:
                        k = var(i, s, c)
                        eq[k] = eq.get(k, 0) - v
                    eq = {k: v for k, v in eq.items() if v}
                    if eq:
                        rows.append(eq)
    return rows, nvars, offs


def hom_space(M: QuiverRep, N: QuiverRep) -> HomSpace:
    rows, nvars, offs = hom_equations(M, N)
    el = SparseEliminator(nvars)
    for r in rows:
        el.add(r)
    basis = []
    for v in el.nullspace():
        dv = dense_row(v, nvars)
        maps = []
        for a in range(M.n):
            rr, cc = N.dims[a], M.dims[a]
            chunk = dv[offs[a]:offs[a] + rr * cc]
            maps.append(Mat([chunk[t * cc:(t + 1) * cc] for t in range(rr)], cc))
        basis.append(maps)
    return HomSpace(M, N, basis)


def is_homomorphism(M: QuiverRep, N: QuiverRep, f: Sequence[Mat]) -> bool:
    for i in range(M.n):
        if f[M.p1(i)] @ M.x[i] != N.x[i] @ f[i]:
            return False
        if f[M.p2(i)] @ M.y[i] != N.y[i] @ f[i]:
            return False
    return True


def _cheap_invariants(M: QuiverRep) -> tuple:
    return (M.dims, tuple(rank(b) for b in M.x), tuple(rank(b) for b in M.y))


def is_isomorphic(M: QuiverRep, N: QuiverRep, seed: int = 0, trials: int = 4) -> bool:
    """Decide ``M ~ N``.

    A positive answer is certified by an explicit invertible homomorphism.  A
    negative answer is probabilistic: ``trials`` random integer combinations
    of a Hom basis were all singular (Schwartz-Zippel with coefficients drawn
    from a range of size 2**20).
    """
    return find_isomorphism(M, N, seed, trials) is not None


def find_isomorphism(M: QuiverRep, N: QuiverRep, seed: int = 0, trials: int = 4) -> list[Mat] | None:
    if M.n != N.n or _cheap_invariants(M) != _cheap_invariants(N):
        return None
    if M.total_dim == 0:
        return []
    H = hom_space(M, N)
    if H.dim == 0:
        return None
    rng = random.Random(seed)
    for _ in range(trials):
        coeffs = [rng.randint(-(1 << 19), 1 << 19) for _ in range(H.dim)]
        f = H.combine(coeffs)
        if all(det(b) != 0 for b in f):
            return f
    return None


# --------------------------------------------------- subspaces and quotients


def _rref_basis(vectors: Sequence[Sequence[Fraction]], dim: int) -> Mat:
    if not vectors:
        return Mat.zeros(0, dim)
    return rref(Mat([list(v) for v in vectors], dim))[0]


def _pivots(basis: Mat) -> list[int]:
    out = []
    for r in basis.rows:
        out.append(next(j for j, v in enumerate(r) if v))
    return out


def _coords_in(basis: Mat, piv: list[int], vec: Sequence[Fraction]) -> list[Fraction]:
    """Coordinates of ``vec`` in an RREF basis; raises if outside the span."""
    coords = [vec[p] for p in piv]
    resid = list(vec)
    for c, row in zip(coords, basis.rows):
        if c:
            for j, v in enumerate(row):
                if v:
                    resid[j] -= c * v
    if any(resid):
        raise NotASubmodule("vector outside the subspace")
    return coords


def _reduce_mod(basis: Mat, piv: list[int], vec: Sequence[Fraction]) -> list[Fraction]:
    resid = list(vec)
    for p, row in zip(piv, basis.rows):
        c = resid[p]
        if c:
            for j, v in enumerate(row):
                if v:
                    resid[j] -= c * v
    return resid


def normalize_subspaces(M: QuiverRep, spaces: Sequence) -> list[Mat]:
    out = []
    for i, s in enumerate(spaces):
        if isinstance(s, Mat):
            vecs = s.rows
        else:
            vecs = list(s)
        out.append(_rref_basis(vecs, M.dims[i]))
    return out


def is_submodule(M: QuiverRep, spaces: Sequence[Mat]) -> bool:
    S = normalize_subspaces(M, spaces)
    piv = [_pivots(b) for b in S]
    for name, i, j, blk in M.blocks():
        for v in S[i].rows:
            try:
                _coords_in(S[j], piv[j], blk.apply(v))
            except NotASubmodule:
                return False
    return True


def restrict(M: QuiverRep, spaces: Sequence) -> QuiverRep:
    """The subrepresentation spanned by per-label subspaces (must be invariant)."""
    S = normalize_subspaces(M, spaces)
    piv = [_pivots(b) for b in S]
    dims = [b.nrows for b in S]
    x, y = _empty_blocks(M.n, dims)
    for name, i, j, blk in M.blocks():
        target = x if name == "x" else y
        cols = [_coords_in(S[j], piv[j], blk.apply(v)) for v in S[i].rows]
        target[i] = Mat([list(r) for r in zip(*cols)], dims[i]) if cols and dims[j] else Mat.zeros(dims[j], dims[i])
    return QuiverRep(M.n, dims, x, y, check=False)


def quotient(M: QuiverRep, spaces: Sequence) -> QuiverRep:
    """Quotient by an invariant graded subspace.

    The complement basis is the set of standard vectors at the non-pivot
    columns of the reduced echelon basis of the subspace.
    """
    S = normalize_subspaces(M, spaces)
    if not is_submodule(M, S):
        raise NotASubmodule("quotient by a non-invariant subspace")
    piv = [_pivots(b) for b in S]
    keep = [[c for c in range(M.dims[i]) if c not in set(piv[i])] for i in range(M.n)]
    dims = [len(k) for k in keep]
    x, y = _empty_blocks(M.n, dims)
    for name, i, j, blk in M.blocks():
        target = x if name == "x" else y
        m = Mat.zeros(dims[j], dims[i])
        for t, c in enumerate(keep[i]):
            img = [blk.rows[r][c] for r in range(blk.nrows)]
            red = _reduce_mod(S[j], piv[j], img)
            for s, cc in enumerate(keep[j]):
                m.rows[s][t] = red[cc]
        target[i] = m
    return QuiverRep(M.n, dims, x, y, check=False)


def socle_spaces(M: QuiverRep) -> list[Mat]:
    out = []
    for i in range(M.n):
        stacked = vstack([M.x[i], M.y[i]], ncols=M.dims[i]) if M.dims[i] else Mat.zeros(0, 0)
        out.append(nullspace(stacked) if M.dims[i] else Mat.zeros(0, 0))
    return out


def socle_filtration(M: QuiverRep) -> SocleSeries:
    """Dimensions of the successive socle layers, as label multisets."""
    counts = []
    cur = M
    while cur.total_dim:
        soc = socle_spaces(cur)
        c = [b.nrows for b in soc]
        if not any(c):
            raise NilpotencyError("socle vanished on a nonzero module")
        counts.append(tuple(c))
        cur = quotient(cur, soc)
    return SocleSeries.from_counts(M.n, counts)


def top_filtration(M: QuiverRep) -> SocleSeries:
    return socle_filtration(dual(M))


# ------------------------------------------------------------ constructions


def _as_vector(dim: int, v) -> list[Fraction]:
    v = [Fraction(a) for a in v]
    if len(v) != dim:
        raise ShapeError("vector has the wrong length")
    return v


def glue(M: QuiverRep, N: QuiverRep, j: int, vM=None, vN=None) -> QuiverRep:
    """Identify a simple ``L_j`` in the socle of ``M`` with one in the socle of ``N``.

    ``vM`` and ``vN`` are socle vectors at label ``j`` (1-based).  When
    omitted, the socle at ``j`` must be one-dimensional.
    """
    if M.n != N.n:
        raise ShapeError("glue of representations of different quivers")
    a = j - 1
    vecs = []
    for rep, v in ((M, vM), (N, vN)):
        soc = socle_spaces(rep)[a]
        if v is None:
            if soc.nrows != 1:
                raise NotASubmodule(f"socle at label {j} has dimension {soc.nrows}; pass a vector")
            v = soc.rows[0]
        v = _as_vector(rep.dims[a], v)
        if not any(v):
            raise NotASubmodule("gluing vector is zero")
        if any(rep.x[a].apply(v)) or any(rep.y[a].apply(v)):
            raise NotASubmodule(f"vector is not in the socle at label {j}")
        vecs.append(v)
    S = direct_sum([M, N])
    spaces: list = [[] for _ in range(M.n)]
    spaces[a] = [vecs[0] + vecs[1]]
    return quotient(S, spaces)


def dual_glue(M: QuiverRep, N: QuiverRep, j: int, fM=None, fN=None) -> QuiverRep:
    """Gluing along the top: dual of the socle gluing of the duals."""
    return dual(glue(dual(M), dual(N), j, fM, fN))


def polymerize(A: QuiverRep, A1: Sequence[tuple[int, Sequence]], A2: Sequence[tuple[int, Sequence]],
               lam, p: int) -> QuiverRep:
    """Quotient of ``A^p`` that closes ``A`` up along an isomorphism ``A1 -> A2``.

    ``A1`` and ``A2`` are bases given as ``(label, vector)`` pairs and the
    isomorphism sends the t-th vector of ``A1`` to the t-th vector of ``A2``.
    The relations identify ``sigma(a_c)`` with ``lam*a_c + a_{c-1}``.
    """
    lam = Fraction(lam)
    if p < 1:
        raise ValueError("p must be positive")
    if len(A1) != len(A2):
        raise ShapeError("A1 and A2 have different dimensions")
    for (la, _), (lb, _) in zip(A1, A2):
        if la != lb:
            raise ShapeError("sigma must preserve labels")
    for basis in (A1, A2):
        spaces: list = [[] for _ in range(A.n)]
        for lab, v in basis:
            spaces[lab - 1].append(_as_vector(A.dims[lab - 1], v))
        if sum(normalize_subspaces(A, spaces)[i].nrows for i in range(A.n)) != len(basis):
            raise ShapeError("basis vectors are linearly dependent")
        if not is_submodule(A, spaces):
            raise NotASubmodule("span is not a subrepresentation")
    if not _sigma_is_hom(A, A1, A2):
        raise NotASubmodule("basis correspondence does not commute with x and y")
    big = direct_sum([A] * p)
    gens: list = [[] for _ in range(A.n)]
    for c in range(p):
        for (lab, a1), (_, a2) in zip(A1, A2):
            d = A.dims[lab - 1]
            vec = [Fraction(0)] * (d * p)
            for t in range(d):
                vec[c * d + t] = Fraction(a2[t]) - lam * Fraction(a1[t])
                if c + 1 < p:
                    vec[(c + 1) * d + t] = -Fraction(a1[t])
            gens[lab - 1].append(vec)
    return quotient(big, gens)


def _sigma_is_hom(A: QuiverRep, A1, A2) -> bool:
    def coords(basis):
        by_label: dict[int, list[int]] = {}
        for t, (lab, _) in enumerate(basis):
            by_label.setdefault(lab - 1, []).append(t)
        spaces = [Mat([list(map(Fraction, basis[t][1])) for t in by_label.get(i, [])], A.dims[i])
                  for i in range(A.n)]
        out = []
        for name, i, j, blk in A.blocks():
            for t in by_label.get(i, []):
                img = blk.apply([Fraction(v) for v in basis[t][1]])
                sp = spaces[j]
                if sp.nrows == 0:
                    out.append(())
                    continue
                out.append(tuple(solve(sp.T, img)))
        return out

    return coords(A1) == coords(A2)


# -------------------------------------------------------------- serialization


def to_json(M: QuiverRep) -> str:
    def entries(blocks):
        out = []
        for i, b in enumerate(blocks):
            for r, row in enumerate(b.rows):
                for c, v in enumerate(row):
                    if v:
                        out.append([i + 1, r, c, str(v)])
        return out

    payload = {"n": M.n, "dims": list(M.dims), "x": entries(M.x), "y": entries(M.y)}
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def from_json(text: str) -> QuiverRep:
    try:
        data = json.loads(text)
        n = int(data["n"])
        dims = [int(d) for d in data["dims"]]
        xe, ye = data["x"], data["y"]
    except (ValueError, KeyError, TypeError) as exc:
        raise RepresentationError(f"malformed representation document: {exc}") from exc
    if len(dims) != n:
        raise ShapeError("dims length differs from n")
    x, y = _empty_blocks(n, dims)
    for blocks, ents in ((x, xe), (y, ye)):
        for e in ents:
            try:
                i, r, c, v = int(e[0]), int(e[1]), int(e[2]), Fraction(e[3])
                if not (1 <= i <= n and 0 <= r < blocks[i - 1].nrows and 0 <= c < blocks[i - 1].ncols):
                    raise IndexError("entry outside block")
                blocks[i - 1].rows[r][c] = v
            except (ValueError, IndexError, TypeError, ZeroDivisionError) as exc:
                raise ShapeError(f"bad matrix entry {e!r}") from exc
    return QuiverRep(n, dims, x, y)
