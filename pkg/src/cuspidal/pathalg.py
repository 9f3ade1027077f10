"""Graded path algebra of Q_n modulo ``xy = yx = 0`` and its Hilbert series."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .strings import pi1, pi2

Series = list  # truncated power series: coefficient list, degree 0 first


@dataclass(frozen=True)
class Arrow:
    name: str
    letter: str  # "x" or "y"
    source: int
    target: int


def arrow_name(n: int, letter: str, source: int) -> str:
    target = pi1(n, source) if letter == "x" else pi2(n, source)
    if target == source:
        return "xi" if source == 1 and letter == "y" else "eta"
    if source < target:
        return f"phi_{source}"
    return f"psi_{target}"


def arrows(n: int) -> list[Arrow]:
    out = []
    for i in range(1, n + 1):
        for letter, p in (("x", pi1), ("y", pi2)):
            out.append(Arrow(arrow_name(n, letter, i), letter, i, p(n, i)))
    return out


@dataclass(frozen=True)
class Path:
    source: int
    target: int
    arrows: tuple[str, ...]
    letter: str | None  # None for idempotents


@dataclass(frozen=True)
class PathAlgebraLayer:
    n: int
    degree: int
    basis: tuple[Path, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def count(self, source: int, target: int) -> int:
        return sum(1 for p in self.basis if p.source == source and p.target == target)


def path_algebra_layer(n: int, m: int) -> PathAlgebraLayer:
    """Nonzero paths of length ``m``; any ``x`` next to a ``y`` is killed by the relations."""
    if n < 1 or m < 0:
        raise ValueError("need n >= 1 and m >= 0")
    arr = arrows(n)
    out: list[Path] = []
    if m == 0:
        out = [Path(i, i, (), None) for i in range(1, n + 1)]
        return PathAlgebraLayer(n, 0, tuple(out))

    def rec(start: int, cur: int, names: list[str], letter: str | None):
        if len(names) == m:
            out.append(Path(start, cur, tuple(names), letter))
            return
        for a in arr:
            if a.source != cur:
                continue
            if letter is not None and a.letter != letter:
                continue
            names.append(a.name)
            rec(start, a.target, names, a.letter)
            names.pop()

    for i in range(1, n + 1):
        rec(i, i, [], None)
    return PathAlgebraLayer(n, m, tuple(out))


def counted_hilbert_matrix(n: int, cutoff: int) -> list[list[Series]]:
    """``b[i][j][m]`` = number of nonzero paths of length m from j+1 to i+1."""
    b = [[[0] * (cutoff + 1) for _ in range(n)] for _ in range(n)]
    for m in range(cutoff + 1):
        for p in path_algebra_layer(n, m).basis:
            b[p.target - 1][p.source - 1][m] += 1
    return b


# ----------------------------------------------------------- series helpers


def series_mul(a: Sequence, b: Sequence, cutoff: int) -> Series:
    out = [Fraction(0)] * (cutoff + 1)
    for i, u in enumerate(a[:cutoff + 1]):
        if u:
            for j, v in enumerate(b[:cutoff + 1 - i]):
                if v:
                    out[i + j] += u * v
    return out


def series_div(num: Sequence, den: Sequence, cutoff: int) -> Series:
    """Power series quotient; ``den[0]`` must be nonzero."""
    num = list(num) + [0] * (cutoff + 1)
    den = list(den) + [0] * (cutoff + 1)
    d0 = Fraction(den[0])
    if d0 == 0:
        raise ZeroDivisionError("constant term of denominator vanishes")
    out = [Fraction(0)] * (cutoff + 1)
    for k in range(cutoff + 1):
        s = Fraction(num[k]) - sum((den[j] * out[k - j] for j in range(1, k + 1)), Fraction(0))
        out[k] = s / d0
    return out


def poly(*terms: tuple[int, int]) -> list[int]:
    """Polynomial from ``(coefficient, exponent)`` pairs."""
    deg = max(e for _, e in terms)
    out = [0] * (deg + 1)
    for c, e in terms:
        out[e] += c
    return out


def closed_hilbert_matrix(n: int, cutoff: int) -> list[list[Series]]:
    """Closed-form Hilbert series matrix of the path algebra modulo relations."""
    one_minus_t2 = poly((1, 0), (-1, 2))
    out = [[[Fraction(0)] * (cutoff + 1) for _ in range(n)] for _ in range(n)]
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if abs(i - j) > 1:
                continue
            if abs(i - j) == 1:
                num = poly((1, 1))
            elif n == 1:
                # two loops at a single vertex
                out[0][0] = series_div(poly((1, 0), (1, 1)), poly((1, 0), (-1, 1)), cutoff)
                continue
            elif i in (1, n):
                num = poly((1, 0), (1, 1), (1, 2))
            else:
                num = poly((1, 0), (1, 2))
            out[i - 1][j - 1] = series_div(num, one_minus_t2, cutoff)
    return out


def closed_dual_matrix(n: int, cutoff: int) -> list[list[Series]]:
    """Closed-form Hilbert series matrix of the quadratic dual algebra."""
    out = [[None] * n for _ in range(n)]
    den = poly((1, 0), (-1, 2 * n))
    for i in range(1, n + 1):
        for j in range(i, n + 1):
            num = series_mul(poly((1, 0), (1, 2 * i - 1)), poly((1, 0), (1, 2 * (n - j) + 1)), cutoff)
            num = [0] * (j - i) + list(num)
            s = series_div(num[:cutoff + 1], den, cutoff)
            out[i - 1][j - 1] = s
            out[j - 1][i - 1] = s
    return out


def negate_variable(s: Series) -> Series:
    return [c if k % 2 == 0 else -c for k, c in enumerate(s)]


def matrix_series_product(A, B, cutoff: int) -> list[list[Series]]:
    n = len(A)
    out = [[[Fraction(0)] * (cutoff + 1) for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            acc = [Fraction(0)] * (cutoff + 1)
            for k in range(n):
                prod = series_mul(A[i][k], B[k][j], cutoff)
                acc = [u + v for u, v in zip(acc, prod)]
            out[i][j] = acc
    return out


@dataclass
class SeriesCheck:
    ok: bool
    mismatches: list[tuple[int, int, int, Fraction, Fraction]]  # i, j, degree, got, expected


def hilbert_check(n: int, cutoff: int) -> SeriesCheck:
    """Counted path dimensions against the closed-form series."""
    got = counted_hilbert_matrix(n, cutoff)
    want = closed_hilbert_matrix(n, cutoff)
    bad = []
    for i in range(n):
        for j in range(n):
            for m in range(cutoff + 1):
                if got[i][j][m] != want[i][j][m]:
                    bad.append((i + 1, j + 1, m, Fraction(got[i][j][m]), want[i][j][m]))
    return SeriesCheck(not bad, bad)


def koszul_check(n: int, cutoff: int, perturb: tuple[int, int, int, int] | None = None) -> SeriesCheck:
    """Verify ``B(t) C(-t)^T = I`` through degree ``cutoff``.

    ``B`` comes from counting paths and ``C`` from the closed form for the
    dual.  ``perturb=(i, j, degree, delta)`` shifts one coefficient of ``B``
    (1-based indices) so the check can be seen to fail.
    """
    B = counted_hilbert_matrix(n, cutoff)
    B = [[[Fraction(c) for c in s] for s in row] for row in B]
    if perturb is not None:
        i, j, d, delta = perturb
        B[i - 1][j - 1][d] += delta
    C = closed_dual_matrix(n, cutoff)
    Ct = [[negate_variable(C[j][i]) for j in range(n)] for i in range(n)]
    P = matrix_series_product(B, Ct, cutoff)
    bad = []
    for i in range(n):
        for j in range(n):
            for m in range(cutoff + 1):
                want = Fraction(int(i == j and m == 0))
                if P[i][j][m] != want:
                    bad.append((i + 1, j + 1, m, P[i][j][m], want))
    return SeriesCheck(not bad, bad)
