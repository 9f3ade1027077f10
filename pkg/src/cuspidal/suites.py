"""Verification suites shared by the command line and the acceptance tests.

Each suite returns a list of ``Record``s; a record renders as one
``PASS key=value ...`` or ``FAIL key=value ...`` line.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .cohomology import GENERALIZED, RELATIVE, h1_dimension, log_cocycle, check_cocycle, self_extension_nontrivial
from .pathalg import closed_hilbert_matrix, counted_hilbert_matrix, koszul_check
from .weights import (ExponentVector, WindowError, bracket_holds, build_functions, casimir_projection_check,
                      check_cuspidal, de_rham_report, highest_weight_casimir, log_casimir_report,
                      log_extend, scalar_value, casimir_matrix, z_formula, z_grading)

SUITES = ("cuspidal", "derham", "ext", "hilbert", "casimir", "koszul")


@dataclass
class Record:
    ok: bool
    fields: dict = field(default_factory=dict)

    def line(self) -> str:
        body = " ".join(f"{k}={_fmt(v)}" for k, v in self.fields.items())
        return f"{'PASS' if self.ok else 'FAIL'} {body}".rstrip()


def _fmt(v) -> str:
    if isinstance(v, (tuple, list)):
        return ",".join(_fmt(a) for a in v)
    if isinstance(v, bool):
        return str(v).lower()
    return str(v)


DEFAULT_MU = {1: "1/2,-1/2", 2: "1/3,1/3,-2/3"}


def default_mu(n: int) -> ExponentVector:
    """Cuspidal exponents with ``|mu| = 0``; beyond n = 2 ``1/2, 1/3, ...`` and a balancing last entry."""
    if n in DEFAULT_MU:
        return ExponentVector.parse(DEFAULT_MU[n])
    head = [Fraction(1, k + 2) for k in range(n)]
    return ExponentVector(tuple(head + [-sum(head, Fraction(0))]))


def suite_cuspidal(mu: ExponentVector, radius: int) -> list[Record]:
    M = build_functions(mu, radius)
    rep = check_cuspidal(M)
    f = {"suite": "cuspidal", "mu": str(mu), "radius": radius, "checked": rep.checked}
    if not rep.ok:
        i, j, d = rep.failures[0]
        f.update(failures=len(rep.failures), first=f"E_{i}{j}@{','.join(map(str, d))}")
    out = [Record(rep.ok, f)]
    n = mu.n
    pairs = [((i, j), (k, l)) for i in range(n + 1) for j in range(n + 1)
             for k in range(n + 1) for l in range(n + 1)]
    bad = sum(1 for a, b in pairs if not bracket_holds(M, a, b))
    out.append(Record(bad == 0, {"suite": "cuspidal", "brackets": len(pairs), "failed": bad}))
    return out


def suite_derham(mu: ExponentVector, radius: int) -> list[Record]:
    rep = de_rham_report(mu, radius)
    base = {"suite": "derham", "mu": str(mu), "radius": radius}
    return [
        Record(rep.squares_vanish, {**base, "d_squared_zero": rep.squares_vanish}),
        Record(rep.cartan_formula, {**base, "cartan_formula": rep.cartan_formula}),
        Record(rep.exact, {**base, "exact": rep.exact, "bad_weights": len(rep.bad_weights)}),
        Record(True, {**base, "fiber_dims": rep.dims}),
    ]


def suite_ext(mu: ExponentVector, radius: int) -> list[Record]:
    """Window H^1 at radii ``3..radius``; expected 1 (relative) and n+1 (generalized)."""
    n = mu.n
    radii = list(range(3, radius + 1)) or [radius]
    out = []
    for mode, want in ((RELATIVE, 1), (GENERALIZED, n + 1)):
        rep = h1_dimension(lambda r: build_functions(mu, r), radii, mode)
        ok = all(h == want for h in rep.dim_H1) and rep.stable and rep.boundaries_are_cocycles
        out.append(Record(ok, {f"dim_H1_{mode}": rep.dim_H1[-1] if len(set(rep.dim_H1)) == 1 else rep.dim_H1,
                               "radii": f"{radii[0]}..{radii[-1]}", "stable": rep.stable,
                               "certified": n == 1}))
    M = build_functions(mu, radius)
    c = log_cocycle(M)
    cc = check_cocycle(c).ok
    out.append(Record(cc, {"log_cocycle": cc}))
    if mu.norm == 0:
        nt = self_extension_nontrivial(c)
        out.append(Record(nt, {"self_extension_nontrivial": nt}))
    return out


def _series_text(s, cutoff: int) -> str:
    return ",".join(str(Fraction(v)) for v in s[:cutoff + 1])


def suite_hilbert(n: int, cutoff: int) -> list[Record]:
    got = counted_hilbert_matrix(n, cutoff)
    want = closed_hilbert_matrix(n, cutoff)
    out = []
    for i in range(n):
        for j in range(n):
            ok = [Fraction(v) for v in got[i][j]] == list(want[i][j])
            out.append(Record(ok, {"entry": f"b_{i + 1}{j + 1}", "n": n, "cutoff": cutoff,
                                   "series": _series_text(got[i][j], cutoff)}))
    return out


def suite_koszul(n: int, cutoff: int) -> list[Record]:
    rep = koszul_check(n, cutoff)
    return [Record(rep.ok, {"koszul_identity": rep.ok, "n": n, "cutoff": cutoff, "mismatches": len(rep.mismatches)})]


def suite_casimir(mu: ExponentVector, radius: int, log_degree: int = 1) -> list[Record]:
    n = mu.n
    out = []
    M = build_functions(mu, radius)
    val = scalar_value(casimir_matrix(M))
    want = highest_weight_casimir([mu.norm] + [Fraction(0)] * n)
    out.append(Record(val == want, {"casimir_scalar": val, "expected": want}))
    L = log_extend(M, log_degree)
    bad = sum(1 for a in _roots_and_cartan(n) for b in _roots_and_cartan(n) if not bracket_holds(L, a, b))
    out.append(Record(bad == 0, {"log_degree": log_degree, "brackets_failed": bad}))
    rep = log_casimir_report(mu, radius)
    out.append(Record(rep.ok, {"log_correction": rep.correction, "expected": rep.expected_correction,
                               "weights": rep.checked}))
    if n >= 2:
        z = z_grading(M)
        ok = all(v == z_formula(mu, d) for d, v in z.items())
        out.append(Record(ok, {"z_grading": ok, "weights": len(z)}))
        if mu.norm == 0:
            for k in range(1, n + 1):
                pr = casimir_projection_check(mu, k, radius)
                out.append(Record(pr.ok, {"sequence_k": k, "projected_dim": pr.expected if pr.ok else
                                          sorted(set(pr.projected_dims.values())),
                                          "expected": pr.expected, "tensor_dim": max(pr.tensor_dims.values()),
                                          "other_eigenvalues": pr.other_eigenvalues or "none"}))
    return out


def _roots_and_cartan(n: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(n + 1) for j in range(n + 1)]


def run_suite(name: str, mu: ExponentVector | None = None, n: int | None = None, radius: int = 4,
              cutoff: int = 10, log_degree: int = 1) -> list[Record]:
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; expected one of {', '.join(SUITES)}")
    if name in ("hilbert", "koszul"):
        n = n or (mu.n if mu else 2)
        return suite_hilbert(n, cutoff) if name == "hilbert" else suite_koszul(n, cutoff)
    if mu is None:
        mu = default_mu(n or (2 if name == "derham" else 1))
    elif n is not None and n != mu.n:
        raise WindowError(f"--mu has {mu.n + 1} entries but --n is {n}")
    if name == "cuspidal":
        return suite_cuspidal(mu, radius)
    if name == "derham":
        return suite_derham(mu, radius)
    if name == "ext":
        return suite_ext(mu, radius)
    return suite_casimir(mu, radius, log_degree)
