import random
from fractions import Fraction

import pytest

from cuspidal.cohomology import (GENERALIZED, RELATIVE, Cocycle, ZeroWindow, block_offset, check_cocycle,
                                 coboundary, h1_dimension, is_coboundary, log_cocycle, multiplier_cochain,
                                 self_extension_nontrivial, solve_coboundary, window_h1, write_matrix_market,
                                 x_inverse_cocycle)
from cuspidal.linalg import Mat
from cuspidal.weights import ExponentVector, OperatorMatrix, build_forms, build_functions

from oracles import sl2_h1

MU1 = ExponentVector.parse("1/2,-1/2")
MU2 = ExponentVector.parse("1/3,1/3,-2/3")
MU_M1 = ExponentVector.parse("-1/3,-2/3")


def diagonal(M, fn):
    return OperatorMatrix(tuple([0] * (M.n + 1)), {d: Mat.scalar(M.dim(d), fn(d)) for d in M.shifts})


@pytest.mark.parametrize("mu", ["1/2,-1/2", "1/3,1/5", "-1/3,-2/3", "3/7,-5/2"])
@pytest.mark.parametrize("radius", [3, 4, 5])
def test_sl2_counts_match_dense_oracle(mu, radius):
    m = ExponentVector.parse(mu)
    res = window_h1(build_functions(m, radius))
    assert (res.dim_cocycles, res.dim_coboundaries) == sl2_h1(*m.mu, radius)
    assert res.dim_H1 == 1 and res.boundaries_are_cocycles


def test_sl2_relative_and_generalized_sweep():
    rel = h1_dimension(lambda r: build_functions(MU1, r), range(3, 11), RELATIVE)
    gen = h1_dimension(lambda r: build_functions(MU1, r), range(3, 11), GENERALIZED)
    assert rel.dim_H1 == [1] * 8 and rel.stable and rel.boundaries_are_cocycles
    assert gen.dim_H1 == [2] * 8 and gen.stable and gen.boundaries_are_cocycles
    assert all(z - b == h for z, b, h in zip(rel.dim_cocycles, rel.dim_coboundaries, rel.dim_H1))
    assert rel.lines()[-1] == "mode=relative stable=True boundaries_are_cocycles=True"
    assert rel.lines()[0].startswith("radius=3 mode=relative ")


def test_sl3_window():
    M = build_functions(MU2, 3)
    assert window_h1(M, RELATIVE).dim_H1 == 1
    assert window_h1(M, GENERALIZED).dim_H1 == 3


def test_zero_module():
    for n in (1, 2):
        Z = ZeroWindow(n, 3)
        for mode in (RELATIVE, GENERALIZED):
            res = window_h1(Z, mode)
            assert res.dim_H1 == 0


def test_distinct_blocks_have_no_extensions():
    M = lambda r: build_functions(MU1, r)
    for other in ("1/4,-3/4", "1/3,-1/3"):
        N = lambda r, o=other: build_functions(ExponentVector.parse(o), r)
        rep = h1_dimension(M, range(3, 6), RELATIVE, make_target=N)
        assert rep.dim_H1 == [0, 0, 0]
    assert block_offset(build_functions(MU1, 3), build_functions(ExponentVector.parse("1/3,-1/3"), 3)) is None
    assert block_offset(build_functions(MU1, 3), build_functions(ExponentVector.parse("3/2,-3/2"), 3)) == (-1, 1)


@pytest.mark.parametrize("b", [0, 1, Fraction(5, 3), -2])
def test_x_inverse_example(b):
    c = x_inverse_cocycle(build_functions(MU1, 5), b)
    assert check_cocycle(c).ok
    assert self_extension_nontrivial(c) == (b != 0)


@pytest.mark.parametrize("n,mu", [(1, MU1), (2, MU2), (3, ExponentVector.parse("1/2,1/3,1/5,-31/30"))])
def test_equal_multipliers_are_cocycles(n, mu):
    M = build_functions(mu, 2 if n == 3 else 3)
    roots = [(i, j) for i in range(n + 1) for j in range(n + 1) if i != j]
    assert check_cocycle(multiplier_cochain(M, {g: Fraction(7, 4) for g in roots})).ok
    if n == 1:
        return
    for g in roots:
        b = {h: Fraction(1) for h in roots}
        b[g] = Fraction(2)
        rep = check_cocycle(multiplier_cochain(M, b))
        assert not rep.ok and rep.failures


def test_unequal_pair_example():
    M = build_functions(MU2, 3)
    roots = [(i, j) for i in range(3) for j in range(3) if i != j]
    b = {g: Fraction(1) for g in roots}
    b[(0, 2)] = Fraction(3)
    assert not check_cocycle(multiplier_cochain(M, b)).ok


def test_coboundaries_are_cocycles():
    rng = random.Random(3)
    for M in (build_functions(MU1, 4), build_functions(MU2, 2), build_forms(MU2, 1, 2)):
        blocks = {d: Mat([[Fraction(rng.randint(-3, 3)) for _ in range(M.dim(d))] for _ in range(M.dim(d))],
                         M.dim(d)) for d in M.shifts}
        phi = OperatorMatrix(tuple([0] * (M.n + 1)), blocks)
        c = coboundary(M, phi)
        assert check_cocycle(c).ok
        assert is_coboundary(c)
        assert not self_extension_nontrivial(c)


def test_identity_coboundary_is_zero():
    M = build_functions(MU2, 2)
    c = coboundary(M, diagonal(M, lambda d: Fraction(1)))
    for op in c.values.values():
        assert all(b.is_zero() for b in op.blocks.values())
    assert not self_extension_nontrivial(c)


def test_diagonal_recursion_reproduces_cocycle():
    # c = [., zeta(lambda_0)]; on E_10: c(E_10) t^lam = lam_0 (zeta(lam_0) - zeta(lam_0 - 1)) t^(lam - e_0 + e_1)
    M = build_functions(MU2, 3)
    rng = random.Random(8)
    table = {}
    zeta = lambda d: table.setdefault(d[0], Fraction(rng.randint(-9, 9), rng.randint(1, 5)))
    c = coboundary(M, diagonal(M, zeta))
    # recover zeta inductively from the values of c on E_10
    rec = {-M.radius: Fraction(0)}
    for k in range(-M.radius + 1, M.radius + 1):
        d = next(d for d in M.interior() if d[0] == k) if any(d[0] == k for d in M.interior()) else None
        if d is None:
            rec[k] = rec[k - 1]
            continue
        lam0 = M.weight(d)[0]
        rec[k] = rec[k - 1] + c.values[(1, 0)].blocks[d].rows[0][0] / lam0
    c2 = coboundary(M, diagonal(M, lambda d: rec[d[0]]))
    for d in M.interior():
        for g in ((1, 0), (2, 0)):
            if d in c.values[g].blocks:
                assert c2.values[g].blocks[d] == c.values[g].blocks[d]


def test_self_extension_nontrivial_at_norm_zero():
    for mu in (MU1, ExponentVector.parse("1/4,-1/4")):
        c = log_cocycle(build_functions(mu, 5))
        assert check_cocycle(c).ok
        assert self_extension_nontrivial(c)


def test_self_extension_trivial_at_norm_minus_one():
    M = build_functions(MU_M1, 5)
    c = log_cocycle(M)
    assert check_cocycle(c).ok
    phi = solve_coboundary(c)
    assert phi is not None
    back = coboundary(M, phi)
    for g, op in c.values.items():
        for d in M.interior():
            if d in op.blocks:
                assert back.values[g].blocks[d] == op.blocks[d]
    # phi(lam) - phi(lam + e_0 - e_1) = 1 / lam_1
    for d in M.interior():
        e = (d[0] + 1, d[1] - 1)
        if e in phi.blocks:
            assert phi.blocks[d].rows[0][0] - phi.blocks[e].rows[0][0] == 1 / M.weight(d)[1]


def test_zero_cocycle_trivial():
    M = build_functions(MU1, 4)
    c = x_inverse_cocycle(M, 0)
    assert is_coboundary(c) and not self_extension_nontrivial(c)


def test_class_invariant_under_coboundary():
    M = build_functions(MU1, 5)
    c = log_cocycle(M)
    rng = random.Random(1)
    phi = diagonal(M, lambda d: Fraction(rng.randint(-5, 5)))
    shifted = c + coboundary(M, phi)
    assert check_cocycle(shifted).ok
    assert self_extension_nontrivial(shifted)


def test_generalized_log_cocycle():
    M = build_functions(MU2, 3)
    c = log_cocycle(M, [1, 2, 5])
    assert c.mode == GENERALIZED
    assert check_cocycle(c).ok
    assert c.cartan_scalar({0: 1, 1: -1}) == -1
    assert log_cocycle(M).mode == RELATIVE


def test_cocycle_validation():
    M = build_functions(MU1, 3)
    with pytest.raises(ValueError):
        Cocycle(M, {(0, 1): M.operator(1, 0)})
    with pytest.raises(ValueError):
        Cocycle(M, {(0, 1): M.operator(0, 1)}, {0: Fraction(1)}, RELATIVE)
    with pytest.raises(ValueError):
        coboundary(M, M.operator(0, 1))
    with pytest.raises(ValueError):
        window_h1(M, "absolute")
    with pytest.raises(ValueError):
        x_inverse_cocycle(build_functions(MU2, 2))


def test_matrix_market_dump(tmp_path):
    res = window_h1(build_functions(MU1, 3))
    path = tmp_path / "sys.mtx"
    write_matrix_market(str(path), res.equations, res.unknowns)
    lines = path.read_text().splitlines()
    assert lines[0] == "%%MatrixMarket matrix coordinate rational general"
    rows, cols, nnz = map(int, lines[1].split())
    assert rows == len(res.equations) and cols == res.unknowns and nnz == len(lines) - 2
