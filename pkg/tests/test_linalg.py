import random
from fractions import Fraction

import pytest
import sympy

from cuspidal.linalg import (Mat, SparseEliminator, charpoly, det, inverse, intersect_spaces, nullspace, rank,
                             rref, solve, sparse_nullspace, sparse_rank, sparse_solve)


def random_mat(rng, r, c, density=0.6, lo=-3, hi=3):
    return Mat([[Fraction(rng.randint(lo, hi), rng.choice([1, 1, 2, 3])) if rng.random() < density else Fraction(0)
                 for _ in range(c)] for _ in range(r)], c)


def to_sym(m):
    return sympy.Matrix(m.nrows, m.ncols, lambda i, j: sympy.Rational(m.rows[i][j].numerator, m.rows[i][j].denominator))


@pytest.mark.parametrize("seed", range(20))
def test_rank_det_against_sympy(seed):
    rng = random.Random(seed)
    r, c = rng.randint(1, 7), rng.randint(1, 7)
    m = random_mat(rng, r, c)
    assert rank(m) == to_sym(m).rank()
    sq = random_mat(rng, r, r)
    d = to_sym(sq).det()
    assert det(sq) == Fraction(int(d.p), int(d.q))


@pytest.mark.parametrize("seed", range(10))
def test_nullspace_and_solve(seed):
    rng = random.Random(100 + seed)
    m = random_mat(rng, rng.randint(1, 6), rng.randint(2, 7), density=0.5)
    ns = nullspace(m)
    assert ns.nrows == m.ncols - rank(m)
    for v in ns.rows:
        assert not any(m.apply(v))
    x = [Fraction(rng.randint(-2, 2)) for _ in range(m.ncols)]
    b = m.apply(x)
    y = solve(m, b)
    assert y is not None and m.apply(y) == b


def test_solve_inconsistent():
    m = Mat([[1, 1], [2, 2]], 2)
    assert solve(m, [1, 3]) is None


def test_inverse_and_charpoly():
    rng = random.Random(5)
    while True:
        m = random_mat(rng, 4, 4, density=0.9)
        if det(m) != 0:
            break
    assert m @ inverse(m) == Mat.identity(4)
    cp = charpoly(m)
    t = sympy.Symbol("t")
    want = to_sym(m).charpoly(t).all_coeffs()[::-1]
    assert [sympy.Rational(c.numerator, c.denominator) for c in cp] == want
    with pytest.raises(ZeroDivisionError):
        inverse(Mat([[1, 2], [2, 4]], 2))


def test_rref_shape_and_zero_dims():
    R, piv = rref(Mat.zeros(0, 3))
    assert piv == [] and R.nrows == 0
    assert rank(Mat.zeros(3, 0)) == 0
    assert nullspace(Mat.zeros(0, 2)).nrows == 2


@pytest.mark.parametrize("seed", range(10))
def test_sparse_matches_dense(seed):
    rng = random.Random(200 + seed)
    m = random_mat(rng, rng.randint(1, 9), rng.randint(1, 9), density=0.3)
    rows = [{j: v for j, v in enumerate(r) if v} for r in m.rows]
    assert sparse_rank(rows, m.ncols) == rank(m)
    ns = sparse_nullspace(rows, m.ncols)
    assert len(ns) == m.ncols - rank(m)
    for v in ns:
        dense = [v.get(j, Fraction(0)) for j in range(m.ncols)]
        assert not any(m.apply(dense))


@pytest.mark.parametrize("seed", range(10))
def test_sparse_solve(seed):
    rng = random.Random(300 + seed)
    m = random_mat(rng, rng.randint(1, 8), rng.randint(1, 8), density=0.4)
    x = [Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(m.ncols)]
    b = m.apply(x)
    rows = [({j: v for j, v in enumerate(r) if v}, bb) for r, bb in zip(m.rows, b)]
    sol = sparse_solve(rows, m.ncols)
    assert sol is not None
    assert m.apply([sol.get(j, Fraction(0)) for j in range(m.ncols)]) == b


def test_sparse_solve_inconsistent():
    assert sparse_solve([({0: 1, 1: 1}, 1), ({0: 2, 1: 2}, 3)], 2) is None


def test_eliminator_incremental_rank():
    el = SparseEliminator(3)
    assert el.add({0: Fraction(1), 1: Fraction(2)})
    assert not el.add({0: Fraction(2), 1: Fraction(4)})
    assert el.add({2: Fraction(1)})
    assert el.rank == 2


def test_intersect_spaces():
    a = Mat([[1, 0, 0], [0, 1, 0]], 3)
    b = Mat([[0, 1, 0], [0, 0, 1]], 3)
    assert rank(intersect_spaces(a, b)) == 1


def test_mat_shape_errors():
    with pytest.raises(ValueError):
        Mat([[1, 2], [3]], 2)
    with pytest.raises(ValueError):
        Mat.identity(2) @ Mat.identity(3)
