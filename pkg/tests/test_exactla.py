from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hycone.exactla import (
    NonUnique,
    NoSolution,
    column_hermite,
    det,
    fmt_rat,
    inverse,
    kernel,
    ldlt,
    matmul,
    matvec,
    parse_rat,
    quad,
    rank,
    solve,
    transpose,
)
from conftest import int_matrices


def test_parse_and_format():
    assert parse_rat("3/6") == Fraction(1, 2)
    assert parse_rat("-4") == -4
    assert fmt_rat(Fraction(6, 3)) == "2"
    assert fmt_rat(Fraction(-1, 3)) == "-1/3"
    for bad in ("1/0", "x", "1.5", ""):
        with pytest.raises(ValueError):
            parse_rat(bad)


def test_det_examples():
    assert det([[1, 0, 0], [0, 1, 0], [0, 0, 1]]) == 1
    assert det([[1, 1], [1, 1]]) == 0
    assert det([[2, 1], [1, 2]]) == 3
    with pytest.raises(ValueError):
        det([[1, 2, 3], [4, 5, 6]])


def test_solve_examples():
    assert solve([[1, 0], [0, 1]], [3, Fraction(1, 2)]) == [3, Fraction(1, 2)]
    with pytest.raises(NonUnique) as e:
        solve([[1, 1], [1, 1]], [1, 1])
    (k,) = e.value.kernel
    assert k[0] == -k[1] != 0
    with pytest.raises(NoSolution):
        solve([[1, 1], [1, 1]], [1, 0])


def test_rank_examples():
    assert rank([[0, 0], [0, 0]]) == 0
    assert rank([[1, 0, 0], [0, 1, 0], [0, 0, 1]]) == 3
    assert rank([[1, 1, 0], [1, 0, 1], [0, 1, 1]]) == 3  # the cuts of 3 points


def test_ldlt_examples():
    f = ldlt([[1, 0], [0, 1]])
    assert f.kind == "pd" and f.L == [[1, 0], [0, 1]] and f.D == [1, 1]
    f = ldlt([[1, 1], [1, 1]])
    assert f.kind == "psd"
    assert [list(k) for k in f.kernel] == [[1, -1]]
    f = ldlt([[1, 2], [2, 1]])
    assert f.kind == "indefinite"
    assert list(f.witness) == [1, -1] and f.value == -2
    with pytest.raises(ValueError):
        ldlt([[1, 2], [0, 1]])


@settings(max_examples=60, deadline=None)
@given(int_matrices(3, 3), int_matrices(3, 3))
def test_det_multiplicative(a, b):
    assert det(matmul(a, b)) == det(a) * det(b)


@settings(max_examples=60, deadline=None)
@given(int_matrices(4, 4), st.lists(st.integers(-5, 5), min_size=4, max_size=4))
def test_solve_round_trip(a, y):
    if det(a) == 0:
        return
    x = solve(a, y)
    assert matvec(a, x) == y
    assert matmul(a, inverse(a)) == [[int(i == j) for j in range(4)] for i in range(4)]


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 5).flatmap(lambda r: int_matrices(r, 5)))
def test_rank_nullity_and_numpy(a):
    r = rank(a)
    ker = kernel(a, ncols=5)
    assert r + len(ker) == 5
    for k in ker:
        assert all(x == 0 for x in matvec(a, k))
    assert r == np.linalg.matrix_rank(np.array(a, dtype=float))


@settings(max_examples=80, deadline=None)
@given(int_matrices(4, 4))
def test_ldlt_reconstructs(b):
    m = matmul(transpose(b), b) if sum(map(sum, b)) % 2 else [[b[i][j] + b[j][i] for j in range(4)] for i in range(4)]
    f = ldlt(m)
    if f.kind == "indefinite":
        assert quad(m, f.witness) < 0
        return
    if f.kind == "pd":
        D = [[f.D[i] if i == j else 0 for j in range(4)] for i in range(4)]
        assert matmul(matmul(f.L, D), transpose(f.L)) == m
    else:
        assert f.kernel
        for k in f.kernel:
            assert all(x == 0 for x in matvec(m, k))
        assert len(f.kernel) == 4 - rank(m)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4).flatmap(lambda r: int_matrices(r, 4, -6, 6)))
def test_column_hermite_unimodular(a):
    h, u = column_hermite(a)
    assert matmul(a, u) == h
    assert abs(det(u)) == 1
    # zero columns come last and their count is the nullity
    nz = [j for j in range(4) if any(h[i][j] for i in range(len(a)))]
    assert nz == list(range(len(nz))) and len(nz) == rank(a)
