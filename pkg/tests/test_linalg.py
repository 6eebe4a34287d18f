from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from dgkernels.linalg import Field, cokernel, inverse, nullspace, rank, rref, solve

Q = Field(0)
FIELDS = [Field(2), Field(7), Q]


def test_rank_examples():
    assert rank(Q, Q.zeros((2, 2))) == 0
    assert rank(Q, Q.eye(3)) == 3
    assert rank(Q, Q.array([[1, 2], [2, 4]])) == 1


def test_solve_examples():
    assert list(solve(Q, Q.eye(2), Q.array([1, 2]))) == [1, 2]
    assert solve(Q, Q.zeros((2, 2)), Q.array([1, 0])) is None
    assert list(solve(Q, Q.array([[1, 1]]), Q.array([3]))) == [3, 0]


def test_solve_dimension_mismatch():
    with pytest.raises(ValueError):
        solve(Q, Q.eye(2), Q.array([1, 2, 3]))


def test_cokernel_examples():
    P, S = cokernel(Q, Q.eye(3))
    assert P.shape == (0, 3)
    P, S = cokernel(Q, Q.zeros((2, 1)))
    assert P.shape == (2, 2) and (P == Q.eye(2)).all()
    P, S = cokernel(Q, Q.array([[1], [0]]))
    assert P.shape == (1, 2)
    assert P[0, 0] == 0 and P[0, 1] != 0


def test_rational_entries_stay_exact():
    A = Q.array([["1/3", 1], [1, 3]])
    assert rank(Q, A) == 1
    x = solve(Q, Q.array([[3]]), Q.array([1]))
    assert x[0] == Fraction(1, 3)


def test_field_descriptors():
    assert Field.parse("F2") == Field(2)
    assert Field.parse("Fp:7") == Field(7)
    assert Field.parse("Q") == Q
    assert Field(7).descriptor() == "Fp:7" and Q.descriptor() == "Q"
    assert Field(5)("1/2") == 3
    with pytest.raises(ValueError):
        Field(4)
    with pytest.raises(ValueError):
        Field.parse("R")


def _matrix(draw, F):
    m = draw(st.integers(0, 5))
    n = draw(st.integers(0, 5))
    vals = draw(st.lists(st.integers(-3, 3), min_size=m * n, max_size=m * n))
    return F.array(np.array(vals, dtype=object).reshape(m, n)) if m * n else F.zeros((m, n))


@st.composite
def field_and_matrix(draw):
    F = draw(st.sampled_from(FIELDS))
    return F, _matrix(draw, F)


@given(field_and_matrix())
def test_rank_nullity(fm):
    F, A = fm
    N, free = nullspace(F, A)
    assert rank(F, A) + N.shape[1] == A.shape[1]
    assert not F.matmul(A, N).any() if A.size and N.size else True


@given(field_and_matrix())
def test_cokernel_contract(fm):
    F, M = fm
    P, S = cokernel(F, M, rows=M.shape[0])
    k = P.shape[0]
    assert k == M.shape[0] - rank(F, M)
    if M.size and k:
        assert not F.matmul(P, M).any()
    assert (F.matmul(P, S) == F.eye(k)).all() if k else True


@given(field_and_matrix())
def test_solve_returns_solution_when_consistent(fm):
    F, A = fm
    if A.shape[1] == 0:
        return
    x0 = F.array(list(range(A.shape[1])))
    b = F.matmul(A, x0)
    x = solve(F, A, b)
    assert x is not None
    assert (F.matmul(A, x) == b).all()


@given(field_and_matrix())
def test_deterministic(fm):
    F, A = fm
    R1, p1 = rref(F, A.copy())
    rank(F, Q.eye(2) if F == Q else F.eye(3))
    R2, p2 = rref(F, A.copy())
    assert p1 == p2 and (R1 == R2).all()
    a, b = cokernel(F, A, rows=A.shape[0]), cokernel(F, A, rows=A.shape[0])
    assert (a[0] == b[0]).all() and (a[1] == b[1]).all()


def test_inverse():
    F = Field(7)
    A = F.array([[1, 2], [3, 4]])
    Ai = inverse(F, A)
    assert (F.matmul(A, Ai) == F.eye(2)).all()
    assert inverse(F, F.array([[1, 2], [2, 4]])) is None
