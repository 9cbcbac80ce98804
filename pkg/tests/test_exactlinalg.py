from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from higgins.exactlinalg import (
    FieldSpec, LinalgError, contains, full_space, intersect, nullspace, rref, solve, subspace_sum, zero_subspace,
)

F2, F3, F5, Q = FieldSpec.prime(2), FieldSpec.prime(3), FieldSpec.prime(5), FieldSpec.rational()


def test_rref_examples():
    assert rref([[1, 1], [1, 1]], F2).basis == ((1, 1),)
    assert rref([], F2, 3).is_zero
    assert rref([[2, 4], [1, 3]], Q).basis == ((1, 0), (0, 1))


def test_sum_and_intersect_examples():
    a, b = rref([[1, 0]], Q), rref([[0, 1]], Q)
    assert subspace_sum(a, b) == full_space(Q, 2)
    assert intersect(full_space(Q, 2), rref([[1, 1]], Q)).basis == ((1, 1),)
    got = intersect(rref([[1, 1, 0], [0, 1, 1]], F2), rref([[1, 0, 1]], F2))
    assert got.basis == ((1, 0, 1),)


def test_field_parsing_and_errors():
    assert Q.coerce("3/6") == Fraction(1, 2)
    assert F5.coerce("1/2") == 3
    assert FieldSpec.from_json(F3.to_json()) == F3
    with pytest.raises(LinalgError):
        FieldSpec.prime(4)
    with pytest.raises(LinalgError):
        FieldSpec.from_json({"type": "real"})
    with pytest.raises(LinalgError):
        contains(rref([[1, 0]], Q), [1, 0, 0])


def test_solve_free_variables_zero():
    # x0*(1,0) + x1*(1,0) + x2*(0,1) = (2,3): x1 free
    assert solve([[1, 0], [1, 0], [0, 1]], [2, 3], Q) == (2, 0, 3)
    assert solve([[1, 0]], [0, 1], Q) is None


def test_nullspace_f3():
    ns = nullspace([[1, 1, 1]], F3, 3)
    assert len(ns) == 2
    for v in ns:
        assert sum(v) % 3 == 0


vec = lambda n, p: st.lists(st.integers(0, p - 1), min_size=n, max_size=n)  # noqa: E731
rows = lambda n, p: st.lists(vec(n, p), max_size=5)  # noqa: E731


@given(rows(4, 3))
def test_rref_invariants(rs):
    S = rref(rs, F3, 4)
    piv = S.pivots
    assert list(piv) == sorted(set(piv))
    for row, c in zip(S.basis, piv):
        assert row[c] == 1
        assert all(other[c] == 0 for other in S.basis if other is not row)
    # canonical: any spanning set gives the same basis
    assert rref(list(S.basis) + rs, F3, 4) == S
    assert all(contains(S, r) for r in rs)


@given(rows(4, 2), rows(4, 2))
def test_dimension_formula(a, b):
    A, B = rref(a, F2, 4), rref(b, F2, 4)
    S, I = subspace_sum(A, B), intersect(A, B)
    assert S.dim + I.dim == A.dim + B.dim
    assert I <= A and I <= B and A <= S and B <= S


@given(rows(3, 5))
def test_intersection_brute_force(a):
    A = rref(a, F5, 3)
    B = rref([[1, 2, 3]], F5, 3)
    members = {v for v in ((x, y, z) for x in range(5) for y in range(5) for z in range(5)) if contains(A, v) and contains(B, v)}
    I = intersect(A, B)
    assert len(members) == 5 ** I.dim
    assert zero_subspace(F5, 3) <= I
