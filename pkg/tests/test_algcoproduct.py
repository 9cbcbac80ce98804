import random

import pytest
from hypothesis import given, strategies as st

from higgins.algcoproduct import higgins_algebra, product_span, reduced_tree_values
from higgins.corpus import algebras, bundled_ideals, powers
from higgins.exactlinalg import rref, zero_subspace
from higgins.structures import NotSubalgebra, Subobject, generate, whole


def span(X, *labels):
    return rref([X.basis_vector(X.labels.index(l)) for l in labels], X.field, X.dim)


def test_product_span_examples(A):
    N3 = A["N3(F2)"]
    N = whole(N3).carrier
    assert product_span(N3, N, N) == span(N3, "E13")
    assert product_span(N3, N, zero_subspace(N3.field, 3)).is_zero
    h = A["h3(F3)"]
    assert product_span(h, span(h, "x"), span(h, "y")) == span(h, "z")


def test_higgins_examples(A):
    N4, h = A["N4(F2)"], A["h3(F3)"]
    N = whole(N4)
    assert higgins_algebra(N4, [N, N, N]) == span(N4, "E14")
    assert higgins_algebra(N4, [N, Subobject(N4, zero_subspace(N4.field, 6)), N]).is_zero
    H = whole(h)
    assert higgins_algebra(h, [H, H]) == span(h, "z")
    assert higgins_algebra(h, [H, H, H]).is_zero


def test_rejects_non_subalgebra(A):
    N3 = A["N3(F2)"]
    bad = Subobject(N3, span(N3, "E12", "E23"))
    with pytest.raises(NotSubalgebra):
        higgins_algebra(N3, [bad, whole(N3)])


@pytest.mark.parametrize("name", ["N3(F2)", "N4(F2)", "N3(F3)", "h3(F3)", "A2(F2)"])
def test_unbiased_commutators_are_powers(A, name):
    X = A[name]
    P = powers(X)
    top = whole(X)
    for n in range(2, len(P) + 1):
        want = P[n - 1].carrier if n - 1 < len(P) else zero_subspace(X.field, X.dim)
        assert higgins_algebra(X, [top] * n) == want


def _random_subalgebra(X, rng):
    vals = list(X.field.elements())
    gens = [[rng.choice(vals) for _ in range(X.dim)] for _ in range(rng.randint(1, 2))]
    return generate(X, gens)


@given(st.integers(0, 10_000), st.sampled_from(["N3(F2)", "N4(F2)", "N3(F3)", "h3(F3)"]), st.sampled_from([2, 3]))
def test_fixed_point_matches_tree_enumeration(seed, name, n):
    X = algebras()[name]
    rng = random.Random(seed)
    subs = [_random_subalgebra(X, rng) for _ in range(n)]
    fixed = higgins_algebra(X, subs)
    # nilpotency index bounds the useful tree size
    brute = reduced_tree_values(X, [s.carrier for s in subs], max_leaves=X.dim + 1)
    assert fixed == brute


@given(st.integers(0, 10_000))
def test_symmetric_and_monotone(seed):
    X = algebras()["N4(F3)"]
    rng = random.Random(seed)
    ideals = bundled_ideals(X)
    K, L, M = (rng.choice(ideals) for _ in range(3))
    v = higgins_algebra(X, [K, L, M])
    assert v == higgins_algebra(X, [M, K, L]) == higgins_algebra(X, [L, M, K])
    assert v <= higgins_algebra(X, [whole(X), L, M])
    assert v <= higgins_algebra(X, [K, L])
