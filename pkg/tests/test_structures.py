import pytest
from hypothesis import given, strategies as st

from higgins.corpus import algebras, bundled_ideals, groups, loops, small_groups
from higgins.structures import (
    DimensionMismatch, IdentityMissing, NotAssociative, NotLatin, NotNormal, NotSubalgebra, Subobject, all_subobjects,
    generate, is_homomorphism, is_normal, is_normal_loop_criterion, is_surjective, join, load_subobject, meet,
    normal_closure, normal_subobjects, quotient, trivial, validate, whole,
)


def sub(X, *labels):
    return generate(X, [X.element(l) for l in labels])


def span(X, *labels):
    return generate(X, [X.basis_vector(X.labels.index(l)) for l in labels])


def test_validate_examples(G, L, A):
    S3 = G["S3"]
    assert validate(S3.to_json()).order == 6
    raw = dict(L["L5"].to_json(), kind="group")
    with pytest.raises(NotAssociative) as e:
        validate(raw)
    a, b, c = e.value.witness
    t = L["L5"].table
    assert t[t[a][b]][c] != t[a][t[b][c]]
    assert validate(L["L5"].to_json()).order == 5
    N3 = A["N3(F2)"]
    e12, e23, e13 = (N3.basis_vector(i) for i in range(3))
    assert N3.mul(e12, e23) == e13 and not any(N3.mul(e23, e12))


@pytest.mark.parametrize("raw,exc", [
    ({"kind": "group", "order": 2, "table": [[0, 1], [1, 1]]}, NotLatin),
    ({"kind": "group", "order": 2, "table": [[1, 0], [0, 1]]}, IdentityMissing),
    ({"kind": "loop", "order": 3, "table": [[0, 1], [1, 0]]}, DimensionMismatch),
    ({"kind": "algebra", "field": {"type": "prime", "p": 2}, "dim": 2, "structure": [[[0, 0]]]}, DimensionMismatch),
])
def test_validate_rejects(raw, exc):
    with pytest.raises(exc):
        validate(raw)


def test_round_trip_all_bundled():
    for X in [*small_groups().values(), *groups().values(), *loops().values(), *algebras().values()]:
        assert validate(X.to_json()).to_json() == X.to_json()


def test_generate_and_join(G):
    S3, Q8 = G["S3"], G["Q8"]
    assert sub(S3, "(12)").size == 2
    assert {Q8.labels[x] for x in sub(Q8, "i").elements()} == {"1", "-1", "i", "-i"}
    assert generate(S3, []).is_trivial()
    A = sub(S3, "(12)")
    assert join(S3, A, trivial(S3)) == A and join(S3, A, A) == A
    assert join(S3, A, sub(S3, "(13)")) == whole(S3)
    assert meet(S3, A, sub(S3, "(123)")).is_trivial()


def test_normality_examples(G, A):
    S3, N3 = G["S3"], A["N3(F2)"]
    assert is_normal(S3, sub(S3, "(123)"))
    assert not is_normal(S3, sub(S3, "(12)"))
    assert is_normal(N3, span(N3, "E13"))
    assert normal_closure(S3, sub(S3, "(12)")) == whole(S3)
    assert normal_closure(S3, sub(S3, "(123)")) == sub(S3, "(123)")
    assert normal_closure(N3, span(N3, "E12")) == span(N3, "E12", "E13")


def test_quotients(G, A):
    S3, N3 = G["S3"], A["N3(F2)"]
    Y, f = quotient(S3, sub(S3, "(123)"))
    assert Y.order == 2 and is_homomorphism(f) and is_surjective(f)
    Y, f = quotient(S3, trivial(S3))
    assert Y.table == S3.table
    Y, f = quotient(N3, span(N3, "E13"))
    assert Y.dim == 2 and not any(c for s in Y.structure for r in s for c in r)
    with pytest.raises(NotNormal):
        quotient(S3, sub(S3, "(12)"))


def test_every_bundled_quotient_is_a_surjective_homomorphism():
    for X in groups().values():
        for N in normal_subobjects(X):
            _, f = quotient(X, N)
            assert is_homomorphism(f) and is_surjective(f)
    for X in algebras().values():
        for N in bundled_ideals(X):
            _, f = quotient(X, N)
            assert is_homomorphism(f) and is_surjective(f)


# frozen lattice sizes: subgroups / normal subgroups
@pytest.mark.parametrize("name,subs,normals", [
    ("S3", 6, 3), ("D4", 10, 6), ("Q8", 6, 6), ("A4", 10, 3), ("S4", 30, 4), ("UT3(F3)", 19, 7), ("C2xC2", 5, 5),
])
def test_lattice_counts(G, name, subs, normals):
    assert len(all_subobjects(G[name])) == subs
    assert len(normal_subobjects(G[name])) == normals


@pytest.mark.parametrize("name,subs,normals", [("L5", 3, 2), ("M(S3,2)", 24, 6), ("M(D4,2)", 45, 17), ("M(Q8,2)", 25, 17)])
def test_loop_lattice_counts(L, name, subs, normals):
    assert len(all_subobjects(L[name])) == subs
    assert len(normal_subobjects(L[name])) == normals


def test_loop_normality_matches_criterion(L):
    for X in L.values():
        for S in all_subobjects(X):
            assert is_normal(X, S) == is_normal_loop_criterion(X, S)


def test_normal_subgroups_are_conjugation_closed(small):
    for X in small.values():
        for S in all_subobjects(X):
            brute = all(X.conj(g, s) in S for g in range(X.order) for s in S.elements())
            assert is_normal(X, S) == brute


def test_load_subobject(A, G):
    N3 = A["N3(F2)"]
    assert load_subobject(N3, {"basis": [[0, 0, 1]]}).size == 1
    with pytest.raises(NotSubalgebra):
        load_subobject(N3, {"basis": [[1, 1, 0]]})
    assert load_subobject(G["Q8"], {"generators": [G["Q8"].element("i")]}).size == 4


@given(st.data())
def test_join_is_least_upper_bound(data):
    X = groups()["D4"]
    subs = all_subobjects(X)
    a, b = data.draw(st.sampled_from(subs)), data.draw(st.sampled_from(subs))
    j = join(X, a, b)
    assert a <= j and b <= j
    assert all(j <= c for c in subs if a <= c and b <= c)
    m = meet(X, a, b)
    assert isinstance(m, Subobject) and m <= a and m <= b
