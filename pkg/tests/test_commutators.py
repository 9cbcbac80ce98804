import pytest

from higgins.commutators import (
    EXACT, LOWER, HigginsOptions, group_lower_bound, group_witness_words, higgins, huq, loop_huq,
    loop_lower_bound, loop_term_catalog, lower_central_series, n_subobjects_rhs, normal_closure_via_commutator,
)
from higgins.corpus import abelian, as_loop, cyclic
from higgins.freewords import FreeProduct, is_kernel_word, loop_deletion_trivial, loop_normalize, mul, rdiv, var
from higgins.structures import StructureError, generate, is_normal, mask_of, normal_subobjects, trivial, whole


def sub(X, *labels):
    return generate(X, [X.element(l) for l in labels])


def labels(S):
    return {S.ambient.labels[x] for x in S.elements()}


def test_group_examples(G):
    S3, Q8 = G["S3"], G["Q8"]
    r = higgins(S3, [sub(S3, "(12)"), sub(S3, "(23)")])
    assert r.value == sub(S3, "(123)") and r.certainty == EXACT
    r = higgins(Q8, [sub(Q8, "i"), sub(Q8, "j"), sub(Q8, "k")])
    assert r.value.is_trivial() and r.exact
    assert higgins(S3, [whole(S3), trivial(S3), whole(S3)]).value.is_trivial()


def test_huq_and_closure_examples(G):
    S3, Q8 = G["S3"], G["Q8"]
    V = abelian(2, 2)
    assert huq(V, whole(V), whole(V)).value.is_trivial()
    assert labels(huq(Q8, sub(Q8, "i"), sub(Q8, "j")).value) == {"1", "-1"}
    assert huq(S3, whole(S3), whole(S3)).value == sub(S3, "(123)")
    A3 = sub(S3, "(123)")
    assert normal_closure_via_commutator(S3, A3).value == A3
    assert normal_closure_via_commutator(S3, sub(S3, "(12)")).value == whole(S3)
    assert normal_closure_via_commutator(S3, trivial(S3)).value.is_trivial()


@pytest.mark.parametrize("name,sizes", [
    ("Q8", [8, 2, 1, 1, 1]), ("D4", [8, 2, 1, 1, 1]), ("UT3(F3)", [27, 3, 1, 1, 1]),
    ("S3", [6, 3, 3, 3, 3]), ("A4", [12, 4, 4, 4, 4]), ("S4", [24, 12, 12, 12, 12]),
])
def test_lower_central_series(G, name, sizes):
    X = G[name]
    for mode in ("nested_binary", "unbiased_higgins"):
        chain = lower_central_series(X, mode, 5)
        assert [c.value.size for c in chain] == sizes
        assert all(c.exact for c in chain)


def test_lcs_algebra(A):
    for mode in ("nested_binary", "unbiased_higgins"):
        assert [c.value.size for c in lower_central_series(A["N4(F2)"], mode, 5)] == [6, 3, 1, 0, 0]
    with pytest.raises(ValueError):
        lower_central_series(A["N4(F2)"], "sideways", 4)


def test_argument_errors(G):
    S3 = G["S3"]
    with pytest.raises(StructureError):
        higgins(S3, [whole(S3)])
    with pytest.raises(StructureError):
        higgins(S3, [whole(S3), whole(G["Q8"])])
    with pytest.raises(ValueError):
        HigginsOptions(bound=1)


def test_witness_words_reverify(G):
    S4 = G["S4"]
    Ns = [N.carrier for N in sorted(normal_subobjects(S4), key=lambda s: s.size)]
    masks = (Ns[-1], Ns[-2], Ns[-2])
    words = group_witness_words(S4, masks, 8)
    assert mask_of(words) == group_lower_bound(S4, masks, 8)
    P = FreeProduct(S4, masks)
    for x, w in words.items():
        assert is_kernel_word(P, w) and P.image(w) == x


def test_non_normal_ternary_is_lower_bound(G):
    S3 = G["S3"]
    r = higgins(S3, [sub(S3, "(12)"), sub(S3, "(23)"), sub(S3, "(13)")])
    assert r.certainty == LOWER
    assert r.value <= whole(S3)


def test_n_subobjects_rhs_needs_three(G):
    with pytest.raises(StructureError):
        n_subobjects_rhs(G["S3"], [whole(G["S3"])] * 2)


def test_loop_catalog_contains_associator_quotient():
    k, l, m = var(1), var(2), var(3)
    t = loop_normalize(rdiv(mul(k, mul(l, m)), mul(mul(k, l), m)))
    assert t in loop_term_catalog(3, 3)
    assert all(loop_deletion_trivial(s) for s in loop_term_catalog(2, 3))


def test_loop_results(L):
    X = L["M(S3,2)"]
    top = whole(X)
    r = higgins(X, [top, top, top])
    assert r.certainty == LOWER
    h = huq(X, top, top)
    assert h.exact and is_normal(X, h.value)
    # every loop lower bound sits below the exact Huq value
    assert higgins(X, [top, top]).value <= h.value


def test_group_as_loop_agrees_with_group(G):
    for name in ("S3", "Q8", "D4"):
        Gr = G[name]
        X = as_loop(Gr)
        top = whole(X)
        derived = higgins(Gr, [whole(Gr)] * 2).value.carrier
        assert loop_huq(X, top, top).carrier == derived
        lb = loop_lower_bound(X, (top.carrier,) * 3, 4)
        assert lb & ~higgins(Gr, [whole(Gr)] * 3).value.carrier == 0
    C4 = as_loop(cyclic(4))
    assert loop_lower_bound(C4, (whole(C4).carrier,) * 3, 4) == 1
