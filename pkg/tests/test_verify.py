import itertools
import json
import random

import pytest

from higgins.commutators import EXACT, LOWER, CommutatorResult
from higgins.corpus import as_loop, cyclic, loops, powers, small_groups
from higgins.structures import NotNormal, generate, normal_subobjects, trivial, whole
from higgins.verify import (
    VarietyError, VerificationReport, check_binary_decomposition, check_inequality, check_n_subobjects,
    check_nilpotency_agreement, check_normal_closure, check_normality_criterion, check_sh_nh, check_three_subobjects,
    compare_eq, compare_le, search_loop_divergence, stability_reports, stability_suite,
)


def sub(X, *labels):
    return generate(X, [X.element(l) for l in labels])


def span(X, *labels):
    return generate(X, [X.basis_vector(X.labels.index(l)) for l in labels])


def test_status_table(G):
    S3 = G["S3"]
    A3, T, X = sub(S3, "(123)"), trivial(S3), whole(S3)
    ex = lambda s: CommutatorResult(s, EXACT, "")  # noqa: E731
    lb = lambda s: CommutatorResult(s, LOWER, "")  # noqa: E731
    assert compare_le("c", {}, ex(T), ex(A3)).status == "pass"
    assert compare_le("c", {}, lb(T), ex(A3)).status == "consistent"
    r = compare_le("c", {}, ex(X), ex(A3))
    assert r.status == "fail" and r.witness["element"] not in ("e", "(123)", "(132)")
    assert compare_le("c", {}, ex(X), lb(A3)).status == "inconclusive"
    assert compare_eq("c", {}, ex(A3), ex(A3)).status == "pass"
    assert compare_eq("c", {}, lb(A3), ex(A3)).status == "consistent"
    with pytest.raises(ValueError):
        VerificationReport("c", {}, "fail")


def test_normality_examples(G):
    S3 = G["S3"]
    assert check_normality_criterion(S3, sub(S3, "(123)")).status == "pass"
    r = check_normality_criterion(S3, sub(S3, "(12)"))
    assert r.status == "pass" and r.witness is not None
    assert check_normality_criterion(S3, whole(S3)).status == "pass"


def test_inequality_examples(G, A):
    Q8, N4 = G["Q8"], A["N4(F2)"]
    assert check_inequality(Q8, [sub(Q8, "i"), sub(Q8, "j")]).status == "pass"
    P = powers(N4)
    assert check_inequality(N4, [P[1], P[0]]).status == "pass"
    assert check_inequality(N4, [trivial(N4), P[0]]).status == "pass"
    with pytest.raises(VarietyError):
        check_inequality(loops()["L5"], [whole(loops()["L5"])] * 2)


def test_three_and_n_subobjects_examples(G, A):
    Q8, h, N4, N5 = G["Q8"], A["h3(F3)"], A["N4(F2)"], A["N5(F2)"]
    i, j, k = sub(Q8, "i"), sub(Q8, "j"), sub(Q8, "k")
    assert check_three_subobjects(Q8, i, j, k).status == "pass"
    H = whole(h)
    assert check_three_subobjects(h, H, H, H).status == "pass"
    assert check_three_subobjects(Q8, trivial(Q8), j, k).status == "pass"
    N = whole(N4)
    assert check_n_subobjects(N4, [N, N, N]).status == "pass"
    r = check_n_subobjects(N5, [whole(N5)] * 4)
    assert r.status == "pass" and r.certainty["lhs"]["certainty"] == EXACT
    with pytest.raises(NotNormal):
        check_n_subobjects(G["S3"], [sub(G["S3"], "(12)")] * 3)


def test_binary_decomposition_examples(G, A):
    Q8, N4 = G["Q8"], A["N4(F2)"]
    assert check_binary_decomposition(Q8, [sub(Q8, "i"), sub(Q8, "j"), sub(Q8, "k")]).status == "pass"
    P = powers(N4)
    assert check_binary_decomposition(N4, [P[0], P[1], P[0]]).status == "pass"
    Z = span(N4, "E14")
    assert check_binary_decomposition(N4, [Z, Z, Z]).status == "pass"


def test_nilpotency_and_sh_nh_examples(G, A):
    Q8 = G["Q8"]
    r = check_nilpotency_agreement(Q8, 4)
    assert r.status == "pass" and r.certainty["chains"]["nested"] == [8, 2, 1, 1]
    r = check_nilpotency_agreement(A["N5(F2)"], 5)
    assert r.status == "pass" and r.certainty["chains"]["unbiased"] == [10, 6, 3, 1, 0]
    assert check_nilpotency_agreement(cyclic(6), 4).status == "pass"
    assert check_sh_nh(Q8, sub(Q8, "i"), sub(Q8, "j")).status == "pass"
    h = A["h3(F3)"]
    assert check_sh_nh(h, span(h, "x", "z"), span(h, "y", "z")).status == "pass"
    assert check_sh_nh(Q8, trivial(Q8), whole(Q8)).status == "pass"


def test_three_subobjects_exhaustive_small_groups():
    for X in small_groups().values():
        Ns = normal_subobjects(X)
        for t in itertools.product(Ns, repeat=3):
            assert check_three_subobjects(X, *t).status == "pass", (X.name, t)


def test_normal_closure_check(G):
    S3 = G["S3"]
    assert check_normal_closure(S3, sub(S3, "(12)")).status == "pass"


def test_loop_divergence_reports():
    reps = search_loop_divergence([as_loop(cyclic(4))], 4)
    assert [r.status for r in reps] == ["inconclusive"]
    assert reps[0].certainty["lower_bound"]["size"] == 1
    seen = []
    reps = search_loop_divergence([loops()["L5"]], 3, seen.append)
    assert len(reps) == 1 and seen == reps and reps[0].status in ("pass", "inconclusive")


def test_reports_are_deterministic(A):
    X = A["N3(F3)"]
    a = [r.line() for r in stability_suite(X, 5, seed=7)]
    b = [r.line() for r in stability_suite(X, 5, seed=7)]
    assert a == b
    json.loads(a[0])


def test_no_pass_from_lower_bounds(G):
    S3 = G["S3"]
    rng = random.Random(3)
    from higgins.structures import all_subobjects

    pool = (all_subobjects(S3), normal_subobjects(S3))
    for _ in range(20):
        subs = [rng.choice(pool[0]) for _ in range(3)]
        for rep in stability_reports(S3, subs, rng, pools=pool):
            if rep.status == "pass" and "lhs" in rep.certainty:
                sides = [rep.certainty["lhs"]["certainty"], rep.certainty["rhs"]["certainty"]]
                assert sides[0] == EXACT
            if rep.status == "fail":
                pytest.fail(rep.line())
