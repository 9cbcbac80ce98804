"""Runnable checks of the commutator identities, emitting JSON-serializable reports.

Status semantics for a comparison A <= B (equality is both directions):

* pass          containment holds and A is exact (or both sides exact, for equality)
* consistent    containment holds but A is only a lower bound
* fail          a witness x in A with x not in B, and B is exact: a genuine violation
* inconclusive  such a witness exists but B is only a lower bound

For groups of arity >= 3 the left side is the kernel-word lower bound, and the check counts as
cross-certified when that bound already reaches the (exact) right-hand join.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from itertools import permutations, product
from typing import Iterable, Sequence

from .commutators import (
    DEFAULT,
    EXACT,

    CommutatorResult,
    HigginsOptions,
    combine,
    higgins,
    huq,
    lower_central_series,
    n_subobjects_rhs,
)
from .structures import (
    FdAlgebra,
    FiniteGroup,
    FiniteLoop,
    NotNormal,
    StructureError,
    Subobject,
    all_subobjects,
    bits,
    generate,
    is_normal,
    join,
    join_all,
    meet,
    normal_closure,
    normal_subobjects,
    quotient,
    trivial,
    whole,
)

STATUSES = ("pass", "fail", "consistent", "inconclusive")


class VarietyError(StructureError):
    """The check is stated for groups and algebras only."""


@dataclass
class VerificationReport:
    check: str
    instance: dict
    status: str
    witness: object = None
    certainty: dict = field(default_factory=dict)
    seed: int | None = None

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"bad status {self.status!r}")
        if self.status == "fail" and self.witness is None:
            raise ValueError("a fail report needs a witness")

    def to_json(self) -> dict:
        out = {"check": self.check, "instance": self.instance, "status": self.status,
               "witness": self.witness, "certainty": self.certainty}
        if self.seed is not None:
            out["seed"] = self.seed
        return out

    def line(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, ensure_ascii=False)


# ---------------------------------------------------------------- helpers


def element_label(X, x):
    if isinstance(X, FdAlgebra):
        return [X.field.literal(c) for c in x]
    return X.labels[x]


def sub_label(S: Subobject) -> str:
    X = S.ambient
    if S.is_algebra:
        return S.describe()
    return "{" + ",".join(X.labels[x] for x in bits(S.carrier)) + "}"


def instance(X, subs: Sequence[Subobject] = (), **params) -> dict:
    out = {"structure": X.name, "subs": [sub_label(s) for s in subs]}
    out.update(params)
    return out


def outside(A: Subobject, B: Subobject):
    """Some element of A not in B, or None."""
    if A.is_algebra:
        for v in A.carrier.basis:
            if v not in B.carrier:
                return v
        return None
    rest = A.carrier & ~B.carrier
    return bits(rest)[0] if rest else None


def _trail(**sides: CommutatorResult) -> dict:
    return {k: {"certainty": r.certainty, "method": r.method} for k, r in sides.items()}


def compare_le(check: str, inst: dict, lhs: CommutatorResult, rhs: CommutatorResult) -> VerificationReport:
    X = lhs.value.ambient
    x = outside(lhs.value, rhs.value)
    trail = _trail(lhs=lhs, rhs=rhs)
    if x is None:
        return VerificationReport(check, inst, "pass" if lhs.exact else "consistent", None, trail)
    w = {"element": element_label(X, x), "in": "lhs", "not_in": "rhs"}
    return VerificationReport(check, inst, "fail" if rhs.exact else "inconclusive", w, trail)


def compare_eq(check: str, inst: dict, lhs: CommutatorResult, rhs: CommutatorResult) -> VerificationReport:
    X = lhs.value.ambient
    trail = _trail(lhs=lhs, rhs=rhs)
    for a, b, name in ((lhs, rhs, "lhs"), (rhs, lhs, "rhs")):
        x = outside(a.value, b.value)
        if x is not None:
            other = "rhs" if name == "lhs" else "lhs"
            w = {"element": element_label(X, x), "in": name, "not_in": other}
            return VerificationReport(check, inst, "fail" if b.exact else "inconclusive", w, trail)
    return VerificationReport(check, inst, "pass" if lhs.exact and rhs.exact else "consistent", None, trail)


def _coherent(X, check: str) -> None:
    if isinstance(X, FiniteLoop):
        raise VarietyError(f"{check} is stated for groups and algebras; {X.name} is a loop")


def _require_normal(X, subs: Iterable[Subobject]) -> None:
    for s in subs:
        if not is_normal(X, s):
            raise NotNormal(f"{sub_label(s)} is not normal in {X.name}", sub_label(s))


def _uncertified(options: HigginsOptions) -> HigginsOptions:
    return HigginsOptions(options.bound, options.depth, certify=False)


def _lhs(X, subs, options) -> CommutatorResult:
    """Left side of an n-ary identity.  Groups use the raw kernel-word bound, so the check is not
    certified by the very formula it is testing."""
    if isinstance(X, FiniteGroup) and len(subs) > 2:
        return higgins(X, subs, _uncertified(options))
    return higgins(X, subs, options)


def _cross_certify(rep: VerificationReport, lhs: CommutatorResult, rhs: CommutatorResult) -> VerificationReport:
    """Group bound equal to an exact right side: the only gap is the upper direction, which the
    kernel-word bound cannot exceed without producing an element outside rhs."""
    if rep.status == "consistent" and rhs.exact and lhs.value == rhs.value and isinstance(lhs.value.ambient, FiniteGroup):
        rep.status = "pass"
        rep.certainty["lhs"] = {"certainty": EXACT, "method": "kernel-word bound reaches the exact right side"}
    return rep


# ---------------------------------------------------------------- theorem checks


def _normality_witness(X, K: Subobject):
    if isinstance(X, FdAlgebra):
        for k in K.carrier.basis:
            for i in range(X.dim):
                e = X.basis_vector(i)
                for p in (X.mul(k, e), X.mul(e, k)):
                    if p not in K.carrier:
                        return {"k": element_label(X, k), "x": element_label(X, e), "product": element_label(X, p)}
        return None
    if isinstance(X, FiniteGroup):
        for k in bits(K.carrier):
            for g in range(X.order):
                c = X.conj(g, k)
                if not K.carrier >> c & 1:
                    return {"k": X.labels[k], "g": X.labels[g], "conjugate": X.labels[c]}
    return None


def check_normality_criterion(X, K: Subobject, options: HigginsOptions = DEFAULT) -> VerificationReport:
    normal = is_normal(X, K)
    c = higgins(X, [K, whole(X)], options)
    x = outside(c.value, K)
    inst = instance(X, [K])
    trail = {"commutator": {"certainty": c.certainty, "method": c.method}, "is_normal": normal}
    wit = None if x is None else {"element": element_label(X, x), "in": "[K,X]", "not_in": "K"}
    if isinstance(X, FiniteLoop):
        # only "[K,X] not <= K" is conclusive here
        if x is not None:
            return VerificationReport("normality-criterion", inst, "fail" if normal else "pass", wit, trail)
        return VerificationReport("normality-criterion", inst, "consistent" if normal else "inconclusive", None, trail)
    if normal == (x is None):
        w = wit if x is not None else None
        return VerificationReport("normality-criterion", inst, "pass" if c.exact else "consistent", w, trail)
    if normal:
        return VerificationReport("normality-criterion", inst, "fail", wit, trail)
    w = _normality_witness(X, K)
    return VerificationReport("normality-criterion", inst, "fail" if c.exact else "inconclusive", w, trail)


def check_normal_closure(X, K: Subobject, options: HigginsOptions = DEFAULT) -> VerificationReport:
    """normal_closure(K) = K v [K,X]."""
    _coherent(X, "normal-closure")
    direct = CommutatorResult(normal_closure(X, K), EXACT, "conjugation closure")
    c = higgins(X, [K, whole(X)], options)
    via = CommutatorResult(join(X, K, c.value), c.certainty, "K v [K,X]")
    return compare_eq("normal-closure", instance(X, [K]), direct, via)


def check_inequality(X, subs: Sequence[Subobject], options: HigginsOptions = DEFAULT) -> VerificationReport:
    """[K1,..,Kn,X] <= [cl K1,..,cl Kn]."""
    _coherent(X, "inequality")
    lhs = higgins(X, list(subs) + [whole(X)], options)
    rhs = higgins(X, [normal_closure(X, s) for s in subs], options)
    return compare_le("inequality", instance(X, subs), lhs, rhs)


def check_three_subobjects(X, K: Subobject, L: Subobject, M: Subobject,
                           options: HigginsOptions = DEFAULT) -> VerificationReport:
    """[K,L,M] = [[K,L],M] v [[M,K],L] for normal K, L, M."""
    _coherent(X, "three-subobjects")
    _require_normal(X, (K, L, M))
    lhs = _lhs(X, [K, L, M], options)
    kl = higgins(X, [K, L], options)
    mk = higgins(X, [M, K], options)
    a = higgins(X, [kl.value, M], options)
    b = higgins(X, [mk.value, L], options)
    rhs = CommutatorResult(join(X, a.value, b.value), combine(kl.certainty, mk.certainty, a.certainty, b.certainty),
                           "[[K,L],M] v [[M,K],L]")
    return _cross_certify(compare_eq("three-subobjects", instance(X, [K, L, M]), lhs, rhs), lhs, rhs)


def check_n_subobjects(X, subs: Sequence[Subobject], options: HigginsOptions = DEFAULT) -> VerificationReport:
    _coherent(X, "n-subobjects")
    if len(subs) < 3:
        raise StructureError("n-subobjects needs n >= 3")
    _require_normal(X, subs)
    lhs = _lhs(X, subs, options)
    rhs = n_subobjects_rhs(X, subs, options)
    return _cross_certify(compare_eq("n-subobjects", instance(X, subs), lhs, rhs), lhs, rhs)


def left_nested(X, subs: Sequence[Subobject], options: HigginsOptions = DEFAULT) -> CommutatorResult:
    """[..[[S1,S2],S3],..,Sn]"""
    acc = higgins(X, [subs[0], subs[1]], options)
    cert = [acc.certainty]
    for s in subs[2:]:
        acc = higgins(X, [acc.value, s], options)
        cert.append(acc.certainty)
    return CommutatorResult(acc.value, combine(*cert), "left-nested binary")


def binary_decomposition_rhs(X, subs: Sequence[Subobject], options: HigginsOptions = DEFAULT) -> CommutatorResult:
    parts = [left_nested(X, [subs[i] for i in sigma], options) for sigma in permutations(range(len(subs)))]
    return CommutatorResult(join_all(X, [p.value for p in parts]), combine(*(p.certainty for p in parts)),
                            "join over permutations of left-nested binary commutators")


def check_binary_decomposition(X, subs: Sequence[Subobject], options: HigginsOptions = DEFAULT) -> VerificationReport:
    _coherent(X, "binary-decomposition")
    if len(subs) < 3:
        raise StructureError("binary-decomposition needs n >= 3")
    _require_normal(X, subs)
    lhs = _lhs(X, subs, options)
    rhs = binary_decomposition_rhs(X, subs, options)
    return _cross_certify(compare_eq("binary-decomposition", instance(X, subs), lhs, rhs), lhs, rhs)


def check_nilpotency_agreement(X, max_n: int, options: HigginsOptions = DEFAULT) -> VerificationReport:
    """Both lower central series agree termwise up to max_n."""
    _coherent(X, "nilpotency-agreement")
    nested = lower_central_series(X, "nested_binary", max_n, options)
    unbiased = lower_central_series(X, "unbiased_higgins", max_n, _uncertified(options))
    inst = instance(X, max_n=max_n)
    chains = {"nested": [r.value.size for r in nested], "unbiased": [r.value.size for r in unbiased]}
    status = "pass"
    witness = None
    for m, (a, b) in enumerate(zip(nested, unbiased), start=1):
        rep = _cross_certify(compare_eq("nilpotency-agreement", inst, b, a), b, a)
        if rep.status != "pass":
            status, witness = rep.status, {"term": m, **(rep.witness or {})}
            if status == "fail":
                break
    rep = VerificationReport("nilpotency-agreement", inst, status, witness,
                             {"chains": chains, "nested": combine(*(r.certainty for r in nested))})
    return rep


def check_sh_nh(X, K: Subobject, L: Subobject, options: HigginsOptions = DEFAULT) -> VerificationReport:
    """[K,L,X] <= [K,L] and [K,L] normal, for normal K, L."""
    _coherent(X, "sh-nh")
    _require_normal(X, (K, L))
    kl = higgins(X, [K, L], options)
    klx = higgins(X, [K, L, whole(X)], options)
    rep = compare_le("sh-nh", instance(X, [K, L]), klx, kl)
    normal = is_normal(X, kl.value)
    rep.certainty["commutator_normal"] = normal
    if not normal and kl.exact:
        rep.status = "fail"
        rep.witness = {"not_normal": sub_label(kl.value), **(_normality_witness(X, kl.value) or {})}
    return rep


def search_loop_divergence(catalog: Iterable, depth: int = 4, sink=None) -> list[VerificationReport]:
    """Look for x in a lower bound of [X,X,X] outside the nested Huq commutator [[X,X],X]_Huq.

    Higgins <= Huq termwise, so such an x certifies [X,X,X] is not below [[X,X],X].
    """
    options = HigginsOptions(depth=depth)
    out = []
    for X in catalog:
        top = whole(X)
        lb = higgins(X, [top, top, top], options)
        h2 = huq(X, top, top, options)
        h3 = huq(X, h2.value, top, options)
        x = outside(lb.value, h3.value)
        trail = {"lower_bound": {"certainty": lb.certainty, "size": lb.value.size},
                 "huq2": h2.value.size, "huq3": h3.value.size, "huq_certainty": combine(h2.certainty, h3.certainty)}
        if x is not None and h3.exact:
            w = {"element": element_label(X, x), "in": "[X,X,X] lower bound", "not_in": "[[X,X],X] Huq"}
            rep = VerificationReport("loop-divergence", instance(X, depth=depth), "pass", w, trail)
        else:
            rep = VerificationReport("loop-divergence", instance(X, depth=depth), "inconclusive", None, trail)
        out.append(rep)
        if sink is not None:
            sink(rep)
    return out


# ---------------------------------------------------------------- stability suite


def _random_sub(X, rng: random.Random, pool=None) -> Subobject:
    if isinstance(X, FdAlgebra):
        f = X.field
        elems = f.elements() if f.kind == "prime" else [0, 1, -1]
        gens = [[rng.choice(elems) for _ in range(X.dim)] for _ in range(rng.randint(0, 2))]
        return generate(X, gens) if gens else trivial(X)
    return rng.choice(pool)


def _random_normal(X, rng: random.Random, pool=None) -> Subobject:
    if isinstance(X, FdAlgebra):
        return normal_closure(X, _random_sub(X, rng))
    return rng.choice(pool)


def stability_reports(X, subs: Sequence[Subobject], rng: random.Random, options: HigginsOptions = DEFAULT,
                      pools=None) -> list[VerificationReport]:
    """Items (0)-(6) of the standard stability list, plus [K1, K2 v K3] = [K1,K2] v [K1,K3] v [K1,K2,K3]."""
    n = len(subs)
    subs = list(subs)
    H = lambda args: higgins(X, list(args), options)  # noqa: E731
    sub_pool, normal_pool = pools or (None, None)
    out = []
    inst = instance(X, subs)

    zs = list(subs)
    zs[rng.randrange(n)] = trivial(X)
    r = H(zs)
    out.append(VerificationReport("stability-0", instance(X, zs), "pass" if r.value.is_trivial() else "fail",
                                  None if r.value.is_trivial() else {"element": element_label(X, outside(r.value, trivial(X)))},
                                  _trail(value=r)))

    perm = list(range(n))
    rng.shuffle(perm)
    out.append(compare_eq("stability-1", dict(inst, permutation=perm), H(subs), H([subs[i] for i in perm])))

    N = _random_normal(X, rng, normal_pool)
    Y, f = quotient(X, N)
    lhs = H(subs)
    lhs_img = CommutatorResult(f.image(lhs.value), lhs.certainty, "image of commutator")
    rhs = higgins(Y, [f.image(s) for s in subs], options)
    rep = compare_eq("stability-2", dict(inst, kernel=sub_label(N)), lhs_img, rhs)
    out.append(rep)

    i = rng.randrange(n)
    smaller = meet(X, subs[i], _random_sub(X, rng, sub_pool))
    ls = subs[:i] + [smaller] + subs[i + 1:]
    out.append(compare_le("stability-3", dict(inst, index=i, replaced_by=sub_label(smaller)), H(ls), H(subs)))

    if n >= 3:
        i = rng.randrange(2, n)
        inner = H(subs[:i])
        nested = H([inner.value] + subs[i:])
        nested = CommutatorResult(nested.value, combine(inner.certainty, nested.certainty), nested.method)
        out.append(compare_le("stability-4", dict(inst, prefix=i), nested, H(subs)))

        i = rng.randrange(n - 1)
        dup = subs[:i + 1] + [subs[i]] + subs[i + 2:]
        out.append(compare_le("stability-5", dict(instance(X, dup), index=i),
                              H(dup), H(dup[:i + 1] + dup[i + 2:])))

    extra = _random_sub(X, rng, sub_pool)
    joined = H(subs[:-1] + [join(X, subs[-1], extra)])
    a, b, c = H(subs), H(subs[:-1] + [extra]), H(subs + [extra])
    rhs = CommutatorResult(join_all(X, [a.value, b.value, c.value]), combine(a.certainty, b.certainty, c.certainty), "join")
    out.append(compare_eq("stability-6", dict(inst, joined_with=sub_label(extra)), joined, rhs))

    K1, K2, K3 = subs[0], subs[-1], extra
    lhs = H([K1, join(X, K2, K3)])
    a, b, c = H([K1, K2]), H([K1, K3]), H([K1, K2, K3])
    rhs = CommutatorResult(join_all(X, [a.value, b.value, c.value]), combine(a.certainty, b.certainty, c.certainty), "join")
    out.append(compare_eq("join-formula", instance(X, [K1, K2, K3]), lhs, rhs))
    return out


def stability_suite(X, samples: int, seed: int, options: HigginsOptions = DEFAULT) -> list[VerificationReport]:
    rng = random.Random(f"{seed}:{X.name}")
    pools = None
    if not isinstance(X, FdAlgebra):
        pools = (all_subobjects(X), normal_subobjects(X))
    reports = []
    for _ in range(samples):
        n = rng.choice((2, 3))
        subs = [_random_sub(X, rng, pools[0] if pools else None) for _ in range(n)]
        for r in stability_reports(X, subs, rng, options, pools):
            r.seed = seed
            reports.append(r)
    return reports


# ---------------------------------------------------------------- corpus runs


def corpus_reports(seed: int = 0, samples: int = 10, options: HigginsOptions = DEFAULT) -> list[VerificationReport]:
    """Everything `verify all` runs: algebra and group identity checks on bundled subobjects,
    nilpotency agreement, normality, a seeded stability sample, and the loop divergence search."""
    from .corpus import algebras, bundled_ideals, bundled_normal_subgroups, group_loops, groups, loops, small_groups

    reps: list[VerificationReport] = []
    rng = random.Random(seed)
    for X in algebras().values():
        ideals = bundled_ideals(X)
        for t in product(ideals, repeat=3):
            reps.append(check_n_subobjects(X, t, options))
            reps.append(check_binary_decomposition(X, t, options))
        for t in rng.sample(list(product(ideals, repeat=4)), min(20, len(ideals) ** 4)):
            reps.append(check_binary_decomposition(X, t, options))
            reps.append(check_n_subobjects(X, t, options))
        for K, L in product(ideals, repeat=2):
            reps.append(check_sh_nh(X, K, L, options))
            reps.append(check_inequality(X, [K, L], options))
        for K in ideals:
            reps.append(check_normality_criterion(X, K, options))
        reps.append(check_nilpotency_agreement(X, 5, options))
    for G in groups().values():
        Ns = bundled_normal_subgroups(G)
        for t in product(Ns, repeat=3):
            reps.append(check_three_subobjects(G, *t, options=options))
            reps.append(check_n_subobjects(G, t, options))
        for K, L in product(Ns, repeat=2):
            reps.append(check_sh_nh(G, K, L, options))
        reps.append(check_nilpotency_agreement(G, 5, options))
        pool = all_subobjects(G)
        for n in (2, 3):
            for _ in range(samples):
                reps.append(check_inequality(G, [rng.choice(pool) for _ in range(n)], options))
    for G in small_groups().values():
        for K in all_subobjects(G):
            reps.append(check_normality_criterion(G, K, options))
            reps.append(check_normal_closure(G, K, options))
    for X in list(algebras().values()) + list(groups().values()):
        for r in stability_suite(X, samples, seed, options):
            reps.append(r)
    reps.extend(search_loop_divergence(list(group_loops().values()) + list(loops().values()), options.depth))
    for r in reps:
        r.seed = seed
    return reps


def summarize(reports: Iterable[VerificationReport]) -> dict[str, int]:
    counts = dict.fromkeys(STATUSES, 0)
    for r in reports:
        counts[r.status] += 1
    return counts
