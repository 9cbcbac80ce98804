"""Higgins and Huq commutators in the three varieties, normal closures, lower central series.

Every value carries a certainty.  Algebra values are exact.  Binary group values are exact
(the kernel of K*L -> KxL is generated by the commutators [k,l]).  Higher group values are a
sound lower bound, promoted to exact when they coincide with the n Subobjects join formula
for normal arguments.  Loop values are always lower bounds, except for the Huq commutator,
which is computed exactly from the cooperation criterion.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

from .algcoproduct import higgins_algebra
from .freewords import (
    E,
    FreeProduct,
    Word,
    fp_inverse,
    kernel_images,
    loop_deletion_trivial,
    loop_normalize,
    normalize,
    substitute_block,
    term_blocks,
    var,
)
from .structures import (
    AmbientMismatch,
    FdAlgebra,
    FiniteGroup,
    FiniteLoop,
    NotNormal,
    StructureError,
    Subobject,
    bits,
    is_normal,
    join,
    join_all,
    mask_of,
    normal_subobjects,
    quotient,
    subobject_from_mask,
    trivial,
    whole,
)

EXACT = "exact"
LOWER = "lower_bound"


@dataclass(frozen=True)
class HigginsOptions:
    bound: int = 8  # syllable bound for kernel-word enumeration (groups)
    depth: int = 4  # max leaves per side of catalog loop terms
    certify: bool = True  # promote group values via the join formula when arguments are normal

    def __post_init__(self):
        if self.bound < 2 or self.depth < 1:
            raise ValueError("bound must be >= 2 and depth >= 1")


DEFAULT = HigginsOptions()


@dataclass(frozen=True)
class CommutatorResult:
    value: Subobject
    certainty: str
    method: str
    bound_used: int | None = None
    notes: tuple = field(default=(), compare=False)

    @property
    def exact(self) -> bool:
        return self.certainty == EXACT

    def to_json(self) -> dict:
        out = {"value": self.value.to_json(), "size": self.value.size, "certainty": self.certainty, "method": self.method}
        if self.bound_used is not None:
            out["bound"] = self.bound_used
        if self.notes:
            out["notes"] = list(self.notes)
        return out


def combine(*certainties: str) -> str:
    return EXACT if all(c == EXACT for c in certainties) else LOWER


def _check(X, subs: Sequence[Subobject]) -> None:
    if len(subs) < 2:
        raise StructureError(f"commutator needs at least 2 arguments, got {len(subs)}")
    for s in subs:
        if s.ambient is not X:
            raise AmbientMismatch(f"argument does not belong to {X.name}")


def higgins(X, subs: Sequence[Subobject], options: HigginsOptions = DEFAULT) -> CommutatorResult:
    _check(X, subs)
    if any(s.is_trivial() for s in subs):
        return CommutatorResult(trivial(X), EXACT, "trivial argument")
    if isinstance(X, FdAlgebra):
        return CommutatorResult(Subobject(X, higgins_algebra(X, subs)), EXACT, "mixed span fixed point")
    if isinstance(X, FiniteGroup):
        return _group_higgins(X, tuple(s.carrier for s in subs), options)
    lb = loop_lower_bound(X, tuple(s.carrier for s in subs), options.depth)
    return CommutatorResult(Subobject(X, lb), LOWER, f"loop term catalog, depth {options.depth}")


# ---------------------------------------------------------------- groups


def _normal_closure_in(G: FiniteGroup, mask: int, ambient: int) -> int:
    """Normal closure of the subgroup generated by mask inside the subgroup `ambient`."""
    key = ("ncl_in", mask, ambient)
    hit = G._cache.get(key)
    if hit is not None:
        return hit
    conj = bits(ambient)
    m = mask | 1
    work = bits(m)
    while work:
        s = work.pop()
        for g in conj:
            c = G.conj(g, s)
            if not m >> c & 1:
                m |= 1 << c
                work.append(c)
    out = subobject_from_mask(G, m).carrier
    G._cache[key] = out
    return out


def _commutator_set(G: FiniteGroup, A: int, B: int) -> int:
    out = 0
    bs = bits(B)
    for a in bits(A):
        for b in bs:
            out |= 1 << G.commutator(a, b)
    return out


def group_mixed_table(G: FiniteGroup, masks: Sequence[int]) -> dict[int, int]:
    """Least W_T (T a bitmask of blocks) with W_{i} = K_i, W_T normal in the join J_T and
    [W_A, W_B] <= W_T whenever A | B = T.  Each W_T lies in the image of the co-smash of the
    blocks in T: commutators of kernel words for A and B are kernel words for A | B, and the
    co-smash is normal in the free product.
    """
    key = ("mixed", tuple(masks))
    hit = G._cache.get(key)
    if hit is not None:
        return hit
    n = len(masks)
    table = {1 << i: masks[i] | 1 for i in range(n)}
    joins = {}
    for T in sorted(range(1, 1 << n), key=lambda m: (bin(m).count("1"), m)):
        joins[T] = subobject_from_mask(G, mask_of(x for i in range(n) if T >> i & 1 for x in bits(masks[i]))).carrier
        if T in table:
            continue
        below = [A for A in table if A | T == T]
        # conjugating a kernel word for A by letters from T keeps it a kernel word for A
        U = {A: _normal_closure_in(G, table[A], joins[T]) for A in below}
        W = 1
        for A in below:
            for B in below:
                if A | B == T:
                    W |= _commutator_set(G, U[A], U[B])
        W = _normal_closure_in(G, W, joins[T])
        while True:
            nxt = W
            for A in below:
                nxt |= _commutator_set(G, W, U[A])
            nxt = _normal_closure_in(G, nxt, joins[T])
            if nxt == W:
                break
            W = nxt
        table[T] = W
    G._cache[key] = table
    return table


def group_lower_bound(G: FiniteGroup, masks: Sequence[int], bound: int) -> int:
    """Sound lower bound: kernel-word images up to `bound` syllables together with the mixed
    commutator table, normally closed in the join of the arguments."""
    masks = tuple(m | 1 for m in masks)
    key = ("glb", masks, bound)
    hit = G._cache.get(key)
    if hit is not None:
        return hit
    full = (1 << len(masks)) - 1
    table = group_mixed_table(G, masks)
    # binary: the table entry is already <[k,l]>, the whole kernel image
    enum = kernel_images(FreeProduct(G, masks), bound) if len(masks) > 2 else 0
    J = subobject_from_mask(G, mask_of(x for m in masks for x in bits(m))).carrier
    out = _normal_closure_in(G, table[full] | enum, J)
    G._cache[key] = out
    return out


def _group_higgins(G: FiniteGroup, masks: tuple[int, ...], options: HigginsOptions) -> CommutatorResult:
    key = ("ghiggins", masks, options)
    hit = G._cache.get(key)
    if hit is not None:
        return hit
    lb = group_lower_bound(G, masks, options.bound)
    value = Subobject(G, lb)
    if len(masks) == 2:
        res = CommutatorResult(value, EXACT, "cartesian subgroup generated by [k,l]", options.bound)
    elif options.certify and all(is_normal(G, Subobject(G, m)) for m in masks):
        rhs = n_subobjects_rhs(G, [Subobject(G, m) for m in masks], options)
        if rhs.exact and rhs.value == value:
            res = CommutatorResult(value, EXACT, "lower bound certified by the n subobjects formula", options.bound)
        else:
            note = "lower bound differs from join formula" if rhs.exact else "join formula not exact"
            res = CommutatorResult(value, LOWER, "kernel words + mixed commutators", options.bound, (note,))
    else:
        res = CommutatorResult(value, LOWER, "kernel words + mixed commutators", options.bound)
    G._cache[key] = res
    return res


def n_subobjects_rhs(X, subs: Sequence[Subobject], options: HigginsOptions = DEFAULT) -> CommutatorResult:
    """[[K1,K2],K3,..,Kn] v [K2,[K1,K3],K4,..,Kn] v ... v [K2,..,K(n-1),[K1,Kn]] for normal K_i."""
    n = len(subs)
    if n < 3:
        raise StructureError("the n subobjects formula needs n >= 3")
    parts = []
    for k in range(1, n):
        inner = higgins(X, [subs[0], subs[k]], options)
        if inner.exact and not isinstance(X, FiniteLoop) and not is_normal(X, inner.value):
            raise NotNormal(f"binary commutator {inner.value.describe()} is not normal in {X.name}")
        args = list(subs[1:k]) + [inner.value] + list(subs[k + 1:])
        parts.append(inner)
        parts.append(higgins(X, args, options))
    value = join_all(X, [p.value for p in parts[1::2]])
    return CommutatorResult(value, combine(*(p.certainty for p in parts)), "n subobjects join")


def group_witness_words(G: FiniteGroup, masks: Sequence[int], bound: int) -> dict[int, Word]:
    """For every element of `group_lower_bound`, an explicit word in K_1 * ... * K_n mapping to it.

    Built alongside the mixed table: commutators of witness words, products, and conjugates by
    single letters.  Independent checks (`is_kernel_word`, evaluation) can then re-verify each one.
    """
    masks = tuple(m | 1 for m in masks)
    n = len(masks)
    P = FreeProduct(G, masks)
    t = G.table
    letters = {1 << i: [((i + 1, g),) for g in bits(masks[i]) if g] for i in range(n)}

    def closure(gens: dict[int, Word], conj_letters: list[Word]) -> dict[int, Word]:
        """Words for the normal closure of <gens> under conjugation by the given letters."""
        words = {0: ()}
        frontier = [0]
        gens = dict(gens)
        while True:
            while frontier:
                x = frontier.pop()
                for g, wg in list(gens.items()):
                    y = t[x][g]
                    if y not in words:
                        words[y] = normalize(G, words[x] + wg)
                        frontier.append(y)
            added = False
            for x, wx in list(words.items()):
                for lw in conj_letters:
                    y = G.conj(lw[0][1], x)
                    if y not in words:
                        words[y] = normalize(G, lw + wx + fp_inverse(P, lw))
                        gens[y] = words[y]
                        frontier.append(y)
                        added = True
            if not added and not frontier:
                return words

    table: dict[int, dict[int, Word]] = {}
    for i in range(n):
        table[1 << i] = {0: ()} | {w[0][1]: w for w in letters[1 << i]}
    for T in sorted(range(1, 1 << n), key=lambda m: (bin(m).count("1"), m)):
        if T in table:
            continue
        conj = [w for A, ws in letters.items() if A | T == T for w in ws]
        below = [A for A in table if A | T == T]
        U = {A: closure({x: w for x, w in table[A].items() if x}, conj) for A in below}
        gens: dict[int, Word] = {}
        for A in below:
            for B in below:
                if A | B == T:
                    for a, wa in U[A].items():
                        for b, wb in U[B].items():
                            c = G.commutator(a, b)
                            if c and c not in gens:
                                gens[c] = normalize(G, wa + wb + fp_inverse(P, wa) + fp_inverse(P, wb))
        words = closure(gens, conj)
        while True:
            new = {}
            for A in below:
                for a, wa in list(words.items()):
                    for b, wb in U[A].items():
                        c = G.commutator(a, b)
                        if c not in words and c not in new:
                            new[c] = normalize(G, wa + wb + fp_inverse(P, wa) + fp_inverse(P, wb))
            if not new:
                break
            gens.update(new)
            words = closure(gens, conj)
        table[T] = words
    full = (1 << n) - 1
    words = table[full]
    # bounded enumeration contributes generators too; attach their shortest words
    enum = kernel_images(P, bound) & ~mask_of(words)
    if enum:
        from .freewords import enumerate_kernel_words

        extra = {}
        for w in enumerate_kernel_words(P, bound):
            x = P.image(w)
            if enum >> x & 1 and x not in extra:
                extra[x] = w
        gens = {x: w for x, w in words.items() if x} | extra
        words = closure(gens, [w for ws in letters.values() for w in ws])
    return words


# ---------------------------------------------------------------- loops


def _base_terms(nvars: int, leaves: int) -> set:
    by = {1: {var(i, 0) for i in range(1, nvars + 1)}}
    for L in range(2, leaves + 1):
        level = set()
        for a in range(1, L):
            for x in by[a]:
                for y in by[L - a]:
                    for op in ("mul", "ldiv", "rdiv"):
                        level.add(loop_normalize((op, x, y)))
        by[L] = level
    return set().union(*by.values())


@lru_cache(maxsize=None)
def loop_term_catalog(nvars: int, depth: int) -> tuple:
    """Deletion-trivial terms t1/t2 and t1\\t2 in variables var(1,0)..var(nvars,0), one block each.

    t1, t2 range over normalized terms with <= depth leaves whose single-variable deletions agree.
    """
    buckets: dict = {}
    blocks = set(range(1, nvars + 1))
    for t in _base_terms(nvars, depth):
        if term_blocks(t) != blocks:
            continue
        sig = tuple(loop_normalize(substitute_block(t, b)) for b in sorted(blocks))
        buckets.setdefault(sig, []).append(t)
    out = set()
    for group in buckets.values():
        group.sort(key=repr)
        for t1 in group:
            for t2 in group:
                if t1 == t2:
                    continue
                for op in ("rdiv", "ldiv"):
                    term = loop_normalize((op, t1, t2))
                    if term != E and loop_deletion_trivial(term):
                        out.add(term)
    return tuple(sorted(out, key=repr))


def _function_tables(X, nvars: int, depth: int) -> list[np.ndarray]:
    """Distinct value tables (shape (order,)*nvars) of the catalog terms evaluated on X."""
    key = ("catalog_tables", nvars, depth)
    hit = X._cache.get(key)
    if hit is not None:
        return hit
    from .freewords import evaluate

    n = X.order
    grids = np.meshgrid(*[np.arange(n)] * nvars, indexing="ij")
    env = {(i + 1, 0): grids[i] for i in range(nvars)}
    seen = set()
    tables = []
    for term in loop_term_catalog(nvars, depth):
        vals = np.asarray(evaluate(term, X, env), dtype=np.int64)
        h = vals.tobytes()
        if h in seen:
            continue
        seen.add(h)
        if np.all(vals == 0):
            continue
        tables.append(vals)
    X._cache[key] = tables
    return tables


def _loop_normal_closure_in(X: FiniteLoop, mask: int, ambient: int) -> int:
    """Least subloop containing mask that is invariant under inner mappings of the subloop `ambient`."""
    from .structures import _table_closure

    t, ld, rd = X.table, X.ldiv_table, X.rdiv_table
    amb = bits(ambient)
    m = _table_closure(X, mask)
    while True:
        new = m
        for z in bits(m):
            for x in amb:
                new |= 1 << ld[x][t[z][x]]
                for y in amb:
                    xy = t[x][y]
                    new |= 1 << ld[xy][t[x][t[y][z]]]
                    new |= 1 << rd[t[t[z][x]][y]][xy]
        if new == m:
            return m
        m = _table_closure(X, new)


def loop_lower_bound(X: FiniteLoop, masks: Sequence[int], depth: int) -> int:
    """Mixed table over block subsets, seeded by evaluating catalog terms with each variable
    ranging over an already-certified W_A; the union of the A's must be T."""
    masks = tuple(m | 1 for m in masks)
    key = ("llb", masks, depth)
    hit = X._cache.get(key)
    if hit is not None:
        return hit
    n = len(masks)
    tabs2 = _function_tables(X, 2, depth)
    tabs3 = _function_tables(X, 3, min(depth, 3))
    table = {1 << i: masks[i] for i in range(n)}
    for T in sorted(range(1, 1 << n), key=lambda m: (bin(m).count("1"), m)):
        if T in table:
            continue
        J = subobject_from_mask(X, mask_of(x for i in range(n) if T >> i & 1 for x in bits(masks[i]))).carrier
        below = [A for A in table if A | T == T]
        W = 1
        while True:
            cur = dict(table)
            cur[T] = W
            subsets = below + [T]
            vals = set()
            for A in subsets:
                ia = np.array(bits(cur[A]))
                for B in subsets:
                    if A | B != T:
                        continue
                    ib = np.array(bits(cur[B]))
                    for tab in tabs2:
                        vals.update(np.unique(tab[np.ix_(ia, ib)]).tolist())
                    for C in subsets:
                        if A | B | C != T or len({A, B, C}) == 1 and A != T:
                            continue
                        ic = np.array(bits(cur[C]))
                        for tab in tabs3:
                            vals.update(np.unique(tab[np.ix_(ia, ib, ic)]).tolist())
            nxt = _loop_normal_closure_in(X, W | mask_of(vals), J)
            if nxt == W:
                break
            W = nxt
        table[T] = W
    out = table[(1 << n) - 1]
    X._cache[key] = out
    return out


def cooperate_modulo(X, K: int, L: int, N: Subobject | None) -> bool:
    """Do K and L cooperate in X/N: (k1 l1)(k2 l2) = (k1 k2)(l1 l2) for all k's in K, l's in L."""
    if N is None:
        Y, f = X, None
    else:
        Y, f = quotient(X, N)
    ks = sorted({f(k) if f else k for k in bits(K)})
    ls = sorted({f(l) if f else l for l in bits(L)})
    t = Y.np_table
    k1, l1, k2, l2 = np.meshgrid(ks, ls, ks, ls, indexing="ij")
    lhs = t[t[k1, l1], t[k2, l2]]
    rhs = t[t[k1, k2], t[l1, l2]]
    return bool(np.all(lhs == rhs))


def loop_huq(X: FiniteLoop | FiniteGroup, K: Subobject, L: Subobject) -> Subobject:
    """Least normal N such that K and L cooperate in X/N; the admissible N are closed under meets."""
    key = ("huq", K.carrier, L.carrier)
    hit = X._cache.get(key)
    if hit is not None:
        return hit
    out = whole(X).carrier
    for N in normal_subobjects(X):
        if N.carrier & out != out and cooperate_modulo(X, K.carrier, L.carrier, N):
            out &= N.carrier
    res = Subobject(X, out)
    X._cache[key] = res
    return res


# ---------------------------------------------------------------- derived notions


def huq(X, K: Subobject, L: Subobject, options: HigginsOptions = DEFAULT) -> CommutatorResult:
    """[K,L] v [[K,L],X]: the normal closure of the Higgins commutator."""
    _check(X, [K, L])
    if isinstance(X, FiniteLoop):
        return CommutatorResult(loop_huq(X, K, L), EXACT, "cooperation criterion over normal subloops")
    c = higgins(X, [K, L], options)
    d = higgins(X, [c.value, whole(X)], options)
    return CommutatorResult(join(X, c.value, d.value), combine(c.certainty, d.certainty), "[K,L] v [[K,L],X]", options.bound)


def normal_closure_via_commutator(X, K: Subobject, options: HigginsOptions = DEFAULT) -> CommutatorResult:
    """K v [K,X]"""
    if K.ambient is not X:
        raise AmbientMismatch(f"argument does not belong to {X.name}")
    c = higgins(X, [K, whole(X)], options)
    return CommutatorResult(join(X, K, c.value), c.certainty, "K v [K,X]", c.bound_used)


def lower_central_series(X, mode: str, max_n: int, options: HigginsOptions = DEFAULT) -> list[CommutatorResult]:
    """gamma_1 .. gamma_max_n.  nested_binary: gamma_(m+1) = [gamma_m, X]; unbiased_higgins: gamma_m = [X,..,X]."""
    if max_n < 2:
        raise ValueError("max_n must be at least 2")
    top = whole(X)
    chain = [CommutatorResult(top, EXACT, "X")]
    if mode == "nested_binary":
        for _ in range(max_n - 1):
            r = higgins(X, [chain[-1].value, top], options)
            r = CommutatorResult(r.value, combine(r.certainty, chain[-1].certainty), r.method, r.bound_used, r.notes)
            if r.exact and not isinstance(X, FiniteLoop) and not is_normal(X, r.value):
                raise NotNormal(f"nested series term {r.value.describe()} is not normal in {X.name}")
            chain.append(r)
    elif mode == "unbiased_higgins":
        for m in range(2, max_n + 1):
            chain.append(higgins(X, [top] * m, options))
    else:
        raise ValueError(f"unknown series mode {mode!r}")
    return chain
