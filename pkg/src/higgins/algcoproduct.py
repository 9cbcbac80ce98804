"""Exact n-ary Higgins commutators of subalgebras of a finite-dimensional nonassociative algebra.

Why the fixed point below is exact.  The coproduct K_1 + ... + K_n in the variety of all
nonassociative algebras has a basis of *reduced trees*: binary bracketings of basis vectors of
the K_i in which no subtree has all its leaves in a single factor (such a subtree would collapse
into that factor).  Deleting factor k sends a tree with a k-leaf to 0 and every other tree to the
same reduced tree in the smaller coproduct, so the kernel of the comparison map to the product
of the one-factor-deleted coproducts is spanned by the reduced trees whose leaves meet every
factor.  A reduced tree with leaf-factor set T and at least two leaves is the product of two
reduced trees with leaf sets A, B where A u B = T (A or B may equal T).  Writing W_T for the span
of the evaluations in X of reduced trees with leaf set exactly T gives W_{i} = K_i and
W_T = sum over A u B = T of W_A . W_B, which is the least solution computed here.  The Higgins
commutator is W_{1..n}.

The same value is obtained in any subvariety containing X: the deletion maps act on the
coproduct as commuting linear idempotents, so the kernel is the image of their complementary
product, and that description passes to every quotient of the coproduct.
"""

from __future__ import annotations

from typing import Sequence

from .exactlinalg import Subspace, rref, subspace_sum
from .structures import FdAlgebra, NotSubalgebra, StructureError, Subobject, is_closed


def product_span(X: FdAlgebra, A: Subspace, B: Subspace) -> Subspace:
    """span{u.v : u in basis(A), v in basis(B)}"""
    if A.ambient_dim != X.dim or B.ambient_dim != X.dim or A.field != X.field or B.field != X.field:
        raise StructureError("subspace does not live in this algebra")
    key = ("product", A, B)
    hit = X._cache.get(key)
    if hit is None:
        hit = rref([X.mul(u, v) for u in A.basis for v in B.basis], X.field, X.dim)
        X._cache[key] = hit
    return hit


def _subsets_by_size(n: int) -> list[int]:
    """Nonempty subsets of range(n) as bitmasks, by cardinality then binary value."""
    return sorted(range(1, 1 << n), key=lambda m: (bin(m).count("1"), m))


def mixed_span_table(X: FdAlgebra, subs: Sequence[Subspace]) -> dict[int, Subspace]:
    """Least table W_T (T a nonempty bitmask of blocks) with W_{i} = K_i and W_A . W_B <= W_T for A | B = T."""
    n = len(subs)
    table: dict[int, Subspace] = {1 << i: subs[i] for i in range(n)}
    for T in _subsets_by_size(n):
        if T in table:
            continue
        below = [A for A in table if A | T == T]
        W = rref([], X.field, X.dim)
        for A in below:
            for B in below:
                if A | B == T:
                    W = subspace_sum(W, product_span(X, table[A], table[B]))
        # pairs where one side covers T themselves: iterate to the fixed point
        while True:
            nxt = W
            for A in below + [None]:
                other = W if A is None else table[A]
                nxt = subspace_sum(nxt, product_span(X, W, other))
                nxt = subspace_sum(nxt, product_span(X, other, W))
            if nxt.dim == W.dim:
                break
            W = nxt
        table[T] = W
    return table


def higgins_algebra(X: FdAlgebra, subs: Sequence[Subobject | Subspace]) -> Subspace:
    spaces = [s.carrier if isinstance(s, Subobject) else s for s in subs]
    if len(spaces) < 2:
        raise StructureError(f"commutator needs at least 2 arguments, got {len(spaces)}")
    key = ("higgins_alg", tuple(spaces))
    hit = X._cache.get(key)
    if hit is not None:
        return hit
    for s in spaces:
        if not is_closed(X, Subobject(X, s)):
            raise NotSubalgebra(f"{s} is not a subalgebra of {X.name}")
    if any(s.dim == 0 for s in spaces):
        return rref([], X.field, X.dim)
    table = mixed_span_table(X, spaces)
    out = table[(1 << len(spaces)) - 1]
    X._cache[key] = out
    return out


def reduced_tree_values(X: FdAlgebra, subs: Sequence[Subspace], max_leaves: int) -> Subspace:
    """Brute-force oracle: span of evaluations of every reduced tree with <= max_leaves leaves covering all factors.

    Enumerates trees explicitly (leaves are basis vectors of the factors); only usable for tiny cases.
    """
    n = len(subs)
    full = (1 << n) - 1
    # trees[k] = list of (leafset, value, pure_factor or None) for trees with k leaves
    trees: dict[int, list] = {1: [(1 << i, v, i) for i in range(n) for v in subs[i].basis]}
    for k in range(2, max_leaves + 1):
        level = []
        for a in range(1, k):
            for ls, lv, lp in trees[a]:
                for rs, rv, rp in trees[k - a]:
                    if lp is not None and lp == rp:
                        continue  # same-factor product of leaves: not reduced
                    level.append((ls | rs, X.mul(lv, rv), None))
        # values only matter up to span per leafset; deduplicate
        seen = set()
        dedup = []
        for ls, v, p in level:
            if (ls, v) not in seen:
                seen.add((ls, v))
                dedup.append((ls, v, p))
        trees[k] = dedup
    vals = [v for k in trees for ls, v, p in trees[k] if ls == full and k >= 2]
    return rref(vals, X.field, X.dim)
