"""Free products of finite groups in normal form, and a cancellation normalizer for loop terms.

A free-product word is a tuple of syllables (factor, element) with factors numbered from 1,
adjacent syllables in distinct factors and no identity elements.  Factors are subgroups of a
common finite group, so letters are element indices of that group and 0 is the identity.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

from .structures import FiniteGroup, FiniteLoop, bits

Syllable = tuple[int, int]
Word = tuple[Syllable, ...]
EMPTY: Word = ()


class WordError(ValueError):
    pass


class FreeProduct:
    """K_1 * ... * K_n for subgroups K_i (bitmasks) of one ambient finite group."""

    def __init__(self, group: FiniteGroup, factors: Sequence[int]):
        self.group = group
        self.factors = tuple(int(m) | 1 for m in factors)
        self.n = len(self.factors)

    def letters(self, k: int) -> list[int]:
        """Nonidentity elements of factor k (1-based), in index order."""
        return [x for x in bits(self.factors[k - 1]) if x != 0]

    def check(self, w: Word) -> Word:
        for i, (k, g) in enumerate(w):
            if not 1 <= k <= self.n:
                raise WordError(f"factor index {k} out of range 1..{self.n}")
            if not self.factors[k - 1] >> g & 1:
                raise WordError(f"element {g} is not in factor {k}")
        return normalize(self.group, w)

    def same_as(self, other: "FreeProduct") -> bool:
        return self.group is other.group and self.factors == other.factors

    def image(self, w: Word) -> int:
        """Evaluate the word in the ambient group."""
        t = self.group.table
        x = 0
        for _, g in w:
            x = t[x][g]
        return x


def normalize(G: FiniteGroup, syllables: Sequence[Syllable]) -> Word:
    """Merge adjacent same-factor syllables and drop identities until alternating."""
    t = G.table
    stack: list[Syllable] = []
    for k, g in syllables:
        if g == 0:
            continue
        if stack and stack[-1][0] == k:
            h = t[stack.pop()[1]][g]
            if h != 0:
                stack.append((k, h))
        else:
            stack.append((k, g))
    return tuple(stack)


def fp_concat(P: FreeProduct, w1: Word, w2: Word, Q: FreeProduct | None = None) -> Word:
    if Q is not None and not P.same_as(Q):
        raise WordError("words live in different free products")
    return normalize(P.group, w1 + w2)


def fp_inverse(P: FreeProduct, w: Word) -> Word:
    inv = P.group.inverse
    return tuple((k, inv[g]) for k, g in reversed(w))


def fp_delete(P: FreeProduct, w: Word, k: int) -> Word:
    """Send factor k to the identity and renormalize."""
    if not 1 <= k <= P.n:
        raise WordError(f"factor index {k} out of range 1..{P.n}")
    return normalize(P.group, [s for s in w if s[0] != k])


def is_kernel_word(P: FreeProduct, w: Word) -> bool:
    """True iff every single-factor deletion kills w, i.e. w lies in the co-smash product."""
    return all(not fp_delete(P, w, k) for k in range(1, P.n + 1))


# ---------------------------------------------------------------- bounded kernel search


@lru_cache(maxsize=None)
def _cancellable(labels: tuple[int, ...]) -> bool:
    """Can a label sequence vanish if any merged block of >= 2 syllables may be the identity?

    A pattern-level relaxation of free-product cancellation: single syllables are never the identity.
    """
    blocks: list[list[int]] = []
    for l in labels:
        if blocks and blocks[-1][0] == l:
            blocks[-1][1] += 1
        else:
            blocks.append([l, 1])
    if not blocks:
        return True
    for i, (_, c) in enumerate(blocks):
        if c >= 2:
            rest = tuple(l for j, (l, cc) in enumerate(blocks) if j != i for _ in range(min(cc, 2)))
            if _cancellable(rest):
                return True
    return False


@lru_cache(maxsize=None)
def feasible_prefixes(n: int, bound: int) -> frozenset:
    """Prefixes of alternating factor patterns of length <= bound whose every deletion can cancel."""
    out = set()

    def extend(p):
        if len(p) >= 2 and len(set(p)) == n and all(_cancellable(tuple(x for x in p if x != k)) for k in range(1, n + 1)):
            for i in range(len(p) + 1):
                out.add(p[:i])
        if len(p) == bound:
            return
        for k in range(1, n + 1):
            if not p or p[-1] != k:
                extend(p + (k,))

    extend(())
    return frozenset(out)


def _push(t, red: Word, s: Syllable) -> Word:
    if red and red[-1][0] == s[0]:
        h = t[red[-1][1]][s[1]]
        return red[:-1] + ((s[0], h),) if h else red[:-1]
    return red + (s,)


def enumerate_kernel_words(P: FreeProduct, max_syllables: int) -> Iterator[Word]:
    """Every normal-form kernel word with <= max_syllables syllables, by length then lexicographically."""
    if max_syllables < 2:
        raise WordError("max_syllables must be at least 2")
    n = P.n
    letters = [P.letters(k) for k in range(1, n + 1)]
    if any(not ls for ls in letters):
        return
    prefixes = feasible_prefixes(n, max_syllables)
    t = P.group.table

    def dfs(word, pattern, dels, length):
        remaining = length - len(word)
        if remaining == 0:
            if all(not d for d in dels):
                yield tuple(word)
            return
        for k in range(1, n + 1):
            if pattern and pattern[-1] == k:
                continue
            pat = pattern + (k,)
            if pat not in prefixes:
                continue
            for g in letters[k - 1]:
                s = (k, g)
                nd = tuple(d if j == k - 1 else _push(t, d, s) for j, d in enumerate(dels))
                if any(len(d) > remaining - 1 for d in nd):
                    continue
                word.append(s)
                yield from dfs(word, pat, nd, length)
                word.pop()

    for length in range(2, max_syllables + 1):
        yield from dfs([], (), (EMPTY,) * n, length)


def kernel_images(P: FreeProduct, max_syllables: int) -> int:
    """Bitmask of ambient images of all kernel words with <= max_syllables syllables.

    Same set as mapping `enumerate_kernel_words` through `P.image`, computed by dynamic
    programming over (deletion residues, pattern) states, each carrying the boolean vector of
    images reachable so far, instead of over individual words.
    """
    n = P.n
    letters = [P.letters(k) for k in range(1, n + 1)]
    if any(not ls for ls in letters):
        return 1
    prefixes = feasible_prefixes(n, max_syllables)
    G = P.group
    t = G.table
    # right multiplication by g as an index map: new[y] = old[y g^-1]
    shift = {g: np.array([t[y][G.inverse[g]] for y in range(G.order)]) for ls in letters for g in ls}
    found = np.zeros(G.order, dtype=bool)
    found[0] = True
    start = np.zeros(G.order, dtype=bool)
    start[0] = True
    states = {((EMPTY,) * n, ()): start}
    for step in range(max_syllables):
        remaining = max_syllables - step - 1
        nxt: dict = {}
        for (dels, pattern), imgs in states.items():
            for k in range(1, n + 1):
                if pattern and pattern[-1] == k:
                    continue
                pat = pattern + (k,)
                if pat not in prefixes:
                    continue
                for g in letters[k - 1]:
                    s = (k, g)
                    nd = tuple(d if j == k - 1 else _push(t, d, s) for j, d in enumerate(dels))
                    if any(len(d) > remaining for d in nd):
                        continue
                    moved = imgs[shift[g]]
                    if all(not d for d in nd):
                        found |= moved
                    key = (nd, pat)
                    if key in nxt:
                        nxt[key] |= moved
                    else:
                        nxt[key] = moved
        states = nxt
        if not states:
            break
    return sum(1 << int(i) for i in np.flatnonzero(found))


# ---------------------------------------------------------------- nested commutators


def _commutator_word(P: FreeProduct, u: Word, v: Word) -> Word:
    """[u,v] = u v u^-1 v^-1"""
    return normalize(P.group, u + v + fp_inverse(P, u) + fp_inverse(P, v))


def nested_commutator_word(P: FreeProduct, shape, letters: dict[int, int] | Sequence[int]) -> Word:
    """Expand a nested bracketing over blocks, e.g. [[1, 2], 3], into a normalized word.

    `letters` gives one element per block (a dict, or a sequence indexed by block - 1).
    """
    if isinstance(letters, dict):
        lookup = letters
    else:
        lookup = {i + 1: g for i, g in enumerate(letters)}
    blocks = set()

    def walk(node) -> Word:
        if isinstance(node, int):
            if node not in lookup or not 1 <= node <= P.n:
                raise WordError(f"no letter for block {node}")
            g = lookup[node]
            if not P.factors[node - 1] >> g & 1:
                raise WordError(f"letter {g} not in factor {node}")
            blocks.add(node)
            return ((node, g),) if g else EMPTY
        if isinstance(node, (list, tuple)) and len(node) == 2:
            return _commutator_word(P, walk(node[0]), walk(node[1]))
        raise WordError(f"malformed shape node {node!r}")

    w = walk(shape)
    if len(blocks) < 2:
        raise WordError("shape must mention at least two blocks")
    return w


def shapes(blocks: Sequence[int]) -> Iterator:
    """All full binary bracketings using each block exactly once (left/right order kept)."""
    blocks = tuple(blocks)
    if len(blocks) == 1:
        yield blocks[0]
        return
    first, rest = blocks[0], blocks[1:]
    # split into two nonempty sets, first block on the left, then mirror
    m = len(rest)
    for mask in range(1 << m):
        left = (first,) + tuple(rest[i] for i in range(m) if mask >> i & 1)
        right = tuple(rest[i] for i in range(m) if not mask >> i & 1)
        if not right:
            continue
        for a in shapes(left):
            for b in shapes(right):
                yield [a, b]
                yield [b, a]


# ---------------------------------------------------------------- loop terms

E = ("e",)


def var(block: int, slot: int = 0) -> tuple:
    return ("var", block, slot)


def mul(a, b) -> tuple:
    return ("mul", a, b)


def ldiv(a, b) -> tuple:
    return ("ldiv", a, b)


def rdiv(a, b) -> tuple:
    return ("rdiv", a, b)


_OPS = ("mul", "ldiv", "rdiv")


def _root_rewrite(t):
    op = t[0]
    if op not in _OPS:
        return t
    a, b = t[1], t[2]
    if op == "mul":
        if a == E:
            return b
        if b == E:
            return a
        if a[0] == "rdiv" and a[2] == b:  # (x/y)y -> x
            return a[1]
        if b[0] == "ldiv" and b[1] == a:  # x(x\y) -> y
            return b[2]
    elif op == "rdiv":
        if a == b:
            return E
        if b == E:
            return a
        if a[0] == "mul" and a[2] == b:  # (xy)/y -> x
            return a[1]
    else:
        if a == b:
            return E
        if a == E:
            return b
        if b[0] == "mul" and b[1] == a:  # x\(xy) -> y
            return b[2]
    return t


@lru_cache(maxsize=1 << 16)
def loop_normalize(t):
    """Innermost cancellation; every rewrite returns a normalized subterm or e, so one pass suffices."""
    if t[0] in _OPS:
        return _root_rewrite((t[0], loop_normalize(t[1]), loop_normalize(t[2])))
    return t


def term_size(t) -> int:
    return 1 + term_size(t[1]) + term_size(t[2]) if t[0] in _OPS else 1


def term_blocks(t) -> set[int]:
    if t[0] == "var":
        return {t[1]}
    if t[0] in _OPS:
        return term_blocks(t[1]) | term_blocks(t[2])
    return set()


def substitute_block(t, block: int, value=E):
    if t[0] == "var":
        return value if t[1] == block else t
    if t[0] in _OPS:
        return (t[0], substitute_block(t[1], block, value), substitute_block(t[2], block, value))
    return t


def loop_deletion_trivial(t, blocks: Sequence[int] | None = None) -> bool:
    """Sound certificate that t evaluates into the Higgins commutator of its blocks.

    True iff, for every block, replacing that block's variables by e normalizes to e.
    """
    used = term_blocks(t)
    blocks = used if blocks is None else set(blocks)
    if len(blocks) < 2 or not blocks <= used:
        return False
    return all(loop_normalize(substitute_block(t, b)) == E for b in blocks)


def evaluate(t, X: FiniteLoop | FiniteGroup, env: dict):
    """Evaluate in a table structure; env maps (block, slot) to an element or a numpy array of elements."""
    op = t[0]
    if op == "e":
        return 0
    if op == "var":
        return env[(t[1], t[2])]
    a = evaluate(t[1], X, env)
    b = evaluate(t[2], X, env)
    vec = isinstance(a, np.ndarray) or isinstance(b, np.ndarray)
    if op == "mul":
        return X.np_table[a, b] if vec else X.table[a][b]
    if op == "ldiv":
        return X.np_ldiv[a, b] if vec else X.ldiv_table[a][b]
    return X.np_rdiv[a, b] if vec else X.rdiv_table[a][b]


def term_vars(t) -> list[tuple[int, int]]:
    if t[0] == "var":
        return [(t[1], t[2])]
    if t[0] in _OPS:
        out = term_vars(t[1])
        for v in term_vars(t[2]):
            if v not in out:
                out.append(v)
        return out
    return []


def format_term(t) -> str:
    if t == E:
        return "e"
    if t[0] == "var":
        return f"(var {t[1]} {t[2]})"
    return f"({t[0]} {format_term(t[1])} {format_term(t[2])})"


def parse_term(text: str):
    """Parse prefix syntax such as `(mul (var 1 0) (ldiv (var 2 0) e))`."""
    tokens = text.replace("(", " ( ").replace(")", " ) ").split()
    pos = 0

    def take():
        nonlocal pos
        if pos >= len(tokens):
            raise WordError("unexpected end of term")
        tok = tokens[pos]
        pos += 1
        return tok

    def parse():
        tok = take()
        if tok == "e":
            return E
        if tok != "(":
            raise WordError(f"unexpected token {tok!r}")
        head = take()
        if head == "var":
            try:
                b, s = int(take()), int(take())
            except ValueError as exc:
                raise WordError("var takes two integers") from exc
            node = var(b, s)
        elif head in _OPS:
            node = (head, parse(), parse())
        elif head == "e":
            node = E
        else:
            raise WordError(f"unknown constructor {head!r}")
        if take() != ")":
            raise WordError("expected ')'")
        return node

    t = parse()
    if pos != len(tokens):
        raise WordError("trailing tokens after term")
    return t
