"""Bundled structures: small groups, loops and nilpotent/Lie algebras, built from generators."""

from __future__ import annotations

from functools import lru_cache
from typing import Callable, Hashable, Sequence

from .exactlinalg import FieldSpec, rref
from .structures import (
    FdAlgebra,
    FiniteGroup,
    FiniteLoop,
    Subobject,
    is_ideal,
    normal_subobjects,
    whole,
)


def _close(gens: Sequence[Hashable], mul: Callable, identity: Hashable) -> list:
    """BFS enumeration of the group generated by gens; identity first, deterministic order."""
    elems = [identity]
    seen = {identity}
    i = 0
    while i < len(elems):
        a = elems[i]
        for g in gens:
            c = mul(a, g)
            if c not in seen:
                seen.add(c)
                elems.append(c)
        i += 1
    return elems


def group_from_generators(gens, mul, identity, name: str, label=str) -> FiniteGroup:
    elems = _close(gens, mul, identity)
    index = {e: i for i, e in enumerate(elems)}
    table = [[index[mul(a, b)] for b in elems] for a in elems]
    return FiniteGroup(table, name, [label(e) for e in elems])


def _pmul(a, b):
    """(a*b)(x) = a(b(x))"""
    return tuple(a[x] for x in b)


def _cycle_label(p) -> str:
    seen, out = set(), []
    for s in range(len(p)):
        if s in seen or p[s] == s:
            continue
        cyc, x = [], s
        while x not in seen:
            seen.add(x)
            cyc.append(str(x + 1))
            x = p[x]
        out.append("(" + "".join(cyc) + ")")
    return "".join(out) or "e"


def perm_group(gens, degree: int, name: str) -> FiniteGroup:
    return group_from_generators([tuple(g) for g in gens], _pmul, tuple(range(degree)), name, _cycle_label)


def _perm(cycles, degree):
    p = list(range(degree))
    for cyc in cycles:
        for i, a in enumerate(cyc):
            p[a - 1] = cyc[(i + 1) % len(cyc)] - 1
    return tuple(p)


def cyclic(n: int) -> FiniteGroup:
    return group_from_generators([1 % n] if n > 1 else [], lambda a, b: (a + b) % n, 0, f"C{n}", str)


def abelian(*orders: int) -> FiniteGroup:
    zero = tuple(0 for _ in orders)
    gens = [tuple(1 if i == j else 0 for j in range(len(orders))) for i in range(len(orders))]
    mul = lambda a, b: tuple((x + y) % m for x, y, m in zip(a, b, orders))
    name = "x".join(f"C{m}" for m in orders)
    return group_from_generators(gens, mul, zero, name, lambda e: "".join(map(str, e)))


def symmetric3() -> FiniteGroup:
    return perm_group([_perm([(1, 2)], 3), _perm([(1, 2, 3)], 3)], 3, "S3")


def symmetric4() -> FiniteGroup:
    return perm_group([_perm([(1, 2)], 4), _perm([(1, 2, 3, 4)], 4)], 4, "S4")


def alternating4() -> FiniteGroup:
    return perm_group([_perm([(1, 2, 3)], 4), _perm([(1, 2), (3, 4)], 4)], 4, "A4")


def dihedral4() -> FiniteGroup:
    """Symmetries of a square, order 8."""
    return perm_group([_perm([(1, 2, 3, 4)], 4), _perm([(1, 3)], 4)], 4, "D4")


_QUAT = {  # unit * unit -> (sign, unit)
    ("1", "1"): (1, "1"), ("1", "i"): (1, "i"), ("1", "j"): (1, "j"), ("1", "k"): (1, "k"),
    ("i", "1"): (1, "i"), ("i", "i"): (-1, "1"), ("i", "j"): (1, "k"), ("i", "k"): (-1, "j"),
    ("j", "1"): (1, "j"), ("j", "i"): (-1, "k"), ("j", "j"): (-1, "1"), ("j", "k"): (1, "i"),
    ("k", "1"): (1, "k"), ("k", "i"): (1, "j"), ("k", "j"): (-1, "i"), ("k", "k"): (-1, "1"),
}


def _qmul(a, b):
    s, u = _QUAT[(a[1], b[1])]
    return (a[0] * b[0] * s, u)


def _qlabel(q) -> str:
    return ("-" if q[0] < 0 else "") + q[1]


def quaternion8() -> FiniteGroup:
    return group_from_generators([(1, "i"), (1, "j")], _qmul, (1, "1"), "Q8", _qlabel)


def unitriangular3(p: int = 3) -> FiniteGroup:
    """Upper unitriangular 3x3 matrices over F_p, stored as (a, b, c) for [[1,a,c],[0,1,b],[0,0,1]]."""
    mul = lambda x, y: ((x[0] + y[0]) % p, (x[1] + y[1]) % p, (x[2] + y[2] + x[0] * y[1]) % p)
    return group_from_generators([(1, 0, 0), (0, 1, 0)], mul, (0, 0, 0), f"UT3(F{p})", lambda e: "".join(map(str, e)))


def trivial_group() -> FiniteGroup:
    return FiniteGroup([[0]], "C1", ["e"])


@lru_cache(maxsize=None)
def groups() -> dict[str, FiniteGroup]:
    """Acceptance group corpus."""
    gs = [abelian(2, 2), symmetric3(), dihedral4(), quaternion8(), unitriangular3(3), alternating4(), symmetric4()]
    return {g.name: g for g in gs}


@lru_cache(maxsize=None)
def small_groups() -> dict[str, FiniteGroup]:
    """All groups of order <= 8 up to isomorphism (14 of them)."""
    gs = [
        trivial_group(), cyclic(2), cyclic(3), cyclic(4), abelian(2, 2), cyclic(5), cyclic(6), symmetric3(),
        cyclic(7), cyclic(8), abelian(4, 2), abelian(2, 2, 2), dihedral4(), quaternion8(),
    ]
    return {g.name: g for g in gs}


# ---------------------------------------------------------------- loops


def first_nonassociative_loop(n: int = 5) -> list[list[int]]:
    """Lexicographically first normalized Latin square of order n that is not associative."""
    grid = [[0] * n for _ in range(n)]
    for i in range(n):
        grid[0][i] = i
        grid[i][0] = i
    cells = [(r, c) for r in range(1, n) for c in range(1, n)]

    def ok(r, c, v):
        return all(grid[r][j] != v for j in range(c)) and all(grid[i][c] != v for i in range(r))

    def associative():
        return all(grid[grid[a][b]][c] == grid[a][grid[b][c]] for a in range(n) for b in range(n) for c in range(n))

    def fill(k):
        if k == len(cells):
            return not associative()
        r, c = cells[k]
        for v in range(n):
            if ok(r, c, v):
                grid[r][c] = v
                if fill(k + 1):
                    return True
        return False

    if not fill(0):
        raise RuntimeError(f"no nonassociative loop of order {n}")
    return [row[:] for row in grid]


def chein_double(G: FiniteGroup, name: str) -> FiniteLoop:
    """Moufang loop M(G,2) = G u Gu with g(hu)=(hg)u, (gu)h=(gh^-1)u, (gu)(hu)=h^-1 g."""
    n = G.order
    t, inv = G.table, G.inverse
    table = [[0] * (2 * n) for _ in range(2 * n)]
    for g in range(n):
        for h in range(n):
            table[g][h] = t[g][h]
            table[g][n + h] = n + t[h][g]
            table[n + g][h] = n + t[g][inv[h]]
            table[n + g][n + h] = t[inv[h]][g]
    labels = list(G.labels) + [f"{l}u" for l in G.labels]
    return FiniteLoop(table, name, labels)


def as_loop(G: FiniteGroup) -> FiniteLoop:
    return FiniteLoop(G.table, f"{G.name}-as-loop", G.labels)


@lru_cache(maxsize=None)
def loops() -> dict[str, FiniteLoop]:
    """Nonassociative loops of order <= 16."""
    ls = [
        FiniteLoop(first_nonassociative_loop(5), "L5"),
        chein_double(symmetric3(), "M(S3,2)"),
        chein_double(dihedral4(), "M(D4,2)"),
        chein_double(quaternion8(), "M(Q8,2)"),
    ]
    return {l.name: l for l in ls}


@lru_cache(maxsize=None)
def group_loops() -> dict[str, FiniteLoop]:
    """Every corpus group reinterpreted as a loop (same table)."""
    gs = dict(groups())
    gs.update(small_groups())
    return {f"{g.name}-as-loop": as_loop(g) for g in gs.values()}


# ---------------------------------------------------------------- algebras


def strict_upper(m: int, field: FieldSpec) -> FdAlgebra:
    """Strictly upper-triangular m x m matrices; basis E_ij ordered by j-i then i (E12, E23, ..., E1m)."""
    idx = [(i, i + d) for d in range(1, m) for i in range(1, m - d + 1)]
    pos = {e: k for k, e in enumerate(idx)}
    d = len(idx)
    c = [[[0] * d for _ in range(d)] for _ in range(d)]
    for a, (i, j) in enumerate(idx):
        for b, (k, l) in enumerate(idx):
            if j == k:
                c[a][b][pos[(i, l)]] = 1
    alg = FdAlgebra(field, d, c, f"N{m}({field})", variety="associative")
    alg.labels = tuple(f"E{i}{j}" for i, j in idx)
    return alg


def heisenberg_lie(field: FieldSpec) -> FdAlgebra:
    """Basis x, y, z with [x,y] = z = -[y,x]."""
    c = [[[0] * 3 for _ in range(3)] for _ in range(3)]
    c[0][1][2] = 1
    c[1][0][2] = -1
    alg = FdAlgebra(field, 3, c, f"h3({field})", variety="lie")
    alg.labels = ("x", "y", "z")
    return alg


def square_zero_line(field: FieldSpec) -> FdAlgebra:
    """2-dimensional: e1 e1 = e2, all other products 0."""
    c = [[[0, 0], [0, 0]], [[0, 0], [0, 0]]]
    c[0][0][1] = 1
    alg = FdAlgebra(field, 2, c, f"A2({field})", variety="associative")
    alg.labels = ("e1", "e2")
    return alg


@lru_cache(maxsize=None)
def algebras() -> dict[str, FdAlgebra]:
    F2, F3 = FieldSpec.prime(2), FieldSpec.prime(3)
    algs = [strict_upper(m, f) for m in (3, 4, 5) for f in (F2, F3)]
    algs += [heisenberg_lie(F3), square_zero_line(F2)]
    return {a.name: a for a in algs}


def powers(X: FdAlgebra) -> list[Subobject]:
    """X, X^2, X^3, ... down to 0 (products of ideals with X on the left)."""
    from .algcoproduct import product_span

    out = [whole(X)]
    while not out[-1].is_trivial():
        nxt = product_span(X, out[-1].carrier, whole(X).carrier)
        out.append(Subobject(X, nxt))
    return out


def _span(X: FdAlgebra, labels: Sequence[str]) -> Subobject:
    rows = [X.basis_vector(X.labels.index(l)) for l in labels]
    return Subobject(X, rref(rows, X.field, X.dim))


def bundled_ideals(X: FdAlgebra) -> list[Subobject]:
    """Curated ideals per algebra: the power chain plus a few off-chain ideals."""
    out = {s.carrier: s for s in powers(X)}
    extra: list[Sequence[str]] = []
    if X.name.startswith("N4"):
        extra = [["E13", "E14"], ["E24", "E14"], ["E12", "E13", "E24", "E14"], ["E34", "E13", "E24", "E14"]]
    elif X.name.startswith("N3"):
        extra = [["E12", "E13"], ["E23", "E13"]]
    elif X.name.startswith("N5"):
        extra = [["E14", "E25", "E15"]]
    elif X.name.startswith("h3"):
        extra = [["x", "z"], ["y", "z"]]
    for labels in extra:
        s = _span(X, labels)
        assert is_ideal(X, s.carrier), (X.name, labels)
        out.setdefault(s.carrier, s)
    return sorted(out.values(), key=lambda s: (s.size, s.carrier.basis))


def bundled_normal_subgroups(G) -> list[Subobject]:
    return normal_subobjects(G)
