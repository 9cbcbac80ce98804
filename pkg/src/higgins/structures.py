"""Finite groups, finite loops and finite-dimensional algebras with their subobject lattices.

Group and loop subobjects carry an int bitmask over element indices (identity is index 0).
Algebra subobjects carry a canonical `Subspace` that is closed under the product.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Iterable, Sequence

import numpy as np

from .exactlinalg import (
    FieldSpec,
    LinalgError,
    Subspace,
    full_space,
    intersect,
    rref,
    subspace_sum,
    zero_subspace,
)


class StructureError(ValueError):
    """Invalid structure or subobject; `witness` names the offending tuple when there is one."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class NotAssociative(StructureError):
    pass


class NotLatin(StructureError):
    pass


class IdentityMissing(StructureError):
    pass


class DimensionMismatch(StructureError):
    pass


class NotNormal(StructureError):
    pass


class NotSubalgebra(StructureError):
    pass


class AmbientMismatch(StructureError):
    pass


def bits(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def mask_of(elements: Iterable[int]) -> int:
    m = 0
    for e in elements:
        m |= 1 << e
    return m


class _TableStructure:
    kind = "table"

    def __init__(self, table: Sequence[Sequence[int]], name: str = "", labels: Sequence[str] | None = None):
        self.table = tuple(tuple(int(x) for x in row) for row in table)
        self.order = len(self.table)
        self.name = name or f"{self.kind}{self.order}"
        self.labels = tuple(labels) if labels is not None else tuple(str(i) for i in range(self.order))
        n = self.order
        self.np_table = np.array(self.table, dtype=np.int64).reshape(n, n)
        ld = [[0] * n for _ in range(n)]  # ld[x][z] = x \ z
        rd = [[0] * n for _ in range(n)]  # rd[z][y] = z / y
        for x in range(n):
            for y in range(n):
                z = self.table[x][y]
                ld[x][z] = y
                rd[z][y] = x
        self.ldiv_table = tuple(tuple(r) for r in ld)
        self.rdiv_table = tuple(tuple(r) for r in rd)
        self.np_ldiv = np.array(ld, dtype=np.int64).reshape(n, n)
        self.np_rdiv = np.array(rd, dtype=np.int64).reshape(n, n)
        self._cache: dict = {}

    def __repr__(self):
        return f"<{type(self).__name__} {self.name} order={self.order}>"

    @property
    def size(self) -> int:
        return self.order

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def ldiv(self, a: int, b: int) -> int:
        return self.ldiv_table[a][b]

    def rdiv(self, a: int, b: int) -> int:
        return self.rdiv_table[a][b]

    def element(self, label: str) -> int:
        return self.labels.index(label)

    def to_json(self) -> dict:
        return {"kind": self.kind, "name": self.name, "order": self.order,
                "table": [list(r) for r in self.table], "labels": list(self.labels)}


class FiniteGroup(_TableStructure):
    kind = "group"

    def __init__(self, table, name: str = "", labels=None):
        super().__init__(table, name, labels)
        self.inverse = tuple(self.ldiv_table[a][0] for a in range(self.order))

    def inv(self, a: int) -> int:
        return self.inverse[a]

    def conj(self, g: int, s: int) -> int:
        """g s g^-1"""
        return self.table[self.table[g][s]][self.inverse[g]]

    def commutator(self, a: int, b: int) -> int:
        """[a,b] = a b a^-1 b^-1"""
        t = self.table
        return t[t[t[a][b]][self.inverse[a]]][self.inverse[b]]


class FiniteLoop(_TableStructure):
    kind = "loop"


class FdAlgebra:
    kind = "algebra"

    def __init__(self, field: FieldSpec, dim: int, structure, name: str = "", variety: str = "nonassociative"):
        self.field = field
        self.variety = variety
        self.dim = dim
        self.structure = tuple(
            tuple(field.vec(structure[i][j]) for j in range(dim)) for i in range(dim)
        )
        self.name = name or f"alg{dim}_{field}"
        self.labels = tuple(f"e{i + 1}" for i in range(dim))
        self._cache: dict = {}

    def __repr__(self):
        return f"<FdAlgebra {self.name} dim={self.dim} over {self.field}>"

    @property
    def size(self) -> int:
        return self.dim

    def basis_vector(self, i: int):
        f = self.field
        return tuple(f.one if j == i else f.zero for j in range(self.dim))

    def mul(self, u, v):
        f = self.field
        out = [f.zero] * self.dim
        for i, a in enumerate(u):
            if a == 0:
                continue
            for j, b in enumerate(v):
                if b == 0:
                    continue
                ab = f.mul(a, b)
                for k, c in enumerate(self.structure[i][j]):
                    if c != 0:
                        out[k] = f.add(out[k], f.mul(ab, c))
        return tuple(out)

    def to_json(self) -> dict:
        f = self.field
        return {
            "kind": "algebra",
            "field": f.to_json(),
            "dim": self.dim,
            "structure": [[[f.literal(c) for c in self.structure[i][j]] for j in range(self.dim)] for i in range(self.dim)],
            "name": self.name,
            "variety": self.variety,
            "labels": list(self.labels),
        }


CheckedStructure = FiniteGroup | FiniteLoop | FdAlgebra


@dataclass(frozen=True)
class Subobject:
    ambient: object = dc_field(compare=False)
    carrier: int | Subspace
    ambient_id: int = dc_field(default=0, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "ambient_id", id(self.ambient))

    @property
    def is_algebra(self) -> bool:
        return isinstance(self.carrier, Subspace)

    def elements(self) -> list:
        if self.is_algebra:
            return list(self.carrier.basis)
        return bits(self.carrier)

    @property
    def size(self) -> int:
        """Order for groups/loops, dimension for algebras."""
        if self.is_algebra:
            return self.carrier.dim
        return bin(self.carrier).count("1")

    def is_trivial(self) -> bool:
        return self.size == 0 if self.is_algebra else self.carrier == 1

    def __contains__(self, x) -> bool:
        if self.is_algebra:
            return x in self.carrier
        return bool(self.carrier >> x & 1)

    def __le__(self, other: "Subobject") -> bool:
        _same_ambient(self, other)
        if self.is_algebra:
            return self.carrier <= other.carrier
        return self.carrier & ~other.carrier == 0

    def __lt__(self, other: "Subobject") -> bool:
        return self <= other and self != other

    def describe(self) -> str:
        if self.is_algebra:
            return f"dim {self.size}: {self.carrier}"
        return f"order {self.size}: {bits(self.carrier)}"

    def to_json(self):
        if self.is_algebra:
            f = self.carrier.field
            return {"basis": [[f.literal(x) for x in row] for row in self.carrier.basis]}
        return {"elements": bits(self.carrier)}


def _same_ambient(*subs: Subobject) -> None:
    ids = {s.ambient_id for s in subs}
    if len(ids) > 1:
        raise AmbientMismatch("subobjects live in different ambient structures")


def _check_ambient(X, *subs: Subobject) -> None:
    for s in subs:
        if s.ambient is not X:
            raise AmbientMismatch(f"subobject does not belong to {X.name}")


# ---------------------------------------------------------------- validation


def validate(raw: dict, name: str = "") -> CheckedStructure:
    """Check every axiom of the declared kind; raise the first violation with a witness.

    Optional keys: "name" (used when `name` is empty) and "labels".
    """
    if not isinstance(raw, dict):
        raise StructureError("structure description must be a JSON object")
    name = name or raw.get("name", "")
    kind = raw.get("kind")
    if kind in ("group", "loop"):
        return _validate_table(raw, kind, name)
    if kind == "algebra":
        return _validate_algebra(raw, name)
    raise StructureError(f"unknown structure kind {kind!r}")


def _validate_table(raw: dict, kind: str, name: str):
    table = raw.get("table")
    n = raw.get("order", len(table) if table is not None else None)
    if not isinstance(table, list) or len(table) != n:
        raise DimensionMismatch(f"table must have {n} rows")
    for i, row in enumerate(table):
        if not isinstance(row, list) or len(row) != n:
            raise DimensionMismatch(f"row {i} must have {n} entries", witness=(i,))
        for j, x in enumerate(row):
            if not isinstance(x, int) or not 0 <= x < n:
                raise StructureError(f"entry ({i},{j}) = {x!r} out of range", witness=(i, j))
    for i in range(n):
        if table[0][i] != i or table[i][0] != i:
            raise IdentityMissing(f"index 0 is not a two-sided identity at {i}", witness=(i,))
    full = set(range(n))
    for i in range(n):
        if set(table[i]) != full:
            raise NotLatin(f"row {i} is not a permutation", witness=("row", i))
    for j in range(n):
        if {table[i][j] for i in range(n)} != full:
            raise NotLatin(f"column {j} is not a permutation", witness=("col", j))
    if kind == "group":
        t = np.array(table, dtype=np.int64)
        lhs = t[t]  # lhs[a, b, c] = t[t[a, b], c]
        rhs = t[:, t]  # rhs[a, b, c] = t[a, t[b, c]]
        bad = np.argwhere(lhs != rhs)
        if len(bad):
            a, b, c = (int(x) for x in bad[0])
            raise NotAssociative(f"(x*y)*z != x*(y*z) at {(a, b, c)}", witness=(a, b, c))
        return FiniteGroup(table, name, _labels(raw, n))
    return FiniteLoop(table, name, _labels(raw, n))


def _labels(raw: dict, n: int):
    labels = raw.get("labels")
    if labels is None:
        return None
    if not isinstance(labels, list) or len(labels) != n or len(set(map(str, labels))) != n:
        raise DimensionMismatch(f"labels must be {n} distinct strings")
    return [str(x) for x in labels]


def _validate_algebra(raw: dict, name: str) -> FdAlgebra:
    try:
        field = FieldSpec.from_json(raw.get("field", {}))
    except (LinalgError, KeyError, TypeError) as exc:
        raise StructureError(f"bad field: {exc}") from exc
    d = raw.get("dim")
    c = raw.get("structure")
    if not isinstance(d, int) or d < 0:
        raise DimensionMismatch(f"bad dimension {d!r}")
    if not isinstance(c, list) or len(c) != d:
        raise DimensionMismatch(f"structure must have {d} slices")
    for i in range(d):
        if not isinstance(c[i], list) or len(c[i]) != d:
            raise DimensionMismatch(f"structure[{i}] must have {d} rows", witness=(i,))
        for j in range(d):
            if not isinstance(c[i][j], list) or len(c[i][j]) != d:
                raise DimensionMismatch(f"structure[{i}][{j}] must have {d} entries", witness=(i, j))
    try:
        X = FdAlgebra(field, d, c, name, raw.get("variety", "nonassociative"))
    except (ValueError, ZeroDivisionError) as exc:
        raise StructureError(f"bad structure constant: {exc}") from exc
    labels = _labels(raw, d)
    if labels is not None:
        X.labels = tuple(labels)
    return X


# ---------------------------------------------------------------- subobjects


def trivial(X) -> Subobject:
    if isinstance(X, FdAlgebra):
        return Subobject(X, zero_subspace(X.field, X.dim))
    return Subobject(X, 1)


def whole(X) -> Subobject:
    if isinstance(X, FdAlgebra):
        return Subobject(X, full_space(X.field, X.dim))
    return Subobject(X, (1 << X.order) - 1)


def _table_closure(X: _TableStructure, mask: int) -> int:
    """Worklist saturation under the multiplication (and divisions for loops)."""
    t = X.table
    is_loop = isinstance(X, FiniteLoop)
    mask |= 1
    members = bits(mask)
    work = list(members)
    while work:
        a = work.pop()
        for b in list(members):
            cands = [t[a][b], t[b][a]]
            if is_loop:
                cands += [X.ldiv_table[a][b], X.ldiv_table[b][a], X.rdiv_table[a][b], X.rdiv_table[b][a]]
            for c in cands:
                if not mask >> c & 1:
                    mask |= 1 << c
                    members.append(c)
                    work.append(c)
    return mask


def _algebra_closure(X: FdAlgebra, space: Subspace) -> Subspace:
    while True:
        prods = [X.mul(u, v) for u in space.basis for v in space.basis]
        nxt = rref(list(space.basis) + prods, X.field, X.dim)
        if nxt.dim == space.dim:
            return space
        space = nxt


def generate(X, generators) -> Subobject:
    generators = list(generators)
    if isinstance(X, FdAlgebra):
        for g in generators:
            if len(g) != X.dim:
                raise DimensionMismatch(f"generator {g!r} not in dimension {X.dim}")
        return Subobject(X, _algebra_closure(X, rref(generators, X.field, X.dim)))
    for g in generators:
        if not isinstance(g, (int, np.integer)) or not 0 <= g < X.order:
            raise StructureError(f"generator {g!r} out of range for order {X.order}", witness=(g,))
    return Subobject(X, _table_closure(X, mask_of(int(g) for g in generators)))


def subobject_from_mask(X, mask: int) -> Subobject:
    """Subobject generated by the elements of a bitmask."""
    key = ("gen", mask)
    hit = X._cache.get(key)
    if hit is None:
        hit = Subobject(X, _table_closure(X, mask))
        X._cache[key] = hit
    return hit


def subobject_from_space(X: FdAlgebra, space: Subspace) -> Subobject:
    return Subobject(X, _algebra_closure(X, space))


def join(X, A: Subobject, B: Subobject) -> Subobject:
    _check_ambient(X, A, B)
    if A <= B:
        return B
    if B <= A:
        return A
    if isinstance(X, FdAlgebra):
        return subobject_from_space(X, subspace_sum(A.carrier, B.carrier))
    return subobject_from_mask(X, A.carrier | B.carrier)


def join_all(X, subs: Iterable[Subobject]) -> Subobject:
    out = trivial(X)
    for s in subs:
        out = join(X, out, s)
    return out


def meet(X, A: Subobject, B: Subobject) -> Subobject:
    _check_ambient(X, A, B)
    if isinstance(X, FdAlgebra):
        return Subobject(X, intersect(A.carrier, B.carrier))
    return Subobject(X, A.carrier & B.carrier)


def is_closed(X, S: Subobject) -> bool:
    key = ("closed", S.carrier)
    hit = X._cache.get(key)
    if hit is None:
        if isinstance(X, FdAlgebra):
            hit = _algebra_closure(X, S.carrier).dim == S.carrier.dim
        else:
            hit = _table_closure(X, S.carrier) == S.carrier
        X._cache[key] = hit
    return hit


def _loop_inner_images(X: FiniteLoop, z: int):
    """Images of z under L_{x,y}, R_{x,y}, T_x for all x, y."""
    t, ld, rd = X.table, X.ldiv_table, X.rdiv_table
    n = X.order
    for x in range(n):
        yield ld[x][t[z][x]]  # T_x
        for y in range(n):
            xy = t[x][y]
            yield ld[xy][t[x][t[y][z]]]  # L_{x,y}
            yield rd[t[t[z][x]][y]][xy]  # R_{x,y}


def _loop_inner_images_np(X: FiniteLoop, members: Sequence[int]) -> np.ndarray:
    t, ld, rd = X.np_table, X.np_ldiv, X.np_rdiv
    n = X.order
    z = np.asarray(members, dtype=np.int64)
    xs = np.arange(n)
    T = ld[xs[:, None], t[z[None, :], xs[:, None]]]
    x = xs[:, None, None]
    y = xs[None, :, None]
    zz = z[None, None, :]
    xy = t[x, y]
    L = ld[xy, t[x, t[y, zz]]]
    R = rd[t[t[zz, x], y], xy]
    return np.concatenate([T.ravel(), L.ravel(), R.ravel()])


def is_normal(X, S: Subobject) -> bool:
    _check_ambient(X, S)
    key = ("normal", S.carrier)
    hit = X._cache.get(key)
    if hit is not None:
        return hit
    if isinstance(X, FiniteGroup):
        els = bits(S.carrier)
        res = all(S.carrier >> X.conj(g, s) & 1 for g in range(X.order) for s in els)
    elif isinstance(X, FiniteLoop):
        imgs = set(_loop_inner_images_np(X, bits(S.carrier)).tolist())
        res = mask_of(imgs) & ~S.carrier == 0
    else:
        res = is_ideal(X, S.carrier)
    X._cache[key] = res
    return res


def is_normal_loop_criterion(X: _TableStructure, S: Subobject) -> bool:
    """Inner-mapping test applied to any table structure (used to compare against conjugation for groups)."""
    return all(S.carrier >> w & 1 for z in bits(S.carrier) for w in _loop_inner_images(X, z))


def is_ideal(X: FdAlgebra, space: Subspace) -> bool:
    for i in range(X.dim):
        e = X.basis_vector(i)
        for s in space.basis:
            if X.mul(e, s) not in space or X.mul(s, e) not in space:
                return False
    return True


def normal_closure(X, S: Subobject) -> Subobject:
    _check_ambient(X, S)
    key = ("nclosure", S.carrier)
    hit = X._cache.get(key)
    if hit is not None:
        return hit
    if isinstance(X, FiniteGroup):
        mask = S.carrier | 1
        work = bits(mask)
        while work:
            s = work.pop()
            for g in range(X.order):
                c = X.conj(g, s)
                if not mask >> c & 1:
                    mask |= 1 << c
                    work.append(c)
        out = subobject_from_mask(X, mask)
    elif isinstance(X, FiniteLoop):
        mask = _table_closure(X, S.carrier)
        while True:
            imgs = set(_loop_inner_images_np(X, bits(mask)).tolist())
            new = mask | mask_of(imgs)
            if new == mask:
                break
            mask = _table_closure(X, new)
        out = Subobject(X, mask)
    else:
        space = S.carrier
        basis = [X.basis_vector(i) for i in range(X.dim)]
        while True:
            prods = [X.mul(e, s) for e in basis for s in space.basis] + [X.mul(s, e) for e in basis for s in space.basis]
            nxt = rref(list(space.basis) + prods, X.field, X.dim)
            if nxt.dim == space.dim:
                break
            space = nxt
        out = Subobject(X, space)
    X._cache[key] = out
    return out


# ---------------------------------------------------------------- morphisms and quotients


@dataclass(frozen=True)
class Projection:
    """Surjective homomorphism X -> Y: an element map for tables, a matrix (row i = image of e_i) for algebras."""

    source: object
    target: object
    mapping: tuple

    def __call__(self, x):
        if isinstance(self.source, FdAlgebra):
            f = self.source.field
            out = f.zero_vec(self.target.dim)
            for c, row in zip(x, self.mapping):
                if c != 0:
                    out = f.axpy(c, row, out)
            return out
        return self.mapping[x]

    def image(self, S: Subobject) -> Subobject:
        if isinstance(self.source, FdAlgebra):
            return Subobject(self.target, rref([self(v) for v in S.carrier.basis], self.target.field, self.target.dim))
        return Subobject(self.target, mask_of(self.mapping[x] for x in bits(S.carrier)))

    def preimage(self, S: Subobject) -> Subobject:
        if isinstance(self.source, FdAlgebra):
            raise NotImplementedError("preimage of algebra subobjects is not needed")
        return Subobject(self.source, mask_of(x for x in range(self.source.order) if S.carrier >> self.mapping[x] & 1))


def quotient(X, N: Subobject, name: str = ""):
    _check_ambient(X, N)
    if not is_normal(X, N):
        raise NotNormal(f"{N.describe()} is not normal in {X.name}")
    name = name or f"{X.name}/{N.size}"
    if isinstance(X, FdAlgebra):
        f = X.field
        piv = set(N.carrier.pivots)
        comp = [i for i in range(X.dim) if i not in piv]
        def coords(v):
            r = N.carrier.reduce(v)
            return tuple(r[i] for i in comp)
        consts = [[coords(X.mul(X.basis_vector(a), X.basis_vector(b))) for b in comp] for a in comp]
        Y = FdAlgebra(f, len(comp), consts, name)
        proj = Projection(X, Y, tuple(coords(X.basis_vector(i)) for i in range(X.dim)))
        return Y, proj
    members = bits(N.carrier)
    cls = [-1] * X.order
    reps = []
    for x in range(X.order):
        if cls[x] < 0:
            for m in members:
                cls[X.mul(x, m)] = len(reps)
            reps.append(x)
    table = [[cls[X.mul(a, b)] for b in reps] for a in reps]
    Y = type(X)(table, name)
    return Y, Projection(X, Y, tuple(cls))


def is_homomorphism(f: Projection) -> bool:
    X, Y = f.source, f.target
    if isinstance(X, FdAlgebra):
        basis = [X.basis_vector(i) for i in range(X.dim)]
        return all(f(X.mul(u, v)) == Y.mul(f(u), f(v)) for u in basis for v in basis)
    return all(f(X.mul(a, b)) == Y.mul(f(a), f(b)) for a in range(X.order) for b in range(X.order))


def is_surjective(f: Projection) -> bool:
    if isinstance(f.source, FdAlgebra):
        return rref(list(f.mapping), f.target.field, f.target.dim).dim == f.target.dim
    return set(f.mapping) == set(range(f.target.order))


# ---------------------------------------------------------------- lattices


def all_subobjects(X: _TableStructure) -> list[Subobject]:
    """Every subgroup/subloop, as joins of cyclic (one-generated) subobjects."""
    key = ("all",)
    if key in X._cache:
        return X._cache[key]
    cyclic = {subobject_from_mask(X, 1 << x).carrier for x in range(X.order)}
    found = set(cyclic)
    frontier = set(cyclic)
    while frontier:
        nxt = set()
        for a in frontier:
            for c in cyclic:
                j = subobject_from_mask(X, a | c).carrier
                if j not in found:
                    found.add(j)
                    nxt.add(j)
        frontier = nxt
    out = sorted((Subobject(X, m) for m in found), key=lambda s: (s.size, s.carrier))
    X._cache[key] = out
    return out


def normal_subobjects(X: _TableStructure) -> list[Subobject]:
    """Every normal subgroup/subloop, as joins of normal closures of single elements."""
    key = ("normals",)
    if key in X._cache:
        return X._cache[key]
    principal = {normal_closure(X, subobject_from_mask(X, 1 << x)).carrier for x in range(X.order)}
    found = set(principal)
    frontier = set(principal)
    while frontier:
        nxt = set()
        for a in frontier:
            for c in principal:
                j = normal_closure(X, subobject_from_mask(X, a | c)).carrier
                if j not in found:
                    found.add(j)
                    nxt.add(j)
        frontier = nxt
    out = sorted((Subobject(X, m) for m in found), key=lambda s: (s.size, s.carrier))
    X._cache[key] = out
    return out


def load_subobject(X, raw: dict) -> Subobject:
    if "basis" in raw:
        if not isinstance(X, FdAlgebra):
            raise StructureError("basis subobjects need an algebra ambient")
        rows = raw["basis"]
        for r in rows:
            if len(r) != X.dim:
                raise DimensionMismatch(f"basis row {r!r} not in dimension {X.dim}")
        space = rref(rows, X.field, X.dim)
        if _algebra_closure(X, space).dim != space.dim:
            raise NotSubalgebra(f"{space} is not closed under the product")
        return Subobject(X, space)
    if "generators" in raw:
        return generate(X, raw["generators"])
    if "elements" in raw:
        S = generate(X, raw["elements"])
        if S.carrier != mask_of(raw["elements"]) | 1:
            raise StructureError("listed elements are not closed")
        return S
    raise StructureError("subobject file needs 'generators', 'elements' or 'basis'")
