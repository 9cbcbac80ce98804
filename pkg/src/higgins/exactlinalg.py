"""Exact scalars over F_p and Q, and canonical subspaces in reduced row-echelon form."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Vector = tuple


class LinalgError(ValueError):
    pass


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class FieldSpec:
    kind: str
    p: int | None = None

    def __post_init__(self):
        if self.kind == "prime":
            if self.p is None or not (2 <= self.p < 2**31) or not _is_prime(self.p):
                raise LinalgError(f"invalid prime modulus {self.p!r}")
        elif self.kind == "rational":
            if self.p is not None:
                raise LinalgError("rational field takes no modulus")
        else:
            raise LinalgError(f"unknown field kind {self.kind!r}")

    @classmethod
    def prime(cls, p: int) -> "FieldSpec":
        return cls("prime", p)

    @classmethod
    def rational(cls) -> "FieldSpec":
        return cls("rational")

    @classmethod
    def from_json(cls, obj: dict) -> "FieldSpec":
        kind = obj.get("type")
        if kind == "prime":
            return cls.prime(int(obj["p"]))
        if kind == "rational":
            return cls.rational()
        raise LinalgError(f"unknown field type {kind!r}")

    def to_json(self) -> dict:
        if self.kind == "prime":
            return {"type": "prime", "p": self.p}
        return {"type": "rational"}

    def __str__(self) -> str:
        return f"F{self.p}" if self.kind == "prime" else "Q"

    # scalar arithmetic

    @property
    def zero(self):
        return 0 if self.kind == "prime" else Fraction(0)

    @property
    def one(self):
        return 1 if self.kind == "prime" else Fraction(1)

    def coerce(self, x):
        """Accept ints, Fractions, or "num/den" strings."""
        if type(x) is int and self.kind == "prime":
            return x % self.p
        if isinstance(x, str):
            x = Fraction(x)
        if self.kind == "prime":
            if isinstance(x, Fraction):
                return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
            return int(x) % self.p
        return Fraction(x)

    def add(self, a, b):
        return (a + b) % self.p if self.kind == "prime" else a + b

    def sub(self, a, b):
        return (a - b) % self.p if self.kind == "prime" else a - b

    def mul(self, a, b):
        return (a * b) % self.p if self.kind == "prime" else a * b

    def neg(self, a):
        return (-a) % self.p if self.kind == "prime" else -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p) if self.kind == "prime" else 1 / a

    def literal(self, a):
        """Serializable form of a scalar."""
        if self.kind == "prime":
            return int(a)
        a = Fraction(a)
        return a.numerator if a.denominator == 1 else f"{a.numerator}/{a.denominator}"

    def elements(self):
        if self.kind != "prime":
            raise LinalgError("Q is infinite")
        return range(self.p)

    # vector helpers

    def vec(self, entries: Iterable) -> Vector:
        return tuple(self.coerce(x) for x in entries)

    def vadd(self, u: Vector, v: Vector) -> Vector:
        return tuple(self.add(a, b) for a, b in zip(u, v))

    def vscale(self, c, u: Vector) -> Vector:
        return tuple(self.mul(c, a) for a in u)

    def axpy(self, c, u: Vector, v: Vector) -> Vector:
        """c*u + v"""
        return tuple(self.add(self.mul(c, a), b) for a, b in zip(u, v))

    def zero_vec(self, n: int) -> Vector:
        return (self.zero,) * n


def _echelon(rows: list[list], field: FieldSpec, ncols: int) -> tuple[list[list], list[int]]:
    """Gauss-Jordan in place; returns (nonzero rows, pivot columns). Leftmost pivot, topmost row."""
    m = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = field.inv(m[r][c])
        m[r] = [field.mul(inv, x) for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [field.sub(a, field.mul(f, b)) for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


@dataclass(frozen=True)
class Subspace:
    field: FieldSpec
    ambient_dim: int
    basis: tuple[Vector, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple(next(i for i, x in enumerate(row) if x != 0) for row in self.basis)

    def is_zero(self) -> bool:
        return not self.basis

    def reduce(self, v: Sequence) -> Vector:
        """Residual of v after elimination against the echelon basis."""
        v = list(v)
        for row, c in zip(self.basis, self.pivots):
            if v[c] != 0:
                f = v[c]
                v = [self.field.sub(a, self.field.mul(f, b)) for a, b in zip(v, row)]
        return tuple(v)

    def __contains__(self, v) -> bool:
        return contains(self, v)

    def __le__(self, other: "Subspace") -> bool:
        _check_compatible(self, other)
        return all(contains(other, v) for v in self.basis)

    def __str__(self) -> str:
        if not self.basis:
            return "0"
        rows = ", ".join("(" + ",".join(str(self.field.literal(x)) for x in r) + ")" for r in self.basis)
        return "span{" + rows + "}"


def rref(rows: Iterable[Sequence], field: FieldSpec, ambient_dim: int | None = None) -> Subspace:
    rows = [field.vec(r) for r in rows]
    if ambient_dim is None:
        if not rows:
            raise LinalgError("ambient dimension required for an empty row list")
        ambient_dim = len(rows[0])
    for r in rows:
        if len(r) != ambient_dim:
            raise LinalgError(f"row of length {len(r)} in ambient dimension {ambient_dim}")
    echelon, _ = _echelon(rows, field, ambient_dim)
    return Subspace(field, ambient_dim, tuple(tuple(r) for r in echelon))


def zero_subspace(field: FieldSpec, n: int) -> Subspace:
    return Subspace(field, n, ())


def full_space(field: FieldSpec, n: int) -> Subspace:
    return Subspace(field, n, tuple(tuple(field.one if i == j else field.zero for j in range(n)) for i in range(n)))


def _check_compatible(a: Subspace, b: Subspace) -> None:
    if a.field != b.field:
        raise LinalgError(f"field mismatch: {a.field} vs {b.field}")
    if a.ambient_dim != b.ambient_dim:
        raise LinalgError(f"ambient dimension mismatch: {a.ambient_dim} vs {b.ambient_dim}")


def subspace_sum(a: Subspace, b: Subspace) -> Subspace:
    _check_compatible(a, b)
    if not b.basis:
        return a
    if not a.basis:
        return b
    return rref(a.basis + b.basis, a.field, a.ambient_dim)


def span_sum(spaces: Iterable[Subspace], field: FieldSpec, n: int) -> Subspace:
    rows = []
    for s in spaces:
        if s.field != field or s.ambient_dim != n:
            raise LinalgError("incompatible subspace in sum")
        rows.extend(s.basis)
    return rref(rows, field, n)


def nullspace(rows: Sequence[Sequence], field: FieldSpec, ncols: int) -> list[Vector]:
    """Basis of {x : M x = 0} for the matrix with the given rows; free variables set one at a time."""
    echelon, pivots = _echelon([field.vec(r) for r in rows], field, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    out = []
    for f in free:
        x = [field.zero] * ncols
        x[f] = field.one
        for row, c in zip(echelon, pivots):
            x[c] = field.neg(row[f])
        out.append(tuple(x))
    return out


def solve(columns: Sequence[Sequence], target: Sequence, field: FieldSpec) -> Vector | None:
    """Coefficients x with sum_i x_i columns[i] = target, free variables zero; None if inconsistent."""
    n = len(target)
    k = len(columns)
    rows = [[columns[j][i] for j in range(k)] + [target[i]] for i in range(n)]
    echelon, pivots = _echelon([field.vec(r) for r in rows], field, k + 1)
    if k in pivots:
        return None
    x = [field.zero] * k
    for row, c in zip(echelon, pivots):
        x[c] = row[k]
    return tuple(x)


def intersect(a: Subspace, b: Subspace) -> Subspace:
    """Left kernel of the stacked bases [A; B] mapped back through A."""
    _check_compatible(a, b)
    if not a.basis or not b.basis:
        return zero_subspace(a.field, a.ambient_dim)
    f = a.field
    stacked = list(a.basis) + list(b.basis)
    # columns of the transpose are the stacked rows
    transpose = [[row[i] for row in stacked] for i in range(a.ambient_dim)]
    kernel = nullspace(transpose, f, len(stacked))
    out = []
    for coeffs in kernel:
        v = f.zero_vec(a.ambient_dim)
        for c, row in zip(coeffs[: a.dim], a.basis):
            if c != 0:
                v = f.axpy(c, row, v)
        out.append(v)
    return rref(out, f, a.ambient_dim)


def contains(a: Subspace, v: Sequence) -> bool:
    if len(v) != a.ambient_dim:
        raise LinalgError(f"vector of length {len(v)} in ambient dimension {a.ambient_dim}")
    v = a.field.vec(v)
    return all(x == 0 for x in a.reduce(v))

