"""Search for lambda_1..lambda_16 with

    z(xy) = l1 y(zx) + l2 x(yz) + l3 y(xz) + l4 x(zy) + l5 (zx)y + l6 (yz)x + l7 (xz)y + l8 (zy)x
    (xy)z = l9 y(zx) + ... + l16 (zy)x

modulo the multilinear degree-3 consequences of a variety's identities.  This is linear algebra
in the 12-dimensional space of multilinear monomials in x, y, z.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import permutations
from pathlib import Path
from typing import Sequence

from .exactlinalg import FieldSpec, LinalgError, Subspace, rref, solve

# ("R", a, b, c) is a(bc); ("L", a, b, c) is (ab)c
_ORDERS = ["xyz", "xzy", "yxz", "yzx", "zxy", "zyx"]
MONOMIALS = tuple([("R", *o) for o in _ORDERS] + [("L", *o) for o in _ORDERS])
INDEX = {m: i for i, m in enumerate(MONOMIALS)}
DEG2 = (("x", "y"), ("y", "x"))


def monomial_name(m) -> str:
    kind, a, b, c = m
    return f"{a}({b}{c})" if kind == "R" else f"({a}{b}){c}"


def parse_monomial(text: str):
    text = text.replace(" ", "")
    for m in MONOMIALS:
        if monomial_name(m) == text:
            return m
    raise ValueError(f"not a multilinear degree-3 monomial: {text!r}")


TARGETS = tuple(parse_monomial(t) for t in ("y(zx)", "x(yz)", "y(xz)", "x(zy)", "(zx)y", "(yz)x", "(xz)y", "(zy)x"))
LEFT_OF = {"z(xy)": parse_monomial("z(xy)"), "(xy)z": parse_monomial("(xy)z")}


class Multilinear3Space:
    """Coordinates over MONOMIALS; helpers for building vectors."""

    dim = 12

    def __init__(self, field: FieldSpec):
        self.field = field

    def vector(self, terms: dict) -> tuple:
        out = [self.field.zero] * self.dim
        for m, c in terms.items():
            m = parse_monomial(m) if isinstance(m, str) else m
            out[INDEX[m]] = self.field.add(out[INDEX[m]], self.field.coerce(c))
        return tuple(out)

    def permute(self, v: Sequence, sigma: dict) -> tuple:
        """Rename variables by sigma (a bijection on {x,y,z})."""
        out = [self.field.zero] * self.dim
        for m, c in zip(MONOMIALS, v):
            if c != 0:
                kind, a, b, d = m
                j = INDEX[(kind, sigma[a], sigma[b], sigma[d])]
                out[j] = self.field.add(out[j], c)
        return tuple(out)

    def format(self, v: Sequence) -> str:
        parts = [f"{self.field.literal(c)}*{monomial_name(m)}" for m, c in zip(MONOMIALS, v) if c != 0]
        return " + ".join(parts) or "0"


@dataclass(frozen=True)
class VarietyPresentation:
    field: FieldSpec
    identities3: tuple = ()
    identities2: tuple = ()
    name: str = ""

    def __post_init__(self):
        for v in self.identities3:
            if len(v) != 12:
                raise LinalgError(f"degree-3 identity needs 12 coefficients, got {len(v)}")
        for v in self.identities2:
            if len(v) != 2:
                raise LinalgError(f"degree-2 identity needs 2 coefficients, got {len(v)}")
        object.__setattr__(self, "identities3", tuple(self.field.vec(v) for v in self.identities3))
        object.__setattr__(self, "identities2", tuple(self.field.vec(v) for v in self.identities2))

    @property
    def field_caveat(self) -> bool:
        """Over a finite field the equivalence with (NH) is not claimed."""
        return self.field.kind == "prime"

    def to_json(self) -> dict:
        lit = self.field.literal
        return {"field": self.field.to_json(),
                "identities3": [[lit(c) for c in v] for v in self.identities3],
                "identities2": [[lit(c) for c in v] for v in self.identities2]}


def parse_field(obj) -> FieldSpec:
    """{"type": ...} objects, or the short strings "Q" and "F<p>"."""
    if isinstance(obj, dict):
        return FieldSpec.from_json(obj)
    if isinstance(obj, str):
        s = obj.strip()
        if s in ("Q", "QQ", "rational"):
            return FieldSpec.rational()
        if s[:1] in "Ff" and s[1:].lstrip("_").isdigit():
            return FieldSpec.prime(int(s[1:].lstrip("_")))
    raise LinalgError(f"unrecognised field {obj!r}")


def load_presentation(path: str | Path) -> VarietyPresentation:
    raw = json.loads(Path(path).read_text(encoding="utf-8"))
    if not isinstance(raw, dict) or "field" not in raw:
        raise LinalgError("presentation must be an object with a 'field' entry")
    return VarietyPresentation(parse_field(raw["field"]), tuple(raw.get("identities3", [])),
                               tuple(raw.get("identities2", [])), raw.get("name", Path(path).stem))


def lift_degree2(identity: Sequence, field: FieldSpec) -> list[tuple]:
    """Degree-3 multilinear consequences of a x y + b y x = 0.

    For every ordering (u, v, w) of x, y, z: substitute a product uv for one variable
    (f(uv, w), f(w, uv)) or multiply f(v, w) by u on either side.
    """
    a, b = field.vec(identity)
    if a == 0 and b == 0:
        return []
    S = Multilinear3Space(field)
    seen, out = set(), []
    for u, v, w in permutations("xyz"):
        terms = [
            {("L", u, v, w): a, ("R", w, u, v): b},  # f(uv, w)
            {("R", w, u, v): a, ("L", u, v, w): b},  # f(w, uv)
            {("R", u, v, w): a, ("R", u, w, v): b},  # u f(v, w)
            {("L", v, w, u): a, ("L", w, v, u): b},  # f(v, w) u
        ]
        for t in terms:
            vec = S.vector({m: c for m, c in t.items() if c != 0})
            if any(vec) and vec not in seen:
                seen.add(vec)
                out.append(vec)
    return out


def consequence_space(v: VarietyPresentation) -> Subspace:
    S = Multilinear3Space(v.field)
    rows = []
    for ident in v.identities3:
        for p in permutations("xyz"):
            rows.append(S.permute(ident, dict(zip("xyz", p))))
    for ident in v.identities2:
        rows.extend(lift_degree2(ident, v.field))
    return rref(rows, v.field, 12)


@dataclass(frozen=True)
class LambdaWitness:
    z_xy: tuple  # lambda_1..8
    xy_z: tuple  # lambda_9..16

    @property
    def coefficients(self) -> tuple:
        return self.z_xy + self.xy_z

    def named(self, field: FieldSpec) -> dict:
        return {f"lambda{i}": field.literal(c) for i, c in enumerate(self.coefficients, start=1)}


def residual(field: FieldSpec, left: str, lambdas: Sequence) -> tuple:
    """left - sum lambda_i target_i as a vector."""
    S = Multilinear3Space(field)
    terms = {LEFT_OF[left]: field.one}
    vec = list(S.vector(terms))
    for lam, m in zip(lambdas, TARGETS):
        vec[INDEX[m]] = field.sub(vec[INDEX[m]], lam)
    return tuple(vec)


def _solve_one(I: Subspace, field: FieldSpec, left: str):
    S = Multilinear3Space(field)
    cols = [S.vector({m: 1}) for m in TARGETS] + list(I.basis)
    x = solve(cols, S.vector({LEFT_OF[left]: 1}), field)
    return None if x is None else tuple(x[:8])


def solve_lambda(v: VarietyPresentation) -> LambdaWitness | None:
    I = consequence_space(v)
    a = _solve_one(I, v.field, "z(xy)")
    b = _solve_one(I, v.field, "(xy)z")
    if a is None or b is None:
        return None
    return LambdaWitness(a, b)


def residuals_vanish(v: VarietyPresentation, w: LambdaWitness) -> bool:
    I = consequence_space(v)
    return all(not any(I.reduce(residual(v.field, left, lam))) for left, lam in (("z(xy)", w.z_xy), ("(xy)z", w.xy_z)))


def holds_in(X, field: FieldSpec, left: str, lambdas: Sequence) -> bool:
    """Does the witnessed identity hold in the algebra X on every triple of basis vectors?"""
    basis = [X.basis_vector(i) for i in range(X.dim)]

    def ev(m, env):
        kind, a, b, c = m
        if kind == "R":
            return X.mul(env[a], X.mul(env[b], env[c]))
        return X.mul(X.mul(env[a], env[b]), env[c])

    for x in basis:
        for y in basis:
            for z in basis:
                env = {"x": x, "y": y, "z": z}
                total = ev(LEFT_OF[left], env)
                for lam, m in zip(lambdas, TARGETS):
                    if lam != 0:
                        total = field.axpy(field.neg(lam), ev(m, env), total)
                if any(total):
                    return False
    return True


# ---------------------------------------------------------------- bundled presentations


def associative(field: FieldSpec) -> VarietyPresentation:
    S = Multilinear3Space(field)
    return VarietyPresentation(field, (S.vector({"(xy)z": 1, "x(yz)": -1}),), (), "associative")


def lie(field: FieldSpec) -> VarietyPresentation:
    S = Multilinear3Space(field)
    jacobi = S.vector({"x(yz)": 1, "y(zx)": 1, "z(xy)": 1})
    return VarietyPresentation(field, (jacobi,), ((1, 1),), "lie")


def empty(field: FieldSpec) -> VarietyPresentation:
    return VarietyPresentation(field, (), (), "all algebras")


def commutative(field: FieldSpec) -> VarietyPresentation:
    return VarietyPresentation(field, (), ((1, -1),), "commutative")
