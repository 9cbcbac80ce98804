"""Higgins commutators in finite groups, finite loops and finite-dimensional algebras."""

from .commutators import CommutatorResult, HigginsOptions, higgins, huq, lower_central_series, normal_closure_via_commutator
from .exactlinalg import FieldSpec, Subspace
from .structures import FdAlgebra, FiniteGroup, FiniteLoop, Subobject, generate, validate, whole

__all__ = [
    "CommutatorResult", "FdAlgebra", "FieldSpec", "FiniteGroup", "FiniteLoop", "HigginsOptions", "Subobject",
    "Subspace", "generate", "higgins", "huq", "lower_central_series", "normal_closure_via_commutator",
    "validate", "whole",
]
