"""Exact verification of 2-term sh Leibniz algebras and the structures that produce them."""
from .algebra_core import FinSpace, LinearMap, PreconditionError, ShapeError, StructureTensor
from .report import CheckResult, VerifyReport
from .sh_leibniz import ShLeibniz2, ShMorphism, TwoTermComplex, check_morphism, check_sh_leibniz, classify

__version__ = "0.1.0"

__all__ = [
    "CheckResult", "FinSpace", "LinearMap", "PreconditionError", "ShLeibniz2", "ShMorphism",
    "ShapeError", "StructureTensor", "TwoTermComplex", "VerifyReport", "check_morphism",
    "check_sh_leibniz", "classify",
]
