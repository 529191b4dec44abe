"""Automatic generation of action-matrix polynomial solvers.

Exact computations run over Z_p; the generated templates are then filled
with floating-point instances and solved through an eigenvalue problem.
"""

from .field import DEFAULT_PRIME, PrimeField
from .poly import MonomialOrder, Polynomial, Ring
from .groebner import ReducedGroebnerBasis, fglm, groebner_basis
from .fan import enumerate_reduced_gbs
from .basis import QuotientBasis, SamplerConfig, build_candidate_set, sample_basis
from .template import EliminationTemplate, best_template, build_template, prune
from .numeric import Solver, make_solver

__all__ = [
    "DEFAULT_PRIME",
    "PrimeField",
    "MonomialOrder",
    "Polynomial",
    "Ring",
    "ReducedGroebnerBasis",
    "fglm",
    "groebner_basis",
    "enumerate_reduced_gbs",
    "QuotientBasis",
    "SamplerConfig",
    "build_candidate_set",
    "sample_basis",
    "EliminationTemplate",
    "best_template",
    "build_template",
    "prune",
    "Solver",
    "make_solver",
]
