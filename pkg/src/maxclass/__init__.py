"""p-groups of maximal class and their commutator-pair multipliers."""
from .cyclotomic import (AlphaMap, AlphaSolutions, CycElement, alpha_canonical, alpha_solve,
                         check_parameters, choose_a)
from .errors import (BadParameters, BudgetExceeded, HypothesisViolated, MaxClassError,
                     ModelInvalid, TooLarge)
from .group import MaxClassGroup, construct_group, theorem1_predicate
from .homology import b0_oracle, schur_multiplier
from .kernels import BACKEND
from .multiplier import (B0Report, b0_coinvariants, bounds_check, reconcile, theorem3_formula,
                         wedge_coinvariants)
from .presentation import FinitePresentation, emit_presentation
from .tables import FiniteGroupTable, to_multiplication_table

__version__ = "0.1.0"

__all__ = [
    "AlphaMap", "AlphaSolutions", "B0Report", "BACKEND", "BadParameters", "BudgetExceeded",
    "CycElement", "FiniteGroupTable", "FinitePresentation", "HypothesisViolated", "MaxClassError",
    "MaxClassGroup", "ModelInvalid", "TooLarge", "alpha_canonical", "alpha_solve",
    "b0_coinvariants", "b0_oracle", "bounds_check", "check_parameters", "choose_a",
    "construct_group", "emit_presentation", "reconcile", "schur_multiplier", "theorem1_predicate",
    "theorem3_formula", "to_multiplication_table", "wedge_coinvariants",
]
