"""Noncommutative power series over l-adic scalars and their linearization."""
from .divisors import (SiegelCertificate, check_siegel, fit_siegel, fit_siegel_batch,
                       lifting_exponent_check)
from .endo import (EndoTuple, JetOperator, compose, invert, is_semisimple_jet, jet_matrix,
                   resonance_check, taylor_bound, taylor_gap)
from .errors import NCSiegelError, ParseError
from .params import SiegelParams
from .rep import (ReprSpec, WeightTable, extend_representation, forced_unipotence_check,
                  weight_kill_cutoff)
from .scalars import CappedScalar, LogNorm, exact, scalar_arith, valuation
from .series import NCSeries, Radius, ideal_truncate, norm_r, ring_op, substitute
from .siegel import (LinearizationResult, calculus_product_bound, calculus_sup_bound, choose_B,
                     eigen_coordinates, formal_linearize, linearize, siegel_step,
                     solve_homological)

__version__ = "0.1.0"

__all__ = [
    "CappedScalar", "EndoTuple", "JetOperator", "LinearizationResult", "LogNorm", "NCSeries",
    "NCSiegelError", "ParseError", "Radius", "ReprSpec", "SiegelCertificate", "SiegelParams",
    "WeightTable", "calculus_product_bound", "calculus_sup_bound", "check_siegel", "choose_B",
    "compose", "eigen_coordinates", "exact", "extend_representation", "fit_siegel",
    "fit_siegel_batch", "forced_unipotence_check", "formal_linearize", "ideal_truncate", "invert",
    "is_semisimple_jet", "jet_matrix", "lifting_exponent_check", "linearize", "norm_r",
    "resonance_check", "ring_op", "scalar_arith", "siegel_step", "solve_homological",
    "substitute", "taylor_bound", "taylor_gap", "valuation", "weight_kill_cutoff",
]
