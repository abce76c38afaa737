"""Lagrangians of hypergraphs and r-patterns, and Frankl-Rödl non-jump certificates."""

__version__ = "0.1.0"

from .errors import BudgetExceededError
from .frankl_rodl import (CertificateReport, check_multiplicity_condition,
                          check_nonjump_certificate, edge_weight_lower_bound, fr_construction,
                          limitation_bound, scale_nonjump)
from .lagrangian import (LagrangianResult, SolverConfig, StationaryPoint, best_blowup_density,
                         certified_lagrangian, grad, lagrangian_grid_oracle, lagrangian_numeric,
                         lagrangian_support_enum, verify_kkt)
from .pattern import (PatternError, RGraph, RPattern, blow_up, density, edge_weight,
                      induced_subpattern, is_simple, make_graph, make_pattern, make_weighting,
                      pattern_weight, simple_blow_up)
from .polynomial import SimplexPolynomial, merged_polynomial
from .roots import real_roots

__all__ = [
    "BudgetExceededError", "CertificateReport", "LagrangianResult", "PatternError", "RGraph",
    "RPattern", "SimplexPolynomial", "SolverConfig", "StationaryPoint", "best_blowup_density",
    "blow_up", "certified_lagrangian", "check_multiplicity_condition",
    "check_nonjump_certificate", "density", "edge_weight", "edge_weight_lower_bound",
    "fr_construction", "grad", "induced_subpattern", "is_simple", "lagrangian_grid_oracle",
    "lagrangian_numeric", "lagrangian_support_enum", "limitation_bound", "make_graph",
    "make_pattern", "make_weighting", "merged_polynomial", "pattern_weight", "real_roots",
    "scale_nonjump", "simple_blow_up", "verify_kkt",
]
