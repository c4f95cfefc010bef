"""Regularity analysis of level- and parameter-dependent subdivision schemes."""

from .engine import ParameterSchedule, cascade, convergence_probe, limit_support, support_interval
from .jsr import JsrBounds, MatrixFamily, interval_family_jsr, jsr_bounds, spectral_radius
from .laurent import DomainError, LaurentPoly, Mask, ParamSymbol, to_mask, to_symbol
from .regularity import RegularityReport, analyze, stationary_analyze
from .schemefile import SchemeDocument, load_scheme, parse_scheme
from .spectral_limits import PeriodicZeroSet, gamma_set, generability_necessary_test, phi_hat_zero_union
from .sumrules import family_sum_rule_order, sum_rule_order
from .transition import TransitionFamily, restrict

__all__ = [
    "DomainError",
    "JsrBounds",
    "LaurentPoly",
    "Mask",
    "MatrixFamily",
    "ParamSymbol",
    "ParameterSchedule",
    "PeriodicZeroSet",
    "RegularityReport",
    "SchemeDocument",
    "TransitionFamily",
    "analyze",
    "cascade",
    "convergence_probe",
    "family_sum_rule_order",
    "gamma_set",
    "generability_necessary_test",
    "interval_family_jsr",
    "jsr_bounds",
    "limit_support",
    "load_scheme",
    "parse_scheme",
    "phi_hat_zero_union",
    "restrict",
    "spectral_radius",
    "stationary_analyze",
    "sum_rule_order",
    "support_interval",
    "to_mask",
    "to_symbol",
]
