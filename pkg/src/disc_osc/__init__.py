"""Oscillation of solutions of ``f'' + A f = 0`` in the unit disc.

Names are loaded on first access so that ``disc_osc.cli`` can set thread
limits before numpy is imported.
"""
from importlib import import_module

__version__ = "0.1.0"

_EXPORTS = {
    "hyperbolic": ["DiscPoint", "as_disc", "pseudo_distance", "hyperbolic_distance", "automorphism",
                   "hyperbolic_midpoint", "pseudo_disc_circle", "hyperbolic_disc_circle"],
    "jet": ["Jet"],
    "kernel": ["Analytic", "BlaschkeProduct", "Derivative", "Quotient", "GaugePsi", "GridSpec", "SupEstimate",
               "constant", "constant_gauge", "schwarzian", "schwarzian_oracle", "separation_constant",
               "smoothness_constant", "spherical_derivative", "weighted_sup_estimate"],
    "ode": ["ContinuationError", "LocalSolution", "SolutionBasis", "continue_along", "series_solve",
            "solution_basis", "wronskian_drift"],
    "locator": ["ZeroSet", "count_zeros", "locate_critical_points", "locate_zeros", "multiplicity",
                "scan_real_zeros", "scan_real_critical_points"],
    "pick": ["InterpolationProblem", "pick_solve", "minimal_norm"],
    "verifiers": ["VerificationReport", "default_gauge", "verify_balance", "verify_separation",
                  "zero_critical_bound", "zero_separation_bound", "quotient_growth_check"],
    "constructions": ["WitnessBundle", "example_gamma", "example_q", "example_blaschke_quotient",
                      "build_bmoa_interpolant", "build_nonnormal_witness", "build_prescribed_values_witness",
                      "lappan_function", "dyadic_zeros"],
    "scenarios": ["ScenarioConfig", "run_scenario", "SCENARIOS", "CHECKS"],
}
_WHERE = {name: mod for mod, names in _EXPORTS.items() for name in names}
__all__ = sorted(_WHERE)


def __getattr__(name):
    if name in _WHERE:
        return getattr(import_module(f".{_WHERE[name]}", __name__), name)
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
