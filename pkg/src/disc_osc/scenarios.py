"""Scenario definitions, configuration and the checks they run.

A scenario builds a :class:`Case` (coefficient, solution, located zeros and
critical points, gauge) from a small set of typed parameters.  Checks are
looked up by name in :data:`CHECKS` and each returns a
:class:`~disc_osc.verifiers.VerificationReport`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from . import constructions as C
from .hyperbolic import hyperbolic_distance, one_minus_abs2
from .kernel import (
    Analytic,
    BlaschkeProduct,
    Derivative,
    GridSpec,
    schwarzian_oracle,
    spherical_derivative,
    weighted_sup_estimate,
)
from .locator import (
    ZeroOnContour,
    WindingError,
    _count_perturbed,
    count_zeros,
    locate_critical_points,
    locate_zeros,
    multiplicity,
    scan_real_critical_points,
    scan_real_zeros,
)
from .ode import SolutionBasis, wronskian_drift
from .verifiers import (
    DIAGNOSTIC,
    FAIL,
    PASS,
    THEOREM_SLACK,
    VerificationReport,
    coefficient_growth_margin,
    default_gauge,
    disc_samples,
    gauge_sup_estimate,
    normality_functional,
    quotient_growth_check,
    quotient_threshold,
    univalence_spot_check,
    verify_balance,
    verify_separation,
    zero_critical_bound,
    zero_separation_bound,
)

WRONSKIAN_TOL = 1e-10
INTERPOLATION_TOL = 1e-8
VALUE_TOL = 1e-7


class ConfigError(ValueError):
    """Malformed or inconsistent scenario configuration."""


# parameter parsing ------------------------------------------------------------


def parse_complex(text):
    if isinstance(text, (int, float, complex, np.number)):
        return complex(text)
    s = str(text).strip().replace(" ", "").replace("i", "j")
    try:
        return complex(s)
    except ValueError as exc:
        raise ConfigError(f"not a complex number: {text!r}") from exc


def parse_complex_list(text):
    if isinstance(text, (list, tuple, np.ndarray)):
        return [parse_complex(t) for t in text]
    text = str(text).strip()
    if not text:
        return []
    return [parse_complex(t) for t in text.split(",")]


def parse_float(text):
    try:
        return float(text)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"not a real number: {text!r}") from exc


def parse_int(text):
    try:
        v = float(text)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"not an integer: {text!r}") from exc
    if v != int(v):
        raise ConfigError(f"not an integer: {text!r}")
    return int(v)


def parse_optional_complex(text):
    if text is None or str(text).strip().lower() in ("", "none", "auto"):
        return None
    return parse_complex(text)


def parse_choice(*choices):
    def parse(text):
        t = str(text).strip()
        if t not in choices:
            raise ConfigError(f"expected one of {', '.join(choices)}; got {text!r}")
        return t

    return parse


@dataclass(frozen=True)
class Param:
    default: object
    parse: Callable
    help: str


# the case object -----------------------------------------------------------------


@dataclass
class Case:
    """Everything a check may need, produced once per run."""

    A: object
    f: object
    zeros: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=complex))
    criticals: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=complex))
    bundle: C.WitnessBundle | None = None
    basis: SolutionBasis | None = None
    psi: object = None
    M: float | None = None
    K: float | None = None
    search_radius: float | None = None
    grid: GridSpec = field(default_factory=GridSpec)
    params: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)


def _real_scan_case(case, radius, step):
    f = case.f
    case.zeros = np.asarray(scan_real_zeros(f, -radius, radius, step=step), dtype=complex)
    case.criticals = np.asarray(scan_real_critical_points(f, -radius, radius, step=step), dtype=complex)
    case.search_radius = radius
    case.extra["locator"] = "real_scan"
    return case


def _quadtree_case(case, radius):
    zs = locate_zeros(case.f, 0.0, radius)
    cs = locate_critical_points(case.f, 0.0, radius)
    case.zeros = zs.array()
    case.criticals = cs.array()
    case.search_radius = radius
    case.extra["locator"] = "argument_principle"
    case.extra["zero_count"] = zs.certified_count
    case.extra["critical_count"] = cs.certified_count
    return case


def _basis_solution(A, f_closed):
    basis = SolutionBasis(A)
    d = f_closed.jet(np.array(0j), 1).taylor()
    return basis, basis.with_initial_data(complex(d[0]), complex(d[1]))


def _default_gauge_case(case, norm=None):
    g = default_gauge(case.A, case.grid, norm=norm)
    case.psi, case.M, case.K = g.gauge, g.M, g.K
    case.extra["gauge_constant"] = g.c
    case.extra["coefficient_norm"] = g.norm
    return case


# scenario builders ---------------------------------------------------------------------


def build_gamma(p, grid):
    W = C.example_gamma(p["gamma"])
    basis, f = _basis_solution(W.A, W.f)
    case = Case(W.A, f, bundle=W, basis=basis, grid=grid, params=p)
    _real_scan_case(case, p["scan_radius"], p["step"])
    case.extra["closed_form_zeros"] = [
        W.zero_formula(n) for n in range(-50, 51) if abs(W.zero_formula(n)) < p["scan_radius"]
    ]
    return _default_gauge_case(case, norm=W.metadata["norm"])


def build_q(p, grid):
    W = C.example_q(p["q"])
    basis, f = _basis_solution(W.A, W.f)
    case = Case(W.A, f, bundle=W, basis=basis, grid=grid, params=p)
    _real_scan_case(case, p["scan_radius"], p["step"])
    case.psi = W.gauge
    case.K = W.gauge.known_K
    case.M = gauge_sup_estimate(W.A, W.gauge.psi, grid).estimate
    case.extra["closed_form_zeros"] = [
        W.zero_formula(n) for n in range(1, 10_000) if W.zero_formula(n) < p["scan_radius"]
    ]
    return case


def build_blaschke_quotient(p, grid):
    B = BlaschkeProduct(p["zeros"])
    W = C.example_blaschke_quotient(B)
    if p["solution"] == "closed_form":
        case = Case(W.A, W.f, bundle=W, grid=grid, params=p)
    else:
        basis = SolutionBasis(W.A)
        case = Case(W.A, basis.f1, bundle=W, basis=basis, grid=grid, params=p)
    _quadtree_case(case, p["radius"])
    return _default_gauge_case(case)


def build_nonnormal(p, grid):
    zeros = C.dyadic_zeros(p["N"])
    W = C.build_nonnormal_witness(zeros, p["xi"])
    case = Case(W.A, W.f, zeros=W.metadata["zeros"], bundle=W, grid=grid, params=p)
    case.extra["sequence_delta"] = C.dyadic_separation_constant()
    return case


def build_prescribed(p, grid):
    n = np.arange(1, p["count"] + 1)
    alpha = 1.0 - p["base"] ** -n.astype(float)
    beta = -alpha
    W = C.build_prescribed_values_witness(alpha, beta, p["a"], p["b"], grid=GridSpec(k_max=10))
    case = Case(W.A, W.f, bundle=W, grid=grid, params=p)
    case.extra["alpha"], case.extra["beta"] = alpha, beta
    return case


def build_lappan(p, grid):
    w = C.lappan_function()
    return Case(None, w, grid=grid, params=p, extra={"w": w})


def build_custom(p, grid):
    coeffs = np.array(p["coefficients"], dtype=complex)
    if coeffs.size == 0:
        coeffs = np.zeros(1, dtype=complex)

    def fn(Z):
        out = coeffs[-1] + 0.0 * Z
        for c in coeffs[-2::-1]:
            out = out * Z + c
        return out

    A = Analytic(fn, radius=lambda z: np.full(np.shape(z), np.inf), name="custom_polynomial")
    basis = SolutionBasis(A)
    f = basis.with_initial_data(p["f0"], p["f0_prime"])
    case = Case(A, f, basis=basis, grid=grid, params=p)
    _quadtree_case(case, p["radius"])
    return _default_gauge_case(case)


@dataclass(frozen=True)
class ScenarioSpec:
    name: str
    reproduces: str
    build: Callable
    parameters: dict
    checks: tuple
    allowed: tuple
    grid: GridSpec = GridSpec(k_max=10)


_SEP = ("separation", "balance", "wronskian", "residual", "zero_count", "normality", "coefficient_sup",
        "coefficient_growth", "carleson")

SCENARIOS = {
    s.name: s
    for s in [
        ScenarioSpec(
            "gamma_example",
            "zero/critical-point separation; sharpness of the separation constant",
            build_gamma,
            {
                "gamma": Param(1.0, parse_float, "frequency; A = (1 + 4 gamma^2) / (1 - z^2)^2"),
                "scan_radius": Param(0.999, parse_float, "zeros are collected on (-r, r)"),
                "step": Param(0.01, parse_float, "scan step in hyperbolic length"),
            },
            ("separation", "balance", "wronskian", "residual", "zero_count"),
            _SEP + ("quotient_growth",),
        ),
        ScenarioSpec(
            "q_example",
            "zero/critical-point separation with a shrinking gauge",
            build_q,
            {
                "q": Param(2.0, parse_float, "exponent q > 1 of p = (log(e / (1 - z)))^q"),
                "scan_radius": Param(0.999, parse_float, "zeros are collected on (-r, r)"),
                "step": Param(0.01, parse_float, "scan step in hyperbolic length"),
            },
            ("separation", "balance", "wronskian", "residual", "zero_count"),
            _SEP,
        ),
        ScenarioSpec(
            "blaschke_quotient",
            "bounded solutions whose critical points are not separated",
            build_blaschke_quotient,
            {
                "zeros": Param([0.5, -0.5], parse_complex_list, "zeros of the finite Blaschke product B"),
                "radius": Param(0.95, parse_float, "zeros are located in |z| < radius"),
                "solution": Param("basis", parse_choice("basis", "closed_form"),
                                  "basis: f1 of the solved basis; closed_form: 2 / (B + 2)"),
            },
            ("separation", "balance", "residual", "wronskian"),
            _SEP + ("quotient_growth",),
        ),
        ScenarioSpec(
            "nonnormal_witness",
            "non-normal solutions for a coefficient of finite weighted norm",
            build_nonnormal,
            {
                "N": Param(15, parse_int, "dyadic zeros 1 - 2^-n, n = 1..N"),
                "xi": Param(None, parse_optional_complex, "boundary point of log(1 / (xi - z)); default from zeros"),
            },
            ("interpolation", "removability", "residual", "normality", "coefficient_sup"),
            ("interpolation", "removability", "residual", "normality", "coefficient_sup", "balance"),
        ),
        ScenarioSpec(
            "prescribed_values",
            "bounded zero-free solutions taking two values on given sequences",
            build_prescribed,
            {
                "base": Param(3.0, parse_float, "alpha_n = 1 - base^-n, beta_n = -alpha_n"),
                "count": Param(5, parse_int, "number of nodes in each sequence"),
                "a": Param(1 + 0j, parse_complex, "value on alpha_n"),
                "b": Param(2j, parse_complex, "value on beta_n"),
            },
            ("interpolation", "zero_free", "residual", "balance"),
            ("interpolation", "zero_free", "residual", "balance", "coefficient_sup"),
        ),
        ScenarioSpec(
            "lappan",
            "uniformly locally univalent but not normal",
            build_lappan,
            {
                "inner_radius": Param(0.9, parse_float, "reference circle for the normality gauge"),
                "outer_radius": Param(0.9999, parse_float, "outer circle for the normality gauge"),
            },
            ("schwarzian_sup", "normal_growth"),
            ("schwarzian_sup", "normal_growth", "univalence"),
            GridSpec(k_max=14),
        ),
        ScenarioSpec(
            "custom_coefficient",
            "zero/critical-point separation for a user polynomial coefficient",
            build_custom,
            {
                "coefficients": Param([1.0], parse_complex_list, "A(z) = c0 + c1 z + ... (ascending)"),
                "f0": Param(0j, parse_complex, "f(0)"),
                "f0_prime": Param(1 + 0j, parse_complex, "f'(0)"),
                "radius": Param(0.9, parse_float, "zeros are located in |z| < radius"),
            },
            ("separation", "balance", "wronskian"),
            ("separation", "balance", "wronskian", "normality", "coefficient_sup", "coefficient_growth",
             "carleson", "quotient_growth"),
        ),
    ]
}


# configuration ---------------------------------------------------------------------------


GRID_KEYS = {"k_max": int, "angle_base": int, "angle_cap": int, "substeps": int, "r_min": float}


@dataclass
class ScenarioConfig:
    scenario: str
    parameters: dict = field(default_factory=dict)
    grid: GridSpec | None = None
    output_dir: Path = Path("disc_osc_out")
    checks: list | None = None
    plot: bool = True

    def __post_init__(self):
        if self.scenario not in SCENARIOS:
            raise ConfigError(f"unknown scenario {self.scenario!r}; known: {', '.join(SCENARIOS)}")
        spec = SCENARIOS[self.scenario]
        unknown = sorted(set(self.parameters) - set(spec.parameters))
        if unknown:
            raise ConfigError(f"unknown parameters for {self.scenario}: {', '.join(unknown)}")
        parsed = {}
        for k, prm in spec.parameters.items():
            parsed[k] = prm.parse(self.parameters[k]) if k in self.parameters else prm.default
        self.parameters = parsed
        if self.grid is None:
            self.grid = spec.grid
        if self.checks is None:
            self.checks = list(spec.checks)
        for c in self.checks:
            if c not in CHECKS:
                raise ConfigError(f"unknown check {c!r}")
            if c not in spec.allowed:
                raise ConfigError(f"check {c!r} does not apply to {self.scenario}")
        self.output_dir = Path(self.output_dir)


def grid_from_mapping(mapping):
    unknown = sorted(set(mapping) - set(GRID_KEYS))
    if unknown:
        raise ConfigError(f"unknown grid keys: {', '.join(unknown)}")
    kw = {}
    for k, v in mapping.items():
        try:
            kw[k] = GRID_KEYS[k](float(v)) if GRID_KEYS[k] is int else float(v)
        except ValueError as exc:
            raise ConfigError(f"bad grid value {k} = {v!r}") from exc
    return GridSpec(**kw)


# checks -------------------------------------------------------------------------------------


def _need(case, attr, check):
    if getattr(case, attr) is None:
        raise ConfigError(f"check {check!r} needs {attr}, which this scenario does not provide")
    return getattr(case, attr)


def check_separation(case):
    psi = _need(case, "psi", "separation")
    return verify_separation(case.zeros, case.criticals, psi, case.M, K=case.K)


def check_balance(case):
    return verify_balance(case.A, case.f, disc_samples(10_000, 0.99))


def check_wronskian(case):
    basis = _need(case, "basis", "wronskian")
    t = 2 * np.pi * np.arange(64) / 64
    pts = 0.99 * np.exp(1j * t)
    drift = wronskian_drift(basis, pts)
    scaled = wronskian_drift(basis, pts, scaled=True)
    margin = WRONSKIAN_TOL - drift
    return VerificationReport("wronskian", PASS if drift < WRONSKIAN_TOL else FAIL, margin, (),
                              {"tolerance": WRONSKIAN_TOL, "radius": 0.99, "checkpoints": 64}, drift,
                              {"scaled_drift": scaled})


def check_residual(case):
    bundle = _need(case, "bundle", "residual")
    r = bundle.residual()
    return VerificationReport("residual", PASS if r < C.RESIDUAL_TOL else FAIL, C.RESIDUAL_TOL - r, (),
                              {"tolerance": C.RESIDUAL_TOL, "samples": 1000, "radius": 0.95}, r)


def check_zero_count(case):
    radius = _need(case, "search_radius", "zero_count")
    out = {}
    ok = True
    for label, g, pts in (("zeros", case.f, case.zeros), ("critical_points", Derivative(case.f), case.criticals)):
        total, r = _count_perturbed(g, 0.0, radius, 1.0 - 1e-12)
        inside = int(np.sum(np.abs(pts) < r))
        out[label] = {"winding": int(total), "located": inside, "radius": r}
        ok &= total == inside
    worst = min(-abs(v["winding"] - v["located"]) for v in out.values())
    return VerificationReport("zero_count", PASS if ok else FAIL, float(worst), (), {"radius": radius}, None, out)


def check_normality(case):
    rows = normality_functional(case.f, case.zeros)
    details = {"functional": rows}
    if case.bundle is not None and case.bundle.name == "nonnormal_witness":
        delta = case.extra["sequence_delta"]
        n = np.array([r[0] for r in rows], dtype=float)
        v = np.array([r[1] for r in rows])
        lower = v - delta * 2.0**n
        upper = 2.0**n - v
        strict = bool(np.all(lower > 0) and np.all(upper >= 0))
        worst = float(min(np.min(lower / 2.0**n), np.min(upper / 2.0**n)))
        details.update({"delta": delta, "lower_margin": (lower / 2.0**n).tolist(),
                        "upper_margin": (upper / 2.0**n).tolist()})
        return VerificationReport("normality", PASS if strict else FAIL, worst, (),
                                  {"delta": delta, "bound": "delta 2^n < functional <= 2^n"}, worst, details)
    top = max((r[1] for r in rows), default=0.0)
    return VerificationReport("normality", DIAGNOSTIC, math.nan, (), {}, top, details)


def check_interpolation(case):
    bundle = _need(case, "bundle", "interpolation")
    if bundle.name == "nonnormal_witness":
        res = np.asarray(bundle.metadata["interpolation_residuals"])
        worst = float(np.max(res))
        return VerificationReport("interpolation", PASS if worst < INTERPOLATION_TOL else FAIL,
                                  INTERPOLATION_TOL - worst, (), {"tolerance": INTERPOLATION_TOL}, worst,
                                  {"residuals": res})
    a, b = bundle.metadata["a"], bundle.metadata["b"]
    fa = np.atleast_1d(bundle.f(case.extra["alpha"]))
    fb = np.atleast_1d(bundle.f(case.extra["beta"]))
    err = max(float(np.max(np.abs(fa - a), initial=0.0)), float(np.max(np.abs(fb - b), initial=0.0)))
    return VerificationReport("interpolation", PASS if err < VALUE_TOL else FAIL, VALUE_TOL - err, (),
                              {"tolerance": VALUE_TOL}, err,
                              {"alpha_errors": np.abs(fa - a), "beta_errors": np.abs(fb - b)})


def check_removability(case):
    A = case.A
    spread = C.removability_check(A, case.zeros)
    return VerificationReport("removability", PASS if spread < 1e-6 else FAIL, 1e-6 - spread, (),
                              {"tolerance": 1e-6, "directions": 4}, spread,
                              {"values_at_zeros": A(case.zeros)})


def check_zero_free(case):
    try:
        n = count_zeros(case.f, 0.0, 0.999)
    except (ZeroOnContour, WindingError) as exc:
        return VerificationReport("zero_free", FAIL, -math.inf, (), {"radius": 0.999}, None, {"error": str(exc)})
    return VerificationReport("zero_free", PASS if n == 0 else FAIL, float(-n), (), {"radius": 0.999}, n)


def check_coefficient_sup(case):
    est = weighted_sup_estimate(case.A, 2.0, case.grid)
    return VerificationReport("coefficient_sup", DIAGNOSTIC, math.nan, (est.argmax,), {"exponent": 2.0},
                              est.estimate, {"stable": est.stable, "coarse": est.coarse,
                                             "relative_change": est.relative_change, "grid_points": est.grid_points})


def check_coefficient_growth(case):
    return coefficient_growth_margin(case.A, case.grid)


def check_carleson(case):
    from .verifiers import carleson_boxes, carleson_measure_estimate

    boxes = carleson_boxes()
    value = carleson_measure_estimate(case.A, boxes)
    return VerificationReport("carleson", DIAGNOSTIC, math.nan, (), {"boxes": len(boxes)}, value)


def check_quotient_growth(case):
    basis = _need(case, "basis", "quotient_growth")
    norm = weighted_sup_estimate(basis.A, 2.0, case.grid).estimate
    alpha = quotient_threshold(2.0 * norm) + 0.5
    return quotient_growth_check(basis, alpha, case.grid, A_norm=norm)


def _ring_table(fn, radii, n=1 << 14):
    rows = []
    for r in radii:
        z = r * np.exp(2j * np.pi * np.arange(n) / n)
        rows.append((float(r), float(np.max(fn(z)))))
    return rows


def check_schwarzian_sup(case):
    w = case.extra["w"]
    S = schwarzian_oracle(w)
    est = weighted_sup_estimate(S, 2.0, case.grid)
    table = _ring_table(lambda z: one_minus_abs2(z) ** 2 * np.abs(S(z)), case.grid.radii()[1:])
    return VerificationReport("schwarzian_sup", DIAGNOSTIC, math.nan, (est.argmax,), {"exponent": 2.0},
                              est.estimate, {"stable": est.stable, "coarse": est.coarse,
                                             "relative_change": est.relative_change, "table": table})


def check_normal_growth(case):
    w = case.extra["w"]
    r0, r1 = case.params["inner_radius"], case.params["outer_radius"]

    def gauge(z):
        return one_minus_abs2(z) * spherical_derivative(w, z)

    n = 1 << 16
    t0 = _ring_table(gauge, [r0], n)[0][1]
    t1 = _ring_table(gauge, [r1], n)[0][1]
    table = _ring_table(gauge, [r for r in case.grid.radii()[1:]], n)
    return VerificationReport("normal_growth", DIAGNOSTIC, math.nan, (), {"inner": r0, "outer": r1}, t1,
                              {"inner_value": t0, "outer_value": t1, "grows": t1 > t0, "table": table})


def check_univalence(case):
    from .kernel import weighted_sup_estimate as wse
    from .verifiers import local_univalence_radius

    w = case.extra["w"]
    snorm = wse(schwarzian_oracle(w), 2.0, case.grid).estimate
    delta = local_univalence_radius(snorm)
    centers = np.array([0.0, 0.5, 0.9, 0.99, 0.5j, -0.9])
    return univalence_spot_check(w, delta, centers)


CHECKS = {
    "separation": (check_separation, "zeros and critical points against their hyperbolic lower bounds"),
    "balance": (check_balance, "(f')^# f^# <= |A|/4 and (f'/f)^# <= |A| + 1 on 10^4 points"),
    "wronskian": (check_wronskian, "Wronskian drift of the solved basis on |z| = 0.99"),
    "residual": (check_residual, "|f'' + A f| relative residual of the closed-form pair"),
    "zero_count": (check_zero_count, "winding counts equal the number of located zeros"),
    "normality": (check_normality, "(1 - |z_n|^2)|f'(z_n)| at the zeros"),
    "interpolation": (check_interpolation, "interpolation residuals of the construction"),
    "removability": (check_removability, "A finite at the prescribed zeros (four directions)"),
    "zero_free": (check_zero_free, "winding count 0 on |z| = 0.999"),
    "coefficient_sup": (check_coefficient_sup, "grid sup of (1 - |z|^2)^2 |A|"),
    "coefficient_growth": (check_coefficient_growth, "grid fit of |A| <= (1 + C(1 - |z|)) / (1 - |z|^2)^2"),
    "carleson": (check_carleson, "box estimate of the measure |A|^2 (1 - |z|^2)^3 dm"),
    "quotient_growth": (check_quotient_growth, "(1 - |z|^2)^alpha w^# above the exponent threshold"),
    "schwarzian_sup": (check_schwarzian_sup, "grid sup of (1 - |z|^2)^2 |S_w|"),
    "normal_growth": (check_normal_growth, "(1 - |z|^2) w^# on an inner and an outer circle"),
    "univalence": (check_univalence, "injectivity spot checks on pseudo-hyperbolic discs"),
}


# running -----------------------------------------------------------------------------------


@dataclass
class ScenarioResult:
    config: ScenarioConfig
    case: Case
    reports: list

    @property
    def failed(self):
        return [r.name for r in self.reports if r.verdict == FAIL]

    @property
    def passed(self):
        return not self.failed

    def zero_rows(self):
        """``(index, z, multiplicity, functional)`` ordered by modulus then argument."""
        zs = np.asarray(self.case.zeros, dtype=complex)
        if zs.size == 0:
            return []
        order = sorted(range(zs.size), key=lambda i: (round(abs(zs[i]), 12), math.atan2(zs[i].imag, zs[i].real)))
        zs = zs[order]
        d = self.case.f.jet(zs, 1).taylor()[1]
        fun = one_minus_abs2(zs) * np.abs(d)
        rows = []
        for k, z in enumerate(zs):
            try:
                m = multiplicity(self.case.f, z)
            except ArithmeticError:
                m = 0
            rows.append((k + 1, complex(z), m, float(fun[k])))
        return rows

    def bound_rows(self):
        """Pairwise hyperbolic distances against the separation bounds."""
        case = self.case
        if case.psi is None:
            return []
        zs = np.asarray(case.zeros, dtype=complex)
        cs = np.asarray(case.criticals, dtype=complex)
        rows = []
        for i, z in enumerate(zs):
            for j, a in enumerate(cs):
                d = float(hyperbolic_distance(z, a))
                b = zero_critical_bound(case.psi, case.M, a, case.K)
                rows.append(("zero_critical", i + 1, j + 1, complex(z), complex(a), d, b, d - b))
        for i in range(zs.size):
            for j in range(i + 1, zs.size):
                d = float(hyperbolic_distance(zs[i], zs[j]))
                b = zero_separation_bound(case.psi, case.M, zs[i], zs[j], case.K)
                rows.append(("zero_zero", i + 1, j + 1, complex(zs[i]), complex(zs[j]), d, b, d - b))
        return rows


def run_scenario(config):
    spec = SCENARIOS[config.scenario]
    try:
        case = spec.build(config.parameters, config.grid)
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"{config.scenario}: {exc}") from exc
    reports = []
    for name in config.checks:
        reports.append(CHECKS[name][0](case))
    return ScenarioResult(config, case, reports)


def scenario_table():
    rows = []
    for s in SCENARIOS.values():
        rows.append({
            "name": s.name,
            "reproduces": s.reproduces,
            "parameters": {k: _fmt_default(p.default) for k, p in s.parameters.items()},
            "checks": list(s.checks),
            "optional_checks": [c for c in s.allowed if c not in s.checks],
        })
    return rows


def _fmt_default(v):
    if v is None:
        return "auto"
    if isinstance(v, complex):
        return repr(v.real) if v.imag == 0 else str(v).strip("()")
    if isinstance(v, list):
        return ", ".join(_fmt_default(complex(x)) for x in v)
    return str(v)
