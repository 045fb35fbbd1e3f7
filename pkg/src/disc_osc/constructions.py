"""Closed-form examples and finite witness constructions.

Every builder returns a :class:`WitnessBundle` holding the coefficient ``A``,
a solution ``f`` of ``f'' + A f = 0`` and the data used to build them.  All
logarithms and powers are principal and are only applied to expressions with
positive real part in the disc (``1 - z``, ``1 - z/xi``, ``1 - z^2``), so the
oracles are analytic in the whole disc.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import jet as J
from .hyperbolic import as_disc, hyperbolic_distance, one_minus_abs2
from .jet import Jet, shift
from .kernel import Analytic, BlaschkeProduct, GaugePsi, GridSpec, separation_constant
from .locator import count_zeros
from .pick import InterpolationProblem, pick_solve

RESIDUAL_TOL = 1e-8


def _dist_to(points):
    points = np.asarray(points, dtype=complex)

    def radius(z):
        z = np.asarray(z, dtype=complex)
        return np.min(np.abs(z[..., None] - points), axis=-1)

    return radius


@dataclass
class WitnessBundle:
    name: str
    A: object
    f: object
    metadata: dict = field(default_factory=dict)
    zero_formula: object = None
    gauge: GaugePsi | None = None
    # jet of f times a point-dependent constant, for solutions too large to evaluate directly
    scaled_jet: object = None

    def zeros(self, indices):
        if self.zero_formula is None:
            raise ValueError(f"{self.name} has no closed-form zero list")
        return np.array([self.zero_formula(n) for n in indices])

    def residual(self, samples=None):
        """``max |f'' + A f| / max(1, |A f|)`` over the samples (relative to the size of the terms)."""
        from .verifiers import disc_samples

        z = disc_samples(1000, 0.95) if samples is None else np.atleast_1d(as_disc(samples))
        d = (self.scaled_jet or self.f.jet)(z, 2).taylor()
        a = self.A.jet(z, 0).coeffs[0]
        af = a * d[0]
        r = np.abs(2.0 * d[2] + af) / np.maximum(1.0, np.abs(af))
        return float(np.max(r))


# the gamma family -------------------------------------------------------------------


def gamma_zero(gamma, n):
    """``(e^{pi n/gamma} - 1) / (e^{pi n/gamma} + 1) = tanh(pi n / (2 gamma))``."""
    return math.tanh(math.pi * n / (2.0 * gamma))


def example_gamma(gamma):
    """``A = (1 + 4 gamma^2) / (1 - z^2)^2`` with ``f = sqrt(1 - z^2) sin(gamma log((1+z)/(1-z)))``."""
    if not 0 < gamma < math.inf:
        raise ValueError("gamma must be positive and finite")
    k = 1.0 + 4.0 * gamma * gamma
    radius = _dist_to([1.0, -1.0])
    A = Analytic(lambda Z: k / (1.0 - Z * Z) ** 2, radius=radius, name=f"A_gamma({gamma:g})")
    f = Analytic(lambda Z: J.sqrt(1.0 - Z * Z) * J.sin(gamma * J.log((1.0 + Z) / (1.0 - Z))), radius=radius,
                 name=f"f_gamma({gamma:g})")
    meta = {"gamma": gamma, "norm": k, "gap": math.pi / (2.0 * gamma), "f_prime_at_0": 2.0 * gamma}
    return WitnessBundle(f"gamma_example({gamma:g})", A, f, meta, lambda n: gamma_zero(gamma, n))


# the q family -------------------------------------------------------------------------


def q_zero(q, n):
    """``1 - exp(1 - (n pi)^(1/q))``."""
    return -math.expm1(1.0 - (n * math.pi) ** (1.0 / q))


def q_gauge(q):
    """``psi(r) = (1/2) (log(e / (1 - r)))^(1 - q)`` with ``K = (log 2e)^(q-1)``."""
    def psi(r):
        r = np.asarray(r, dtype=float)
        return 0.5 * (1.0 - np.log1p(-r)) ** (1.0 - q)

    return GaugePsi(psi, name=f"q_gauge({q:g})", known_K=math.log(2.0 * math.e) ** (q - 1.0))


def _q_p_jet(q, z, order, scale):
    Z = Jet.variable(z, order, scale)
    return J.power(1.0 - J.log(1.0 - Z), q)


def example_q(q):
    """``A = (p')^2 + S_p / 2`` and ``f = sin(p) / sqrt(p')`` with ``p = (log(e/(1-z)))^q``."""
    if not q > 1:
        raise ValueError("q must exceed 1")
    radius = _dist_to([1.0])

    def a_jet(z, order, scale):
        p = _q_p_jet(q, z, order + 3, scale)
        d1 = p.deriv()
        d2 = d1.deriv()
        d3 = d2.deriv()
        r = d2 / d1
        s = d3 / d1 - 1.5 * r * r
        return (d1 * d1).truncate(order) + s * 0.5

    def f_jet(z, order, scale):
        p = _q_p_jet(q, z, order + 1, scale)
        d1 = p.deriv()
        return J.sin(p.truncate(order)) / J.sqrt(d1)

    def p_fn(Z):
        return J.power(1.0 - J.log(1.0 - Z), q)

    A = Analytic(jet_fn=a_jet, radius=radius, name=f"A_q({q:g})")
    f = Analytic(jet_fn=f_jet, radius=radius, name=f"f_q({q:g})")
    meta = {"q": q, "p": Analytic(p_fn, radius=radius, name="p")}
    return WitnessBundle(f"q_example({q:g})", A, f, meta, lambda n: q_zero(q, n), q_gauge(q))


def q_gap_asymptotic(q, n):
    """``(pi / 2q) (n pi)^(1/q - 1)``."""
    return math.pi / (2.0 * q) * (n * math.pi) ** (1.0 / q - 1.0)


# Blaschke quotient ------------------------------------------------------------------------


def example_blaschke_quotient(B):
    """``f = 2 / (B + 2)`` with ``A = (2 B'' + B'' B - 2 B'^2) / (B + 2)^2``."""
    if not isinstance(B, BlaschkeProduct):
        B = BlaschkeProduct(B)

    def a_jet(z, order, scale):
        b = B.jet(z, order + 2, scale)
        d1 = b.deriv()
        d2 = d1.deriv()
        b = b.truncate(order)
        d1 = d1.truncate(order)
        return (2.0 * d2 + d2 * b - 2.0 * d1 * d1) / ((b + 2.0) * (b + 2.0))

    A = Analytic(jet_fn=a_jet, radius=B.validity_radius, name="A_blaschke")
    f = Analytic(jet_fn=lambda z, order, scale: 2.0 / (B.jet(z, order, scale) + 2.0), radius=B.validity_radius,
                 name="f_blaschke")
    meta = {"zeros": B.zeros, "B": B}
    return WitnessBundle("blaschke_quotient", A, f, meta)


# interpolation-based witnesses ---------------------------------------------------------------


class _LogInverse:
    """``log(1/(xi - z)) = log(1/xi) - Log(1 - z/xi)`` for unimodular ``xi``."""

    def __init__(self, xi):
        self.xi = complex(xi)
        self.const = -1j * math.atan2(self.xi.imag, self.xi.real)

    def __call__(self, Z):
        return self.const - J.log(1.0 - Z / self.xi)


@dataclass
class BMOAInterpolant:
    """``g = B h + log(1/(xi - z))`` with ``g'(z_n) = w_n``."""

    g: Analytic
    B: BlaschkeProduct
    h: object
    xi: complex
    nu: np.ndarray
    delta: float
    S: float
    nu_bound: float
    h_norm: float
    h_minimal: float
    residuals: np.ndarray

    def jet(self, z, order, scale=1.0):
        return self.g.jet(z, order, scale)

    def __call__(self, z):
        return self.g(z)

    def validity_radius(self, z):
        return self.g.validity_radius(z)


def default_direction(zeros):
    z = np.atleast_1d(np.asarray(zeros, dtype=complex))
    deepest = z[np.argmax(np.abs(z))]
    return deepest / abs(deepest)


def build_bmoa_interpolant(zeros, w_targets, xi=None):
    """Analytic ``g`` with ``g'(z_n) = w_n`` of the form ``B h + log(1/(xi - z))``."""
    zeros = np.atleast_1d(as_disc(zeros)).astype(complex)
    w = np.atleast_1d(np.asarray(w_targets, dtype=complex))
    xi = default_direction(zeros) if xi is None else complex(xi)
    if abs(abs(xi) - 1.0) > 1e-12:
        raise ValueError("xi must be unimodular")
    B = BlaschkeProduct(zeros)
    delta, _ = separation_constant(B)
    S = float(np.max(one_minus_abs2(zeros) * np.abs(w)))
    bd = B.jet(zeros, 1).taylor()[1]
    nu = (w - 1.0 / (xi - zeros)) / bd
    bound = (S + 2.0) / delta
    if np.max(np.abs(nu)) > bound * (1 + 1e-12):
        raise ArithmeticError("interpolation data exceed the bound (S + 2) / delta")
    h, c_star = pick_solve(InterpolationProblem(zeros, nu))
    hor = h.oracle()
    log_part = _LogInverse(xi)
    g = Analytic(lambda Z: B._eval(Z) * hor.fn(Z) + log_part(Z), radius=_dist_to([xi]), name="bmoa_interpolant")
    gp = g.jet(zeros, 1).taylor()[1]
    res = np.abs(gp - w) / np.maximum(1.0, np.abs(w))
    return BMOAInterpolant(g, B, h, xi, nu, float(delta), S, float(bound), float(h.norm), float(c_star), res)


class RemovableCoefficient:
    """``A = -(B'' + 2 B' g') / B - (g')^2 - g''`` with removable singularities at the zeros of ``B``.

    Away from the zeros the expression is evaluated directly with jets.  Within
    ``near`` (pseudo-hyperbolic) of a zero ``z_n`` the quotient is expanded at
    ``z_n`` after dropping the vanishing constant terms of numerator and
    denominator, and re-expanded at the requested point.
    """

    def __init__(self, B, g, near=1e-3, extra=24):
        self.B, self.g, self.near, self.extra = B, g, near, extra
        self.zeros = B.zeros
        self.name = "A_nonnormal"

    def _parts(self, z, order, scale):
        b = self.B.jet(z, order + 2, scale)
        gj = self.g.jet(z, order + 2, scale)
        b1 = b.deriv()
        b2 = b1.deriv()
        g1 = gj.deriv()
        g2 = g1.deriv()
        num = b2 + 2.0 * b1.truncate(order) * g1.truncate(order)
        return num, b.truncate(order), g1.truncate(order), g2

    def _direct(self, z, order, scale):
        num, b, g1, g2 = self._parts(z, order, scale)
        return -(num / b) - g1 * g1 - g2

    def _at_zero(self, zeta, z, order, scale):
        d = float(one_minus_abs2(zeta)) / (1 + abs(zeta))
        s = 1e-2 * d
        m = order + self.extra
        num, b, g1, g2 = self._parts(np.array(zeta), m + 1, s)
        q = Jet(num.coeffs[1:], zeta, s) / Jet(b.coeffs[1:], zeta, s)
        rest = -(g1 * g1) - g2
        tot = (-q).coeffs[: m + 1] + rest.coeffs[: m + 1]
        t = (complex(z) - zeta) / s
        c = shift(tot, t, order)
        return c * (scale / s) ** np.arange(order + 1)

    def jet(self, z, order, scale=1.0):
        z = np.asarray(z, dtype=complex)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = self._direct(z, order, scale)
        flat = z.reshape(-1)
        if self.zeros.size == 0:
            return out
        # pseudo-hyperbolic distance to the nearest zero
        zz = self.zeros
        num = np.abs(flat[:, None] - zz[None, :])
        den = np.abs(1.0 - np.conj(zz)[None, :] * flat[:, None])
        rho = num / den
        k = np.argmin(rho, axis=1)
        close = np.flatnonzero(rho[np.arange(flat.size), k] < self.near)
        if close.size:
            coeffs = out.coeffs.reshape(order + 1, -1).copy()
            sc = np.broadcast_to(np.asarray(scale, dtype=float), z.shape).reshape(-1)
            for i in close:
                coeffs[:, i] = self._at_zero(complex(zz[k[i]]), flat[i], order, float(sc[i]))
            out = Jet(coeffs.reshape(out.coeffs.shape), z, scale)
        return out

    def __call__(self, z):
        v = self.jet(z, 0).coeffs[0]
        return v.item() if v.ndim == 0 else v

    def validity_radius(self, z):
        return self.g.validity_radius(z)

    def direct(self, z):
        """Value from the unregularised expression (for removability checks)."""
        v = self._direct(np.asarray(z, dtype=complex), 0, 1.0).coeffs[0]
        return v.item() if v.ndim == 0 else v


def removability_check(A, zeros, eps_factor=1e-4, order=3):
    """Largest relative disagreement of the four directional limits of ``A`` at the zeros.

    ``A`` is evaluated from its unregularised expression at
    ``z_n + eps e^{i k pi/2}`` (``eps`` a fraction of the distance to the
    circle).  The Taylor terms of degree ``1..order`` of the regularised
    expansion are subtracted, which leaves estimates of ``A(z_n)``; a pole
    would survive this subtraction.  The spread is relative to ``|A(z_n)|``.
    """
    worst = 0.0
    for zeta in np.atleast_1d(zeros):
        zeta = complex(zeta)
        d = float(one_minus_abs2(zeta)) / (1 + abs(zeta))
        eps = eps_factor * d
        c = A.jet(np.array(zeta), order, eps).coeffs
        u = np.exp(0.5j * np.pi * np.arange(4) + 0.25j)
        vals = np.array([A.direct(zeta + eps * v) for v in u])
        poly = sum(c[j] * u**j for j in range(1, order + 1))
        limits = vals - poly
        spread = np.max(np.abs(limits - c[0])) / max(abs(c[0]), 1e-300)
        if not np.all(np.isfinite(vals)):
            spread = math.inf
        worst = max(worst, float(spread))
    return worst


def dyadic_zeros(N):
    """``1 - 2^-n`` for ``n = 1..N``."""
    return 1.0 - 2.0 ** -np.arange(1, N + 1)


def dyadic_separation_constant(n_max=400, tail=80):
    """``inf_n prod_{k != n} rho_p(z_k, z_n)`` for the whole sequence ``z_n = 1 - 2^-n``.

    With ``a = 2^-k`` and ``b = 2^-n`` the factor is ``|a - b| / (a + b - ab)``,
    evaluated without forming ``1 - 2^-n``.  Factors with ``|k - n| > tail``
    differ from 1 by less than ``2^-tail`` and are dropped.
    """
    best = math.inf
    for n in range(1, n_max + 1):
        k = np.arange(1, n + tail + 1, dtype=float)
        k = k[k != n]
        a, b = 2.0**-k, 2.0**-n
        logs = np.log(np.abs(a - b)) - np.log(a + b - a * b)
        best = min(best, math.exp(math.fsum(logs)))
    return best


def build_nonnormal_witness(zeros, xi=None):
    """``f = B e^g`` with ``g'(z_n) = -B''(z_n) / (2 B'(z_n))`` so that ``A = -f''/f`` is analytic."""
    zeros = np.atleast_1d(as_disc(zeros)).astype(complex)
    B = BlaschkeProduct(zeros)
    c = B.jet(zeros, 2).taylor()
    w = -c[2] / c[1]  # B''/2 = c2
    interp = build_bmoa_interpolant(zeros, w, xi)
    if np.max(interp.residuals) > RESIDUAL_TOL:
        raise ArithmeticError(f"interpolation residual {np.max(interp.residuals):.3g} is too large")
    g = interp.g
    f = Analytic(lambda Z: B._eval(Z) * J.exp(g.fn(Z)), radius=g.validity_radius, name="f_nonnormal")
    A = RemovableCoefficient(B, g)

    def scaled_jet(z, order, scale=1.0):
        # f e^{-g(z)} solves the same equation and stays finite
        gj = g.jet(z, order, scale)
        gj.coeffs[0] = 0.0
        return B.jet(z, order, scale) * J.exp(gj)

    meta = {
        "zeros": zeros,
        "xi": interp.xi,
        "delta": interp.delta,
        "S": interp.S,
        "nu_bound": interp.nu_bound,
        "h_norm": interp.h_norm,
        "h_minimal": interp.h_minimal,
        "interpolation_residuals": interp.residuals,
        "truncation": len(zeros),
        "interpolant": interp,
        "B": B,
    }
    return WitnessBundle("nonnormal_witness", A, f, meta, scaled_jet=scaled_jet)


def corona_estimate(Ba, Bb, grid=None):
    """Grid minimum of ``|B_a| + |B_b|``."""
    grid = grid or GridSpec(k_max=10)
    best = math.inf
    for _, pts in grid.circles():
        v = np.abs(Ba(pts)) + np.abs(Bb(pts))
        best = min(best, float(np.min(v)))
    return best


def build_prescribed_values_witness(alpha_seq, beta_seq, a, b, *, mu_min=1e-6, grid=None):
    """``f = exp(log a + h log(b/a))`` with ``h = 0`` on ``alpha_seq`` and ``h = 1`` on ``beta_seq``."""
    a, b = complex(a), complex(b)
    if a == 0 or b == 0 or a == b:
        raise ValueError("a and b must be non-zero and distinct")
    al = np.atleast_1d(np.asarray(alpha_seq, dtype=complex))
    be = np.atleast_1d(np.asarray(beta_seq, dtype=complex))
    one = lambda z: np.ones(np.shape(z), dtype=complex)
    Ba = BlaschkeProduct(al) if al.size else one
    Bb = BlaschkeProduct(be) if be.size else one
    mu = corona_estimate(Ba, Bb, grid) if al.size and be.size else 1.0
    if mu < mu_min:
        raise ValueError(f"|B_alpha| + |B_beta| drops to {mu:.3g} < {mu_min:g}")
    nodes = np.concatenate([al, be])
    targets = np.concatenate([np.zeros(al.size), np.ones(be.size)])
    log_a = complex(np.log(a))
    L = complex(np.log(b / a))
    if nodes.size:
        h, c_star = pick_solve(InterpolationProblem(nodes, targets))
        hor = h.oracle()
        hfn, hrad = hor.fn, hor.validity_radius
    else:
        h, c_star = None, 0.0
        hfn, hrad = (lambda Z: 0.0 * Z), None

    def a_jet(z, order, scale):
        hj = Analytic(hfn, radius=hrad).jet(z, order + 2, scale)
        d1 = hj.deriv()
        d2 = d1.deriv()
        d1 = d1.truncate(order)
        return -(d1 * L) * (d1 * L) - d2 * L

    A = Analytic(jet_fn=a_jet, radius=hrad, name="A_prescribed")
    f = Analytic(lambda Z: J.exp(log_a + hfn(Z) * L), radius=hrad, name="f_prescribed")
    meta = {
        "a": a,
        "b": b,
        "alpha": al,
        "beta": be,
        "mu": mu,
        "h_norm": 0.0 if h is None else h.norm,
        "h_minimal": c_star,
        "h": h,
        "log_ratio": L,
    }
    return WitnessBundle("prescribed_values", A, f, meta)


def zero_free_count(f, radius=0.999):
    return count_zeros(f, 0.0, radius)


# Lappan's function ------------------------------------------------------------------------------


LAPPAN_EXPONENTS = (-(1 + 10j) / 100, -1j / 100)


def lappan_function():
    """``(1 - z)^(-(1+10i)/100) - (1 - z)^(-i/100)``; ``w(0) = 0``."""
    e1, e2 = LAPPAN_EXPONENTS

    def fn(Z):
        u = 1.0 - Z
        return J.power(u, e1) - J.power(u, e2)

    return Analytic(fn, radius=_dist_to([1.0]), name="lappan")


def gamma_gap(gamma, n):
    return float(hyperbolic_distance(gamma_zero(gamma, n), gamma_zero(gamma, n + 1)))
