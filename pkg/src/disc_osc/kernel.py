"""Analytic-function machinery on the unit disc.

Oracles
-------
Anything with a ``jet(z, order, scale=1.0) -> Jet`` method and a
``validity_radius(z)`` method is an analytic oracle.  :class:`Analytic` wraps
a jet expression; :class:`Derivative` and :class:`Quotient` build new oracles
from old ones.  Grid estimators (weighted sup norms, integral means, BMOA
oscillation) only ever return lower bounds or diagnostics.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable

import numpy as np
from scipy.optimize import minimize_scalar

from . import jet as J
from .hyperbolic import as_disc, automorphism, one_minus_abs2, pseudo_distance
from .jet import Jet


class CriticalPointError(ArithmeticError):
    """The derivative vanishes where a non-zero derivative is required."""


class OracleEvaluationError(ArithmeticError):
    def __init__(self, point, message="oracle returned a non-finite value"):
        super().__init__(f"{message} at z = {point!r}")
        self.point = point


class SmoothnessError(ValueError):
    """The gauge ratio has no finite supremum (within the search cap)."""


def _default_radius(z):
    return np.maximum(1.0 - np.abs(np.asarray(z, dtype=complex)), 0.0)


class Analytic:
    """Analytic oracle defined by a jet expression.

    Parameters
    ----------
    fn : callable, optional
        ``fn(Z) -> Jet`` where ``Z`` is the jet of the identity.  Written with
        the functions of :mod:`disc_osc.jet`, so it also accepts plain arrays.
    jet_fn : callable, optional
        ``jet_fn(z, order, scale) -> Jet`` for oracles that need to control
        the expansion themselves (derivatives of other oracles, patches).
    radius : callable, optional
        Validity radius hint; defaults to the distance to the unit circle.
    """

    def __init__(self, fn=None, *, jet_fn=None, radius=None, name=""):
        if (fn is None) == (jet_fn is None):
            raise ValueError("give exactly one of fn and jet_fn")
        self.fn = fn
        self._jet_fn = jet_fn
        self._radius = radius or _default_radius
        self.name = name

    def jet(self, z, order, scale=1.0):
        z = np.asarray(z, dtype=complex)
        if self._jet_fn is not None:
            out = self._jet_fn(z, order, scale)
        else:
            out = self.fn(Jet.variable(z, order, scale))
        if not isinstance(out, Jet):
            out = Jet.constant(out, order, z, scale)
        elif out.coeffs.shape[1:] != z.shape:
            out = Jet(np.broadcast_to(out.coeffs, (len(out),) + z.shape), z, scale)
        return out

    def __call__(self, z):
        v = self.jet(z, 0).coeffs[0]
        return v.item() if v.ndim == 0 else v

    def derivative(self, z, n=1):
        v = self.jet(z, n).derivatives()[n]
        return v.item() if v.ndim == 0 else v

    def validity_radius(self, z):
        return self._radius(z)

    def __repr__(self):
        return f"Analytic({self.name or self.fn or self._jet_fn})"


def constant(c, name=None):
    return Analytic(lambda Z: 0.0 * Z + c, radius=lambda z: np.full(np.shape(z), np.inf), name=name or f"{c}")


class Derivative:
    """The oracle ``f'`` of an oracle ``f``."""

    def __init__(self, f, n=1):
        self.f = f
        self.n = n

    def jet(self, z, order, scale=1.0):
        out = self.f.jet(z, order + self.n, scale)
        for _ in range(self.n):
            out = out.deriv()
        return out

    def __call__(self, z):
        v = self.jet(z, 0).coeffs[0]
        return v.item() if v.ndim == 0 else v

    def validity_radius(self, z):
        return self.f.validity_radius(z)


class Quotient:
    """Meromorphic quotient ``num / den`` of two analytic oracles.

    Spherical quantities are computed in whichever orientation (``w`` or
    ``1/w``) is bounded at the point, so poles are harmless.
    """

    def __init__(self, num, den):
        self.num = num
        self.den = den

    def jet(self, z, order, scale=1.0):
        return self.num.jet(z, order, scale) / self.den.jet(z, order, scale)

    def regular_jet(self, z, order, scale=1.0):
        """Jet of ``w`` where ``|num| <= |den|`` and of ``1/w`` elsewhere."""
        p = self.num.jet(z, order, scale)
        q = self.den.jet(z, order, scale)
        flip = np.abs(p.coeffs[0]) > np.abs(q.coeffs[0])
        top = np.where(flip, q.coeffs, p.coeffs)
        bot = np.where(flip, p.coeffs, q.coeffs)
        return p._like(top) / p._like(bot)

    def __call__(self, z):
        v = self.jet(z, 0).coeffs[0]
        return v.item() if v.ndim == 0 else v

    def validity_radius(self, z):
        return np.minimum(self.num.validity_radius(z), self.den.validity_radius(z))


def regular_jet(w, z, order, scale=1.0):
    fn = getattr(w, "regular_jet", None)
    if fn is not None:
        return fn(z, order, scale)
    out = w.jet(z, order, scale)
    flip = np.abs(out.coeffs[0]) > 1.0
    if np.any(flip):
        inv = 1.0 / out
        out = out._like(np.where(flip, inv.coeffs, out.coeffs))
    return out


# Blaschke products ----------------------------------------------------------


class BlaschkeProduct(Analytic):
    """Finite Blaschke product ``prod (|a|/a) (a - z) / (1 - conj(a) z)``.

    Repeated entries in ``zeros`` are zeros of higher multiplicity.  The
    unimodular factor is 1 for a zero at the origin.
    """

    def __init__(self, zeros):
        self.zeros = as_disc(np.atleast_1d(np.asarray(zeros, dtype=complex)))
        mod = np.abs(self.zeros)
        self.rotations = np.where(mod > 0, mod / np.where(mod > 0, self.zeros, 1.0), 1.0)
        super().__init__(self._eval, name=f"B[{len(self.zeros)}]")

    def _eval(self, Z):
        out = 1.0 + 0.0 * Z
        for a, u in zip(self.zeros, self.rotations):
            out = out * (u * (a - Z) / (1.0 - np.conj(a) * Z))
        return out

    def validity_radius(self, z):
        z = np.asarray(z, dtype=complex)
        poles = 1.0 / np.conj(self.zeros[self.zeros != 0])
        if poles.size == 0:
            return np.full(z.shape, np.inf)
        return np.min(np.abs(z[..., None] - poles), axis=-1)

    def distinct_zeros(self):
        vals, counts = np.unique(self.zeros, return_counts=True)
        return vals, counts


def blaschke_jet(B, z, order):
    return B.jet(as_disc(z), order)


def separation_constant(B):
    """Uniform-separation constant of the zero set of ``B``.

    Returns ``(delta, product_form)``: ``min_k (1-|z_k|^2)|B'(z_k)|`` and
    ``min_k prod_{n != k} rho_p(z_n, z_k)``.  The two agree for a finite
    product; both are returned so callers can cross-check.
    """
    zs = B.zeros
    if len(np.unique(zs)) != len(zs):
        raise ValueError("separation constant needs simple zeros; the zero list has repeats")
    deriv = np.abs(B.jet(zs, 1).derivatives()[1])
    direct = float(np.min(one_minus_abs2(zs).real * deriv))
    if len(zs) == 1:
        return direct, 1.0
    rho = pseudo_distance(zs[:, None], zs[None, :])
    np.fill_diagonal(rho, 1.0)
    product = float(np.min(np.prod(rho, axis=1)))
    return direct, product


# Schwarzian and spherical derivatives ---------------------------------------


def schwarzian(w, z, floor=1e-14):
    """Schwarzian derivative ``(w''/w')' - (w''/w')^2 / 2`` from an order-3 jet."""
    z = np.asarray(z, dtype=complex)
    c = regular_jet(w, z, 3).taylor()
    if np.any(np.abs(c[1]) < floor):
        raise CriticalPointError(f"w' vanishes (|w'| < {floor:g}) at a requested point")
    r = c[2] / c[1]
    s = 6.0 * (c[3] / c[1] - r * r)
    return s.item() if s.ndim == 0 else s


def schwarzian_oracle(w):
    """Analytic oracle for ``S_w`` (jets via order-raised expansions of ``w``)."""

    def jet_fn(z, order, scale):
        j = regular_jet(w, z, order + 3, scale)
        d1 = j.deriv()
        d2 = d1.deriv()
        d3 = d2.deriv()
        r = d2 / d1
        return d3 / d1 - 1.5 * r * r

    return Analytic(jet_fn=jet_fn, radius=w.validity_radius, name="schwarzian")


def spherical_derivative(w, z):
    """``|w'| / (1 + |w|^2)``, pole-safe."""
    z = np.asarray(z, dtype=complex)
    if isinstance(w, Quotient):
        p = w.num.jet(z, 1).taylor()
        q = w.den.jet(z, 1).taylor()
        wr = np.abs(p[1] * q[0] - p[0] * q[1])
        s = wr / (np.abs(p[0]) ** 2 + np.abs(q[0]) ** 2)
    else:
        c = regular_jet(w, z, 1).taylor()
        s = np.abs(c[1]) / (1.0 + np.abs(c[0]) ** 2)
    return s.item() if s.ndim == 0 else s


# grids and sup-norm estimates -----------------------------------------------


@dataclass(frozen=True)
class GridSpec:
    """Polar grid ``r = 1 - 2^(-j/substeps)``, ``j = 0..k_max*substeps``.

    Each circle carries a power-of-two number of equally spaced angles, at
    least ``angle_base / (1 - r)``, capped at ``angle_cap``.  :meth:`refine`
    doubles the radial and angular density; the refined grid contains the
    original one.
    """

    k_max: int = 14
    angle_base: int = 64
    angle_cap: int = 2**16
    substeps: int = 1
    r_min: float = 0.0

    def radii(self):
        j = np.arange(self.k_max * self.substeps + 1)
        r = 1.0 - 2.0 ** (-j / self.substeps)
        return r[r >= self.r_min]

    def angle_count(self, r):
        if r == 0.0:
            return 1
        n = 2 ** math.ceil(math.log2(self.angle_base / (1.0 - r)))
        return int(min(n, self.angle_cap))

    def circles(self):
        for r in self.radii():
            n = self.angle_count(r)
            yield r, r * np.exp(2j * np.pi * np.arange(n) / n)

    def points(self):
        return np.concatenate([pts for _, pts in self.circles()])

    def refine(self):
        return GridSpec(self.k_max, self.angle_base * 2, self.angle_cap * 2, self.substeps * 2, self.r_min)

    def size(self):
        return sum(self.angle_count(r) for r in self.radii())


@dataclass
class SupEstimate:
    """Grid lower bound for a weighted supremum with a refinement check."""

    estimate: float
    argmax: complex
    coarse: float
    stable: bool
    relative_change: float
    grid_points: int

    def __iter__(self):
        return iter((self.estimate, self.argmax))


def _grid_max(values_fn, grid, chunk=1 << 15):
    best, arg = -np.inf, 0j
    pts = grid.points()
    for i in range(0, len(pts), chunk):
        z = pts[i : i + chunk]
        v = values_fn(z)
        bad = ~np.isfinite(v)
        if np.any(bad):
            raise OracleEvaluationError(complex(z[np.argmax(bad)]))
        k = int(np.argmax(v))
        if v[k] > best:
            best, arg = float(v[k]), complex(z[k])
    return best, arg, len(pts)


def weighted_sup_estimate(g, exponent, grid=None, *, spherical=False, refine=True, tolerance=0.01):
    """Grid estimate of ``sup (1 - |z|^2)^exponent |g(z)|`` (or of ``g^#``).

    Returned as a :class:`SupEstimate`; the estimate is a lower bound and is
    flagged stable when one refinement changes it by less than ``tolerance``
    (relative).
    """
    if exponent < 0:
        raise ValueError("exponent must be non-negative")
    grid = grid or GridSpec()

    def values(z):
        weight = one_minus_abs2(z) ** exponent
        mod = spherical_derivative(g, z) if spherical else np.abs(g.jet(z, 0).coeffs[0])
        return weight * mod

    coarse, arg, n = _grid_max(values, grid)
    if not refine:
        return SupEstimate(coarse, arg, coarse, False, float("nan"), n)
    fine, farg, nf = _grid_max(values, grid.refine())
    if fine < coarse:  # refined grid contains the coarse one
        fine, farg = coarse, arg
    change = (fine - coarse) / fine if fine > 0 else 0.0
    return SupEstimate(fine, farg, coarse, change < tolerance, change, nf)


def h2_norm_estimate(g, grid=None):
    """``sup (1-|z|^2)^2 |g|``: grid lower bound of the H-infinity-2 norm."""
    return weighted_sup_estimate(g, 2.0, grid)


# gauge functions ------------------------------------------------------------


@dataclass
class GaugePsi:
    """Non-increasing gauge ``psi: [0, 1) -> (0, 1)``."""

    psi: Callable
    name: str = "psi"
    known_K: float | None = field(default=None, repr=False)

    def __call__(self, r):
        return self.psi(r)

    def validate(self, samples=2000):
        r = _gauge_samples(samples)
        v = np.asarray(self.psi(r), dtype=float)
        if np.any(v <= 0) or np.any(v >= 1):
            raise ValueError(f"gauge {self.name} leaves (0, 1)")
        if np.any(np.diff(v) > 1e-15 * np.maximum(1.0, v[:-1])):
            raise ValueError(f"gauge {self.name} is not non-increasing")
        return self

    @cached_property
    def K(self):
        return smoothness_constant(self)


def constant_gauge(c):
    if not 0 < c < 1:
        raise ValueError("constant gauge must lie in (0, 1)")
    return GaugePsi(lambda r: np.full(np.shape(r), c, dtype=float) if np.ndim(r) else float(c), name=f"const({c:.6g})")


def _gauge_samples(n):
    lin = np.linspace(0.0, 0.999, n)
    tail = 1.0 - np.logspace(-3, -15, n)
    return np.unique(np.concatenate([lin, tail]))


def _gauge_ratio(psi, r):
    p = np.asarray(psi(r), dtype=float)
    r2 = (r + p) / (1.0 + r * p)
    return p / np.asarray(psi(np.minimum(r2, 1.0 - 1e-16)), dtype=float)


def smoothness_constant(gauge, samples=4000, cap=1e6):
    """``K = sup_r psi(r) / psi((r + psi(r)) / (1 + r psi(r)))``.

    Dense sampling (linear plus logarithmic towards ``r = 1``) followed by a
    bounded golden-section search around the sampled maximum.
    """
    psi = gauge.psi if isinstance(gauge, GaugePsi) else gauge
    r = _gauge_samples(samples)
    ratio = _gauge_ratio(psi, r)
    if not np.all(np.isfinite(ratio)):
        raise SmoothnessError("gauge ratio is not finite on the sample grid")
    k = int(np.argmax(ratio))
    best = float(ratio[k])
    lo, hi = r[max(k - 1, 0)], r[min(k + 1, len(r) - 1)]
    if hi > lo:
        res = minimize_scalar(lambda x: -float(_gauge_ratio(psi, np.array([x]))[0]), bounds=(lo, hi), method="bounded",
                              options={"xatol": 1e-14})
        best = max(best, -float(res.fun))
    if best > cap:
        raise SmoothnessError(f"smoothness condition violated: K estimate {best:.3g} exceeds {cap:g}")
    return best


# integral means -------------------------------------------------------------


def _circle_nodes(r, minimum=256, cap=1 << 18):
    n = 2 ** math.ceil(math.log2(max(minimum, 64.0 / (1.0 - r))))
    return int(min(n, cap))


def hardy_norm_estimate(f, p, radii, nodes=None):
    """Integral means ``((2 pi)^-1 int |f(r e^{it})|^p dt)^(1/p)`` per radius.

    Trapezoid rule; a diagnostic of the H^p trend, not a membership proof.
    """
    if not p > 0:
        raise ValueError("p must be positive")
    radii = np.asarray(radii, dtype=float)
    if np.any(np.diff(radii) <= 0) or radii[0] <= 0 or radii[-1] >= 1:
        raise ValueError("radii must increase inside (0, 1)")
    out = []
    for r in radii:
        n = nodes or _circle_nodes(r)
        z = r * np.exp(2j * np.pi * np.arange(n) / n)
        v = np.abs(f.jet(z, 0).coeffs[0]) ** p
        out.append((float(r), float(np.mean(v) ** (1.0 / p))))
    return out


def bmoa_seminorm_estimate(g, samples, radius=0.99, nodes=None):
    """``max_a`` of the H^2 mean of ``g(phi_a(z)) - g(a)`` on ``|z| = radius``.

    Diagnostic only: a growing value along samples approaching the boundary
    suggests ``g`` is not in BMOA; a stable one is consistent with membership.
    """
    samples = np.atleast_1d(as_disc(samples))
    if samples.size == 0:
        raise ValueError("need at least one sample point")
    best = 0.0
    for a in samples:
        n = nodes or _circle_nodes(radius, minimum=1024, cap=1 << 17)
        u = radius * np.exp(2j * np.pi * np.arange(n) / n)
        z = automorphism(a, u)
        ga = g.jet(np.asarray(a), 0).coeffs[0]
        # |dz| weights: the integral is over u, no change of variables needed
        v = np.abs(g.jet(z, 0).coeffs[0] - ga) ** 2
        best = max(best, float(np.sqrt(np.mean(v))))
    return best
