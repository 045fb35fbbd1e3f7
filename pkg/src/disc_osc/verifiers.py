"""Numerical checks of the separation, balance and growth inequalities.

Each check returns a :class:`VerificationReport`.  Checks of statements that
hold for every point (separation of zeros from critical points, the balance
inequality) are pass/fail with a small slack.  Checks that rest on grid
suprema are lower bounds and are reported as diagnostics.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .hyperbolic import (
    as_disc,
    hyperbolic_distance,
    hyperbolic_midpoint,
    one_minus_abs2,
    pseudo_disc_circle,
    pseudo_distance,
)
from .kernel import (
    GaugePsi,
    GridSpec,
    Quotient,
    SupEstimate,
    _grid_max,
    constant_gauge,
    weighted_sup_estimate,
)
from .locator import ZeroSet, count_zeros

THEOREM_SLACK = 1e-12

PASS, FAIL, DIAGNOSTIC = "pass", "fail", "diagnostic"


@dataclass
class VerificationReport:
    name: str
    verdict: str
    worst_margin: float
    worst_points: tuple = ()
    parameters: dict = field(default_factory=dict)
    value: float | None = None
    details: dict = field(default_factory=dict)

    @property
    def passed(self):
        return self.verdict != FAIL

    def to_dict(self):
        d = asdict(self)
        d["worst_points"] = [[float(z.real), float(z.imag)] for z in map(complex, self.worst_points)]
        return _jsonable(d)


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating, float)):
        x = float(x)
        return x if math.isfinite(x) else repr(x)
    if isinstance(x, (complex, np.complexfloating)):
        return [float(x.real), float(x.imag)]
    if isinstance(x, np.bool_):
        return bool(x)
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    return x


def _verdict(margin, slack):
    return PASS if margin >= -slack else FAIL


def _points(zs):
    if isinstance(zs, ZeroSet):
        return zs.array()
    return np.atleast_1d(np.asarray(zs, dtype=complex))


# gauges and the coefficient bound M --------------------------------------------


def gauge_divisor(K, M):
    return max(K * math.sqrt(M), 1.0)


def _gauge_K(psi, K):
    if K is not None:
        return K
    if isinstance(psi, GaugePsi):
        return psi.known_K if psi.known_K is not None else psi.K
    raise ValueError("K must be given for a bare callable gauge")


def zero_separation_bound(psi, M, z1, z2, K=None):
    """Lower bound ``log((1 + P) / (1 - P))`` for the distance of two zeros.

    ``P = psi(|t|) / max(K sqrt(M), 1)`` with ``t`` the hyperbolic midpoint.
    """
    if not M > 0:
        raise ValueError("M must be positive")
    t = hyperbolic_midpoint(z1, z2)
    p = float(psi(abs(t))) / gauge_divisor(_gauge_K(psi, K), M)
    return 2.0 * math.atanh(p)


def zero_critical_bound(psi, M, a, K=None):
    """Lower bound ``(1/2) log((1 + P) / (1 - P))`` for the distance from a critical point ``a``."""
    if not M > 0:
        raise ValueError("M must be positive")
    p = float(psi(abs(complex(a)))) / gauge_divisor(_gauge_K(psi, K), M)
    return math.atanh(p)


def gauge_sup_estimate(A, psi, grid=None, *, refine=True, tolerance=0.01):
    """Grid estimate of ``M = sup |A(z)| (psi(|z|) (1 - |z|^2))^2``."""
    grid = grid or GridSpec()

    def values(z):
        w = (np.asarray(psi(np.abs(z)), dtype=float) * one_minus_abs2(z)) ** 2
        return w * np.abs(A.jet(z, 0).coeffs[0])

    coarse, arg, n = _grid_max(values, grid)
    if not refine:
        return SupEstimate(coarse, arg, coarse, False, float("nan"), n)
    fine, farg, nf = _grid_max(values, grid.refine())
    if fine < coarse:
        fine, farg = coarse, arg
    change = (fine - coarse) / fine if fine > 0 else 0.0
    return SupEstimate(fine, farg, coarse, change < tolerance, change, nf)


@dataclass(frozen=True)
class DefaultGauge:
    """Constant gauge ``c = min(1 / sqrt(max(norm, 1)), 0.99)`` for ``A`` of finite norm.

    With ``M = c^2 norm <= 1`` and ``K = 1`` the divisor ``max(K sqrt(M), 1)``
    is 1, so the zero/critical bound is ``artanh(c)``.
    """

    c: float
    norm: float

    @property
    def gauge(self):
        g = constant_gauge(self.c)
        g.known_K = 1.0
        return g

    @property
    def M(self):
        return self.c * self.c * max(self.norm, 1e-300)

    @property
    def K(self):
        return 1.0


def default_gauge(A=None, grid=None, *, norm=None):
    """The constant gauge built from ``norm`` or from a grid estimate of ``sup (1-|z|^2)^2 |A|``."""
    if norm is None:
        norm = weighted_sup_estimate(A, 2.0, grid).estimate
    c = min(1.0 / math.sqrt(max(norm, 1.0)), 0.99)
    return DefaultGauge(c, float(norm))


# separation -----------------------------------------------------------------------


def verify_separation(zeros, criticals, psi, M, *, K=None, slack=THEOREM_SLACK, name="separation"):
    """Every zero/critical pair and every pair of zeros against their lower bounds."""
    zs = _points(zeros)
    cs = _points(criticals)
    K = _gauge_K(psi, K)
    div = gauge_divisor(K, M)
    params = {"K": K, "M": M, "divisor": div, "slack": slack, "gauge": getattr(psi, "name", "psi")}
    worst, pts = math.inf, ()
    ratios = []
    if zs.size and cs.size:
        rho = np.atleast_2d(hyperbolic_distance(zs[:, None], cs[None, :]))
        bounds = np.array([zero_critical_bound(psi, M, a, K) for a in cs])
        margin = rho - bounds[None, :]
        i, j = np.unravel_index(int(np.argmin(margin)), margin.shape)
        worst, pts = float(margin[i, j]), (complex(zs[i]), complex(cs[j]))
        # per critical point: nearest zero versus its bound
        nearest = rho.min(axis=0)
        ratios = [(complex(a), float(d), float(b)) for a, d, b in zip(cs, nearest, bounds)]
    zz_worst = math.inf
    zz_pts = ()
    if zs.size > 1:
        for i in range(len(zs)):
            for j in range(i + 1, len(zs)):
                d = hyperbolic_distance(zs[i], zs[j])
                b = zero_separation_bound(psi, M, zs[i], zs[j], K)
                if d - b < zz_worst:
                    zz_worst, zz_pts = d - b, (complex(zs[i]), complex(zs[j]))
    if zz_worst < worst:
        worst_all, pts_all = zz_worst, zz_pts
    else:
        worst_all, pts_all = worst, pts
    if not math.isfinite(worst_all):
        return VerificationReport(name, PASS, math.inf, (), params, details={"vacuous": True})
    details = {
        "zero_critical_margin": worst,
        "zero_zero_margin": zz_worst,
        "critical_nearest": ratios,
        "zeros": len(zs),
        "criticals": len(cs),
    }
    return VerificationReport(name, _verdict(worst_all, slack), worst_all, pts_all, params, worst_all, details)


# balance ------------------------------------------------------------------------------


def balance_terms(A, f, z):
    """``(f')^# f^#``, ``|A|/4``, ``(f'/f)^#`` and ``|A| + 1`` at ``z``."""
    z = np.asarray(z, dtype=complex)
    d = f.jet(z, 2).taylor()
    f0, f1, f2 = d[0], d[1], 2.0 * d[2]
    a = np.abs(A.jet(z, 0).coeffs[0])
    fs = np.abs(f1) / (1.0 + np.abs(f0) ** 2)
    fps = np.abs(f2) / (1.0 + np.abs(f1) ** 2)
    # (f'/f)^# written without dividing by f
    log_sharp = np.abs(f2 * f0 - f1 * f1) / (np.abs(f0) ** 2 + np.abs(f1) ** 2)
    return fps * fs, a / 4.0, log_sharp, a + 1.0


def disc_samples(n=10_000, r_max=0.99):
    """``n`` deterministic sunflower points in ``|z| <= r_max``."""
    k = np.arange(n) + 0.5
    r = r_max * np.sqrt(k / n)
    t = k * math.pi * (3.0 - math.sqrt(5.0))
    return r * np.exp(1j * t)


def verify_balance(A, f, points=None, *, slack=THEOREM_SLACK, name="balance"):
    """``(f')^# f^# <= |A|/4`` and ``(f'/f)^# <= |A| + 1`` on the sample points."""
    z = disc_samples() if points is None else np.atleast_1d(as_disc(points))
    lhs, rhs, lsharp, rbound = balance_terms(A, f, z)
    m1 = rhs - lhs
    m2 = rbound - lsharp
    i1, i2 = int(np.argmin(m1)), int(np.argmin(m2))
    worst = min(float(m1[i1]), float(m2[i2]))
    pts = (complex(z[i1]),) if m1[i1] <= m2[i2] else (complex(z[i2]),)
    params = {"slack": slack, "points": int(z.size)}
    details = {"balance_margin": float(m1[i1]), "remark_margin": float(m2[i2]),
               "balance_max_ratio": float(np.max(np.where(rhs > 0, lhs / np.where(rhs > 0, rhs, 1), 0)))}
    return VerificationReport(name, _verdict(worst, slack), worst, pts, params, worst, details)


# normality ------------------------------------------------------------------------------


def normality_functional(f, zeros):
    """``(n, (1 - |z_n|^2) |f'(z_n)|)`` with zeros ordered by modulus."""
    zs = _points(zeros)
    if zs.size == 0:
        return []
    zs = zs[np.argsort(np.abs(zs), kind="stable")]
    d = f.jet(zs, 1).taylor()[1]
    vals = one_minus_abs2(zs) * np.abs(d)
    return [(n + 1, float(v)) for n, v in enumerate(vals)]


# quotient growth --------------------------------------------------------------------------


def quotient_threshold(snorm):
    """Exponent threshold ``sqrt(1 + snorm/2) + 1`` above which the weighted ``w^#`` is bounded."""
    return math.sqrt(1.0 + snorm / 2.0) + 1.0


def basis_sharp(basis, z):
    """``w^#`` of ``w = f1/f2`` from ``|W| / (|f1|^2 + |f2|^2)``."""
    d = basis.evaluate(z, 0)
    return abs(basis.wronskian) / (np.abs(d[0, 0]) ** 2 + np.abs(d[0, 1]) ** 2)


def quotient_growth_check(basis, alpha, grid=None, *, A_norm=None, tolerance=0.01, name="quotient_growth"):
    """Grid sup of ``(1 - |z|^2)^alpha w^#`` for the basis quotient, with refinement flag."""
    grid = grid or GridSpec(k_max=10)
    if A_norm is None:
        A_norm = weighted_sup_estimate(basis.A, 2.0, grid).estimate
    snorm = 2.0 * A_norm
    thr = quotient_threshold(snorm)
    if not alpha > thr:
        raise ValueError(f"alpha = {alpha} is not above the threshold {thr:.6f} (Schwarzian norm {snorm:.6g})")

    def values(z):
        return one_minus_abs2(z) ** alpha * basis_sharp(basis, z)

    coarse, arg, _ = _grid_max(values, grid)
    fine, farg, n = _grid_max(values, grid.refine())
    if fine < coarse:
        fine, farg = coarse, arg
    change = (fine - coarse) / fine if fine > 0 else 0.0
    params = {"alpha": alpha, "threshold": thr, "schwarzian_norm": snorm, "tolerance": tolerance}
    details = {"coarse": coarse, "fine": fine, "relative_change": change, "stable": change < tolerance,
               "grid_points": n}
    return VerificationReport(name, DIAGNOSTIC, 0.0, (farg,), params, fine, details)


# univalence --------------------------------------------------------------------------------


def local_univalence_radius(snorm):
    """Pseudo-hyperbolic radius of univalence: 1 when ``snorm <= 2``, else ``sqrt(2 / snorm)``."""
    if snorm < 0:
        raise ValueError("Schwarzian norm must be non-negative")
    return 1.0 if snorm <= 2.0 else math.sqrt(2.0 / snorm)


def univalence_spot_check(w, delta, centers, *, values=5, seed=0, name="univalence"):
    """Count how often ``w`` takes sampled values in ``Delta_p(a, delta)`` (should be at most once).

    For a :class:`Quotient` ``p/q`` the count is of zeros of ``p - w0 q``,
    which is analytic even where ``w`` has poles.
    """
    rng = np.random.default_rng(seed)
    worst, worst_pt = 0, ()
    counts = []
    for a in np.atleast_1d(as_disc(centers)):
        c, r = pseudo_disc_circle(a, delta)
        r_in = 0.98 * r
        for _ in range(values):
            u = c + 0.8 * r_in * math.sqrt(rng.uniform()) * np.exp(2j * np.pi * rng.uniform())
            if isinstance(w, Quotient):
                p = w.num.jet(np.array(u), 0).coeffs[0]
                q = w.den.jet(np.array(u), 0).coeffs[0]
                g = _Combination(w.num, w.den, complex(q), -complex(p))
            else:
                g = _Combination(w, None, 1.0, -complex(w.jet(np.array(u), 0).coeffs[0]))
            n = count_zeros(g, c, r_in)
            counts.append(n)
            if n > worst:
                worst, worst_pt = n, (complex(a), complex(u))
    margin = 1.0 - worst
    params = {"delta": delta, "values": values, "seed": seed}
    return VerificationReport(name, _verdict(margin, 0.0), margin, worst_pt, params, float(worst), {"counts": counts})


class _Combination:
    """``s * p + t * q`` (``q`` may be absent, then ``s * p + t``)."""

    def __init__(self, p, q, s, t):
        self.p, self.q, self.s, self.t = p, q, s, t

    def jet(self, z, order, scale=1.0):
        out = self.p.jet(z, order, scale) * self.s
        if self.q is None:
            return out + self.t
        return out + self.q.jet(z, order, scale) * self.t

    def validity_radius(self, z):
        r = self.p.validity_radius(z)
        return r if self.q is None else np.minimum(r, self.q.validity_radius(z))


# coefficient growth -----------------------------------------------------------------------------


def coefficient_growth_margin(A, grid=None, *, deeper=4, tolerance=0.01, name="coefficient_growth"):
    """Smallest ``C`` with ``(1-|z|^2)^2 |A| <= 1 + C (1-|z|)`` on the grid, if it stabilises.

    The grid is extended ``deeper`` dyadic circles towards the boundary and
    refined; a change above ``tolerance`` is reported as divergence
    (``value = None``).
    """
    grid = grid or GridSpec(k_max=12)

    def values(z):
        a = np.abs(A.jet(z, 0).coeffs[0])
        return (one_minus_abs2(z) ** 2 * a - 1.0) / (1.0 - np.abs(z))

    coarse, arg, _ = _grid_max(values, grid)
    deep = GridSpec(grid.k_max + deeper, grid.angle_base, grid.angle_cap, grid.substeps, grid.r_min).refine()
    fine, farg, n = _grid_max(values, deep)
    fine = max(fine, coarse)
    c_coarse, c_fine = max(coarse, 0.0), max(fine, 0.0)
    change = (c_fine - c_coarse) / c_fine if c_fine > 0 else 0.0
    stable = change < tolerance
    params = {"tolerance": tolerance, "deeper": deeper}
    details = {"coarse": c_coarse, "fine": c_fine, "relative_change": change, "diverging": not stable,
               "grid_points": n}
    return VerificationReport(name, DIAGNOSTIC, 0.0, (farg,), params, c_fine if stable else None, details)


# cross separation ---------------------------------------------------------------------------------


def cross_zero_separation(zeros1, zeros2, alpha, delta=None, *, name="cross_zero_separation"):
    """Largest ``delta`` with ``rho_p(z1, z2) >= delta max((1-|z1|^2)^(alpha-1), (1-|z2|^2)^(alpha-1))``.

    The fitted constant is a diagnostic; a zero common to both sets (fitted
    value 0) or a fitted value below a supplied ``delta`` fails.
    """
    a, b = _points(zeros1), _points(zeros2)
    params = {"alpha": alpha, "delta": delta}
    if a.size == 0 or b.size == 0:
        return VerificationReport(name, DIAGNOSTIC, math.inf, (), params, math.inf, {"vacuous": True})
    rho = np.atleast_2d(pseudo_distance(a[:, None], b[None, :]))
    wa = one_minus_abs2(a) ** (alpha - 1.0)
    wb = one_minus_abs2(b) ** (alpha - 1.0)
    ratio = rho / np.maximum(wa[:, None], wb[None, :])
    i, j = np.unravel_index(int(np.argmin(ratio)), ratio.shape)
    fitted = float(ratio[i, j])
    pts = (complex(a[i]), complex(b[j]))
    if fitted <= 0.0 or (delta is not None and fitted < delta):
        return VerificationReport(name, FAIL, fitted - (delta or 0.0), pts, params, fitted)
    return VerificationReport(name, DIAGNOSTIC, fitted - (delta or 0.0), pts, params, fitted)


# Carleson boxes ----------------------------------------------------------------------------------


@dataclass(frozen=True)
class CarlesonBox:
    """``{r e^{it} : |t - theta| <= length/2, 1 - length/(2 pi) <= r < 1}``."""

    theta: float
    length: float

    @property
    def depth(self):
        return self.length / (2.0 * math.pi)


def carleson_boxes(levels=6, per_level=8, theta0=0.0):
    """Dyadic boxes of arc length ``2 pi 2^-k``; ``per_level`` per level, one centred at ``theta0``."""
    out = []
    for k in range(1, levels + 1):
        length = 2.0 * math.pi * 2.0 ** (-k)
        for j in range(per_level):
            out.append(CarlesonBox(theta0 + j * 2.0 * math.pi / per_level, length))
    return out


def _box_measure(A, box, order, depth_panels, angle_panels, floor):
    x, w = np.polynomial.legendre.leggauss(order)
    x, w = 0.5 * (x + 1.0), 0.5 * w
    h = box.depth
    total = 0.0
    lo = 1.0 - h
    for k in range(depth_panels):
        hi = 1.0 - h * 2.0 ** (-(k + 1))
        if 1.0 - lo < floor:
            break
        r = lo + (hi - lo) * x
        width = 1.0 - lo
        na = int(min(angle_panels * max(1, round(box.length / max(width, 1e-300) / 4)), 256))
        edges = box.theta - box.length / 2 + box.length * np.arange(na + 1) / na
        t = (edges[:-1, None] + (edges[1:] - edges[:-1])[:, None] * x[None, :]).ravel()
        wt = np.tile(w, na) * (box.length / na)
        z = r[:, None] * np.exp(1j * t[None, :])
        a = np.abs(A.jet(z, 0).coeffs[0])
        dens = a * a * one_minus_abs2(z) ** 3 * r[:, None]
        total += float(np.sum(dens * (w * (hi - lo))[:, None] * wt[None, :]))
        lo = hi
    return total


def carleson_measure_estimate(A, boxes, *, order=8, depth_panels=30, angle_panels=8, floor=1e-10):
    """``max`` over boxes of ``mu(box) / length`` for ``mu = |A|^2 (1-|z|^2)^3 dm``.

    Gauss-Legendre on radial panels graded geometrically towards the circle;
    angular panels shrink with the radial panel width.  Diagnostic only.
    """
    best = 0.0
    for box in boxes:
        best = max(best, _box_measure(A, box, order, depth_panels, angle_panels, floor) / box.length)
    return best
