"""Zeros and critical points of analytic oracles.

Counting uses the argument principle on circles (trapezoid rule for
``f'/f``, node count doubled until the winding number settles) and on polar
sectors (argument increments along the boundary, refined until no step turns
by more than a third of a half-turn).  Located zeros are polished by Newton's
method and re-certified on a small circle.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .hyperbolic import BOUNDARY_GUARD, as_disc, one_minus_abs2
from .kernel import Derivative

CIRCLE_NODES = 256
CIRCLE_NODE_CAP = 1 << 14
GUARD = 1e-9
PERTURB = 0.03
NEWTON_MAX = 50
START_ANGLE = 0.1234


class ZeroOnContour(ArithmeticError):
    """``|f|`` fell below the guard threshold on an integration contour."""


class WindingError(ArithmeticError):
    """The winding integral did not settle near an integer."""


class LocatorError(RuntimeError):
    def __init__(self, message, cell=None):
        super().__init__(message if cell is None else f"{message}: {cell}")
        self.cell = cell


@dataclass
class ZeroSet:
    """Zeros found in the disc ``|z - center| < radius``."""

    points: list = field(default_factory=list)
    multiplicities: list = field(default_factory=list)
    region: tuple = (0j, 0.0)
    certified_count: int = 0

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    @property
    def total(self):
        return int(sum(self.multiplicities))

    def consistent(self):
        return self.total == self.certified_count

    def array(self):
        return np.array(self.points, dtype=complex)

    def sorted(self, key=None):
        order = sorted(range(len(self.points)), key=lambda i: (key or _sort_key)(self.points[i]))
        return ZeroSet(
            [self.points[i] for i in order],
            [self.multiplicities[i] for i in order],
            self.region,
            self.certified_count,
        )


def _sort_key(z):
    return (round(z.real, 12), round(z.imag, 12))


def _values(f, z, nderiv=0):
    j = f.jet(np.asarray(z, dtype=complex), nderiv)
    return j.taylor() if nderiv else j.coeffs[:1]


# circles ---------------------------------------------------------------------


def _winding_circle(f, center, radius, n):
    theta = 2 * np.pi * np.arange(n) / n
    e = np.exp(1j * theta)
    c = _values(f, center + radius * e, 1)
    fz, fp = c[0], c[1]
    scale = np.max(np.abs(fz))
    if not np.all(np.isfinite(fz)) or not np.all(np.isfinite(fp)):
        raise ArithmeticError("oracle returned non-finite values on the contour")
    if scale == 0 or np.min(np.abs(fz)) < GUARD * scale:
        raise ZeroOnContour(f"|f| below guard on |z - {center}| = {radius}")
    w = np.mean(fp / fz * radius * e)
    # argument increments give an independent check
    turns = np.sum(np.angle(np.roll(fz, -1) / fz)) / (2 * np.pi)
    return w.real, turns, np.max(np.abs(np.angle(np.roll(fz, -1) / fz))), np.max(np.abs(fp / fz))


def count_zeros(f, center, radius, *, nodes=CIRCLE_NODES, cap=CIRCLE_NODE_CAP):
    """Number of zeros of ``f`` inside ``|z - center| < radius`` (with multiplicity)."""
    center = complex(center)
    if radius <= 0:
        raise ValueError("radius must be positive")
    as_disc(center + radius * np.exp(1j * np.linspace(0, 2 * np.pi, 8)))
    probe = center + radius * np.exp(2j * np.pi * np.arange(64) / 64)
    reach = float(np.min(np.minimum(f.validity_radius(probe), 1.0 - np.abs(probe))))
    if 2 * np.pi * radius / max(reach, 1e-300) > cap / 8:
        w = _adaptive_circle_turns(f, center, radius)
        k = round(w)
        if abs(w - k) > 0.1:
            raise WindingError(f"winding number {w:.3f} is not near an integer")
        return int(k)
    n = nodes
    prev = None
    while True:
        w, turns, max_turn, max_lg = _winding_circle(f, center, radius, n)
        resolved = max_lg * 2 * np.pi * radius / n < 1.0
        if prev is not None and resolved and abs(w - prev) < 0.05 and max_turn < 1.0 and abs(w - turns) < 0.05:
            break
        prev = w
        n *= 2
        if n > cap:
            # uniform nodes are wasted where f varies only locally; refine adaptively instead
            w = _adaptive_circle_turns(f, center, radius)
            break
    k = round(w)
    if abs(w - k) > 0.1:
        raise WindingError(f"winding number {w:.3f} is not near an integer")
    return int(k)


def _adaptive_circle_turns(f, center, radius):
    def edge(s):
        return center + radius * np.exp(2j * np.pi * s)

    turns, _ = _edge_turns(f, edge, 2 * np.pi * radius, radius / 16, max_rounds=40)
    return turns / (2 * np.pi)


def _count_perturbed(f, center, radius, limit=None):
    """Count on ``radius``, moving the circle by 3% when a zero sits on it."""
    for factor in (1.0, 1.0 - PERTURB, 1.0 + PERTURB, 1.0 - 2 * PERTURB):
        r = radius * factor
        if limit is not None and r > limit:
            continue
        try:
            return count_zeros(f, center, r), r
        except ZeroOnContour:
            continue
    raise ZeroOnContour(f"no zero-free circle near |z - {center}| = {radius}")


# polar sectors ---------------------------------------------------------------


@dataclass(frozen=True)
class Sector:
    """``{center + r e^{it} : r0 <= r <= r1, t0 <= t <= t1}``."""

    center: complex
    r0: float
    r1: float
    t0: float
    t1: float

    @property
    def full(self):
        return self.t1 - self.t0 >= 2 * np.pi - 1e-12

    def point(self, r, t):
        return self.center + r * np.exp(1j * t)

    def mid(self):
        r = 0.0 if self.full and self.r0 == 0.0 else 0.5 * (self.r0 + self.r1)
        return self.point(r, 0.5 * (self.t0 + self.t1))

    def diameter(self):
        arc = self.r1 * min(self.t1 - self.t0, np.pi)
        return max(self.r1 - self.r0, arc)

    def contains(self, z, slack=0.0):
        d = z - self.center
        r = abs(d)
        pad = slack * (self.r1 - self.r0)
        if r < self.r0 - pad or r > self.r1 + pad:
            return False
        if self.full:
            return True
        t = (math.atan2(d.imag, d.real) - self.t0) % (2 * np.pi)
        span = self.t1 - self.t0
        tpad = slack * span
        return t <= span + tpad or t >= 2 * np.pi - tpad

    def edges(self):
        """Boundary pieces as callables ``s in [0, 1] -> z`` (counter-clockwise)."""
        c, r0, r1, t0, t1 = self.center, self.r0, self.r1, self.t0, self.t1
        out = []
        if not self.full:
            out.append((lambda s: c + (r0 + (r1 - r0) * s) * np.exp(1j * t0), r1 - r0))
        out.append((lambda s: c + r1 * np.exp(1j * (t0 + (t1 - t0) * s)), r1 * (t1 - t0)))
        if not self.full:
            out.append((lambda s: c + (r1 - (r1 - r0) * s) * np.exp(1j * t1), r1 - r0))
        if r0 > 0:
            out.append((lambda s: c + r0 * np.exp(1j * (t1 - (t1 - t0) * s)), r0 * (t1 - t0)))
        return out

    def split(self, r_split, t_split):
        c = self.center
        if self.full and self.r0 == 0.0:
            # a disc: keep the centre interior to a smaller disc
            return [
                Sector(c, 0.0, r_split, self.t0, self.t1),
                Sector(c, r_split, self.r1, t_split - np.pi, t_split),
                Sector(c, r_split, self.r1, t_split, t_split + np.pi),
            ]
        return [
            Sector(c, self.r0, r_split, self.t0, t_split),
            Sector(c, self.r0, r_split, t_split, self.t1),
            Sector(c, r_split, self.r1, self.t0, t_split),
            Sector(c, r_split, self.r1, t_split, self.t1),
        ]


def _reach(f, z):
    return np.minimum(f.validity_radius(z), 1.0 - np.abs(z))


def _edge_turns(f, edge, length, scale_hint, max_rounds=40):
    """Argument increment of ``f`` along one edge, refined adaptively.

    An interval is bisected while the argument jumps by more than ``pi/3``,
    while ``|dz| |f'/f|`` exceeds 1 at an end, or while it is longer than
    half the local reach; the last two catch increments of a full turn that
    the first test cannot see.
    """
    n = int(min(4096, max(16, 64 * length / max(scale_hint, 1e-300))))
    s = np.linspace(0.0, 1.0, n + 1)
    z = edge(s)
    v, dv = _values(f, z, 1)
    for _ in range(max_rounds):
        if not np.all(np.isfinite(v)) or not np.all(np.isfinite(dv)):
            raise ArithmeticError("oracle returned non-finite values on a cell edge")
        a = np.abs(v)
        if np.min(a) < GUARD * np.max(a):
            raise ZeroOnContour("|f| below guard on a cell edge")
        d = np.angle(v[1:] / v[:-1])
        dz = np.abs(np.diff(z))
        lg = np.abs(dv / v)
        reach = _reach(f, z)
        bad = np.flatnonzero(
            (np.abs(d) > np.pi / 3)
            | (dz * np.maximum(lg[:-1], lg[1:]) > 1.0)
            | (dz > 0.5 * np.minimum(reach[:-1], reach[1:]))
        )
        if bad.size == 0:
            return float(np.sum(d)), v
        mids = 0.5 * (s[bad] + s[bad + 1])
        zm = edge(mids)
        vm, dvm = _values(f, zm, 1)
        s = np.insert(s, bad + 1, mids)
        z = np.insert(z, bad + 1, zm)
        v = np.insert(v, bad + 1, vm)
        dv = np.insert(dv, bad + 1, dvm)
    raise WindingError("argument increments did not resolve along a cell edge")


def count_in_sector(f, sector):
    """Zeros of ``f`` inside ``sector`` by the argument principle."""
    hint = max(sector.r1 - sector.r0, 1e-300)
    total = 0.0
    vals = []
    for edge, length in sector.edges():
        turns, v = _edge_turns(f, edge, length, hint)
        total += turns
        vals.append(v)
    v = np.abs(np.concatenate(vals))
    if np.min(v) < GUARD * np.max(v):
        raise ZeroOnContour(f"|f| below guard on the boundary of {sector}")
    w = total / (2 * np.pi)
    k = round(w)
    if abs(w - k) > 0.1:
        raise WindingError(f"sector winding {w:.3f} is not near an integer")
    return int(k)


def _radial_split(sector, boundary_aware):
    r0, r1 = sector.r0, sector.r1
    if boundary_aware and r1 > 0.5:
        # geometric midpoint of the distances to the unit circle
        a, b = 1.0 - r0, 1.0 - r1
        return 1.0 - math.sqrt(a * b) if r0 > 0 else 1.0 - math.sqrt(b)
    return 0.5 * (r0 + r1)


def _subdivide(f, sector, boundary_aware):
    r_mid = _radial_split(sector, boundary_aware)
    t_mid = 0.5 * (sector.t0 + sector.t1)
    dr = PERTURB * (sector.r1 - sector.r0)
    dt = PERTURB * (sector.t1 - sector.t0)
    for k in (0, 1, -1, 2, -2):
        cells = sector.split(r_mid + k * dr, t_mid + k * dt)
        try:
            return [(cell, count_in_sector(f, cell)) for cell in cells]
        except ZeroOnContour:
            continue
    raise LocatorError("could not find zero-free subdivision lines", sector)


# Newton ----------------------------------------------------------------------


def newton(f, z0, tol=1e-12, maxiter=NEWTON_MAX):
    """Newton iteration; returns ``(z, converged)``."""
    z = complex(z0)
    for _ in range(maxiter):
        c = _values(f, z, 1)
        fz, fp = complex(c[0]), complex(c[1])
        if fp == 0 or not np.isfinite(fp):
            return z, False
        step = fz / fp
        z_new = z - step
        if not (abs(z_new) < 1.0):
            return z_new, False
        z = z_new
        if abs(step) <= tol * max(1.0, abs(z)) * 1e-2:
            break
    c = _values(f, z, 1)
    ok = abs(complex(c[0])) < tol * max(1.0, abs(complex(c[1])))
    return z, ok


def multiplicity(f, z, *, floor=1e-7, order=8, scale=None):
    """Order of the zero of ``f`` at ``z``: first Taylor coefficient above the noise floor.

    Coefficients are taken in the variable ``(w - z) / scale`` with ``scale``
    a quarter of the oracle's validity radius, so that they are comparable.
    """
    z = complex(as_disc(z))
    if scale is None:
        scale = 0.25 * float(np.minimum(f.validity_radius(np.array(z)), 1.0 - abs(z)))
    c = np.abs(f.jet(np.array(z), order, scale).coeffs)
    top = np.max(c)
    if top == 0 or not np.isfinite(top):
        raise ArithmeticError(f"jet of f vanishes identically at {z!r}")
    big = np.flatnonzero(c > floor * top)
    return int(big[0])


def _certify(f, z, tol, separation):
    """Count zeros on a small circle around ``z``."""
    d = float(one_minus_abs2(z)) / (1.0 + abs(z))
    radius = min(max(tol, 1e-8 * d), 0.25 * separation, 0.5 * d)
    try:
        return count_zeros(f, z, radius)
    except (ZeroOnContour, WindingError):
        return None


def locate_zeros(f, center=0.0, radius=0.9, tol=1e-12, *, max_depth=60):
    """Find every zero of ``f`` inside ``|z - center| < radius``.

    The disc is subdivided into polar sectors until each cell holds at most one
    zero; Newton runs from the cell centre.  Cells that still hold several
    zeros once they are smaller than ``tol`` are reported as one multiple zero.
    """
    center = complex(center)
    limit = None
    if abs(center) + radius >= 1.0:
        raise ValueError("search disc must lie inside the unit disc")
    limit = (1.0 - abs(center)) * (1.0 - 1e-12)
    total, r = _count_perturbed(f, center, radius, limit)
    out = ZeroSet([], [], (center, r), total)
    if total == 0:
        return out
    boundary_aware = abs(center) == 0.0
    # start off the real axis, where the zeros of real-symmetric oracles sit
    t0 = START_ANGLE
    stack = [(Sector(center, 0.0, r, t0, t0 + 2 * np.pi), total, 0)]
    while stack:
        cell, n, depth = stack.pop()
        if n == 0:
            continue
        if n == 1 or cell.diameter() < tol:
            z, ok = newton(f, cell.mid(), tol)
            if ok and cell.contains(z, slack=1e-9):
                if n > 1:
                    out.points.append(z)
                    out.multiplicities.append(n)
                    continue
                sep = max(cell.diameter(), tol)
                cert = _certify(f, z, tol, sep)
                if cert in (1, None):
                    out.points.append(z)
                    out.multiplicities.append(1)
                    continue
            if cell.diameter() < tol:
                raise LocatorError("Newton failed in a cell below tolerance", cell)
        if depth >= max_depth:
            raise LocatorError("subdivision depth exhausted", cell)
        for sub, m in _subdivide(f, cell, boundary_aware):
            stack.append((sub, m, depth + 1))
    _merge_duplicates(out, tol)
    return out.sorted()


def _merge_duplicates(zs, tol):
    pts, mult = [], []
    for z, m in zip(zs.points, zs.multiplicities):
        for i, p in enumerate(pts):
            if abs(p - z) <= 10 * tol * max(1.0, abs(z)):
                mult[i] += m
                break
        else:
            pts.append(z)
            mult.append(m)
    zs.points, zs.multiplicities = pts, mult


def locate_critical_points(f, center=0.0, radius=0.9, tol=1e-12):
    """Zeros of ``f'`` in ``|z - center| < radius``."""
    return locate_zeros(Derivative(f), center, radius, tol)


# real-axis scans -------------------------------------------------------------


def scan_points(a, b, step=0.01):
    """Points of ``(a, b)`` evenly spaced in ``artanh``, i.e. in hyperbolic length."""
    ua, ub = math.atanh(a), math.atanh(b)
    n = max(2, int(math.ceil((ub - ua) / step)) + 1)
    top = np.nextafter(BOUNDARY_GUARD, 0.0)
    return np.clip(np.tanh(np.linspace(ua, ub, n)), -top, top)


def scan_real_zeros(f, a=-0.999, b=0.999, *, step=0.01, tol=1e-13):
    """Real zeros of an oracle that is real on the real axis.

    Sign changes on a hyperbolically uniform grid are bracketed, refined by
    Brent's method and polished by Newton.  Zeros of even order are missed.
    """
    x = scan_points(a, b, step)
    v = np.real(_values(f, x)[0])
    out = []
    exact = np.flatnonzero(v == 0)
    for i in exact:
        out.append(float(x[i]))
    sign = np.sign(v)
    brackets = np.flatnonzero(sign[:-1] * sign[1:] < 0)

    def g(t):
        return float(np.real(_values(f, np.array(t))[0]))

    for i in brackets:
        root = brentq(g, x[i], x[i + 1], xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=400)
        z, ok = newton(f, root, tol)
        if ok and x[i] <= z.real <= x[i + 1] and abs(z.imag) <= 1e-9 * (1 - abs(z.real)):
            root = z.real
        out.append(float(root))
    return np.array(sorted(out))


def scan_real_critical_points(f, a=-0.999, b=0.999, *, step=0.01, tol=1e-13):
    return scan_real_zeros(Derivative(f), a, b, step=step, tol=tol)
