"""Hyperbolic geometry of the unit disc.

All functions broadcast over numpy arrays of complex points.  Distances are
evaluated with formulas that stay accurate close to the boundary: the
quantities ``1 - |z|^2`` and ``|1 - conj(u) v|`` are never formed by
subtracting two numbers near one.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

#: points with modulus at or beyond this are rejected
BOUNDARY_GUARD = 1.0 - 1e-15


@dataclass(frozen=True)
class DiscPoint:
    """A complex number in the open unit disc."""

    value: complex

    def __post_init__(self):
        v = complex(self.value)
        if not np.isfinite(v) or abs(v) >= BOUNDARY_GUARD:
            raise ValueError(f"{v!r} is not a point of the open unit disc")
        object.__setattr__(self, "value", v)

    def __complex__(self):
        return self.value

    def __abs__(self):
        return abs(self.value)


def as_disc(z):
    """Return ``z`` as a complex ndarray, raising if any entry leaves the disc."""
    if isinstance(z, DiscPoint):
        return np.asarray(z.value, dtype=complex)
    arr = np.asarray(z, dtype=complex)
    if arr.dtype == object:
        arr = np.vectorize(complex, otypes=[complex])(arr)
    bad = ~np.isfinite(arr) | (np.abs(arr) >= BOUNDARY_GUARD)
    if np.any(bad):
        raise ValueError(f"points outside the open unit disc: {arr[bad][:5]}")
    return arr


def _scalarize(x):
    return x.item() if isinstance(x, np.ndarray) and x.ndim == 0 else x


def one_minus_abs2(z):
    """``1 - |z|^2`` without cancellation for points near the real or imaginary axis."""
    z = np.asarray(z, dtype=complex)
    x, y = np.abs(z.real), np.abs(z.imag)
    big = np.maximum(x, y)
    small = np.minimum(x, y)
    return (1.0 - big) * (1.0 + big) - small * small


def pseudo_distance(u, v):
    """Pseudo-hyperbolic distance ``|u - v| / |1 - conj(u) v|``."""
    u, v = as_disc(u), as_disc(v)
    num = np.abs(u - v)
    den = np.sqrt(one_minus_abs2(u) * one_minus_abs2(v) + num * num)
    return _scalarize(num / den)


def hyperbolic_distance(u, v):
    """Hyperbolic distance ``artanh(pseudo_distance(u, v))``.

    Evaluated as ``log((|1 - conj(u)v| + |u - v|) / sqrt((1-|u|^2)(1-|v|^2)))``,
    which keeps full relative accuracy when both points approach the boundary.
    """
    u, v = as_disc(u), as_disc(v)
    num = np.abs(u - v)
    p = one_minus_abs2(u) * one_minus_abs2(v)
    den = np.sqrt(p + num * num)
    return _scalarize(np.log((den + num) / np.sqrt(p)))


def automorphism(a, z):
    """The involutive disc automorphism ``(a - z) / (1 - conj(a) z)``."""
    a, z = as_disc(a), as_disc(z)
    return _scalarize((a - z) / (1.0 - np.conj(a) * z))


def automorphism_derivative(a, z):
    """Derivative of ``automorphism(a, .)`` at ``z``: ``-(1-|a|^2) / (1 - conj(a) z)^2``."""
    a, z = as_disc(a), as_disc(z)
    return _scalarize(-one_minus_abs2(a) / (1.0 - np.conj(a) * z) ** 2)


def hyperbolic_midpoint(u, v):
    """Point on the geodesic through ``u`` and ``v`` equidistant from both.

    ``v`` is moved to ``w = phi_u(v)``, the radius ``|w|`` is halved in
    hyperbolic scale and the result is mapped back with ``phi_u``.
    """
    u, v = as_disc(u), as_disc(v)
    w = (u - v) / (1.0 - np.conj(u) * v)
    r = np.abs(w)
    # tanh(artanh(r)/2) = r / (1 + sqrt(1 - r^2)), with 1 - r^2 formed accurately
    num = np.abs(u - v)
    p = one_minus_abs2(u) * one_minus_abs2(v)
    one_minus_r2 = p / (p + num * num)
    s = r / (1.0 + np.sqrt(one_minus_r2))
    t = s * np.exp(1j * np.angle(w))
    mid = (u - t) / (1.0 - np.conj(u) * t)
    return _scalarize(np.where(r > 0, mid, u))


def pseudo_disc_circle(a, delta):
    """Euclidean centre and radius of the pseudo-hyperbolic disc ``{z : rho_p(z, a) < delta}``."""
    a = complex(as_disc(a))
    d2 = delta * delta
    den = 1.0 - d2 * abs(a) ** 2
    return a * (1.0 - d2) / den, delta * float(one_minus_abs2(a)) / den


def hyperbolic_disc_circle(a, radius):
    """Euclidean circle of the hyperbolic disc of the given ``rho_h`` radius around ``a``."""
    return pseudo_disc_circle(a, float(np.tanh(radius)))
