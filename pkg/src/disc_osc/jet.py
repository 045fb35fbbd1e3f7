"""Truncated Taylor expansions with complex coefficients.

A :class:`Jet` stores the coefficients ``c_0 .. c_N`` of a function expanded
in the local variable ``t = (z - center) / scale``.  The scale keeps the
coefficients O(1) when the expansion point sits very close to a singularity,
which is the normal situation near the boundary of the disc.

The coefficient array has shape ``(N + 1, *batch)``, so one jet can carry
expansions at a whole grid of centres; every operation is vectorised over
the batch axes.  The elementary functions in this module accept either jets
or plain numbers/arrays, so a single expression can produce values or jets.
"""
from __future__ import annotations

import math

import numpy as np


class Jet:
    __slots__ = ("coeffs", "center", "scale")
    # make numpy defer to Jet's reflected operators
    __array_ufunc__ = None

    def __init__(self, coeffs, center=0.0, scale=1.0):
        self.coeffs = np.asarray(coeffs, dtype=complex)
        if self.coeffs.ndim == 0:
            self.coeffs = self.coeffs.reshape(1)
        self.center = center
        self.scale = scale

    @classmethod
    def variable(cls, center, order, scale=1.0):
        """Jet of the identity map ``z`` at ``center``."""
        center = np.asarray(center, dtype=complex)
        c = np.zeros((order + 1,) + center.shape, dtype=complex)
        c[0] = center
        if order >= 1:
            c[1] = scale
        return cls(c, center, scale)

    @classmethod
    def constant(cls, value, order, center=0.0, scale=1.0):
        value = np.asarray(value, dtype=complex)
        shape = np.broadcast_shapes(value.shape, np.shape(center))
        c = np.zeros((order + 1,) + shape, dtype=complex)
        c[0] = value
        return cls(c, center, scale)

    @property
    def order(self):
        return self.coeffs.shape[0] - 1

    @property
    def value(self):
        return self.coeffs[0]

    def __len__(self):
        return self.coeffs.shape[0]

    def __repr__(self):
        return f"Jet(order={self.order}, batch={self.coeffs.shape[1:]})"

    def _like(self, coeffs):
        return Jet(coeffs, self.center, self.scale)

    def truncate(self, order):
        return self._like(self.coeffs[: order + 1])

    def taylor(self):
        """Taylor coefficients in the variable ``z - center``."""
        k = np.arange(len(self)).reshape((-1,) + (1,) * (self.coeffs.ndim - 1))
        return self.coeffs / np.asarray(self.scale) ** k

    def derivatives(self):
        """``f(center), f'(center), ..., f^(N)(center)``."""
        k = np.arange(len(self))
        fact = np.array([math.factorial(int(j)) for j in k], dtype=float)
        return self.taylor() * fact.reshape((-1,) + (1,) * (self.coeffs.ndim - 1))

    def deriv(self):
        """Jet of ``d/dz`` of the function, one order lower."""
        if self.order == 0:
            raise ValueError("cannot differentiate an order-0 jet")
        k = np.arange(1, len(self)).reshape((-1,) + (1,) * (self.coeffs.ndim - 1))
        return self._like(k * self.coeffs[1:] / np.asarray(self.scale))

    def __call__(self, t):
        """Evaluate the truncated series at local coordinate ``t``."""
        out = np.zeros(np.broadcast_shapes(np.shape(t), self.coeffs.shape[1:]), dtype=complex)
        for c in self.coeffs[::-1]:
            out = out * t + c
        return out

    # arithmetic -------------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Jet):
            n = min(len(self), len(other))
            return self.coeffs[:n], other.coeffs[:n]
        return self.coeffs, None

    def __neg__(self):
        return self._like(-self.coeffs)

    def __pos__(self):
        return self

    def __add__(self, other):
        a, b = self._coerce(other)
        if b is None:
            other = np.asarray(other, dtype=complex)
            c = np.array(np.broadcast_to(a, np.broadcast_shapes(a.shape, (1,) + other.shape)))
            c[0] = c[0] + other
            return self._like(c)
        return self._like(a + b)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        a, b = self._coerce(other)
        if b is None:
            return self._like(a * np.asarray(other, dtype=complex))
        return self._like(_convolve(a, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        a, b = self._coerce(other)
        if b is None:
            return self._like(a / np.asarray(other, dtype=complex))
        return self._like(_divide(a, b))

    def __rtruediv__(self, other):
        b = self.coeffs
        a = np.zeros_like(b)
        a[0] = other
        return self._like(_divide(a, b))

    def __pow__(self, exponent):
        if isinstance(exponent, (int, np.integer)):
            n = int(exponent)
            if n == 0:
                return Jet.constant(1.0, self.order, self.center, self.scale)
            base = self if n > 0 else 1.0 / self
            out = base
            for _ in range(abs(n) - 1):
                out = out * base
            return out
        return power(self, exponent)


def _convolve(a, b):
    n = a.shape[0]
    out = np.empty(np.broadcast_shapes(a.shape, b.shape), dtype=complex)
    for k in range(n):
        out[k] = np.sum(a[: k + 1] * b[k::-1], axis=0)
    return out


def _divide(a, b):
    n = a.shape[0]
    out = np.empty(np.broadcast_shapes(a.shape, b.shape), dtype=complex)
    b0 = b[0]
    for k in range(n):
        acc = a[k] - np.sum(b[1 : k + 1] * out[k - 1 :: -1][:k], axis=0) if k else a[0]
        out[k] = acc / b0
    return out


def _weights(k, ndim):
    return np.arange(1, k + 1, dtype=float).reshape((-1,) + (1,) * ndim)


# elementary functions ------------------------------------------------------


def exp(u):
    if not isinstance(u, Jet):
        return np.exp(np.asarray(u, dtype=complex))
    a = u.coeffs
    out = np.empty_like(a)
    out[0] = np.exp(a[0])
    nd = a.ndim - 1
    for k in range(1, len(a)):
        j = _weights(k, nd)
        out[k] = np.sum(j * a[1 : k + 1] * out[k - 1 :: -1][:k], axis=0) / k
    return u._like(out)


def log(u):
    """Principal logarithm (branch taken at the constant term)."""
    if not isinstance(u, Jet):
        return np.log(np.asarray(u, dtype=complex))
    a = u.coeffs
    out = np.empty_like(a)
    out[0] = np.log(a[0])
    nd = a.ndim - 1
    for k in range(1, len(a)):
        acc = a[k]
        if k > 1:
            j = _weights(k - 1, nd)
            acc = acc - np.sum(j * out[1:k] * a[k - 1 : 0 : -1], axis=0) / k
        out[k] = acc / a[0]
    return u._like(out)


def power(u, alpha):
    """Principal power ``u**alpha = exp(alpha * Log u)``."""
    if not isinstance(u, Jet):
        u = np.asarray(u, dtype=complex)
        return np.exp(alpha * np.log(u))
    a = u.coeffs
    out = np.empty_like(a)
    out[0] = np.exp(alpha * np.log(a[0]))
    nd = a.ndim - 1
    for k in range(1, len(a)):
        j = _weights(k, nd)
        w = (alpha + 1.0) * j - k
        out[k] = np.sum(w * a[1 : k + 1] * out[k - 1 :: -1][:k], axis=0) / (k * a[0])
    return u._like(out)


def sqrt(u):
    return power(u, 0.5) if isinstance(u, Jet) else np.sqrt(np.asarray(u, dtype=complex))


def _sincos(u):
    a = u.coeffs
    s = np.empty_like(a)
    c = np.empty_like(a)
    s[0], c[0] = np.sin(a[0]), np.cos(a[0])
    nd = a.ndim - 1
    for k in range(1, len(a)):
        j = _weights(k, nd)
        ja = j * a[1 : k + 1]
        s[k] = np.sum(ja * c[k - 1 :: -1][:k], axis=0) / k
        c[k] = -np.sum(ja * s[k - 1 :: -1][:k], axis=0) / k
    return u._like(s), u._like(c)


def sin(u):
    if not isinstance(u, Jet):
        return np.sin(np.asarray(u, dtype=complex))
    return _sincos(u)[0]


def cos(u):
    if not isinstance(u, Jet):
        return np.cos(np.asarray(u, dtype=complex))
    return _sincos(u)[1]


def compose(outer, inner):
    """Series of ``F(inner)`` where ``outer`` is the jet of ``F`` at ``inner.value``.

    ``outer`` must be centred at the constant term of ``inner``.
    """
    du = (inner - inner.value) / np.asarray(outer.scale)
    n = min(len(outer), len(inner))
    out = Jet.constant(outer.coeffs[n - 1], n - 1, inner.center, inner.scale)
    for c in outer.coeffs[n - 2 :: -1]:
        out = out * du + c
    return out


def shift(coeffs, t0, order):
    """Re-expand the polynomial ``sum c_k t^k`` around ``t0``.

    ``coeffs`` has shape ``(N + 1, *batch)`` and ``t0`` broadcasts against the
    batch.  Returns the first ``order + 1`` coefficients of the expansion in
    powers of ``t - t0`` (repeated synthetic division).
    """
    coeffs = np.asarray(coeffs, dtype=complex)
    n = coeffs.shape[0]
    batch = np.broadcast_shapes(coeffs.shape[1:], np.shape(t0))
    # batch axes align from the right, after the coefficient axis
    coeffs = coeffs.reshape((n,) + (1,) * (len(batch) - coeffs.ndim + 1) + coeffs.shape[1:])
    b = np.array(np.broadcast_to(coeffs, (n,) + batch))
    out = np.empty((order + 1,) + batch, dtype=complex)
    for j in range(order + 1):
        acc = np.zeros_like(out[0])
        for k in range(n - 1, j - 1, -1):
            acc = acc * t0 + b[k]
            b[k] = acc
        out[j] = b[j] if j < n else 0.0
    return out
