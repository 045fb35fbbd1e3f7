"""Power-series solution of ``f'' + A f = 0`` with analytic continuation.

Local solutions are Taylor series in the scaled variable
``t = (z - center) / h``; the recurrence

    (k + 2)(k + 1) c_{k+2} = -h^2 sum_{j <= k} a_j c_{k-j}

uses the coefficients ``a_j`` of ``A(center + h t)``.  Orders start at 24 and
double up to 192 until the tail is below tolerance; failing that, the step
radius is halved.

A :class:`SolutionBasis` covers the disc lazily with a polar lattice of
expansion centres: ring ``k`` sits at radius ``1 - q^k`` and each centre
inherits its initial data from the nearest centre on ring ``k - 1``.  The
lattice is refined only where the basis is evaluated.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .hyperbolic import as_disc, one_minus_abs2
from .jet import Jet, shift
from .kernel import Quotient

SERIES_ORDERS = (24, 48, 96, 192)
SERIES_TOL = 1e-14
RHO_SAFE = 0.5


class ContinuationError(RuntimeError):
    def __init__(self, message, location=None):
        super().__init__(message if location is None else f"{message} near z = {location!r}")
        self.location = location


def _dist_to_boundary(z):
    z = np.asarray(z, dtype=complex)
    return one_minus_abs2(z) / (1.0 + np.abs(z))


def _step_radius(A, centers, rho_safe):
    d = _dist_to_boundary(centers)
    hint = np.asarray(A.validity_radius(centers), dtype=float)
    return rho_safe * np.minimum(d, np.broadcast_to(hint, d.shape))


def _recurrence(a, y0, y1, h):
    """Series coefficients for a batch of centres and several solutions.

    a: (N+1, B) scaled coefficients of A; y0, y1: (B, m); h: (B,).
    Returns (N+1, B, m).
    """
    n = a.shape[0] - 1
    c = np.zeros((n + 1,) + y0.shape, dtype=complex)
    c[0] = y0
    if n >= 1:
        c[1] = h[:, None] * y1
    h2 = (h * h)[:, None]
    for k in range(n - 1):
        s = np.einsum("jb,jbm->bm", a[: k + 1], c[k::-1])
        c[k + 2] = -h2 * s / ((k + 2) * (k + 1))
    return c


def _tail_ratio(c):
    mag = np.abs(c)
    scale = mag.max(axis=(0, 2))
    tail = (mag[-1] + mag[-2]).max(axis=1)
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.where(scale > 0, tail / scale, 0.0)


def _solve_batch(A, centers, y0, y1, h0, tol=SERIES_TOL, orders=SERIES_ORDERS, min_shrink=1e-6):
    """Adaptive series at many centres.  Returns (list of coefficient arrays, radii)."""
    nb = len(centers)
    h = np.array(h0, dtype=float, copy=True)
    out = [None] * nb
    pending = np.arange(nb)
    while pending.size:
        remaining = pending
        for order in orders:
            a = A.jet(centers[remaining], order, h[remaining]).coeffs
            if not np.all(np.isfinite(a)):
                bad = remaining[~np.all(np.isfinite(a), axis=0)][0]
                raise ContinuationError("coefficient oracle failed", complex(centers[bad]))
            c = _recurrence(a, y0[remaining], y1[remaining], h[remaining])
            ok = _tail_ratio(c) <= tol
            for pos in np.flatnonzero(ok):
                out[remaining[pos]] = c[:, pos, :]
            remaining = remaining[~ok]
            if not remaining.size:
                break
        if remaining.size:
            h[remaining] *= 0.5
            small = h[remaining] < min_shrink * np.asarray(h0)[remaining]
            if np.any(small):
                bad = remaining[np.flatnonzero(small)[0]]
                raise ContinuationError("series step shrank below the minimum", complex(centers[bad]))
        pending = remaining
    return out, h


@dataclass(frozen=True)
class LocalSolution:
    """Taylor expansion of one or more solutions around ``center``.

    ``coeffs[k]`` multiplies ``((z - center) / scale)^k``; the expansion is
    trusted for ``|z - center| <= radius``.
    """

    center: complex
    scale: float
    coeffs: np.ndarray
    radius: float
    f0: complex | np.ndarray = 0j
    f0p: complex | np.ndarray = 0j

    @property
    def order(self):
        return self.coeffs.shape[0] - 1

    def derivatives(self, z, nderiv=1):
        """``f, f', ..., f^(nderiv)`` at ``z`` (leading axis indexes the derivative)."""
        z = np.asarray(z, dtype=complex)
        t = (z - self.center) / self.scale
        lead = (self.order + 1,) + (1,) * t.ndim
        if self.coeffs.ndim == 2:
            d = shift(self.coeffs.reshape(lead + (-1,)), t[..., None], nderiv)
        else:
            d = shift(self.coeffs.reshape(lead), t, nderiv)
        fact = np.array([math.factorial(j) / self.scale**j for j in range(nderiv + 1)])
        return d * fact.reshape((-1,) + (1,) * (d.ndim - 1))

    def jet(self, z, order, scale=1.0):
        z = np.asarray(z, dtype=complex)
        t = (z - self.center) / self.scale
        d = shift(self.coeffs, t, order)
        r = (scale / self.scale) ** np.arange(order + 1)
        return Jet(d * r.reshape((-1,) + (1,) * t.ndim), z, scale)


def series_solve(A, z0, f0, f0p, order=None, *, tol=SERIES_TOL, rho_safe=RHO_SAFE):
    """Local power-series solution with ``f(z0) = f0``, ``f'(z0) = f0p``.

    With ``order=None`` the order and step are chosen adaptively; with a fixed
    order the validity radius is cut down to where the tail bound holds.
    """
    z0 = complex(as_disc(z0))
    centers = np.array([z0])
    h0 = _step_radius(A, centers, rho_safe)
    y0 = np.array([[f0]], dtype=complex)
    y1 = np.array([[f0p]], dtype=complex)
    if order is None:
        cs, h = _solve_batch(A, centers, y0, y1, h0, tol)
        return LocalSolution(z0, float(h[0]), cs[0][:, 0], float(h[0]), complex(f0), complex(f0p))
    if order < 4:
        raise ValueError("order must be at least 4")
    a = A.jet(centers, order, h0).coeffs
    c = _recurrence(a, y0, y1, h0)
    ratio = float(_tail_ratio(c)[0])
    tau = 1.0 if ratio <= tol else (tol / ratio) ** (1.0 / (order - 1))
    return LocalSolution(z0, float(h0[0]), c[:, 0, 0], float(h0[0] * tau), complex(f0), complex(f0p))


@dataclass
class SolutionChain:
    """Local solutions strung along a path."""

    pieces: list = field(default_factory=list)

    def __len__(self):
        return len(self.pieces)

    def __iter__(self):
        return iter(self.pieces)

    def piece_for(self, z):
        best, arg = np.inf, None
        for p in self.pieces:
            ratio = abs(z - p.center) / p.radius
            if ratio < best:
                best, arg = ratio, p
        if best > 1.0:
            raise ValueError(f"{z!r} is not covered by the continuation")
        return arg

    def derivatives(self, z, nderiv=1):
        z = complex(z)
        return self.piece_for(z).derivatives(z, nderiv)

    @property
    def end(self):
        return self.pieces[-1]


def _continue(A, path, y0, y1, tol, rho_safe, step_fraction):
    pts = np.atleast_1d(as_disc(path))
    y0 = np.atleast_1d(np.asarray(y0, dtype=complex))
    y1 = np.atleast_1d(np.asarray(y1, dtype=complex))
    c = complex(pts[0])

    def solve(center, f, fp):
        centers = np.array([center])
        h0 = _step_radius(A, centers, rho_safe)
        cs, h = _solve_batch(A, centers, f[None, :], fp[None, :], h0, tol)
        return LocalSolution(center, float(h[0]), cs[0], float(h[0]), f.copy(), fp.copy())

    piece = solve(c, y0, y1)
    chain = SolutionChain([piece])
    for target in pts[1:]:
        target = complex(target)
        while True:
            d = target - c
            dist = abs(d)
            step = step_fraction * piece.radius
            new = target if dist <= step else c + d / dist * step
            if dist > step and step < 1e-6 * _dist_to_boundary(c) * rho_safe:
                raise ContinuationError("continuation step shrank below the minimum", c)
            vals = piece.derivatives(new, 1)
            piece = solve(new, vals[0], vals[1])
            chain.pieces.append(piece)
            c = new
            if new == target:
                break
    return chain


def continue_along(A, path, f0, f0p, *, tol=SERIES_TOL, rho_safe=RHO_SAFE, step_fraction=0.8):
    """Continue the solution with data ``(f0, f0p)`` at ``path[0]`` along a polyline.

    Returns a :class:`SolutionChain`; each new centre lies inside the previous
    validity disc and receives ``(f, f')`` from the previous expansion.
    """
    chain = _continue(A, path, [f0], [f0p], tol, rho_safe, step_fraction)
    chain.pieces = [
        LocalSolution(p.center, p.scale, p.coeffs[:, 0], p.radius, complex(p.f0[0]), complex(p.f0p[0])) for p in chain
    ]
    return chain


class SolutionBasis:
    """Solutions ``f1, f2`` with ``(f1, f1') = (0, 1)`` and ``(f2, f2') = (1, 0)`` at ``z0``.

    The Wronskian ``f1 f2' - f1' f2`` equals ``-1``.  Evaluation builds the
    covering lattice on demand, so the cost follows the query points.
    """

    def __init__(self, A, z0=0.0, *, tol=SERIES_TOL, rho_safe=RHO_SAFE, ring_ratio=0.75, arc=0.3):
        self.A = A
        self.z0 = complex(as_disc(z0))
        self.tol = tol
        self.rho_safe = rho_safe
        self.q = ring_ratio
        self.arc = arc
        self.wronskian = -1.0 + 0j
        y0 = np.array([0.0, 1.0], dtype=complex)
        y1 = np.array([1.0, 0.0], dtype=complex)
        if self.z0 != 0:
            chain = _continue(A, [self.z0, 0.0], y0, y1, tol, rho_safe, 0.8)
            vals = chain.end.derivatives(0.0, 1)
            y0, y1 = vals[0], vals[1]
        self._index = {}
        self._centers = []
        self._radii = []
        self._order = []
        self._row = []
        self._store = {}
        self._stacked = {}
        cs, h = _solve_batch(A, np.array([0j]), y0[None, :], y1[None, :], _step_radius(A, np.array([0j]), rho_safe), tol)
        self._add((0, 0), 0j, float(h[0]), cs[0])

    # lattice geometry -----------------------------------------------------

    def _ring_radius(self, k):
        return 1.0 - self.q**k

    def _ring_count(self, k):
        if k == 0:
            return 1
        r = self._ring_radius(k)
        return 4 * max(1, math.ceil(2 * math.pi * r / (4 * self.arc * self.q**k)))

    def _center(self, k, j):
        if k == 0:
            return 0j
        n = self._ring_count(k)
        r = self._ring_radius(k)
        quarter, rem = divmod(4 * j, n)
        if rem == 0:
            return r * (1, 1j, -1, -1j)[quarter % 4]
        return r * complex(np.exp(2j * math.pi * j / n))

    def _parent(self, k, j):
        if k <= 1:
            return (0, 0)
        n, m = self._ring_count(k), self._ring_count(k - 1)
        return (k - 1, round(j * m / n) % m)

    def _key(self, z):
        d = float(_dist_to_boundary(z))
        if d >= 1.0 - 1e-300:
            return (0, 0)
        k = max(0, int(round(math.log(d) / math.log(self.q))))
        if k == 0:
            return (0, 0)
        n = self._ring_count(k)
        theta = math.atan2(z.imag, z.real) % (2 * math.pi)
        return (k, round(theta * n / (2 * math.pi)) % n)

    # storage ----------------------------------------------------------------

    def _add(self, key, center, radius, coeffs):
        order = coeffs.shape[0] - 1
        rows = self._store.setdefault(order, [])
        rows.append(coeffs)
        idx = len(self._centers)
        self._centers.append(center)
        self._radii.append(radius)
        self._order.append(order)
        self._row.append(len(rows) - 1)
        if key is not None:
            self._index[key] = idx
        return idx

    def _stack(self, order):
        rows = self._store[order]
        cached = self._stacked.get(order)
        if cached is None or cached.shape[0] != len(rows):
            cached = np.stack(rows)
            self._stacked[order] = cached
        return cached

    def _local_derivatives(self, idx, z, nderiv):
        """Derivatives of both solutions at points ``z`` (all served by node ``idx``)."""
        coeffs = self._store[self._order[idx]][self._row[idx]]
        sol = LocalSolution(self._centers[idx], self._radii[idx], coeffs, self._radii[idx])
        return sol.derivatives(z, nderiv)

    def _batch_derivatives(self, nodes, z, nderiv, chunk=4096):
        """Derivatives of both solutions at ``z[i]`` from node ``nodes[i]``; shape (nderiv+1, Q, 2)."""
        out = np.empty((nderiv + 1, len(z), 2), dtype=complex)
        if not len(z):
            return out
        centers = np.array(self._centers)[nodes]
        radii = np.array(self._radii)[nodes]
        orders = np.array(self._order)[nodes]
        rows = np.array(self._row)[nodes]
        fact = np.array([math.factorial(j) for j in range(nderiv + 1)], dtype=float)
        for order in np.unique(orders):
            stack = self._stack(int(order))
            sel_all = np.flatnonzero(orders == order)
            for s in range(0, sel_all.size, chunk):
                sel = sel_all[s : s + chunk]
                h = radii[sel]
                t = (z[sel] - centers[sel]) / h
                coeffs = np.moveaxis(stack[rows[sel]], 0, 1)
                d = shift(coeffs, t[:, None], nderiv)
                scale = fact[:, None] / h[None, :] ** np.arange(nderiv + 1)[:, None]
                out[:, sel] = d * scale[:, :, None]
        return out

    def _spawn(self, parents, centers, keys):
        """Create nodes at ``centers`` from data of the given parent nodes."""
        centers = np.asarray(centers, dtype=complex)
        y0 = np.empty((len(centers), 2), dtype=complex)
        y1 = np.empty_like(y0)
        parents = np.asarray(parents, dtype=int)
        pc = np.array(self._centers)[parents]
        pr = np.array(self._radii)[parents]
        near = np.abs(centers - pc) <= 0.95 * pr
        vals = self._batch_derivatives(parents[near], centers[near], 1)
        y0[near], y1[near] = vals[0], vals[1]
        for s in np.flatnonzero(~near):
            vals = self._walk(int(parents[s]), complex(centers[s]))
            y0[s], y1[s] = vals[0], vals[1]
        h0 = _step_radius(self.A, centers, self.rho_safe)
        cs, h = _solve_batch(self.A, centers, y0, y1, h0, self.tol)
        return [self._add(key, c, float(r), co) for key, c, r, co in zip(keys, centers, h, cs)]

    def _walk(self, start, target):
        """Data at ``target`` by explicit stepping from node ``start`` (off-lattice)."""
        idx = start
        while True:
            c, r = self._centers[idx], self._radii[idx]
            d = target - c
            if abs(d) <= 0.8 * r:
                return self._local_derivatives(idx, np.array(target), 1)
            new = c + d / abs(d) * 0.8 * r
            idx = self._spawn([idx], [new], [None])[0]

    def _ensure(self, keys):
        missing = {}
        for key in keys:
            while key not in self._index:
                missing.setdefault(key[0], set()).add(key)
                key = self._parent(*key)
        for k in sorted(missing):
            todo = sorted(missing[k])
            parents = [self._index[self._parent(*key)] for key in todo]
            centers = [self._center(*key) for key in todo]
            self._spawn(parents, centers, todo)

    def _assign(self, z):
        keys = [self._key(complex(v)) for v in z]
        self._ensure(set(keys))
        idx = np.array([self._index[k] for k in keys], dtype=int)
        centers = np.array(self._centers)[idx]
        radii = np.array(self._radii)[idx]
        outside = np.abs(z - centers) > 0.9 * radii
        for i in np.flatnonzero(outside):
            idx[i] = self._cover(int(idx[i]), complex(z[i]))
        return idx

    def _cover(self, start, target):
        idx = start
        while True:
            c, r = self._centers[idx], self._radii[idx]
            d = target - c
            if abs(d) <= 0.9 * r:
                return idx
            new = target if abs(d) <= 1.6 * r else c + d / abs(d) * 0.8 * r
            idx = self._spawn([idx], [new], [None])[0]

    # evaluation ---------------------------------------------------------------

    def evaluate(self, z, nderiv=1, chunk=4096):
        """Array of shape ``(nderiv + 1, 2, *z.shape)``: derivatives of ``f1`` and ``f2``."""
        z = as_disc(z)
        flat = z.reshape(-1)
        out = np.empty((nderiv + 1, 2, flat.size), dtype=complex)
        if flat.size == 0:
            return out.reshape((nderiv + 1, 2) + z.shape)
        idx = self._assign(flat)
        out = np.moveaxis(self._batch_derivatives(idx, flat, nderiv, chunk), 2, 1)
        return out.reshape((nderiv + 1, 2) + z.shape)

    def jet(self, z, order, scale=1.0):
        """Jets ``(J1, J2)`` of ``f1`` and ``f2`` at ``z``."""
        z = np.asarray(z, dtype=complex)
        d = self.evaluate(z, order)
        k = np.arange(order + 1)
        fact = np.array([math.factorial(int(j)) for j in k], dtype=float)
        factor = (np.asarray(scale) ** k.reshape((-1,) + (1,) * z.ndim)) / fact.reshape((-1,) + (1,) * z.ndim)
        return Jet(d[:, 0] * factor, z, scale), Jet(d[:, 1] * factor, z, scale)

    def solution(self, c1, c2):
        """Oracle for ``c1 f1 + c2 f2``."""
        return BasisSolution(self, complex(c1), complex(c2))

    def with_initial_data(self, f0, f0p):
        """The solution with ``f(z0) = f0`` and ``f'(z0) = f0p``."""
        return self.solution(f0p, f0)

    @property
    def f1(self):
        return self.solution(1.0, 0.0)

    @property
    def f2(self):
        return self.solution(0.0, 1.0)

    def quotient(self):
        """``w = f1 / f2``; its Schwarzian is ``2A``."""
        return Quotient(self.f1, self.f2)

    def node_count(self):
        return len(self._centers)

    def node_wronskians(self):
        """``f1 f2' - f1' f2`` at every expansion centre, from the local data."""
        out = []
        for idx, c in enumerate(self._centers):
            v = self._local_derivatives(idx, np.array(c), 1)
            out.append(v[0, 0] * v[1, 1] - v[1, 0] * v[0, 1])
        return np.array(out)


@dataclass(frozen=True)
class BasisSolution:
    basis: SolutionBasis
    c1: complex
    c2: complex

    def jet(self, z, order, scale=1.0):
        j1, j2 = self.basis.jet(z, order, scale)
        return j1 * self.c1 + j2 * self.c2

    def derivatives(self, z, nderiv=1):
        d = self.basis.evaluate(z, nderiv)
        return d[:, 0] * self.c1 + d[:, 1] * self.c2

    def __call__(self, z):
        v = self.derivatives(z, 0)[0]
        return v.item() if np.ndim(v) == 0 else v

    def validity_radius(self, z):
        return _dist_to_boundary(z)


def solution_basis(A, z0=0.0, **kwargs):
    return SolutionBasis(A, z0, **kwargs)


def wronskian_drift(basis, checkpoints, *, scaled=False):
    """Largest relative deviation of ``f1 f2' - f1' f2`` from the base value.

    With ``scaled=True`` the deviation is divided by ``|f1 f2'| + |f1' f2|``
    instead, which is the size of the rounding error of the difference.
    """
    d = basis.evaluate(np.atleast_1d(as_disc(checkpoints)), 1)
    w = d[0, 0] * d[1, 1] - d[1, 0] * d[0, 1]
    dev = np.abs(w - basis.wronskian)
    if scaled:
        return float(np.max(dev / (np.abs(d[0, 0] * d[1, 1]) + np.abs(d[1, 0] * d[0, 1]))))
    return float(np.max(dev) / abs(basis.wronskian))


def residual(A, f, samples):
    """``max |f'' + A f|`` over the sample points."""
    z = np.atleast_1d(as_disc(samples))
    j = f.jet(z, 2).derivatives()
    a = A.jet(z, 0).coeffs[0]
    return float(np.max(np.abs(j[2] + a * j[0])))
