"""Bounded interpolation in the disc (Nevanlinna-Pick).

The smallest norm ``c*`` of an analytic ``h`` with ``h(z_j) = v_j`` is found
by bisection on positive definiteness of the Pick matrix

    P(c)_{jk} = (c^2 - v_j conj(v_k)) / (1 - z_j conj(z_k)).

An interpolant of norm ``1.05 c*`` is then produced by the Schur algorithm:
each step peels one node off with a disc automorphism, and the last stage is
a constant.  The result is a rational function of degree below the number of
nodes, bounded by the chosen norm.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import LinAlgError, cholesky, eigh

from .hyperbolic import as_disc, one_minus_abs2, pseudo_distance
from .kernel import Analytic

HEADROOM = 1.05
MAX_CONDITION = 1e12


class PickConditioningError(ArithmeticError):
    """The normalised Cauchy kernel matrix is too ill-conditioned; prune nodes."""


@dataclass
class InterpolationProblem:
    nodes: np.ndarray
    targets: np.ndarray
    norm_cap: float | None = None

    def __post_init__(self):
        self.nodes = np.atleast_1d(as_disc(self.nodes)).astype(complex)
        self.targets = np.atleast_1d(np.asarray(self.targets, dtype=complex))
        if self.nodes.shape != self.targets.shape or self.nodes.ndim != 1:
            raise ValueError("nodes and targets must be 1-d of equal length")
        n = len(self.nodes)
        if n > 1:
            rho = pseudo_distance(self.nodes[:, None], self.nodes[None, :])
            rho = rho + np.eye(n)
            if np.min(rho) <= 1e-10:
                raise ValueError("interpolation nodes must be distinct (pseudo-distance above 1e-10)")

    def __len__(self):
        return len(self.nodes)


def _kernel(nodes):
    """Cauchy kernel normalised to unit diagonal: ``s_j s_k / (1 - z_j conj(z_k))``."""
    s = np.sqrt(one_minus_abs2(nodes))
    return s[:, None] * s[None, :] / (1.0 - nodes[:, None] * np.conj(nodes)[None, :]), s


def pick_matrix(problem, c):
    """Normalised Pick matrix ``S P(c) S`` with ``S = diag(sqrt(1 - |z_j|^2))``."""
    G, _ = _kernel(problem.nodes)
    v = problem.targets
    return (c * c - v[:, None] * np.conj(v)[None, :]) * G


def is_positive_definite(M):
    try:
        cholesky(M, lower=True, check_finite=True)
    except LinAlgError:
        return False
    return True


def kernel_condition(problem):
    G, _ = _kernel(problem.nodes)
    w = np.linalg.eigvalsh(G)
    return float(w[-1] / w[0]) if w[0] > 0 else math.inf


def minimal_norm(problem, rtol=1e-14):
    """Bisection for the smallest ``c`` with a positive semidefinite Pick matrix."""
    cond = kernel_condition(problem)
    if cond > MAX_CONDITION:
        raise PickConditioningError(f"kernel condition number {cond:.3g} exceeds {MAX_CONDITION:g}; prune close nodes")
    lo = float(np.max(np.abs(problem.targets)))
    if lo == 0.0:
        return 0.0
    hi = 2.0 * lo
    while not is_positive_definite(pick_matrix(problem, hi)):
        lo, hi = hi, 2.0 * hi
    # lo may itself be feasible only in the limit; keep it as the infeasible end
    while hi - lo > rtol * hi:
        mid = 0.5 * (lo + hi)
        if is_positive_definite(pick_matrix(problem, mid)):
            hi = mid
        else:
            lo = mid
    return hi


def generalized_norm(problem):
    """Closed form ``c*^2 = lambda_max(V, G)`` of the generalised eigenproblem (cross-check)."""
    G, _ = _kernel(problem.nodes)
    v = problem.targets
    V = v[:, None] * np.conj(v)[None, :] * G
    w = eigh(V, G, eigvals_only=True)
    return math.sqrt(max(float(w[-1]), 0.0))


@dataclass
class SchurInterpolant:
    """Schur-algorithm interpolant ``h = norm * s`` with ``|s| <= 1`` in the disc.

    ``parameters[k]`` is the value peeled off at ``nodes[k]``; the final
    stage is the constant ``parameters[-1]``.
    """

    nodes: np.ndarray
    parameters: np.ndarray
    norm: float
    minimal: float = 0.0
    residual: float = field(default=0.0)

    def __call__(self, z):
        return self.oracle()(z)

    def _eval(self, Z):
        s = self.parameters[-1] + 0.0 * Z
        for a, u in zip(self.nodes[-2::-1], self.parameters[-2::-1]):
            phi = (Z - a) / (1.0 - np.conj(a) * Z)
            ps = phi * s
            s = (ps + u) / (1.0 + np.conj(u) * ps)
        return s * self.norm

    def oracle(self):
        return Analytic(self._eval, radius=_pole_radius(self.nodes), name="pick_interpolant")


def _pole_radius(nodes):
    poles = np.array([1.0 / np.conj(a) for a in nodes if a != 0])

    def radius(z):
        z = np.asarray(z, dtype=complex)
        d = np.maximum(1.0 - np.abs(z), 0.0)
        if poles.size == 0:
            return d
        return np.minimum(np.min(np.abs(z[..., None] - poles), axis=-1), np.inf)

    return radius


def schur_parameters(nodes, values):
    """Schur recursion for unimodular-bounded data ``values`` (all ``|values| < 1``)."""
    z = np.array(nodes, dtype=complex)
    u = np.array(values, dtype=complex)
    params = []
    for k in range(len(z)):
        if abs(u[0]) >= 1.0:
            raise ArithmeticError("Schur parameter reached the unit circle; the data are not strictly feasible")
        a, c = z[0], u[0]
        params.append(c)
        if len(z) == 1:
            break
        rest, vals = z[1:], u[1:]
        num = (vals - c) / (1.0 - np.conj(c) * vals)
        phi = (rest - a) / (1.0 - np.conj(a) * rest)
        z, u = rest, num / phi
    return np.array(params)


def pick_solve(problem, headroom=HEADROOM):
    """Minimal norm and an interpolant of norm ``headroom * c*``.

    Returns ``(h, c_star)`` where ``h`` is a :class:`SchurInterpolant`
    (``h.oracle()`` is the analytic oracle).
    """
    c_star = minimal_norm(problem)
    if problem.norm_cap is not None and c_star > problem.norm_cap:
        raise ValueError(f"minimal norm {c_star:.6g} exceeds the cap {problem.norm_cap:.6g}")
    if c_star == 0.0:
        h = SchurInterpolant(problem.nodes, np.zeros(1, dtype=complex), 0.0, 0.0)
        return h, 0.0
    norm = headroom * c_star
    params = schur_parameters(problem.nodes, problem.targets / norm)
    # the nodes after the last peeled one are not needed; keep them aligned
    h = SchurInterpolant(problem.nodes[: len(params)], params, norm, c_star)
    vals = h._eval(problem.nodes)
    h.residual = float(np.max(np.abs(vals - problem.targets)))
    return h, c_star


def brute_force_norm(problem, tol=1e-13):
    """Root of ``lambda_min(P(c)) = 0`` by Brent's method (independent of the bisection)."""
    from scipy.optimize import brentq

    v = problem.targets
    lo = float(np.max(np.abs(v)))
    if lo == 0.0:
        return 0.0

    def lam(c):
        return float(np.linalg.eigvalsh(pick_matrix(problem, c))[0])

    hi = 2.0 * lo
    while lam(hi) <= 0:
        hi *= 2.0
    if lam(lo) >= 0:
        return lo
    return brentq(lam, lo, hi, xtol=tol * hi, rtol=4 * np.finfo(float).eps, maxiter=500)
