import numpy as np
import pytest

from disc_osc.hyperbolic import pseudo_distance
from disc_osc.pick import (
    InterpolationProblem,
    PickConditioningError,
    brute_force_norm,
    generalized_norm,
    is_positive_definite,
    kernel_condition,
    minimal_norm,
    pick_matrix,
    pick_solve,
    schur_parameters,
)


def random_problem(rng, n, r_max=0.95):
    z = r_max * np.sqrt(rng.uniform(size=n)) * np.exp(2j * np.pi * rng.uniform(size=n))
    v = rng.normal(size=n) + 1j * rng.normal(size=n)
    return InterpolationProblem(z, v)


def test_bisection_matches_brute_force_and_eigenproblem(rng):
    for _ in range(300):
        p = random_problem(rng, int(rng.integers(1, 6)))
        c = minimal_norm(p)
        assert brute_force_norm(p) == pytest.approx(c, rel=1e-6)
        assert generalized_norm(p) == pytest.approx(c, rel=1e-6)


def test_pick_matrix_changes_sign_at_minimal_norm(rng):
    for _ in range(100):
        p = random_problem(rng, int(rng.integers(2, 6)))
        c = minimal_norm(p)
        assert is_positive_definite(pick_matrix(p, c * (1 + 1e-6)))
        assert not is_positive_definite(pick_matrix(p, c * (1 - 1e-3)))


def test_interpolant_hits_targets_and_respects_norm(rng):
    circle = 0.999 * np.exp(2j * np.pi * np.arange(2000) / 2000)
    for _ in range(100):
        p = random_problem(rng, int(rng.integers(1, 6)))
        h, c = pick_solve(p)
        assert h.residual < 1e-8
        assert np.allclose(h(p.nodes), p.targets, atol=1e-8)
        assert h.norm == pytest.approx(1.05 * c)
        assert np.max(np.abs(h(circle))) <= h.norm * (1 + 1e-9)


def test_schwarz_lemma_two_nodes(rng):
    for _ in range(50):
        z1, z2 = 0.9 * np.sqrt(rng.uniform(size=2)) * np.exp(2j * np.pi * rng.uniform(size=2))
        t = complex(*rng.normal(size=2))
        _, c = pick_solve(InterpolationProblem([z1, z2], [0, t]))
        assert c == pytest.approx(abs(t) / pseudo_distance(z1, z2), abs=1e-9)


def test_single_node_and_zero_data():
    h, c = pick_solve(InterpolationProblem([0.3], [0.5]))
    assert c == pytest.approx(0.5)
    assert h(-0.7j) == pytest.approx(0.5)
    h, c = pick_solve(InterpolationProblem([0.1, 0.2], [0, 0]))
    assert c == 0.0 and h(0.5) == 0


def test_schur_parameters_reject_infeasible():
    with pytest.raises(ArithmeticError):
        schur_parameters([0.0, 0.5], [0.0, 0.9])


def test_problem_validation():
    with pytest.raises(ValueError):
        InterpolationProblem([0.1, 0.1], [1, 2])
    with pytest.raises(ValueError):
        InterpolationProblem([0.1, 0.2], [1])
    with pytest.raises(ValueError):
        pick_solve(InterpolationProblem([0.0], [5.0], norm_cap=1.0))


def test_dyadic_nodes_are_well_conditioned(rng):
    zs = 1 - 2.0 ** -np.arange(1, 16)
    p = InterpolationProblem(zs, rng.normal(size=15))
    assert kernel_condition(p) < 1e6
    h, _ = pick_solve(p)
    assert h.residual < 1e-10


def test_clustered_nodes_raise_conditioning_error():
    zs = 0.5 + 1e-7 * np.arange(6)
    with pytest.raises(PickConditioningError):
        minimal_norm(InterpolationProblem(zs, np.arange(6.0)))
