import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from disc_osc.constructions import (
    build_bmoa_interpolant,
    build_nonnormal_witness,
    build_prescribed_values_witness,
    default_direction,
    dyadic_separation_constant,
    dyadic_zeros,
    example_blaschke_quotient,
    example_gamma,
    example_q,
    gamma_gap,
    gamma_zero,
    lappan_function,
    q_gap_asymptotic,
    q_zero,
    removability_check,
    zero_free_count,
)
from disc_osc.hyperbolic import hyperbolic_distance
from disc_osc.kernel import BlaschkeProduct, separation_constant
from disc_osc.verifiers import disc_samples


@given(st.floats(0.2, 5.0), st.integers(1, 8))
def test_gamma_zero_formula_and_gap(gamma, n):
    e = math.exp(math.pi * n / gamma)
    assert gamma_zero(gamma, n) == pytest.approx((e - 1) / (e + 1), rel=1e-15)
    # rounding of 1 - zeta limits the gap accuracy near the circle
    if 1.0 - gamma_zero(gamma, n + 1) > 1e-9:
        assert gamma_gap(gamma, n) == pytest.approx(math.pi / (2 * gamma), rel=1e-6)


@pytest.mark.parametrize("gamma", [0.5, 1.0, 2.0])
def test_gamma_example_solves_equation(gamma):
    W = example_gamma(gamma)
    assert W.residual() < 1e-12
    zs = W.zeros(range(1, 4))
    assert np.max(np.abs(W.f(zs))) < 1e-12
    with pytest.raises(ValueError):
        example_gamma(0.0)


def test_q_zeros_and_asymptotic_gap():
    assert q_zero(2.0, 1) == pytest.approx(0.5381217, abs=1e-7)
    assert q_zero(2.0, 1) == pytest.approx(1 - math.exp(1 - math.sqrt(math.pi)), rel=1e-15)
    n = 100
    gap = hyperbolic_distance(q_zero(2.0, n), q_zero(2.0, n + 1))
    assert gap == pytest.approx(q_gap_asymptotic(2.0, n), rel=1e-2)


def test_q_example_solves_equation():
    W = example_q(2.0)
    assert W.residual() < 1e-10
    zs = W.zeros(range(1, 6))
    assert np.max(np.abs(W.f(zs))) < 1e-12
    assert W.gauge.known_K == pytest.approx(math.log(2 * math.e))
    with pytest.raises(ValueError):
        example_q(1.0)


def test_blaschke_quotient_example():
    W = example_blaschke_quotient([0.3, 0.3, -0.5])
    assert W.residual() < 1e-12
    # |B| < 1 keeps B + 2 away from zero, so f has no zeros
    assert zero_free_count(W.f, 0.99) == 0


def test_dyadic_separation_constants():
    delta = dyadic_separation_constant()
    assert delta == pytest.approx(0.0146711, abs=1e-7)
    d15, p15 = separation_constant(BlaschkeProduct(dyadic_zeros(15)))
    assert d15 == pytest.approx(0.0154956, abs=1e-7)
    assert p15 == pytest.approx(d15, rel=1e-10)
    # more points can only lower the infimum
    assert delta < d15


def test_bmoa_interpolant_matches_derivatives(rng):
    zs = dyadic_zeros(8)
    w = rng.normal(size=8) / (1 - zs**2)
    interp = build_bmoa_interpolant(zs, w)
    assert np.max(interp.residuals) < 1e-8
    assert default_direction(zs) == 1.0
    assert np.max(np.abs(interp.nu)) <= interp.nu_bound
    with pytest.raises(ValueError):
        build_bmoa_interpolant(zs, w, xi=0.5)


def test_nonnormal_witness(dyadic_witness):
    W = dyadic_witness
    assert np.max(W.metadata["interpolation_residuals"]) < 1e-8
    assert W.residual(disc_samples(500, 0.95)) < 1e-8
    assert removability_check(W.A, W.metadata["zeros"]) < 1e-6
    # A is finite near and at the prescribed zeros
    z = W.metadata["zeros"]
    assert np.all(np.isfinite(W.A(z)))


def test_removability_check_detects_pole():
    W = build_nonnormal_witness(dyadic_zeros(4))
    A = W.A

    class Broken:
        # the unregularised expression with the Taylor data of a simple pole
        def jet(self, z, order, scale=1.0):
            return A.jet(z, order, scale)

        def direct(self, z):
            return A.direct(z) + 1e-3 / (np.asarray(z) - W.metadata["zeros"][0])

    assert removability_check(Broken(), W.metadata["zeros"][:1]) > 1e-3


def test_prescribed_values_witness():
    al = 1 - 2.0 ** -np.arange(1, 6)
    W = build_prescribed_values_witness(al, -al, 2.0, -3.0 + 1j)
    assert np.allclose(W.f(al), 2.0, atol=1e-7)
    assert np.allclose(W.f(-al), -3.0 + 1j, atol=1e-7)
    assert W.residual(disc_samples(300, 0.95)) < 1e-8
    assert zero_free_count(W.f, 0.999) == 0
    with pytest.raises(ValueError):
        build_prescribed_values_witness(al, -al, 1.0, 1.0)
    with pytest.raises(ValueError):
        build_prescribed_values_witness(al, al + 1e-9, 1.0, 2.0)


def test_lappan_function():
    w = lappan_function()
    assert w(0.0) == 0
    assert np.isfinite(w(1 - 1e-12))
