import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from disc_osc import jet as J
from disc_osc.jet import Jet, shift

small = st.floats(-1.0, 1.0)
cplx = st.builds(complex, small, small)


def random_jet(rng, order, batch=()):
    c = rng.normal(size=(order + 1,) + batch) + 1j * rng.normal(size=(order + 1,) + batch)
    return Jet(c)


def test_product_matches_convolution(rng):
    # 1000 seeded cases against numpy's polynomial convolution
    for _ in range(1000):
        n = int(rng.integers(1, 12))
        a, b = random_jet(rng, n), random_jet(rng, n)
        ref = np.convolve(a.coeffs, b.coeffs)[: n + 1]
        assert np.allclose((a * b).coeffs, ref, rtol=1e-12, atol=1e-12)


def test_division_inverts_product(rng):
    for _ in range(200):
        n = int(rng.integers(1, 10))
        a, b = random_jet(rng, n), random_jet(rng, n)
        b.coeffs[0] += 3.0
        assert np.allclose(((a * b) / b).coeffs, a.coeffs, atol=1e-10)


def test_batched_product_matches_scalar(rng):
    a, b = random_jet(rng, 6, (4, 3)), random_jet(rng, 6, (4, 3))
    out = (a * b).coeffs
    for i in range(4):
        for j in range(3):
            ref = np.convolve(a.coeffs[:, i, j], b.coeffs[:, i, j])[:7]
            assert np.allclose(out[:, i, j], ref)


def test_exp_taylor_coefficients():
    z = Jet.variable(0.3, 8)
    c = J.exp(z).taylor()
    ref = np.exp(0.3) / np.array([math.factorial(k) for k in range(9)])
    assert np.allclose(c, ref, rtol=1e-14)


@given(cplx)
def test_exp_log_roundtrip(z0):
    z = Jet.variable(z0 + 2.0, 7)
    assert np.allclose(J.exp(J.log(z)).coeffs, z.coeffs, atol=1e-12)


@given(cplx)
def test_sin_cos_identity(z0):
    z = Jet.variable(z0, 9)
    one = J.sin(z) * J.sin(z) + J.cos(z) * J.cos(z)
    assert np.allclose(one.coeffs, [1] + [0] * 9, atol=1e-12)


@given(cplx, st.floats(-2.5, 2.5))
def test_power_matches_repeated_product(z0, alpha):
    z = Jet.variable(z0 + 3.0, 6)
    p = J.power(z, alpha) * J.power(z, 1.0 - alpha)
    assert np.allclose(p.coeffs, z.coeffs, atol=1e-10)


def test_geometric_series_and_derivatives():
    z = Jet.variable(0.5, 6, 0.25)
    g = 1.0 / (1.0 - z)
    # taylor coefficients of 1/(1-z) at 1/2 are 2^(k+1)
    assert np.allclose(g.taylor(), 2.0 ** np.arange(1, 8))
    d = g.derivatives()
    assert np.allclose(d, [math.factorial(k) * 2.0 ** (k + 1) for k in range(7)])
    assert np.allclose(g.deriv().taylor(), (1.0 / (1.0 - Jet.variable(0.5, 5)) ** 2).taylor())


def test_scale_only_rescales_coefficients():
    a = J.sin(Jet.variable(0.2 + 0.1j, 8, 1.0))
    b = J.sin(Jet.variable(0.2 + 0.1j, 8, 1e-3))
    assert np.allclose(a.taylor(), b.taylor(), rtol=1e-12)


@given(st.lists(cplx, min_size=1, max_size=10), cplx)
def test_shift_reexpands_polynomial(coeffs, t0):
    c = np.array(coeffs)
    s = shift(c, t0, len(c) - 1)
    for t in (0.0, 0.3, -0.2 + 0.5j):
        direct = np.polyval(c[::-1], t0 + t)
        assert np.polyval(s[::-1], t) == pytest.approx(direct, abs=1e-9)


def test_shift_broadcasts_over_centres():
    c = np.array([1.0, 2.0, 3.0])
    t0 = np.array([0.0, 1.0, -1.0])
    s = shift(c, t0, 2)
    assert s.shape == (3, 3)
    assert np.allclose(s[0], 1 + 2 * t0 + 3 * t0**2)
    assert np.allclose(s[1], 2 + 6 * t0)


def test_compose_chain_rule():
    inner = J.sin(Jet.variable(0.4, 6))
    outer = J.exp(Jet.variable(inner.value, 6))
    direct = J.exp(inner)
    assert np.allclose(J.compose(outer, inner).coeffs, direct.coeffs, atol=1e-13)


def test_plain_numbers_pass_through():
    assert J.exp(0.0) == 1.0
    assert J.log(1.0) == 0.0
    assert J.sqrt(4.0) == 2.0
