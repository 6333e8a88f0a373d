import cmath
import math

import mpmath as mp
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from critperc.elliptic import (
    in_triangle,
    log_sigma,
    make_context,
    reduce_to_fundamental,
    sigma,
    wp,
    wp_double_prime,
    wp_prime,
    zeta,
)
from critperc.errors import DomainError, PoleError

SQRT3 = math.sqrt(3)


def wp_oracle(u):
    """wp(u; 0, 1) from Jacobi sn with a complex parameter."""
    mp.mp.dps = 25
    e = [mp.mpf(4) ** (-mp.mpf(1) / 3) * mp.exp(2j * mp.pi * k / 3) for k in range(3)]
    e1, e2, e3 = e
    s = mp.ellipfun("sn", mp.sqrt(e1 - e3) * u, m=(e2 - e3) / (e1 - e3))
    return complex(e3 + (e1 - e3) / s**2)


def test_half_period(ctx):
    assert ctx.omega2 == pytest.approx(1.5299540370571942, rel=1e-15)
    assert ctx.W0 == pytest.approx(complex(1, 1 / SQRT3) * ctx.omega2)


def test_laurent_coefficients(ctx):
    # wp = 1/u^2 + u^4/28 + u^10/10192 + ...
    assert ctx.wp_coeffs[3] == pytest.approx(1 / 28)
    assert ctx.wp_coeffs[6] == pytest.approx(1 / 10192)


@pytest.mark.parametrize("u", [0.3 + 0.1j, 1.0, 0.7 - 0.4j, 1.2 + 0.5j, 2.9 + 1.1j, -3.3 + 4.0j])
def test_wp_against_jacobi_oracle(ctx, u):
    ref = wp_oracle(u)
    assert abs(wp(ctx, u) - ref) <= 1e-12 * max(1, abs(ref))


def test_special_values(ctx):
    assert wp(ctx, ctx.omega2).real == pytest.approx(4 ** (-1 / 3), abs=1e-14)
    assert abs(wp(ctx, ctx.W0)) < 1e-13
    assert abs(wp_prime(ctx, ctx.W0) - 1j) < 1e-13
    assert abs(wp_prime(ctx, ctx.omega2)) < 1e-13


def test_zeta_and_legendre(ctx):
    assert zeta(ctx, ctx.omega2).real == pytest.approx(math.pi / (2 * SQRT3 * ctx.omega2), rel=1e-14)
    lhs = ctx.eta * ctx.omega_prime - ctx.eta_prime * ctx.omega
    assert abs(abs(lhs) - math.pi / 2) < 1e-13


def test_log_sigma_values(ctx):
    ref = math.pi / (4 * SQRT3) + math.log(2) / 3 - math.log(3) / 4
    assert log_sigma(ctx, ctx.omega2).real == pytest.approx(ref, abs=1e-14)


def sigma_oracle(ctx, u):
    """sigma from the Jacobi theta product; eta from theta derivatives at 0."""
    mp.mp.dps = 25
    om = mp.mpc(ctx.omega)
    q = mp.exp(1j * mp.pi * mp.mpc(ctx.omega_prime) / om)
    d1 = mp.jtheta(1, 0, q, 1)
    eta = -mp.pi**2 * mp.jtheta(1, 0, q, 3) / (12 * om * d1)
    v = mp.pi * u / (2 * om)
    return complex(2 * om / mp.pi * mp.exp(eta * u**2 / (2 * om)) * mp.jtheta(1, v, q) / d1), complex(eta)


@pytest.mark.parametrize("u", [0.9 + 0.3j, 1.2 - 0.5j, 0.4 + 0.2j])
def test_sigma_against_theta_oracle(ctx, u):
    ref, eta = sigma_oracle(ctx, u)
    assert abs(sigma(ctx, u) - ref) <= 1e-13 * abs(ref)
    assert abs(ctx.eta - eta) < 1e-13
    assert abs(log_sigma(ctx, u) - cmath.log(ref)) < 1e-13


def test_ode_and_derivatives(ctx):
    for w in (0.4 + 0.2j, 1.1 - 0.3j, 0.8 + 0.6j):
        p, dp = wp(ctx, w), wp_prime(ctx, w)
        assert abs(dp * dp - (4 * p**3 - 1)) < 1e-12 * max(1, abs(dp) ** 2)
        h = 1e-5
        num = (wp(ctx, w + h) - wp(ctx, w - h)) / (2 * h)
        assert abs(num - dp) < 1e-6 * max(1, abs(dp))
        assert wp_double_prime(ctx, w) == pytest.approx(6 * p * p)


def test_periodicity(ctx):
    p1, p2 = ctx.periods
    for w in (0.4 + 0.2j, 1.1 - 0.3j):
        assert abs(wp(ctx, w + p1) - wp(ctx, w)) < 1e-12
        assert abs(wp(ctx, w + 2 * p2 - p1) - wp(ctx, w)) < 1e-11
        assert abs(zeta(ctx, w + p1) - zeta(ctx, w) - 2 * ctx.eta) < 1e-12
        ratio = sigma(ctx, w + p1) / sigma(ctx, w)
        assert abs(ratio + cmath.exp(2 * ctx.eta * (w + ctx.omega))) < 1e-11 * abs(ratio)


def test_reduce_and_poles(ctx):
    p1, p2 = ctx.periods
    u, (m, n) = reduce_to_fundamental(ctx, 0.2 + 0.1j + 3 * p1 - 2 * p2)
    assert (m, n) == (3, -2)
    assert abs(u - (0.2 + 0.1j)) < 1e-12
    with pytest.raises(PoleError):
        wp(ctx, p1)
    with pytest.raises(PoleError):
        log_sigma(ctx, 0)
    with pytest.raises(DomainError):
        log_sigma(ctx, -1.0)
    assert sigma(ctx, 0) == 0


def test_in_triangle(ctx):
    assert in_triangle(ctx, ctx.omega2 / 2)
    assert in_triangle(ctx, ctx.W0)
    assert not in_triangle(ctx, ctx.omega2 * 1.01)


def test_context_cache():
    assert make_context(30) is make_context(30)


@settings(max_examples=50, deadline=None)
@given(st.floats(0.05, 0.95), st.floats(0.05, 0.95))
def test_ode_on_triangle_property(ctx, u, v):
    if u + v > 0.95:
        return
    w = u * ctx.W0.conjugate() + v * ctx.W0
    p, dp = wp(ctx, w), wp_prime(ctx, w)
    assert abs(dp * dp - (4 * p**3 - 1)) <= 1e-11 * max(1.0, abs(dp) ** 2)
