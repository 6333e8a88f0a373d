"""Equianharmonic Weierstrass functions (g2 = 0, g3 = 1).

The period lattice is triangular.  Arguments are first reduced to the
nearest lattice point, which leaves |u| <= rho = 2*omega2/sqrt(3), a
factor 1/sqrt(3) inside the radius of convergence of the Laurent series
about 0.  Every series below is therefore in powers of u^6 shrinking by
1/27 per term.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

from .errors import DomainError, PoleError
from .specfun import gamma

SQRT3 = math.sqrt(3.0)
POLE_TOL = 1e-9
# Laurent coefficients kept: u^(6j - 2) for j = 1..N_TERMS.
N_TERMS = 30


@dataclass(frozen=True)
class EquianharmonicContext:
    """Half-periods, triangle vertex and cached series coefficients."""

    omega2: float
    omega: complex
    omega_prime: complex
    W0: complex
    wp_coeffs: tuple[float, ...]  # c_k of wp = 1/u^2 + sum_k c_k u^(2k-2), index k
    sigma_coeffs: tuple[float, ...]  # sigma(u) = sum_j s_j u^(6j+1)
    eta: complex
    eta_prime: complex

    @property
    def rho(self) -> float:
        """Side length of the equilateral triangle 0, conj(W0), W0."""
        return 2.0 * self.omega2 / SQRT3

    @property
    def periods(self) -> tuple[complex, complex]:
        return 2.0 * self.omega, 2.0 * self.omega_prime


def _laurent_coeffs(n_terms: int) -> list[float]:
    kmax = 3 * n_terms
    c = [0.0] * (kmax + 1)
    c[2] = 0.0  # g2 / 20
    c[3] = 1.0 / 28.0  # g3 / 28
    for k in range(4, kmax + 1):
        acc = sum(c[m] * c[k - m] for m in range(2, k - 1))
        c[k] = 3.0 * acc / ((2 * k + 1) * (k - 3))
    return c


def _sigma_coeffs(a: list[float]) -> list[float]:
    # log(sigma(u)/u) = sum_j l_j v^j with v = u^6; exponentiate in v.
    n = len(a)
    lcoef = [0.0] + [-a[j - 1] / (6 * j * (6 * j - 1)) for j in range(1, n + 1)]
    e = [1.0] + [0.0] * n
    for m in range(1, n + 1):
        e[m] = sum(j * lcoef[j] * e[m - j] for j in range(1, m + 1)) / m
    return e


@lru_cache(maxsize=4)
def make_context(n_terms: int = N_TERMS) -> EquianharmonicContext:
    omega2 = (gamma(1.0 / 3.0).real ** 3) / (4.0 * math.pi)
    omega = complex(0.5, -SQRT3 / 2.0) * omega2
    c = _laurent_coeffs(n_terms)
    a = [c[3 * j] for j in range(1, n_terms + 1)]
    sig = _sigma_coeffs(a)
    proto = EquianharmonicContext(
        omega2=omega2,
        omega=omega,
        omega_prime=omega.conjugate(),
        W0=complex(1.0, SQRT3 / 3.0) * omega2,
        wp_coeffs=tuple(c),
        sigma_coeffs=tuple(sig),
        eta=0j,
        eta_prime=0j,
    )
    eta = _zeta_series(proto, omega)
    return EquianharmonicContext(
        omega2=proto.omega2,
        omega=proto.omega,
        omega_prime=proto.omega_prime,
        W0=proto.W0,
        wp_coeffs=proto.wp_coeffs,
        sigma_coeffs=proto.sigma_coeffs,
        eta=eta,
        eta_prime=eta.conjugate(),
    )


def default_context() -> EquianharmonicContext:
    return make_context(N_TERMS)


def _a(ctx: EquianharmonicContext) -> tuple[float, ...]:
    c = ctx.wp_coeffs
    return c[3::3]


def reduce_to_fundamental(ctx: EquianharmonicContext, w: complex) -> tuple[complex, tuple[int, int]]:
    """Reduce w modulo the lattice 2*omega*Z + 2*omega'*Z.

    Returns (u, (m, n)) with w = u + 2*m*omega + 2*n*omega' and u in the
    hexagonal cell of points nearer to 0 than to any other lattice point.
    """
    w = complex(w)
    p1, p2 = ctx.periods
    det = p1.real * p2.imag - p1.imag * p2.real
    x = (w.real * p2.imag - w.imag * p2.real) / det
    y = (p1.real * w.imag - p1.imag * w.real) / det
    m0, n0 = math.floor(x), math.floor(y)
    best = None
    for m in (m0 - 1, m0, m0 + 1, m0 + 2):
        for n in (n0 - 1, n0, n0 + 1, n0 + 2):
            u = w - m * p1 - n * p2
            key = (round(abs(u), 12), m, n)
            if best is None or key < best[0]:
                best = (key, u, m, n)
    _, u, m, n = best
    return u, (m, n)


def _reduced(ctx, w):
    u, mn = reduce_to_fundamental(ctx, w)
    if abs(u) < POLE_TOL:
        raise PoleError(f"w = {w} is within {POLE_TOL} of a lattice point")
    return u, mn


def _wp_series(ctx, u: complex) -> complex:
    a = _a(ctx)
    v = u ** 6
    acc = 0j
    for j in range(len(a), 0, -1):
        acc = acc * v + a[j - 1]
    return 1.0 / (u * u) + acc * u ** 4


def _wp_prime_series(ctx, u: complex) -> complex:
    a = _a(ctx)
    v = u ** 6
    acc = 0j
    for j in range(len(a), 0, -1):
        acc = acc * v + (6 * j - 2) * a[j - 1]
    return -2.0 / u ** 3 + acc * u ** 3


def _zeta_series(ctx, u: complex) -> complex:
    a = _a(ctx)
    v = u ** 6
    acc = 0j
    for j in range(len(a), 0, -1):
        acc = acc * v + a[j - 1] / (6 * j - 1)
    return 1.0 / u - acc * u ** 5


def _log_sigma_over_u(ctx, u: complex) -> complex:
    a = _a(ctx)
    v = u ** 6
    acc = 0j
    for j in range(len(a), 0, -1):
        acc = acc * v + a[j - 1] / (6 * j * (6 * j - 1))
    return -acc * v


def wp(ctx: EquianharmonicContext, w: complex) -> complex:
    """Weierstrass p(w; 0, 1)."""
    u, _ = _reduced(ctx, w)
    return _wp_series(ctx, u)


def wp_prime(ctx: EquianharmonicContext, w: complex) -> complex:
    """Derivative of wp; satisfies wp'^2 = 4 wp^3 - 1."""
    u, _ = _reduced(ctx, w)
    return _wp_prime_series(ctx, u)


def wp_double_prime(ctx: EquianharmonicContext, w: complex) -> complex:
    # (wp')' = 6 wp^2 - g2/2 with g2 = 0
    return 6.0 * wp(ctx, w) ** 2


def zeta(ctx: EquianharmonicContext, w: complex) -> complex:
    """Weierstrass zeta, with zeta' = -wp and zeta(u + 2 omega) = zeta(u) + 2 eta."""
    u, (m, n) = _reduced(ctx, w)
    return _zeta_series(ctx, u) + 2 * m * ctx.eta + 2 * n * ctx.eta_prime


def sigma(ctx: EquianharmonicContext, w: complex) -> complex:
    """Weierstrass sigma, entire, with simple zeros on the lattice."""
    w = complex(w)
    u, (m, n) = reduce_to_fundamental(ctx, w)
    if u == 0:
        return 0j
    v = u ** 6
    acc = 0j
    s = ctx.sigma_coeffs
    for j in range(len(s) - 1, -1, -1):
        acc = acc * v + s[j]
    val = u * acc
    if m == 0 and n == 0:
        return val
    shift = 2 * m * ctx.eta + 2 * n * ctx.eta_prime
    half = m * ctx.omega + n * ctx.omega_prime
    sign = -1 if (m + n + m * n) % 2 else 1
    return sign * cmath.exp(shift * (u + half)) * val


def in_triangle(ctx: EquianharmonicContext, w: complex, tol: float = 1e-9) -> bool:
    """Closed equilateral triangle 0, conj(W0), W0 (enlarged by tol)."""
    w = complex(w)
    # edges: AB at angle -pi/6, CA at angle +pi/6, BC the line Re w = omega2
    rot_up = w * cmath.exp(-1j * math.pi / 6)
    rot_dn = w * cmath.exp(1j * math.pi / 6)
    return w.real <= ctx.omega2 + tol and rot_up.imag <= tol and rot_dn.imag >= -tol


def log_sigma(ctx: EquianharmonicContext, w: complex, *, region: str = "triangle") -> complex:
    """Principal-branch Log sigma(w).

    ``region="triangle"`` (default) only accepts the closed triangle
    0, conj(W0), W0, where the branch is the one continuous from
    Log sigma(w) ~ Log w near 0.  ``region="disk"`` accepts any
    |w| <= rho with Re w > 0 and applies the same recipe.
    """
    w = complex(w)
    if abs(w) < POLE_TOL:
        raise PoleError("Log sigma diverges at 0")
    if region == "triangle":
        if not in_triangle(ctx, w):
            raise DomainError(f"w = {w} is outside the triangle where the Log sigma branch is fixed")
    elif region == "disk":
        if abs(w) > ctx.rho * (1 + 1e-12) or w.real <= 0:
            raise DomainError(f"w = {w} is outside the branch-safe half disk")
    else:
        raise ValueError(f"unknown region {region!r}")
    val = cmath.log(w) + _log_sigma_over_u(ctx, w)
    im = val.imag
    if im <= -math.pi or im > math.pi:
        im = math.remainder(im, 2 * math.pi)
        val = complex(val.real, im)
    return val
