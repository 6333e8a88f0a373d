"""Gamma-family functions and the generalized hypergeometric series.

Everything here works on Python ``complex`` scalars.  The hypergeometric
series is summed directly inside the unit disk; on the unit circle at
``z = 1`` the slowly converging tail is replaced by its asymptotic
expansion, which is a short sum of Hurwitz zeta values.
"""

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .errors import ConvergenceError, DomainError, PoleError, PreconditionError

log = logging.getLogger(__name__)

EULER_GAMMA = 0.57721566490153286061

# Lanczos approximation, g = 7, n = 9.
_LANCZOS_G = 7.0
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)

DEFAULT_MAX_TERMS = 100_000
DEFAULT_TOL = 1e-15


@lru_cache(maxsize=None)
def bernoulli_numbers(n: int) -> tuple[Fraction, ...]:
    """Exact Bernoulli numbers B_0..B_n (convention B_1 = -1/2)."""
    B = [Fraction(0)] * (n + 1)
    B[0] = Fraction(1)
    for m in range(1, n + 1):
        B[m] = -sum(math.comb(m + 1, k) * B[k] for k in range(m)) / (m + 1)
    return tuple(B)


_BN = tuple(float(b) for b in bernoulli_numbers(60))


def _is_nonpositive_integer(x: complex, tol: float = 0.0) -> bool:
    x = complex(x)
    if abs(x.imag) > tol or x.real > tol:
        return False
    return abs(x.real - round(x.real)) <= tol


def _lanczos_sum(z: complex) -> complex:
    # z is the shifted argument (Gamma(z + 1) form)
    acc = _LANCZOS[0]
    for i in range(1, len(_LANCZOS)):
        acc += _LANCZOS[i] / (z + i)
    return acc


def gamma(z: complex) -> complex:
    """Gamma function via Lanczos with reflection for Re z < 1/2."""
    z = complex(z)
    if _is_nonpositive_integer(z):
        raise PoleError(f"gamma has a pole at {z}")
    if z.real < 0.5:
        return math.pi / (cmath.sin(math.pi * z) * gamma(1.0 - z))
    z -= 1.0
    t = z + _LANCZOS_G + 0.5
    return math.sqrt(2.0 * math.pi) * t ** (z + 0.5) * cmath.exp(-t) * _lanczos_sum(z)


def loggamma(z: complex) -> complex:
    """A logarithm of Gamma(z); the branch is not normalized.

    Only ``exp(loggamma(z))`` is meaningful.  Used where Gamma itself
    would overflow.
    """
    z = complex(z)
    if _is_nonpositive_integer(z):
        raise PoleError(f"gamma has a pole at {z}")
    if z.real < 0.5:
        return math.log(math.pi) - cmath.log(cmath.sin(math.pi * z)) - loggamma(1.0 - z)
    z -= 1.0
    t = z + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * cmath.log(t) - t + cmath.log(_lanczos_sum(z))


def rgamma(z: complex) -> complex:
    """1/Gamma(z), zero at the poles of Gamma."""
    if _is_nonpositive_integer(z):
        return 0j
    return 1.0 / gamma(z)


def digamma(x: complex) -> complex:
    """psi(x) = Gamma'(x)/Gamma(x).

    Upward recurrence to Re(x) >= 10, then the asymptotic series; the
    reflection formula handles Re(x) < 1/2.
    """
    x = complex(x)
    if _is_nonpositive_integer(x):
        raise PoleError(f"digamma has a pole at {x}")
    if x.real < 0.5:
        return digamma(1.0 - x) - math.pi / cmath.tan(math.pi * x)
    acc = 0j
    while x.real < 10.0:
        acc -= 1.0 / x
        x += 1.0
    inv2 = 1.0 / (x * x)
    series = 0j
    p = inv2
    for k in range(1, 12):
        series += _BN[2 * k] / (2 * k) * p
        p *= inv2
    return acc + cmath.log(x) - 0.5 / x - series


def pochhammer(alpha: complex, k: int) -> complex:
    """Rising factorial (alpha)_k with (alpha)_0 = 1."""
    if k < 0:
        raise DomainError("pochhammer needs k >= 0")
    out = 1.0 + 0j
    alpha = complex(alpha)
    for j in range(k):
        out *= alpha + j
    return out


@dataclass(frozen=True)
class HyperParams:
    """Parameters of a (q+1)F(q) series."""

    numerator: tuple[complex, ...]
    denominator: tuple[complex, ...]

    def __init__(self, numerator: Sequence[complex], denominator: Sequence[complex]):
        num = tuple(complex(a) for a in numerator)
        den = tuple(complex(b) for b in denominator)
        if len(den) < 1 or len(num) != len(den) + 1:
            raise PreconditionError(
                f"need q+1 numerator and q >= 1 denominator parameters, got {len(num)}, {len(den)}"
            )
        for b in den:
            if _is_nonpositive_integer(b):
                raise PreconditionError(f"denominator parameter {b} is a nonpositive integer")
        object.__setattr__(self, "numerator", num)
        object.__setattr__(self, "denominator", den)

    @property
    def q(self) -> int:
        return len(self.denominator)

    @property
    def s(self) -> complex:
        """sum(beta) - sum(alpha); the series converges on |z| = 1 iff Re(s) > 0."""
        return sum(self.denominator) - sum(self.numerator)

    def terminating_degree(self) -> int | None:
        """Degree of the polynomial if some numerator is a nonpositive integer."""
        degs = [int(-round(a.real)) for a in self.numerator if _is_nonpositive_integer(a)]
        return min(degs) if degs else None


def _series_terms_ratio(num, den, k):
    r = 1.0 + 0j
    for a in num:
        r *= a + k
    d = complex(k + 1)
    for b in den:
        d *= b + k
    return r / d


def hurwitz_zeta(p: complex, a: float, terms: int = 14) -> complex:
    """Hurwitz zeta(p, a) for Re p > 1 and a >= 30 by Euler-Maclaurin.

    Only the large-``a`` regime is needed here, so no leading direct sum
    is taken.
    """
    if a < 30:
        head = sum((a + k) ** (-p) for k in range(30))
        return head + hurwitz_zeta(p, a + 30, terms)
    out = a ** (1 - p) / (p - 1) + 0.5 * a ** (-p)
    poch = complex(p)
    ap = a ** (-p - 1)
    for j in range(1, terms + 1):
        if j > 1:
            poch *= (p + 2 * j - 3) * (p + 2 * j - 2)
            ap /= a * a
        out += _BN[2 * j] / math.factorial(2 * j) * poch * ap
    return out


def _bernoulli_poly(m: int, a: complex) -> complex:
    return sum(math.comb(m, k) * _BN[k] * a ** (m - k) for k in range(m + 1))


def _sum_at_unity(params: HyperParams, n_expand: int = 20) -> complex:
    """Sum the series at z = 1 (requires Re s > 0).

    The first N terms are added directly.  For k >= N the term equals
    K * k^(-s-1) * (1 + d_1/k + d_2/k^2 + ...), where log of the bracket
    comes from the Bernoulli-polynomial expansion of log Gamma ratios, so
    the tail is K * sum_n d_n * zeta(s + 1 + n, N).
    """
    num, den = params.numerator, params.denominator
    scale = max([abs(x) for x in num + den] + [1.0])
    head_n = 64 + int(8 * scale)
    total = 0j
    t = 1.0 + 0j
    for k in range(head_n):
        total += t
        t *= _series_terms_ratio(num, den, k)
    s = params.s
    den_all = den + (1.0 + 0j,)
    e = [0j] * (n_expand + 1)
    for n in range(1, n_expand + 1):
        bsum = sum(_bernoulli_poly(n + 1, a) for a in num) - sum(
            _bernoulli_poly(n + 1, b) for b in den_all
        )
        e[n] = (-1) ** (n + 1) * bsum / (n * (n + 1))
    d = [1.0 + 0j] + [0j] * n_expand
    for n in range(1, n_expand + 1):
        d[n] = sum(k * e[k] * d[n - k] for k in range(1, n + 1)) / n
    K = cmath.exp(sum(loggamma(b) for b in den) - sum(loggamma(a) for a in num))
    tail = K * sum(d[n] * hurwitz_zeta(s + 1 + n, head_n) for n in range(n_expand + 1))
    return total + tail


def hyper(
    params: HyperParams,
    z: complex,
    *,
    max_terms: int = DEFAULT_MAX_TERMS,
    tol: float = DEFAULT_TOL,
) -> complex:
    """Generalized hypergeometric series (q+1)F(q)(alpha; beta; z).

    Inside the disk the partial sums run until the estimated tail is below
    ``tol * |sum|`` for three consecutive terms, or until ``max_terms``.
    At z = 1 with Re(s) > 0 an asymptotic tail replaces the slow sum.
    """
    z = complex(z)
    az = abs(z)
    num, den = params.numerator, params.denominator
    deg = params.terminating_degree()
    if deg is None and az > 1.0 + 1e-12:
        raise DomainError(f"|z| = {az} > 1: series diverges (no continuation provided)")
    on_circle = abs(az - 1.0) <= 1e-12
    if deg is None and on_circle:
        if params.s.real <= 0:
            raise ConvergenceError(f"series diverges on |z| = 1 with Re(s) = {params.s.real} <= 0")
        if abs(z - 1.0) <= 1e-12:
            return _sum_at_unity(params)
    if z == 0:
        return 1.0 + 0j

    total = 0j
    t = 1.0 + 0j
    small = 0
    k = 0
    limit = max_terms if deg is None else deg + 1
    while k < limit:
        total += t
        t_next = t * _series_terms_ratio(num, den, k) * z
        if t_next == 0:
            return total
        if deg is None:
            at = abs(t_next)
            rho = max(at / abs(t) if t != 0 else 0.0, az)
            bound = at * rho / (1.0 - rho) + at if rho < 1.0 else math.inf
            if bound < tol * abs(total):
                small += 1
                if small >= 3:
                    return total + t_next
            else:
                small = 0
        t = t_next
        k += 1
    if deg is not None:
        return total
    if on_circle:
        raise ConvergenceError(f"term cap {max_terms} reached on |z| = 1")
    log.warning("hyper: term cap %d reached at z=%s; returning partial sum", max_terms, z)
    return total


def hyp2f1(a: complex, b: complex, c: complex, z: complex, **kw) -> complex:
    return hyper(HyperParams((a, b), (c,)), z, **kw)


def hyp3f2(a1: complex, a2: complex, a3: complex, b1: complex, b2: complex, z: complex, **kw) -> complex:
    return hyper(HyperParams((a1, a2, a3), (b1, b2)), z, **kw)


def gauss_sum_at_1(a: complex, b: complex, c: complex) -> complex:
    """Gauss's closed form for 2F1(a, b; c; 1), valid for Re(c - a - b) > 0."""
    a, b, c = complex(a), complex(b), complex(c)
    if (c - a - b).real <= 0:
        raise DomainError("Gauss's formula needs Re(c - a - b) > 0")
    for x in (c, c - a, c - b):
        if _is_nonpositive_integer(x):
            raise DomainError(f"gamma argument {x} is a nonpositive integer")
    if a == 0 or b == 0:
        return 1.0 + 0j
    return gamma(c) * gamma(c - a - b) / (gamma(c - a) * gamma(c - b))


def threeF2_unit_value(a: complex, c: complex) -> complex:
    """3F2(1, 1, a; 2, c; 1) = (c-1)/(a-1) * [psi(c-1) - psi(c-a)]."""
    a, c = complex(a), complex(c)
    if a == 1:
        raise DomainError("closed form needs a != 1")
    if (c - a).real <= 0:
        raise DomainError("closed form needs Re(c - a) > 0")
    return (c - 1) / (a - 1) * (digamma(c - 1) - digamma(c - a))


def _whipple_map(w: complex) -> complex:
    return -4.0 * w / (1.0 - w) ** 2


def in_whipple_region(w: complex, boundary_ok: bool = False) -> bool:
    """Inside the loop of |4w| = |1-w|^2 that surrounds the origin."""
    w = complex(w)
    if abs(w) >= 1.0:
        return False
    r = abs(_whipple_map(w))
    return r < 1.0 or (boundary_ok and r <= 1.0 + 1e-12)


def in_whipple2_region(w: complex, boundary_ok: bool = False) -> bool:
    """Inside |w| < 1 and the origin loop of |4w(1-w)| = 1."""
    w = complex(w)
    if abs(w) >= 1.0 or w.real > 0.5 + 1e-12:
        return False
    r = abs(4.0 * w * (1.0 - w))
    return r < 1.0 or (boundary_ok and r <= 1.0 + 1e-12)


def whipple_residual(a: complex, b: complex, c: complex, w: complex) -> float:
    """|LHS - RHS| of Whipple's quadratic transformation for 3F2."""
    a, b, c, w = complex(a), complex(b), complex(c), complex(w)
    lhs_p = HyperParams((a, b, c), (a - b + 1, a - c + 1))
    rhs_p = HyperParams((a - b - c + 1, a / 2, (a + 1) / 2), (a - b + 1, a - c + 1))
    if not in_whipple_region(w, boundary_ok=rhs_p.s.real > 0):
        raise DomainError(f"w = {w} lies outside the convergence loop of the transformation")
    lhs = hyper(lhs_p, w)
    rhs = (1.0 - w) ** (-a) * hyper(rhs_p, _whipple_map(w))
    return abs(lhs - rhs)


def whipple2_residual(a: complex, b: complex, c: complex, w: complex) -> float:
    """|LHS - RHS| of the quadratic transformation with argument 4w(1-w).

    Requires one of a, b, c to equal 1.
    """
    a, b, c, w = complex(a), complex(b), complex(c), complex(w)
    if 1 not in (a, b, c):
        raise PreconditionError("the transformation needs one of a, b, c equal to 1")
    half = (a + b + c) / 2
    if _is_nonpositive_integer(half):
        raise PreconditionError("(a+b+c)/2 must not be a nonpositive integer")
    lhs_p = HyperParams((a, b, c), (2, half))
    rhs_p = HyperParams(((a + 1) / 2, (b + 1) / 2, (c + 1) / 2), (2, half))
    if not in_whipple2_region(w, boundary_ok=rhs_p.s.real > 0):
        raise DomainError(f"w = {w} lies outside the region of the transformation")
    lhs = hyper(lhs_p, w)
    rhs = (1.0 - w) * hyper(rhs_p, 4.0 * w * (1.0 - w))
    return abs(lhs - rhs)
