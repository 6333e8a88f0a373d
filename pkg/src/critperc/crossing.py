"""Crossing functions of critical percolation.

Half-plane forms take the cross-ratio coordinate z of the boundary split
[-inf, 0], [0, z], [z, 1], [1, inf]; the triangle forms take a point w on
the side BC of the equilateral triangle 0, conj(W0), W0 (or on B'C' of the
isosceles triangle for the surrounding probability).
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

from numpy.polynomial import Polynomial

from . import numdiff
from .conformal import (
    isosceles_domain,
    schwarz_inverse,
    schwarz_S,
    segment_fraction,
    triangle_domain,
)
from .elliptic import EquianharmonicContext, default_context, log_sigma, wp_prime
from .errors import DomainError, ImaginaryResidueError, PreconditionError
from .specfun import gamma, hyp2f1, hyp3f2, threeF2_unit_value, whipple2_residual

SQRT3 = math.sqrt(3.0)
CLAMP = 1e-12

CARDY_NORM = 3.0 * gamma(2.0 / 3.0).real / gamma(1.0 / 3.0).real ** 2
WATTS_NORM = SQRT3 / (2.0 * math.pi)
SCHRAMM_NORM = gamma(2.0 / 3.0).real / (math.sqrt(math.pi) * gamma(1.0 / 6.0).real)

# Connection coefficients for 2F1(1/2, 5/6; 3/2; 1 - u) about u = 0.
_SURR_A = (gamma(1.5) * gamma(1.0 / 6.0) / gamma(2.0 / 3.0)).real
_SURR_B = (gamma(1.5) * gamma(-1.0 / 6.0) / (gamma(0.5) * gamma(5.0 / 6.0))).real

# Below this z, "auto" N_h uses the log identity instead of the slow series in 1 - z.
NH_SERIES_MIN_Z = 1e-3
IMAG_TOL = 1e-8


class Coordinate(enum.Enum):
    HALF_PLANE_Z = "half_plane_z"
    TRIANGLE_W = "triangle_w"
    ASPECT_RATIO_R = "aspect_ratio_r"


@dataclass(frozen=True)
class CrossingPoint:
    coordinate_system: Coordinate
    value: complex

    def to_z(self, ctx: EquianharmonicContext | None = None) -> float:
        """Half-plane coordinate of this point."""
        if self.coordinate_system is Coordinate.HALF_PLANE_Z:
            return float(complex(self.value).real)
        if self.coordinate_system is Coordinate.ASPECT_RATIO_R:
            return aspect_ratio_to_z(float(complex(self.value).real))
        ctx = ctx or default_context()
        tri = triangle_domain(ctx)
        segment_fraction(tri.B, tri.C, complex(self.value))
        return schwarz_S(ctx, complex(self.value)).real


def _unit_interval(z: float, name: str) -> float:
    z = float(z)
    if not 0.0 <= z <= 1.0:
        raise DomainError(f"{name} is defined for z in [0, 1], got {z}")
    return min(max(z, CLAMP), 1.0 - CLAMP)


# -- half plane ---------------------------------------------------------------


def _cardy_series(z: float) -> float:
    return CARDY_NORM * z ** (1.0 / 3.0) * hyp2f1(1 / 3, 2 / 3, 4 / 3, z).real


def P_h(z: float) -> float:
    """Cardy's horizontal crossing probability."""
    z = _unit_interval(z, "P_h")
    if z > 0.5:
        return 1.0 - _cardy_series(1.0 - z)
    return _cardy_series(z)


def watts_series(z: float) -> float:
    """Watts's 3F2 expression, summed at z itself (slow as z -> 1)."""
    z = _unit_interval(z, "P_hbar_v")
    return WATTS_NORM * z * hyp3f2(1, 1, 4 / 3, 2, 5 / 3, z).real


def P_hv(z: float) -> float:
    """Probability that all four boundary arcs are joined by one cluster."""
    z = _unit_interval(z, "P_hv")
    if z > 0.5:
        z = 1.0 - z
    return P_h(z) - watts_series(z)


def P_hbar_v(z: float) -> float:
    """Horizontal-but-not-vertical crossing probability P_h - P_hv."""
    z = _unit_interval(z, "P_hbar_v")
    if z <= 0.5:
        return watts_series(z)
    return P_h(z) - P_hv(z)


def N_h_series(z: float) -> float:
    """Expected number of crossing clusters from the 3F2 series in 1 - z."""
    z = float(z)
    if not 0.0 < z < 1.0:
        raise DomainError(f"N_h is defined for z in (0, 1), got {z}")
    z = min(max(z, CLAMP), 1.0 - CLAMP)
    y = 1.0 - z
    return 0.5 - SQRT3 / (4 * math.pi) * (math.log(y) + y * hyp3f2(1, 1, 4 / 3, 2, 5 / 3, y).real)


def N_h_identity(z: float) -> float:
    """N_h from P_h, P_hv and the logarithm; circular for checking the identity."""
    z = float(z)
    if not 0.0 < z < 1.0:
        raise DomainError(f"N_h is defined for z in (0, 1), got {z}")
    return 0.5 * (P_h(z) + P_hv(z) + WATTS_NORM * math.log(1.0 / (1.0 - z)))


def N_h(z: float, method: str = "auto") -> float:
    """Expected number of clusters crossing between [0, z] and [1, inf].

    ``method`` is "series", "identity" or "auto"; "auto" uses the series
    except for z < NH_SERIES_MIN_Z, where the series in 1 - z would need
    more than ~1e5 terms.
    """
    if method == "series":
        return N_h_series(z)
    if method == "identity":
        return N_h_identity(z)
    if method != "auto":
        raise ValueError(f"unknown method {method!r}")
    if 0.0 < float(z) < NH_SERIES_MIN_Z:
        return N_h_identity(z)
    return N_h_series(z)


def _surr_hyper(x: float) -> float:
    # 2F1(1/2, 2/3; 3/2; -x) for x >= 0, via Pfaff and, for x > 1, the 1 - u connection
    if x <= 1.0:
        return (1.0 + x) ** -0.5 * hyp2f1(0.5, 5 / 6, 1.5, x / (1.0 + x)).real
    u = 1.0 / (1.0 + x)
    f = _SURR_A * hyp2f1(0.5, 5 / 6, 5 / 6, u).real + _SURR_B * u ** (1 / 6) * hyp2f1(
        1.0, 2 / 3, 7 / 6, u
    ).real
    return (1.0 + x) ** -0.5 * f


def P_surr(z: float) -> float:
    """Schramm's probability that i is surrounded by the hull of [-inf, z]."""
    z = float(z)
    if not math.isfinite(z):
        if math.isnan(z):
            raise DomainError("P_surr(nan)")
        return 1.0 if z > 0 else 0.0
    return 0.5 + SCHRAMM_NORM * z * _surr_hyper(z * z)


def P_h_continued(ctx: EquianharmonicContext, zeta: complex) -> complex:
    """Analytic continuation of P_h off (0, 1), through the inverse Schwarz map."""
    zeta = complex(zeta)
    if zeta.imag < 0:
        return P_h_continued(ctx, zeta.conjugate()).conjugate()
    tri = triangle_domain(ctx)
    return (schwarz_inverse(ctx, zeta) - tri.B) / (tri.C - tri.B)


def P_h_continued_series(zeta: complex) -> complex:
    """The same continuation from the 2F1 series; needs |zeta| < 1."""
    zeta = complex(zeta)
    return CARDY_NORM * zeta ** (1.0 / 3.0) * hyp2f1(1 / 3, 2 / 3, 4 / 3, zeta)


def surr_constant(ctx: EquianharmonicContext, z: float = 0.3) -> complex:
    """c with P_surr(z) - 1/2 = c * [P_h(1/2 + iz/2) - 1/2], fitted at one z."""
    return (P_surr(z) - 0.5) / (P_h_continued(ctx, 0.5 + 0.5j * z) - 0.5)


def P_hv_square_chain() -> dict:
    """P_hv(1/2) by moving the 3F2 from 1/2 to unit argument, then a digamma closed form.

    The quadratic map w -> 4w(1-w) sends 1/2 to 1 and halves the series
    (the prefactor 1 - w), leaving 3F2(1, 1, 7/6; 2, 5/3; 1).
    """
    series_half = hyp3f2(1, 1, 4 / 3, 2, 5 / 3, 0.5).real
    unit = threeF2_unit_value(7 / 6, 5 / 3).real
    return {
        "series_at_half": series_half,
        "unit_value": unit,
        "transform_residual": whipple2_residual(1, 1, 4 / 3, 0.5),
        "via_series": 0.5 - SQRT3 / (4 * math.pi) * series_half,
        "via_unit_value": 0.5 - SQRT3 / (8 * math.pi) * unit,
    }


# -- triangle -----------------------------------------------------------------


def _on_BC(ctx, w):
    tri = triangle_domain(ctx)
    return segment_fraction(tri.B, tri.C, complex(w))


def _real(val: complex, what: str) -> float:
    if abs(val.imag) > IMAG_TOL:
        raise ImaginaryResidueError(f"{what} has imaginary part {val.imag:.3g} on the segment")
    return val.real


def P_h_triangle(ctx: EquianharmonicContext, w: complex) -> float:
    """(w - B)/(C - B) for w on BC."""
    tri = triangle_domain(ctx)
    _on_BC(ctx, w)
    return _real((complex(w) - tri.B) / (tri.C - tri.B), "P_h_triangle")


def P_hv_triangle(ctx: EquianharmonicContext, w: complex) -> float:
    """-(3 sqrt3/pi) Log sigma(w) + (3/2) w/omega2 - 1/2 on BC."""
    _on_BC(ctx, w)
    w = complex(w)
    val = -3.0 * SQRT3 / math.pi * log_sigma(ctx, w) + 1.5 * w / ctx.omega2 - 0.5
    return _real(val, "P_hv_triangle")


def N_h_triangle(ctx: EquianharmonicContext, w: complex) -> float:
    """Expected crossing-cluster count on the triangle, w on BC minus C."""
    _on_BC(ctx, w)
    w = complex(w)
    if abs(w - ctx.W0) < 1e-9:
        raise DomainError("N_h diverges logarithmically at the vertex C")
    one_minus_S = 0.5 - wp_prime(ctx, w) / 2j
    val = (
        -SQRT3 / (4 * math.pi) * (6.0 * log_sigma(ctx, w) + cmath.log(one_minus_S))
        + (3.0 - SQRT3 * 1j) / 4.0 * w / ctx.omega2
        + SQRT3 * 1j / 4.0
    )
    return _real(val, "N_h_triangle")


def isosceles_to_z(ctx: EquianharmonicContext, t: float) -> float:
    """Half-plane point R(w) = wp'(w) for w = 2 omega2 t on the base B'C'."""
    if not 0.0 < t < 1.0:
        raise DomainError("t must lie in (0, 1); the base ends map to infinity")
    return wp_prime(ctx, 2.0 * ctx.omega2 * t).real


def P_surr_triangle(ctx: EquianharmonicContext, w: complex) -> float:
    """(w - B')/(C' - B') on the base B'C' = [0, 2 omega2] of the isosceles triangle."""
    iso = isosceles_domain(ctx)
    return segment_fraction(iso.B, iso.C, complex(w))


# -- identities and ODE residuals --------------------------------------------


def identity_residual(z: float) -> float:
    """|2 N_h - P_h - P_hv - (sqrt3/2pi) log(1/(1-z))| with N_h from its own series."""
    z = float(z)
    if not 0.0 < z < 1.0:
        raise DomainError(f"identity is checked on (0, 1), got {z}")
    lhs = 2.0 * N_h_series(z) - P_h(z) - P_hv(z)
    return abs(lhs - WATTS_NORM * math.log(1.0 / (1.0 - z)))


_FUNCS = {"P_h": P_h, "P_hv": P_hv, "N_h": N_h_series}

_U = Polynomial([0.0, 1.0, -1.0])  # z(1 - z)


def _third_order_coeffs():
    # d/dz u^(1/3) d/dz u^(2/3) d/dz  =  u D^3 + (5/3) u' D^2 + (2/3) u'' D
    return {3: _U, 2: 5.0 / 3.0 * _U.deriv(), 1: 2.0 / 3.0 * _U.deriv(2)}


def _fifth_order_coeffs():
    # d^3/dz^3 [u^2 D^2 + (2/3) u u' D]
    p2 = _U**2
    p1 = 2.0 / 3.0 * _U * _U.deriv()
    coeffs: dict[int, Polynomial] = {}
    for j in range(4):
        c = math.comb(3, j)
        for base, poly in ((2, p2), (1, p1)):
            k = base + 3 - j
            term = c * poly.deriv(j) if j else c * poly
            coeffs[k] = coeffs.get(k, Polynomial([0.0])) + term
    return coeffs


def fuchsian_residual(which: str, f: str, z: float, h: float | None = None) -> float:
    """Residual of the third- or fifth-order operator applied to a crossing function.

    Derivatives come from Richardson-extrapolated central differences.
    """
    if which not in ("third_order", "fifth_order"):
        raise ValueError(f"unknown operator {which!r}")
    if f not in _FUNCS:
        raise ValueError(f"unknown function {f!r}")
    if which == "third_order" and f == "N_h":
        raise PreconditionError("N_h solves only the fifth-order equation")
    z = float(z)
    if not 0.05 <= z <= 0.95:
        raise DomainError("residuals are evaluated for z in [0.05, 0.95]")
    fn = _FUNCS[f]
    coeffs = _third_order_coeffs() if which == "third_order" else _fifth_order_coeffs()
    top = max(coeffs)
    if h is None:
        h = min(z, 1.0 - z) / (0.75 * top + 1.0)
    total = 0.0
    for k, poly in coeffs.items():
        total += poly(z) * numdiff.derivative(fn, z, k, h)
    return abs(total)


# -- rectangle coordinate ----------------------------------------------------


def _agm(a: float, b: float) -> float:
    for _ in range(64):
        if abs(a - b) <= 4e-16 * a:
            break
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    return 0.5 * (a + b)


def ellipk(m: float) -> float:
    """Complete elliptic integral K(m), parameter convention (m = k^2)."""
    if not 0.0 <= m < 1.0:
        raise DomainError("K(m) needs 0 <= m < 1")
    return math.pi / (2.0 * _agm(1.0, math.sqrt(1.0 - m)))


def z_to_aspect_ratio(z: float) -> float:
    """Width/height of the rectangle whose vertical sides map to [0, z] and [1, inf].

    The Schwarz-Christoffel map with prevertices 0, z, 1, inf gives sides
    2K(z) (vertical) and 2K(1 - z) (horizontal), so r = K(1 - z)/K(z).
    """
    z = float(z)
    if not 0.0 < z < 1.0:
        raise DomainError("z must lie in (0, 1)")
    # K(1 - z)/K(z) = AGM(1, sqrt(1 - z))/AGM(1, sqrt(z)); no cancellation in 1 - (1 - z)
    return _agm(1.0, math.sqrt(1.0 - z)) / _agm(1.0, math.sqrt(z))


def aspect_ratio_to_z(r: float) -> float:
    """Inverse of z_to_aspect_ratio: z = (theta2(q)/theta3(q))^4 with nome q = exp(-pi r)."""
    r = float(r)
    if not r > 0.0:
        raise DomainError("aspect ratio must be positive")
    if r < 1.0:
        return 1.0 - aspect_ratio_to_z(1.0 / r)
    q = math.exp(-math.pi * r)
    t2 = 0.0
    t3 = 0.0
    n = 0
    while True:
        a = q ** (n * (n + 1))
        b = q ** (n * n) if n else 0.5
        t2 += a
        t3 += b
        if a < 1e-18 and n > 0:
            break
        n += 1
    theta2 = 2.0 * q**0.25 * t2
    theta3 = 2.0 * t3
    return (theta2 / theta3) ** 4
