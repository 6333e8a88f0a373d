"""Schwarz maps between the upper half plane and triangles built on wp'.

S(w) = 1/2 + wp'(w)/(2i) takes the equilateral triangle 0, conj(W0), W0
onto the upper half plane, with vertices going to infinity, 0, 1.
R(w) = wp'(w) takes the isosceles triangle W0, 0, 2*omega2 onto the
upper half plane slit along [i, i*infinity).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .elliptic import EquianharmonicContext, in_triangle, wp, wp_prime
from .errors import ConvergenceError, DomainError, PoleError

VERTEX_SNAP = 1e-8
_CUBE_ROOT_UNITY = cmath.exp(2j * math.pi / 3)


@dataclass(frozen=True)
class TriangleDomain:
    A: complex
    B: complex
    C: complex
    side_length: float
    midpoint: complex

    def point_at(self, t: float) -> complex:
        """Point B + t (C - B) on the side BC."""
        return self.B + t * (self.C - self.B)


@dataclass(frozen=True)
class IsoscelesDomain:
    A: complex
    B: complex
    C: complex

    def angles(self) -> tuple[float, float, float]:
        """Interior angles at A', B', C'."""

        def ang(p, q, r):
            return abs(cmath.phase((q - p) / (r - p)))

        return ang(self.A, self.B, self.C), ang(self.B, self.C, self.A), ang(self.C, self.A, self.B)

    def point_at(self, t: float) -> complex:
        return self.B + t * (self.C - self.B)


def triangle_domain(ctx: EquianharmonicContext) -> TriangleDomain:
    W0 = ctx.W0
    return TriangleDomain(A=0j, B=W0.conjugate(), C=W0, side_length=abs(W0), midpoint=complex(ctx.omega2))


def isosceles_domain(ctx: EquianharmonicContext) -> IsoscelesDomain:
    return IsoscelesDomain(A=ctx.W0, B=0j, C=complex(2.0 * ctx.omega2))


def segment_fraction(P: complex, Q: complex, w: complex, tol: float = 1e-9) -> float:
    """Parameter t of w on segment PQ; DomainError if w is farther than tol."""
    d = Q - P
    t = ((w - P) * d.conjugate()).real / abs(d) ** 2
    foot = P + min(max(t, 0.0), 1.0) * d
    if abs(w - foot) > tol:
        raise DomainError(f"w = {w} is not on the segment [{P}, {Q}]")
    return min(max(t, 0.0), 1.0)


def schwarz_S(ctx: EquianharmonicContext, w: complex, *, allow_infinity: bool = False) -> complex:
    """z = S(w) = 1/2 + wp'(w)/(2i)."""
    try:
        return 0.5 + wp_prime(ctx, w) / 2j
    except PoleError:
        if allow_infinity:
            return complex(math.inf, math.inf)
        raise


def schwarz_R(ctx: EquianharmonicContext, w: complex, *, allow_infinity: bool = False) -> complex:
    """R(w) = wp'(w)."""
    try:
        return wp_prime(ctx, w)
    except PoleError:
        if allow_infinity:
            return complex(math.inf, math.inf)
        raise


def _S_prime(ctx, w):
    # S' = wp''/(2i) = 6 wp^2/(2i)
    return -3j * wp(ctx, w) ** 2


def _cbrt(x: complex) -> complex:
    if x == 0:
        return 0j
    return cmath.exp(cmath.log(x) / 3.0)


def _initial_guesses(ctx, z: complex) -> list[complex]:
    tri = triangle_domain(ctx)
    out = []
    # Local inversions of S ~ i/w^3, S ~ i (w-B)^3, S ~ 1 + i (w-C)^3.
    if z != 0.5:
        out.append(_cbrt(1j / (z - 0.5)))
    out.append(tri.B + _CUBE_ROOT_UNITY * _cbrt(-1j * z))
    out.append(tri.C + _CUBE_ROOT_UNITY.conjugate() * _cbrt(-1j * (z - 1.0)))
    if abs(z.imag) < 1e-12 and 0.0 < z.real < 1.0:
        out.append(tri.point_at(z.real))
    out.append((tri.A + tri.B + tri.C) / 3.0)
    return out


def _newton(ctx, z, w, max_iter, tol):
    f = schwarz_S(ctx, w) - z
    for _ in range(max_iter):
        if abs(f) <= tol:
            return w, abs(f)
        d = _S_prime(ctx, w)
        if d == 0:
            break
        step = f / d
        lam = 1.0
        for _ in range(40):
            trial = w - lam * step
            try:
                ft = schwarz_S(ctx, trial) - z
            except PoleError:
                ft = complex(math.inf)
            if abs(ft) < abs(f):
                break
            lam *= 0.5
        else:
            break
        w, f = trial, ft
    return w, abs(f)


def schwarz_inverse(
    ctx: EquianharmonicContext,
    z: complex,
    *,
    max_iter: int = 100,
    tol: float = 1e-13,
) -> complex:
    """w = s(z), the point of the closed triangle with S(w) = z.

    z must lie in the closed upper half plane.  Points within 1e-8 of 0
    or 1 return the vertices B, C exactly.
    """
    z = complex(z)
    if z.imag < -1e-12:
        raise DomainError(f"z = {z} is in the lower half plane")
    if not cmath.isfinite(z):
        return 0j
    tri = triangle_domain(ctx)
    if abs(z) < VERTEX_SNAP:
        return tri.B
    if abs(z - 1.0) < VERTEX_SNAP:
        return tri.C
    scale = max(1.0, abs(z))
    guesses = sorted(
        _initial_guesses(ctx, z),
        key=lambda g: abs(schwarz_S(ctx, g) - z) if abs(g) > 1e-9 else math.inf,
    )
    best = None
    for g in guesses:
        w, res = _newton(ctx, z, g, max_iter, tol * scale)
        if not in_triangle(ctx, w, tol=1e-7):
            continue
        if res <= 1e-10 * scale:
            return w
        if best is None or res < best[1]:
            best = (w, res)
    raise ConvergenceError(
        f"Newton inversion of S did not converge at z = {z}"
        + (f" (best residual {best[1]:.3g})" if best else "")
    )
