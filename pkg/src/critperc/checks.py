"""Verification suites shared by the command line and the test suite.

Each check returns a Check record; a suite passes when every record does.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from fractions import Fraction

import numpy as np

from . import crossing, psymbol
from .conformal import schwarz_inverse, schwarz_S, triangle_domain
from .elliptic import default_context, log_sigma, wp, wp_prime
from .specfun import in_whipple2_region, in_whipple_region, whipple2_residual, whipple_residual

LOG2, LOG3 = math.log(2.0), math.log(3.0)
SQRT3 = math.sqrt(3.0)

PHV_HALF = 0.25 + SQRT3 / (4 * math.pi) * (3 * LOG3 - 4 * LOG2)
NH_HALF = 3 / 8 + SQRT3 / (8 * math.pi) * (3 * LOG3 - 2 * LOG2)
LOG_SIGMA_OMEGA2 = math.pi / (4 * SQRT3) + LOG2 / 3 - LOG3 / 4


@dataclass
class Check:
    name: str
    residual: float
    tolerance: float
    value: float | None = None
    expected: float | None = None

    @property
    def passed(self) -> bool:
        return bool(self.residual <= self.tolerance)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["pass"] = self.passed
        return {k: v for k, v in d.items() if v is not None}


def _cmp(name, value, expected, tol):
    return Check(name, abs(value - expected), tol, float(value), float(expected))


def special_values() -> list[Check]:
    return [
        _cmp("P_h(1/2)", crossing.P_h(0.5), 0.5, 1e-12),
        _cmp("P_hv(1/2)", crossing.P_hv(0.5), PHV_HALF, 1e-11),
        _cmp("N_h(1/2)", crossing.N_h(0.5), NH_HALF, 1e-11),
    ]


def two_routes() -> list[Check]:
    ctx = default_context()
    w = complex(ctx.omega2)
    return [
        _cmp("P_hv(1/2) series vs triangle form", crossing.P_hv(0.5), crossing.P_hv_triangle(ctx, w), 1e-10),
        _cmp("N_h(1/2) series vs triangle form", crossing.N_h(0.5), crossing.N_h_triangle(ctx, w), 1e-10),
    ]


def unit_argument_chain() -> list[Check]:
    d = crossing.P_hv_square_chain()
    return [
        Check("quadratic transform at w=1/2", d["transform_residual"], 1e-12),
        _cmp("P_hv(1/2) via 3F2(1,1,7/6;2,5/3;1)", d["via_unit_value"], PHV_HALF, 1e-10),
    ]


def identity_grid(n: int = 50, tol: float = 1e-9) -> list[Check]:
    zs = np.linspace(0.05, 0.95, n)
    res = [crossing.identity_residual(float(z)) for z in zs]
    k = int(np.argmax(res))
    return [Check(f"2N_h - P_h - P_hv - log term, max over {n} points (worst z={zs[k]:.4f})", max(res), tol)]


def whipple(samples: int = 20, seed: int = 7, tol: float = 1e-10) -> list[Check]:
    """Random parameter sets for both quadratic transformations, series against series."""
    rng = np.random.default_rng(seed)
    worst1 = worst2 = 0.0
    done = 0
    while done < samples:
        a, b, c = rng.uniform(0.1, 1.5, 3)
        r, th = rng.uniform(0.0, 0.9), rng.uniform(-math.pi, math.pi)
        w = r * complex(math.cos(th), math.sin(th))
        if not (in_whipple_region(w) and in_whipple2_region(w)):
            continue
        worst1 = max(worst1, whipple_residual(a, b, c, w))
        worst2 = max(worst2, whipple2_residual(1.0, b, c, w))
        done += 1
    return [
        Check(f"Whipple transform, {samples} samples", worst1, tol),
        Check(f"4w(1-w) transform, {samples} samples", worst2, tol),
    ]


def _triangle_grid(ctx, n):
    tri = triangle_domain(ctx)
    rng = np.random.default_rng(12345)
    pts = []
    while len(pts) < n:
        u, v = rng.uniform(0.02, 0.98, 2)
        if u + v >= 0.98:
            continue
        w = tri.A + u * (tri.B - tri.A) + v * (tri.C - tri.A)
        pts.append(complex(w))
    return pts


def elliptic_core(n: int = 200) -> list[Check]:
    ctx = default_context()
    worst = 0.0
    for w in _triangle_grid(ctx, n):
        p, dp = wp(ctx, w), wp_prime(ctx, w)
        worst = max(worst, abs(dp * dp - (4 * p**3 - 1)) / max(1.0, abs(dp * dp)))
    return [
        Check(f"(wp')^2 = 4 wp^3 - 1 on {n} triangle points", worst, 1e-10),
        _cmp("wp(omega2)", wp(ctx, ctx.omega2).real, 4 ** (-1 / 3), 1e-12),
        Check("wp'(W0) = i", abs(wp_prime(ctx, ctx.W0) - 1j), 1e-11),
        _cmp("Log sigma(omega2)", log_sigma(ctx, ctx.omega2).real, LOG_SIGMA_OMEGA2, 1e-11),
    ]


def conformal_round_trip(n: int = 20) -> list[Check]:
    ctx = default_context()
    tri = triangle_domain(ctx)
    worst = 0.0
    for w in _triangle_grid(ctx, n):
        worst = max(worst, abs(schwarz_inverse(ctx, schwarz_S(ctx, w)) - w))
    return [
        Check(f"|s(S(w)) - w| on {n} interior points", worst, 1e-9),
        Check("S(omega2) = 1/2", abs(schwarz_S(ctx, ctx.omega2) - 0.5), 1e-10),
        Check("S(conj W0) = 0", abs(schwarz_S(ctx, tri.B)), 1e-10),
        Check("S(W0) = 1", abs(schwarz_S(ctx, tri.C) - 1.0), 1e-10),
    ]


def _exact(name, ok: bool) -> Check:
    return Check(name, 0.0 if ok else 1.0, 0.0)


def psymbol_suite() -> list[Check]:
    P = psymbol
    F = Fraction
    smap = P.schwarz_branch_map()
    out = [_exact("Cardy tableau pulls back to no singular points", P.pullback(P.cardy_tableau(), smap).is_trivial())]

    new = P.PSymbol.build({"[A]": [0, 1, 0], "[B]": [0, 1, 3], "[C]": [0, 1, 3]}, variable="w")
    out.append(_exact("third-order tableau pulled back through S", P.equals(P.pullback(P.third_order_tableau(), smap), new)))

    quad = P.PSymbol.build({"-i": [0, F(1, 3)], "i": [0, F(1, 3)], "inf": [0, F(1, 3)]})
    pulled = P.pullback(P.surr_tableau(), P.square_branch_map())
    out.append(_exact("surrounding tableau pulled back through -z^2", P.equals(pulled, quad) and "0" not in pulled.points))

    lhs, rhs, pulled_w, shifted = P.whipple_tableaux()
    long2 = P.PSymbol.build(
        {"0": ["0", "b-a", "c-a"], "1": ["a", "a+1", "2*(a-b-c+1)"], "inf": ["0", "b-a", "c-a"]}, variable="w"
    )
    out.append(_exact("quadratic-map pullback of the Whipple right side", P.equals(pulled_w, long2)))
    out.append(_exact("(1-w)^(-a) shift gives the Whipple left side", P.equals(shifted, lhs)))

    sums = []
    for alphas, betas, q in [
        ((F(1, 3), F(2, 3)), (F(4, 3),), 1),
        ((F(1, 2), F(2, 3)), (F(3, 2),), 1),
        ((1, 1, F(4, 3)), (2, F(5, 3)), 2),
        ((1, 1, F(7, 6)), (2, F(5, 3)), 2),
    ]:
        s = P.hyper_psymbol(alphas, betas).exponent_sum()
        sums.append(s.is_constant and s.const == P.expected_exponent_sum(q))
    sums.append(lhs.exponent_sum() == P.Affine.of(3) and rhs.exponent_sum() == P.Affine.of(3))
    out.append(_exact("exponent sums equal C(q+1, 2) for q = 1, 2", all(sums)))
    return out


def ode_residuals() -> list[Check]:
    out = []
    for f in ("P_h", "P_hv"):
        for z in (0.3, 0.5, 0.7):
            out.append(Check(f"third-order operator on {f} at z={z}", crossing.fuchsian_residual("third_order", f, z), 1e-5))
    out.append(Check("fifth-order operator on N_h at z=0.5", crossing.fuchsian_residual("fifth_order", "N_h", 0.5), 1e-3))
    return out


def percolation_properties(configs: int = 10_000, oracle_configs: int = 100, seed: int = 2024) -> list[Check]:
    """Logical consistency, union-find vs flood fill, and worker-count determinism."""
    from .percsim import LatticeRun, evaluate, run_outcomes, sample
    from .percsim import kernels, oracle
    from .percsim.runner import _prepare

    bad = 0
    cfgs = [LatticeRun("rectangle", 16, configs // 2, seed), LatticeRun("triangle", 16, configs - configs // 2, seed, t=0.4)]
    for cfg in cfgs:
        out = run_outcomes(cfg, workers=1)
        ph, phv, nh = out[:, 0], out[:, 1], out[:, 2]
        bad += int(np.sum(phv & ~ph)) + int(np.sum((nh >= 1) != (ph == 1)))
    checks = [Check(f"P_hv => P_h and (N_h >= 1) <=> P_h on {configs} configurations", float(bad), 0.0)]

    mismatch = 0
    for k, cfg in enumerate(
        [LatticeRun("rectangle", 16, oracle_configs, seed + 1), LatticeRun("schramm", 16, oracle_configs, seed + 1)]
    ):
        lay = _prepare(cfg).layout
        for trial in range(oracle_configs // 2):
            site_open, edge_open = sample(cfg, trial)
            roots = kernels.label(site_open, lay.edges, edge_open)
            labels = oracle.flood_labels(lay.n_sites, lay.edges, site_open, edge_open)
            mismatch += not oracle.same_partition(roots, labels)
            if cfg.geometry.value == "rectangle":
                mismatch += tuple(evaluate(cfg, site_open, edge_open)) != tuple(
                    int(x) for x in oracle.four_arc_oracle(labels, lay.segments)
                )
    checks.append(Check(f"union-find vs flood fill on {oracle_configs} L=16 configurations", float(mismatch), 0.0))

    cfg = LatticeRun("rectangle", 24, 96, seed + 2)
    ref = run_outcomes(cfg, workers=1)
    diff = sum(int(not np.array_equal(ref, run_outcomes(cfg, workers=w))) for w in (2, 8))
    checks.append(Check("identical outcomes for 1, 2 and 8 workers", float(diff), 0.0))
    return checks


SUITES = {
    "identities": lambda **kw: special_values() + two_routes() + unit_argument_chain() + identity_grid(kw.get("grid", 50), kw.get("tol", 1e-9)),
    "whipple": lambda **kw: whipple(kw.get("samples", 20), kw.get("seed", 7), kw.get("tol", 1e-10)),
    "elliptic": lambda **kw: elliptic_core() + conformal_round_trip(),
    "psymbol": lambda **kw: psymbol_suite(),
    "ode-residuals": lambda **kw: ode_residuals(),
    "properties": lambda **kw: percolation_properties(),
}


def run_suite(name: str, **kw) -> list[Check]:
    if name == "all":
        out = []
        for key in SUITES:
            out.extend(run_suite(key, **kw))
        return out
    if name not in SUITES:
        raise KeyError(name)
    return [_tag(c, name) for c in SUITES[name](**kw)]


def _tag(c: Check, suite: str) -> Check:
    c.name = f"{suite}: {c.name}"
    return c
