"""Command line: evaluate, verify, simulate, tabulate, and manipulate P-symbols.

Every command prints JSON lines (or CSV where asked).  Floats are written
with 17 significant digits so output round-trips and is byte-stable.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from fractions import Fraction

from . import checks, crossing, psymbol
from .conformal import triangle_domain
from .elliptic import default_context
from .errors import CritPercError

SEED_ENV = "CRITPERC_SEED"
FUNCTIONS = ("P_h", "P_hv", "P_hbar_v", "N_h", "P_surr")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def fmt_json(obj) -> str:
    """json.dumps with every float rendered as %.17g."""

    def enc(x):
        if isinstance(x, bool) or x is None:
            return json.dumps(x)
        if isinstance(x, float):
            if not math.isfinite(x):
                return json.dumps(str(x))
            text = format(x, ".17g")
            return text if any(ch in text for ch in ".en") else text + ".0"
        if isinstance(x, (int, str)):
            return json.dumps(x, ensure_ascii=False)
        if isinstance(x, Fraction):
            return json.dumps(str(x))
        if isinstance(x, dict):
            return "{" + ", ".join(f"{json.dumps(str(k))}: {enc(v)}" for k, v in x.items()) + "}"
        if isinstance(x, (list, tuple)):
            return "[" + ", ".join(enc(v) for v in x) + "]"
        return json.dumps(str(x))

    return enc(obj)


def record(command, inputs, outputs, provenance) -> str:
    return fmt_json({"command": command, "inputs": inputs, "outputs": outputs, "provenance": provenance})


# -- eval ---------------------------------------------------------------------


def _coord(args):
    given = [(k, getattr(args, k)) for k in ("z", "w_fraction", "r") if getattr(args, k) is not None]
    if len(given) != 1:
        raise UsageError("give exactly one of --z, --w-fraction, --r")
    return given[0]


def evaluate(function: str, coord: str, x: float, method: str = "auto") -> dict:
    """Value of a crossing function plus the coordinates used to get it."""
    if function not in FUNCTIONS:
        raise UsageError(f"unknown function {function!r}")
    out: dict = {}
    if coord == "w_fraction":
        if not 0.0 <= x <= 1.0:
            raise UsageError("--w-fraction must lie in [0, 1]")
        ctx = default_context()
        if function == "P_surr":
            out["value"] = x
            out["w"] = [2 * ctx.omega2 * x, 0.0]
            out["z"] = crossing.isosceles_to_z(ctx, x) if 0.0 < x < 1.0 else (-math.inf if x == 0 else math.inf)
            return out
        w = triangle_domain(ctx).point_at(x)
        out["w"] = [w.real, w.imag]
        out["z"] = crossing.CrossingPoint(crossing.Coordinate.TRIANGLE_W, w).to_z(ctx)
        forms = {
            "P_h": lambda: crossing.P_h_triangle(ctx, w),
            "P_hv": lambda: crossing.P_hv_triangle(ctx, w),
            "P_hbar_v": lambda: crossing.P_h_triangle(ctx, w) - crossing.P_hv_triangle(ctx, w),
            "N_h": lambda: crossing.N_h_triangle(ctx, w),
        }
        out["value"] = forms[function]()
        return out
    if coord == "r":
        if function == "P_surr":
            raise UsageError("P_surr has no aspect-ratio coordinate")
        z = crossing.aspect_ratio_to_z(x)
        out["z"] = z
    else:
        z = x
    fn = {
        "P_h": crossing.P_h,
        "P_hv": crossing.P_hv,
        "P_hbar_v": crossing.P_hbar_v,
        "N_h": lambda v: crossing.N_h(v, method=method),
        "P_surr": crossing.P_surr,
    }[function]
    out["value"] = fn(z)
    return out


def cmd_eval(args) -> int:
    coord, x = _coord(args)
    out = evaluate(args.function, coord, x, args.method)
    print(record("eval", {"function": args.function, coord.replace("_", "-"): x}, out, "formula"))
    return EXIT_OK


# -- verify -------------------------------------------------------------------


def cmd_verify(args) -> int:
    kw = {"grid": args.grid, "samples": args.samples, "seed": args.seed}
    if args.tol is not None:
        kw["tol"] = args.tol
    ok = True
    for c in checks.run_suite(args.suite, **kw):
        ok &= c.passed
        out = c.to_dict()
        del out["name"]
        print(record("verify", {"suite": args.suite, "check": c.name}, out, "identity-check"))
    return EXIT_OK if ok else EXIT_FAIL


# -- simulate -----------------------------------------------------------------


def formula_value(geometry: str, observable: str, r: float, t: float) -> float:
    if geometry == "rectangle":
        z = crossing.aspect_ratio_to_z(r)
        return {"P_h": crossing.P_h, "P_hv": crossing.P_hv, "N_h": crossing.N_h}[observable](z)
    if geometry == "schramm":
        return t
    ctx = default_context()
    w = triangle_domain(ctx).point_at(t)
    return {
        "P_h": lambda: crossing.P_h_triangle(ctx, w),
        "P_hv": lambda: crossing.P_hv_triangle(ctx, w),
        "N_h": lambda: crossing.N_h_triangle(ctx, w),
    }[observable]()


def _load_config(path):
    if not path:
        return {}
    with open(path) as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise UsageError("config file must hold a JSON object")
    return data


def build_run(args):
    from .percsim import LatticeRun

    cfg = _load_config(args.config)
    for key in ("geometry", "L", "trials", "seed", "r", "t", "p", "square_bond"):
        val = getattr(args, key)
        if val is not None:
            cfg[key] = val
    if "seed" not in cfg:
        cfg["seed"] = int(os.environ.get(SEED_ENV, "0"))
    cfg.setdefault("geometry", "rectangle")
    cfg.setdefault("L", 64)
    cfg.setdefault("trials", 1000)
    unknown = set(cfg) - {"geometry", "L", "trials", "seed", "r", "t", "p", "square_bond"}
    if unknown:
        raise UsageError(f"unknown config keys: {sorted(unknown)}")
    try:
        return LatticeRun(**cfg)
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc)) from exc


def cmd_simulate(args) -> int:
    from .percsim import OBSERVABLES, run

    cfg = build_run(args)
    names = OBSERVABLES[cfg.geometry]
    if args.observable and args.observable not in names:
        raise UsageError(f"{cfg.geometry.value} geometry estimates {', '.join(names)}")
    est = run(cfg, workers=args.workers)
    rows = []
    for name in names:
        if args.observable and name != args.observable:
            continue
        e = est[name]
        exact = formula_value(cfg.geometry.value, name, cfg.r, cfg.t)
        zscore = (e.mean - exact) / e.stderr if e.stderr > 0 else math.nan
        rows.append({"observable": name, "mean": e.mean, "stderr": e.stderr, "trials": e.trials, "formula": exact, "z_score": zscore})
    if args.format == "csv":
        print("observable,mean,stderr,trials,formula,z_score")
        for row in rows:
            print(",".join(fmt_json(v).strip('"') for v in row.values()))
    else:
        for row in rows:
            print(record("simulate", cfg.to_dict(), row, "simulation"))
    return EXIT_OK


# -- table --------------------------------------------------------------------


def parse_range(text: str) -> list[float]:
    try:
        a, b, step = (float(x) for x in text.split(":"))
    except ValueError as exc:
        raise UsageError(f"range must look like start:stop:step, got {text!r}") from exc
    if step <= 0 or b < a:
        raise UsageError("range needs start <= stop and a positive step")
    n = int(math.floor((b - a) / step + 1e-9)) + 1
    return [round(a + k * step, 12) for k in range(n)]


def cmd_table(args) -> int:
    coord, spec = _coord(args)
    xs = parse_range(spec)
    rows = [(x, evaluate(args.function, coord, x, args.method)["value"]) for x in xs]
    name = coord.replace("_", "-")
    if args.format == "csv":
        lines = [f"{name},{args.function}"] + [f"{fmt_json(x)},{fmt_json(v)}" for x, v in rows]
    else:
        lines = [record("table", {"function": args.function, name: x}, {"value": v}, "formula") for x, v in rows]
    text = "\n".join(lines) + "\n"
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# -- psymbol ------------------------------------------------------------------

BUILTIN_SYMBOLS = {
    "cardy": psymbol.cardy_tableau,
    "third": psymbol.third_order_tableau,
    "fifth": psymbol.fifth_order_tableau,
    "surr": psymbol.surr_tableau,
}
BUILTIN_MAPS = {
    "schwarz": psymbol.schwarz_branch_map,
    "square": psymbol.square_branch_map,
    "whipple": psymbol.whipple_branch_map,
}


def run_psymbol_program(prog: dict) -> tuple[psymbol.PSymbol, bool | None]:
    """Apply a small declarative program to a tableau.

    Keys: "symbol" (a builtin name, {"columns": ...}, or {"hyper": [[alphas], [betas]]}),
    then optional "shift" ([{"point", "c"}]), "pullback" (builtin name or
    [[preimage, image, multiplicity], ...]) and "compare" (a tableau).
    """
    spec = prog.get("symbol")
    if isinstance(spec, str):
        if spec not in BUILTIN_SYMBOLS:
            raise UsageError(f"unknown builtin symbol {spec!r}")
        p = BUILTIN_SYMBOLS[spec]()
    elif isinstance(spec, dict) and "hyper" in spec:
        alphas, betas = spec["hyper"]
        p = psymbol.hyper_psymbol([str(a) for a in alphas], [str(b) for b in betas])
    elif isinstance(spec, dict):
        p = psymbol.from_dict(spec)
    else:
        raise UsageError("program needs a 'symbol'")
    for step in prog.get("shift", []):
        p = psymbol.shift_by_prefactor(p, str(step["point"]), str(step["c"]))
    pb = prog.get("pullback")
    if isinstance(pb, str):
        if pb not in BUILTIN_MAPS:
            raise UsageError(f"unknown builtin map {pb!r}")
        p = psymbol.pullback(p, BUILTIN_MAPS[pb]())
    elif pb is not None:
        p = psymbol.pullback(p, psymbol.branch_map_from_list(pb, prog.get("variable", "w")))
    for step in prog.get("shift_after", []):
        p = psymbol.shift_by_prefactor(p, str(step["point"]), str(step["c"]))
    match = None
    if "compare" in prog:
        match = psymbol.equals(p, psymbol.from_dict(prog["compare"]))
    return p, match


def cmd_psymbol(args) -> int:
    if args.program:
        with open(args.program) as fh:
            prog = json.load(fh)
    else:
        prog = {"symbol": args.builtin or "cardy"}
        if args.pullback:
            prog["pullback"] = args.pullback
        if args.shift:
            point, _, c = args.shift.partition(":")
            prog["shift"] = [{"point": point, "c": c}]
    p, match = run_psymbol_program(prog)
    if args.json:
        out = psymbol.to_dict(p)
        if match is not None:
            out["matches"] = match
        print(record("psymbol", {"program": args.program or prog}, out, "formula"))
    else:
        print(p.render())
        if match is not None:
            print("matches" if match else "differs")
    return EXIT_OK if match in (None, True) else EXIT_FAIL


# -- parser -------------------------------------------------------------------


def _add_coords(p):
    p.add_argument("--z", type=float, help="half-plane cross-ratio")
    p.add_argument("--w-fraction", dest="w_fraction", type=float, help="fraction t along BC, w = B + t(C - B)")
    p.add_argument("--r", type=float, help="rectangle aspect ratio width/height")
    p.add_argument("--method", default="auto", choices=("auto", "series", "identity"), help="N_h evaluation path")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="critperc", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("eval", help="evaluate a crossing function")
    p.add_argument("function", choices=FUNCTIONS)
    _add_coords(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("suite", choices=tuple(checks.SUITES) + ("all",))
    p.add_argument("--grid", type=int, default=50)
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--tol", type=float, default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("simulate", help="Monte Carlo estimates with formula comparison")
    p.add_argument("--config", help="JSON file with LatticeRun fields; flags override it")
    p.add_argument("--geometry", choices=("rectangle", "triangle", "schramm"))
    p.add_argument("--L", type=int)
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int, help=f"default from ${SEED_ENV}, else 0")
    p.add_argument("--r", type=float)
    p.add_argument("--t", type=float)
    p.add_argument("--p", type=float)
    p.add_argument("--square-bond", dest="square_bond", action="store_const", const=True, default=None)
    p.add_argument("--observable", choices=("P_h", "P_hv", "N_h", "P_surr"))
    p.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("table", help="tabulate a crossing function over a range")
    p.add_argument("function", choices=FUNCTIONS)
    p.add_argument("--z", help="start:stop:step")
    p.add_argument("--w-fraction", dest="w_fraction", help="start:stop:step")
    p.add_argument("--r", help="start:stop:step")
    p.add_argument("--method", default="auto", choices=("auto", "series", "identity"))
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--output", help="write here instead of stdout")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("psymbol", help="render, shift and pull back P-symbol tableaux")
    p.add_argument("program", nargs="?", help="JSON program file")
    p.add_argument("--builtin", choices=tuple(BUILTIN_SYMBOLS))
    p.add_argument("--pullback", choices=tuple(BUILTIN_MAPS))
    p.add_argument("--shift", help="POINT:EXPONENT, applied before any pullback")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_psymbol)
    return ap


_VALUE_FLAGS = {"--z", "--r", "--w-fraction", "--t"}


def _glue_negative_values(argv):
    # argparse reads "--z -3:3:0.1" as two options; rewrite it as "--z=-3:3:0.1"
    out = []
    k = 0
    while k < len(argv):
        a = argv[k]
        if a in _VALUE_FLAGS and k + 1 < len(argv) and argv[k + 1][:2] in {"-0", "-1", "-2", "-3", "-4", "-5", "-6", "-7", "-8", "-9", "-."}:
            out.append(f"{a}={argv[k + 1]}")
            k += 2
            continue
        out.append(a)
        k += 1
    return out


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_glue_negative_values(argv))
    try:
        return args.func(args)
    except (UsageError, psymbol.PSymbolError, CritPercError, ValueError) as exc:
        print(f"critperc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
