"""Riemann P-symbol tableaux in exact arithmetic.

Exponents are affine forms c0 + sum_k c_k * x_k with Fraction coefficients,
so tableaux with symbolic hypergeometric parameters can be compared
exactly.  Points on the sphere are string labels; "inf" is infinity.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Iterable, Mapping, Sequence, Union

INF = "inf"
_INF_ALIASES = {"inf", "∞", "oo", "infinity"}

Number = Union[int, Fraction, str]


class PSymbolError(ValueError):
    pass


def _frac(x) -> Fraction:
    if isinstance(x, float):
        raise TypeError("floats are not allowed in exact tableaux")
    return Fraction(x)


@dataclass(frozen=True)
class Affine:
    """c0 + sum c_k x_k; immutable and hashable."""

    const: Fraction = Fraction(0)
    terms: tuple[tuple[str, Fraction], ...] = ()

    @staticmethod
    def of(x) -> "Affine":
        if isinstance(x, Affine):
            return x
        if isinstance(x, str):
            return parse_exponent(x)
        return Affine(_frac(x))

    @staticmethod
    def _build(const, coeffs: Mapping[str, Fraction]) -> "Affine":
        terms = tuple(sorted((k, v) for k, v in coeffs.items() if v != 0))
        return Affine(Fraction(const), terms)

    @property
    def is_constant(self) -> bool:
        return not self.terms

    def __add__(self, other):
        other = Affine.of(other)
        coeffs = dict(self.terms)
        for k, v in other.terms:
            coeffs[k] = coeffs.get(k, Fraction(0)) + v
        return Affine._build(self.const + other.const, coeffs)

    __radd__ = __add__

    def __neg__(self):
        return Affine._build(-self.const, {k: -v for k, v in self.terms})

    def __sub__(self, other):
        return self + (-Affine.of(other))

    def __rsub__(self, other):
        return Affine.of(other) - self

    def __mul__(self, k):
        if isinstance(k, Affine):
            if k.is_constant:
                k = k.const
            elif self.is_constant:
                return k * self.const
            else:
                raise PSymbolError("product of two non-constant exponents is not affine")
        k = _frac(k)
        return Affine._build(self.const * k, {s: v * k for s, v in self.terms})

    __rmul__ = __mul__

    def __truediv__(self, k):
        return self * (1 / _frac(k))

    def sort_key(self):
        return (self.terms, self.const)

    def __str__(self):
        parts = []
        for name, c in self.terms:
            if c == 1:
                s = name
            elif c == -1:
                s = "-" + name
            else:
                s = f"{c}*{name}"
            parts.append(s)
        if self.const != 0 or not parts:
            parts.append(str(self.const))
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out

    def __repr__(self):
        return f"Affine({self})"


def sym(name: str) -> Affine:
    return Affine._build(0, {name: Fraction(1)})


def parse_exponent(text: str) -> Affine:
    """Parse forms like "1/3", "b-a", "2*a - 2*b + 1", "(a+1)/2"."""
    import ast

    text = text.replace("−", "-").strip()
    try:
        tree = ast.parse(text, mode="eval")
    except SyntaxError as exc:
        raise PSymbolError(f"cannot parse exponent {text!r}") from exc

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return Affine(Fraction(node.value))
        if isinstance(node, ast.Name):
            return sym(node.id)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            lhs, rhs = ev(node.left), ev(node.right)
            if isinstance(node.op, ast.Add):
                return lhs + rhs
            if isinstance(node.op, ast.Sub):
                return lhs - rhs
            if isinstance(node.op, ast.Mult):
                return lhs * rhs
            if isinstance(node.op, ast.Div):
                if not rhs.is_constant or rhs.const == 0:
                    raise PSymbolError(f"bad divisor in {text!r}")
                return lhs / rhs.const
        raise PSymbolError(f"unsupported syntax in exponent {text!r}")

    return ev(tree)


def normalize_point(label: str) -> str:
    label = str(label).strip().replace("−", "-")
    if label.lower() in _INF_ALIASES:
        return INF
    return label


@dataclass(frozen=True)
class PSymbol:
    """Columns of (point, exponents); every column has `order` exponents."""

    columns: tuple[tuple[str, tuple[Affine, ...]], ...]
    order: int
    variable: str = "z"

    def __post_init__(self):
        seen = set()
        for point, exps in self.columns:
            if point in seen:
                raise PSymbolError(f"duplicate column {point!r}")
            seen.add(point)
            if len(exps) != self.order:
                raise PSymbolError(f"column {point!r} has {len(exps)} exponents, expected {self.order}")
        if self.order < 1:
            raise PSymbolError("order must be positive")

    @staticmethod
    def build(columns: Mapping[str, Sequence] | Iterable[tuple[str, Sequence]], order: int | None = None, variable: str = "z"):
        items = columns.items() if isinstance(columns, Mapping) else columns
        cols = tuple((normalize_point(p), tuple(Affine.of(e) for e in exps)) for p, exps in items)
        if order is None:
            if not cols:
                raise PSymbolError("order is required for an empty symbol")
            order = len(cols[0][1])
        return PSymbol(cols, order, variable)

    @property
    def points(self) -> list[str]:
        return [p for p, _ in self.columns]

    def column(self, point: str) -> tuple[Affine, ...]:
        point = normalize_point(point)
        for p, exps in self.columns:
            if p == point:
                return exps
        raise PSymbolError(f"no column at {point!r}")

    def exponent_sum(self) -> Affine:
        total = Affine()
        for _, exps in self.columns:
            for e in exps:
                total = total + e
        return total

    def is_trivial(self) -> bool:
        return not self.columns

    def render(self) -> str:
        return render(self)

    def __str__(self):
        return render(self)


def ordinary_signature(n: int) -> Counter:
    return Counter(Affine(Fraction(k)) for k in range(n))


def is_ordinary(exps: Sequence[Affine]) -> bool:
    return Counter(exps) == ordinary_signature(len(exps))


def expected_exponent_sum(q: int) -> int:
    """Sum of all exponents of an order-(q+1) equation with three singular points."""
    return comb(q + 1, 2)


def hyper_psymbol(alphas: Sequence, betas: Sequence, variable: str = "z") -> PSymbol:
    """Tableau of the (q+1)F(q) equation: {0, 1-b_i} at 0, {0..q-1, s} at 1, {a_i} at inf."""
    a = [Affine.of(x) for x in alphas]
    b = [Affine.of(x) for x in betas]
    q = len(b)
    if len(a) != q + 1:
        raise PSymbolError("need q+1 upper and q lower parameters")
    s = sum(b, Affine()) - sum(a, Affine())
    col0 = [Affine()] + [1 - bi for bi in b]
    col1 = [Affine(Fraction(k)) for k in range(q)] + [s]
    return PSymbol.build([("0", col0), ("1", col1), (INF, a)], q + 1, variable)


def shift_by_prefactor(p: PSymbol, point: str, c) -> PSymbol:
    """Multiply solutions by (z - point)^c: add c at point, subtract it at infinity."""
    point = normalize_point(point)
    if point == INF:
        raise PSymbolError("the prefactor point must be finite")
    c = Affine.of(c)
    if point not in p.points:
        raise PSymbolError(f"unknown point label {point!r}")
    cols = []
    for q, exps in p.columns:
        if q == point:
            exps = tuple(e + c for e in exps)
        elif q == INF:
            exps = tuple(e - c for e in exps)
        cols.append((q, exps))
    if INF not in p.points:
        cols.append((INF, tuple(Affine() - c + k for k in range(p.order))))
    return PSymbol(tuple(cols), p.order, p.variable)


@dataclass(frozen=True)
class BranchMap:
    """Branch data of a rational map: (preimage, image, local multiplicity) triples."""

    branch_points: tuple[tuple[str, str, int], ...]
    variable: str = "w"

    def __post_init__(self):
        seen = set()
        for pre, _, mult in self.branch_points:
            if int(mult) < 1:
                raise PSymbolError("multiplicities must be at least 1")
            if pre in seen:
                raise PSymbolError(f"preimage {pre!r} listed twice")
            seen.add(pre)

    @staticmethod
    def build(points: Iterable[tuple[str, str, int]], variable: str = "w") -> "BranchMap":
        return BranchMap(
            tuple((normalize_point(a), normalize_point(b), int(m)) for a, b, m in points),
            variable,
        )


def pullback(p: PSymbol, m: BranchMap, keep_ordinary: bool = False) -> PSymbol:
    """Transport a tableau along a branched map.

    The column at each listed preimage gets the image's exponents times the
    multiplicity.  Images without a column are ordinary points; they need
    multiplicity 1, or the pulled-back column would not be ordinary.
    Columns that come out as {0, 1, ..., n-1} are dropped.
    """
    cols = []
    for pre, img, mult in m.branch_points:
        if img in p.points:
            exps = tuple(e * mult for e in p.column(img))
        else:
            if mult != 1:
                raise PSymbolError(f"missing image column {img!r} for a critical point of the map")
            exps = tuple(Affine(Fraction(k)) for k in range(p.order))
        if keep_ordinary or not is_ordinary(exps):
            cols.append((pre, exps))
    return PSymbol(tuple(cols), p.order, m.variable)


def _canon(p: PSymbol):
    return {pt: tuple(sorted(exps, key=Affine.sort_key)) for pt, exps in p.columns}


def equals(p1: PSymbol, p2: PSymbol) -> bool:
    """Same columns up to column order, same exponent multisets in each."""
    return p1.order == p2.order and _canon(p1) == _canon(p2)


def _display_point(pt: str) -> str:
    return "∞" if pt == INF else pt


def render(p: PSymbol) -> str:
    """Aligned text tableau: header of points, a rule, one row per exponent slot."""
    if p.is_trivial():
        return f"P{{ (no singular points) | {p.variable} }}"
    heads = [_display_point(pt) for pt, _ in p.columns]
    cells = [[str(e) for e in exps] for _, exps in p.columns]
    widths = [max(len(h), *(len(c) for c in col)) for h, col in zip(heads, cells)]
    lines = ["  ".join(h.rjust(w) for h, w in zip(heads, widths)) + " | " + p.variable]
    lines.append("-" * (sum(widths) + 2 * (len(widths) - 1)) + "-+-")
    for row in range(p.order):
        lines.append("  ".join(col[row].rjust(w) for col, w in zip(cells, widths)) + " |")
    return "\n".join(lines)


def from_dict(data: Mapping) -> PSymbol:
    """Tableau from {"columns": {point: [exponent, ...]}, "variable": "z"}."""
    cols = data["columns"]
    items = cols.items() if isinstance(cols, Mapping) else [(c["point"], c["exponents"]) for c in cols]
    items = [(p, [str(e) for e in exps]) for p, exps in items]
    return PSymbol.build(items, data.get("order"), data.get("variable", "z"))


def branch_map_from_list(items, variable: str = "w") -> BranchMap:
    return BranchMap.build([(str(a), str(b), int(k)) for a, b, k in items], variable)


def to_dict(p: PSymbol) -> dict:
    return {
        "variable": p.variable,
        "order": p.order,
        "columns": {pt: [str(e) for e in exps] for pt, exps in p.columns},
    }


# -- tableaux that appear in the crossing-formula derivations ----------------

F = Fraction


def cardy_tableau() -> PSymbol:
    return PSymbol.build({"0": [0, F(1, 3)], "1": [0, F(1, 3)], INF: [0, F(1, 3)]})


def third_order_tableau() -> PSymbol:
    return PSymbol.build({"0": [0, F(1, 3), 1], "1": [0, F(1, 3), 1], INF: [0, F(1, 3), 0]})


def fifth_order_tableau() -> PSymbol:
    col = [0, F(1, 3), 0, 1, 2]
    return PSymbol.build({"0": col, "1": col, INF: col})


def surr_tableau() -> PSymbol:
    return PSymbol.build({"0": [0, F(1, 2)], "1": [0, F(1, 3)], INF: [0, F(1, 6)]})


def schwarz_branch_map() -> BranchMap:
    # S sends the triangle vertices A, B, C to inf, 0, 1, each with local degree 3
    return BranchMap.build([("[A]", INF, 3), ("[B]", "0", 3), ("[C]", "1", 3)])


def square_branch_map() -> BranchMap:
    # z -> -z^2
    return BranchMap.build([("0", "0", 2), ("-i", "1", 1), ("i", "1", 1), (INF, INF, 2)], "z")


def whipple_branch_map() -> BranchMap:
    # w -> -4w/(1-w)^2
    return BranchMap.build([("0", "0", 1), (INF, "0", 1), ("1", INF, 2), ("-1", "1", 2)], "w")


def whipple_tableaux():
    """(lhs, rhs, rhs_pulled, lhs_shifted) for the quadratic 3F2 transformation with symbolic a, b, c."""
    a, b, c = sym("a"), sym("b"), sym("c")
    lhs = hyper_psymbol([a, b, c], [1 + a - b, 1 + a - c], "w")
    rhs = hyper_psymbol([a / 2, (a + 1) / 2, a - b - c + 1], [1 + a - b, 1 + a - c], "z")
    pulled = pullback(rhs, whipple_branch_map())
    return lhs, rhs, pulled, shift_by_prefactor(pulled, "1", -a)
