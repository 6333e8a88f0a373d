from fractions import Fraction as F
from pathlib import Path

import pytest
from hypothesis import given
from hypothesis import strategies as st

from critperc import psymbol as P

GOLDEN = Path(__file__).parent / "golden"


def test_affine_arithmetic_and_parse():
    a, b = P.sym("a"), P.sym("b")
    e = P.parse_exponent("2*(a-b-c+1)")
    assert e == 2 * a - 2 * b - 2 * P.sym("c") + 2
    assert P.parse_exponent("(a+1)/2") == (a + 1) / 2
    assert P.parse_exponent("−1/3") == P.Affine.of(F(-1, 3))
    assert str(P.parse_exponent("b-a")) == "-a + b"
    with pytest.raises(P.PSymbolError):
        P.parse_exponent("a*b")
    with pytest.raises(P.PSymbolError):
        P.parse_exponent("a**2")
    with pytest.raises(TypeError):
        P.Affine.of(0.5)


def test_hyper_tableaux():
    raw = P.hyper_psymbol([F(1, 3), F(2, 3)], [F(4, 3)])
    assert P.equals(raw, P.PSymbol.build({"0": [0, F(-1, 3)], "1": [0, F(1, 3)], "inf": [F(1, 3), F(2, 3)]}))
    assert P.equals(P.shift_by_prefactor(raw, "0", F(1, 3)), P.cardy_tableau())
    raw2 = P.hyper_psymbol([1, 1, F(4, 3)], [2, F(5, 3)])
    assert P.equals(raw2, P.PSymbol.build({"0": [0, -1, F(-2, 3)], "1": [0, 1, F(1, 3)], "inf": [1, 1, F(4, 3)]}))
    assert P.equals(P.shift_by_prefactor(raw2, "0", 1), P.third_order_tableau())
    assert raw2.exponent_sum() == P.Affine.of(3)


def test_shift_identity_and_errors():
    t = P.cardy_tableau()
    assert P.equals(P.shift_by_prefactor(t, "0", 0), t)
    with pytest.raises(P.PSymbolError):
        P.shift_by_prefactor(t, "7", 1)
    with pytest.raises(P.PSymbolError):
        P.shift_by_prefactor(t, "inf", 1)


def test_equals_semantics():
    t = P.cardy_tableau()
    perm = P.PSymbol.build({"inf": [F(1, 3), 0], "1": [F(1, 3), 0], "0": [0, F(1, 3)]})
    assert P.equals(t, perm)
    assert not P.equals(t, P.third_order_tableau())
    assert not P.equals(t, P.PSymbol.build({"0": [0, F(1, 3)], "1": [0, F(1, 3)], "inf": [0, F(2, 3)]}))


def test_invariants_enforced():
    with pytest.raises(P.PSymbolError):
        P.PSymbol.build([("0", [0, 1]), ("0", [0, 2])])
    with pytest.raises(P.PSymbolError):
        P.PSymbol.build({"0": [0, 1], "1": [0]})
    with pytest.raises(P.PSymbolError):
        P.BranchMap.build([("0", "0", 0)])


def test_schwarz_pullbacks():
    assert P.pullback(P.cardy_tableau(), P.schwarz_branch_map()).is_trivial()
    got = P.pullback(P.third_order_tableau(), P.schwarz_branch_map())
    want = P.PSymbol.build({"[A]": [0, 1, 0], "[B]": [0, 1, 3], "[C]": [0, 1, 3]}, variable="w")
    assert P.equals(got, want)


def test_square_pullback_drops_ordinary_column():
    got = P.pullback(P.surr_tableau(), P.square_branch_map())
    assert "0" not in got.points
    assert P.equals(got, P.PSymbol.build({"-i": [0, F(1, 3)], "i": [0, F(1, 3)], "∞": [0, F(1, 3)]}))
    kept = P.pullback(P.surr_tableau(), P.square_branch_map(), keep_ordinary=True)
    assert [str(e) for e in kept.column("0")] == ["0", "1"]


def test_whipple_tableaux():
    lhs, rhs, pulled, shifted = P.whipple_tableaux()
    want = P.PSymbol.build(
        {"0": ["0", "b-a", "c-a"], "1": ["a", "a+1", "2*(a-b-c+1)"], "inf": ["0", "b-a", "c-a"]}, variable="w"
    )
    assert P.equals(pulled, want)
    assert "-1" not in pulled.points
    assert P.equals(shifted, lhs)
    assert P.equals(rhs, P.PSymbol.build({"0": ["0", "b-a", "c-a"], "1": ["0", "1", "1/2"], "inf": ["a-b-c+1", "a/2", "(a+1)/2"]}))


def test_missing_image_column():
    m = P.BranchMap.build([("x", "5", 2)])
    with pytest.raises(P.PSymbolError):
        P.pullback(P.cardy_tableau(), m)
    # an unramified preimage of an ordinary point stays ordinary
    assert P.pullback(P.cardy_tableau(), P.BranchMap.build([("x", "5", 1)])).is_trivial()


@pytest.mark.parametrize(
    "name,build",
    [
        ("pullback_third_schwarz.txt", lambda: P.pullback(P.third_order_tableau(), P.schwarz_branch_map())),
        ("pullback_surr_square.txt", lambda: P.pullback(P.surr_tableau(), P.square_branch_map())),
        ("whipple_pulled.txt", lambda: P.whipple_tableaux()[2]),
        ("fifth_order.txt", P.fifth_order_tableau),
    ],
)
def test_render_golden(name, build):
    assert build().render() + "\n" == (GOLDEN / name).read_text()


def test_dict_round_trip():
    t = P.whipple_tableaux()[0]
    assert P.equals(P.from_dict(P.to_dict(t)), t)


fracs = st.fractions(min_value=-3, max_value=3, max_denominator=12)


@given(st.lists(fracs, min_size=3, max_size=3), st.lists(fracs.filter(lambda x: x.denominator > 1 or x > 0), min_size=2, max_size=2))
def test_exponent_sum_rule(alphas, betas):
    assert P.hyper_psymbol(alphas, betas).exponent_sum() == P.Affine.of(P.expected_exponent_sum(2))


@given(fracs, fracs)
def test_shift_preserves_sum(c, d):
    t = P.shift_by_prefactor(P.shift_by_prefactor(P.third_order_tableau(), "0", c), "1", d)
    assert t.exponent_sum() == P.third_order_tableau().exponent_sum()


@given(st.integers(1, 6), st.integers(2, 5))
def test_ordinary_signature_pullback(mult, n):
    ordinary = P.PSymbol.build({"p": list(range(n))})
    got = P.pullback(ordinary, P.BranchMap.build([("x", "p", 1)]))
    assert got.is_trivial()
    if mult > 1:
        assert not P.pullback(ordinary, P.BranchMap.build([("x", "p", mult)])).is_trivial()
