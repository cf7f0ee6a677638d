import pytest
from hypothesis import given, strategies as st

from wildram.errors import DivisionByZero, ParseError, PrecisionExhausted
from wildram.ffield import field
from wildram.laurent import (INF, LaurentSeries, _KRONECKER_MIN, _conv, default_window,
                             format_series, ls_arith, ls_frobenius, ls_substitute_power,
                             ls_valuation, parse_series, precision_window)

from strategies import fields, nonzero_series, series

F2, F3, F4 = field(2), field(3), field(2, 2)


def S(text, F=F2):
    return parse_series(text, F)


def test_characteristic_two_cancellation():
    assert ls_arith("add", S("x^-1 + 1"), S("x^-1")) == S("1")


def test_exact_product():
    r = ls_arith("mul", S("x^-1"), S("x"))
    assert r == LaurentSeries.one(F2) and r.exact


def test_geometric_series_in_char_three():
    inv = ls_arith("div", S("1", F3), S("1 - x", F3))
    assert not inv.exact and inv.prec == default_window()
    assert all(inv.coefficient(k) == 1 for k in range(default_window()))
    back = inv * S("1 - x", F3)
    assert back.agrees(LaurentSeries.one(F3))
    assert back.prec == default_window()


def test_valuation_examples():
    assert ls_valuation(S("x^-3 + x")) == -3
    assert ls_valuation(LaurentSeries.zero(F2)) == INF
    a = S("x^-2 + x^5")
    assert ls_valuation(ls_arith("sub", a, a)) == INF


def test_valuation_of_inexact_zero_raises():
    z = S("O(x^4)")
    assert not z.exact and z.prec == 4
    with pytest.raises(PrecisionExhausted) as exc:
        z.valuation()
    assert exc.value.suggested is not None


def test_division_by_exact_zero():
    with pytest.raises(DivisionByZero):
        ls_arith("div", S("1"), LaurentSeries.zero(F2))


def test_frobenius_examples():
    assert ls_frobenius(S("x^-1 + 1")) == S("x^-2 + 1")
    assert ls_frobenius(S("2*x", F3)) == S("2*x^3", F3)
    a = S("x + O(x^5)")
    assert ls_frobenius(a).prec == 10


def test_substitute_power_examples():
    assert ls_substitute_power(S("x^-1"), 3) == S("x^-3")
    assert ls_substitute_power(S("x^-1 + x", F3), 2) == S("x^-2 + x^2", F3)


def test_precision_propagation_rules():
    a = S("x^-1 + x + O(x^3)")
    b = S("x^2 + O(x^6)")
    assert (a + b).prec == 3
    assert (a * b).prec == min(3 + 2, 6 - 1)
    exact = S("x^-2")
    assert (a * exact).prec == 1


def test_precision_window_context():
    with precision_window(10):
        assert default_window() == 10
        inv = S("1 + x").inverse()
        assert inv.prec == 10
    assert default_window() == 64


def test_inverse_of_exact_monomial_is_exact():
    m = LaurentSeries.monomial(F4, 2, -3)
    inv = m.inverse()
    assert inv.exact and (m * inv) == LaurentSeries.one(F4)


@pytest.mark.parametrize("F", [F2, F3, F4, field(3, 2), field(5, 3)])
def test_kronecker_agrees_with_schoolbook(F):
    import random

    rng = random.Random(7)
    n = 3 * _KRONECKER_MIN
    a = [rng.randrange(F.q) for _ in range(n)]
    b = [rng.randrange(F.q) for _ in range(n + 5)]
    naive = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            naive[i + j] = F.add(naive[i + j], F.mul(x, y))
    assert _conv(F, a, b) == naive


# -- parsing ----------------------------------------------------------


@pytest.mark.parametrize("text,terms", [
    ("x^-3 + 2*x^-1 + x^2", {-3: 1, -1: 2, 2: 1}),
    ("-x", {1: 2}),
    ("1 + x + x^2", {0: 1, 1: 1, 2: 1}),
    ("2*x^-1 + O(x^3)", {-1: 2}),
])
def test_parse_examples(text, terms):
    assert S(text, F3).terms() == terms


def test_parse_extension_field_constants():
    F9 = field(3, 2)
    w = F9.generator
    assert S("w*x^-1", F9).terms() == {-1: w}
    assert S("w^2*x", F9).terms() == {1: F9.mul(w, w)}
    assert S("[1,2]*x^0", F9).terms() == {0: F9.from_digits([1, 2])}
    assert S("(1 + w)*x^-2", F9).terms() == {-2: F9.add(1, w)}


@pytest.mark.parametrize("text", ["3*x", "2x^-1", "w*x", "x^", "x^-1 +", "x^1.5", "(x)", "y^2"])
def test_parse_rejects(text):
    with pytest.raises(ParseError):
        parse_series(text, F2)


@given(fields(), st.data())
def test_format_parse_round_trip(F, data):
    a = data.draw(series(F))
    assert parse_series(format_series(a), F) == a


# -- properties -------------------------------------------------------


@given(fields(), st.data())
def test_ring_axioms_on_window(F, data):
    a, b, c = (data.draw(series(F)) for _ in range(3))
    assert ((a + b) + c).agrees(a + (b + c))
    assert ((a * b) * c).agrees(a * (b * c))
    assert (a * (b + c)).agrees(a * b + a * c)
    assert (a * b).agrees(b * a)
    assert (a - a).agrees(LaurentSeries.zero(F))


@given(fields(), st.data())
def test_valuation_is_multiplicative(F, data):
    a = data.draw(nonzero_series(F))
    b = data.draw(nonzero_series(F))
    assert (a * b).valuation() == a.valuation() + b.valuation()


@given(fields(), st.data())
def test_ultrametric_inequality(F, data):
    a = data.draw(nonzero_series(F, exact=True))
    b = data.draw(nonzero_series(F, exact=True))
    s = a + b
    if a.valuation() != b.valuation():
        assert s.valuation() == min(a.valuation(), b.valuation())
    else:
        assert s.valuation_bound() >= a.valuation()


@given(fields(), st.data())
def test_frobenius_matches_repeated_product(F, data):
    a = data.draw(series(F))
    prod = LaurentSeries.one(F)
    for _ in range(F.p):
        prod = prod * a
    assert ls_frobenius(a).agrees(prod)


@given(fields(), st.data())
def test_frobenius_is_a_ring_homomorphism(F, data):
    a, b = data.draw(series(F)), data.draw(series(F))
    fr = ls_frobenius
    assert fr(a + b).agrees(fr(a) + fr(b))
    assert fr(a * b).agrees(fr(a) * fr(b))


@given(fields(), st.data(), st.integers(1, 7))
def test_substitution_scales_valuation(F, data, n):
    a = data.draw(nonzero_series(F))
    assert ls_substitute_power(a, n).valuation() == n * a.valuation()


@given(fields(), st.data())
def test_inverse_multiplies_back(F, data):
    a = data.draw(nonzero_series(F))
    with precision_window(20):
        inv = a.inverse()
        assert (a * inv).agrees(LaurentSeries.one(F))


@given(fields(), st.data())
def test_normalized_representation(F, data):
    a = data.draw(series(F))
    if a.coeffs:
        assert a.coeffs[0] != 0
        assert not a.exact or a.coeffs[-1] != 0
        assert a.prec > a.lead
    if a.exact:
        assert a.prec == INF
