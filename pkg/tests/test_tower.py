import itertools

import pytest
from hypothesis import assume, given, strategies as st

from wildram.errors import InvalidTower, PreconditionFailed, ResidueSplit
from wildram.ffield import field
from wildram.fpspace import Subspace
from wildram.laurent import LaurentSeries, parse_series, precision_window
from wildram.tower import (ASTower, ClaimState, claim_chain, claim_initial_state,
                           claim_reduction_step, different_hilbert, different_via_derivative,
                           elem_arith, filtration_from_jumps, galois_apply, minimal_polynomial,
                           norm, norm_by_conjugates, norm_full_matrix, norm_valuation,
                           ramification_filtration, uniformizer, RamificationFiltration)


def T(p, e, rhs, tame=1):
    return ASTower.from_strings(p, e, rhs, tame)


def lower_jumps(p, ell, breaks):
    """Herbrand: distinct upper breaks u_1 < u_2 < ... with multiplicities d_k."""
    ups = sorted(set(breaks.values()))
    # dimension of the span of lines with break <= u, minus the previous one
    dims = []
    for u in ups:
        span = Subspace(p, ell, [c for c, b in breaks.items() if b <= u])
        dims.append(span.dim)
    out, lower, prev = [], 0, 0
    seen = 0
    for u, d in zip(ups, dims):
        lower = u if not out else lower + p ** seen * (u - prev)
        out.append(lower)
        prev, seen = u, d
    return out


# -- arithmetic ---------------------------------------------------------


def test_defining_relation():
    for p, e in [(2, 1), (3, 1), (3, 2)]:
        t = T(p, e, ["x^-1"] if e == 1 else ["w*x^-1"])
        T1 = t.gen(1)
        assert elem_arith("mul", T1, T1 ** (p - 1)) == T1 + t.const(t.fs[0])


def test_identity_element():
    t = T(3, 1, ["x^-1", "x^-2"])
    a = t.gen(1) * t.gen(2) + t.x()
    assert a * 1 == a and a * t.one() == a


def test_square_in_char_two():
    t = T(2, 1, ["x^-1"])
    T1 = t.gen(1)
    assert (T1 + 1) ** 2 == T1 + t.const(parse_series("x^-1 + 1", t.params))


def test_coefficient_view_and_zero():
    t = T(2, 1, ["x^-1", "x^-3"])
    z = t.gen(1) * t.gen(2) - t.gen(2) * t.gen(1)
    assert z.is_zero() and z.coeffs == {}
    a = t.gen(2) + t.x()
    assert a.coeffs == {(0, 0): LaurentSeries.x(t.params), (0, 1): LaurentSeries.one(t.params)}


def test_invalid_towers_rejected():
    with pytest.raises(InvalidTower):
        T(2, 1, ["x^-1", "x^-1"])
    with pytest.raises(InvalidTower):
        T(2, 1, ["x"])
    with pytest.raises(ValueError):
        T(3, 1, ["x^-1"], tame=3)


def test_galois_examples():
    t = T(2, 1, ["x^-1"])
    z = t.gen(1) * t.x() + 1
    assert galois_apply((0,), z) == z
    assert galois_apply((1,), t.gen(1)) == t.gen(1) + 1


def test_galois_fixes_wp_of_generator_combinations():
    t = T(3, 1, ["x^-1", "x^-2"])
    for c in itertools.product(range(3), repeat=2):
        z = t.gen(1).scale(c[0]) + t.gen(2).scale(c[1])
        r = z ** 3 - z
        assert r.lies_in(0)
        for sigma in t.group_elements():
            assert galois_apply(sigma, r) == r


def test_group_law_is_vector_addition():
    t = T(3, 1, ["x^-1", "x^-2"])
    z = t.gen(1) ** 2 * t.gen(2) + t.gen(2) ** 2 * t.x()
    for a in t.group_elements():
        for b in t.group_elements():
            ab = tuple((x + y) % 3 for x, y in zip(a, b))
            assert galois_apply(a, galois_apply(b, z)) == galois_apply(ab, z)


# -- norms and valuations -----------------------------------------------


@pytest.mark.parametrize("p,e,rhs", [
    (2, 1, ["x^-1"]), (2, 1, ["x^-3"]), (3, 1, ["x^-5"]), (2, 1, ["x^-1", "x^-3"]),
    (3, 2, ["x^-1", "w*x^-2"]), (2, 3, ["x^-1", "w*x^-1", "w^2*x^-1"]),
])
def test_norm_valuation_basics(p, e, rhs):
    t = T(p, e, rhs)
    assert norm_valuation(t.x()) == p ** t.ell
    assert norm_valuation(t.one()) == 0
    assert norm_valuation(t.zero()) == float("inf")
    m = t.line_breaks[(1,) + (0,) * (t.ell - 1)]
    assert norm_valuation(t.gen(1)) == -m * p ** (t.ell - 1)


def test_single_generator_valuation_is_minus_break():
    for m in (1, 3, 5, 7):
        t = T(2, 1, [f"x^-{m}"])
        assert norm_valuation(t.gen(1)) == -m


def test_norm_routes_agree_on_a_small_tower():
    t = T(2, 1, ["x^-1", "x^-3"])
    X, T1, T2 = t.x(), t.gen(1), t.gen(2)
    for z in [T1, T2, T1 * T2 + X, T1 + T2 * X ** 2 + 1, (T1 + X) * (T2 + X ** -1)]:
        n = norm(z)
        assert n == norm_full_matrix(z)
        assert n.agrees(norm_by_conjugates(z))


def test_norm_is_multiplicative():
    t = T(3, 1, ["x^-1", "x^-2"])
    a = t.gen(1) + t.x()
    b = t.gen(2) ** 2 + t.gen(1)
    assert norm(a * b) == norm(a) * norm(b)


def test_frame_breaks_are_lower_relative_breaks():
    assert T(2, 1, ["x^-1", "x^-3"]).frame.breaks == [1, 5]
    assert T(3, 1, ["x^-5", "x^-2"]).frame.breaks == [5, 2]
    assert T(2, 1, ["x^-5", "x^-5 + x^-3"]).frame.breaks == [5, 3]


def test_frame_integral_basis_valuations():
    t = T(3, 1, ["x^-1", "x^-2"])
    vals = sorted(norm_valuation(m) for m in t.frame.integral_basis())
    assert vals == list(range(t.degree))


# -- reduction chain and uniformizer ----------------------------------------


def test_claim_single_extension():
    t = T(3, 1, ["x^-1"])
    state = claim_chain(t)
    assert state.level == 1
    assert norm_valuation(state.y) == 1
    assert state.y_inverse == t.gen(1)


def test_claim_over_f4():
    t = T(2, 2, ["x^-1", "w*x^-1"])
    F = t.params
    s0 = claim_initial_state(t)
    s1 = claim_reduction_step(s0)
    w = F.generator
    assert s1.history == [{2: F.serialize(F.mul(w, w))}]
    s2 = claim_reduction_step(s1)
    assert norm_valuation(s2.y) == 1
    with pytest.raises(PreconditionFailed):
        claim_reduction_step(s2)


def test_claim_needs_break_one():
    with pytest.raises(PreconditionFailed):
        claim_initial_state(T(2, 1, ["x^-1", "x^-3"]))


def test_residue_split_is_reported():
    t = T(2, 2, ["x^-1", "w*x^-1"])
    s0 = claim_initial_state(t)
    forged = ClaimState(t, 0, s0.y, s0.y_inverse, dict(s0.betas), {1: 1, 2: 1}, dict(s0.d))
    with pytest.raises(ResidueSplit) as exc:
        claim_reduction_step(forged)
    assert exc.value.j == 2 and exc.value.a_j == [1, 0]
    assert exc.value.payload()["kind"] == "residue_split"


@pytest.mark.parametrize("p,e,rhs", [
    (2, 1, ["x^-1"]), (2, 1, ["x^-3"]), (3, 1, ["x^-2"]), (2, 1, ["x^-1", "x^-3"]),
    (2, 2, ["x^-1", "w*x^-1"]), (3, 2, ["x^-1", "w*x^-1"]), (3, 1, ["x^-5", "x^-2"]),
])
def test_uniformizer_has_valuation_one(p, e, rhs):
    t = T(p, e, rhs)
    assert norm_valuation(uniformizer(t)) == 1


def test_uniformizer_for_break_three():
    t = T(2, 1, ["x^-3"])
    pi = uniformizer(t)
    assert pi == t.gen(1) * t.x() ** 2


def test_uniformizer_of_base():
    t = ASTower(field(2), [])
    assert uniformizer(t) == t.x()


def test_high_precision_does_not_change_answers():
    t = T(3, 2, ["x^-1", "w*x^-1"])
    with precision_window(16):
        a = ramification_filtration(t)
    with precision_window(128):
        b = ramification_filtration(t)
    assert a == b


# -- filtration ---------------------------------------------------------


def test_filtration_break_one_char_two():
    f = ramification_filtration(T(2, 1, ["x^-1"]))
    assert f.orders() == [2, 2, 1]
    assert different_hilbert(f) == 2


def test_filtration_break_three_char_two():
    f = ramification_filtration(T(2, 1, ["x^-3"]))
    assert f.orders() == [2, 2, 2, 2, 1]
    assert different_hilbert(f) == 4 == (3 + 1) * (2 - 1)


def test_filtration_of_base():
    f = ramification_filtration(ASTower(field(3), []))
    assert f.orders() == [1] and different_hilbert(f) == 0


def test_filtration_two_generators():
    t = T(2, 1, ["x^-1", "x^-3"])
    f = ramification_filtration(t)
    assert f.breaks() == [1, 5]
    assert f.orders() == [4, 4, 2, 2, 2, 2, 1]
    assert f.G(2) == Subspace(2, 2, [(0, 1)])
    assert different_hilbert(f) == 10
    assert f.to_json()[2] == {"i": 2, "order": 2, "basis": [[0, 1]]}


def test_different_hilbert_closed_forms():
    full = Subspace.full(2, 2)
    for i in range(4):
        filt = RamificationFiltration(full, [full] * (i + 1))
        assert different_hilbert(filt) == (i + 1) * full.order - i - 1
    trivial = Subspace.zero(3, 0)
    assert different_hilbert(RamificationFiltration(trivial, [trivial])) == 0


def test_non_subgroup_jump_table_rejected():
    with pytest.raises(AssertionError):
        filtration_from_jumps(Subspace.full(2, 2), {(1, 0): 3, (0, 1): 3, (1, 1): 1})


@pytest.mark.parametrize("p,rhs,d", [(2, "x^-1", 2), (3, "x^-1", 4), (2, "x^-3", 4),
                                     (3, "x^-2", 6), (5, "x^-1", 8), (5, "x^-3", 16)])
def test_different_via_derivative(p, rhs, d):
    t = T(p, 1, [rhs])
    assert different_via_derivative(t) == d
    assert different_hilbert(ramification_filtration(t)) == d


def test_minimal_polynomial_of_break_one_uniformizer():
    # pi = 1/T satisfies pi^p + x pi^(p-1) - x = 0 when T^p - T = 1/x
    for p in (2, 3, 5):
        t = T(p, 1, ["x^-1"])
        m = minimal_polynomial(uniformizer(t))
        F = t.params
        x = LaurentSeries.x(F)
        expect = [-x] + [LaurentSeries.zero(F)] * (p - 2) + [x, LaurentSeries.one(F)]
        assert all(a.agrees(b) for a, b in zip(m, expect))


def test_derivative_route_needs_single_extension():
    with pytest.raises(PreconditionFailed):
        different_via_derivative(T(2, 1, ["x^-1", "x^-3"]))


@pytest.mark.parametrize("p,e,rhs", [
    (2, 1, ["x^-1", "x^-3"]), (2, 1, ["x^-3", "x^-5"]), (2, 1, ["x^-5", "x^-5 + x^-3"]),
    (3, 1, ["x^-1", "x^-2"]), (3, 1, ["x^-5", "x^-2"]), (3, 2, ["x^-2", "w*x^-2"]),
    (2, 1, ["x^-1", "x^-3", "x^-5"]), (2, 1, ["x^-3", "x^-3 + x^-1"]), (5, 1, ["x^-1", "x^-2"]),
])
def test_filtration_matches_herbrand_conversion(p, e, rhs):
    t = T(p, e, rhs)
    f = ramification_filtration(t)
    assert f.breaks() == lower_jumps(p, t.ell, t.line_breaks)
    assert f == ramification_filtration(t, method="frame")


def test_tower_json_round_trip():
    t = T(3, 2, ["x^-1 + x^2", "w*x^-2"], tame=5)
    d = t.to_json()
    assert d == {"schema": 1, "p": 3, "e": 2, "tame_index": 5, "rhs": ["x^-1", "[0,1]*x^-2"]}
    assert ASTower.from_json(d) == t


# -- properties over random towers --------------------------------------


@st.composite
def towers(draw, max_ell=2):
    p, e = draw(st.sampled_from([(2, 1), (2, 2), (3, 1), (3, 2)]))
    F = field(p, e)
    ell = draw(st.integers(1, max_ell))
    rhs = []
    for _ in range(ell):
        terms = draw(st.dictionaries(st.integers(-7, -1), st.integers(1, F.q - 1),
                                     min_size=1, max_size=3))
        rhs.append(LaurentSeries.from_dict(F, terms))
    try:
        return ASTower(F, rhs)
    except InvalidTower:
        assume(False)


@st.composite
def elements_of(draw, t):
    F = t.params
    z = t.zero()
    for mono in itertools.product(range(t.p), repeat=t.ell):
        if draw(st.booleans()):
            terms = draw(st.dictionaries(st.integers(-4, 4), st.integers(1, F.q - 1), max_size=3))
            z = z + t.element({mono: LaurentSeries.from_dict(F, terms)})
    return z


@given(towers(), st.data())
def test_galois_is_a_ring_homomorphism(t, data):
    a, b = data.draw(elements_of(t)), data.draw(elements_of(t))
    sigma = data.draw(st.sampled_from(t.group_elements()))
    g = lambda z: galois_apply(sigma, z)
    assert g(a + b) == g(a) + g(b)
    assert g(a * b) == g(a) * g(b)
    assert g(t.x()) == t.x()


@given(towers(), st.data())
def test_valuations_agree_and_are_galois_invariant(t, data):
    z = data.draw(elements_of(t))
    assume(not z.is_zero())
    v = norm_valuation(z)
    assert t.frame.valuation(z) == v
    sigma = data.draw(st.sampled_from(t.group_elements()))
    assert norm_valuation(galois_apply(sigma, z)) == v


@given(towers(), st.data())
def test_valuation_is_additive(t, data):
    a, b = data.draw(elements_of(t)), data.draw(elements_of(t))
    assume(not a.is_zero() and not b.is_zero())
    assert norm_valuation(a * b) == norm_valuation(a) + norm_valuation(b)


@given(towers())
def test_filtration_invariants(t):
    f = ramification_filtration(t)
    assert sum(f.jumps.values()) == different_hilbert(f)
    assert f.G(0) == f.G(1) == t.group()
    for i in range(len(f.groups) - 1):
        assert f.G(i + 1) <= f.G(i)
    assert f.groups[-1].is_zero()
    if t.all_breaks_one():
        assert different_hilbert(f) == 2 * t.degree - 2
    if t.ell == 1:
        m = t.line_breaks[(1,)]
        assert f.breaks() == [m]
        assert different_hilbert(f) == (m + 1) * (t.p - 1)
        assert different_via_derivative(t) == different_hilbert(f)
    assert f.breaks() == lower_jumps(t.p, t.ell, t.line_breaks)
