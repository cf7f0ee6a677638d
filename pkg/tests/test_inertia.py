import pytest
from hypothesis import given, strategies as st

from wildram.errors import NegativeGenus, NonIntegralGenus, NotTotallyRamified, PreconditionFailed
from wildram.fpspace import Subspace, all_subspaces
from wildram.inertia import (LocalCoverPair, compositum, fixed_field_tower, g2_characterize,
                             gi_containment_bound, jump_at_two, kill_wild, quotient_filtration,
                             relative_presentation, restrict_filtration, rh_genus, tame_pullback,
                             transitivity_check)
from wildram.tower import ASTower, different_hilbert, ramification_filtration

from test_tower import towers


def T(p, e, rhs, tame=1):
    return ASTower.from_strings(p, e, rhs, tame)


MIXED = T(2, 1, ["x^-1", "x^-3"])
H01 = Subspace(2, 2, [(0, 1)])


def test_g2_examples():
    assert g2_characterize(T(2, 2, ["x^-1", "w*x^-1"])).is_zero()
    assert g2_characterize(MIXED) == H01
    assert g2_characterize(MIXED) == ramification_filtration(MIXED).G(2)
    assert g2_characterize(T(2, 1, ["x^-3", "x^-5"])).is_full()


def test_jump_at_two_examples():
    assert jump_at_two(T(2, 1, ["x^-1"]))
    assert not jump_at_two(T(2, 1, ["x^-3"]))
    assert jump_at_two(MIXED)


def test_containment_bound_examples():
    assert gi_containment_bound(MIXED, 1) == g2_characterize(MIXED)
    t = T(2, 1, ["x^-3"])
    assert gi_containment_bound(t, 3).is_zero()
    assert ramification_filtration(t).G(4).is_zero()
    with pytest.raises(PreconditionFailed):
        gi_containment_bound(MIXED, 2)
    with pytest.raises(PreconditionFailed):
        gi_containment_bound(MIXED, 0)


def test_containment_bound_without_lines_of_that_break():
    t = T(2, 1, ["x^-3", "x^-5"])
    assert gi_containment_bound(t, 2).is_full()
    assert ramification_filtration(t).G(3).is_full()


def test_restrict_examples():
    f = ramification_filtration(MIXED)
    assert restrict_filtration(MIXED, Subspace.full(2, 2)) == f
    assert restrict_filtration(MIXED, Subspace.zero(2, 2)).orders() == [1]
    r = restrict_filtration(MIXED, H01)
    assert r.orders() == [2, 2, 2, 2, 2, 2, 1]
    assert r == restrict_filtration(MIXED, H01, method="relative")


def test_relative_presentation_coordinates():
    rel = relative_presentation(MIXED, H01)
    assert rel.fixed_dim == 1
    assert rel.tower.fs[0] == MIXED.fs[0]
    assert rel.subgroup == Subspace(2, 2, [(0, 1)])


def test_quotient_examples():
    f = ramification_filtration(MIXED)
    q = quotient_filtration(MIXED, 2, filt=f)
    assert q.orders() == [2, 2, 1] and q.breaks() == [1]
    assert q == quotient_filtration(MIXED, 2, method="oracle")
    assert fixed_field_tower(MIXED, f.G(2)).fs == MIXED.fs[:1]
    last = quotient_filtration(MIXED, 50, filt=f)
    assert last.orders() == f.orders()
    with pytest.raises(PreconditionFailed):
        quotient_filtration(MIXED, -1)


def test_quotient_at_smallest_jump_has_one_jump():
    t = T(3, 1, ["x^-1", "x^-2"])
    f = ramification_filtration(t)
    j = f.breaks()[0] + 1
    q = quotient_filtration(t, j, filt=f)
    assert len(q.breaks()) == 1
    assert q == quotient_filtration(t, j, method="oracle")


def test_transitivity_examples():
    d = different_hilbert(ramification_filtration(MIXED))
    assert transitivity_check(MIXED, Subspace.zero(2, 2)) == (d, d)
    assert transitivity_check(MIXED, Subspace.full(2, 2)) == (d, d)
    assert transitivity_check(MIXED, H01) == (10, 10)


def test_compositum_examples():
    X = T(2, 1, ["x^-1"])
    Z = T(2, 1, ["x^-3"])
    res = compositum(LocalCoverPair(X, Z))
    assert res.tower == MIXED and not res.span_collapse and res.tower.degree == 4
    res = compositum(LocalCoverPair(MIXED, T(2, 1, ["x^-1 + x^-3"])))
    assert res.tower == MIXED and res.span_collapse
    res = compositum(LocalCoverPair(X, X))
    assert res.tower == X and res.span_collapse


def test_compositum_with_residue_growth():
    X = T(2, 1, ["x^-1"])
    Z = T(2, 1, ["x^-1 + 1"])
    with pytest.raises(NotTotallyRamified):
        compositum(LocalCoverPair(X, Z))


def test_compositum_needs_common_base():
    with pytest.raises(ValueError):
        LocalCoverPair(T(2, 1, ["x^-1"]), T(2, 2, ["x^-1"]))


def test_kill_wild_examples():
    res = kill_wild(MIXED, Subspace.zero(2, 2))
    assert res.towerZ == MIXED and res.relative_different == 0
    res = kill_wild(MIXED, Subspace.full(2, 2))
    assert res.towerZ.ell == 0 and res.relative_inertia.is_full()
    res = kill_wild(MIXED, H01)
    assert res.towerZ.fs == MIXED.fs[:1]
    assert res.fixing_group == H01
    assert res.relative_filtration == restrict_filtration(MIXED, H01)
    assert res.relative_different == 6


def test_tame_pullback_examples():
    t = T(2, 1, ["x^-1"])
    assert tame_pullback(t, 1) == t
    pulled = tame_pullback(t, 3)
    assert [str(f) for f in pulled.fs] == ["x^-3"] and pulled.line_breaks == {(1,): 3}
    with pytest.raises(PreconditionFailed):
        tame_pullback(t, 2)
    assert tame_pullback(T(3, 1, ["x^-1"], tame=5), 5).tame_index == 1


def test_rh_genus_examples():
    for order in (2, 3, 4, 8, 9):
        assert rh_genus(order, [2 * order - 2]) == 0
    assert rh_genus(2, [4]) == 1
    assert rh_genus(1, []) == 0
    with pytest.raises(NonIntegralGenus):
        rh_genus(2, [1])
    with pytest.raises(NegativeGenus):
        rh_genus(3, [0])
    with pytest.raises(PreconditionFailed):
        rh_genus(0, [])


@pytest.mark.parametrize("p,m", [(2, 1), (2, 3), (2, 5), (3, 1), (3, 2), (3, 5), (5, 3)])
def test_genus_of_single_extension(p, m):
    t = T(p, 1, [f"x^-{m}"])
    d = different_hilbert(ramification_filtration(t))
    assert rh_genus(p, [d]) == (m - 1) * (p - 1) // 2


# -- properties over random towers ------------------------------------------


@given(towers())
def test_g2_and_jump_match_oracle(t):
    f = ramification_filtration(t)
    assert g2_characterize(t) == f.G(2)
    assert jump_at_two(t) == (f.G(2) != t.group())


@given(towers())
def test_containment_whenever_g_equals_gi(t):
    f = ramification_filtration(t)
    for i in range(1, len(f.groups)):
        if f.G(i) == t.group():
            assert gi_containment_bound(t, i, f) <= f.G(i + 1)


@given(towers())
def test_subgroup_laws(t):
    f = ramification_filtration(t)
    for H in all_subspaces(t.p, t.ell):
        r = restrict_filtration(t, H, filt=f)
        assert r == restrict_filtration(t, H, method="relative")
        lhs, rhs = transitivity_check(t, H, f)
        assert lhs == rhs
        k = kill_wild(t, H)
        assert k.fixing_group == H and k.relative_different == different_hilbert(r)


@given(towers(), st.sampled_from([1, 5, 7]))
def test_pullback_scales_breaks(t, n):
    pulled = tame_pullback(t, n)
    assert pulled.line_breaks == {c: n * m for c, m in t.line_breaks.items()}
    assert ramification_filtration(pulled, method="frame").G(1) == pulled.group()


@given(towers(max_ell=1), towers(max_ell=1))
def test_compositum_degree(a, b):
    if a.params is not b.params:
        return
    try:
        res = compositum(LocalCoverPair(a, b))
    except NotTotallyRamified:
        return
    assert res.tower.degree == a.p ** res.dim
    assert res.span_collapse == (res.dim < 2)
