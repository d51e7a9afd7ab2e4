import math
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from skbasis.cost import (
    AffineGerm,
    cost,
    cost_slopes_fixed_tv,
    cost_with_floors,
    deck_action_on_germ,
    deck_action_on_L,
    legendre_phi0_star,
    pairing_bracket,
    phi0,
)
from skbasis.oracles import (
    BracketOracle,
    WindowCertificateError,
    bracket_oracle,
    legendre_oracle,
    phi0_oracle,
)

rat = st.fractions(min_value=-20, max_value=20, max_denominator=24)


def test_deck_actions():
    assert deck_action_on_L(1, (0, 0)) == (-3, 9)
    assert deck_action_on_L(0, (5, 7)) == (5, 7)
    assert deck_action_on_germ(1, AffineGerm(F(0), F(0))) == AffineGerm(F(-9), F(-18))
    assert deck_action_on_germ(2, AffineGerm(F(9), F(0))) == AffineGerm(F(-9), F(-9))


@given(st.integers(-4, 4), rat, rat)
def test_deck_inverse(power, t, a):
    assert deck_action_on_L(-power, deck_action_on_L(power, (t, a))) == (t, a)
    g = AffineGerm(t, a)
    assert deck_action_on_germ(-power, deck_action_on_germ(power, g)) == g


@given(rat, rat)
def test_germ_action_translates_offsets(tv, b):
    # the generator only shifts the offset by an amount depending on tv
    g = AffineGerm(tv, b)
    g2 = deck_action_on_germ(1, AffineGerm(tv, b + 1))
    g1 = deck_action_on_germ(1, g)
    assert g2.offset_b - g1.offset_b == 1


@pytest.mark.parametrize("t, want", [(0, -1), (F(1, 2), F(1, 2)), (1, 2)])
def test_phi0_examples(t, want):
    assert phi0(t) == want == phi0_oracle(t)


@pytest.mark.parametrize("t, tv, want", [(0, 0, 0), (1, 9, 9)])
def test_bracket_examples(t, tv, want):
    assert pairing_bracket(t, tv) == want == bracket_oracle(t, tv)


def test_bracket_tie_between_adjacent_orbit_elements():
    # (tv - 3t)/9 + 1/3 integral: two germs of the orbit realise the sup
    t, tv = F(0), F(6)
    o = BracketOracle(tv, t_bound=1)
    values = sorted(g(t) for g in o.germs)
    assert values[-1] == values[-2] == pairing_bracket(t, tv)


@pytest.mark.parametrize("tv", [0, 3, F(3, 2)])
def test_legendre_examples(tv):
    assert legendre_phi0_star(tv) == legendre_oracle(tv)
    if tv in (0, 3):
        assert legendre_phi0_star(tv) == 1


@settings(max_examples=60, deadline=None)
@given(rat, rat)
def test_closed_forms_match_oracles(t, tv):
    assert phi0(t) == phi0_oracle(t)
    assert pairing_bracket(t, tv) == bracket_oracle(t, tv)


@settings(max_examples=15, deadline=None)
@given(st.fractions(min_value=-9, max_value=9, max_denominator=12))
def test_legendre_matches_oracle(tv):
    assert legendre_phi0_star(tv) == legendre_oracle(tv)


def test_oracle_window_is_checked():
    o = BracketOracle(0, t_bound=1)
    with pytest.raises(WindowCertificateError):
        o(5)
    with pytest.raises(WindowCertificateError):
        legendre_oracle(0, t_lo=0, t_hi=2)


@pytest.mark.parametrize(
    "t, tv, want",
    [(0, F(3, 2), 0), (0, 0, 0), (-3, 0, 0), (F(1, 2), 3, 0)],
)
def test_cost_examples(t, tv, want):
    assert cost(t, tv).value == want


@given(rat, rat)
def test_integer_evaluation_matches_the_plain_formula(t, tv):
    k, l = math.floor(t), math.floor(tv / 3)
    m = math.floor((tv - 3 * t) / 9 + F(1, 3))
    c = cost(t, tv)
    assert (c.k, c.l, c.m) == (k, l, m)
    assert c.value == cost_with_floors(t, tv, k, l, m)
    assert phi0(t) == 3 * (k + 1) * t - 1 - F(3 * k * (k + 1), 2)
    assert legendre_phi0_star(tv) == l * tv + 1 - F(3 * l * (l + 1), 2)
    assert pairing_bracket(t, tv) == (tv - 9 * m) * (t + 3 * m) + F(9 * m * (3 * m - 1), 2)


@given(rat, rat)
def test_cost_decomposition(t, tv):
    c = cost(t, tv)
    assert c.value == -pairing_bracket(t, tv) + phi0(t) + legendre_phi0_star(tv)


@given(rat, rat)
def test_cost_descends_to_the_quotients(t, tv):
    c = cost(t, tv).value
    assert cost(t - 3, tv).value == c
    assert cost(t, tv - 9).value == c
    assert cost(t + 1, tv + 3).value == c


@given(rat, rat, st.sampled_from(["k", "l", "m"]))
def test_cost_is_continuous_across_floor_jumps(t, tv, which):
    # at a jump of one floor quantity, the formula with the floor one lower
    # must give the same value
    c = cost(t, tv)
    k, l, m = c.k, c.l, c.m
    at_jump = {"k": t == k, "l": tv == 3 * l, "m": (tv - 3 * t) / 9 + F(1, 3) == m}[which]
    if at_jump:
        lower = {"k": (k - 1, l, m), "l": (k, l - 1, m), "m": (k, l, m - 1)}[which]
        assert cost_with_floors(t, tv, *lower) == c.value


def test_slope_law_examples():
    slopes = [s for _, s in cost_slopes_fixed_tv(F(3, 2))]
    assert slopes == [F(3, 2), F(9, 2), F(-9, 2), F(-3, 2)]
    assert [s for _, s in cost_slopes_fixed_tv(0)] == [3, 6, -3, 0]
    assert cost_slopes_fixed_tv(3)[1][0] == (1, 2)
    with pytest.raises(ValueError):
        cost_slopes_fixed_tv(4)


@given(st.fractions(min_value=0, max_value=3, max_denominator=16))
def test_slope_law_matches_finite_differences(tv):
    for (lo, hi), slope in cost_slopes_fixed_tv(tv):
        if hi > lo:
            assert cost(hi, tv).value - cost(lo, tv).value == slope * (hi - lo)
            mid = (lo + hi) / 2
            assert cost(mid, tv).value - cost(lo, tv).value == slope * (mid - lo)
