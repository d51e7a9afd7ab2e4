from fractions import Fraction as F
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from skbasis.builder import build_S
from skbasis.sections import (
    CertificationError,
    Section,
    certified_valuation_profile,
    chart_expand,
    coefficient_at,
    section_from_json_text,
    support_floor,
)
from skbasis.series import TruncatedSeries, geom_inverse, hull_to_plfunction, lower_hull

X0, X1, X2, T = Section.x(0), Section.x(1), Section.x(2), Section.t()
S11 = X1 * X2 - T * X0**2


@st.composite
def sections(draw, max_degree=3, max_terms=4, max_t=3):
    d = draw(st.integers(1, max_degree))
    terms = {}
    for _ in range(draw(st.integers(1, max_terms))):
        a0 = draw(st.integers(0, d))
        a1 = draw(st.integers(0, d - a0))
        key = (a0, a1, d - a0 - a1, draw(st.integers(0, max_t)))
        terms[key] = F(draw(st.integers(-3, 3).filter(bool)))
    return Section(d, terms)


def test_section_arithmetic_and_text():
    assert str(S11) == "x1*x2 - t*x0^2"
    assert (S11 - S11) == Section.zero(2)
    assert S11**2 == S11 * S11
    assert str(F(1, 2) * X1) == "1/2*x1"
    with pytest.raises(ValueError):
        X1 + S11
    with pytest.raises(ValueError):
        Section(2, {(1, 0, 0, 0): 1})


def test_substitution_cycles_variables():
    assert S11.substitute((1, 2, 0)) == X2 * X0 - T * X1**2
    assert S11.substitute((2, 0, 1)) == X0 * X1 - T * X2**2
    assert S11.substitute((0, 2, 1)) == S11


def test_json_round_trip():
    s = S11 * F(-3, 4) + T**2 * X0 * X2
    text = '{"degree": 2, "monomials": [{"x": [0,1,1], "t": 0, "coeff": "2/6"}]}'
    assert Section.from_json(s.to_json()) == s
    assert section_from_json_text(text) == F(1, 3) * X1 * X2
    dup = '{"degree": 1, "monomials": [{"x": [1,0,0], "t": 0, "coeff": "1"}, {"x": [1,0,0], "t": 0, "coeff": "2"}]}'
    with pytest.raises(ValueError):
        section_from_json_text(dup)


def test_expansion_examples():
    s = chart_expand(S11, 1, 8)
    assert s.terms == {(4, 1): 1, (1, 4): 1, (7, 1): -1, (4, 4): -2, (1, 7): -1}
    assert chart_expand(X1, 1, 4).terms == {(1, 0): 1}
    # on edge 0 the same section is v (1 + v^3) / (1 + u^3 + v^3)
    want = TruncatedSeries.polynomial({(0, 1): 1, (0, 4): 1}, 6) * geom_inverse(
        TruncatedSeries.polynomial({(3, 0): 1, (0, 3): 1}), 6
    )
    assert chart_expand(S11, 0, 6).terms == want.terms


def test_coefficient_and_floor_examples():
    assert coefficient_at(S11, 1, 4, 1) == 1
    assert coefficient_at(S11, 1, 1, 1) == 0
    assert coefficient_at(S11, 1, 4, 4) == -2
    assert support_floor(S11, 1) == (1, 1)
    assert support_floor(T**5 * X0**4 * X1, 1) == (6, 5)
    with pytest.raises(ValueError):
        support_floor(Section.zero(2), 1)


def series_route(s: Section, edge: int, D: int) -> TruncatedSeries:
    """Chart expansion through generic series arithmetic."""
    one_plus = geom_inverse(TruncatedSeries.polynomial({(3, 0): 1, (0, 3): 1}), D)
    total = TruncatedSeries(D)
    for (a0, a1, a2, j), c in s.terms.items():
        a = (a0, a1, a2)
        alpha, beta = a[edge] + j, a[(edge + 1) % 3] + j
        if alpha + beta > D:
            continue
        term = TruncatedSeries(D, {(alpha, beta): c})
        for _ in range(j):
            term = term * one_plus
        total = total + term
    return total


@settings(max_examples=60, deadline=None)
@given(sections(), st.integers(0, 2), st.integers(0, 14))
def test_expansion_matches_series_arithmetic(s, edge, D):
    assert chart_expand(s, edge, D).terms == series_route(s, edge, D).terms


@settings(max_examples=60, deadline=None)
@given(sections(), st.integers(0, 2), st.integers(0, 12))
def test_coefficient_at_matches_expansion(s, edge, D):
    series = chart_expand(s, edge, D)
    for p in range(D + 1):
        for q in range(D + 1 - p):
            assert coefficient_at(s, edge, p, q) == series.coefficient(p, q)


def tail_bound(s: Section, edge: int, D: int, u: F, v: F) -> F:
    """Bound on the terms of total degree > D at a point with |u|, |v| <= 1/4."""
    w = abs(u) ** 3 + abs(v) ** 3
    bound = F(0)
    for (a0, a1, a2, j), c in s.terms.items():
        a = (a0, a1, a2)
        alpha, beta = a[edge] + j, a[(edge + 1) % 3] + j
        lead = abs(c) * abs(u) ** alpha * abs(v) ** beta
        if alpha + beta > D:
            bound += lead / (1 - w) ** j
            continue
        if j == 0:
            continue
        kept = (D - alpha - beta) // 3
        head = sum(comb(j + n - 1, n) * w**n for n in range(kept + 1))
        bound += lead * (1 / (1 - w) ** j - head)
    return bound


quarter = st.fractions(min_value=F(-1, 4), max_value=F(1, 4), max_denominator=40)


@settings(max_examples=80, deadline=None)
@given(sections(), st.integers(0, 2), st.integers(3, 12), quarter, quarter)
def test_expansion_numeric_oracle(s, edge, D, u, v):
    if 1 + u**3 + v**3 == 0:
        return
    t = u * v / (1 + u**3 + v**3)
    x = [F(0)] * 3
    x[edge], x[(edge + 1) % 3], x[(edge + 2) % 3] = u, v, F(1)
    exact = sum(c * x[0] ** a0 * x[1] ** a1 * x[2] ** a2 * t**j for (a0, a1, a2, j), c in s.terms.items())
    approx = chart_expand(s, edge, D).evaluate(u, v)
    assert abs(exact - approx) <= tail_bound(s, edge, D, u, v)


def test_profile_examples():
    for d in range(1, 5):
        prof = certified_valuation_profile(X1**d, 1)
        assert prof.pl(0) == d and prof.pl(1) == 0 and len(prof.pl.slopes) == 1
    prof = certified_valuation_profile(build_S(2, 1), 0)
    assert prof.certificate.route == "single-vertex"
    assert prof.pl.slopes == (2,) and prof.pl(0) == 0
    prof = certified_valuation_profile(S11, 1)
    assert prof.certificate.route == "componentwise-domination"
    assert prof.pl.breakpoints == (0, F(1, 2), 1)
    assert prof.pl(F(1, 2)) == F(5, 2)
    assert prof.pl.slopes == (3, -3)


@pytest.mark.parametrize("a, b", [(a, d - a) for d in range(1, 7) for a in range(d + 1)])
@pytest.mark.parametrize("edge", range(3))
def test_certified_profile_is_stable_under_deeper_truncation(a, b, edge):
    s = build_S(a, b)
    prof = certified_valuation_profile(s, edge)
    deep = chart_expand(s, edge, 4 * s.degree + 15)
    assert prof.pl == hull_to_plfunction(lower_hull(deep))


def test_lowered_truncation_is_refused():
    s = build_S(3, 2)
    with pytest.raises(CertificationError) as info:
        certified_valuation_profile(s, 1, D=19)
    assert info.value.required_D == 20
    for D in range(0, 20):
        with pytest.raises(CertificationError):
            certified_valuation_profile(s, 1, D=D)
    assert certified_valuation_profile(s, 1, D=20).certificate.D == 20


def test_zero_section_is_refused():
    with pytest.raises(CertificationError):
        certified_valuation_profile(Section.zero(2), 0)


def test_margin_shifts_the_default_truncation():
    prof = certified_valuation_profile(S11, 1, margin=3)
    assert prof.certificate.D == 11
