import json
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from skbasis.builder import BasisBuilder, build_basis, lambda_set
from skbasis.cost import cost, cost_slopes_fixed_tv
from skbasis.geometry import PolytopePoint, boundary_lattice_points
from skbasis.sections import Section, certified_valuation_profile
from skbasis.verifier import (
    expected_profile,
    perturbation_invariance,
    perturbed_basis,
    predicted_perturbed_profile,
    slope_set_formula,
    verify_theorem,
)

X0, X1, X2, T = Section.x(0), Section.x(1), Section.x(2), Section.t()


def test_expected_profile_examples():
    f = expected_profile(PolytopePoint(0, 1, 1), 1, 2)
    assert f.breakpoints == (0, F(1, 2), 1) and f.slopes == (3, -3)
    g = expected_profile(PolytopePoint(0, 1, 0), 0, 1)
    assert g.slopes == (1,) and g(0) == 0
    h = expected_profile(PolytopePoint(1, 1, 0), 1, 1)
    assert h == certified_valuation_profile(X2, 1).pl
    with pytest.raises(ValueError):
        expected_profile(PolytopePoint(0, 1, 1), 0, 3)


points = st.integers(1, 8).flatmap(
    lambda d: st.tuples(st.just(d), st.sampled_from(boundary_lattice_points(d)))
)


@given(points, st.integers(0, 2), st.fractions(min_value=0, max_value=1, max_denominator=50))
def test_expected_profile_is_the_scaled_cost(dp, edge, r):
    d, p = dp
    assert expected_profile(p, edge, d)(r) == F(d, 3) * cost(edge + r, p.tv).value


@pytest.mark.parametrize("d", range(1, 9))
def test_expected_profile_follows_the_slope_law(d):
    for p in boundary_lattice_points(d):
        if p.edge != 0:
            continue
        pieces = cost_slopes_fixed_tv(p.tv)
        for edge in range(3):
            f = expected_profile(p, edge, d)
            for (lo, hi), slope in pieces:
                lo_r, hi_r = max(lo - edge, 0), min(hi - edge, 1)
                if hi_r > lo_r:
                    assert f.slope_at((lo_r + hi_r) / 2) == F(d, 3) * slope


def test_slope_set_examples():
    assert slope_set_formula(1, 1) == {0, 1, -1}
    assert slope_set_formula(2, 1) == {0, 1, -1, 2, -2, 3}
    for k in range(1, 9):
        for s in range(1, k + 1):
            assert len(slope_set_formula(k, s)) == 3 * k
    with pytest.raises(ValueError):
        slope_set_formula(2, 3)


@pytest.mark.parametrize("d", range(1, 9))
def test_theorem_holds(d):
    cert = verify_theorem(build_basis(d))
    assert cert.ok, [c.to_json() for c in cert.counterexamples[:3]]
    assert cert.independence_ok and cert.slope_formula_ok
    for (edge, s), slopes in cert.slope_report.items():
        assert set(slopes) == slope_set_formula(d, s) and len(slopes) == 3 * d
    routes = {p.certificate.route for rep in cert.per_section.values() for p in rep.per_edge.values()}
    assert routes <= {"single-vertex", "componentwise-domination"}


def test_small_certificates():
    cert = verify_theorem(build_basis(1))
    assert all(sl == [-1, 0, 1] for sl in cert.slope_report.values())
    cert2 = verify_theorem(build_basis(2))
    assert all(len(set(sl)) == 6 for sl in cert2.slope_report.values())


def test_certificate_json_is_deterministic():
    a = verify_theorem(build_basis(4)).dumps()
    b = verify_theorem(build_basis(4)).dumps()
    assert a == b
    data = json.loads(a)
    assert data["ok"] and data["counterexamples"] == []
    assert len(data["sections"]) == 12


def test_corrupted_lambda_is_localised():
    bad = BasisBuilder(lambda_offsets={(3, 2): {1: 1}}).basis(5)
    cert = verify_theorem(bad)
    assert not cert.ok
    hits = [c for c in cert.counterexamples if c.point == PolytopePoint(0, 3, 2) and c.edge == 1]
    assert len(hits) == 1
    lo, hi = hits[0].interval
    assert (lo, hi) == (F(1, 3), F(1, 2))
    assert lo < F(2, 5) < hi
    assert hits[0].actual(F(2, 5)) < hits[0].expected(F(2, 5))


MUTATIONS = [
    ((a, d - a), i)
    for d in range(3, 6)
    for a in range(d // 2 + 1, d)
    for i in range(1, len(lambda_set(a, d - a)) + 1)
]


@pytest.mark.parametrize("ab, step", MUTATIONS)
def test_every_lambda_mutation_is_detected(ab, step):
    bad = BasisBuilder(lambda_offsets={ab: {step: 1}}).basis(sum(ab))
    assert not verify_theorem(bad).ok


@pytest.mark.parametrize(
    "override",
    [
        {(1, 1): X1 * X2 - 2 * T * X0**2},
        {(1, 1): X1 * X2},
        {(1, 0): X1 + T * X2},
    ],
)
def test_base_case_mutations_are_detected(override):
    builder = BasisBuilder(base_overrides=override)

    def rejected(d):
        try:
            return not verify_theorem(builder.basis(d)).ok
        except AssertionError:  # the builder's own vertex check fired first
            return True

    assert any(rejected(d) for d in range(1, 6))


def test_identity_perturbation():
    basis = build_basis(3)
    n = 3 * 3
    assert perturbation_invariance(basis, [[0] * n for _ in range(n)])
    diag = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
    assert perturbation_invariance(basis, diag)


def test_off_diagonal_perturbation_can_lower_a_profile():
    # x1 x2 - t x0^2 + t x2^2 on its own edge: the new term v^2 t has
    # valuation 1 + 2r, below 5/2 at r = 1/2
    basis = build_basis(2)
    pts = basis.points()
    B = [[0] * 6 for _ in range(6)]
    B[pts.index(PolytopePoint(0, 1, 1))][pts.index(PolytopePoint(1, 2, 0))] = 1
    assert not perturbation_invariance(basis, B)
    pert = perturbed_basis(basis, B).entries[PolytopePoint(0, 1, 1)]
    assert certified_valuation_profile(pert, 1).pl(F(1, 2)) == 2


def test_degree_one_perturbations_are_harmless():
    basis = build_basis(1)
    rng = random.Random(3)
    for _ in range(10):
        B = [[rng.randint(-3, 3) for _ in range(3)] for _ in range(3)]
        assert perturbation_invariance(basis, B)


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 4), st.randoms(use_true_random=False))
def test_perturbed_profiles_follow_independence(d, rng):
    basis = build_basis(d)
    n = 3 * d
    B = [[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)]
    pert = perturbed_basis(basis, B)
    for i, p in enumerate(basis.points()):
        for edge in range(3):
            got = certified_valuation_profile(pert.entries[p], edge).pl
            assert got == predicted_perturbed_profile(basis, B, i, edge)
