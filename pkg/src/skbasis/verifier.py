"""Check a built basis against the cost function, edge by edge.

For a section ``s_m`` of degree ``d`` the target is
``val_{(e, r)}(s_m) = (d/3) * cost(e + r, tv(m))`` on every edge ``e``.  Equality
is tested exactly as piecewise-linear functions.  Valuative independence is
reported through the slope criterion: on each open interval between
consecutive points of ``{0, 1/d, ..., 1}`` the ``3d`` profiles must have
pairwise distinct slopes.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from skbasis.builder import BasisDescriptor, sigma
from skbasis.cost import cost
from skbasis.geometry import PolytopePoint
from skbasis.sections import (
    CertificationError,
    Section,
    ValuationProfile,
    certified_valuation_profile,
    format_rational,
)
from skbasis.series import PLFunction, pl_difference_intervals, pl_min


def expected_profile(m: PolytopePoint, edge: int, d: int) -> PLFunction:
    """``r -> (d/3) cost(edge + r, tv(m))`` on ``[0, 1]``.

    Between breaks the floors in the cost formula are constant, so the
    function is linear there.  ``k`` and ``l`` are constant on the open edge,
    and the bracket index jumps where ``(tv - 3t)/9 + 1/3`` is an integer,
    i.e. at ``r = tv/3 + 1 - edge - 3j``.
    """
    if m.level != d:
        raise ValueError(f"{m} is not a lattice point at level {d}")
    edge %= 3
    tv = m.tv
    base = tv / 3 + 1 - edge
    lo = math.ceil(base - 1) // 3 - 1
    hi = math.floor(base) // 3 + 1
    breaks = {Fraction(0), Fraction(1)}
    breaks.update(base - 3 * j for j in range(lo, hi + 1) if 0 < base - 3 * j < 1)
    scale = Fraction(d, 3)
    return PLFunction.from_points((r, scale * cost(edge + r, tv).value) for r in breaks)


def slope_set_formula(k: int, s: int) -> set[int]:
    """Predicted slopes on the ``s``-th of ``k`` subintervals of an edge."""
    if not 1 <= s <= k:
        raise ValueError(f"need 1 <= s <= k, got k={k}, s={s}")
    out = {0}
    out.update(range(1, k + 1))
    out.update(range(-k, 0))
    out.update(range(k + 1, 2 * k - s + 1))
    out.update(range(-(k + s - 1), -k))
    return out


def sample_points(d: int) -> list[Fraction]:
    return [Fraction(2 * s - 1, 2 * d) for s in range(1, d + 1)]


@dataclass(frozen=True)
class Counterexample:
    point: PolytopePoint
    edge: int
    interval: tuple[Fraction, Fraction]
    expected: PLFunction
    actual: PLFunction | None
    reason: str = "profile mismatch"

    def to_json(self) -> dict:
        return {
            "m": _point_json(self.point),
            "edge": self.edge,
            "interval": [format_rational(x) for x in self.interval],
            "reason": self.reason,
            "expected": _pl_json(self.expected),
            "actual": None if self.actual is None else _pl_json(self.actual),
        }


@dataclass
class SectionReport:
    per_edge: dict[int, ValuationProfile]
    equality_ok: bool
    leading_ok: bool


@dataclass
class Certificate:
    degree: int
    per_section: dict[PolytopePoint, SectionReport]
    slope_report: dict[tuple[int, int], list[Fraction]]  # (edge, s) -> slopes
    slope_formula_ok: bool
    independence_ok: bool
    counterexamples: list[Counterexample] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return (
            self.independence_ok
            and self.slope_formula_ok
            and all(r.equality_ok and r.leading_ok for r in self.per_section.values())
        )

    def to_json(self) -> dict:
        sections = []
        for p, rep in self.per_section.items():
            sections.append(
                {
                    "m": _point_json(p),
                    "leading_ok": rep.leading_ok,
                    "equality_ok": rep.equality_ok,
                    "edges": [
                        {"edge": e, "certificate": prof.certificate.route, "profile": _pl_json(prof.pl)}
                        for e, prof in sorted(rep.per_edge.items())
                    ],
                }
            )
        return {
            "degree": self.degree,
            "ok": self.ok,
            "independence_ok": self.independence_ok,
            "independence": "valuative independence certified via distinct slopes"
            if self.independence_ok
            else "slope criterion not met",
            "slope_formula_ok": self.slope_formula_ok,
            "slopes": [
                {"edge": e, "interval": s, "slopes": [format_rational(x) for x in sl]}
                for (e, s), sl in sorted(self.slope_report.items())
            ],
            "sections": sections,
            "counterexamples": [c.to_json() for c in self.counterexamples],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2) + "\n"


def _point_json(p: PolytopePoint) -> dict:
    return {"edge": p.edge, "a": p.a, "b": p.b}


def _pl_json(f: PLFunction) -> dict:
    return {
        "breakpoints": [format_rational(x) for x in f.breakpoints],
        "values": [format_rational(x) for x in f.values],
        "slopes": [format_rational(x) for x in f.slopes],
    }


def profiles_of(s: Section, margin: int = 0) -> dict[int, ValuationProfile]:
    return {e: certified_valuation_profile(s, e, margin=margin) for e in range(3)}


def verify_theorem(basis: BasisDescriptor, margin: int = 0) -> Certificate:
    """Raises :class:`CertificationError` if some profile cannot be certified."""
    d = basis.degree
    per_section: dict[PolytopePoint, SectionReport] = {}
    counterexamples: list[Counterexample] = []
    for p, s in basis.entries.items():
        leading_ok = s.degree == d and s.t_free_part() == sigma(p)
        profiles = profiles_of(s, margin)
        equality_ok = True
        for e, prof in profiles.items():
            want = expected_profile(p, e, d)
            bad = pl_difference_intervals(want, prof.pl)
            for iv in bad:
                counterexamples.append(Counterexample(p, e, iv, want, prof.pl))
            equality_ok = equality_ok and not bad
        if not leading_ok:
            whole = (Fraction(0), Fraction(1))
            counterexamples.append(
                Counterexample(p, 0, whole, expected_profile(p, 0, d), None, "t-free part is not the monomial of m")
            )
        per_section[p] = SectionReport(profiles, equality_ok, leading_ok)

    slope_report: dict[tuple[int, int], list[Fraction]] = {}
    independence_ok = True
    formula_ok = True
    for e in range(3):
        for s, r in enumerate(sample_points(d), start=1):
            profs = [rep.per_edge[e].pl for rep in per_section.values()]
            if any(r in f.breakpoints for f in profs):
                # a profile breaks inside a subinterval, so the slope count is off
                slope_report[(e, s)] = []
                independence_ok = formula_ok = False
                continue
            slopes = sorted(f.slope_at(r) for f in profs)
            slope_report[(e, s)] = slopes
            independence_ok = independence_ok and len(set(slopes)) == 3 * d
            formula_ok = formula_ok and set(slopes) == slope_set_formula(d, s)
    return Certificate(d, per_section, slope_report, formula_ok, independence_ok, counterexamples)


def perturbed_basis(basis: BasisDescriptor, B: Sequence[Sequence[int]]) -> BasisDescriptor:
    """``s~_m = s_m + t * sum_m' B[m][m'] s_m'``, indices in ``basis.points()`` order."""
    pts = basis.points()
    n = len(pts)
    if len(B) != n or any(len(row) != n for row in B):
        raise ValueError(f"perturbation matrix must be {n} x {n}")
    t = Section.t()
    out = {}
    for i, p in enumerate(pts):
        acc = Section.zero(basis.degree)
        for j, q in enumerate(pts):
            if B[i][j]:
                acc = acc + B[i][j] * basis.entries[q]
        out[p] = basis.entries[p] + t * acc
    return BasisDescriptor(basis.degree, out)


def perturbation_invariance(
    basis: BasisDescriptor, B: Sequence[Sequence[int]], margin: int = 0
) -> bool:
    """True when every profile of ``(I + tB) s`` equals the unperturbed one."""
    pert = perturbed_basis(basis, B)
    for p in basis.points():
        before = profiles_of(basis.entries[p], margin)
        after = profiles_of(pert.entries[p], margin)
        if any(before[e].pl != after[e].pl for e in range(3)):
            return False
    return True


def predicted_perturbed_profile(
    basis: BasisDescriptor, B: Sequence[Sequence[int]], index: int, edge: int, margin: int = 0
) -> PLFunction:
    """Profile of ``(I + tB) s`` at ``index`` implied by valuative independence.

    The diagonal factor ``1 + t B[i][i]`` has valuation zero; every other
    nonzero entry contributes ``1 + val(s_m')``.
    """
    pts = basis.points()
    own = certified_valuation_profile(basis.entries[pts[index]], edge, margin=margin).pl
    terms = [own]
    for j, q in enumerate(pts):
        if j != index and B[index][j]:
            terms.append(certified_valuation_profile(basis.entries[q], edge, margin=margin).pl.shifted(1))
    return pl_min(*terms)


__all__ = [
    "CertificationError",
    "Certificate",
    "Counterexample",
    "expected_profile",
    "perturbation_invariance",
    "perturbed_basis",
    "predicted_perturbed_profile",
    "sample_points",
    "slope_set_formula",
    "verify_theorem",
]
