"""Inductive construction of the sections ``S(a, b)`` and of full bases.

``S(a, b)`` is homogeneous of degree ``a + b`` with leading monomial
``x1^a x2^b``; it is attached to the lattice point ``(a m0 + b m1)/(a + b)``.
Powers handle ``a == b`` and ``min(a, b) == 0``.  For ``a > b >= 1`` we start
from ``R0(a, b)`` and subtract one correction per element of the bad-term set
``Lambda(a, b)``; ``b > a`` is obtained by swapping ``x1`` and ``x2``.
"""
from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Mapping

from skbasis.geometry import PolytopePoint, boundary_lattice_points
from skbasis.sections import Section, coefficient_at

X0, X1, X2 = Section.x(0), Section.x(1), Section.x(2)
SWAP12 = (0, 2, 1)
CYCLIC = ((0, 1, 2), (1, 2, 0), (2, 0, 1))  # S(a,b,x0,x1,x2), S(a,b,x1,x2,x0), S(a,b,x2,x0,x1)


@dataclass(frozen=True, order=True)
class LambdaEntry:
    m: int
    s: int

    @property
    def d(self) -> int:
        return self.s - self.m


def in_lambda(a: int, b: int, m: int, s: int) -> bool:
    """``m, s > 0`` and ``(a/b) m < a - s <= ((a-1)/b) m + 1``, in exact arithmetic."""
    return m > 0 and s > 0 and Fraction(a, b) * m < a - s <= Fraction(a - 1, b) * m + 1


def _require_a_gt_b(a: int, b: int) -> None:
    if not a > b >= 1:
        raise ValueError(f"need a > b >= 1, got a={a}, b={b}")


def lambda_set(a: int, b: int) -> list[LambdaEntry]:
    """Bad-term indices for ``(a, b)``, sorted by ``m`` increasing."""
    _require_a_gt_b(a, b)
    out = []
    for m in range(1, b):
        # b(a - s) > a m  and  b(a - s) <= (a - 1) m + b
        s_hi = a - (a * m) // b - 1
        s_lo = a - ((a - 1) * m + b) // b
        out.extend(LambdaEntry(m, s) for s in range(max(1, s_lo), s_hi + 1))
    return out


def lambda_cardinality(a: int, b: int) -> int:
    _require_a_gt_b(a, b)
    return (b + gcd(a - 1, b) - gcd(a, b) - 1) // 2


def correction_case(a: int, b: int, entry: LambdaEntry) -> int:
    d = entry.d
    if 3 * d > 2 * a:
        return 1
    if a - b <= 3 * d:
        return 2
    return 3


@dataclass(frozen=True)
class CorrectionStep:
    entry: LambdaEntry
    case: int
    lam: Fraction
    residual: Fraction  # coefficient at (a + 3m, b + 3s) after the step
    pure: tuple[Fraction, Fraction]  # coefficients at (a, b + 3a), (a + 3b, b) after the step


@dataclass
class BasisBuilder:
    """Memoised builder for ``S(a, b)``.

    ``lambda_offsets`` maps ``(a, b)`` to ``{step_index: delta}`` (1-based
    steps) and ``base_overrides`` maps ``(a, b)`` to a replacement section;
    both exist only to produce deliberately wrong bases for negative controls.
    """

    lambda_offsets: Mapping[tuple[int, int], Mapping[int, object]] = field(default_factory=dict)
    base_overrides: Mapping[tuple[int, int], Section] = field(default_factory=dict)
    _cache: dict = field(default_factory=dict, init=False, repr=False)
    history: dict = field(default_factory=dict, init=False, repr=False)

    def S(self, a: int, b: int) -> Section:
        if a < 0 or b < 0 or a + b == 0:
            raise ValueError(f"S({a}, {b}) is undefined")
        key = (a, b)
        if key not in self._cache:
            self._cache.setdefault(key, self._build(a, b))
        return self._cache[key]

    def _build(self, a: int, b: int) -> Section:
        if (a, b) in self.base_overrides:
            return self.base_overrides[(a, b)]
        if b == 0:
            return X1**a
        if a == 0:
            return X2**b
        if a == b:
            return self.S(1, 1) ** a if a > 1 else X1 * X2 - Section.t() * X0**2
        if b > a:
            return self.S(b, a).substitute(SWAP12)
        return self._corrected(a, b)

    def R0(self, a: int, b: int) -> Section:
        if a < 1 or b < 1 or a == b:
            raise ValueError(f"R0 needs a, b >= 1 and a != b, got ({a}, {b})")
        t2 = Section.t(2)
        if a > b:
            return X1 * self.S(a - 1, b) - t2 * X0 * self.S(a - 2, b + 1)
        return X2 * self.S(a, b - 1) - t2 * X0 * self.S(a + 1, b - 2)

    def correction_term(self, a: int, b: int, entry: LambdaEntry, lam) -> Section:
        _require_a_gt_b(a, b)
        m, s, d = entry.m, entry.s, entry.d
        if not in_lambda(a, b, m, s):
            raise ValueError(f"({m}, {s}) is not in Lambda({a}, {b})")
        lam = Fraction(lam)
        case = correction_case(a, b, entry)
        if case == 1:
            return lam * Section.t(2 * a + 5 * m - 2 * s) * X0 ** (a - d) * self.S(2 * d - a, a + b - d)
        if case == 2:
            return lam * Section.monomial(2 * a - 3 * d, 0, 3 * d + b - a, a + 3 * m)
        if 2 * b + 3 * d < 0:
            # first happens at (8, 7), entry (6, 1); degrees <= 14 are unaffected
            raise ValueError(f"correction for {entry} in S({a}, {b}) would need x0^{2 * b + 3 * d}")
        return lam * Section.monomial(2 * b + 3 * d, a - b - 3 * d, 0, b + 3 * s)

    def _corrected(self, a: int, b: int) -> Section:
        R = self.R0(a, b)
        offsets = self.lambda_offsets.get((a, b), {})
        steps = []
        for i, entry in enumerate(lambda_set(a, b), start=1):
            target = (a + 3 * entry.m, b + 3 * entry.s)
            lam = coefficient_at(R, 1, *target)
            if lam.denominator != 1:
                warnings.warn(f"non-integral correction coefficient {lam} for S({a},{b}) step {i}")
            lam += Fraction(offsets.get(i, 0))
            R = R - self.correction_term(a, b, entry, lam)
            steps.append(
                CorrectionStep(
                    entry,
                    correction_case(a, b, entry),
                    lam,
                    coefficient_at(R, 1, *target),
                    (coefficient_at(R, 1, a, b + 3 * a), coefficient_at(R, 1, a + 3 * b, b)),
                )
            )
        self.history[(a, b)] = steps
        return R

    def section_for(self, point: PolytopePoint) -> Section:
        return self.S(point.a, point.b).substitute(CYCLIC[point.edge])

    def basis(self, degree: int) -> BasisDescriptor:
        if degree < 1:
            raise ValueError("degree must be at least 1")
        entries = {}
        for pt in boundary_lattice_points(degree):
            sec = self.section_for(pt)
            if pt.b == 0:
                # the same vertex read as the far end of the previous edge
                other = self.S(0, degree).substitute(CYCLIC[(pt.edge - 1) % 3])
                if other != sec:
                    raise AssertionError(f"vertex formulas disagree at {pt}")
            entries[pt] = sec
        return BasisDescriptor(degree, entries)


def sigma(point: PolytopePoint) -> Section:
    """The monomial section attached to a lattice point of the polytope boundary."""
    e = [0, 0, 0]
    e[(point.edge + 1) % 3] = point.a
    e[(point.edge + 2) % 3] = point.b
    return Section.monomial(*e)


@dataclass(frozen=True)
class BasisDescriptor:
    degree: int
    entries: Mapping[PolytopePoint, Section]

    def __post_init__(self) -> None:
        if len(self.entries) != 3 * self.degree:
            raise ValueError(f"a degree-{self.degree} basis has {3 * self.degree} entries, got {len(self.entries)}")

    def points(self) -> list[PolytopePoint]:
        return list(self.entries)

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "entries": [
                {"m": {"edge": p.edge, "a": p.a, "b": p.b}, "section": s.to_json()}
                for p, s in self.entries.items()
            ],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2) + "\n"

    @classmethod
    def from_json(cls, data: Mapping) -> BasisDescriptor:
        degree = int(data["degree"])
        entries = {}
        for item in data["entries"]:
            m = item["m"]
            pt = PolytopePoint(int(m["edge"]), int(m["a"]), int(m["b"]))
            if pt.level != degree:
                raise ValueError(f"lattice point {pt} is not at level {degree}")
            if pt in entries:
                raise ValueError(f"duplicate lattice point {pt}")
            entries[pt] = Section.from_json(item["section"])
        order = {p: i for i, p in enumerate(boundary_lattice_points(degree))}
        return cls(degree, dict(sorted(entries.items(), key=lambda kv: order[kv[0]])))


_default = BasisBuilder()


def build_S(a: int, b: int) -> Section:
    return _default.S(a, b)


def build_R0(a: int, b: int) -> Section:
    return _default.R0(a, b)


def correction_term(a: int, b: int, entry: LambdaEntry, lam) -> Section:
    return _default.correction_term(a, b, entry, lam)


def build_basis(degree: int) -> BasisDescriptor:
    return _default.basis(degree)


def correction_history(a: int, b: int) -> list[CorrectionStep]:
    _default.S(a, b)
    return _default.history.get((a, b), [])
