"""Sections of ``O(d)`` on the Fermat cubic pencil and their valuations.

A section is a polynomial in ``x0, x1, x2, t``, homogeneous of degree ``d`` in
the ``x``'s.  Near the torus-fixed point ``x_e = x_{e+1} = 0`` of the central
fibre we use ``u = x_e / x_{e-1}``, ``v = x_{e+1} / x_{e-1}``; on the curve
``t = uv / (1 + u^3 + v^3)``, so a section divided by ``x_{e-1}^d`` becomes a
power series in ``u, v``.  Its valuation at the point ``r`` of edge ``e`` is
``min (1 - r) p + r q`` over that series' support.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Mapping

from skbasis.series import (
    LowerHull,
    PLFunction,
    TruncatedSeries,
    hull_to_plfunction,
    lower_hull,
    EmptySeriesError,
)

Key = tuple[int, int, int, int]  # (a0, a1, a2, j)


class CertificationError(RuntimeError):
    """A valuation profile could not be certified at the available truncation."""

    def __init__(self, message: str, *, edge: int, D: int | None = None, required_D: int | None = None):
        super().__init__(message)
        self.edge = edge
        self.D = D
        self.required_D = required_D


@dataclass(frozen=True)
class Monomial:
    a0: int
    a1: int
    a2: int
    j: int
    coeff: Fraction

    def __post_init__(self) -> None:
        if not self.coeff:
            raise ValueError("monomial coefficient must be nonzero")


def format_rational(q) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class Section:
    degree: int
    terms: Mapping[Key, Fraction]

    def __post_init__(self) -> None:
        clean = {}
        for key, c in self.terms.items():
            if len(key) != 4 or min(key) < 0:
                raise ValueError(f"bad exponent key {key}")
            if key[0] + key[1] + key[2] != self.degree:
                raise ValueError(f"monomial {key} is not of degree {self.degree} in x")
            if c:
                clean[tuple(key)] = Fraction(c)
        object.__setattr__(self, "terms", dict(sorted(clean.items())))

    @classmethod
    def zero(cls, degree: int) -> Section:
        return cls(degree, {})

    @classmethod
    def monomial(cls, a0: int, a1: int, a2: int, j: int = 0, coeff=1) -> Section:
        return cls(a0 + a1 + a2, {(a0, a1, a2, j): Fraction(coeff)})

    @classmethod
    def x(cls, i: int) -> Section:
        e = [0, 0, 0]
        e[i] = 1
        return cls.monomial(*e)

    @classmethod
    def t(cls, power: int = 1) -> Section:
        return cls.monomial(0, 0, 0, power)

    @property
    def monomials(self) -> list[Monomial]:
        return [Monomial(*k, c) for k, c in self.terms.items()]

    def __bool__(self) -> bool:
        return bool(self.terms)

    def _check_degree(self, other: Section) -> None:
        if self.degree != other.degree and self and other:
            raise ValueError(f"degree mismatch: {self.degree} vs {other.degree}")

    def __add__(self, other: Section) -> Section:
        self._check_degree(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return Section(self.degree if self else other.degree, out)

    def __neg__(self) -> Section:
        return Section(self.degree, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: Section) -> Section:
        return self + (-other)

    def __mul__(self, other) -> Section:
        if not isinstance(other, Section):
            c = Fraction(other)
            return Section(self.degree, {k: c * v for k, v in self.terms.items()})
        out: dict[Key, Fraction] = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                k = (k1[0] + k2[0], k1[1] + k2[1], k1[2] + k2[2], k1[3] + k2[3])
                out[k] = out.get(k, 0) + c1 * c2
        return Section(self.degree + other.degree, out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> Section:
        result = Section.monomial(0, 0, 0)
        for _ in range(n):
            result = result * self
        return result

    def substitute(self, images: tuple[int, int, int]) -> Section:
        """``S(x_{images[0]}, x_{images[1]}, x_{images[2]})``."""
        out: dict[Key, Fraction] = {}
        for (a0, a1, a2, j), c in self.terms.items():
            e = [0, 0, 0]
            for src, a in zip(images, (a0, a1, a2)):
                e[src] += a
            k = (e[0], e[1], e[2], j)
            out[k] = out.get(k, 0) + c
        return Section(self.degree, out)

    def t_free_part(self) -> Section:
        return Section(self.degree, {k: c for k, c in self.terms.items() if k[3] == 0})

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "monomials": [
                {"x": [a0, a1, a2], "t": j, "coeff": format_rational(c)}
                for (a0, a1, a2, j), c in self.terms.items()
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> Section:
        terms: dict[Key, Fraction] = {}
        for m in data["monomials"]:
            a0, a1, a2 = m["x"]
            key = (int(a0), int(a1), int(a2), int(m["t"]))
            if key in terms:
                raise ValueError(f"duplicate monomial {key}")
            terms[key] = Fraction(m["coeff"])
        return cls(int(data["degree"]), terms)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (a0, a1, a2, j), c in self.terms.items():
            factors = [f for f in (_pw("t", j), _pw("x0", a0), _pw("x1", a1), _pw("x2", a2)) if f]
            mono = "*".join(factors)
            mag = abs(c)
            body = mono if mag == 1 and mono else (f"{format_rational(mag)}*{mono}" if mono else format_rational(mag))
            parts.append(("- " if c < 0 else "+ ") + body)
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]


def _pw(name: str, e: int) -> str:
    return "" if e == 0 else name if e == 1 else f"{name}^{e}"


def section_from_json_text(text: str) -> Section:
    return Section.from_json(json.loads(text))


def _chart_shift(key: Key, edge: int) -> tuple[int, int, int]:
    a = key[:3]
    j = key[3]
    return a[edge % 3] + j, a[(edge + 1) % 3] + j, j


def _tail_coefficient(j: int, i: int, l: int) -> int:
    """Coefficient of ``u^{3i} v^{3l}`` in ``(1 + u^3 + v^3)^{-j}``."""
    if j == 0:
        return 1 if i == l == 0 else 0
    n = i + l
    return (-1) ** n * comb(j + n - 1, n) * comb(n, i)


def chart_expand(s: Section, edge: int, D: int) -> TruncatedSeries:
    if D < 0:
        raise ValueError("truncation degree must be nonnegative")
    out: dict[tuple[int, int], Fraction] = {}
    for key, c in s.terms.items():
        alpha, beta, j = _chart_shift(key, edge)
        room = D - alpha - beta
        if room < 0:
            continue
        top = 0 if j == 0 else room // 3
        for n in range(top + 1):
            for i in range(n + 1):
                e = (alpha + 3 * i, beta + 3 * (n - i))
                out[e] = out.get(e, 0) + c * _tail_coefficient(j, i, n - i)
    return TruncatedSeries(D, out)


def support_floor(s: Section, edge: int) -> tuple[int, int]:
    if not s:
        raise ValueError("the zero section has no support")
    shifts = [_chart_shift(k, edge) for k in s.terms]
    return min(a for a, _, _ in shifts), min(b for _, b, _ in shifts)


def coefficient_at(s: Section, edge: int, p: int, q: int) -> Fraction:
    """Exact coefficient of ``u^p v^q`` in the chart expansion on ``edge``."""
    total = Fraction(0)
    for key, c in s.terms.items():
        alpha, beta, j = _chart_shift(key, edge)
        dp, dq = p - alpha, q - beta
        if dp < 0 or dq < 0 or dp % 3 or dq % 3:
            continue
        total += c * _tail_coefficient(j, dp // 3, dq // 3)
    return total


@dataclass(frozen=True)
class HullCertificate:
    """Why a truncated hull is the hull of the full expansion.

    ``single-vertex``: every exponent of every monomial's expansion is at least
    ``floors`` componentwise and the coefficient at ``floors`` is nonzero.
    ``componentwise-domination``: the floors are attained by the retained hull
    and ``D >= p** + q*`` for the hull's extreme vertices ``(p*, q*)`` and
    ``(p**, q**)``, so every omitted exponent dominates a retained one.
    """

    route: str
    floors: tuple[int, int]
    D: int | None
    vertices: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class ValuationProfile:
    edge: int
    pl: PLFunction
    certificate: HullCertificate | None = None

    def __call__(self, r) -> Fraction:
        return self.pl(r)


def default_truncation(s: Section, margin: int = 0) -> int:
    return 4 * s.degree + margin


def certified_valuation_profile(
    s: Section, edge: int, D: int | None = None, margin: int = 0
) -> ValuationProfile:
    """Exact ``r -> val(s)`` on ``edge``, or :class:`CertificationError`.

    ``D`` overrides the truncation used for the componentwise-domination route
    (default ``4 * degree + margin``).
    """
    edge %= 3
    if not s:
        raise CertificationError("the zero section has infinite valuation", edge=edge)
    uf, vf = support_floor(s, edge)
    if coefficient_at(s, edge, uf, vf):
        cert = HullCertificate("single-vertex", (uf, vf), None, ((uf, vf),))
        return ValuationProfile(edge, PLFunction.line(uf, vf - uf), cert)

    D = default_truncation(s, margin) if D is None else D
    try:
        hull: LowerHull = lower_hull(chart_expand(s, edge, D))
    except EmptySeriesError as exc:
        raise CertificationError(
            f"expansion on edge {edge} vanishes to order {D}", edge=edge, D=D
        ) from exc
    (p1, q1), (p2, q2) = hull.vertices[0], hull.vertices[-1]
    if (p1, q2) != (uf, vf):
        raise CertificationError(
            f"support floors {(uf, vf)} on edge {edge} are not attained by the hull "
            f"(minima {(p1, q2)}) at D={D}",
            edge=edge,
            D=D,
        )
    if D < p2 + q1:
        raise CertificationError(
            f"truncation D={D} on edge {edge} is below the certified bound {p2 + q1}",
            edge=edge,
            D=D,
            required_D=p2 + q1,
        )
    cert = HullCertificate("componentwise-domination", (uf, vf), D, hull.vertices)
    return ValuationProfile(edge, hull_to_plfunction(hull), cert)
