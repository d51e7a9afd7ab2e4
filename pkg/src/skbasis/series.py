"""Exact bivariate truncated power series, lower hulls of their supports, and
piecewise-linear functions on ``[0, 1]``.

A series in ``u, v`` is known modulo terms of total degree ``> trunc_degree``.
Its valuation at edge parameter ``r`` is ``min (1 - r) p + r q`` over the
support, a concave piecewise-linear function determined by the lower-left
hull of the support.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Union

Exponent = tuple[int, int]


class EmptySeriesError(ValueError):
    """The series vanishes to its truncation order: valuation ``>= D + 1``."""

    def __init__(self, trunc_degree: int):
        super().__init__(f"series is zero to order {trunc_degree}; valuation >= {trunc_degree + 1}")
        self.min_total_degree = trunc_degree + 1


class UncertifiedHullError(ValueError):
    pass


@dataclass(frozen=True)
class TruncatedSeries:
    """``exact=True`` records that the represented series has no terms beyond
    the truncation degree, i.e. it is a known polynomial."""

    trunc_degree: int
    terms: Mapping[Exponent, Fraction] = field(default_factory=dict)
    exact: bool = False

    def __post_init__(self) -> None:
        D = self.trunc_degree
        if D < 0:
            raise ValueError("truncation degree must be nonnegative")
        clean: dict[Exponent, Fraction] = {}
        for (p, q), c in self.terms.items():
            if p < 0 or q < 0:
                raise ValueError(f"negative exponent {(p, q)}")
            if c and p + q > D:
                raise ValueError(f"exponent {(p, q)} beyond truncation degree {D}")
            if c:
                clean[(p, q)] = Fraction(c)
        object.__setattr__(self, "terms", clean)

    @classmethod
    def polynomial(cls, terms: Mapping[Exponent, object], trunc_degree: int | None = None) -> TruncatedSeries:
        degree = max((p + q for (p, q), c in terms.items() if c), default=0)
        D = degree if trunc_degree is None else trunc_degree
        if D < degree:
            raise ValueError("truncation below the polynomial's degree")
        return cls(D, dict(terms), exact=True)

    @classmethod
    def one(cls, trunc_degree: int) -> TruncatedSeries:
        return cls(trunc_degree, {(0, 0): Fraction(1)}, exact=True)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def coefficient(self, p: int, q: int) -> Fraction:
        if p + q > self.trunc_degree:
            raise ValueError(f"coefficient of {(p, q)} is beyond truncation degree {self.trunc_degree}")
        return self.terms.get((p, q), Fraction(0))

    def total_degree(self) -> int:
        return max((p + q for p, q in self.terms), default=-1)

    def truncate(self, D: int) -> TruncatedSeries:
        if D > self.trunc_degree and not self.exact:
            raise ValueError("cannot extend an inexact series beyond its truncation")
        kept = {e: c for e, c in self.terms.items() if sum(e) <= D}
        return TruncatedSeries(D, kept, exact=self.exact and len(kept) == len(self.terms))

    def _binary_degree(self, other: TruncatedSeries, product: bool = False) -> int:
        # an exact operand is known to every order, so only inexact ones cap D
        if self.exact and other.exact:
            top = self.total_degree() + other.total_degree() if product else 0
            return max(self.trunc_degree, other.trunc_degree, top)
        if self.exact or other.exact:
            return other.trunc_degree if self.exact else self.trunc_degree
        return min(self.trunc_degree, other.trunc_degree)

    def __add__(self, other: TruncatedSeries) -> TruncatedSeries:
        return series_add(self, other)

    def __sub__(self, other: TruncatedSeries) -> TruncatedSeries:
        return series_sub(self, other)

    def __mul__(self, other) -> TruncatedSeries:
        if isinstance(other, TruncatedSeries):
            return series_mul(self, other)
        c = Fraction(other)
        return TruncatedSeries(self.trunc_degree, {e: c * v for e, v in self.terms.items()}, self.exact)

    __rmul__ = __mul__

    def __neg__(self) -> TruncatedSeries:
        return self * -1

    def evaluate(self, u, v) -> Fraction:
        u, v = Fraction(u), Fraction(v)
        return sum((c * u**p * v**q for (p, q), c in self.terms.items()), Fraction(0))

    def __str__(self) -> str:
        if not self.terms:
            return f"O({self.trunc_degree + 1})"
        parts = []
        for (p, q), c in sorted(self.terms.items(), key=lambda kv: (sum(kv[0]), -kv[0][0])):
            mono = "*".join(s for s in (_power("x", p), _power("y", q)) if s) or "1"
            coeff = "" if abs(c) == 1 and mono != "1" else f"{abs(c)}*" if mono != "1" else f"{abs(c)}"
            parts.append(("- " if c < 0 else "+ ") + coeff + (mono if mono != "1" else ""))
        text = " ".join(parts)
        text = text[2:] if text.startswith("+ ") else "-" + text[2:]
        return text if self.exact else f"{text} + O({self.trunc_degree + 1})"


def _power(name: str, e: int) -> str:
    return "" if e == 0 else name if e == 1 else f"{name}^{e}"


def _combine(a: TruncatedSeries, b: TruncatedSeries, sign: int) -> TruncatedSeries:
    D = a._binary_degree(b)
    out: dict[Exponent, Fraction] = {}
    dropped = False
    for src, s in ((a, 1), (b, sign)):
        for e, c in src.terms.items():
            if e[0] + e[1] > D:
                dropped = True
                continue
            out[e] = out.get(e, 0) + s * c
    return TruncatedSeries(D, out, exact=a.exact and b.exact and not dropped)


def series_add(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    return _combine(a, b, 1)


def series_sub(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    return _combine(a, b, -1)


def series_mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    D = a._binary_degree(b, product=True)
    out: dict[Exponent, Fraction] = {}
    dropped = False
    for (p1, q1), c1 in a.terms.items():
        room = D - p1 - q1
        if room < 0:
            dropped = True
            continue
        for (p2, q2), c2 in b.terms.items():
            if p2 + q2 > room:
                dropped = True
                continue
            key = (p1 + p2, q1 + q2)
            out[key] = out.get(key, 0) + c1 * c2
    return TruncatedSeries(D, out, exact=a.exact and b.exact and not dropped)


def geom_inverse(u_poly: TruncatedSeries, D: int) -> TruncatedSeries:
    """``1 / (1 + u_poly)`` to total degree ``D``."""
    if u_poly.terms.get((0, 0)):
        raise ValueError("geometric inversion needs a series without constant term")
    if u_poly.trunc_degree < D and not u_poly.exact:
        raise ValueError("input known only to a lower order than requested")
    step = TruncatedSeries(D, {e: -c for e, c in u_poly.terms.items() if sum(e) <= D})
    result = TruncatedSeries.one(D)
    power = TruncatedSeries.one(D)
    for _ in range(D):
        power = series_mul(power, step)
        if not power:
            break
        result = series_add(result, power)
    return TruncatedSeries(D, result.terms)


@dataclass(frozen=True)
class PLFunction:
    """Continuous piecewise-linear function on ``[0, 1]`` in canonical form:
    consecutive segments always have different slopes."""

    breakpoints: tuple[Fraction, ...]
    values: tuple[Fraction, ...]
    slopes: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        bp, vals, sl = self.breakpoints, self.values, self.slopes
        if len(bp) < 2 or bp[0] != 0 or bp[-1] != 1:
            raise ValueError("breakpoints must run from 0 to 1")
        if len(vals) != len(bp) or len(sl) != len(bp) - 1:
            raise ValueError("inconsistent breakpoint, value and slope counts")
        for i in range(len(sl)):
            if bp[i + 1] <= bp[i]:
                raise ValueError("breakpoints must increase strictly")
            if vals[i + 1] - vals[i] != sl[i] * (bp[i + 1] - bp[i]):
                raise ValueError("slopes disagree with values")
            if i and sl[i] == sl[i - 1]:
                raise ValueError("collinear segments must be merged")

    @classmethod
    def from_points(cls, points) -> PLFunction:
        """Interpolate ``(r, value)`` pairs and merge collinear segments."""
        pts = sorted((Fraction(r), Fraction(v)) for r, v in points)
        bp, vals, sl = [pts[0][0]], [pts[0][1]], []
        for r, v in pts[1:]:
            if r == bp[-1]:
                if v != vals[-1]:
                    raise ValueError(f"two values at r={r}")
                continue
            s = (v - vals[-1]) / (r - bp[-1])
            if sl and sl[-1] == s:
                bp[-1], vals[-1] = r, v
            else:
                bp.append(r)
                vals.append(v)
                sl.append(s)
        return cls(tuple(bp), tuple(vals), tuple(sl))

    @classmethod
    def line(cls, at_zero, slope) -> PLFunction:
        at_zero, slope = Fraction(at_zero), Fraction(slope)
        return cls((Fraction(0), Fraction(1)), (at_zero, at_zero + slope), (slope,))

    def __call__(self, r) -> Fraction:
        r = Fraction(r)
        if not 0 <= r <= 1:
            raise ValueError(f"r={r} outside [0, 1]")
        i = self._segment(r)
        return self.values[i] + self.slopes[i] * (r - self.breakpoints[i])

    def _segment(self, r: Fraction) -> int:
        for i in range(len(self.slopes) - 1, -1, -1):
            if r >= self.breakpoints[i]:
                return i
        return 0

    def slope_at(self, r) -> Fraction:
        """Slope on the segment containing ``r``; ``r`` must not be a breakpoint."""
        r = Fraction(r)
        if r in self.breakpoints:
            raise ValueError(f"slope is ambiguous at breakpoint r={r}")
        return self.slopes[self._segment(r)]

    def is_concave(self) -> bool:
        return all(a > b for a, b in zip(self.slopes, self.slopes[1:]))

    def __add__(self, other: PLFunction) -> PLFunction:
        grid = merged_breakpoints(self, other)
        return PLFunction.from_points((r, self(r) + other(r)) for r in grid)

    def scaled(self, c) -> PLFunction:
        c = Fraction(c)
        if c == 0:
            return PLFunction.line(0, 0)
        return PLFunction(self.breakpoints, tuple(c * v for v in self.values), tuple(c * s for s in self.slopes))

    def shifted(self, c) -> PLFunction:
        c = Fraction(c)
        return PLFunction(self.breakpoints, tuple(v + c for v in self.values), self.slopes)


def merged_breakpoints(*fs: PLFunction) -> list[Fraction]:
    return sorted({r for f in fs for r in f.breakpoints})


def pl_le(f: PLFunction, g: PLFunction) -> bool:
    """``f <= g`` on ``[0, 1]``; exact since both are linear between merged breaks."""
    return all(f(r) <= g(r) for r in merged_breakpoints(f, g))


def pl_min(*fs: PLFunction) -> PLFunction:
    grid = set(merged_breakpoints(*fs))
    base = sorted(grid)
    for a, b in zip(base, base[1:]):
        for i, f in enumerate(fs):
            for g in fs[i + 1:]:
                da, db = f(a) - g(a), f(b) - g(b)
                if da * db < 0:
                    grid.add(a + (b - a) * da / (da - db))
    return PLFunction.from_points((r, min(f(r) for f in fs)) for r in grid)


def pl_difference_intervals(f: PLFunction, g: PLFunction) -> list[tuple[Fraction, Fraction]]:
    """Maximal closed sub-intervals of ``[0, 1]`` on which ``f`` and ``g`` are
    not identical (adjacent pieces are merged)."""
    grid = merged_breakpoints(f, g)
    bad = []
    for a, b in zip(grid, grid[1:]):
        if f(a) != g(a) or f(b) != g(b):
            if bad and bad[-1][1] == a:
                bad[-1] = (bad[-1][0], b)
            else:
                bad.append((a, b))
    return bad


@dataclass(frozen=True)
class LowerHull:
    vertices: tuple[Exponent, ...]

    def __post_init__(self) -> None:
        vs = self.vertices
        if not vs:
            raise ValueError("a hull needs at least one vertex")
        for (p1, q1), (p2, q2) in zip(vs, vs[1:]):
            if not (p2 > p1 and q2 < q1):
                raise ValueError(f"hull vertices out of order: {vs}")


def _cross(o: Exponent, a: Exponent, b: Exponent) -> int:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def lower_hull_of_points(points) -> LowerHull:
    pts = sorted(set(points))
    if not pts:
        raise ValueError("empty support")
    q_min = min(q for _, q in pts)
    chain: list[Exponent] = []
    for pt in pts:
        while len(chain) >= 2 and _cross(chain[-2], chain[-1], pt) <= 0:
            chain.pop()
        chain.append(pt)
        if pt[1] == q_min:
            break
    return LowerHull(tuple(chain))


def lower_hull(s: TruncatedSeries) -> LowerHull:
    if not s.terms:
        raise EmptySeriesError(s.trunc_degree)
    return lower_hull_of_points(s.terms)


def hull_to_plfunction(h: LowerHull) -> PLFunction:
    vs = h.vertices
    points = [(Fraction(0), Fraction(vs[0][0])), (Fraction(1), Fraction(vs[-1][1]))]
    for (p1, q1), (p2, q2) in zip(vs, vs[1:]):
        r = Fraction(p2 - p1, (p2 - p1) + (q1 - q2))
        points.append((r, (1 - r) * p1 + r * q1))
    return PLFunction.from_points(points)


Valuable = Union[TruncatedSeries, LowerHull, PLFunction]


def _as_plfunction(f: Valuable) -> PLFunction:
    if isinstance(f, PLFunction):
        return f
    if isinstance(f, LowerHull):
        return hull_to_plfunction(f)
    if isinstance(f, TruncatedSeries):
        if not f.exact:
            raise UncertifiedHullError(
                "the hull of a truncated series is not known to be exact; certify it first"
            )
        return hull_to_plfunction(lower_hull(f))
    raise TypeError(f"cannot read a valuation from {type(f).__name__}")


def dominates(f: Valuable, g: Valuable) -> bool:
    """``val(f) <= val(g)`` at every point of the edge."""
    return pl_le(_as_plfunction(f), _as_plfunction(g))
