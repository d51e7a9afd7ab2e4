"""Affine bundle data on the skeleton and the closed-form cost function.

Coordinates: ``t`` is the universal-cover coordinate of the skeleton (period
3) and ``tv`` the cover coordinate of the boundary of the moment polytope
(period 9).  The canonical argument order is ``cost(t, tv)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


@dataclass(frozen=True)
class AffineGerm:
    """Germ ``t -> slope_tv * t + offset_b`` of an affine section near ``n_0``."""

    slope_tv: Fraction
    offset_b: Fraction

    def __call__(self, t) -> Fraction:
        return self.slope_tv * t + self.offset_b


@dataclass(frozen=True)
class CostBreakdown:
    k: int
    l: int
    m: int
    value: Fraction


def deck_action_on_L(power: int, point) -> tuple[Fraction, Fraction]:
    t, a = (Fraction(x) for x in point)
    for _ in range(power):
        t, a = t - 3, a - 9 * t + 9
    for _ in range(-power):
        # inverse of (t, a) -> (t - 3, a - 9t + 9)
        t, a = t + 3, a + 9 * (t + 3) - 9
    return t, a


def deck_action_on_germ(power: int, s: AffineGerm) -> AffineGerm:
    tv, b = Fraction(s.slope_tv), Fraction(s.offset_b)
    for _ in range(power):
        tv, b = tv - 9, b + 3 * tv - 18
    for _ in range(-power):
        tv, b = tv + 9, b - 3 * (tv + 9) + 18
    return AffineGerm(tv, b)


def _parts(x) -> tuple[int, int]:
    x = x if isinstance(x, Fraction) else Fraction(x)
    return x.numerator, x.denominator


# The closed forms below are evaluated over a common integer denominator and
# turned into a single Fraction at the end; this is several times faster than
# chaining Fraction operations and is what makes dense grids cheap.


def phi0(t) -> Fraction:
    a, q = _parts(t)
    k = a // q
    return Fraction(6 * (k + 1) * a - (2 + 3 * k * (k + 1)) * q, 2 * q)


def _bracket_index(a: int, q: int, b: int, s: int) -> int:
    # floor((tv - 3t)/9 + 1/3) with t = a/q, tv = b/s
    return (b * q - 3 * a * s + 3 * q * s) // (9 * q * s)


def bracket_index(t, tv) -> int:
    """Index of the orbit element realising the sup in the cost pairing."""
    return _bracket_index(*_parts(t), *_parts(tv))


def pairing_bracket(t, tv) -> Fraction:
    a, q = _parts(t)
    b, s = _parts(tv)
    m = _bracket_index(a, q, b, s)
    num = 2 * (b - 9 * m * s) * (a + 3 * m * q) + 9 * m * (3 * m - 1) * q * s
    return Fraction(num, 2 * q * s)


def legendre_phi0_star(tv) -> Fraction:
    b, s = _parts(tv)
    l = b // (3 * s)
    return Fraction(2 * l * b + (2 - 3 * l * (l + 1)) * s, 2 * s)


def cost_with_floors(t, tv, k: int, l: int, m: int) -> Fraction:
    """The cost formula with the three floor quantities supplied by the caller."""
    t, tv = Fraction(t), Fraction(tv)
    return (
        3 * (k + 1) * t
        + l * tv
        - (tv - 9 * m) * (t + 3 * m)
        - Fraction(3 * k * (k + 1) + 3 * l * (l + 1) + 9 * m * (3 * m - 1), 2)
    )


def cost(t, tv) -> CostBreakdown:
    a, q = _parts(t)
    b, s = _parts(tv)
    k, l, m = a // q, b // (3 * s), _bracket_index(a, q, b, s)
    num = (
        6 * (k + 1) * a * s
        + 2 * l * b * q
        - 2 * (b - 9 * m * s) * (a + 3 * m * q)
        - (3 * k * (k + 1) + 3 * l * (l + 1) + 9 * m * (3 * m - 1)) * q * s
    )
    return CostBreakdown(k, l, m, Fraction(num, 2 * q * s))


def cost_slopes_fixed_tv(tv) -> list[tuple[tuple[Fraction, Fraction], Fraction]]:
    """Slopes of ``t -> cost(t, tv)`` on ``[0, 3]`` for ``0 <= tv <= 3``.

    Always four pieces; the second or third is degenerate at ``tv`` = 0 or 3.
    """
    tv = Fraction(tv)
    if not 0 <= tv <= 3:
        raise ValueError(f"tv must lie in [0, 3], got {tv}")
    knee = 1 + tv / 3
    one, two, three = Fraction(1), Fraction(2), Fraction(3)
    return [
        ((Fraction(0), one), 3 - tv),
        ((one, knee), 6 - tv),
        ((knee, two), -(tv + 3)),
        ((two, three), -tv),
    ]
