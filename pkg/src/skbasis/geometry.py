"""Toric data of the projective plane: the polytope, its dual, and the affine
charts on the boundary of the dual triangle.

Everything here is exact.  Edge ``k`` of the dual boundary is the segment
``[n_k, n_{k+1}]`` (indices mod 3) and edge ``k`` of the polytope boundary is
``[m_k, m_{k+1}]``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction


@dataclass(frozen=True)
class LatticeVector:
    c1: int
    c2: int
    dual: bool = False

    def __add__(self, other: LatticeVector) -> LatticeVector:
        self._same_space(other)
        return LatticeVector(self.c1 + other.c1, self.c2 + other.c2, self.dual)

    def __sub__(self, other: LatticeVector) -> LatticeVector:
        self._same_space(other)
        return LatticeVector(self.c1 - other.c1, self.c2 - other.c2, self.dual)

    def _same_space(self, other: LatticeVector) -> None:
        if self.dual != other.dual:
            raise TypeError("cannot mix vectors of the lattice and its dual")


M = (LatticeVector(-1, -1), LatticeVector(-1, 2), LatticeVector(2, -1))
N = (
    LatticeVector(-1, 0, dual=True),
    LatticeVector(1, 1, dual=True),
    LatticeVector(0, -1, dual=True),
)


def pairing(m: LatticeVector, n: LatticeVector) -> int:
    if m.dual or not n.dual:
        raise TypeError("pairing expects (lattice vector, dual vector)")
    return m.c1 * n.c1 + m.c2 * n.c2


def _pair_rational(m: LatticeVector, n: tuple[Fraction, Fraction]) -> Fraction:
    return m.c1 * n[0] + m.c2 * n[1]


@dataclass(frozen=True)
class SkeletonPoint:
    """Point ``(1 - r) n_edge + r n_{edge+1}`` of the dual boundary.

    A vertex given as ``(i, 1)`` is stored as ``(i + 1, 0)`` so each point has
    a single key.
    """

    edge: int
    r: Fraction

    def __post_init__(self) -> None:
        r = Fraction(self.r)
        if not 0 <= r <= 1:
            raise ValueError(f"edge parameter must lie in [0, 1], got {r}")
        edge = self.edge % 3
        if r == 1:
            edge, r = (edge + 1) % 3, Fraction(0)
        object.__setattr__(self, "edge", edge)
        object.__setattr__(self, "r", r)

    @property
    def t(self) -> Fraction:
        return self.edge + self.r

    def vector(self) -> tuple[Fraction, Fraction]:
        a, b = N[self.edge], N[(self.edge + 1) % 3]
        return (
            (1 - self.r) * a.c1 + self.r * b.c1,
            (1 - self.r) * a.c2 + self.r * b.c2,
        )


def in_star(k: int, n: SkeletonPoint) -> bool:
    """Whether ``n`` lies in the open star of the vertex ``n_k``."""
    k %= 3
    return n.edge == k or (n.edge == (k - 1) % 3 and n.r > 0)


def chart_phi(k: int, n: SkeletonPoint) -> Fraction:
    """Affine coordinate ``k + <m_{k+1} - m_k, n>/3`` on the star of ``n_k``."""
    if k not in (0, 1, 2):
        raise ValueError(f"chart index must be 0, 1 or 2, got {k}")
    if not in_star(k, n):
        raise ValueError(f"{n} is outside the star of vertex n_{k}")
    return k + _pair_rational(M[(k + 1) % 3] - M[k], n.vector()) / 3


def cover_to_edge(t) -> SkeletonPoint:
    t = Fraction(t) % 3
    edge = math.floor(t)
    return SkeletonPoint(edge, t - edge)


def edge_to_cover(n: SkeletonPoint) -> Fraction:
    return n.t


@dataclass(frozen=True)
class PolytopePoint:
    """Lattice point ``(a m_edge + b m_{edge+1}) / (a + b)`` at level ``a + b``.

    ``(edge, 0, b)`` is the same vertex as ``(edge + 1, b, 0)``; the latter is
    the stored form.  Points at different levels are different keys even when
    they describe the same point of the polytope.
    """

    edge: int
    a: int
    b: int

    def __post_init__(self) -> None:
        if self.a < 0 or self.b < 0 or self.a + self.b == 0:
            raise ValueError(f"need a, b >= 0 and a + b > 0, got ({self.a}, {self.b})")
        edge = self.edge % 3
        a, b = self.a, self.b
        if a == 0:
            edge, a, b = (edge + 1) % 3, b, 0
        object.__setattr__(self, "edge", edge)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def level(self) -> int:
        return self.a + self.b

    @property
    def tv(self) -> Fraction:
        return 3 * self.edge + Fraction(3 * self.b, self.a + self.b)

    def point(self) -> tuple[Fraction, Fraction]:
        p, q = M[self.edge], M[(self.edge + 1) % 3]
        d = self.a + self.b
        return (
            Fraction(self.a * p.c1 + self.b * q.c1, d),
            Fraction(self.a * p.c2 + self.b * q.c2, d),
        )


def polytope_point_from_cover(tv, level: int) -> PolytopePoint:
    """Inverse of ``PolytopePoint.tv`` at a given level; ``tv`` is read mod 9."""
    tv = Fraction(tv) % 9
    edge = math.floor(tv / 3)
    b = (tv - 3 * edge) * level / 3
    if b.denominator != 1:
        raise ValueError(f"tv={tv} is not a lattice point at level {level}")
    return PolytopePoint(edge, level - int(b), int(b))


def boundary_lattice_points(level: int) -> list[PolytopePoint]:
    """The ``3 * level`` lattice points, ordered by edge then ``a`` descending."""
    if level < 1:
        raise ValueError("level must be positive")
    return [PolytopePoint(e, a, level - a) for e in range(3) for a in range(level, 0, -1)]
