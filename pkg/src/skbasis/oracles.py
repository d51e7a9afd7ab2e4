"""Brute-force references for the cost module.

These compute the defining suprema directly (deck orbits, line families,
suprema of piecewise-linear functions) and share nothing with the closed
forms in :mod:`skbasis.cost` except the deck generator itself.  Every sup over
the integers is taken over a finite window and comes with a check that the
window provably contains the maximiser.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

from skbasis.cost import AffineGerm, deck_action_on_germ


class WindowCertificateError(RuntimeError):
    pass


def default_window(t, tv) -> int:
    return 10 + math.ceil(abs(Fraction(tv) / 9) + abs(Fraction(t) / 3)) + 2


def _certify(values: list, what: str):
    """``values`` holds a concave sequence over the window; check the maximiser
    is interior, i.e. both ends sit strictly below the incumbent."""
    best = max(values)
    if not (values[0] < best and values[-1] < best):
        raise WindowCertificateError(f"{what}: window too narrow to certify the sup")
    return best


class BracketOracle:
    """Sup over the deck orbit of the germ ``s_(tv, 0)``, evaluated at ``t``.

    The orbit germs are produced by iterating the deck generator, then each
    evaluation compares integer numerators over a common denominator.
    """

    def __init__(self, tv, t_bound=0):
        self.tv = Fraction(tv)
        self.t_bound = abs(Fraction(t_bound))
        self.window = default_window(self.t_bound, self.tv)
        W = self.window
        forward, backward = [], []
        g = AffineGerm(self.tv, Fraction(0))
        for _ in range(W + 1):
            forward.append(g)
            g = deck_action_on_germ(1, g)
        g = deck_action_on_germ(-1, AffineGerm(self.tv, Fraction(0)))
        for _ in range(W):
            backward.append(g)
            g = deck_action_on_germ(-1, g)
        self.germs = backward[::-1] + forward
        den = 1
        for s in self.germs:
            den = math.lcm(den, s.slope_tv.denominator, s.offset_b.denominator)
        self._den = den
        self._ints = [
            (int(s.slope_tv * den), int(s.offset_b * den)) for s in self.germs
        ]

    def lines(self) -> list[tuple[Fraction, Fraction]]:
        return [(s.slope_tv, s.offset_b) for s in self.germs]

    def __call__(self, t) -> Fraction:
        t = Fraction(t)
        if abs(t) > self.t_bound:
            raise WindowCertificateError(f"t={t} outside the range this oracle was built for")
        tn, td = t.numerator, t.denominator
        scores = [sl * tn + off * td for sl, off in self._ints]
        best = _certify(scores, f"bracket at (t={t}, tv={self.tv})")
        return Fraction(best, self._den * td)


def bracket_oracle(t, tv) -> Fraction:
    return BracketOracle(tv, t_bound=t)(t)


def _phi0_window(t: Fraction) -> int:
    return 10 + math.ceil(abs(t)) + 2


def phi0_lines(W: int) -> list[tuple[Fraction, Fraction]]:
    """The family ``t -> 3kt - 1 - 3k(k-1)/2`` for ``|k| <= W``."""
    return [(Fraction(3 * k), Fraction(-1) - Fraction(3 * k * (k - 1), 2)) for k in range(-W, W + 1)]


@lru_cache(maxsize=4096)
def phi0_oracle(t) -> Fraction:
    t = Fraction(t)
    values = [sl * t + off for sl, off in phi0_lines(_phi0_window(t))]
    return _certify(values, f"phi0 at t={t}")


def upper_envelope_breaks(lines, lo, hi) -> list[Fraction]:
    """Abscissae in ``(lo, hi)`` where the max of ``lines`` changes line."""
    lo, hi = Fraction(lo), Fraction(hi)
    best: dict[Fraction, Fraction] = {}
    for sl, off in lines:
        if sl not in best or off > best[sl]:
            best[sl] = off
    hull: list[tuple[Fraction, Fraction]] = []
    for sl in sorted(best):
        line = (sl, best[sl])
        while len(hull) >= 2 and _crossing(hull[-2], line) <= _crossing(hull[-2], hull[-1]):
            hull.pop()
        hull.append(line)
    crossings = (_crossing(p, q) for p, q in zip(hull, hull[1:]))
    return [x for x in crossings if lo < x < hi]


def _crossing(p, q) -> Fraction:
    return (p[1] - q[1]) / (q[0] - p[0])


@lru_cache(maxsize=64)
def _phi0_breaks(W: int, lo: Fraction, hi: Fraction) -> tuple[Fraction, ...]:
    return tuple(upper_envelope_breaks(phi0_lines(W), lo, hi))


def legendre_oracle(tv, t_lo=-6, t_hi=6, grid_step=Fraction(1, 12)) -> Fraction:
    """``sup_t (bracket(t, tv) - phi0(t))`` by exhaustive search.

    The objective is piecewise linear in ``t``, so its max over ``[t_lo, t_hi]``
    sits at an endpoint or at a break of one of the two upper envelopes; all of
    those are evaluated, together with a regular grid.  The objective has
    period 3 in ``t`` (both terms are sections of the same bundle), which is
    checked on the candidate set, so a window of length >= 3 gives the global
    sup.
    """
    tv = Fraction(tv)
    lo, hi = Fraction(t_lo), Fraction(t_hi)
    if hi - lo < 3:
        raise WindowCertificateError("need a window of at least one period")
    bound = max(abs(lo), abs(hi))
    bracket = BracketOracle(tv, t_bound=bound)
    breaks = {lo, hi}
    breaks.update(upper_envelope_breaks(bracket.lines(), lo, hi))
    breaks.update(_phi0_breaks(_phi0_window(bound), lo, hi))
    candidates = set(breaks)
    steps = int((hi - lo) / grid_step)
    candidates.update(lo + i * grid_step for i in range(steps + 1))

    def objective(t):
        return bracket(t) - phi0_oracle(t)

    values = {t: objective(t) for t in candidates}
    for t in breaks:
        if t + 3 <= hi and objective(t + 3) != values[t]:
            raise WindowCertificateError(f"objective is not 3-periodic at t={t}")
    return max(values.values())
