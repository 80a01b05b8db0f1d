"""Certified bounds on the measure of difference-quotient level sets.

For a centre x, radius r, threshold alpha and direction GE, the target
set is ``{y : 0 < |y - x| < r, (T(y) - T(x))/(y - x) >= alpha}`` (LE
mirrors it).  The bracketing works on the exact polyline G_n at the
query's depth n:

* ``G_n(y) <= T(y) <= G_n(y) + tau`` with ``tau = 2**-(n+1)`` (tail band);
* ``T(x)`` is enclosed in ``[Tx_lo, Tx_hi]`` (a point when x is dyadic);
* on the right half (y > x) the quotient condition is
  ``T(y) >= T(x) + alpha*(y - x)``; on the left half the inequality
  flips because dividing by ``y - x < 0`` reverses it.

A point is *certified in* when the pessimistic side of the band already
satisfies the condition, *certified out* when the optimistic side
already fails it; both tests are affine comparisons against G_n, solved
exactly.  ``lo`` is the total certified-in length, ``hi`` is ``2r``
minus the certified-out length, and the true measure always lies in
``[lo, hi]``.  Increasing the depth never worsens either bound.

The punctured centre point and interval endpoints are measure zero and
are handled with closed intervals throughout.  Radii are restricted to
dyadic rationals, keeping every breakpoint on a dyadic grid.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .exactnum import Dyadic, _to_fraction, is_dyadic
from .plf import (
    BREAKPOINT_CAP,
    BreakpointLimitError,
    IntervalSet,
    build_Gn,
    solve_affine_ge,
    solve_affine_le,
)
from .takagi import takagi_enclosure

__all__ = [
    "CERTIFIED",
    "UNDECIDED",
    "DEFAULT_DEPTH_CAP",
    "DEPTH_STEP",
    "Dir",
    "QuotientQuery",
    "MeasureBound",
    "quotient_set_bounds",
    "quotient_set_sides",
    "density_bounds",
    "certify_lower",
]

CERTIFIED = "certified"
UNDECIDED = "undecided"

DEFAULT_DEPTH_CAP = 64
DEPTH_STEP = 4


class Dir(str, Enum):
    """Direction of the quotient comparison."""

    GE = "ge"
    LE = "le"

    @classmethod
    def from_string(cls, text: str) -> "Dir":
        try:
            return cls(text.strip().lower())
        except ValueError:
            raise ValueError(f"direction must be 'ge' or 'le', got {text!r}") from None


@dataclass(frozen=True)
class QuotientQuery:
    """One level-set measurement request."""

    x: Fraction
    r: Dyadic
    alpha: Fraction
    direction: Dir
    depth: int

    def __post_init__(self):
        object.__setattr__(self, "x", _to_fraction(self.x))
        object.__setattr__(self, "alpha", _to_fraction(self.alpha))
        if not isinstance(self.r, Dyadic):
            raise TypeError("radius must be Dyadic")
        if not self.r > 0:
            raise ValueError("radius must be positive")
        if not isinstance(self.direction, Dir):
            raise TypeError("direction must be a Dir")
        if self.depth < 1:
            raise ValueError("depth must be positive")


@dataclass(frozen=True)
class MeasureBound:
    """Certified bracket [lo, hi] around a true Lebesgue measure."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"crossed measure bound: {self.lo} > {self.hi}")


def _window_plf(x: Fraction, rf: Fraction, depth: int, max_breakpoints: int):
    """G_depth on the smallest D_{depth+1}-aligned interval covering the window."""
    scale = 1 << (depth + 1)
    lo = x - rf
    hi = x + rf
    a = Dyadic((lo.numerator * scale) // lo.denominator, depth + 1)
    b = Dyadic(-((-hi.numerator * scale) // hi.denominator), depth + 1)
    return build_Gn(a, b, depth, max_breakpoints=max_breakpoints)


def quotient_set_sides(
    q: QuotientQuery, *, max_breakpoints: int = BREAKPOINT_CAP
) -> tuple[MeasureBound, MeasureBound]:
    """Certified (left, right) half-window brackets for the query's set."""
    x = q.x
    rf = q.r.as_fraction()
    n = q.depth
    tau = Fraction(1, 1 << (n + 1))

    if is_dyadic(x):
        enc = takagi_enclosure(x, 1)  # dyadic points collapse exactly
        tx_lo = tx_hi = enc.lo
    else:
        enc = takagi_enclosure(x, n)
        tx_lo, tx_hi = enc.lo, enc.hi

    f = _window_plf(x, rf, n, max_breakpoints)
    # {y : G_n(y) >= Tx_hi + alpha*(y - x)}  — pessimistic lower line
    above = solve_affine_ge(f, tx_hi - q.alpha * x, q.alpha)
    # {y : G_n(y) + tau <= Tx_lo + alpha*(y - x)}  — optimistic upper line
    below = solve_affine_le(f, tx_lo - q.alpha * x - tau, q.alpha)

    left = (x - rf, x)
    right = (x, x + rf)
    if q.direction is Dir.GE:
        in_r, out_r = above.clip(*right), below.clip(*right)
        in_l, out_l = below.clip(*left), above.clip(*left)
    else:
        in_r, out_r = below.clip(*right), above.clip(*right)
        in_l, out_l = above.clip(*left), below.clip(*left)

    left_bound = MeasureBound(in_l.measure(), rf - out_l.measure())
    right_bound = MeasureBound(in_r.measure(), rf - out_r.measure())
    return left_bound, right_bound


def quotient_set_bounds(
    q: QuotientQuery, *, max_breakpoints: int = BREAKPOINT_CAP
) -> MeasureBound:
    """Certified bracket for the measure of the query's level set."""
    left, right = quotient_set_sides(q, max_breakpoints=max_breakpoints)
    return MeasureBound(left.lo + right.lo, left.hi + right.hi)


def density_bounds(
    q: QuotientQuery, *, max_breakpoints: int = BREAKPOINT_CAP
) -> tuple[Fraction, Fraction]:
    """The measure bracket divided by the window length 2r."""
    mb = quotient_set_bounds(q, max_breakpoints=max_breakpoints)
    two_r = 2 * q.r.as_fraction()
    return mb.lo / two_r, mb.hi / two_r


def certify_lower(
    x,
    r: Dyadic,
    alpha,
    direction: Dir,
    target,
    *,
    depth0: int,
    depth_step: int = DEPTH_STEP,
    depth_cap: int = DEFAULT_DEPTH_CAP,
    max_breakpoints: int = BREAKPOINT_CAP,
) -> tuple[Fraction, int, str]:
    """Escalate depth until the certified lower bound reaches ``target``.

    Returns ``(best_lo, depth_used, status)``.  The loop stops at the
    depth cap or when a construction blows the breakpoint budget; the
    distinguished ``UNDECIDED`` status is an outcome, not an error.
    """
    target = _to_fraction(target)
    best = Fraction(0)
    depth = depth0
    depth_used = depth0
    while depth <= depth_cap:
        try:
            mb = quotient_set_bounds(
                QuotientQuery(_to_fraction(x), r, _to_fraction(alpha), direction, depth),
                max_breakpoints=max_breakpoints,
            )
        except BreakpointLimitError:
            break
        depth_used = depth
        if mb.lo > best:
            best = mb.lo
        if best >= target:
            return best, depth, CERTIFIED
        depth += depth_step
    return best, depth_used, UNDECIDED
