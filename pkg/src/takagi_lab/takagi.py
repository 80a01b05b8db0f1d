"""Exact and certified evaluation of the Takagi function.

The function is ``T(x) = sum_{k>=1} g_k(x)`` where ``g_k(x)`` is the
distance from ``x`` to the level-k grid D_k.  The partial sum
``G_n = g_1 + ... + g_n`` is piecewise linear with integer slopes
between consecutive points of D_{n+1}; at every non-dyadic ``x`` each
``g_k`` is differentiable with ``g_k'(x) = +-1``, so the slope sums
``G_n'(x)`` form an integer walk with unit steps.

All arithmetic is exact.  A value of ``T`` that needs a limit is
returned as an :class:`Enclosure` using the tail estimate
``0 <= T(x) - G_n(x) <= sum_{k>n} 2**-(k+1) = 2**-(n+1)``,
which follows from ``sup g_k = 2**-(k+1)``.

The series here starts at k = 1 (no distance-to-integers term).  The
textbook variant that includes that term is available through the
``classical`` flag on the evaluation entry points.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exactnum import (
    Dyadic,
    as_dyadic,
    bit_at,
    dyadic_level,
    frac_part,
    is_dyadic,
    _to_fraction,
)

__all__ = [
    "DEFAULT_DEPTH",
    "Enclosure",
    "SlopeSeq",
    "g",
    "G",
    "takagi_exact",
    "takagi_enclosure",
    "slope",
    "slope_seq",
    "slope_sum",
]

# Enclosure width 2**-65 dwarfs every threshold the analysis layer uses.
DEFAULT_DEPTH = 64


@dataclass(frozen=True)
class Enclosure:
    """Certified interval [lo, hi] containing a real value."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty enclosure: {self.lo} > {self.hi}")

    def width(self) -> Fraction:
        return self.hi - self.lo

    def __contains__(self, value) -> bool:
        return self.lo <= value <= self.hi


@dataclass(frozen=True)
class SlopeSeq:
    """Slope sums ``G_1'(x), ..., G_N'(x)`` at a non-dyadic point.

    Consecutive entries differ by exactly one and ``values[n-1]`` has
    the parity of ``n``.
    """

    point: Fraction
    values: tuple[int, ...]
    horizon: int


def _dist_to_grid(x: Fraction, k: int) -> Fraction:
    """Distance from x to D_k = {j / 2**k}, for k >= 0."""
    scaled = x * (1 << k)
    f = scaled - (scaled.numerator // scaled.denominator)
    return min(f, 1 - f) / (1 << k)


def g(k: int, x) -> Fraction:
    """Distance from ``x`` to the level-k grid; ``0 <= g <= 2**-(k+1)``."""
    if k < 1:
        raise ValueError("grid index starts at 1")
    return _dist_to_grid(_to_fraction(x), k)


def G(n: int, x, *, classical: bool = False) -> Fraction:
    """Partial sum ``g_1(x) + ... + g_n(x)``; empty sum for n = 0.

    With ``classical=True`` the distance-to-integers term is added in
    front, giving the partial sums of the textbook variant.
    """
    if n < 0:
        raise ValueError("partial-sum order must be non-negative")
    xf = _to_fraction(x)
    total = _dist_to_grid(xf, 0) if classical else Fraction(0)
    for k in range(1, n + 1):
        total += _dist_to_grid(xf, k)
    return total


def takagi_exact(x: Dyadic, *, classical: bool = False) -> Dyadic:
    """T(x) at a dyadic point, where the series terminates.

    Once ``x`` is on D_m every later ``g_k(x)`` vanishes, so the value
    is the finite sum ``G_m(x)`` with ``m = dyadic_level(x) + 1``.
    """
    if not isinstance(x, Dyadic):
        x = as_dyadic(x)
    m = dyadic_level(x) + 1
    return as_dyadic(G(m, x.as_fraction(), classical=classical))


def takagi_enclosure(x, depth: int = DEFAULT_DEPTH, *, classical: bool = False) -> Enclosure:
    """Certified interval around T(x).

    Dyadic points collapse to the exact value; elsewhere the result is
    ``[G_depth(x), G_depth(x) + 2**-(depth+1)]`` by the tail bound.
    """
    if depth < 1:
        raise ValueError("enclosure depth must be positive")
    xf = _to_fraction(x)
    if is_dyadic(xf):
        t = takagi_exact(as_dyadic(xf), classical=classical).as_fraction()
        return Enclosure(t, t)
    lo = G(depth, xf, classical=classical)
    return Enclosure(lo, lo + Fraction(1, 1 << (depth + 1)))


def slope(k: int, x) -> int:
    """The slope ``g_k'(x)`` of the linear piece of g_k containing x.

    Equals ``1 - 2*b_{k+1}(x)`` where b_j is the j-th binary digit of
    x mod 1: g_k rises on the left half of each D_k cell and falls on
    the right half.  Undefined exactly on D_{k+1} (the corners).
    """
    if k < 1:
        raise ValueError("grid index starts at 1")
    xf = frac_part(_to_fraction(x))
    if (xf * (1 << (k + 1))).denominator == 1:
        raise ValueError(f"g_{k} has a corner at {x}")
    return 1 - 2 * bit_at(xf, k + 1)


def slope_seq(x, N: int) -> SlopeSeq:
    """Slope sums ``G_n'(x)`` for n = 1..N at a non-dyadic point."""
    if N < 1:
        raise ValueError("horizon must be positive")
    xf = _to_fraction(x)
    if is_dyadic(xf):
        raise ValueError(f"slopes are eventually undefined at dyadic {xf}")
    values = []
    total = 0
    for k in range(1, N + 1):
        step = slope(k, xf)
        total += step
        values.append(total)
    # unit steps and parity come with the construction; keep them checked
    assert all(abs(values[i + 1] - values[i]) == 1 for i in range(len(values) - 1))
    assert all((values[i] - (i + 1)) % 2 == 0 for i in range(len(values)))
    return SlopeSeq(point=xf, values=tuple(values), horizon=N)


def slope_sum(x, n: int) -> int:
    """``G_n'(x)`` as a single integer; n = 0 gives the empty sum 0."""
    if n < 0:
        raise ValueError("slope-sum order must be non-negative")
    if n == 0:
        return 0
    return slope_seq(x, n).values[-1]
