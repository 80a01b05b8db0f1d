"""Independent oracles the tests check the library against.

Everything here is deliberately written from scratch against the
defining formulas, using different code paths than the library:
distances via explicit floor/ceil grid neighbours, series values via
geometric summation of the eventually periodic digit orbit, slopes via
exact finite differences, and measures via a vectorised float sampler
with rigorous error margins.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from takagi_lab.exactnum import Dyadic, dyadic_neighbors, frac_part
from takagi_lab.measure import Dir, QuotientQuery
from takagi_lab.takagi import takagi_enclosure


def brute_g(k: int, x: Fraction) -> Fraction:
    """Distance from x to {j / 2**k} via the two enclosing grid points."""
    step = Fraction(1, 1 << k)
    j = math.floor(x / step)
    return min(x - j * step, (j + 1) * step - x)


def brute_G(n: int, x: Fraction) -> Fraction:
    return sum((brute_g(k, x) for k in range(1, n + 1)), Fraction(0))


def brute_T_dyadic(x: Dyadic) -> Fraction:
    """Finite summation of the series at a dyadic point (it terminates)."""
    xf = x.as_fraction()
    return brute_G(x.exp + 1, xf)


def _phi(u: Fraction) -> Fraction:
    return min(u, 1 - u)


def takagi_periodic(x) -> Fraction:
    """Exact series value at any rational, by geometric summation.

    The orbit u_k = 2**k x mod 1 is eventually periodic; summing
    phi(u_k)/2**k over the pre-period and closing the periodic part
    with 1/(1 - 2**-period) gives the exact limit.
    """
    x0 = frac_part(Fraction(x))
    orbit: list[Fraction] = []
    index: dict[Fraction, int] = {}
    u = (2 * x0) % 1
    while u not in index:
        index[u] = len(orbit)
        orbit.append(u)
        u = (2 * u) % 1
    start = index[u]
    total = Fraction(0)
    for i in range(start):
        total += _phi(orbit[i]) / (1 << (i + 1))
    periodic = Fraction(0)
    for i in range(start, len(orbit)):
        periodic += _phi(orbit[i]) / (1 << (i + 1))
    period = len(orbit) - start
    return total + periodic / (1 - Fraction(1, 1 << period))


def fd_slope(k: int, x: Fraction) -> Fraction:
    """Exact finite difference of g_k inside the level-(k+1) cell of x."""
    lo, hi = dyadic_neighbors(x, k + 1)
    x_prime = (x + hi.as_fraction()) / 2
    return (brute_g(k, x_prime) - brute_g(k, x)) / (x_prime - x)


def _runs(mask: np.ndarray) -> int:
    if mask.size == 0:
        return 0
    return int(mask[0]) + int(np.count_nonzero(mask[1:] & ~mask[:-1]))


def grid_measure_bracket(
    q: QuotientQuery, samples: int = 100_000, depth: int = 32
) -> tuple[Fraction, Fraction, int]:
    """Empirical bracket [emp_lo, emp_hi] for the query's set measure.

    Samples the window at cell centres, evaluates the series by exact
    integer digit orbits accumulated in floats (error well under the
    folded margins), and classifies each sample as definitely in,
    definitely out, or uncertain.  Every definite sample is rigorous,
    so the true measure lies between (yes_count - yes_runs) cells and
    2r minus (no_count - no_runs) cells.
    """
    x = q.x
    rf = q.r.as_fraction()
    cell = 2 * rf / samples
    y0 = x - rf + cell / 2

    common = np.lcm(y0.denominator, cell.denominator)
    assert common < 1 << 40, "grid denominator too large for the int64 sampler"
    n0 = y0.numerator * (common // y0.denominator)
    c = cell.numerator * (common // cell.denominator)
    idx = np.arange(samples, dtype=np.int64)
    v = (n0 % common + (c % common) * idx) % common

    g_sum = np.zeros(samples, dtype=np.float64)
    for k in range(1, depth + 1):
        v = (v << 1) % common
        g_sum += np.minimum(v, common - v) * (1.0 / (common * (1 << k)))
    tail = 2.0 ** -(depth + 1)
    eps = 1e-11  # covers float accumulation and conversions below

    tx = takagi_enclosure(x, depth)
    tx_lo = float(tx.lo) - 1e-15
    tx_hi = float(tx.hi) + 1e-15

    dy = (idx + 0.5) * float(cell) - float(rf)
    num_lo = (g_sum - eps) - tx_hi
    num_hi = (g_sum + tail + eps) - tx_lo
    with np.errstate(divide="ignore"):
        q_a = num_lo / dy
        q_b = num_hi / dy
    q_lo = np.minimum(q_a, q_b)
    q_hi = np.maximum(q_a, q_b)
    margin = 1e-9 * (1.0 + np.abs(q_lo) + np.abs(q_hi))
    q_lo -= margin
    q_hi += margin

    alpha = float(q.alpha)
    if q.direction is Dir.GE:
        yes = q_lo >= alpha
        no = q_hi < alpha
    else:
        yes = q_hi <= alpha
        no = q_lo > alpha
    uncertain = ~(yes | no)

    emp_lo = max(Fraction(0), (int(yes.sum()) - _runs(yes)) * cell)
    emp_hi = min(2 * rf, 2 * rf - (int(no.sum()) - _runs(no)) * cell)
    return emp_lo, emp_hi, int(uncertain.sum())
