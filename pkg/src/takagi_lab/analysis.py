"""Pointwise certificates against approximate derivability.

A function f has approximate derivative c at x only if for every
``alpha > c`` the density of ``{y : (f(y)-f(x))/(y-x) >= alpha}`` in
``(x-r, x+r)`` tends to 0 as ``r -> 0+``, and symmetrically for every
``beta < c`` with the LE sets.  The reports produced here are exact,
machine-checkable obstructions to that vanishing for the Takagi
function T:

* :func:`verify_lemma` certifies the one-scale estimate: at a
  non-dyadic x with g_n'(x) = +1, the set of y with
  ``0 < |y-x| < 2**-n`` and quotient ``<= G_{n-1}'(x) + 2/5`` has
  measure at least ``2**-(n+5)`` (mirrored with GE and -2/5 when
  g_n'(x) = -1).  Certification runs the measure engine with depth
  escalation: the 2/5 margin is exactly tight against worst-case
  tails (6/15), so the engine needs the real tail's slack, which only
  appears at higher depth.
* :func:`refute` packages such certificates into horizon-N evidence:
  for slope sums oscillating on a bounded range it emits LE/GE pairs
  whose thresholds differ by exactly 1/5 with densities >= 2**-6 on
  both sides -- jointly incompatible with any single derivative value;
  for drifting slope sums it emits one-sided certificates with
  unboundedly growing thresholds; at dyadic points it uses the
  blow-up of the one-sided quotients.

Finite horizons are treated honestly: liminf/limsup of the slope sums
are not decidable from finitely many digits, so classification output
is labelled as horizon evidence and refutations never claim the
infinite statement -- they exhibit the certificates whose existence the
infinite statement would forbid.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .exactnum import Dyadic, as_dyadic, dyadic_level, format_rat, is_dyadic, _to_fraction
from .measure import (
    CERTIFIED,
    DEFAULT_DEPTH_CAP,
    Dir,
    MeasureBound,
    QuotientQuery,
    UNDECIDED,
    certify_lower,
    quotient_set_bounds,
)
from .takagi import SlopeSeq, slope, slope_seq, slope_sum

__all__ = [
    "CASE_BOUNDED",
    "CASE_DIVERGENT",
    "CASE_DYADIC",
    "INSUFFICIENT_HORIZON",
    "NONDYADIC_CORPUS",
    "DYADIC_CORPUS",
    "LemmaReport",
    "ClassificationReport",
    "DensityCertificate",
    "CertificatePair",
    "BlowupReport",
    "RefutationEvidence",
    "verify_lemma",
    "classify",
    "blowup_check",
    "certificate",
    "refute",
    "to_jsonable",
]

CASE_BOUNDED = "bounded-oscillation"
CASE_DIVERGENT = "divergent"
CASE_DYADIC = "dyadic"
INSUFFICIENT_HORIZON = "insufficient-horizon"

# One-scale margin around the local slope; see the module docstring.
SLOPE_MARGIN = Fraction(2, 5)

# Default evaluation corpus: alternating, period-3, period-4 and longer
# period digit patterns, plus dyadic points of varied levels.
NONDYADIC_CORPUS = (
    Fraction(1, 3),
    Fraction(2, 3),
    Fraction(1, 5),
    Fraction(1, 7),
    Fraction(3, 7),
    Fraction(1, 11),
)
DYADIC_CORPUS = (
    Dyadic(0),
    Dyadic(1, 1),
    Dyadic(1, 2),
    Dyadic(3, 2),
    Dyadic(5, 3),
)

_LEMMA_DEPTH_HEADROOM = 8


@dataclass(frozen=True)
class LemmaReport:
    """Outcome of one one-scale measure certification."""

    x: Fraction
    n: int
    sign: int
    direction: Dir
    alpha: Fraction
    bound_required: Fraction
    bound_certified: Fraction
    depth_used: int
    status: str


@dataclass(frozen=True)
class ClassificationReport:
    """Horizon-N evidence about the behaviour of the slope sums.

    ``case_hint`` is evidence at the stated horizon only, never a claim
    about the infinite sequence.
    """

    x: Fraction
    horizon: int
    seq: SlopeSeq
    running_min: int
    running_max: int
    min_hits: tuple[int, ...]
    case_hint: str


@dataclass(frozen=True)
class DensityCertificate:
    """A certified density lower bound at one scale and threshold."""

    x: Fraction
    r: Dyadic
    alpha: Fraction
    direction: Dir
    density_lo: Fraction


@dataclass(frozen=True)
class CertificatePair:
    """LE/GE certificates whose thresholds bracket a forbidden gap."""

    index: int
    le: DensityCertificate
    ge: DensityCertificate

    def gap(self) -> Fraction:
        return self.ge.alpha - self.le.alpha


@dataclass(frozen=True)
class BlowupReport:
    """Blow-up of one-sided quotients around a dyadic point.

    ``lo_one_sided`` bounds the GE set at threshold ``n - 2*n0`` (all
    of it sits on the right of x), ``lo_mirror`` the LE set at the
    negated threshold on the left, and ``lo_full`` their sum -- the
    certified measure of ``{y : |quotient| >= threshold}``, expected to
    be the full punctured ball ``2**-n``.
    """

    x: Dyadic
    n: int
    base_level: int
    threshold: int
    radius: Dyadic
    bound_required: Fraction
    lo_one_sided: Fraction
    lo_mirror: Fraction
    lo_full: Fraction
    depth_used: int
    status: str


@dataclass(frozen=True)
class RefutationEvidence:
    """Everything :func:`refute` found at one point up to a horizon."""

    x: Fraction
    horizon: int
    case_hint: str
    pairs: tuple[CertificatePair, ...]
    singles: tuple[DensityCertificate, ...]
    status: str
    detail: str = ""


def verify_lemma(
    x,
    n: int,
    *,
    depth_cap: int = DEFAULT_DEPTH_CAP,
    depth0: int | None = None,
) -> LemmaReport:
    """Certify the one-scale measure estimate at (x, n).

    Runs the LE query at ``G_{n-1}'(x) + 2/5`` when ``g_n'(x) = +1``,
    the GE query at ``G_{n-1}'(x) - 2/5`` when ``g_n'(x) = -1``, both
    at radius ``2**-n``, and escalates depth until the certified lower
    bound reaches ``2**-(n+5)`` or the cap is hit.
    """
    xf = _to_fraction(x)
    if is_dyadic(xf):
        raise ValueError("the one-scale estimate needs a non-dyadic centre")
    if n < 1:
        raise ValueError("scale index must be positive")
    sign = slope(n, xf)
    base = slope_sum(xf, n - 1)
    if sign == 1:
        direction = Dir.LE
        alpha = base + SLOPE_MARGIN
    else:
        direction = Dir.GE
        alpha = base - SLOPE_MARGIN
    required = Fraction(1, 1 << (n + 5))
    lo, depth_used, status = certify_lower(
        xf,
        Dyadic.pow2(-n),
        alpha,
        direction,
        required,
        depth0=n + _LEMMA_DEPTH_HEADROOM if depth0 is None else depth0,
        depth_cap=depth_cap,
    )
    return LemmaReport(
        x=xf,
        n=n,
        sign=sign,
        direction=direction,
        alpha=alpha,
        bound_required=required,
        bound_certified=lo,
        depth_used=depth_used,
        status=status,
    )


def certificate(x, n: int, *, depth_cap: int = DEFAULT_DEPTH_CAP) -> DensityCertificate:
    """Package :func:`verify_lemma` as a density bound at radius 2**-n."""
    report = verify_lemma(x, n, depth_cap=depth_cap)
    r = Dyadic.pow2(-n)
    return DensityCertificate(
        x=report.x,
        r=r,
        alpha=report.alpha,
        direction=report.direction,
        density_lo=report.bound_certified / (2 * r.as_fraction()),
    )


def classify(x, N: int) -> ClassificationReport:
    """Slope-sum evidence at horizon N, with a case hint.

    Dyadic points short-circuit.  Otherwise the hint is
    ``bounded-oscillation`` when both running extrema stopped moving in
    the first half of the horizon, else ``divergent``.
    """
    xf = _to_fraction(x)
    if is_dyadic(xf):
        return ClassificationReport(
            x=xf,
            horizon=0,
            seq=SlopeSeq(point=xf, values=(), horizon=0),
            running_min=0,
            running_max=0,
            min_hits=(),
            case_hint=CASE_DYADIC,
        )
    seq = slope_seq(xf, N)
    vals = seq.values
    running_min = min(vals)
    running_max = max(vals)
    min_hits = tuple(i + 1 for i, v in enumerate(vals) if v == running_min)
    last_new_extreme = 1
    lo = hi = vals[0]
    for i, v in enumerate(vals[1:], start=2):
        if v < lo:
            lo = v
            last_new_extreme = i
        elif v > hi:
            hi = v
            last_new_extreme = i
    hint = CASE_BOUNDED if 2 * last_new_extreme <= N else CASE_DIVERGENT
    return ClassificationReport(
        x=xf,
        horizon=N,
        seq=seq,
        running_min=running_min,
        running_max=running_max,
        min_hits=min_hits,
        case_hint=hint,
    )


def blowup_check(x: Dyadic, n: int, *, depth_cap: int = DEFAULT_DEPTH_CAP) -> BlowupReport:
    """Certify the quotient blow-up around a dyadic point.

    With ``n0 = max(dyadic_level(x), 0)`` and ``n > 2*n0``, every y with
    ``0 < |y - x| <= 2**-(n+1)`` satisfies
    ``T(y) - T(x) >= (n - 2*n0)*|y - x|``: the k-th distance term moves
    by at most |h| for k <= n0 and equals |h| exactly for n0 < k <= n.
    Dividing by y - x, the right half of the ball has quotient
    ``>= n - 2*n0`` and the left half quotient ``<= -(n - 2*n0)``, so
    the GE query certifies the right half and the mirrored LE query the
    left half; their sum is the full ball ``2**-n``.

    The clamp to ``n0 >= 0`` matters at integers: x is on the level-0
    grid, but the series has no k = 0 term to contribute |h|, so only
    n of the first distance terms move and the supported threshold is
    n, not n + 2.
    """
    if not isinstance(x, Dyadic):
        x = as_dyadic(x)
    n0 = max(dyadic_level(x), 0)
    if n <= 2 * n0:
        raise ValueError(f"need n > {2 * n0} at {x} (level floor {n0})")
    threshold = n - 2 * n0
    r = Dyadic.pow2(-(n + 1))
    required = Fraction(1, 1 << (n + 2))
    xf = x.as_fraction()
    depth0 = n + 4
    lo_ge, depth_ge, status = certify_lower(
        xf, r, Fraction(threshold), Dir.GE, required, depth0=depth0, depth_cap=depth_cap
    )
    lo_le, depth_le, _ = certify_lower(
        xf, r, Fraction(-threshold), Dir.LE, required, depth0=depth0, depth_cap=depth_cap
    )
    return BlowupReport(
        x=x,
        n=n,
        base_level=n0,
        threshold=threshold,
        radius=r,
        bound_required=required,
        lo_one_sided=lo_ge,
        lo_mirror=lo_le,
        lo_full=lo_ge + lo_le,
        depth_used=max(depth_ge, depth_le),
        status=status,
    )


def _certified(cert: DensityCertificate) -> bool:
    return cert.density_lo >= Fraction(1, 64)


def _bounded_pairs(
    xf: Fraction, report: ClassificationReport, depth_cap: int
) -> tuple[list[CertificatePair], list[int]]:
    """LE/GE pairs at indices where the slope sums revisit their minimum.

    A revisit of the running minimum I at index j >= 2 forces
    ``G_{j-1}' = I + 1`` and ``G_{j+1}' = I + 1`` (unit steps that may
    not go below the minimum), i.e. a -1 step in and a +1 step out.
    These step directions are asserted rather than assumed; an interior
    violation would mean the index conventions have drifted and is
    surfaced as an error.  The hit at j = 1 qualifies only when
    ``G_0' = 0`` equals I + 1.
    """
    vals = report.seq.values
    N = report.horizon
    lowest = report.running_min
    pairs: list[CertificatePair] = []
    uncertified: list[int] = []
    for j in report.min_hits:
        if j + 1 > N:
            continue  # the step out of the hit is beyond the horizon
        before = vals[j - 2] if j >= 2 else 0
        after = vals[j]
        if j == 1 and before != lowest + 1:
            continue  # the empty-sum boundary is not a qualifying revisit
        if before != lowest + 1 or after != lowest + 1:
            raise RuntimeError(
                f"slope steps around minimum revisit at n={j} are "
                f"{before}->{lowest}->{after}; expected {lowest + 1} on both sides"
            )
        n_k = j + 1
        le = certificate(xf, n_k, depth_cap=depth_cap)
        ge = certificate(xf, n_k - 1, depth_cap=depth_cap)
        if le.direction is not Dir.LE or ge.direction is not Dir.GE:
            raise RuntimeError(f"unexpected certificate directions at n={n_k}")
        if ge.alpha - le.alpha != Fraction(1, 5):
            raise RuntimeError(f"threshold gap at n={n_k} is not 1/5")
        if _certified(le) and _certified(ge):
            pairs.append(CertificatePair(index=n_k, le=le, ge=ge))
        else:
            uncertified.append(n_k)
    return pairs, uncertified


def _divergent_singles(
    xf: Fraction, report: ClassificationReport, depth_cap: int
) -> tuple[list[DensityCertificate], list[int]]:
    """One-sided certificates at record values followed by a reversal.

    For upward drift: indices j where ``G_j'`` is a strict running
    maximum and the next step is -1 give GE certificates at thresholds
    ``G_j' - 2/5`` that grow without bound.  Downward drift mirrors.
    """
    vals = report.seq.values
    upward = vals[-1] - vals[0] >= 0
    singles: list[DensityCertificate] = []
    uncertified: list[int] = []
    best = None
    for j in range(1, report.horizon):
        v = vals[j - 1]
        is_record = (best is None) or (v > best if upward else v < best)
        if is_record:
            best = v
            step_out = vals[j] - v
            if (upward and step_out == -1) or (not upward and step_out == 1):
                cert = certificate(xf, j + 1, depth_cap=depth_cap)
                if _certified(cert):
                    singles.append(cert)
                else:
                    uncertified.append(j + 1)
    return singles, uncertified


def _dyadic_singles(
    x: Dyadic, count: int, depth_cap: int
) -> tuple[list[DensityCertificate], str]:
    """Blow-up certificates with unboundedly growing thresholds."""
    n0 = max(dyadic_level(x), 0)
    singles: list[DensityCertificate] = []
    first = 2 * n0 + 1
    for n in range(first, first + count):
        rep = blowup_check(x, n, depth_cap=depth_cap)
        singles.append(
            DensityCertificate(
                x=x.as_fraction(),
                r=rep.radius,
                alpha=Fraction(rep.threshold),
                direction=Dir.GE,
                density_lo=rep.lo_one_sided / (2 * rep.radius.as_fraction()),
            )
        )
    return singles, f"thresholds n - {2 * n0} for n = {first}..{first + count - 1}"


def refute(
    x,
    horizon: int,
    *,
    depth_cap: int = DEFAULT_DEPTH_CAP,
    dyadic_count: int = 8,
) -> RefutationEvidence:
    """Horizon-N evidence that no approximate derivative exists at x.

    Bounded-oscillation evidence yields LE/GE certificate pairs with a
    forbidden threshold gap of exactly 1/5; divergent evidence yields
    one-sided certificates at growing thresholds; dyadic points yield
    blow-up certificates.  When no qualifying index exists below the
    horizon the status is ``insufficient-horizon``.
    """
    xf = _to_fraction(x)
    if is_dyadic(xf):
        singles, detail = _dyadic_singles(as_dyadic(xf), dyadic_count, depth_cap)
        return RefutationEvidence(
            x=xf,
            horizon=horizon,
            case_hint=CASE_DYADIC,
            pairs=(),
            singles=tuple(singles),
            status=CERTIFIED,
            detail=detail,
        )

    report = classify(xf, horizon)
    if report.case_hint == CASE_BOUNDED:
        pairs, uncertified = _bounded_pairs(xf, report, depth_cap)
        if pairs:
            status = CERTIFIED
            detail = (
                f"{len(pairs)} certificate pairs at thresholds "
                f"{format_rat(report.running_min + SLOPE_MARGIN)} (LE) / "
                f"{format_rat(report.running_min + 1 - SLOPE_MARGIN)} (GE)"
            )
        elif uncertified:
            status = UNDECIDED
            detail = f"qualifying indices {uncertified} did not certify"
        else:
            status = INSUFFICIENT_HORIZON
            detail = "no qualifying minimum revisit below the horizon"
        return RefutationEvidence(
            x=xf,
            horizon=horizon,
            case_hint=report.case_hint,
            pairs=tuple(pairs),
            singles=(),
            status=status,
            detail=detail,
        )

    singles, uncertified = _divergent_singles(xf, report, depth_cap)
    if singles:
        status = CERTIFIED
        detail = f"{len(singles)} one-sided certificates at growing thresholds"
    elif uncertified:
        status = UNDECIDED
        detail = f"qualifying indices {uncertified} did not certify"
    else:
        status = INSUFFICIENT_HORIZON
        detail = "no record-and-reversal index below the horizon"
    return RefutationEvidence(
        x=xf,
        horizon=horizon,
        case_hint=report.case_hint,
        pairs=(),
        singles=tuple(singles),
        status=status,
        detail=detail,
    )


def to_jsonable(obj):
    """Recursively convert reports to JSON-ready data.

    Rationals (Fraction and Dyadic) become exact ``"p/q"`` strings;
    no floats ever appear.
    """
    if isinstance(obj, (Fraction, Dyadic)):
        return format_rat(obj)
    if isinstance(obj, Enum):
        return obj.value
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {
            field.name: to_jsonable(getattr(obj, field.name))
            for field in dataclasses.fields(obj)
        }
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(item) for item in obj]
    if isinstance(obj, dict):
        return {key: to_jsonable(value) for key, value in obj.items()}
    if isinstance(obj, (str, int, bool)) or obj is None:
        return obj
    raise TypeError(f"cannot serialize {type(obj).__name__} exactly")
