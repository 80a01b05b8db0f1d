"""Exact Takagi-function evaluation with certified measure bounds.

The package is organised bottom-up:

* :mod:`takagi_lab.exactnum` -- exact dyadic/rational arithmetic and
  binary-grid geometry (digits, neighbours, levels);
* :mod:`takagi_lab.takagi` -- the function T, its partial sums and
  slope sums, exact values at dyadic points and enclosures elsewhere;
* :mod:`takagi_lab.plf` -- exact piecewise-linear representation of the
  partial sums and affine level-set solving;
* :mod:`takagi_lab.measure` -- certified two-sided bounds on measures
  of difference-quotient level sets;
* :mod:`takagi_lab.analysis` -- certificates against approximate
  derivability (one-scale estimates, blow-ups, refutation evidence);
* :mod:`takagi_lab.cli` -- the ``takagi-lab`` command-line tool.
"""

from .exactnum import (
    Dyadic,
    Rat,
    as_dyadic,
    bit_at,
    canonicalize,
    dyadic_level,
    dyadic_neighbors,
    format_rat,
    frac_part,
    is_dyadic,
    parse_rat,
)
from .takagi import (
    Enclosure,
    SlopeSeq,
    G,
    g,
    slope,
    slope_seq,
    slope_sum,
    takagi_enclosure,
    takagi_exact,
)
from .plf import (
    BreakpointLimitError,
    IntervalSet,
    PLF,
    build_Gn,
    solve_affine_ge,
    solve_affine_le,
)
from .measure import (
    Dir,
    MeasureBound,
    QuotientQuery,
    certify_lower,
    density_bounds,
    quotient_set_bounds,
    quotient_set_sides,
)
from .analysis import (
    BlowupReport,
    CertificatePair,
    ClassificationReport,
    DensityCertificate,
    LemmaReport,
    RefutationEvidence,
    blowup_check,
    certificate,
    classify,
    refute,
    to_jsonable,
    verify_lemma,
)

__version__ = "0.1.0"
