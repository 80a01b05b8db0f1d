"""Command-line front end.

Subcommands map one-to-one onto library operations: ``eval``,
``enclose``, ``slopes``, ``neighbors``, ``measure``, ``lemma``,
``blowup``, ``classify``, ``refute``, ``sample`` and ``verify-all``.
All machine output is exact: JSON carries rationals as ``"p/q"``
strings under a versioned ``"schema": "takagi-lab/1"`` key, CSV is
UTF-8 with a header row.  The optional ``--approx`` flag adds decimal
convenience values that are explicitly non-authoritative.

Exit codes: 0 on success or a certified outcome, 2 when a verification
came back undecided (or a corpus run has failures), 1 on usage or
precondition errors.  ``TAKAGI_DEPTH_CAP`` overrides the default depth
cap of 64.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import analysis, measure
from .exactnum import (
    Dyadic,
    as_dyadic,
    dyadic_neighbors,
    format_rat,
    is_dyadic,
    parse_rat,
)
from .plf import BreakpointLimitError
from .takagi import slope_seq, takagi_enclosure, takagi_exact

SCHEMA = "takagi-lab/1"


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse variant that reports usage problems as exit code 1."""

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        # let negative rationals like -3/5 pass as option values
        self._negative_number_matcher = re.compile(r"^-\d+(/\d+)?$")

    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(message)


@dataclass
class RunConfig:
    """Validated inputs for one invocation."""

    command: str
    fmt: str
    depth_cap: int
    approx: bool
    args: argparse.Namespace


def _parse_dyadic(text: str) -> Dyadic:
    value = parse_rat(text)
    if not is_dyadic(value):
        raise ValueError(f"{text!r} is not dyadic (denominator must be a power of two)")
    return as_dyadic(value)


def _build_parser() -> _Parser:
    parser = _Parser(prog="takagi-lab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def add(name, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--format", dest="fmt", choices=("text", "json", "csv"),
                       default="text")
        p.add_argument("--approx", action="store_true",
                       help="add non-authoritative decimal values to the output")
        p.add_argument("--depth-cap", type=int, default=None,
                       help="override the depth cap (default from TAKAGI_DEPTH_CAP or 64)")
        return p

    p = add("eval", "exact T(x) at a dyadic point")
    p.add_argument("--x", required=True)
    p.add_argument("--classical", action="store_true",
                   help="include the distance-to-integers term")

    p = add("enclose", "certified enclosure of T(x)")
    p.add_argument("--x", required=True)
    p.add_argument("--depth", type=int, default=64)
    p.add_argument("--classical", action="store_true")

    p = add("slopes", "slope sums G_1'(x)..G_N'(x)")
    p.add_argument("--x", required=True)
    p.add_argument("--n", type=int, required=True, help="horizon N")

    p = add("neighbors", "level-n grid neighbours around x")
    p.add_argument("--x", required=True)
    p.add_argument("--n", type=int, required=True)

    p = add("measure", "certified measure bracket for a quotient level set")
    p.add_argument("--x", required=True)
    p.add_argument("--r", required=True, help="dyadic radius")
    p.add_argument("--alpha", required=True)
    p.add_argument("--dir", required=True, choices=("ge", "le"))
    p.add_argument("--depth", type=int, required=True)

    p = add("lemma", "certify the one-scale measure estimate at (x, n)")
    p.add_argument("--x", required=True)
    p.add_argument("--n", type=int, required=True)

    p = add("blowup", "certify the quotient blow-up at a dyadic point")
    p.add_argument("--x", required=True)
    p.add_argument("--n", type=int, required=True)

    p = add("classify", "horizon evidence about the slope sums at x")
    p.add_argument("--x", required=True)
    p.add_argument("--n", "--N", dest="n", type=int, required=True, help="horizon N")

    p = add("refute", "emit certificates against approximate derivability")
    p.add_argument("--x", required=True)
    p.add_argument("--n", "--N", dest="n", type=int, default=20, help="horizon N")

    p = add("sample", "CSV enclosure samples of T on [a, b]")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--depth", type=int, default=20)
    p.add_argument("--classical", action="store_true")

    p = add("verify-all", "run a corpus of lemma/blowup checks")
    p.add_argument("--corpus", default=None, help="file with '<kind> <x> <n>' lines")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")

    return parser


def _emit_json(command: str, result, approx_extra=None) -> str:
    payload = {"schema": SCHEMA, "command": command,
               "result": analysis.to_jsonable(result)}
    if approx_extra is not None:
        payload["approx"] = approx_extra
    return json.dumps(payload, indent=2, sort_keys=False)


def _text_lines(result) -> list[str]:
    data = analysis.to_jsonable(result)
    out: list[str] = []

    def walk(prefix: str, node) -> None:
        items = node.items() if isinstance(node, dict) else enumerate(node)
        for key, value in items:
            label = f"{prefix}{key}"
            if isinstance(value, (dict, list)):
                walk(f"{label}.", value)
            else:
                out.append(f"{label}: {value}")

    if isinstance(data, (dict, list)):
        walk("", data)
    else:
        out.append(str(data))
    return out


def sample_rows(a: Dyadic, b: Dyadic, count: int, depth: int,
                *, approx: bool = False, classical: bool = False) -> list[list[str]]:
    """Enclosure rows "y,lo,hi" at equally spaced points of [a, b]."""
    if not a < b:
        raise ValueError("need a < b")
    if count < 2:
        raise ValueError("need at least two sample points")
    af, bf = a.as_fraction(), b.as_fraction()
    step = (bf - af) / (count - 1)
    rows = []
    for i in range(count):
        y = af + i * step
        enc = takagi_enclosure(y, depth, classical=classical)
        row = [format_rat(y), format_rat(enc.lo), format_rat(enc.hi)]
        if approx:
            row.append(repr(float((enc.lo + enc.hi) / 2)))
        rows.append(row)
    return rows


# -- corpus runner ----------------------------------------------------

def _parse_corpus(text: str) -> list[tuple[str, str, int]]:
    entries = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3 or parts[0] not in ("lemma", "blowup"):
            raise ValueError(f"corpus line {lineno}: want '<lemma|blowup> <x> <n>'")
        entries.append((parts[0], parts[1], int(parts[2])))
    return entries


def _default_corpus() -> list[tuple[str, str, int]]:
    entries = [("lemma", format_rat(x), n)
               for x in analysis.NONDYADIC_CORPUS for n in range(2, 6)]
    for x in analysis.DYADIC_CORPUS:
        first = 2 * max(x.exp - 1, 0) + 1
        entries.extend(("blowup", format_rat(x), n) for n in range(first, first + 4))
    return entries


def _run_corpus_entry(job: tuple[int, str, str, int, int]) -> dict:
    index, kind, x_text, n, depth_cap = job
    if kind == "lemma":
        report = analysis.verify_lemma(parse_rat(x_text), n, depth_cap=depth_cap)
    else:
        report = analysis.blowup_check(_parse_dyadic(x_text), n, depth_cap=depth_cap)
    return {"index": index, "kind": kind, "x": x_text, "n": n,
            "status": report.status, "report": analysis.to_jsonable(report)}


def _verify_all(cfg: RunConfig) -> int:
    if cfg.args.corpus is not None:
        entries = _parse_corpus(Path(cfg.args.corpus).read_text(encoding="utf-8"))
    else:
        entries = _default_corpus()
    jobs = [(i, kind, x, n, cfg.depth_cap)
            for i, (kind, x, n) in enumerate(entries)]
    if cfg.args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=cfg.args.jobs) as pool:
            results = list(pool.map(_run_corpus_entry, jobs))
    else:
        results = [_run_corpus_entry(job) for job in jobs]
    results.sort(key=lambda item: item["index"])

    all_ok = all(r["status"] == measure.CERTIFIED for r in results)
    if cfg.fmt == "json":
        payload = {"schema": SCHEMA, "command": "verify-all",
                   "certified": all_ok, "results": results}
        print(json.dumps(payload, indent=2))
    else:
        for r in results:
            print(f"{r['index']:4d}  {r['kind']:6s}  x={r['x']:>10s}  "
                  f"n={r['n']:<3d}  {r['status']}")
        print(f"{'all certified' if all_ok else 'FAILURES PRESENT'} "
              f"({len(results)} entries)")
    return 0 if all_ok else 2


# -- dispatch ---------------------------------------------------------

def _dispatch(cfg: RunConfig) -> int:
    args = cfg.args
    command = cfg.command

    if command == "eval":
        x = parse_rat(args.x)
        if not is_dyadic(x):
            raise ValueError(f"{args.x!r} is not dyadic; use 'enclose' for general rationals")
        value = takagi_exact(as_dyadic(x), classical=args.classical)
        if cfg.fmt == "json":
            extra = {"value": float(value.as_fraction())} if cfg.approx else None
            print(_emit_json(command, {"x": x, "value": value}, extra))
        else:
            suffix = f"  (~{float(value.as_fraction())})" if cfg.approx else ""
            print(f"{format_rat(value)}{suffix}")
        return 0

    if command == "enclose":
        x = parse_rat(args.x)
        enc = takagi_enclosure(x, args.depth, classical=args.classical)
        result = {"x": x, "depth": args.depth, "lo": enc.lo, "hi": enc.hi}
        if cfg.fmt == "json":
            extra = {"mid": float((enc.lo + enc.hi) / 2)} if cfg.approx else None
            print(_emit_json(command, result, extra))
        else:
            print(f"[{format_rat(enc.lo)}, {format_rat(enc.hi)}]")
        return 0

    if command == "slopes":
        seq = slope_seq(parse_rat(args.x), args.n)
        if cfg.fmt == "json":
            print(_emit_json(command, seq))
        else:
            print(" ".join(str(v) for v in seq.values))
        return 0

    if command == "neighbors":
        lo, hi = dyadic_neighbors(parse_rat(args.x), args.n)
        if cfg.fmt == "json":
            print(_emit_json(command, {"x_n": lo, "y_n": hi}))
        else:
            print(f"{format_rat(lo)} {format_rat(hi)}")
        return 0

    if command == "measure":
        query = measure.QuotientQuery(
            x=parse_rat(args.x),
            r=_parse_dyadic(args.r),
            alpha=parse_rat(args.alpha),
            direction=measure.Dir.from_string(args.dir),
            depth=args.depth,
        )
        left, right = measure.quotient_set_sides(query)
        bound = measure.MeasureBound(left.lo + right.lo, left.hi + right.hi)
        result = {"query": query, "bound": bound, "left": left, "right": right}
        if cfg.fmt == "json":
            extra = ({"lo": float(bound.lo), "hi": float(bound.hi)}
                     if cfg.approx else None)
            print(_emit_json(command, result, extra))
        else:
            for line in _text_lines(result):
                print(line)
        return 0

    if command == "lemma":
        report = analysis.verify_lemma(parse_rat(args.x), args.n,
                                       depth_cap=cfg.depth_cap)
        _print_report(cfg, command, report)
        return 0 if report.status == measure.CERTIFIED else 2

    if command == "blowup":
        report = analysis.blowup_check(_parse_dyadic(args.x), args.n,
                                       depth_cap=cfg.depth_cap)
        _print_report(cfg, command, report)
        return 0 if report.status == measure.CERTIFIED else 2

    if command == "classify":
        report = analysis.classify(parse_rat(args.x), args.n)
        _print_report(cfg, command, report)
        return 0

    if command == "refute":
        evidence = analysis.refute(parse_rat(args.x), args.n,
                                   depth_cap=cfg.depth_cap)
        _print_report(cfg, command, evidence)
        return 0 if evidence.status == measure.CERTIFIED else 2

    if command == "sample":
        rows = sample_rows(_parse_dyadic(args.a), _parse_dyadic(args.b),
                           args.count, args.depth,
                           approx=cfg.approx, classical=args.classical)
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["y", "lo", "hi"] + (["approx"] if cfg.approx else []))
        writer.writerows(rows)
        sys.stdout.write(buffer.getvalue())
        return 0

    raise AssertionError(f"unhandled command {command}")


def _print_report(cfg: RunConfig, command: str, report) -> None:
    if cfg.fmt == "json":
        print(_emit_json(command, report))
    else:
        for line in _text_lines(report):
            print(line)


def run(argv=None) -> int:
    """Parse and execute; returns the process exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if args.command is None:
        parser.print_usage(sys.stderr)
        return 1

    depth_cap = args.depth_cap
    if depth_cap is None:
        depth_cap = int(os.environ.get("TAKAGI_DEPTH_CAP", measure.DEFAULT_DEPTH_CAP))
    cfg = RunConfig(command=args.command, fmt=args.fmt, depth_cap=depth_cap,
                    approx=args.approx, args=args)
    try:
        if args.command == "verify-all":
            return _verify_all(cfg)
        return _dispatch(cfg)
    except (ValueError, BreakpointLimitError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
