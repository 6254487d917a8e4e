"""Command line front end: analyze a single divisor or run a corpus.

    logdmod analyze -f "x*(x^2-y^3)*(x^2-z*y^3)" --vars x,y,z --format json
    logdmod corpus corpus/examples.corpus --workers 2

Exit codes: 0 for a certified verdict (ISOMORPHIC or NOT_ISOMORPHIC),
2 for INCONCLUSIVE or UNKNOWN, 1 for input errors.  The corpus runner
exits 0 only when every entry matches its expectations.
"""

from __future__ import annotations

import argparse
import configparser
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Dict, List, Optional, Tuple

from .compare import (INCONCLUSIVE, ISOMORPHIC, NOT_ISOMORPHIC, UNKNOWN,
                      AnalyzeOptions, analyze)
from .polyring import ParseError, parse_poly


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="logdmod",
        description="compare the module of meromorphic functions along a "
                    "divisor with its logarithmic approximation")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="analyze one divisor")
    a.add_argument("-f", "--poly", required=True, help="defining polynomial")
    a.add_argument("--vars", required=True,
                   help="comma-separated ordered variable list, e.g. x,y,z")
    a.add_argument("--k", type=int, default=1,
                   help="twist level for the logarithmic ideal (default 1)")
    a.add_argument("--method", default="auto",
                   choices=["auto", "direct", "indirect", "shortcuts-only"])
    a.add_argument("--max-res-length", type=int, default=None,
                   help="resolution length cap (default: #variables + 2)")
    a.add_argument("--budget-gb-seconds", type=float, default=60.0,
                   help="wall clock budget per Groebner invocation")
    a.add_argument("--budget-stage-seconds", type=float, default=600.0,
                   help="wall clock budget per pipeline stage")
    a.add_argument("--format", default="text", choices=["text", "json"])
    a.add_argument("--out", default=None, help="write the report to this path")

    c = sub.add_parser("corpus", help="run a corpus of named inputs")
    c.add_argument("path", help="corpus file")
    c.add_argument("--workers", type=int, default=1,
                   help="number of concurrent worker processes")
    c.add_argument("--format", default="text", choices=["text", "json"])
    c.add_argument("--out", default=None)
    return p


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def _verdict_exit(verdict: str) -> int:
    return 0 if verdict in (ISOMORPHIC, NOT_ISOMORPHIC) else 2


def run_analysis_command(args) -> int:
    vars = tuple(v.strip() for v in args.vars.split(",") if v.strip())
    try:
        f = parse_poly(args.poly, vars)
    except (ParseError, ValueError) as e:
        sys.stderr.write(f"input error: {e}\n")
        return 1
    if args.k < 1:
        sys.stderr.write("input error: --k must be a positive integer\n")
        return 1
    opt = AnalyzeOptions(k=args.k, method=args.method,
                         max_res_length=args.max_res_length,
                         budget_gb_seconds=args.budget_gb_seconds,
                         budget_stage_seconds=args.budget_stage_seconds)
    report = analyze(f, opt, f_text=args.poly)
    if args.format == "json":
        _emit(report.to_json(), args.out)
    else:
        _emit(report.to_text(), args.out)
    return _verdict_exit(report.verdict)


# ---------------------------------------------------------------------------
# corpus runner
# ---------------------------------------------------------------------------


def _parse_corpus(path: str) -> List[Tuple[str, Dict[str, str]]]:
    cp = configparser.ConfigParser()
    cp.optionxform = str  # keep case
    read = cp.read(path)
    if not read:
        raise FileNotFoundError(path)
    entries = []
    for name in cp.sections():
        entries.append((name, dict(cp[name])))
    return entries


def _lookup(d: dict, dotted: str):
    cur = d
    for part in dotted.split("."):
        if not isinstance(cur, dict) or part not in cur:
            return None
        cur = cur[part]
    return cur


def run_corpus_entry(item: Tuple[str, Dict[str, str]]) -> Dict:
    """Analyze one corpus entry and diff against its expectations."""
    name, fields = item
    f_text = fields["f"]
    vars = tuple(v.strip() for v in fields["vars"].split(","))
    opt = AnalyzeOptions(
        k=int(fields.get("k", "1")),
        method=fields.get("method", "auto"),
        max_res_length=int(fields["max_res_length"]) if "max_res_length" in fields else None,
        budget_gb_seconds=float(fields["budget_gb_seconds"]) if "budget_gb_seconds" in fields else 60.0,
        budget_stage_seconds=float(fields["budget_stage_seconds"]) if "budget_stage_seconds" in fields else 600.0,
    )
    f = parse_poly(f_text, vars)
    report = analyze(f, opt, f_text=f_text)
    rd = report.to_json_dict()
    mismatches = []
    for key, expected in fields.items():
        if not key.startswith("expect."):
            continue
        got = _lookup(rd, key[len("expect."):])
        if got is None:
            got_str = "None"
        else:
            got_str = str(got)
        if got_str != expected:
            mismatches.append({"field": key[len("expect."):],
                               "expected": expected, "got": got_str})
    return {"name": name, "verdict": report.verdict, "mismatches": mismatches,
            "warnings": report.warnings}


def run_corpus(path: str, workers: int = 1) -> Tuple[List[Dict], int]:
    """Run every corpus entry; returns (results, exit_code)."""
    entries = _parse_corpus(path)
    if not entries:
        return [], 0
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(run_corpus_entry, entries))
    else:
        results = [run_corpus_entry(e) for e in entries]
    bad = sum(1 for r in results if r["mismatches"])
    return results, (1 if bad else 0)


def run_corpus_command(args) -> int:
    try:
        results, code = run_corpus(args.path, args.workers)
    except FileNotFoundError as e:
        sys.stderr.write(f"input error: missing corpus file {e}\n")
        return 1
    if args.format == "json":
        _emit(json.dumps({"cases": results, "total": len(results),
                          "mismatched": sum(1 for r in results if r["mismatches"])},
                         indent=2), args.out)
    else:
        lines = []
        for r in results:
            status = "ok" if not r["mismatches"] else "MISMATCH"
            lines.append(f"{r['name']:20s} {r['verdict']:16s} {status}")
            for m in r["mismatches"]:
                lines.append(f"    {m['field']}: expected {m['expected']}, got {m['got']}")
        lines.append(f"{len(results)} cases, "
                     f"{sum(1 for r in results if r['mismatches'])} mismatched")
        _emit("\n".join(lines), args.out)
    return code


def main(argv: Optional[List[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 1 if e.code not in (0, None) else 0
    if args.command == "analyze":
        return run_analysis_command(args)
    return run_corpus_command(args)


if __name__ == "__main__":
    sys.exit(main())
