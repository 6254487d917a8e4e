"""Decision procedures comparing meromorphic functions along a divisor with
their logarithmic approximation, plus the orchestrating pipeline.

Two routes produce verdicts:

* direct: compute the b-function, substitute its least integer root into
  the annihilator of f^s, and compare the resulting ideal with the twisted
  logarithmic ideal.  Equality decides the comparison outright.
* indirect: resolve the twisted logarithmic module and scan consecutive
  matrices for the witness certifying a nonzero Ext group against
  functions.  This route only ever certifies a negative.

Both run under budgets; exhausting a budget yields UNKNOWN, never a wrong
verdict, and a certified negative from the cheap divergence shortcut
short-circuits everything else.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from ._engine import Budget, BudgetExceeded
from .annihilator import AnnFsIdeal, BFunction, ann_fs, ann_power, bfunction
from .groebner import ideal_compare
from .logarithmic import (DivergenceRecord, EulerRecord, FreenessRecord,
                          HolonomicRecord, LogDerivation, ProductRecord,
                          SpencerRecord, divergence_shortcut, euler_check,
                          holonomic_check, log_derivations, product_detection,
                          saito_free_check, spencer_check, spencer_resolution,
                          squarefree_warning, tilde_ideal)
from .polyring import CommPoly
from .resolution import (FreeResolution, SmcReport, free_resolution, smc_scan)
from .weyl import WeylContext, WeylOp

ISOMORPHIC = "ISOMORPHIC"
NOT_ISOMORPHIC = "NOT_ISOMORPHIC"
INCONCLUSIVE = "INCONCLUSIVE"
UNKNOWN = "UNKNOWN"


class InconsistentVerdicts(AssertionError):
    """The direct and indirect methods certified contradictory verdicts."""


class _StageClock:
    """Allocates per-call budgets inside a stage deadline."""

    def __init__(self, stage_seconds: Optional[float], gb_seconds: Optional[float],
                 gb_steps: Optional[int], stage: str):
        self.deadline = None if stage_seconds is None else \
            time.monotonic() + stage_seconds
        self.gb_seconds = gb_seconds
        self.gb_steps = gb_steps
        self.stage = stage

    def budget(self) -> Budget:
        remaining = None
        if self.deadline is not None:
            remaining = self.deadline - time.monotonic()
            if remaining <= 0:
                raise BudgetExceeded(self.stage)
        if self.gb_seconds is None:
            secs = remaining
        elif remaining is None:
            secs = self.gb_seconds
        else:
            secs = min(self.gb_seconds, remaining)
        return Budget(max_steps=self.gb_steps, max_seconds=secs, stage=self.stage)


@dataclass
class AnalyzeOptions:
    k: int = 1
    method: str = "auto"  # auto | direct | indirect | shortcuts-only
    max_res_length: Optional[int] = None
    budget_gb_seconds: Optional[float] = 60.0
    budget_stage_seconds: Optional[float] = 600.0
    gb_steps: Optional[int] = None
    prune: bool = True


@dataclass
class DirectStage:
    verdict: str = UNKNOWN
    relation: Optional[str] = None

    def to_json_dict(self):
        return {"verdict": self.verdict, "relation": self.relation}


@dataclass
class IndirectStage:
    verdict: str = UNKNOWN
    level: Optional[int] = None
    resolution_status: Optional[str] = None
    resolution_ranks: Optional[List[int]] = None
    used_spencer_resolution: bool = False

    def to_json_dict(self):
        return {"verdict": self.verdict, "level": self.level,
                "resolution_status": self.resolution_status,
                "resolution_ranks": self.resolution_ranks,
                "used_spencer_resolution": self.used_spencer_resolution}


@dataclass
class ComparisonReport:
    f_text: str
    variables: Tuple[str, ...]
    k: int
    freeness: Optional[FreenessRecord] = None
    euler: Optional[EulerRecord] = None
    product: Optional[ProductRecord] = None
    spencer: Optional[SpencerRecord] = None
    holonomic: Optional[HolonomicRecord] = None
    bfunction_status: str = UNKNOWN
    b: Optional[BFunction] = None
    direct: DirectStage = field(default_factory=DirectStage)
    indirect: IndirectStage = field(default_factory=IndirectStage)
    smc: Optional[SmcReport] = None
    divergence: Optional[DivergenceRecord] = None
    verdict: str = UNKNOWN
    timings_ms: Dict[str, int] = field(default_factory=dict)
    warnings: List[str] = field(default_factory=list)

    def to_json_dict(self) -> dict:
        def rec(x):
            return None if x is None else x.to_json_dict()

        return {
            "input": {"f": self.f_text, "variables": list(self.variables),
                      "k": self.k},
            "freeness": rec(self.freeness),
            "euler": rec(self.euler),
            "product": rec(self.product),
            "spencer": rec(self.spencer),
            "holonomic": rec(self.holonomic),
            "bfunction": ({"status": "ok", **self.b.to_json_dict()}
                          if self.b is not None else {"status": self.bfunction_status}),
            "direct": self.direct.to_json_dict(),
            "indirect": self.indirect.to_json_dict(),
            "smc": rec(self.smc),
            "divergence": rec(self.divergence),
            "verdict": self.verdict,
            "timings_ms": dict(self.timings_ms),
            "warnings": list(self.warnings),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2)

    def to_text(self) -> str:
        d = self.to_json_dict()
        lines = [f"f = {self.f_text}   variables: {', '.join(self.variables)}   k = {self.k}"]
        for key in ("freeness", "euler", "product", "spencer", "holonomic",
                    "bfunction", "direct", "indirect", "smc", "divergence"):
            val = d[key]
            if val is None:
                lines.append(f"{key:12s}: (not run)")
            else:
                body = ", ".join(f"{k2}={v2}" for k2, v2 in val.items() if v2 is not None)
                lines.append(f"{key:12s}: {body}")
        lines.append(f"verdict     : {self.verdict}")
        if self.warnings:
            lines.append("warnings    : " + "; ".join(self.warnings))
        lines.append("timings ms  : " + ", ".join(f"{k2}={v2}" for k2, v2 in
                                                  self.timings_ms.items()))
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# the two decision procedures
# ---------------------------------------------------------------------------


def direct_compare(f: CommPoly, alpha0: int, b: BFunction,
                   fs: Optional[AnnFsIdeal] = None,
                   gens: Optional[Sequence[LogDerivation]] = None,
                   budget: Optional[Budget] = None) -> DirectStage:
    """Compare the twisted logarithmic ideal at level alpha0 with the
    annihilator of 1/f^alpha0: equality means the modules coincide."""
    if b.min_integer_root is None or -b.min_integer_root != alpha0:
        raise ValueError("alpha0 must be the negated least integer root of b")
    try:
        tilde = tilde_ideal(f, alpha0, gens=gens, budget=budget)
        ann = ann_power(f, alpha0, b, fs=fs, budget=budget)
        relation = ideal_compare(tilde, ann, budget=budget)
    except BudgetExceeded:
        return DirectStage(UNKNOWN, None)
    if relation == "equal":
        return DirectStage(ISOMORPHIC, relation)
    return DirectStage(NOT_ISOMORPHIC, relation)


def indirect_compare(f: CommPoly, k: int = 1, max_length: Optional[int] = None,
                     gens: Optional[Sequence[LogDerivation]] = None,
                     freeness: Optional[FreenessRecord] = None,
                     spencer: Optional[SpencerRecord] = None,
                     budget: Optional[Budget] = None,
                     prune: bool = True) -> Tuple[IndirectStage, Optional[SmcReport]]:
    """Resolve the twisted logarithmic module and scan for the Ext witness.

    Prefers the twisted logarithmic Koszul resolution when the divisor has
    a certified Spencer structure; falls back to iterated syzygies.  The
    negative verdict requires the sound row check."""
    stage = IndirectStage()
    try:
        if gens is None:
            gens = log_derivations(f, budget=budget)
        res: Optional[FreeResolution] = None
        if spencer is not None and spencer.status == "spencer" and \
                freeness is not None and freeness.basis is not None:
            res_k, _data, status = spencer_resolution(freeness.basis, f, k, budget)
            if status == "ok":
                res = res_k
                stage.used_spencer_resolution = True
        if res is None:
            tgens = tilde_ideal(f, k, gens=gens, budget=budget)
            res = free_resolution(tgens, max_length=max_length, budget=budget,
                                  prune=prune)
    except BudgetExceeded:
        stage.verdict = UNKNOWN
        return stage, None
    stage.resolution_status = res.status
    stage.resolution_ranks = res.ranks
    report = smc_scan(res, accept_partial=True)
    if report.holds:
        stage.verdict = NOT_ISOMORPHIC
        stage.level = report.level
    elif res.certified:
        stage.verdict = INCONCLUSIVE
    else:
        stage.verdict = UNKNOWN
    return stage, report


# ---------------------------------------------------------------------------
# the pipeline
# ---------------------------------------------------------------------------


def analyze(f: CommPoly, options: Optional[AnalyzeOptions] = None,
            f_text: Optional[str] = None) -> ComparisonReport:
    """Run the full pipeline and assemble the report.

    Stage order: logarithmic generators, product detection, Euler check,
    freeness, Spencer and holonomicity, divergence shortcut, then the
    b-function route (direct comparison) with fallback to the resolution
    route (indirect).  A certified divergence shortcut ends the auto
    pipeline early.  All stage outcomes and timings are recorded; verdicts
    are only set by stages that completed within budget.
    """
    opt = options or AnalyzeOptions()
    if opt.method not in ("auto", "direct", "indirect", "shortcuts-only"):
        raise ValueError(f"unknown method {opt.method!r}")
    if opt.k < 1:
        raise ValueError("k must be a positive integer")
    report = ComparisonReport(f_text or str(f), f.vars, opt.k)
    warn = squarefree_warning(f)
    if warn:
        report.warnings.append(warn)

    def clock(stage: str) -> _StageClock:
        return _StageClock(opt.budget_stage_seconds, opt.budget_gb_seconds,
                           opt.gb_steps, stage)

    def timed(stage: str, fn):
        t0 = time.monotonic()
        try:
            return fn()
        finally:
            report.timings_ms[stage] = int((time.monotonic() - t0) * 1000)

    # logarithmic generators
    gens: Optional[List[LogDerivation]] = None
    try:
        c = clock("log_derivations")
        gens = timed("log_derivations", lambda: log_derivations(
            f, budget=c.budget(), prune=opt.prune))
    except BudgetExceeded:
        report.warnings.append("log_derivations exceeded its budget; analysis aborted")
        return report

    report.product = product_detection(gens)
    try:
        c = clock("euler")
        report.euler = timed("euler", lambda: euler_check(f, gens, budget=c.budget()))
    except BudgetExceeded:
        report.warnings.append("euler check exceeded its budget")

    report.freeness = timed("freeness", lambda: saito_free_check(gens, f))

    if report.freeness.status == "free":
        basis = report.freeness.basis
        try:
            c = clock("spencer")
            report.spencer = timed("spencer", lambda: spencer_check(
                basis, f, budget=c.budget()))
            report.holonomic = report.spencer.holonomic
        except BudgetExceeded:
            report.spencer = SpencerRecord("inconclusive")
        report.divergence = timed("divergence", lambda: divergence_shortcut(basis))

    shortcut_fired = (report.divergence is not None and opt.k == 1 and
                      report.spencer is not None and
                      report.spencer.status == "spencer" and
                      report.divergence.status == "not_isomorphic_certified")

    if opt.method == "shortcuts-only":
        report.verdict = NOT_ISOMORPHIC if shortcut_fired else INCONCLUSIVE
        return report

    run_direct = opt.method in ("auto", "direct")
    run_indirect = opt.method == "indirect"
    if opt.method == "auto" and shortcut_fired:
        run_direct = False  # certified negative; skip the expensive stages

    fs: Optional[AnnFsIdeal] = None
    if run_direct:
        try:
            c = clock("bfunction")
            def _bstage():
                nonlocal fs
                fs = ann_fs(f, budget=c.budget())
                return bfunction(f, budget=c.budget(), fs=fs)
            report.b = timed("bfunction", _bstage)
            report.bfunction_status = "ok"
        except BudgetExceeded:
            report.bfunction_status = UNKNOWN
            report.warnings.append("b-function stage exceeded its budget; "
                                   "falling back to the indirect method")
            if opt.method == "auto":
                run_indirect = True
        if report.b is not None:
            if report.b.min_integer_root is None:
                report.warnings.append("b-function has no integer root; "
                                       "direct comparison is not applicable")
                if opt.method == "auto":
                    run_indirect = True
            else:
                alpha0 = -report.b.min_integer_root
                c = clock("direct")
                report.direct = timed("direct", lambda: direct_compare(
                    f, alpha0, report.b, fs=fs, gens=gens, budget=c.budget()))
                if report.direct.verdict == UNKNOWN and opt.method == "auto":
                    run_indirect = True

    if run_indirect:
        c = clock("indirect")
        def _istage():
            return indirect_compare(
                f, opt.k, max_length=opt.max_res_length, gens=gens,
                freeness=report.freeness, spencer=report.spencer,
                budget=c.budget(), prune=opt.prune)
        report.indirect, report.smc = timed("indirect", _istage)

    if report.direct.verdict == ISOMORPHIC and \
            report.indirect.verdict == NOT_ISOMORPHIC:
        raise InconsistentVerdicts(
            "direct method certified ISOMORPHIC while the indirect method "
            f"certified NOT_ISOMORPHIC for f = {report.f_text}; this is a "
            "soundness failure, please report it with the input")

    if shortcut_fired or report.indirect.verdict == NOT_ISOMORPHIC or \
            report.direct.verdict == NOT_ISOMORPHIC:
        report.verdict = NOT_ISOMORPHIC
    elif report.direct.verdict == ISOMORPHIC:
        report.verdict = ISOMORPHIC
    elif report.indirect.verdict == INCONCLUSIVE:
        report.verdict = INCONCLUSIVE
    else:
        report.verdict = UNKNOWN
    return report
