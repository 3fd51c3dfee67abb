"""Recompute the published Nobel-sieve and correlation figures.

Each row pairs a published value with the value recomputed from the
built-in digitized counts and the formulas in :mod:`luckmeter.corrstats`.
Rows marked ``disputed`` are shown but never fail the table.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Literal

from .corrstats import (
    RegressionEstimate,
    binary_rank_ceiling,
    fisher_ci,
    midranks,
    r_from_rates,
    r_from_regression,
)
from .dataio import canonical_json, embedded_nobel
from .sieve import analyze, inferred_negative_ranks

TOLERANCE = 0.01

Check = Literal["abs", "exact", "negative"]


@dataclass(frozen=True)
class ReproRow:
    label: str
    published: Any
    computed: Any
    check: Check = "abs"
    tol: float = TOLERANCE
    disputed: bool = False
    note: str = ""

    @property
    def delta(self) -> float | None:
        if isinstance(self.published, (int, float)) and isinstance(self.computed, (int, float)):
            return abs(self.computed - self.published)
        return None

    @property
    def passed(self) -> bool:
        if self.check == "negative":
            return self.computed < 0
        if self.check == "exact":
            return self.computed == self.published
        return self.delta is not None and self.delta <= self.tol

    @property
    def status(self) -> str:
        if self.disputed:
            return "DISPUTED"
        return "pass" if self.passed else "FAIL"


def reproduction_rows() -> list[ReproRow]:
    nobel = embedded_nobel()
    nN, nO = nobel.n_pos, nobel.n_neg
    n = nN + nO

    def rate_r(R: int) -> float:
        c = nobel.confusion_at(R)
        return r_from_rates(c.tp / nN, c.fp / nO, nN, nO).r

    rep = analyze(nobel)
    lo95, hi95 = fisher_ci(-0.71, 13, 0.95)
    lo99, hi99 = fisher_ci(-0.71, 13, 0.99)
    log_range = math.log(150 / 1.65)
    wine = r_from_regression(RegressionEstimate(-0.04, 3.0, log_range)).r
    ceiling = binary_rank_ceiling(nN, n).r
    # descending order: laureates tie for the top 25 places
    tie_ranks = midranks([-1] * nN + [0] * nO)

    return [
        ReproRow("rate-form r@R=759", 0.16, rate_r(759)),
        ReproRow("FPR@R=759", 0.25, nobel.confusion_at(759).fpr),
        ReproRow("rate-form r, nO=28", 0.77, r_from_rates(1.0, 0.25, nN, 28).r),
        ReproRow("fp at TPR=1 nO=28", 7, round(0.25 * 28), check="exact"),
        ReproRow("precision@R=1", 0.0, nobel.confusion_at(1).precision),
        ReproRow("rate-form r@R=1 sign", "negative", rate_r(1), check="negative"),
        ReproRow("precision@R=11", 0.27, nobel.confusion_at(11).precision),
        ReproRow("rate-form r@R=11", 0.18, rate_r(11)),
        ReproRow("inferred negative ranks", [2, 3], inferred_negative_ranks(nobel), check="exact"),
        ReproRow("best R", 51, rep.best.R, check="exact"),
        ReproRow("best r", 0.27, rep.best.r),
        ReproRow("r^2@R=51", 0.07, rep.best.r ** 2),
        ReproRow("natural r@R=nN=25", 0.19, rep.natural.r),
        ReproRow("full recall R", 759, rep.full_recall.R, check="exact"),
        ReproRow("FisherCI95 upper", -0.27, hi95),
        ReproRow("FisherCI99 upper", -0.080, hi99),
        ReproRow("ln(150/1.65)", 4.5, log_range),
        ReproRow("wine r", -0.027, wine, tol=0.001),
        ReproRow("movie r^2 from r=0.151", 0.023, 0.151 ** 2),
        ReproRow("ceiling(25,2915)", 0.21, ceiling, disputed=True,
                 note="closed form agrees with brute-force Spearman on the extremal vectors"),
        ReproRow("mid-rank of 25 tied laureates", 12.5, float(tie_ranks[0]), disputed=True,
                 note="mean of ranks 1..25 is 13"),
        ReproRow("mid-rank of 2890 tied others", 1457.5, float(tie_ranks[nN]), disputed=True,
                 note="mean of ranks 26..2915 is 1470.5"),
    ]


def all_passed(rows: list[ReproRow]) -> bool:
    return all(r.passed for r in rows if not r.disputed)


def _cell(v: Any) -> str:
    if isinstance(v, float):
        return f"{v:.4f}"
    if isinstance(v, list):
        return ",".join(str(x) for x in v)
    return str(v)


def format_table(rows: list[ReproRow]) -> str:
    header = ("label", "published", "computed", "|delta|", "tol", "status")
    body = [
        (r.label, _cell(r.published), _cell(r.computed),
         "" if r.delta is None else f"{r.delta:.4f}",
         f"{r.tol:g}" if r.check == "abs" else r.check, r.status)
        for r in rows
    ]
    widths = [max(len(h), *(len(b[i]) for b in body)) for i, h in enumerate(header)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths))]
    lines.append("  ".join("-" * w for w in widths))
    lines += ["  ".join(c.ljust(w) for c, w in zip(b, widths)) for b in body]
    return "\n".join(lines) + "\n"


def format_json(rows: list[ReproRow]) -> bytes:
    return canonical_json({
        "all_passed": all_passed(rows),
        "rows": [
            {"label": r.label, "published": r.published, "computed": r.computed, "delta": r.delta,
             "check": r.check, "tol": r.tol, "status": r.status, "note": r.note}
            for r in rows
        ],
    })
