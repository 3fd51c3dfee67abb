"""Rank-threshold ("sieve") analysis of a binary labelled ranking.

A sieve of size ``R`` holds the ``R`` top-ranked entities. Sweeping ``R``
yields the ROC, precision and correlation curves. Thresholds index rank
positions, never score values.

Two inputs are supported: a full :class:`LabeledRanking`, and a
:class:`SparseSieve` holding confusion counts at a handful of thresholds
only (the situation when counts were read off published plots).
"""
from __future__ import annotations

import functools
import math
import warnings
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from . import _backend
from .corrstats import (
    ConfusionCounts,
    CorrelationEstimate,
    binary_rank_ceiling,
    midranks,
    pearson,
    phi_from_counts,
)
from .errors import (
    InvalidCountsError,
    InvalidInputError,
    NoNegativesError,
    NonFiniteScoreError,
    NoPositivesError,
    ThresholdOutOfRangeError,
)


CurveKind = Literal["roc", "precision", "correlation"]


class TieWarning(UserWarning):
    """A threshold falls inside a group of tied scores."""


@dataclass(frozen=True)
class Entry:
    id: str
    score: float
    label: int
    line: int | None = None


@dataclass(frozen=True)
class LabeledRanking:
    """Entities sorted by descending score, each with a 0/1 label."""

    entries: tuple[Entry, ...]
    n_pos: int
    n_neg: int
    tie_count: int = 0

    def __post_init__(self):
        if self.n_pos < 1:
            raise NoPositivesError("ranking has no positive labels")
        if self.n_neg < 1:
            raise NoNegativesError("ranking has no negative labels")
        if self.n_pos + self.n_neg != len(self.entries):
            raise InvalidCountsError("n_pos + n_neg must equal the number of entries")

    def __len__(self) -> int:
        return len(self.entries)

    @functools.cached_property
    def labels(self) -> np.ndarray:
        out = np.fromiter((e.label for e in self.entries), dtype=np.uint8, count=len(self.entries))
        out.setflags(write=False)
        return out

    @functools.cached_property
    def scores(self) -> np.ndarray:
        out = np.fromiter((e.score for e in self.entries), dtype=np.float64, count=len(self.entries))
        out.setflags(write=False)
        return out

    @functools.cached_property
    def _sweep(self) -> tuple[np.ndarray, np.ndarray, float]:
        tp, phi, auc = _backend.sweep(self.labels)
        return np.asarray(tp, dtype=np.int64), np.asarray(phi, dtype=np.float64), float(auc)

    def inside_tie(self, R: int) -> bool:
        """True when the cut between rank R and R+1 splits equal scores."""
        return 0 < R < len(self) and self.entries[R - 1].score == self.entries[R].score


def build_ranking(rows: Iterable[Sequence]) -> LabeledRanking:
    """Sort ``(id, score, label[, line])`` rows by descending score.

    The sort is stable, so equal scores keep their input order. The number
    of entries sharing their score with at least one other entry is kept
    as ``tie_count``.
    """
    entries = []
    for row in rows:
        ident, score, label = row[0], row[1], row[2]
        line = row[3] if len(row) > 3 else None
        score = float(score)
        if not math.isfinite(score):
            raise NonFiniteScoreError(f"non-finite score for {ident!r}")
        if label not in (0, 1):
            raise InvalidInputError(f"label for {ident!r} must be 0 or 1, got {label!r}")
        entries.append(Entry(str(ident), score, int(label), line))

    entries.sort(key=lambda e: -e.score)
    n_pos = sum(e.label for e in entries)

    tie_count = 0
    i = 0
    while i < len(entries):
        j = i
        while j + 1 < len(entries) and entries[j + 1].score == entries[i].score:
            j += 1
        if j > i:
            tie_count += j - i + 1
        i = j + 1

    return LabeledRanking(tuple(entries), n_pos, len(entries) - n_pos, tie_count)


def confusion_at(rk: LabeledRanking, R: int) -> ConfusionCounts:
    if not 0 <= R <= len(rk):
        raise ThresholdOutOfRangeError(f"R={R} outside 0..{len(rk)}")
    if rk.inside_tie(R):
        warnings.warn(f"threshold R={R} splits a group of tied scores", TieWarning, stacklevel=2)
    tp = int(rk._sweep[0][R])
    fp = R - tp
    return ConfusionCounts(tp, fp, rk.n_pos - tp, rk.n_neg - fp)


@dataclass(frozen=True)
class CurvePoint:
    R: int
    x: float
    y: float


@dataclass(frozen=True)
class CurveSeries:
    """Points of one curve. ROC points are (fpr, tpr); others are (R, metric)."""

    kind: CurveKind
    points: tuple[CurvePoint, ...]
    auc: float | None = None
    notes: tuple[str, ...] = ()

    def __post_init__(self):
        Rs = [p.R for p in self.points]
        if any(b <= a for a, b in zip(Rs, Rs[1:])):
            raise InvalidInputError("curve thresholds must be strictly increasing")

    def __len__(self) -> int:
        return len(self.points)

    @property
    def thresholds(self) -> list[int]:
        return [p.R for p in self.points]

    def at(self, R: int) -> CurvePoint:
        for p in self.points:
            if p.R == R:
                return p
        raise KeyError(R)


def trapezoid_auc(points: Sequence[CurvePoint]) -> float:
    area = 0.0
    for a, b in zip(points, points[1:]):
        area += (b.x - a.x) * (a.y + b.y) / 2.0
    return area


def roc_curve(rk: LabeledRanking) -> CurveSeries:
    tp = rk._sweep[0]
    n = len(rk)
    pts = tuple(
        CurvePoint(R, (R - int(tp[R])) / rk.n_neg, int(tp[R]) / rk.n_pos) for R in range(n + 1)
    )
    return CurveSeries("roc", pts, auc=trapezoid_auc(pts))


def precision_curve(rk: LabeledRanking) -> CurveSeries:
    tp = rk._sweep[0]
    pts = tuple(CurvePoint(R, float(R), int(tp[R]) / R) for R in range(1, len(rk) + 1))
    return CurveSeries("precision", pts)


def correlation_curve(rk: LabeledRanking) -> CurveSeries:
    phi = rk._sweep[1]
    pts = tuple(CurvePoint(R, float(R), float(phi[R])) for R in range(1, len(rk)))
    return CurveSeries("correlation", pts, notes=("R=0 and R=n omitted: constant sieve indicator",))


@dataclass(frozen=True)
class SievePoint:
    R: int
    tp: int

    @property
    def fp(self) -> int:
        return self.R - self.tp


@dataclass(frozen=True)
class SparseSieve:
    """Confusion counts known only at selected thresholds."""

    n_pos: int
    n_neg: int
    points: tuple[SievePoint, ...]
    source: str = ""

    def __post_init__(self):
        if self.n_pos < 1:
            raise NoPositivesError("no positives")
        if self.n_neg < 1:
            raise NoNegativesError("no negatives")
        prev = -1
        for p in self.points:
            if p.R <= prev:
                raise InvalidInputError("points must be strictly increasing in R")
            if not (0 <= p.tp <= min(p.R, self.n_pos) and 0 <= p.fp <= self.n_neg):
                raise InvalidCountsError(f"inconsistent counts at R={p.R}")
            prev = p.R

    def __len__(self) -> int:
        return self.n_pos + self.n_neg

    def confusion_at(self, R: int) -> ConfusionCounts:
        for p in self.points:
            if p.R == R:
                return ConfusionCounts(p.tp, p.fp, self.n_pos - p.tp, self.n_neg - p.fp)
        raise ThresholdOutOfRangeError(f"no data at R={R}")


@dataclass(frozen=True)
class ThresholdValue:
    R: int
    r: float
    counts: ConfusionCounts


@dataclass(frozen=True)
class SieveReport:
    n_pos: int
    n_neg: int
    best: ThresholdValue
    natural: ThresholdValue | None
    full_recall: ThresholdValue | None
    ceiling: CorrelationEstimate
    roc: CurveSeries
    precision: CurveSeries
    correlation: CurveSeries
    sparse: bool = False
    annotations: tuple[str, ...] = field(default=())

    @property
    def auc(self) -> float:
        return float(self.roc.auc)

    @property
    def curves(self) -> tuple[CurveSeries, CurveSeries, CurveSeries]:
        return self.roc, self.precision, self.correlation


def _sparse_curves(sv: SparseSieve) -> tuple[CurveSeries, CurveSeries, CurveSeries]:
    n = len(sv)
    roc_pts = {0: CurvePoint(0, 0.0, 0.0), n: CurvePoint(n, 1.0, 1.0)}
    prec, corr = [], []
    for p in sv.points:
        roc_pts[p.R] = CurvePoint(p.R, p.fp / sv.n_neg, p.tp / sv.n_pos)
        if p.R > 0:
            prec.append(CurvePoint(p.R, float(p.R), p.tp / p.R))
        if 0 < p.R < n:
            c = sv.confusion_at(p.R)
            corr.append(CurvePoint(p.R, float(p.R), phi_from_counts(c).r))
    roc_list = tuple(roc_pts[R] for R in sorted(roc_pts))
    return (
        CurveSeries("roc", roc_list, auc=trapezoid_auc(roc_list),
                    notes=("sparse: straight segments between known thresholds",)),
        CurveSeries("precision", tuple(prec)),
        CurveSeries("correlation", tuple(corr)),
    )


def inferred_negative_ranks(sv: SparseSieve) -> list[int]:
    """Ranks that must be negatives if the best-precision point is the global maximum.

    With precision peaking at ``R*`` and a known point ``(R0, tp0)`` just
    before it, a positive at rank ``R0 + 1`` would give precision
    ``(tp0 + 1) / (R0 + 1)``; if that beats the peak, the rank is negative,
    and the argument repeats for the following rank.
    """
    pts = [p for p in sv.points if p.R > 0]
    if len(pts) < 2:
        return []
    best = max(pts, key=lambda p: (p.tp / p.R, -p.R))
    peak = best.tp / best.R
    earlier = [p for p in pts if p.R < best.R]
    if not earlier:
        return []
    start = earlier[-1]
    ranks = []
    j = start.R + 1
    while j < best.R and (start.tp + 1) / j > peak:
        ranks.append(j)
        j += 1
    return ranks


def _analyze_sparse(sv: SparseSieve) -> SieveReport:
    roc, prec, corr = _sparse_curves(sv)
    if not corr.points:
        raise InvalidCountsError("no non-degenerate thresholds in sparse data")
    best_pt = max(corr.points, key=lambda p: (p.y, -p.R))
    best = ThresholdValue(best_pt.R, best_pt.y, sv.confusion_at(best_pt.R))

    natural = None
    if sv.n_pos in corr.thresholds:
        natural = ThresholdValue(sv.n_pos, corr.at(sv.n_pos).y, sv.confusion_at(sv.n_pos))

    full_recall = None
    for p in sv.points:
        if p.tp == sv.n_pos and 0 < p.R < len(sv):
            full_recall = ThresholdValue(p.R, corr.at(p.R).y, sv.confusion_at(p.R))
            break

    notes = []
    neg = inferred_negative_ranks(sv)
    if neg:
        best_prec = max((p for p in prec.points), key=lambda p: (p.y, -p.R))
        notes.append(
            f"precision peak at R={best_prec.R} implies ranks {neg[0]}-{neg[-1]} are negatives "
            f"(assumes the peak is global; unverifiable without the full ranking)"
        )
    negative = [p.R for p in corr.points if p.y < 0]
    if negative:
        notes.append(f"negative correlation at R={negative}")

    return SieveReport(
        n_pos=sv.n_pos, n_neg=sv.n_neg, best=best, natural=natural, full_recall=full_recall,
        ceiling=binary_rank_ceiling(sv.n_pos, len(sv)),
        roc=roc, precision=prec, correlation=corr, sparse=True, annotations=tuple(notes),
    )


def analyze(source: LabeledRanking | SparseSieve) -> SieveReport:
    """Summarise a sieve: best threshold, ``R = n_pos``, full recall, ceiling.

    ``best`` is the maximum of the correlation curve, smallest ``R`` on ties.
    """
    if isinstance(source, SparseSieve):
        return _analyze_sparse(source)

    rk = source
    tp, phi, _ = rk._sweep
    n = len(rk)
    inner = phi[1:n]
    best_R = int(np.nanargmax(inner)) + 1  # first maximum, i.e. smallest R

    def value(R: int) -> ThresholdValue:
        t = int(tp[R])
        return ThresholdValue(R, float(phi[R]), ConfusionCounts(t, R - t, rk.n_pos - t, rk.n_neg - R + t))

    full_R = int(np.searchsorted(tp, rk.n_pos, side="left"))
    full_recall = value(full_R) if full_R < n else None

    notes = []
    for R in sorted({best_R, rk.n_pos, full_R}):
        if rk.inside_tie(R):
            notes.append(f"threshold R={R} splits tied scores")

    return SieveReport(
        n_pos=rk.n_pos, n_neg=rk.n_neg,
        best=value(best_R), natural=value(rk.n_pos), full_recall=full_recall,
        ceiling=binary_rank_ceiling(rk.n_pos, n),
        roc=roc_curve(rk), precision=precision_curve(rk), correlation=correlation_curve(rk),
        annotations=tuple(notes),
    )


def binary_spearman(rk: LabeledRanking) -> CorrelationEstimate:
    """Spearman between rank position and label, positive when positives rank high.

    Rank positions are mid-ranked over tied scores.
    """
    positions = midranks(-rk.scores)
    r = -pearson(positions, midranks(rk.labels)).r
    return CorrelationEstimate(r + 0.0, "spearman", len(rk))
