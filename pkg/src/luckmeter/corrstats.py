"""Correlation primitives for binary rank-threshold classifiers.

All moments are population (divide-by-n) moments. Correlations of constant
inputs raise :class:`~luckmeter.errors.ZeroVarianceError` rather than
returning 0 or NaN.
"""
from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass
from typing import Literal

import numpy as np

from . import _backend
from .errors import (
    DegenerateMarginError,
    DegenerateRError,
    InsufficientSampleError,
    InvalidCountsError,
    InvalidInputError,
    LengthMismatchError,
    NonPositiveRangeError,
    ZeroVarianceError,
)

Method = Literal["pearson", "spearman", "phi", "eq1", "regression-range"]
METHODS = ("pearson", "spearman", "phi", "eq1", "regression-range")


@dataclass(frozen=True)
class ConfidenceInterval:
    level: float
    lower: float
    upper: float


@dataclass(frozen=True)
class CorrelationEstimate:
    r: float
    method: Method
    n: int | None = None
    ci: ConfidenceInterval | None = None
    clamped: bool = False

    def __post_init__(self):
        if self.method not in METHODS:
            raise InvalidInputError(f"unknown method {self.method!r}")
        if not -1.0 <= self.r <= 1.0:
            raise InvalidInputError(f"correlation {self.r} outside [-1, 1]")
        if self.ci is not None:
            if not 0.0 < self.ci.level < 1.0:
                raise InvalidInputError(f"confidence level {self.ci.level} outside (0, 1)")
            if not self.ci.lower <= self.r <= self.ci.upper:
                raise InvalidInputError("interval does not contain r")

    def __float__(self) -> float:
        return self.r


@dataclass(frozen=True)
class ConfusionCounts:
    """Cells of a 2x2 confusion matrix for one sieve threshold.

    ``tp``/``fp`` are positives/negatives inside the sieve, ``fn``/``tn``
    the ones left out.
    """

    tp: int
    fp: int
    fn: int
    tn: int

    def __post_init__(self):
        for name in ("tp", "fp", "fn", "tn"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, np.integer)) or v < 0:
                raise InvalidCountsError(f"{name} must be a non-negative integer, got {v!r}")
            object.__setattr__(self, name, int(v))

    @property
    def n_pos(self) -> int:
        return self.tp + self.fn

    @property
    def n_neg(self) -> int:
        return self.fp + self.tn

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn

    @property
    def sieve_size(self) -> int:
        return self.tp + self.fp

    @property
    def tpr(self) -> float:
        if self.n_pos == 0:
            raise DegenerateMarginError("no positives: TPR undefined")
        return self.tp / self.n_pos

    @property
    def fpr(self) -> float:
        if self.n_neg == 0:
            raise DegenerateMarginError("no negatives: FPR undefined")
        return self.fp / self.n_neg

    @property
    def precision(self) -> float:
        if self.sieve_size == 0:
            raise DegenerateMarginError("empty sieve: precision undefined")
        return self.tp / self.sieve_size

    def margins(self) -> tuple[int, int, int, int]:
        return (self.tp + self.fp, self.fn + self.tn, self.tp + self.fn, self.fp + self.tn)


def _clip(r: float) -> float:
    return min(1.0, max(-1.0, r))


def _as_finite_array(values: Sequence[float], name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1:
        raise InvalidInputError(f"{name} must be one-dimensional")
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError(f"{name} contains non-finite values")
    return arr


def pearson(x: Sequence[float], y: Sequence[float]) -> CorrelationEstimate:
    """Pearson product-moment correlation with population moments."""
    xa = _as_finite_array(x, "x")
    ya = _as_finite_array(y, "y")
    if xa.shape != ya.shape:
        raise LengthMismatchError(f"length mismatch: {xa.size} vs {ya.size}")
    if xa.size < 2:
        raise InvalidInputError("need at least two observations")
    if np.all(xa == xa[0]) or np.all(ya == ya[0]):
        raise ZeroVarianceError("correlation undefined for a constant input")
    sxx, syy, sxy = _backend.pearson_sums(_unit_scale(xa), _unit_scale(ya))
    if sxx <= 0.0 or syy <= 0.0:
        raise ZeroVarianceError("correlation undefined for a constant input")
    return CorrelationEstimate(_clip(sxy / (math.sqrt(sxx) * math.sqrt(syy))), "pearson", int(xa.size))


def _unit_scale(arr: np.ndarray) -> np.ndarray:
    # exact power-of-two rescale so tiny or huge inputs neither underflow nor overflow when squared
    _, exponent = math.frexp(float(np.max(np.abs(arr))))
    return np.ldexp(arr, -exponent)


def midranks(x: Sequence[float]) -> np.ndarray:
    """Ranks 1..n where each tied group gets the mean of the ranks it spans.

    >>> midranks([3, 1, 3, 3]).tolist()
    [3.0, 1.0, 3.0, 3.0]
    """
    xa = _as_finite_array(x, "x")
    if xa.size < 1:
        raise InvalidInputError("need at least one value")
    return np.asarray(_backend.midranks(xa), dtype=np.float64)


def spearman(x: Sequence[float], y: Sequence[float]) -> CorrelationEstimate:
    """Spearman rank correlation: Pearson on mid-ranks."""
    xa = _as_finite_array(x, "x")
    ya = _as_finite_array(y, "y")
    if xa.shape != ya.shape:
        raise LengthMismatchError(f"length mismatch: {xa.size} vs {ya.size}")
    if xa.size < 2:
        raise InvalidInputError("need at least two observations")
    r = pearson(midranks(xa), midranks(ya)).r
    return CorrelationEstimate(r, "spearman", int(xa.size))


def phi_from_counts(c: ConfusionCounts) -> CorrelationEstimate:
    """Phi coefficient of a confusion matrix.

    Identical to the Pearson correlation between the in-sieve indicator and
    the positive-label indicator over all ``c.total`` entities.
    """
    if min(c.margins()) == 0:
        raise DegenerateMarginError(f"zero margin in {c}")
    num = c.tp * c.tn - c.fp * c.fn
    den = math.sqrt((c.tp + c.fp) * (c.tp + c.fn) * (c.tn + c.fp) * (c.tn + c.fn))
    return CorrelationEstimate(_clip(num / den), "phi", c.total)


def r_from_rates(tpr: float, fpr: float, n_pos: int, n_neg: int) -> CorrelationEstimate:
    """Correlation between sieve membership and label from ROC coordinates.

    ``tpr`` and ``fpr`` may be any reals in [0, 1]; they need not come from
    integer counts. For integer-consistent inputs the result equals
    :func:`phi_from_counts`.
    """
    if not (0.0 <= tpr <= 1.0 and 0.0 <= fpr <= 1.0):
        raise InvalidInputError(f"rates must lie in [0, 1], got tpr={tpr}, fpr={fpr}")
    if n_pos < 1 or n_neg < 1:
        raise InvalidInputError(f"class sizes must be >= 1, got {n_pos}, {n_neg}")
    inside = tpr * n_pos + fpr * n_neg
    outside = (1.0 - tpr) * n_pos + (1.0 - fpr) * n_neg
    if inside <= 0.0 or outside <= 0.0:
        raise DegenerateMarginError("sieve is empty or contains everyone")
    r = (tpr - fpr) * math.sqrt(n_pos * n_neg) / math.sqrt(inside * outside)
    return CorrelationEstimate(_clip(r), "eq1", n_pos + n_neg)


def indicator_vectors(c: ConfusionCounts) -> tuple[np.ndarray, np.ndarray]:
    """(in_sieve, is_positive) 0/1 vectors realising the confusion matrix."""
    in_sieve = np.array([1] * (c.tp + c.fp) + [0] * (c.fn + c.tn), dtype=np.float64)
    positive = np.array([1] * c.tp + [0] * c.fp + [1] * c.fn + [0] * c.tn, dtype=np.float64)
    return in_sieve, positive


# Acklam's rational approximation to the standard normal quantile.
_A = (-3.969683028665376e01, 2.209460984245205e02, -2.759285104469687e02,
      1.383577518672690e02, -3.066479806614716e01, 2.506628277459239e00)
_B = (-5.447609879822406e01, 1.615858368580409e02, -1.556989798598866e02,
      6.680131188771972e01, -1.328068155288572e01)
_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e00,
      -2.549732539343734e00, 4.374664141464968e00, 2.938163982698783e00)
_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e00,
      3.754408661907416e00)
_P_LOW = 0.02425


def norm_ppf(p: float) -> float:
    """Standard normal quantile.

    Rational approximation (relative error ~1e-9) followed by one Halley
    step against ``math.erfc``, which brings it to near machine precision.
    """
    if not 0.0 < p < 1.0:
        raise InvalidInputError(f"probability must lie in (0, 1), got {p}")
    if p < _P_LOW:
        q = math.sqrt(-2.0 * math.log(p))
        x = (((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5]) / \
            ((((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0)
    elif p <= 1.0 - _P_LOW:
        q = p - 0.5
        rr = q * q
        x = (((((_A[0] * rr + _A[1]) * rr + _A[2]) * rr + _A[3]) * rr + _A[4]) * rr + _A[5]) * q / \
            (((((_B[0] * rr + _B[1]) * rr + _B[2]) * rr + _B[3]) * rr + _B[4]) * rr + 1.0)
    else:
        q = math.sqrt(-2.0 * math.log1p(-p))
        x = -(((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5]) / \
            ((((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0)

    e = 0.5 * math.erfc(-x / math.sqrt(2.0)) - p
    u = e * math.sqrt(2.0 * math.pi) * math.exp(0.5 * x * x)
    return x - u / (1.0 + 0.5 * x * u)


def z_critical(level: float) -> float:
    """Two-sided critical value, e.g. 1.959964 for ``level=0.95``."""
    if not 0.0 < level < 1.0:
        raise InvalidInputError(f"level must lie in (0, 1), got {level}")
    return norm_ppf(0.5 + 0.5 * level)


def fisher_ci(r: float, n: int, level: float = 0.95) -> tuple[float, float]:
    """Confidence interval for a correlation via Fisher's r-to-z transform.

    Args:
        r: Observed correlation, strictly inside (-1, 1).
        n: Sample size, at least 4.
        level: Two-sided confidence level.

    Returns:
        ``(lower, upper)`` with ``lower < r < upper``.
    """
    if n < 4:
        raise InsufficientSampleError(f"need n >= 4 for a Fisher interval, got {n}")
    if abs(r) >= 1.0:
        raise DegenerateRError(f"|r| must be < 1, got {r}")
    half = z_critical(level) / math.sqrt(n - 3)
    z = math.atanh(r)
    return math.tanh(z - half), math.tanh(z + half)


def with_ci(est: CorrelationEstimate, level: float = 0.95) -> CorrelationEstimate:
    if est.n is None:
        raise InsufficientSampleError("estimate carries no sample size")
    lo, hi = fisher_ci(est.r, est.n, level)
    return CorrelationEstimate(est.r, est.method, est.n, ConfidenceInterval(level, lo, hi), est.clamped)


@dataclass(frozen=True)
class RegressionEstimate:
    """A regression slope together with the observed ranges of both variables.

    The conversion multiplies ``b1`` by ``range_num / range_den``; which
    variable goes on top is the caller's choice.
    """

    b1: float
    range_num: float
    range_den: float


def r_from_regression(est: RegressionEstimate) -> CorrelationEstimate:
    """Rough correlation from a slope, assuming variances scale as squared ranges."""
    if not (est.range_num > 0 and est.range_den > 0):
        raise NonPositiveRangeError(
            f"ranges must be positive, got {est.range_num}, {est.range_den}")
    r = est.b1 * est.range_num / est.range_den
    clipped = _clip(r)
    return CorrelationEstimate(clipped, "regression-range", None, clamped=clipped != r)


def binary_rank_ceiling(n_pos: int, n: int) -> CorrelationEstimate:
    """Largest possible Spearman between distinct ranks 1..n and a binary label.

    Attained when the ``n_pos`` positives hold ranks 1..n_pos. Equals
    ``sqrt(3 p (1 - p) n^2 / (n^2 - 1))`` with ``p = n_pos / n``.
    """
    if not (isinstance(n_pos, (int, np.integer)) and isinstance(n, (int, np.integer))):
        raise InvalidCountsError("counts must be integers")
    if not 1 <= n_pos < n:
        raise InvalidCountsError(f"need 1 <= n_pos < n, got n_pos={n_pos}, n={n}")
    p = n_pos / n
    r = math.sqrt(3.0 * p * (1.0 - p) * n * n / (n * n - 1.0))
    return CorrelationEstimate(_clip(r), "spearman", int(n))
