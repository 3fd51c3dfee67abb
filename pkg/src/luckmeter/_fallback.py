"""Pure-Python versions of the inner loops in ``_kernels.pyx``.

Used when the compiled extension is unavailable or when
``LUCKMETER_PURE_PYTHON`` is set. Results must match the extension.
"""
from __future__ import annotations

import math
from collections.abc import Sequence


def midranks(values: Sequence[float]) -> list[float]:
    x = [float(v) for v in values]
    n = len(x)
    order = sorted(range(n), key=x.__getitem__)
    ranks = [0.0] * n
    i = 0
    while i < n:
        j = i
        v = x[order[i]]
        while j + 1 < n and x[order[j + 1]] == v:
            j += 1
        avg = 0.5 * (i + j) + 1.0
        for k in range(i, j + 1):
            ranks[order[k]] = avg
        i = j + 1
    return ranks


def sweep(labels: Sequence[int]) -> tuple[list[int], list[float], float]:
    n = len(labels)
    tp = [0] * (n + 1)
    area = 0.0
    for i, lab in enumerate(labels):
        if lab:
            tp[i + 1] = tp[i] + 1
        else:
            tp[i + 1] = tp[i]
            area += tp[i]
    n_pos = tp[n]
    n_neg = n - n_pos

    phi = [math.nan] * (n + 1)
    for R in range(1, n):
        t = tp[R]
        f = R - t
        fn = n_pos - t
        tn = n_neg - f
        den = float(R) * float(n - R) * float(n_pos) * float(n_neg)
        if den > 0:
            phi[R] = float(t * tn - f * fn) / math.sqrt(den)

    auc = area / (float(n_pos) * float(n_neg)) if n_pos > 0 and n_neg > 0 else math.nan
    return tp, phi, auc


def pearson_sums(x_values: Sequence[float], y_values: Sequence[float]) -> tuple[float, float, float]:
    x = [float(v) for v in x_values]
    y = [float(v) for v in y_values]
    n = len(x)
    mx = 0.0
    my = 0.0
    for i in range(n):
        mx += x[i]
        my += y[i]
    mx /= n
    my /= n
    sxx = syy = sxy = 0.0
    for i in range(n):
        dx = x[i] - mx
        dy = y[i] - my
        sxx += dx * dx
        syy += dy * dy
        sxy += dx * dy
    return sxx, syy, sxy
