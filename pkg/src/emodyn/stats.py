"""Paired t-tests, box-plot statistics, and fixed-width histograms.

The two-sided p-value comes from a self-contained Student's t CDF built on
the regularized incomplete beta function (continued-fraction evaluation),
so the module has no statistical dependencies; tests pin it against an
independent reference implementation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np


@dataclass
class PairedTestResult:
    n_pairs: int
    mean_difference: float
    t_statistic: float
    degrees_of_freedom: int
    p_value: float
    alpha: float
    significant: bool


@dataclass
class BoxStats:
    n: int
    mean: float
    q1: float
    median: float
    q3: float
    whisker_low: float
    whisker_high: float
    outliers: list[float]


@dataclass
class Histogram:
    bin_width: float
    counts: list[int]
    out_of_range: int

    @property
    def n_bins(self) -> int:
        return len(self.counts)

    def bin_edges(self, index: int) -> tuple[float, float]:
        return index * self.bin_width, (index + 1) * self.bin_width


def _betacf(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta function (modified Lentz)."""
    tiny = 1e-300
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < tiny:
        d = tiny
    d = 1.0 / d
    h = d
    for m in range(1, 300):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            break
    return h


def reg_inc_beta(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta I_x(a, b) for a, b > 0 and x in [0, 1]."""
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    ln_front = (
        math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
        + a * math.log(x) + b * math.log1p(-x)
    )
    front = math.exp(ln_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def student_t_two_sided_p(t: float, df: float) -> float:
    """P(|T| >= |t|) for Student's t with df degrees of freedom.

    Accurate to better than 1e-9 for df up to about 1e6; beyond that the
    log-beta prefactor cancels catastrophically and the error can reach
    the 1e-9 scale.
    """
    if df <= 0:
        raise ValueError("degrees of freedom must be positive")
    if t == 0.0:
        return 1.0
    x = df / (df + t * t)
    return reg_inc_beta(df / 2.0, 0.5, x)


def paired_t_test(a: Sequence[float], b: Sequence[float],
                  alpha: float = 0.001) -> PairedTestResult:
    """Two-sided paired t-test on the element-wise differences.

    Zero-variance differences with a nonzero mean have an undefined t and
    raise; all-identical pairs (zero mean too) give t=0, p=1.
    """
    if len(a) != len(b):
        raise ValueError(f"paired samples differ in length: {len(a)} vs {len(b)}")
    n = len(a)
    if n < 2:
        raise ValueError("need at least 2 pairs")
    diffs = [float(x) - float(y) for x, y in zip(a, b)]
    mean_diff = math.fsum(diffs) / n
    ss = math.fsum((d - mean_diff) ** 2 for d in diffs)
    if ss == 0.0:
        if mean_diff == 0.0:
            return PairedTestResult(n, 0.0, 0.0, n - 1, 1.0, alpha, False)
        raise ValueError("degenerate_variance: differences are constant and nonzero")
    se = math.sqrt(ss / (n - 1)) / math.sqrt(n)
    t = mean_diff / se
    p = student_t_two_sided_p(t, n - 1)
    return PairedTestResult(n, mean_diff, t, n - 1, p, alpha, p < alpha)


def _tukey_hinges(values: np.ndarray) -> tuple[float, float, float]:
    n = len(values)
    median = float(np.median(values))
    half = (n + 1) // 2  # halves include the median position when n is odd
    lower = values[:half]
    upper = values[n - half:]
    return float(np.median(lower)), median, float(np.median(upper))


def box_stats(values: Sequence[float], method: str = "linear") -> BoxStats:
    """Quartiles, 1.5-IQR whiskers on observed points, outliers, and mean.

    method 'linear' interpolates order statistics (the common default);
    'tukey' uses Tukey hinges.
    """
    if len(values) == 0:
        raise ValueError("box_stats needs at least one value")
    data = np.sort(np.asarray(values, dtype=np.float64))
    if method == "linear":
        q1, median, q3 = (float(q) for q in np.quantile(data, [0.25, 0.5, 0.75]))
    elif method == "tukey":
        q1, median, q3 = _tukey_hinges(data)
    else:
        raise ValueError(f"unknown quartile method: {method}")
    iqr = q3 - q1
    low_fence = q1 - 1.5 * iqr
    high_fence = q3 + 1.5 * iqr
    inside = data[(data >= low_fence) & (data <= high_fence)]
    outliers = data[(data < low_fence) | (data > high_fence)]
    return BoxStats(
        n=len(data),
        mean=math.fsum(data.tolist()) / len(data),
        q1=q1,
        median=median,
        q3=q3,
        whisker_low=float(inside[0]),
        whisker_high=float(inside[-1]),
        outliers=[float(v) for v in outliers],
    )


def histogram(values: Sequence[float], bin_width: float = 0.005) -> Histogram:
    """Fixed-width counts over [0, 1]; bins are [lo, hi), the last closed.

    bin_width must divide 1 evenly.  Values outside [0, 1] land in a single
    out-of-range bucket that is reported, not silently dropped.
    """
    if not (0.0 < bin_width <= 1.0):
        raise ValueError(f"bin width out of range: {bin_width}")
    n_bins = round(1.0 / bin_width)
    if n_bins < 1 or abs(n_bins * bin_width - 1.0) > 1e-9:
        raise ValueError(f"bin width {bin_width} does not divide 1 evenly")
    counts = [0] * n_bins
    out_of_range = 0
    for value in values:
        v = float(value)
        if v < 0.0 or v > 1.0:
            out_of_range += 1
            continue
        index = int(v * n_bins)
        if index == n_bins:  # v == 1.0
            index -= 1
        counts[index] += 1
    return Histogram(bin_width=bin_width, counts=counts, out_of_range=out_of_range)
