"""Empirical statistics and goodness-of-fit tests for spacing samples.

Pure functions throughout.  The default Kolmogorov-Smirnov acceptance rule
is D * sqrt(n) < 1.95, the asymptotic 0.1% point of the Kolmogorov
distribution, chosen so fixed-seed suites stay deterministic without being
lenient.  Histograms default to 64 equal-width bins spanning six units above
the support edge, with sparse bins merged until every expected count is at
least 5.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .analytic import SpacingLaw

__all__ = [
    "KS_DEFAULT_THRESHOLD",
    "Histogram",
    "histogram",
    "default_edges",
    "ks_statistic",
    "chi_square",
    "ChiSquareResult",
    "moments",
    "MomentsResult",
]

# D*sqrt(n) acceptance point: P(K > 1.95) ~ 1e-3 asymptotically.
KS_DEFAULT_THRESHOLD = 1.95

MIN_EXPECTED_PER_BIN = 5.0


@dataclass(frozen=True)
class Histogram:
    """Binned counts with out-of-range values tracked separately.

    Bin k covers [edges[k], edges[k+1]) except the last, which also includes
    its right edge; ``below``/``above`` count samples outside [edges[0],
    edges[-1]] and counts.sum() + below + above == total exactly.
    """

    edges: np.ndarray
    counts: np.ndarray
    below: int
    above: int
    total: int


def histogram(samples, edges) -> Histogram:
    """Bin samples into the given strictly increasing edges."""
    edges = np.asarray(edges, dtype=float)
    if edges.ndim != 1 or edges.size < 2:
        raise ValueError("edges must be a 1-d array with at least two entries")
    if not np.all(np.diff(edges) > 0.0):
        raise ValueError("edges must be strictly increasing")
    samples = np.asarray(samples, dtype=float)
    counts, _ = np.histogram(samples, bins=edges)
    below = int(np.count_nonzero(samples < edges[0]))
    above = int(np.count_nonzero(samples > edges[-1]))
    return Histogram(
        edges=edges,
        counts=counts.astype(np.int64),
        below=below,
        above=above,
        total=int(samples.size),
    )


def default_edges(law: SpacingLaw, bins: int = 64, span: float = 6.0) -> np.ndarray:
    """Default histogram grid: equal-width bins on [s_min, s_min + span]."""
    return law.s_min + np.linspace(0.0, span, bins + 1)


def ks_statistic(sorted_samples, cdf: Callable[[np.ndarray], np.ndarray]) -> float:
    """Kolmogorov-Smirnov sup-distance between samples and a model CDF.

    D = max_i max(i/n - F(x_i), F(x_i) - (i-1)/n) over ascending samples.
    """
    x = np.asarray(sorted_samples, dtype=float)
    if x.ndim != 1 or x.size < 1:
        raise ValueError("need a 1-d array with at least one sample")
    if np.any(np.diff(x) < 0.0):
        raise ValueError("samples must be sorted ascending")
    n = x.size
    f = np.asarray(cdf(x), dtype=float)
    steps = np.arange(1, n + 1) / n
    return float(max(np.max(steps - f), np.max(f - (steps - 1.0 / n))))


class ChiSquareResult(NamedTuple):
    statistic: float
    dof: int


def chi_square(h: Histogram, law: SpacingLaw) -> ChiSquareResult:
    """Pearson statistic of a histogram against a law's bin probabilities.

    Probabilities come from CDF differences over the bins, extended by two
    virtual bins covering (-inf, edges[0]] and [edges[-1], inf) so that the
    model mass and the sample count both total exactly.  Adjacent bins are
    merged inward from the right tail, then from the left, until every
    expected count reaches 5; dof is the number of merged bins minus one.
    """
    if h.total <= 0 or (int(h.counts.sum()) + h.below + h.above) == 0:
        raise ValueError("histogram holds no samples")
    edge_cdf = law.cdf(np.maximum(h.edges, 0.0))
    probs = np.concatenate(([edge_cdf[0]], np.diff(edge_cdf), [1.0 - edge_cdf[-1]]))
    counts = np.concatenate(([h.below], h.counts, [h.above])).astype(float)

    expected = h.total * probs
    # merge from the right tail inward, then from the front, so every kept
    # bin has enough expected mass for the Pearson approximation
    merged_c: list[float] = list(counts)
    merged_e: list[float] = list(expected)
    i = len(merged_e) - 1
    while i > 0 and merged_e[i] < MIN_EXPECTED_PER_BIN:
        merged_e[i - 1] += merged_e[i]
        merged_c[i - 1] += merged_c[i]
        del merged_e[i], merged_c[i]
        i -= 1
    while len(merged_e) > 1 and merged_e[0] < MIN_EXPECTED_PER_BIN:
        merged_e[1] += merged_e[0]
        merged_c[1] += merged_c[0]
        del merged_e[0], merged_c[0]

    if len(merged_e) < 2:
        raise ValueError("fewer than two usable bins after merging (dof would be 0)")
    exp_arr = np.asarray(merged_e)
    cnt_arr = np.asarray(merged_c)
    stat = float(np.sum((cnt_arr - exp_arr) ** 2 / exp_arr))
    return ChiSquareResult(statistic=stat, dof=len(merged_e) - 1)


class MomentsResult(NamedTuple):
    mean: float
    variance: float


def moments(samples) -> MomentsResult:
    """Sample mean and unbiased variance via compensated summation.

    Uses exactly rounded ``math.fsum`` accumulation, so the result is
    independent of the input ordering.
    """
    x = np.asarray(samples, dtype=float)
    if x.ndim != 1 or x.size < 2:
        raise ValueError("need at least two samples")
    n = x.size
    mean = math.fsum(x) / n
    var = math.fsum((x - mean) ** 2) / (n - 1)
    return MomentsResult(mean=mean, variance=var)
