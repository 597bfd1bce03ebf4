"""Threshold-based reference estimators: Ferro-Segers intervals and Suveges ML.

Both work on the interexceedance times of the observations strictly above a
threshold u.  The benchmark rule sets u to the empirical 1 - 1/b quantile so
the expected number of exceedances matches the number of disjoint blocks.
"""

import math

import numpy as np

from .exceptions import DegenerateSampleError, DomainError, InsufficientDataError
from .sim import TimeSeries

__all__ = [
    "threshold_quantile",
    "exceedance_times",
    "intervals_estimator",
    "suveges_estimator",
    "COMPETITORS",
]


def _as_array(x):
    v = x.values if isinstance(x, TimeSeries) else np.asarray(x, dtype=float)
    if v.ndim != 1 or v.size < 1:
        raise DomainError("expected a non-empty 1-d series")
    return v


def threshold_quantile(x, b):
    """Empirical (1 - 1/b)-quantile: the order statistic at ceil(n (1 - 1/b)), 1-based."""
    v = _as_array(x)
    n = v.size
    if isinstance(b, bool) or int(b) != b or b < 1:
        raise DomainError("b must be a positive integer")
    if b > n:
        raise DomainError("b must not exceed the series length")
    b = int(b)
    k = -((-n * (b - 1)) // b)  # ceil(n (b - 1) / b) without floating point
    return float(np.partition(v, max(k, 1) - 1)[max(k, 1) - 1])


def exceedance_times(x, u):
    """1-based times s with X_s > u."""
    return np.flatnonzero(_as_array(x) > u) + 1


def _gaps(x, u):
    times = exceedance_times(x, u)
    if times.size < 2:
        raise InsufficientDataError(
            f"need at least 2 exceedances of the threshold, found {times.size}")
    return times.size, np.diff(times)


def intervals_estimator(x, u):
    """Ferro and Segers' intervals estimator, capped at 1."""
    n_exc, t = _gaps(x, u)
    t = t.astype(float)
    if t.max() <= 2:
        num = 2.0 * t.sum() ** 2
        den = (n_exc - 1) * np.sum(t * t)
    else:
        num = 2.0 * np.sum(t - 1.0) ** 2
        den = (n_exc - 1) * np.sum((t - 1.0) * (t - 2.0))
    return min(1.0, float(num / den))


def suveges_estimator(x, u):
    """Suveges' maximum-likelihood estimator from interexceedance times.

    Closed-form root of the score equation of the mixture likelihood in which
    a gap is zero (within-cluster) with probability 1 - theta and otherwise
    exponential with rate theta after normalising by the exceedance rate.
    """
    v = _as_array(x)
    n_exc, t = _gaps(v, u)
    q = n_exc / v.size
    s = t - 1
    sigma = q * float(s.sum())
    n_clusters = int(np.count_nonzero(s))
    if sigma == 0.0:
        raise DegenerateSampleError("all interexceedance gaps are one; the ML estimate is undefined")
    big = sigma + (n_exc - 1) + n_clusters
    theta = (big - math.sqrt(big * big - 8.0 * n_clusters * sigma)) / (2.0 * sigma)
    return min(1.0, theta)


COMPETITORS = {
    "intervals": intervals_estimator,
    "suveges": suveges_estimator,
}
