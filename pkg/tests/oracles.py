"""Independent reference implementations shared by the tests.

They are written from the defining formulas and share no code with the
package beyond the simulators used to make data.
"""

import math

import numpy as np
from scipy import optimize

from eilab.sim import ModelSpec, simulate

# three fixed datasets used to compare the threshold estimators
SHARED_DATASETS = {
    "armax_0.5": (ModelSpec("armax", 0.5), 2000, 101, 20),
    "arch_0.7": (ModelSpec("arch", 0.7), 3000, 102, 25),
    "markov_1.06": (ModelSpec("markov_clayton", 1.06), 2500, 103, 16),
}


def shared_dataset(name):
    model, n, seed, b = SHARED_DATASETS[name]
    return simulate(model, n, seed).values, b


def order_statistic_threshold(x, b):
    xs = sorted(x)
    n = len(xs)
    k = math.ceil(n * (b - 1) / b)
    return xs[max(k, 1) - 1]


def interexceedance_times(x, u):
    times = [s for s, v in enumerate(x, start=1) if v > u]
    return len(times), [t1 - t0 for t0, t1 in zip(times, times[1:])]


def intervals_loop(x, u):
    n_exc, gaps = interexceedance_times(x, u)
    if max(gaps) <= 2:
        s1 = s2 = 0.0
        for t in gaps:
            s1 += t
            s2 += t * t
        est = 2.0 * s1 * s1 / ((n_exc - 1) * s2)
    else:
        s1 = s2 = 0.0
        for t in gaps:
            s1 += t - 1
            s2 += (t - 1) * (t - 2)
        est = 2.0 * s1 * s1 / ((n_exc - 1) * s2)
    return min(1.0, est)


def suveges_score_root(x, u):
    """Root of the score of the interexceedance mixture likelihood on (0, 1)."""
    n_exc, gaps = interexceedance_times(x, u)
    q = n_exc / len(x)
    total = q * sum(t - 1 for t in gaps)
    n_c = sum(1 for t in gaps if t > 1)
    n_zero = len(gaps) - n_c

    def score(th):
        return -n_zero / (1.0 - th) + 2.0 * n_c / th - total

    if n_zero == 0:
        return min(1.0, 2.0 * n_c / total)
    lo, hi = 1e-15, 1.0 - 1e-15
    if score(hi) > 0:
        return 1.0
    return optimize.brentq(score, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=500)


def suveges_loglik(x, u, th):
    n_exc, gaps = interexceedance_times(x, u)
    q = n_exc / len(x)
    total = q * sum(t - 1 for t in gaps)
    n_c = sum(1 for t in gaps if t > 1)
    n_zero = len(gaps) - n_c
    ll = 2.0 * n_c * math.log(th) - th * total
    if n_zero:
        ll += n_zero * math.log1p(-th)
    return ll
