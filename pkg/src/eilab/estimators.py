"""Method-of-moments estimators of the extremal index.

For xi ~ Exp(theta):

* E[log xi] = -log theta - gamma        (CFG)
* E[exp(-xi)] = theta / (1 + theta)     (madogram)
* E[xi^(1/p)] = theta^(-1/p) Gamma(1 + 1/p)   (root-p; p = 1 is PML)

Each estimator replaces the moment by its empirical counterpart over a
pseudo-sample and solves for theta.
"""

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from .blocks import PseudoSample, pseudo_sample
from .exceptions import DegenerateSampleError, DomainError

__all__ = [
    "EULER_GAMMA",
    "Method",
    "EstimatorSpec",
    "parse_spec",
    "estimate_cfg",
    "estimate_mad",
    "estimate_root",
    "estimate",
    "estimate_pipeline",
]

EULER_GAMMA = 0.57721566490153286061


class Method(str, enum.Enum):
    CFG = "cfg"
    MAD = "mad"
    ROOT = "root"


@dataclass(frozen=True)
class EstimatorSpec:
    """Which moment equation to invert; ``p`` is only used by ROOT."""

    kind: Method
    p: float = None
    clip: bool = False

    def __post_init__(self):
        object.__setattr__(self, "kind", Method(self.kind))
        if self.kind is Method.ROOT:
            if self.p is None or not (float(self.p) > 0 and math.isfinite(self.p)):
                raise DomainError("ROOT estimator requires a finite p > 0")
            object.__setattr__(self, "p", float(self.p))

    @property
    def label(self):
        if self.kind is Method.ROOT:
            return "pml" if self.p == 1.0 else f"root:{self.p:g}"
        return self.kind.value


def parse_spec(text, clip=False):
    """Parse ``cfg``, ``mad``, ``pml`` or ``root:<p>``."""
    t = text.strip().lower()
    if t == "pml":
        return EstimatorSpec(Method.ROOT, 1.0, clip)
    if t.startswith("root"):
        _, sep, p = t.partition(":")
        if not sep:
            raise DomainError("root estimator needs a power, e.g. root:2")
        try:
            return EstimatorSpec(Method.ROOT, float(p), clip)
        except ValueError:
            raise DomainError(f"bad power in {text!r}") from None
    try:
        return EstimatorSpec(Method(t), None, clip)
    except ValueError:
        raise DomainError(f"unknown estimator {text!r}") from None


def _values(sample):
    v = sample.values if isinstance(sample, PseudoSample) else np.asarray(sample, dtype=float)
    v = np.ravel(v)
    if v.size == 0:
        raise DomainError("empty sample")
    if np.any(np.isnan(v)):
        raise DomainError("sample contains NaN")
    return v


def _clip(theta, clip):
    return min(theta, 1.0) if clip else theta


def estimate_cfg(sample, clip=False):
    """exp(-gamma - mean(log xi))."""
    v = _values(sample)
    if np.any(v <= 0):
        raise DomainError("CFG estimator needs strictly positive values")
    return _clip(math.exp(-EULER_GAMMA - float(np.mean(np.log(v)))), clip)


def estimate_mad(sample, clip=False):
    """M / (1 - M) with M the sample mean of exp(-xi)."""
    v = _values(sample)
    if np.any(v < 0):
        raise DomainError("madogram estimator needs non-negative values")
    m = float(np.mean(np.exp(-v)))
    if m >= 1.0:
        raise DegenerateSampleError("mean of exp(-xi) equals 1; all values are zero")
    return _clip(m / (1.0 - m), clip)


def estimate_root(sample, p, clip=False):
    """Gamma(1 + 1/p)^p * mean(xi^(1/p))^(-p), evaluated in log space."""
    p = float(p)
    if not (p > 0 and math.isfinite(p)):
        raise DomainError("p must be positive and finite")
    v = _values(sample)
    if np.any(v <= 0):
        raise DomainError("root estimator needs strictly positive values")
    log_mean = logsumexp(np.log(v) / p) - math.log(v.size)
    return _clip(math.exp(p * math.lgamma(1.0 + 1.0 / p) - p * log_mean), clip)


def estimate(sample, spec):
    """Apply the estimator described by ``spec`` to a sample."""
    if isinstance(spec, str):
        spec = parse_spec(spec)
    if spec.kind is Method.CFG:
        return estimate_cfg(sample, spec.clip)
    if spec.kind is Method.MAD:
        return estimate_mad(sample, spec.clip)
    return estimate_root(sample, spec.p, spec.clip)


def estimate_pipeline(x, scheme, transform, bias_reduced, spec, block_size=None):
    """pseudo_sample followed by :func:`estimate`."""
    ps = pseudo_sample(x, scheme, transform, bias_reduced, block_size=block_size)
    return estimate(ps, spec)
