"""Block maxima and the rank-based pseudo-samples built from them.

Given observations X_1..X_n and a block length b, each block maximum M is
mapped through the adjusted empirical CDF F_n(v) = #{X_s <= v} / (n + 1) and
then to either

    Z = b (1 - F_n(M))      or      Y = -b log F_n(M),

both approximately exponential with rate equal to the extremal index.
"""

import enum
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.ndimage import maximum_filter1d

from .exceptions import DomainError
from .sim import TimeSeries

__all__ = [
    "Scheme",
    "Transform",
    "BlockScheme",
    "PseudoSample",
    "TiesWarning",
    "block_maxima",
    "empirical_cdf_factor",
    "pseudo_sample",
    "bias_reduction_factor",
]


class Scheme(str, enum.Enum):
    DISJOINT = "disjoint"
    SLIDING = "sliding"


class Transform(str, enum.Enum):
    Y = "y"
    Z = "z"


class TiesWarning(UserWarning):
    """The data contain ties, violating the continuous-margin assumption."""


@dataclass(frozen=True)
class BlockScheme:
    kind: Scheme
    block_size: int

    def __post_init__(self):
        object.__setattr__(self, "kind", Scheme(self.kind))
        b = self.block_size
        if isinstance(b, bool) or int(b) != b or b < 1:
            raise DomainError(f"block size must be a positive integer, got {b!r}")
        object.__setattr__(self, "block_size", int(b))


@dataclass(frozen=True)
class PseudoSample:
    """Transformed block maxima with the settings that produced them."""

    values: np.ndarray
    scheme: Scheme
    transform: Transform
    block_size: int
    n: int
    bias_reduced: bool = False
    warnings: tuple = field(default=(), compare=False)

    def __len__(self):
        return self.values.size


def _as_array(x):
    if isinstance(x, TimeSeries):
        return x.values
    v = np.asarray(x, dtype=float)
    if v.ndim != 1 or v.size < 1:
        raise DomainError("expected a non-empty 1-d series")
    if not np.all(np.isfinite(v)):
        raise DomainError("series values must be finite")
    return v


def _coerce_scheme(scheme, block_size):
    if isinstance(scheme, BlockScheme):
        return scheme
    return BlockScheme(scheme, block_size)


def block_maxima(x, scheme, block_size=None):
    """Maxima over disjoint blocks (trailing partial block dropped) or all sliding windows.

    Sliding maxima use scipy's ascending-minima filter, which is linear in n
    regardless of ``block_size``.
    """
    v = _as_array(x)
    sch = _coerce_scheme(scheme, block_size)
    n, b = v.size, sch.block_size
    if b > n:
        raise DomainError(f"block size {b} exceeds series length {n}")
    if sch.kind is Scheme.DISJOINT:
        k = n // b
        return v[: k * b].reshape(k, b).max(axis=1)
    if b == 1:
        return v.copy()
    # with origin 0, output i covers v[i - b // 2 : i - b // 2 + b]
    filt = maximum_filter1d(v, size=b, mode="nearest")
    start = b // 2
    return filt[start: start + n - b + 1]


def empirical_cdf_factor(x):
    """Return v -> #{X_s <= v} / (n + 1); works on scalars and arrays."""
    v = np.sort(_as_array(x))
    denom = v.size + 1.0

    def ecdf(u):
        counts = np.searchsorted(v, u, side="right")
        out = counts / denom
        return float(out) if np.ndim(out) == 0 else out

    return ecdf


def bias_reduction_factor(n, block_size):
    """Leave-one-block rescaling (n + 1) / (n - b + 1) of the Z-values."""
    return (n + 1.0) / (n - block_size + 1.0)


def pseudo_sample(x, scheme, transform, bias_reduced=False, block_size=None):
    """Build the Y- or Z-pseudo-sample from block maxima of ``x``.

    With ``bias_reduced`` every Z is multiplied by (n + 1) / (n - b + 1),
    i.e. the block's own observations are removed from the empirical CDF;
    the Y-version is -b log(1 - Z~/b) with the rescaled Z~.
    """
    v = _as_array(x)
    sch = _coerce_scheme(scheme, block_size)
    tr = Transform(transform)
    n, b = v.size, sch.block_size
    maxima = block_maxima(v, sch)

    sorted_v = np.sort(v)
    counts = np.searchsorted(sorted_v, maxima, side="right")
    notes = ()
    if sorted_v.size > 1 and np.any(sorted_v[1:] == sorted_v[:-1]):
        msg = "ties in the data: the estimators assume a continuous marginal distribution"
        warnings.warn(msg, TiesWarning, stacklevel=2)
        notes = (msg,)

    # exceedance fraction 1 - F_n(M) in exact integer arithmetic before scaling
    upper = (n + 1 - counts) / (n + 1.0)
    z = b * upper
    if bias_reduced:
        z = z * bias_reduction_factor(n, b)
    if tr is Transform.Z:
        values = z
    elif bias_reduced:
        with np.errstate(divide="ignore"):
            values = -b * np.log1p(-z / b)
    else:
        values = -b * np.log1p(-upper)
    values.setflags(write=False)
    return PseudoSample(values, sch.kind, tr, b, n, bool(bias_reduced), notes)
