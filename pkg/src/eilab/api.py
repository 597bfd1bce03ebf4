"""scikit-learn style wrappers around the functional core.

``fit`` takes a single univariate series (1-d array, or an (n, 1) column)
and stores the estimate in ``theta_``.  Parameters are plain constructor
arguments, so ``get_params`` / ``set_params`` / ``clone`` work as usual.
"""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .blocks import Scheme, Transform, pseudo_sample
from .competitors import COMPETITORS, threshold_quantile
from .estimators import estimate, parse_spec
from .exceptions import DomainError

__all__ = [
    "check_series",
    "check_block_size",
    "PseudoSampleTransformer",
    "ExtremalIndexEstimator",
    "ThresholdExtremalIndex",
]


def check_series(X, min_length=1):
    """Validate a univariate series and return it as a finite 1-d float array.

    Accepts a 1-d array-like or a single-column 2-d array.
    """
    arr = np.asarray(X)
    if arr.ndim == 2:
        if arr.shape[1] != 1:
            raise DomainError(f"expected a single column, got shape {arr.shape}")
        arr = arr[:, 0]
    arr = check_array(arr, ensure_2d=False, dtype=np.float64,
                      ensure_min_samples=min_length, input_name="X")
    if arr.ndim != 1:
        raise DomainError("expected a univariate series")
    return arr


def check_block_size(block_size, n):
    if isinstance(block_size, bool) or int(block_size) != block_size or block_size < 1:
        raise DomainError(f"block_size must be a positive integer, got {block_size!r}")
    if block_size > n:
        raise DomainError(f"block_size {block_size} exceeds series length {n}")
    return int(block_size)


class PseudoSampleTransformer(TransformerMixin, BaseEstimator):
    """Map a series to its Y- or Z-pseudo-sample of rescaled block maxima.

    Parameters
    ----------
    block_size : int
    scheme : {'sliding', 'disjoint'}
    pseudo : {'z', 'y'}
        Which pseudo-observation to return.
    bias_reduced : bool
        Leave-one-block rescaling of the empirical CDF.

    Notes
    -----
    The transformation is rank based, so it has nothing to learn; ``fit``
    only validates the parameters. ``transform`` returns a 1-d array whose
    length is the number of blocks, not the series length.
    """

    def __init__(self, block_size=32, scheme="sliding", pseudo="z", bias_reduced=False):
        self.block_size = block_size
        self.scheme = scheme
        self.pseudo = pseudo
        self.bias_reduced = bias_reduced

    def fit(self, X, y=None):
        x = check_series(X)
        check_block_size(self.block_size, x.size)
        Scheme(self.scheme)
        Transform(self.pseudo)
        self.n_samples_seen_ = x.size
        return self

    def transform(self, X):
        check_is_fitted(self, "n_samples_seen_")
        x = check_series(X)
        ps = pseudo_sample(x, self.scheme, self.pseudo, self.bias_reduced,
                           block_size=check_block_size(self.block_size, x.size))
        return np.array(ps.values)


class ExtremalIndexEstimator(BaseEstimator):
    """Blocks estimator of the extremal index.

    Parameters
    ----------
    method : str
        'cfg', 'mad', 'pml' or 'root:<p>'.
    block_size : int
    scheme : {'sliding', 'disjoint'}
    transform : {'z', 'y'}
    bias_reduced : bool
    clip : bool
        Truncate the estimate at 1.

    Attributes
    ----------
    theta_ : float
    pseudo_sample_ : ndarray
    n_blocks_ : int
    """

    def __init__(self, method="pml", block_size=32, scheme="sliding", transform="z",
                 bias_reduced=True, clip=False):
        self.method = method
        self.block_size = block_size
        self.scheme = scheme
        self.transform = transform
        self.bias_reduced = bias_reduced
        self.clip = clip

    def fit(self, X, y=None):
        x = check_series(X)
        spec = parse_spec(self.method, clip=self.clip)
        ps = pseudo_sample(x, self.scheme, self.transform, self.bias_reduced,
                           block_size=check_block_size(self.block_size, x.size))
        self.pseudo_sample_ = np.array(ps.values)
        self.n_blocks_ = len(ps)
        self.theta_ = estimate(ps, spec)
        return self

    def estimate(self, X):
        """Convenience: fit on ``X`` and return ``theta_``."""
        return self.fit(X).theta_


class ThresholdExtremalIndex(BaseEstimator):
    """Interexceedance-time estimators ('intervals' or 'suveges').

    ``threshold=None`` uses the empirical (1 - 1/block_size)-quantile.
    """

    def __init__(self, method="intervals", block_size=32, threshold=None):
        self.method = method
        self.block_size = block_size
        self.threshold = threshold

    def fit(self, X, y=None):
        x = check_series(X, min_length=2)
        if self.method not in COMPETITORS:
            raise DomainError(f"unknown threshold method {self.method!r}")
        u = self.threshold
        if u is None:
            u = threshold_quantile(x, check_block_size(self.block_size, x.size))
        self.threshold_ = float(u)
        self.theta_ = COMPETITORS[self.method](x, self.threshold_)
        return self

    def estimate(self, X):
        return self.fit(X).theta_
