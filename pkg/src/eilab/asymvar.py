"""Asymptotic variances of the blocks estimators.

The limiting variance of sqrt(k_n)(theta_hat - theta) depends on the series
only through theta and two moments of the two-level cluster-size law,

    m11(z) = E[xi1 xi2],   m10(z) = E[xi1 1(xi2 = 0)],   z in (0, 1],

and E[xi1 1(xi2 > 0)] = 1/theta - m10(z).  The disjoint-blocks variances are
integrals over z; the sliding-blocks variances subtract a gap that does not
depend on the cluster moments.
"""

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import special

from .blocks import Scheme
from .estimators import Method
from .exceptions import DomainError
from .specfun import Quadrature, beta_fn, integrate, upper_inc_gamma

__all__ = [
    "ClusterMomentModel",
    "VarianceRequest",
    "iid_model",
    "armax_model",
    "variance",
    "asymptotic_variance",
    "sliding_gap",
    "armax_closed_form",
    "armax_crossover",
    "iid_closed_form",
    "CFG_GAP",
    "gap_curve",
    "mad_gap_as_printed",
]

LOG2 = math.log(2.0)
PI2_6 = math.pi ** 2 / 6.0
CFG_GAP = PI2_6 - 8.0 * LOG2 + 4.0

# variances are O(1); 1e-12 absolute leaves ample room under the 1e-6 target
_VAR_QUAD = Quadrature(abs_tol=1e-12, rel_tol=1e-11, max_depth=60)
_GAP_QUAD = Quadrature(abs_tol=1e-14, rel_tol=1e-12, max_depth=60, limit=50000)
_BREAKPOINT_FLOOR = 1e-13


@dataclass(frozen=True)
class ClusterMomentModel:
    """theta and the vectorised cluster moments m11, m10 on (0, 1].

    ``breakpoints`` lists jump locations of m11/m10 inside (0, 1) so the
    quadrature can integrate piecewise.
    """

    theta: float
    m11: Callable
    m10: Callable
    breakpoints: tuple = ()
    label: str = field(default="custom", compare=False)

    def __post_init__(self):
        if not 0.0 < self.theta <= 1.0:
            raise DomainError("theta must lie in (0, 1]")

    def m1_pos(self, z):
        """E[xi1 1(xi2 > 0)], derived from E[xi1] = 1 / theta."""
        return 1.0 / self.theta - self.m10(z)


def iid_model(theta=1.0):
    """Cluster moments of a serially independent series: m11 = z, m10 = 1 - z."""
    return ClusterMomentModel(
        theta,
        lambda z: np.asarray(z, dtype=float) * 1.0,
        lambda z: 1.0 - np.asarray(z, dtype=float),
        label="iid",
    )


def armax_model(alpha):
    """Cluster moments of the ARMAX process, theta = 1 - alpha.

    With w = floor(log z / log alpha) the moments are piecewise smooth with
    m10 jumping at z = alpha^k.
    """
    alpha = float(alpha)
    if not 0.0 <= alpha < 1.0:
        raise DomainError("alpha must lie in [0, 1)")
    if alpha == 0.0:
        return iid_model(1.0)
    la = math.log(alpha)
    om = 1.0 - alpha

    def _w(z):
        return np.floor(np.log(z) / la)

    # z may underflow to 0 under the t^p substitution; both moments have limits there
    def m11(z):
        z = np.maximum(np.asarray(z, dtype=float), 1e-300)
        w = _w(z)
        return (alpha ** (w + 1.0) + z + z * w * om) / om ** 2

    def m10(z):
        z = np.maximum(np.asarray(z, dtype=float), 1e-300)
        w = _w(z)
        return (1.0 - alpha ** (w + 1.0)) / om - z * (w + 1.0)

    kmax = int(math.log(_BREAKPOINT_FLOOR) / la) + 1
    bps = tuple(alpha ** k for k in range(1, kmax + 1))
    return ClusterMomentModel(om, m11, m10, bps, label=f"armax({alpha:g})")


@dataclass(frozen=True)
class VarianceRequest:
    method: Method
    scheme: Scheme
    model: ClusterMomentModel
    p: float = None

    def __post_init__(self):
        object.__setattr__(self, "method", Method(self.method))
        object.__setattr__(self, "scheme", Scheme(self.scheme))
        if self.method is Method.ROOT and not (self.p is not None and self.p > 0):
            raise DomainError("ROOT variance needs p > 0")


def _integral_cfg(model, q):
    th = model.theta

    def f(z):
        return (th * model.m11(z) - model.m1_pos(z)) / (z * (1.0 + z))

    return integrate(f, 0.0, 1.0, q, breakpoints=model.breakpoints)


def _integral_mad(model, q):
    th = model.theta

    def f(z):
        return (th * model.m11(z) - model.m1_pos(z)) / (1.0 + z) ** 3

    return integrate(f, 0.0, 1.0, q, breakpoints=model.breakpoints)


def _integral_root(model, p, q):
    th = model.theta
    expo = 1.0 + 2.0 / p
    if p <= 1.0:
        def f(z):
            return z ** (1.0 / p - 1.0) * (th * model.m11(z) + model.m10(z)) / (1.0 + z) ** expo

        return integrate(f, 0.0, 1.0, q, breakpoints=model.breakpoints)

    # z = t^p absorbs the z^(1/p - 1) weight: dz z^(1/p-1) = p dt
    def g(t):
        z = t ** p
        return p * (th * model.m11(z) + model.m10(z)) / (1.0 + z) ** expo

    bps = tuple(bp ** (1.0 / p) for bp in model.breakpoints)
    return integrate(g, 0.0, 1.0, q, breakpoints=bps)


def _disjoint(method, model, p, q):
    th = model.theta
    if method is Method.CFG:
        return 2.0 * th ** 3 * _integral_cfg(model, q) + (PI2_6 - 2.0 * LOG2) * th ** 2
    if method is Method.MAD:
        return (4.0 * th ** 2 * (1.0 + th) * _integral_mad(model, q)
                + th ** 2 * (1.0 + th) / (2.0 * (2.0 + th)))
    bb = beta_fn(1.0 / p, 1.0 / p)
    return (4.0 * p * th ** 3 / bb * _integral_root(model, p, q)
            + (2.0 * p ** 3 / bb - p ** 2 - 2.0 * p) * th ** 2)


def variance(req, q=_VAR_QUAD):
    """Asymptotic variance for ``req`` by adaptive quadrature."""
    djb = _disjoint(req.method, req.model, req.p, q)
    if req.scheme is Scheme.DISJOINT:
        return djb
    th = req.model.theta
    return djb - sliding_gap(req.method, th, req.p) * th ** 2


def asymptotic_variance(method, scheme, model, p=None, q=_VAR_QUAD):
    """Shorthand for ``variance(VarianceRequest(...))``."""
    return variance(VarianceRequest(method, scheme, model, p), q)


# Taylor coefficients of the madogram gap divided by theta^2 around theta = 0.
_MAD_GAP_SERIES = (1 / 12, 1 / 16, -1 / 40, 1 / 120, -3 / 2240, -23 / 17920, 65 / 32256)


def _mad_gap_numerator(t):
    return 3 * t * t + 4 * t - 4 * (1 + t) * (2 + t) * math.log1p(t / (2 + t))


def _mad_gap(theta):
    if theta < 1e-2:
        return sum(c * theta ** k for k, c in enumerate(_MAD_GAP_SERIES))
    t = theta
    return _mad_gap_numerator(t) * (1 + t) ** 2 / (t ** 3 * (2 + t))


def mad_gap_as_printed(theta):
    """Madogram gap / theta^2 with (1 + theta)^2 in the denominator instead of dividing by it.

    Equals ``sliding_gap('mad', theta) / (1 + theta)^4``.  It gives 0.00797 at
    theta = 1, which simulation does not support; kept only for comparison.
    """
    if not 0.0 < theta <= 1.0:
        raise DomainError("theta must lie in (0, 1]")
    t = theta
    return _mad_gap_numerator(t) / (t * (2 + t) * (1 + t) ** 2) / t ** 2


def _overlap_kernel(x):
    """k(x) = 1 + e^-x - 2 (1 - e^-x) / x, which behaves like x^2 / 6 at 0."""
    x = np.asarray(x, dtype=float)
    small = x < 0.5
    xs = np.where(small, x, 0.0)
    series = sum((-1) ** m * (m - 1) / math.factorial(m + 1) * xs ** m for m in range(2, 22))
    xl = np.where(small, 1.0, x)
    em = np.expm1(-xl)
    direct = 2.0 + em + 2.0 * em / xl
    return np.where(small, series, direct)


def root_gap_integral_form(p, q=_GAP_QUAD):
    """Gap in the original form p^2 + 2p^3/B - 4p^2 / Gamma(1/p)^2 * J(p).

    J(p) is the integral of (1 - e^-z) z^(1/p - 2) Gamma(1/p, z) over (0, inf).
    Cancels terms of order p^2, so only use it for moderate p.
    """
    s = 1.0 / p

    # on [0, 1] substitute z = t^p so the z^(1/p - 1) behaviour becomes smooth
    def inner(t):
        z = t ** p
        lead = np.where(z > 0, -np.expm1(-z) / np.where(z > 0, z, 1.0), 1.0)
        return p * lead * upper_inc_gamma(s, z)

    def outer(z):
        return -np.expm1(-z) * z ** (s - 2.0) * upper_inc_gamma(s, z)

    j = integrate(inner, 0.0, 1.0, q) + integrate(outer, 1.0, math.inf, q)
    lg = math.lgamma(s)
    return p ** 2 + 2.0 * p ** 3 * math.exp(math.lgamma(2.0 * s) - 2.0 * lg) \
        - 4.0 * p ** 2 * math.exp(-2.0 * lg) * j


def _root_gap(p, q):
    # Same quantity as root_gap_integral_form after collecting the closed-form
    # pieces; the remaining integrand is non-negative, so nothing cancels.
    s = 1.0 / p

    def f(x):
        return x ** (s - 1.0) * special.gammaincc(s, x) * _overlap_kernel(x)

    total = integrate(f, 0.0, 1.0, q) + integrate(f, 1.0, math.inf, q)
    return 2.0 * p ** 2 * math.exp(-math.lgamma(s)) * total


def sliding_gap(method, theta=1.0, p=None, q=_GAP_QUAD):
    """(sigma^2_disjoint - sigma^2_sliding) / theta^2.

    Universal for CFG and ROOT(p); depends on theta for the madogram.
    """
    method = Method(method)
    if not 0.0 < theta <= 1.0:
        raise DomainError("theta must lie in (0, 1]")
    if method is Method.CFG:
        return CFG_GAP
    if method is Method.MAD:
        return _mad_gap(theta)
    if p is None or not p > 0:
        raise DomainError("ROOT gap needs p > 0")
    p = float(p)
    if p == 1.0:
        # Gamma(1, z) = e^-z and the integral is log 2
        return 3.0 - 4.0 * LOG2
    return _root_gap(p, q)


def armax_closed_form(method, scheme, alpha):
    """Closed-form ARMAX variances for CFG and PML (``'cfg'`` / ``'pml'``)."""
    alpha = float(alpha)
    if not 0.0 <= alpha < 1.0:
        raise DomainError("alpha must lie in [0, 1)")
    scheme = Scheme(scheme)
    method = str(getattr(method, "value", method)).lower()
    if method == "cfg":
        if scheme is Scheme.DISJOINT:
            r = PI2_6 + 2.0 * LOG2 * (alpha - 1.0)
        else:
            r = 2.0 * LOG2 * (3.0 + alpha) - 4.0
    elif method in ("pml", "root:1"):
        if scheme is Scheme.DISJOINT:
            r = 0.5 * (1.0 + alpha)
        else:
            r = 0.5 * (8.0 * LOG2 - 5.0 + alpha)
    else:
        raise DomainError(f"no ARMAX closed form for {method!r}")
    return r * (1.0 - alpha) ** 2


def armax_crossover():
    """alpha at which CFG and PML variances coincide, (disjoint, sliding)."""
    den = 4.0 * LOG2 - 1.0
    return (1.0 + 4.0 * LOG2 - math.pi ** 2 / 3.0) / den, (3.0 - 4.0 * LOG2) / den


def iid_closed_form(method, scheme, p=None):
    """Variances for serially independent data (theta = 1) without the z-integral.

    The root-p sliding value still needs the one-dimensional gap integral.
    """
    method = Method(method)
    scheme = Scheme(scheme)
    if method is Method.CFG:
        return PI2_6 - 2.0 * LOG2 if scheme is Scheme.DISJOINT else 6.0 * LOG2 - 4.0
    if method is Method.MAD:
        return 1.0 / 3.0 if scheme is Scheme.DISJOINT else 32.0 * math.log(4.0 / 3.0) - 9.0
    if p is None or not p > 0:
        raise DomainError("ROOT variance needs p > 0")
    p = float(p)
    djb = 2.0 * p / beta_fn(1.0 / p, 1.0 / p) * (p * p + 2.0 ** (-2.0 / p) * p) - p * p - p
    if scheme is Scheme.DISJOINT:
        return djb
    return djb - sliding_gap(Method.ROOT, 1.0, p)


def gap_curve(method, grid):
    """Rows (x, gap) over a grid of theta (madogram) or p (root)."""
    method = Method(method)
    if method is Method.MAD:
        return [(float(t), sliding_gap(method, float(t))) for t in grid]
    if method is Method.ROOT:
        return [(float(p), sliding_gap(method, 1.0, float(p))) for p in grid]
    return [(float(x), CFG_GAP) for x in grid]
