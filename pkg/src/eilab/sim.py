"""Seeded simulators for the four benchmark time-series models.

All generators are deterministic functions of ``(n, parameter, seed)``.  A
seed may be an ``int`` or a :class:`numpy.random.SeedSequence`, which is how
the Monte-Carlo harness hands out independent per-replication streams.
"""

import enum
import io
import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import DomainError

__all__ = [
    "ModelKind",
    "ModelSpec",
    "TimeSeries",
    "sim_armax",
    "sim_arch",
    "sim_sqarch",
    "sim_markov_clayton",
    "simulate",
    "armax_block_cdf",
    "write_series",
    "read_series",
    "REFERENCE_THETA",
    "reference_theta",
]

ARCH_BURN_IN = 1000
ARCH_OMEGA = 2e-5


class ModelKind(str, enum.Enum):
    ARMAX = "armax"
    ARCH = "arch"
    SQARCH = "sqarch"
    MARKOV_CLAYTON = "markov_clayton"


@dataclass(frozen=True)
class ModelSpec:
    """A model family and its single parameter (alpha, lambda or vartheta)."""

    kind: ModelKind
    param: float

    def __post_init__(self):
        object.__setattr__(self, "kind", ModelKind(self.kind))
        p = float(self.param)
        object.__setattr__(self, "param", p)
        if self.kind is ModelKind.ARMAX:
            ok = 0.0 <= p < 1.0
        elif self.kind is ModelKind.MARKOV_CLAYTON:
            ok = p > 0.0 and math.isfinite(p)
        else:
            ok = 0.0 < p < 1.0
        if not ok:
            raise DomainError(f"parameter {p!r} outside the domain of {self.kind.value}")

    @property
    def label(self):
        return f"{self.kind.value}({self.param:g})"


@dataclass(frozen=True)
class TimeSeries:
    """Observed values plus optional provenance."""

    values: np.ndarray
    model: ModelSpec = None
    seed: object = None
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.ndim != 1 or v.size < 1:
            raise DomainError("a time series needs at least one observation")
        if not np.all(np.isfinite(v)):
            raise DomainError("time series values must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def __len__(self):
        return self.values.size

    @property
    def n(self):
        return self.values.size


def _rng(seed):
    return np.random.default_rng(seed)


def _check_n(n):
    if int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    return int(n)


def _frechet(rng, size):
    # exact inverse transform of F(x) = exp(-1/x)
    return -1.0 / np.log(rng.random(size))


def sim_armax(n, alpha, seed):
    """Max-autoregressive process X_s = max(alpha X_{s-1}, (1 - alpha) Z_s).

    Starts from the stationary Frechet(1) law, so no burn-in is needed.
    """
    spec = ModelSpec(ModelKind.ARMAX, alpha)
    n = _check_n(n)
    a = spec.param
    rng = _rng(seed)
    x_prev = float(_frechet(rng, 1)[0])
    innov = ((1.0 - a) * _frechet(rng, n)).tolist()
    out = [0.0] * n
    for s, z in enumerate(innov):
        x_prev = max(a * x_prev, z)
        out[s] = x_prev
    return TimeSeries(np.array(out), spec, seed)


def sim_arch(n, lam, seed):
    """ARCH(1): X_s = (2e-5 + lam X_{s-1}^2)^(1/2) Z_s with standard normal Z_s."""
    spec = ModelSpec(ModelKind.ARCH, lam)
    n = _check_n(n)
    rng = _rng(seed)
    z = rng.standard_normal(n + ARCH_BURN_IN).tolist()
    sqrt = math.sqrt
    x = 0.0
    out = [0.0] * (n + ARCH_BURN_IN)
    for s, zs in enumerate(z):
        x = sqrt(ARCH_OMEGA + lam * x * x) * zs
        out[s] = x
    return TimeSeries(np.array(out[ARCH_BURN_IN:]), spec, seed)


def sim_sqarch(n, lam, seed):
    """Squared ARCH(1): X_s = (2e-5 + lam X_{s-1}) Z_s^2."""
    spec = ModelSpec(ModelKind.SQARCH, lam)
    n = _check_n(n)
    rng = _rng(seed)
    z = rng.standard_normal(n + ARCH_BURN_IN)
    z2 = (z * z).tolist()
    x = 0.0
    out = [0.0] * (n + ARCH_BURN_IN)
    for s, zs in enumerate(z2):
        x = (ARCH_OMEGA + lam * x) * zs
        out[s] = x
    return TimeSeries(np.array(out[ARCH_BURN_IN:]), spec, seed)


def sim_markov_clayton(n, vartheta, seed):
    """Stationary Markov chain with uniform margins and survival Clayton transitions.

    A plain Clayton chain V is generated by conditional inversion and reflected,
    U_s = 1 - V_s, so consecutive pairs follow the survival copula.
    """
    spec = ModelSpec(ModelKind.MARKOV_CLAYTON, vartheta)
    n = _check_n(n)
    t = spec.param
    rng = _rng(seed)
    draws = rng.random(n)
    # conditional inverse exponent applied to w ~ Unif(0,1), vectorised up front
    w_pow = (draws[1:] ** (-t / (1.0 + t)) - 1.0).tolist()
    v = float(draws[0])
    out = [0.0] * n
    out[0] = 1.0 - v
    inv = -1.0 / t
    for s, wp in enumerate(w_pow, start=1):
        v = (wp * v ** (-t) + 1.0) ** inv
        out[s] = 1.0 - v
    return TimeSeries(np.array(out), spec, seed)


_SIMULATORS = {
    ModelKind.ARMAX: sim_armax,
    ModelKind.ARCH: sim_arch,
    ModelKind.SQARCH: sim_sqarch,
    ModelKind.MARKOV_CLAYTON: sim_markov_clayton,
}


def simulate(model, n, seed):
    """Dispatch on a :class:`ModelSpec`."""
    return _SIMULATORS[model.kind](n, model.param, seed)


# Extremal indices reported for the benchmark parameter values; the (sq)ARCH
# entries are themselves simulation estimates.
REFERENCE_THETA = {
    ModelKind.ARCH: {0.1: 0.999, 0.5: 0.835, 0.7: 0.721, 0.99: 0.571},
    ModelKind.SQARCH: {0.1: 0.997, 0.5: 0.727, 0.9: 0.460, 0.99: 0.422},
    ModelKind.MARKOV_CLAYTON: {0.23: 0.95, 0.41: 0.8, 0.68: 0.6, 1.06: 0.4, 1.90: 0.2},
}


def reference_theta(model):
    """Known or tabulated extremal index of a benchmark model, else ``None``."""
    if model.kind is ModelKind.ARMAX:
        return 1.0 - model.param
    table = REFERENCE_THETA[model.kind]
    for key, theta in table.items():
        if math.isclose(key, model.param, rel_tol=0, abs_tol=1e-12):
            return theta
    return None


def armax_block_cdf(x, b, theta):
    """Exact CDF of the rescaled block maximum b(1 - F(M_{1:b})) for ARMAX.

    Equals 1 - (1 - x/b)^(1 + theta (b - 1)) on [0, b]; accepts arrays.
    """
    if int(b) != b or b < 1:
        raise DomainError("b must be a positive integer")
    if not 0.0 < theta <= 1.0:
        raise DomainError("theta must lie in (0, 1]")
    xa = np.asarray(x, dtype=float)
    r = np.clip(1.0 - xa / b, 0.0, 1.0)
    out = np.where(xa <= 0.0, 0.0, 1.0 - r ** (1.0 + theta * (b - 1)))
    return float(out) if out.ndim == 0 else out


def write_series(ts, fh):
    """Write one value per line under a ``#`` header recording provenance."""
    if ts.model is not None:
        fh.write(f"# model={ts.model.kind.value}\n")
        fh.write(f"# param={ts.model.param!r}\n")
    if ts.seed is not None:
        fh.write(f"# seed={ts.seed}\n")
    fh.write(f"# n={ts.n}\n")
    for v in ts.values.tolist():
        fh.write(f"{v!r}\n")


def read_series(fh):
    """Parse the format of :func:`write_series`; blank and ``#`` lines are skipped."""
    if isinstance(fh, str):
        fh = io.StringIO(fh)
    header = {}
    values = []
    for lineno, raw in enumerate(fh, start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, sep, val = line[1:].strip().partition("=")
            if sep:
                header[key.strip()] = val.strip()
            continue
        try:
            values.append(float(line.split(",")[0]))
        except ValueError:
            raise DomainError(f"line {lineno}: not a number: {line!r}") from None
    model = None
    if "model" in header and "param" in header:
        model = ModelSpec(header["model"], float(header["param"]))
    seed = int(header["seed"]) if header.get("seed", "").lstrip("-").isdigit() else None
    return TimeSeries(np.array(values, dtype=float), model, seed, meta=header)
