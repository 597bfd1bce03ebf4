"""Monte-Carlo harness for bias / variance / MSE of extremal index estimators.

Replication ``r`` of model ``i`` simulates one path from
``SeedSequence([master_seed, i, r])``; every estimator and block size is then
evaluated on that same path.  Results are reduced by replication index, so
the output does not depend on how many worker processes ran.
"""

import csv
import io
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .blocks import Scheme, Transform, pseudo_sample
from .competitors import COMPETITORS, threshold_quantile
from .estimators import estimate, parse_spec
from .exceptions import DomainError, EilabError
from .sim import ModelSpec, reference_theta, simulate

__all__ = [
    "EstimatorEntry",
    "StudyConfig",
    "StudyResult",
    "aggregate",
    "run_study",
    "parse_config",
    "RESULT_COLUMNS",
]

RESULT_COLUMNS = (
    "model", "param", "theta_true", "estimator", "scheme", "transform",
    "bias_reduced", "b", "mean", "bias", "variance", "mse", "mse_times_1e3",
    "N", "failures", "flagged",
)
FAILURE_FLAG_RATE = 0.01


@dataclass(frozen=True)
class EstimatorEntry:
    """A moment estimator with its block construction, or a threshold competitor."""

    name: str
    scheme: Scheme = Scheme.SLIDING
    transform: Transform = Transform.Z
    bias_reduced: bool = True

    def __post_init__(self):
        object.__setattr__(self, "name", self.name.lower())
        object.__setattr__(self, "scheme", Scheme(self.scheme))
        object.__setattr__(self, "transform", Transform(self.transform))
        if not self.is_competitor:
            parse_spec(self.name)

    @property
    def is_competitor(self):
        return self.name in COMPETITORS

    @property
    def label(self):
        if self.is_competitor:
            return self.name
        return parse_spec(self.name).label


@dataclass
class StudyConfig:
    models: list
    n: int = 8192
    block_sizes: tuple = (4, 8, 16, 32, 64, 128, 256, 512)
    estimators: list = field(default_factory=list)
    replications: int = 500
    master_seed: int = 0
    parallelism: int = 1

    def __post_init__(self):
        self.models = [_model_entry(m) for m in self.models]
        self.block_sizes = tuple(int(b) for b in self.block_sizes)
        self.estimators = [e if isinstance(e, EstimatorEntry) else EstimatorEntry(*e)
                           for e in self.estimators]
        if self.replications < 2:
            raise DomainError("need at least 2 replications")
        if not self.models or not self.estimators or not self.block_sizes:
            raise DomainError("config needs models, estimators and block sizes")
        if any(b < 1 or b > self.n for b in self.block_sizes):
            raise DomainError("every block size must lie in [1, n]")
        if self.parallelism < 1:
            raise DomainError("parallelism must be positive")


def _model_entry(m):
    if isinstance(m, ModelSpec):
        m = (m, None)
    spec, theta = m
    if not isinstance(spec, ModelSpec):
        spec = ModelSpec(*spec)
    if theta is None:
        theta = reference_theta(spec)
        if theta is None:
            raise DomainError(f"no reference extremal index for {spec.label}; give theta")
    theta = float(theta)
    if not 0.0 < theta <= 1.0:
        raise DomainError("theta_true must lie in (0, 1]")
    return spec, theta


@dataclass
class StudyResult:
    rows: list
    estimates: dict = field(default_factory=dict, repr=False)
    seeds: dict = field(default_factory=dict, repr=False)
    metadata: dict = field(default_factory=dict)

    def to_csv(self, fh=None):
        """Write the rows as CSV (9 significant digits); returns the text if ``fh`` is None."""
        out = fh if fh is not None else io.StringIO()
        w = csv.writer(out, lineterminator="\n")
        w.writerow(RESULT_COLUMNS)
        for row in self.rows:
            w.writerow([_fmt(row[c]) for c in RESULT_COLUMNS])
        return out.getvalue() if fh is None else None


def _fmt(v):
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, float):
        return format(v, ".9g")
    return str(v)


def aggregate(estimates, theta_true):
    """(mean, bias, variance, mse) with 1/N normalisation, so mse = bias^2 + variance."""
    x = np.asarray(estimates, dtype=float)
    if x.size < 2:
        raise DomainError("need at least 2 estimates")
    if not np.all(np.isfinite(x)):
        raise DomainError("estimates must be finite")
    mean = float(np.mean(x))
    bias = mean - theta_true
    var = float(np.mean((x - mean) ** 2))
    mse = float(np.mean((x - theta_true) ** 2))
    return mean, bias, var, mse


def replication_seed(master_seed, model_index, replication):
    return np.random.SeedSequence([int(master_seed), int(model_index), int(replication)])


def _evaluate_path(values, block_sizes, estimators):
    out = np.full((len(block_sizes), len(estimators)), np.nan)
    for bi, b in enumerate(block_sizes):
        samples = {}
        threshold = None
        for ei, est in enumerate(estimators):
            try:
                if est.is_competitor:
                    if threshold is None:
                        threshold = threshold_quantile(values, b)
                    out[bi, ei] = COMPETITORS[est.name](values, threshold)
                    continue
                key = (est.scheme, est.transform, est.bias_reduced)
                if key not in samples:
                    samples[key] = pseudo_sample(values, est.scheme, est.transform,
                                                 est.bias_reduced, block_size=b)
                out[bi, ei] = estimate(samples[key], est.name)
            except EilabError:
                pass
    return out


def _run_chunk(args):
    model, n, block_sizes, estimators, master_seed, model_index, reps = args
    result = []
    for r in reps:
        path = simulate(model, n, replication_seed(master_seed, model_index, r))
        result.append(_evaluate_path(path.values, block_sizes, estimators))
    return result


def _chunks(n_items, n_chunks):
    bounds = np.linspace(0, n_items, n_chunks + 1).astype(int)
    return [range(lo, hi) for lo, hi in zip(bounds[:-1], bounds[1:]) if hi > lo]


def run_study(cfg):
    """Run every (model, block size, estimator) cell of ``cfg``."""
    estimates = {}
    seeds = {}
    jobs = []
    for mi, (model, _) in enumerate(cfg.models):
        for reps in _chunks(cfg.replications, max(cfg.parallelism * 4, 1)):
            jobs.append((model, cfg.n, cfg.block_sizes, cfg.estimators, cfg.master_seed, mi, reps))
        seeds[mi] = [replication_seed(cfg.master_seed, mi, r).entropy
                     for r in range(cfg.replications)]

    if cfg.parallelism == 1:
        chunk_results = [_run_chunk(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=cfg.parallelism) as pool:
            chunk_results = list(pool.map(_run_chunk, jobs))

    collected = {mi: [] for mi in range(len(cfg.models))}
    for job, res in zip(jobs, chunk_results):
        collected[job[5]].extend(res)

    rows = []
    for mi, (model, theta) in enumerate(cfg.models):
        arr = np.stack(collected[mi])  # (replications, blocks, estimators)
        estimates[mi] = arr
        for bi, b in enumerate(cfg.block_sizes):
            for ei, est in enumerate(cfg.estimators):
                col = arr[:, bi, ei]
                ok = col[np.isfinite(col)]
                failures = int(col.size - ok.size)
                if ok.size >= 2:
                    mean, bias, var, mse = aggregate(ok, theta)
                else:
                    mean = bias = var = mse = math.nan
                rows.append({
                    "model": model.kind.value,
                    "param": model.param,
                    "theta_true": theta,
                    "estimator": est.label,
                    "scheme": "" if est.is_competitor else est.scheme.value,
                    "transform": "" if est.is_competitor else est.transform.value,
                    "bias_reduced": False if est.is_competitor else est.bias_reduced,
                    "b": b,
                    "mean": mean,
                    "bias": bias,
                    "variance": var,
                    "mse": mse,
                    "mse_times_1e3": 1e3 * mse,
                    "N": int(ok.size),
                    "failures": failures,
                    "flagged": failures > FAILURE_FLAG_RATE * col.size,
                })
    meta = {
        "n": cfg.n,
        "replications": cfg.replications,
        "master_seed": cfg.master_seed,
        "block_sizes": list(cfg.block_sizes),
        "models": [{"model": m.kind.value, "param": m.param, "theta_true": t}
                   for m, t in cfg.models],
        "estimators": [{"name": e.label, "scheme": e.scheme.value,
                        "transform": e.transform.value, "bias_reduced": e.bias_reduced}
                       for e in cfg.estimators],
        "pairing": "all estimators and block sizes share one simulated path per replication",
        "variance_convention": "1/N",
    }
    return StudyResult(rows, estimates, seeds, meta)


def write_outputs(result, out_path=None, out_dir=None):
    """Write the combined CSV, optional per-model CSVs and a JSON metadata sidecar."""
    if out_path:
        with open(out_path, "w", newline="") as fh:
            result.to_csv(fh)
        with open(out_path + ".meta.json", "w") as fh:
            json.dump(result.metadata, fh, indent=2, sort_keys=True)
    if out_dir:
        os.makedirs(out_dir, exist_ok=True)
        groups = {}
        for row in result.rows:
            groups.setdefault((row["model"], row["param"]), []).append(row)
        for (model, param), rows in groups.items():
            path = os.path.join(out_dir, f"{model}_{format(param, 'g')}.csv")
            with open(path, "w", newline="") as fh:
                StudyResult(rows).to_csv(fh)


def parse_config(text):
    """Parse the key-value study configuration.

    Grammar, one statement per line (``#`` starts a comment)::

        n = 8192
        replications = 500
        seed = 1
        parallelism = 4
        block_sizes = 16, 32, 64
        model = armax 0.5                # theta defaults to the reference value
        model = arch 0.3 theta=0.9
        estimator = cfg sliding z        # bias-reduced unless 'raw' is given
        estimator = pml disjoint y raw
        estimator = intervals
    """
    models, estimators = [], []
    kw = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise DomainError(f"config line {lineno}: expected 'key = value'")
        key, value = key.strip().lower(), value.strip()
        try:
            if key == "model":
                parts = value.split()
                theta = None
                for extra in parts[2:]:
                    k, _, v = extra.partition("=")
                    if k != "theta":
                        raise DomainError(f"unknown model option {extra!r}")
                    theta = float(v)
                models.append((ModelSpec(parts[0], float(parts[1])), theta))
            elif key == "estimator":
                parts = value.lower().split()
                name = parts[0]
                scheme = parts[1] if len(parts) > 1 else "sliding"
                transform = parts[2] if len(parts) > 2 else "z"
                flag = parts[3] if len(parts) > 3 else "bias_reduced"
                if flag not in ("raw", "bias_reduced"):
                    raise DomainError(f"unknown estimator flag {flag!r}")
                estimators.append(EstimatorEntry(name, scheme, transform, flag != "raw"))
            elif key in ("n", "replications", "seed", "parallelism"):
                kw[{"seed": "master_seed"}.get(key, key)] = int(value)
            elif key == "block_sizes":
                kw["block_sizes"] = tuple(int(v) for v in value.replace(",", " ").split())
            else:
                raise DomainError(f"unknown key {key!r}")
        except (ValueError, IndexError) as exc:
            raise DomainError(f"config line {lineno}: {exc}") from None
    return StudyConfig(models=models, estimators=estimators, **kw)
