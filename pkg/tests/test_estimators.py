import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from eilab.blocks import pseudo_sample
from eilab.estimators import (
    EULER_GAMMA,
    EstimatorSpec,
    Method,
    estimate,
    estimate_cfg,
    estimate_mad,
    estimate_pipeline,
    estimate_root,
    parse_spec,
)
from eilab.exceptions import DegenerateSampleError, DomainError

positive = arrays(np.float64, st.integers(1, 50), elements=st.floats(1e-3, 1e3))


def exp_quantiles(theta, m=20001):
    # deterministic sample whose empirical law is close to Exp(theta)
    u = (np.arange(m) + 0.5) / m
    return -np.log1p(-u) / theta


@pytest.mark.parametrize("theta", [0.2, 0.5, 1.0])
def test_estimators_recover_theta_on_exponential_quantiles(theta):
    xi = exp_quantiles(theta)
    assert estimate_cfg(xi) == pytest.approx(theta, rel=2e-3)
    assert estimate_mad(xi) == pytest.approx(theta, rel=1e-4)
    for p in (0.5, 1.0, 2.0, 8.0):
        assert estimate_root(xi, p) == pytest.approx(theta, rel=2e-3)


def test_closed_forms_on_small_samples():
    xi = np.array([0.5, 2.0])
    assert estimate_cfg(xi) == pytest.approx(math.exp(-EULER_GAMMA), rel=1e-15)
    m = (math.exp(-0.5) + math.exp(-2.0)) / 2
    assert estimate_mad(xi) == pytest.approx(m / (1 - m), rel=1e-15)
    assert estimate_root(xi, 1.0) == pytest.approx(1 / 1.25, rel=1e-15)
    root2 = (math.sqrt(math.pi) / 2) ** 2 / ((math.sqrt(0.5) + math.sqrt(2.0)) / 2) ** 2
    assert estimate_root(xi, 2.0) == pytest.approx(root2, rel=1e-14)


@given(positive, st.floats(0.1, 10.0))
def test_scale_equivariance_cfg_and_root(xi, c):
    assert estimate_cfg(c * xi) == pytest.approx(estimate_cfg(xi) / c, rel=1e-12)
    for p in (0.5, 1.0, 3.0):
        assert estimate_root(c * xi, p) == pytest.approx(estimate_root(xi, p) / c, rel=1e-11)


@settings(max_examples=50)
@given(arrays(np.float64, st.integers(1, 50), elements=st.floats(1e-3, 30.0)),
       st.floats(1e-4, 1e-2))
def test_mad_increasing_in_mean_of_exp(xi, eps):
    # shrinking every xi raises mean(exp(-xi)) and hence the estimate
    assert estimate_mad(xi * (1 - eps)) > estimate_mad(xi)


@settings(max_examples=50)
@given(positive, st.floats(1e-4, 1e-2), st.sampled_from([0.5, 1.0, 4.0]))
def test_root_decreasing_in_root_mean(xi, eps, p):
    assert estimate_root(xi * (1 + eps), p) < estimate_root(xi, p)


def test_root_tends_to_cfg():
    rng = np.random.default_rng(1)
    xi = rng.exponential(1 / 0.6, 300)
    diffs = [abs(estimate_root(xi, p) - estimate_cfg(xi)) for p in (10, 100, 1e3, 1e4)]
    assert diffs == sorted(diffs, reverse=True)
    assert diffs[-1] < 1e-3


def test_root_log_space_handles_extreme_values():
    xi = np.array([1e-200, 1e200])
    assert math.isfinite(estimate_root(xi, 0.01)) or estimate_root(xi, 0.01) == 0.0
    assert math.isfinite(estimate_root(np.array([1e300, 1e300]), 0.5))


def test_clip():
    xi = np.full(5, 0.1)
    assert estimate_root(xi, 1.0) == pytest.approx(10.0)
    assert estimate_root(xi, 1.0, clip=True) == 1.0
    assert estimate(xi, EstimatorSpec("cfg", clip=True)) == 1.0


def test_domain_errors():
    with pytest.raises(DomainError):
        estimate_cfg(np.array([0.0, 1.0]))
    with pytest.raises(DomainError):
        estimate_root(np.array([1.0]), 0.0)
    with pytest.raises(DomainError):
        estimate_mad(np.array([-1.0]))
    with pytest.raises(DomainError):
        estimate_cfg(np.array([]))
    with pytest.raises(DomainError):
        estimate_cfg(np.array([np.nan]))
    with pytest.raises(DegenerateSampleError):
        estimate_mad(np.zeros(3))


@pytest.mark.parametrize("text,kind,p,label", [
    ("cfg", Method.CFG, None, "cfg"),
    ("MAD", Method.MAD, None, "mad"),
    ("pml", Method.ROOT, 1.0, "pml"),
    ("root:1", Method.ROOT, 1.0, "pml"),
    ("root:2.5", Method.ROOT, 2.5, "root:2.5"),
])
def test_parse_spec(text, kind, p, label):
    spec = parse_spec(text)
    assert spec.kind is kind and spec.p == p and spec.label == label


@pytest.mark.parametrize("text", ["root", "root:x", "root:-1", "root:0", "mle", ""])
def test_parse_spec_rejects(text):
    with pytest.raises(DomainError):
        parse_spec(text)


def test_leave_one_block_scaling_exact():
    # bias reduction multiplies every Z by (n+1)/(n-b+1); CFG and ROOT scale inversely
    x = np.random.default_rng(7).standard_normal(4096)
    n, b = 4096, 64
    for scheme in ("disjoint", "sliding"):
        raw = pseudo_sample(x, scheme, "z", False, block_size=b)
        red = pseudo_sample(x, scheme, "z", True, block_size=b)
        for spec in ("cfg", "pml", "root:0.5", "root:3"):
            assert estimate(red, spec) == pytest.approx(
                estimate(raw, spec) * (n - b + 1) / (n + 1), rel=1e-13)


def test_pipeline_equals_manual():
    x = np.random.default_rng(8).standard_normal(2000)
    ps = pseudo_sample(x, "sliding", "y", True, block_size=40)
    assert estimate_pipeline(x, "sliding", "y", True, "mad", block_size=40) == estimate(ps, "mad")
