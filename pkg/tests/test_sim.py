import io
import math

import numpy as np
import pytest
from scipy import stats

from eilab.exceptions import DomainError
from eilab.sim import (
    ModelKind,
    ModelSpec,
    TimeSeries,
    armax_block_cdf,
    read_series,
    reference_theta,
    sim_arch,
    sim_armax,
    sim_markov_clayton,
    sim_sqarch,
    simulate,
    write_series,
)


@pytest.mark.parametrize("kind,param", [
    ("armax", -0.1), ("armax", 1.0), ("arch", 0.0), ("arch", 1.0),
    ("sqarch", 1.5), ("markov_clayton", 0.0), ("markov_clayton", math.inf),
])
def test_model_spec_domain(kind, param):
    with pytest.raises(DomainError):
        ModelSpec(kind, param)


def test_model_spec_coerces():
    m = ModelSpec("armax", 0)
    assert m.kind is ModelKind.ARMAX and m.param == 0.0
    assert m.label == "armax(0)"


def test_time_series_is_read_only_and_validated():
    ts = TimeSeries([1.0, 2.0])
    with pytest.raises(ValueError):
        ts.values[0] = 5.0
    with pytest.raises(DomainError):
        TimeSeries([])
    with pytest.raises(DomainError):
        TimeSeries([1.0, np.nan])


@pytest.mark.parametrize("kind,param", [
    ("armax", 0.5), ("arch", 0.5), ("sqarch", 0.5), ("markov_clayton", 1.0),
])
def test_simulators_deterministic(kind, param):
    m = ModelSpec(kind, param)
    a = simulate(m, 200, 11).values
    b = simulate(m, 200, 11).values
    c = simulate(m, 200, 12).values
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)
    assert a.shape == (200,)


def test_seed_sequence_accepted():
    ss = np.random.SeedSequence([1, 2, 3])
    a = sim_armax(50, 0.3, ss).values
    b = sim_armax(50, 0.3, np.random.SeedSequence([1, 2, 3])).values
    assert np.array_equal(a, b)


def test_armax_marginal_is_frechet():
    x = sim_armax(20000, 0.5, 3).values
    res = stats.kstest(x[::10], lambda v: np.exp(-1.0 / v))
    assert res.pvalue > 0.001


def test_armax_recursion():
    alpha = 0.7
    x = sim_armax(500, alpha, 5).values
    assert np.all(x[1:] >= alpha * x[:-1] - 1e-15)
    # the recursion holds with equality wherever the innovation loses
    assert np.mean(np.isclose(x[1:], alpha * x[:-1], rtol=1e-15)) > 0.5


def test_armax_alpha_zero_is_iid_frechet():
    x = sim_armax(5000, 0.0, 2).values
    assert abs(stats.spearmanr(x[:-1], x[1:])[0]) < 0.05


def test_sqarch_is_squared_arch():
    # both consume the same normals, so sqARCH(lam) = ARCH(lam)^2 path by path
    a = sim_arch(2000, 0.6, 9).values
    s = sim_sqarch(2000, 0.6, 9).values
    assert np.allclose(s, a * a, rtol=1e-9, atol=0)


def test_arch_symmetric_heavy_tailed():
    x = sim_arch(40000, 0.7, 1).values
    assert abs(np.mean(x > 0) - 0.5) < 0.02
    assert stats.kurtosis(x) > 1.0


def test_markov_clayton_uniform_margins():
    u = sim_markov_clayton(20000, 1.0, 4).values
    assert np.all((u > 0) & (u < 1))
    assert stats.kstest(u[::10], "uniform").pvalue > 0.001


@pytest.mark.parametrize("vt", [0.41, 1.06, 1.9])
def test_markov_clayton_lag_one_kendall_tau(vt):
    # the survival Clayton copula has Kendall's tau = vt / (vt + 2)
    u = sim_markov_clayton(20000, vt, 8).values
    tau = stats.kendalltau(u[:-1], u[1:])[0]
    assert tau == pytest.approx(vt / (vt + 2.0), abs=0.02)


def test_markov_clayton_upper_tail_dependence():
    # survival Clayton: upper tail dependence 2^(-1/vt)
    vt = 1.9
    u = sim_markov_clayton(200000, vt, 2).values
    q = 0.01
    hit = u[:-1] > 1 - q
    cond = np.mean(u[1:][hit] > 1 - q)
    assert cond == pytest.approx(2 ** (-1 / vt), abs=0.08)


def test_bad_n():
    with pytest.raises(DomainError):
        sim_armax(0, 0.5, 1)
    with pytest.raises(DomainError):
        sim_armax(2.5, 0.5, 1)


def test_write_read_round_trip_exact():
    ts = simulate(ModelSpec("arch", 0.5), 50, 3)
    buf = io.StringIO()
    write_series(ts, buf)
    back = read_series(buf.getvalue())
    assert np.array_equal(back.values, ts.values)
    assert back.model == ts.model
    assert back.seed == 3


def test_read_series_skips_comments_and_blank_lines():
    ts = read_series("# hello\n\n1.5\n2.5, extra\n# tail\n3\n")
    assert ts.values.tolist() == [1.5, 2.5, 3.0]
    assert ts.model is None
    with pytest.raises(DomainError):
        read_series("1\nabc\n")


def test_reference_theta():
    assert reference_theta(ModelSpec("armax", 0.25)) == 0.75
    assert reference_theta(ModelSpec("sqarch", 0.99)) == 0.422
    assert reference_theta(ModelSpec("markov_clayton", 1.9)) == 0.2
    assert reference_theta(ModelSpec("arch", 0.33)) is None


def test_armax_block_cdf_edges_and_closed_form():
    b, th = 32, 0.5
    assert armax_block_cdf(0.0, b, th) == 0.0
    assert armax_block_cdf(b, b, th) == 1.0
    assert armax_block_cdf(2 * b, b, th) == 1.0
    x = np.array([0.5, 1.0, 3.0])
    expected = 1.0 - (1.0 - x / b) ** (1.0 + th * (b - 1))
    assert np.allclose(armax_block_cdf(x, b, th), expected, rtol=1e-15)
    # large b approaches the Exp(theta) law
    assert armax_block_cdf(1.0, 10 ** 7, th) == pytest.approx(1 - math.exp(-th), abs=1e-6)


def test_armax_block_cdf_validation():
    with pytest.raises(DomainError):
        armax_block_cdf(1.0, 0, 0.5)
    with pytest.raises(DomainError):
        armax_block_cdf(1.0, 4, 0.0)
