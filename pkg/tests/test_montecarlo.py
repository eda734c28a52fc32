import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import stats

from shotnoise.errors import ConfigError
from shotnoise.montecarlo import (
    EXAMPLE_AMPLITUDE,
    AmplitudeLaw,
    SimulationConfig,
    chi2_test,
    histogram,
    ks_distance,
    ks_two_sample,
    registry_amplitude,
    sample_amplitude,
    sample_moment,
    simulate_recurrence,
    simulate_shot_noise,
)


def cfg(**kw):
    base = dict(n_samples=100_000, seed=5)
    base.update(kw)
    return SimulationConfig(**base)


def test_deterministic_for_seed():
    a = simulate_recurrence(cfg())
    b = simulate_recurrence(cfg())
    c = simulate_recurrence(cfg(seed=6))
    assert np.array_equal(a, b) and not np.array_equal(a, c)


def test_independent_of_thread_count(monkeypatch):
    monkeypatch.setenv("SHOTNOISE_THREADS", "1")
    a = simulate_recurrence(cfg(n_samples=200_000))
    monkeypatch.setenv("SHOTNOISE_THREADS", "4")
    b = simulate_recurrence(cfg(n_samples=200_000))
    assert np.array_equal(a, b)


def test_samplers_use_distinct_streams():
    a = simulate_recurrence(cfg())
    b = simulate_shot_noise(cfg(), 20.0)
    assert not np.array_equal(a, b)


@pytest.mark.parametrize("l", [1, 2, 3])
def test_second_moment(l):
    # W = V (W + X) with E V^2 = 3^-l gives E W^2 = K2 3^-l / (1 - 3^-l)
    a = 3.0 ** -l
    w = simulate_recurrence(cfg(l=l, n_samples=200_000))
    assert sample_moment(w, 2).within(1.5 * a / (1 - a), 4.0)


def test_amplitude_moments_and_parity():
    rng = np.random.default_rng(1)
    x = EXAMPLE_AMPLITUDE.sample(rng, 400_000)
    assert sample_moment(x, 2).within(1.5, 4.0)
    assert abs(stats.skew(x)) < 0.02
    g = AmplitudeLaw("gamma", (4.0,)).sample(rng, 400_000)
    assert stats.skew(g) == pytest.approx(1.0, abs=0.03)
    assert isinstance(sample_amplitude(EXAMPLE_AMPLITUDE, rng), float)


@pytest.mark.parametrize("name", ["example", "bernoulli", "arcsine", "normal"])
def test_sampler_matches_registry_charfn(name):
    amp = registry_amplitude(name)
    law = amp.hypergeometric()
    x = amp.sample(np.random.default_rng(3), 400_000)
    s = np.array([0.3, 0.8, 1.7])
    emp = np.cos(np.outer(s, x)).mean(axis=1)
    assert np.allclose(emp, law.charfn(s), atol=6 / math.sqrt(x.size))


def test_parse():
    a = AmplitudeLaw.parse("gamma(2)")
    assert a.tag == "gamma" and a.params == (2.0,) and a.scale == 1.0
    b = AmplitudeLaw.parse("bernoulli*2")
    assert b.scale == 2.0 and b.hypergeometric().name == "bernoulli"
    assert AmplitudeLaw.parse("beta(1,3)").params == (1.0, 3.0)


@pytest.mark.parametrize("kw, field", [
    (dict(l=0), "l"),
    (dict(n_samples=10), "n_samples"),
    (dict(burn_in=3), "burn_in"),
    (dict(seed=-1), "seed"),
    (dict(poisson_rate=0.0), "poisson_rate"),
])
def test_config_errors_name_field(kw, field):
    with pytest.raises(ConfigError, match=f"^{field}:"):
        cfg(**kw)


@pytest.mark.parametrize("args, field", [
    (("nope",), "tag"),
    (("gamma", ()), "params"),
    (("gamma", (-1.0,)), "params"),
    (("beta", (2.0, 1.0)), "params"),
    (("normal", (), -1.0), "scale"),
])
def test_amplitude_errors_name_field(args, field):
    with pytest.raises(ConfigError, match=f"^{field}:"):
        AmplitudeLaw(*args)


def test_shot_noise_horizon():
    with pytest.raises(ConfigError):
        simulate_shot_noise(cfg(), 10.0)


def test_recurrence_and_shot_noise_agree():
    a = simulate_recurrence(cfg(n_samples=200_000))
    b = simulate_shot_noise(cfg(n_samples=200_000), 25.0)
    assert ks_two_sample(a, b) < 1.63 * math.sqrt(2 / 200_000) * 1.5


# -- statistics ------------------------------------------------------------

@given(st.integers(0, 2 ** 32 - 1))
def test_ks_matches_scipy(seed):
    x = np.random.default_rng(seed).random(500)
    assert ks_distance(x, lambda v: np.clip(v, 0, 1)) == pytest.approx(
        stats.kstest(x, "uniform").statistic, abs=1e-14)


def test_ks_null_calibration():
    # under the null, sqrt(n) D exceeds the 1% Kolmogorov quantile about 1% of the time
    rng = np.random.default_rng(7)
    n = 2000
    crit = stats.kstwobign.ppf(0.99) / math.sqrt(n)
    hits = sum(ks_distance(rng.random(n), lambda v: v) > crit for _ in range(400))
    assert hits <= 12


def test_chi2():
    rng = np.random.default_rng(2)
    x = rng.random(100_000)
    edges = np.linspace(0, 1, 51)
    assert chi2_test(x, edges, np.full(50, 0.02)).passed
    assert not chi2_test(x ** 1.05, edges, np.full(50, 0.02)).passed


def test_chi2_pools_sparse_bins():
    x = np.random.default_rng(3).random(1000)
    edges = np.linspace(0, 1, 101)
    r = chi2_test(x, edges, np.full(100, 0.01), min_expected=20)
    assert r.bins_used == 1 or r.meta["pooled_remainder"]


def test_histogram():
    x = np.random.default_rng(4).standard_normal(50_000)
    h = histogram(x, bins=40, range=(-2.0, 2.0))
    inside = np.mean(np.abs(x) < 2.0)
    assert np.sum(h.f) * 0.1 == pytest.approx(inside, rel=1e-12)
    assert h.method == "monte-carlo" and np.all(h.stderr >= 0)
    assert h.meta["empty_bins"] == []
