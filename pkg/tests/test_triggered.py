import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from shotnoise.errors import ConfigError, UnsupportedLawError
from shotnoise.hyperint import EXAMPLE
from shotnoise.montecarlo import SimulationConfig, sample_moment, simulate_recurrence
from shotnoise.specfun import HypergeometricLaw
from shotnoise.triggered import (
    TriggeredConfig,
    amplitude_moments,
    build_model,
    h2,
    ode_residual,
    series_coefficients,
    triggered_cdf,
    triggered_density,
    triggered_density_grid,
)


def model_cache():
    # build_model is memoized; hypothesis tests cannot take fixtures
    return build_model()


@pytest.fixture(scope="module")
def model():
    return model_cache()


def test_moments_exact():
    K = amplitude_moments(EXAMPLE, 3)
    assert K[:5] == [1, 0, Fraction(3, 2), 0, Fraction(35, 8)]
    assert all(isinstance(v, Fraction) for v in K)


def test_series_coefficients():
    c = series_coefficients(amplitude_moments(EXAMPLE, 4), 4)
    assert c[0] == 1 and c[1] == 0 and c[3] == 0
    assert c[2] == Fraction(-3, 32) and c[4] == Fraction(97, 9216)


@pytest.mark.parametrize("N", [6, 10, 14])
def test_truncation_residual(N):
    c = series_coefficients(amplitude_moments(EXAMPLE, N), N)
    r, _ = ode_residual(EXAMPLE, c, 0.1)
    assert abs(r) <= 10 * abs(float(c[2 * N])) * 0.1 ** (2 * N)


def test_seams_continuous(model):
    for s in (model.config.s_lo, model.match_window[1]):
        a, b = h2(model, [s * (1 - 1e-12), s * (1 + 1e-12)])
        assert a == pytest.approx(b, rel=1e-8)


def test_matching_stable(model):
    other = build_model(EXAMPLE, TriggeredConfig(match_window=(300.0, 600.0)))
    assert other.C1 == pytest.approx(model.C1, rel=1e-6)
    assert model.condition < 1e8 and model.fit_residual < 1e-5


@given(st.floats(0.0, 1000.0))
def test_h_even_and_bounded(s):
    a, b = h2(model_cache(), [s, -s])
    assert a == b and 0 < a <= 1.0 + 1e-12


@given(st.floats(0.01, 6.0))
def test_density_even(x):
    m = model_cache()
    a, b = triggered_density(m, np.array([x, -x]))
    assert a == b and a > 0


def test_cdf(model):
    assert triggered_cdf(model, 0.0) == pytest.approx(0.5, abs=1e-14)
    xs = np.linspace(-8, 8, 161)
    F = triggered_cdf(model, xs)
    assert np.all(np.diff(F) >= -1e-10)
    h = 1e-4
    x = np.array([0.5, 2.0])
    d = (triggered_cdf(model, x + h) - triggered_cdf(model, x - h)) / (2 * h)
    assert np.allclose(d, triggered_density(model, x), rtol=1e-5)


def test_second_moment_matches_monte_carlo(model):
    # E W^2 = -2 c2 = 3/16
    w = simulate_recurrence(SimulationConfig(n_samples=200_000, seed=11, l=2))
    m2 = sample_moment(w, 2)
    assert m2.within(-2 * float(model.c[2]), 4.0)
    m4 = sample_moment(w, 4)
    assert m4.within(24 * float(model.c[4]), 4.0)


def test_grid(model):
    g = triggered_density_grid(model, np.linspace(-6, 6, 301))
    assert g.singular == [0.0]
    assert g.integral() == pytest.approx(1.0, abs=1e-2)
    assert "model" in g.meta and g.meta["model"]["c"][2] == "-3/32"


def test_config_and_law_errors():
    with pytest.raises(ConfigError):
        TriggeredConfig(s_lo=300.0)
    with pytest.raises(ConfigError):
        TriggeredConfig(T=500.0)
    with pytest.raises(ConfigError):
        TriggeredConfig(N=3)
    with pytest.raises(UnsupportedLawError):
        build_model(HypergeometricLaw.named("normal"))
