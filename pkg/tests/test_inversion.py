import json
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from shotnoise.errors import ConfigError
from shotnoise.hyperint import EXAMPLE
from shotnoise.inversion import (
    DensityGrid,
    SplitConfig,
    cdf_interpolant,
    density_grid,
    normalization_constant,
    refined_grid,
    stationary_cdf,
    stationary_density,
    stationary_density_with_error,
)
from shotnoise.specfun import EULER_GAMMA, HypergeometricLaw


# -- DensityGrid.integral on functions with known integrals -----------------

def _grid(fn, n=301):
    x = np.linspace(-1.0, 1.0, n)
    with np.errstate(divide="ignore"):
        return DensityGrid(x, np.where(x == 0, np.inf, fn(np.abs(x))), "closed-form")


@pytest.mark.parametrize("fn, exact", [
    (lambda a: 1.0 - np.log(a), 4.0),
    (lambda a: np.log(a) ** 2, 4.0),
    (lambda a: np.log(a) ** 2 - 3 * np.log(a) + a, 1.0 + 4.0 + 6.0),
])
def test_integral_log_singularities(fn, exact):
    # what remains is the ordinary O(h^2) trapezoid error of the regular ends
    e1 = abs(_grid(fn, 301).integral() - exact)
    e2 = abs(_grid(fn, 601).integral() - exact)
    assert e1 < (2.0 / 300) ** 2
    assert e2 < e1 / 3.5 or e2 < 1e-10


def test_integral_regular():
    x = np.linspace(-8, 8, 401)
    g = DensityGrid(x, np.exp(-x * x / 2) / math.sqrt(2 * math.pi), "closed-form")
    assert g.integral() == pytest.approx(1.0, abs=1e-10)
    assert g.singular == [] and not g.negative_flag


# -- stationary density ------------------------------------------------------

def test_normalization_constant():
    assert normalization_constant(EXAMPLE) == pytest.approx(2 * math.exp(-EULER_GAMMA), rel=1e-14)


@pytest.fixture(scope="module")
def grid():
    return density_grid(EXAMPLE, np.linspace(-6.0, 6.0, 301))


def test_density_grid(grid):
    assert grid.singular == [0.0]
    assert not grid.negative_flag
    assert grid.integral() == pytest.approx(1.0, abs=5e-3)
    fin = np.isfinite(grid.f)
    assert np.allclose(grid.f[fin], grid.f[fin][::-1], atol=1e-13)


@given(st.floats(0.05, 8.0))
def test_density_even_and_positive(x):
    a, b = stationary_density(EXAMPLE, np.array([x, -x]))
    assert a == b and a > 0


def test_density_is_cdf_derivative():
    x = np.array([0.3, 1.0, 2.5, 4.0])
    h = 1e-4
    d = (stationary_cdf(EXAMPLE, x + h) - stationary_cdf(EXAMPLE, x - h)) / (2 * h)
    assert np.allclose(d, stationary_density(EXAMPLE, x), rtol=1e-6)


def test_cdf_limits_and_monotone():
    xs = np.linspace(-10, 10, 201)
    F = stationary_cdf(EXAMPLE, xs)
    assert stationary_cdf(EXAMPLE, 0.0) == pytest.approx(0.5, abs=1e-14)
    assert np.all(np.diff(F) >= -1e-12)
    assert F[0] == pytest.approx(0.0, abs=1e-6) and F[-1] == pytest.approx(1.0, abs=1e-6)


def test_independent_of_split_choice():
    x = np.array([0.5, 1.5, 3.0, 5.0])
    a = stationary_density(EXAMPLE, x)
    b = stationary_density(EXAMPLE, x, scheme=SplitConfig(x1=12.0, x2=50.0, h=0.2))
    assert np.allclose(a, b, rtol=1e-8)


def test_error_estimate_is_small():
    _, err = stationary_density_with_error(EXAMPLE, np.array([1.0, 3.0]))
    assert np.all(err < 1e-8)


@pytest.mark.parametrize("kw, field", [
    (dict(x1=10.0, x2=5.0), "x1"),
    (dict(h=2.0), "h"),
    (dict(x1=10.1), "multiples of h"),
    (dict(order=2), "order"),
])
def test_split_config_errors_name_field(kw, field):
    with pytest.raises(ConfigError, match=field):
        SplitConfig(**kw)


def test_other_registered_law():
    # +-2 amplitude: density integrates to one as well
    law = HypergeometricLaw.named("bernoulli")
    g = density_grid(law, np.linspace(-8.0, 8.0, 401))
    assert g.integral() == pytest.approx(1.0, abs=1e-2)


# -- helpers -------------------------------------------------------------------

def test_refined_grid():
    xs = refined_grid(-1.0, 2.0, 101)
    assert 0.0 in xs and np.all(np.diff(xs) > 0)
    assert xs[0] == -1.0 and xs[-1] == 2.0
    assert np.min(np.abs(xs[xs != 0])) <= 1e-9 * 1.0001


def test_cdf_interpolant_is_clipped_and_monotone():
    cdf = cdf_interpolant(np.array([0.0, 1.0, 2.0]), np.array([-0.01, 0.6, 0.55]))
    v = cdf(np.array([-1.0, 0.0, 1.5, 3.0]))
    assert v[0] == 0.0 and v[-1] == 1.0 and np.all(np.diff(v) >= 0)


def test_serialization(grid, tmp_path):
    text = grid.to_csv(tmp_path / "g.csv")
    assert text.splitlines()[0] == "x,f,method,err"
    assert "inf" in text
    doc = json.loads(grid.to_json(tmp_path / "g.json", config={"k": 1}))
    assert doc["singular"] == [0.0] and doc["config"] == {"k": 1}
    assert len(doc["x"]) == 301
