import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from shotnoise.errors import DomainError
from shotnoise.hyperint import EXAMPLE, ciin
from shotnoise.inversion import stationary_density
from shotnoise.saddle import density_tail, find_saddle, initial_guess, phi_and_derivatives
from shotnoise.specfun import HypergeometricLaw

NORMAL = HypergeometricLaw.named("normal")
UNIFORM = HypergeometricLaw((), ("3/2",))


@pytest.mark.parametrize("law", [EXAMPLE, NORMAL, UNIFORM])
@pytest.mark.parametrize("s", [0.4, 1.5, 3.0, 8.0])
def test_derivatives_by_finite_difference(law, s):
    x = 10.0
    h = 1e-5 * s
    p0, d1, d2 = phi_and_derivatives(x, s, law)
    pp, dp, _ = phi_and_derivatives(x, s + h, law)
    pm, dm, _ = phi_and_derivatives(x, s - h, law)
    assert (pp - pm) / (2 * h) == pytest.approx(d1, rel=1e-6, abs=1e-8)
    assert (dp - dm) / (2 * h) == pytest.approx(d2, rel=1e-6)


def test_phi_is_minus_sx_plus_ciin():
    assert phi_and_derivatives(7.0, 2.0)[0] == pytest.approx(-14.0 + ciin(2.0), rel=1e-14)


def test_example_branches_agree_at_one():
    a = phi_and_derivatives(5.0, 1.0 - 1e-12)
    b = phi_and_derivatives(5.0, 1.0 + 1e-12)
    assert np.allclose(a, b, rtol=1e-9)


def test_initial_guess_value():
    # ln(x)/2 + (3/4) ln ln x + ln(pi)/4 at x = e^2
    assert initial_guess(math.e ** 2) == pytest.approx(1.0 + 0.75 * math.log(2) + 0.25 * math.log(math.pi))
    assert initial_guess(math.e ** 2) == pytest.approx(1.80604, abs=1e-5)


@given(st.floats(3.0, 1e8))
def test_saddle_residual(x):
    r = find_saddle(x)
    assert abs(r.residual) <= 1e-11 * x
    assert r.phi2 > 0


@given(st.floats(3.0, 1e6), st.floats(1.01, 10.0))
def test_s0_increasing(x, k):
    assert find_saddle(x * k).s0 > find_saddle(x).s0


def test_s0_over_half_log_decreases():
    ratios = [find_saddle(x).s0 / (0.5 * math.log(x)) for x in (1e3, 1e6, 1e9, 1e12)]
    assert all(b < a for a, b in zip(ratios, ratios[1:]))


@pytest.mark.parametrize("law", [NORMAL, UNIFORM])
def test_general_laws(law):
    r = find_saddle(8.0, law)
    assert abs(r.residual) <= 1e-11 * 8.0 and r.s0 > 0


def test_domain():
    with pytest.raises(DomainError):
        find_saddle(2.0)
    with pytest.raises(DomainError):
        phi_and_derivatives(5.0, 0.0)


def test_tail_close_to_inversion():
    for x in (4.0, 5.0, 6.0, 7.0):
        q = density_tail(x) / stationary_density(EXAMPLE, x)
        assert abs(q - 1.0) < 0.06
    assert density_tail(-5.0) == density_tail(5.0)
