import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import special

from shotnoise.errors import DomainError, PoleError
from shotnoise.specfun import (
    CATALAN,
    LAW_REGISTRY,
    HypergeometricLaw,
    bernoulli_numbers,
    bessel_i,
    bessel_ie,
    bessel_j,
    clausen2,
    cosine_integral,
    digamma,
    elliptic_k,
    elliptic_k_complement,
    expint_e,
    pfq,
    pfq_series,
    pochhammer,
    polygamma,
)

EXAMPLE = HypergeometricLaw.named("example")
pos = st.floats(0.05, 30.0)


# -- Pochhammer -------------------------------------------------------------

def test_pochhammer_exact():
    assert pochhammer(Fraction(1, 4), 3) == Fraction(1, 4) * Fraction(5, 4) * Fraction(9, 4)
    assert pochhammer(Fraction(1, 2), 0) == 1
    assert pochhammer(Fraction(1, 2), -1) == Fraction(-2)


@given(pos, st.integers(0, 30))
def test_pochhammer_recurrence(x, k):
    assert pochhammer(x, k + 1) == pytest.approx(pochhammer(x, k) * (x + k), rel=1e-12)


@given(pos, st.integers(1, 20))
def test_pochhammer_negative_inverts(x, k):
    if abs(x - round(x)) < 1e-9 and round(x) <= k:
        return
    assert pochhammer(x, -k) * pochhammer(x - k, k) == pytest.approx(1.0, rel=1e-10)


@given(st.floats(0.1, 5.0), st.integers(65, 120))
def test_pochhammer_large_k_matches_gamma(x, k):
    ref = float(mpmath.rf(x, k))
    assert pochhammer(x, k) == pytest.approx(ref, rel=1e-10)


def test_pochhammer_pole():
    with pytest.raises(PoleError):
        pochhammer(2.0, -2)


# -- polygamma --------------------------------------------------------------

@given(st.integers(0, 4), st.floats(0.01, 50.0))
def test_polygamma_against_mpmath(k, x):
    assert polygamma(k, x) == pytest.approx(float(mpmath.psi(k, x)), rel=1e-12, abs=1e-14)


def test_digamma_and_domain():
    assert digamma(1.0) == pytest.approx(-0.5772156649015329, rel=1e-15)
    with pytest.raises(DomainError):
        polygamma(1, -1.0)


def test_bernoulli_numbers():
    B = bernoulli_numbers(12)
    assert B[2] == Fraction(1, 6) and B[4] == Fraction(-1, 30) and B[12] == Fraction(-691, 2730)


# -- pFq and the law registry ----------------------------------------------

@given(st.floats(0.0, 10.0))
def test_product_identity(x):
    assert pfq(EXAMPLE, -x * x) == pytest.approx(math.cos(x) * special.j0(x), abs=1e-11)


@pytest.mark.parametrize("name, fn", [
    ("bernoulli", lambda s: np.cos(2 * s)),
    ("arcsine", lambda s: special.j0(2 * s)),
    ("normal", lambda s: np.exp(-s * s)),
    ("example", lambda s: np.cos(s) * special.j0(s)),
])
def test_registry_charfn(name, fn):
    law = HypergeometricLaw.named(name)
    s = np.linspace(0.0, 8.0, 33)
    direct = np.array([pfq(law, -v * v) for v in s])
    assert np.allclose(direct, fn(s), atol=1e-10)
    assert np.allclose(law.charfn(s), fn(s), atol=1e-12)


@pytest.mark.parametrize("z", [-50.0, -400.0, -1600.0])
def test_pfq_cancellation_handled(z):
    law = HypergeometricLaw((), ("1/2",)).shifted(10)
    ref = float(mpmath.hyp0f1(0.5 - 10, z))
    assert pfq(law, z) == pytest.approx(ref, rel=1e-10)


def test_pfq_series_flags_cancellation():
    assert pfq_series(EXAMPLE, -400.0).flagged
    assert not pfq_series(EXAMPLE, -1.0).flagged


def test_law_moments():
    K = EXAMPLE.moments(3)
    assert K[1] == Fraction(3, 2) and K[2] == Fraction(35, 8)


def test_law_validation():
    with pytest.raises(DomainError):
        HypergeometricLaw((-1.0,), (1.0,))
    with pytest.raises(DomainError):
        HypergeometricLaw((1.0, 2.0), (1.0,))
    with pytest.raises(DomainError):
        HypergeometricLaw.named("nope")
    assert set(LAW_REGISTRY) >= {"example", "bernoulli", "arcsine", "normal"}


# -- elementary special functions ------------------------------------------

@given(st.floats(0.0, 80.0))
def test_bessel_j(x):
    assert bessel_j(0, x) == pytest.approx(special.j0(x), abs=1e-12)
    assert bessel_j(1, x) == pytest.approx(special.j1(x), abs=1e-12)


@given(st.floats(20.0, 1e4))
def test_bessel_j0_leading_hankel_term(x):
    lead = math.sqrt(2.0 / (math.pi * x)) * math.cos(x - math.pi / 4)
    assert abs(bessel_j(0, x) - lead) <= 0.4 * x ** -1.5


def test_bessel_values():
    assert bessel_j(0, 0.0) == 1.0 and bessel_j(1, 0.0) == 0.0
    assert pfq(HypergeometricLaw((), (1,)), -1.0) == pytest.approx(0.2238907791, abs=1e-10)


@given(st.floats(0.0, 500.0))
def test_bessel_ie(x):
    assert bessel_ie(0, x) == pytest.approx(special.i0e(x), rel=1e-13)
    assert bessel_ie(1, x) == pytest.approx(special.i1e(x), rel=1e-13, abs=1e-300)


def test_bessel_i():
    assert bessel_i(0, 3.0) == pytest.approx(special.i0(3.0), rel=1e-14)


@given(st.floats(1e-6, 200.0))
def test_cosine_integral(x):
    assert cosine_integral(x) == pytest.approx(special.sici(x)[1], rel=1e-12, abs=1e-15)


@given(st.floats(-20.0, 20.0))
def test_clausen_against_mpmath(t):
    assert clausen2(t) == pytest.approx(float(mpmath.clsin(2, t)), abs=1e-13)


def test_clausen_catalan():
    assert clausen2(math.pi / 2) == pytest.approx(CATALAN, rel=1e-14)


@given(st.floats(0.0, 0.999999))
def test_elliptic_k(m):
    assert elliptic_k(m) == pytest.approx(special.ellipk(m), rel=1e-13)


@given(st.floats(1e-300, 1.0))
def test_elliptic_k_complement(mc):
    assert elliptic_k_complement(mc) == pytest.approx(special.ellipkm1(mc), rel=1e-13)


def test_elliptic_k_singular():
    with pytest.raises(DomainError):
        elliptic_k(1.0)


@pytest.mark.parametrize("nu", [1.0, 1.5, 2.5, 4.0])
@pytest.mark.parametrize("z", [0.3, 1.0 + 2.0j, 5.0j, 12.0 + 0.5j])
def test_expint(nu, z):
    ref = complex(mpmath.expint(nu, z))
    assert abs(expint_e(nu, z) - ref) <= 1e-12 * max(1.0, abs(ref))
