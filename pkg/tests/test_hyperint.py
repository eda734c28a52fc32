import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.special import sici

from shotnoise.acceptance import cji_direct_quadrature
from shotnoise.errors import (
    CancellationError,
    DomainError,
    IntegerParameterError,
    OverflowGuardError,
    UnsupportedLawError,
    ValidityError,
)
from shotnoise.hyperint import (
    EXAMPLE,
    asympt_forms,
    cii_family,
    ciin,
    cji,
    cji_ci_representation,
    cji_family,
    cjin,
    hyp_integral,
    integration_constants,
    iterated_cosine_integral,
    iterated_expansion,
    ji2_asymptotic,
    lemma1_integral,
    log_ciin,
    ti_asymptotic,
    ti_iter,
    tin_iter,
)
from shotnoise.specfun import EULER_GAMMA, HypergeometricLaw, bessel_i0

ARCSINE = HypergeometricLaw.named("arcsine")
BERNOULLI = HypergeometricLaw.named("bernoulli")


def test_integration_constants_example():
    m = integration_constants(EXAMPLE).m
    assert m[0] == pytest.approx(math.log(2) - EULER_GAMMA, abs=1e-14)
    assert m[1] == pytest.approx(math.pi ** 2 / 8, abs=1e-13)
    assert m[2] == pytest.approx(5 * float(mpmath.zeta(3)) / 3, abs=1e-13)


@pytest.mark.parametrize("n", [1, 2])
def test_lemma_quadrature_matches_constants(n):
    E = integration_constants(EXAMPLE).E
    assert lemma1_integral(EXAMPLE, n) == pytest.approx(-E[n], abs=1e-8)


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("x", [0.3, 1.7, 6.0, 15.0])
def test_derivative_relation(n, x):
    h = 1e-5 * x
    d = (cji_family(n, x + h) - cji_family(n, x - h)) / (2 * h)
    assert d == pytest.approx(-cji_family(n - 1, x) / x, rel=1e-7, abs=1e-10)


@pytest.mark.parametrize("x", [0.5, 2.0, 10.0])
def test_cji_three_representations(x):
    a = cji_family(1, x)
    assert cji_ci_representation(x) == pytest.approx(a, abs=1e-9)
    assert cji_direct_quadrature(x) == pytest.approx(a, abs=1e-9)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_series_meets_expansion(n):
    for x in (20.0, 25.0, 30.0):
        assert cji_family(n, x) == pytest.approx(float(iterated_expansion(EXAMPLE, n)(x)), abs=1e-9)
    assert cji(n, 19.0) == cji_family(n, 19.0)


@given(st.floats(1e-4, 0.05))
def test_cjin_small_x(x):
    # 1 - cos x J0 x = (K2/2) x^2 + O(x^4) with K2 = 3/2
    assert cjin(x) == pytest.approx(3 * x * x / 8, rel=1e-2)


@given(st.floats(0.05, 20.0))
def test_factor_two_convention(x):
    assert ti_iter(EXAMPLE, 1, x) == pytest.approx(2 * hyp_integral(EXAMPLE, 1, x), rel=1e-11, abs=1e-12)
    assert tin_iter(EXAMPLE, 1, x) == pytest.approx(2 * cjin(x), rel=1e-11, abs=1e-14)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_tin_iter_leading_term(n):
    # (a)_1/(b)_1 = 3/4; the k = 2 term is O(x^4)
    x = 0.1
    assert tin_iter(EXAMPLE, n, x) == pytest.approx(0.75 * x * x, abs=x ** 4)


def test_series_guards():
    with pytest.raises(CancellationError):
        tin_iter(EXAMPLE, 1, 45.0)
    with pytest.raises(OverflowGuardError):
        ciin(80.0)
    with pytest.raises(DomainError):
        cji_family(4, 1.0)


@pytest.mark.parametrize("b", ["1/2", "3/2", "5/2"])
@pytest.mark.parametrize("x", [4.0, 10.0, 25.0])
def test_ti_asymptotic_bound_holds(b, x):
    law = HypergeometricLaw((), (b,))
    r = ti_asymptotic(law, x, kmax=10)
    bb = float(law.b[0])
    ref = float(2 * mpmath.quadosc(lambda t: mpmath.hyp0f1(bb, -t * t) / t, [x, mpmath.inf], omega=2))
    assert abs(r.value - ref) <= r.bound


def test_ti_asymptotic_bernoulli_is_cosine_integral():
    r = ti_asymptotic(BERNOULLI, 20.0)
    assert r.value == pytest.approx(-2 * sici(40.0)[1], abs=r.bound)


def test_ti_asymptotic_rejections():
    with pytest.raises(IntegerParameterError):
        ti_asymptotic(ARCSINE, 10.0)
    with pytest.raises(IntegerParameterError):
        ti_asymptotic(EXAMPLE, 10.0)
    with pytest.raises(UnsupportedLawError):
        ti_asymptotic(HypergeometricLaw(("1/3",), ("5/6", "7/6")), 10.0)


def test_asymptotic_forms():
    with pytest.raises(ValidityError):
        asympt_forms("CJI", 5.0)
    x = 30.0
    assert asympt_forms("CJI", x) == pytest.approx(cji_family(1, x), abs=1e-10)
    # the short forms describe twice the function
    assert asympt_forms("CJI2", x, printed=True) == pytest.approx(2 * cji_family(2, x), abs=5 * x ** -2.5)
    assert asympt_forms("CII", x) == pytest.approx(math.log(cii_family(x)), abs=1e-10)


def test_ji2_expansion_sign():
    # Ji2 of J0 at x equals Ji2 of J0(2s) at x/2 (the kernel d xi/xi is scale free)
    ref = hyp_integral(ARCSINE, 2, 12.5)
    assert ji2_asymptotic(25.0, terms=3) == pytest.approx(ref, rel=1e-3)
    assert ji2_asymptotic(25.0, terms=3, sign=1.0) == pytest.approx(-ref, rel=1e-3)


def test_log_ciin_continuous():
    from shotnoise.hyperint import _log_cii_asymptotic
    # the two branches meet at x = 30
    series = math.log(ciin(30.0))
    lc = _log_cii_asymptotic(30.0)
    assert series == pytest.approx(lc + math.log1p(-(EULER_GAMMA + math.log(15.0)) * math.exp(-lc)), abs=1e-12)
    assert log_ciin(500.0) == pytest.approx(1000.0 - 1.5 * math.log(500.0) - math.log(4 * math.sqrt(2 * math.pi)), abs=1e-2)


@given(st.floats(0.1, 30.0))
def test_cii_derivative(x):
    h = 1e-6 * x
    d = (cii_family(x + h) - cii_family(x - h)) / (2 * h)
    assert d == pytest.approx(math.cosh(x) * float(bessel_i0(x)) / x, rel=1e-6)


@given(st.floats(0.1, 60.0))
def test_iterated_cosine_integral(y):
    assert iterated_cosine_integral(1, y) == pytest.approx(-sici(y)[1], abs=1e-12)


def test_bessel_i0_value():
    assert float(bessel_i0(1.0)) == pytest.approx(1.2660658778, abs=1e-10)
