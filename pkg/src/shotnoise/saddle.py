"""
Saddle-point tail of the stationary density.

The bilateral Laplace transform of the stationary shot noise is
``E exp(s W) = exp(int_0^s (G(xi) - 1)/xi dxi)`` with ``G(s) = pFq(a; b; s^2)``
(``cosh(s) I0(s)`` for the arcsine + Bernoulli amplitude).  Writing

    Phi(s) = -s x + int_0^s (G(xi) - 1)/xi dxi,

the density for large ``x`` is ``f(x) ~ exp(Phi(s0)) / sqrt(2 pi Phi''(s0))``
where ``Phi'(s0) = 0``, i.e. ``1 + x s0 = G(s0)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, NonConvergenceError
from .hyperint import EXAMPLE, ciin, log_ciin
from .specfun import HypergeometricLaw, bessel_ie

X_MIN = 3.0


@dataclass(frozen=True)
class SaddleResult:
    x: float
    s0: float
    phi: float
    phi2: float
    log_f: float
    iterations: int
    residual: float

    @property
    def f_asymptotic(self) -> float:
        return math.exp(self.log_f)


def _is_example(law: HypergeometricLaw) -> bool:
    return law.key() == EXAMPLE.key()


def _series_G(law: HypergeometricLaw, s: float):
    """``(G - 1)/s``, its derivative and ``int_0^s (G - 1)/xi`` by power series."""
    s2 = s * s
    t = 1.0
    q = dq = integral = 0.0
    for k in range(1, 2000):
        t *= float(law.coefficient(k) / law.coefficient(k - 1)) * s2 / k
        q += t / s
        dq += t * (2 * k - 1) / s2
        integral += t / (2 * k)
        if t < 1e-17 * (1.0 + integral) and k > 4:
            break
    else:
        raise NonConvergenceError("saddle series did not converge")
    return q, dq, integral


def phi_and_derivatives(x: float, s: float, law: HypergeometricLaw = EXAMPLE):
    """
    ``(Phi, Phi', Phi'')`` at ``s``.

    For the example law ``Phi' = -x + (cosh s I0(s) - 1)/s`` and
    ``Phi'' = ((sinh s I0 + cosh s I1) s - (cosh s I0 - 1)) / s^2``,
    evaluated with exponentially scaled Bessel functions so that large
    ``s`` does not overflow before the final product.
    """
    s = float(s)
    if not s > 0:
        raise DomainError("s must be positive")
    if not _is_example(law) or s < 1.0:
        q, dq, integral = _series_G(law, s)
        return -s * x + integral, -x + q, dq
    e0 = bessel_ie(0, s)
    e1 = bessel_ie(1, s)
    em = math.exp(-2.0 * s)
    # cosh(s) I0(s) = (e^{2s} + 1) ie0 / 2, sinh(s) I0(s) = (e^{2s} - 1) ie0 / 2
    big = math.exp(2.0 * s) if s < 350 else math.inf
    ch_i0 = 0.5 * big * (1.0 + em) * e0
    sh_i0 = 0.5 * big * (1.0 - em) * e0
    ch_i1 = 0.5 * big * (1.0 + em) * e1
    d1 = -x + (ch_i0 - 1.0) / s
    d2 = ((sh_i0 + ch_i1) * s - (ch_i0 - 1.0)) / (s * s)
    phi = -s * x + (ciin(s) if s <= 30.0 else math.exp(log_ciin(s)))
    return phi, d1, d2


def initial_guess(x: float) -> float:
    """Second-order root estimate ``ln(x)/2 + (3/4) ln ln x + ln(pi)/4``."""
    lx = math.log(x)
    return 0.5 * lx + 0.75 * math.log(lx) + 0.25 * math.log(math.pi)


def find_saddle(x: float, law: HypergeometricLaw = EXAMPLE, *, x_min: float = X_MIN,
                tol: float = 1e-12, max_iter: int = 100) -> SaddleResult:
    """
    Root of ``Phi'`` by Newton's method from :func:`initial_guess`,
    safeguarded by bisection on ``[guess/2, 2 guess + 2]``.
    """
    x = float(x)
    if x < x_min:
        raise DomainError(f"x={x} below x_min={x_min}")
    guess = initial_guess(x)
    lo, hi = 0.5 * guess, 2.0 * guess + 2.0
    while phi_and_derivatives(x, lo, law)[1] > 0:
        lo *= 0.5
    while phi_and_derivatives(x, hi, law)[1] < 0:
        hi *= 2.0
    s = min(max(guess, lo), hi)
    for it in range(1, max_iter + 1):
        _, d1, d2 = phi_and_derivatives(x, s, law)
        if abs(d1) < tol * x:
            break
        if d1 > 0:
            hi = s
        else:
            lo = s
        step = s - d1 / d2
        s = step if lo < step < hi else 0.5 * (lo + hi)
    else:
        raise NonConvergenceError(
            f"saddle search did not converge: guess={guess}, s={s}, residual={d1}")
    phi, d1, d2 = phi_and_derivatives(x, s, law)
    log_f = phi - 0.5 * math.log(2.0 * math.pi * d2)
    return SaddleResult(x, s, phi, d2, log_f, it, d1)


def density_tail(x: float, law: HypergeometricLaw = EXAMPLE) -> float:
    """Saddle-point approximation ``exp(Phi(s0)) / sqrt(2 pi Phi''(s0))``."""
    return find_saddle(abs(x), law).f_asymptotic
