"""
Closed-form densities for the arcsine + Bernoulli amplitude
``X = cos(pi V) + Delta`` (support ``[-2, 2]``).

With ``q(x) = sqrt((2 - |x|)/|x|)`` each extra uniform factor applies
``f -> int_{|y|>|x|} f(y)/|y| dy``, which in the variable ``q`` becomes an
elementary integral.  This gives

* ``U X``:            ``q / (2 pi)``
* ``U1 U2 X``:        ``(q - atan q) / pi``
* waiting-time mix:   ``(3 q - 2 atan q) / (4 pi)``
* ``U1 U2 U3 X``:     a Clausen-function expression.

``Y = U0 X0 + X1`` has an elliptic-integral density ``g1`` and
``W1 = U1 Y`` follows by one more mixing integral.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy.integrate import quad
from scipy.special import expit

from .errors import FormulaMismatchError
from .specfun import clausen2, elliptic_k, elliptic_k_complement


def _vectorize(fn):
    vec = np.vectorize(fn, otypes=[float])

    def wrapper(x):
        if np.ndim(x) == 0:
            return fn(float(x))
        return vec(np.asarray(x, dtype=float))

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


def _q(ax: float) -> float:
    return math.sqrt((2.0 - ax) / ax)


@_vectorize
def f0_simple(x: float) -> float:
    """Density of ``U X``: ``(1/2pi) sqrt((2-|x|)/|x|)`` on ``[-2, 2]``."""
    ax = abs(x)
    if ax == 0.0:
        return math.inf
    if ax >= 2.0:
        return 0.0
    return _q(ax) / (2.0 * math.pi)


@_vectorize
def f0_triggered(x: float) -> float:
    """Density of ``U1 U2 X``: ``(1/pi)(q - atan q)`` on ``[-2, 2]``."""
    ax = abs(x)
    if ax == 0.0:
        return math.inf
    if ax >= 2.0:
        return 0.0
    q = _q(ax)
    return (q - math.atan(q)) / math.pi


@_vectorize
def f_waiting_time(x: float) -> float:
    """
    Equal mixture of ``U X`` and ``U1 U2 X``:
    ``(1/4pi)(3 q - 2 atan q)`` on ``[-2, 2]``.
    """
    ax = abs(x)
    if ax == 0.0:
        return math.inf
    if ax >= 2.0:
        return 0.0
    q = _q(ax)
    return (3.0 * q - 2.0 * math.atan(q)) / (4.0 * math.pi)


@_vectorize
def f0_three_uniforms(x: float) -> float:
    """
    Density of ``U1 U2 U3 X``:

        (2/pi) (q - theta - (omega + theta) ln(r) / 2
                + (Cl2(2(omega + theta)) - Cl2(2 omega) - Cl2(2 theta)) / 4)

    with ``r = 1/sqrt(2|x|)``, ``theta = atan q`` and
    ``omega = atan(r sin(theta) / (1 - r cos(theta)))``; ``Cl2`` is the
    Clausen function ``sum sin(k t)/k^2``.
    """
    ax = abs(x)
    if ax == 0.0:
        return math.inf
    if ax >= 2.0:
        return 0.0
    q = _q(ax)
    th = math.atan(q)
    r = 1.0 / math.sqrt(2.0 * ax)
    om = math.atan2(r * math.sin(th), 1.0 - r * math.cos(th))
    cl = clausen2(2.0 * (om + th)) - clausen2(2.0 * om) - clausen2(2.0 * th)
    return 2.0 / math.pi * (q - th - 0.5 * (om + th) * math.log(r) + 0.25 * cl)


@_vectorize
def g1_density(y: float) -> float:
    """
    Density of ``Y = U0 X0 + X1`` on ``[-4, 4]``:

        (1/(4 pi^2)) (2 K(1 - y^2/4) 1{|y|<2} + (2 - |y|/2) K((2 - |y|/2)|y|/2))

    with ``K(m)`` in the parameter convention.  Logarithmically singular
    at ``y = 0`` and ``|y| = 2``, where ``inf`` is returned.
    """
    ay = abs(y)
    if ay >= 4.0:
        return 0.0
    if ay == 0.0 or ay == 2.0:
        return math.inf
    v = 0.0
    if ay < 2.0:
        kc = 0.5 * ay
        # K(1 - kc^2) = ln(4/kc) + O(kc^2 ln kc); avoids underflow of kc^2
        v += 2.0 * (math.log(4.0 / kc) if kc < 1e-20 else elliptic_k_complement(kc * kc))
    # 1 - (2 - y/2)(y/2) = (1 - y/2)^2
    v += (2.0 - ay / 2.0) * elliptic_k_complement((1.0 - ay / 2.0) ** 2)
    return v / (4.0 * math.pi ** 2)


@_vectorize
def f1_density(x: float) -> float:
    """Density of ``W1 = U1 Y``: ``int_{|y|>|x|} g1(y)/|y| dy`` on ``[-4, 4]``."""
    ax = abs(x)
    if ax == 0.0:
        return math.inf
    if ax >= 4.0:
        return 0.0
    edges = [ax, 2.0, 4.0] if ax < 2.0 else [ax, 4.0]
    return math.fsum(_graded_quad(_g1_over_y, a, b) for a, b in zip(edges[:-1], edges[1:]))


def _g1_over_y(y: float) -> float:
    v = g1_density(y)
    # nodes can round onto the singular point itself, a null set
    return v / y if math.isfinite(v) else 0.0


def _graded_quad(f, a: float, b: float) -> float:
    """
    ``int_a^b f`` for ``f`` with integrable log singularities at both ends,
    via ``y = a + (b - a) expit(t)``, which turns them into ``t e^{-|t|}``.
    """
    w = b - a

    def g(t):
        e = expit(-abs(t))
        y = a + w * e if t < 0 else b - w * e
        return f(y) * w * e * (1.0 - e)

    return quad(g, -40.0, 40.0, limit=200, epsabs=1e-15, epsrel=1e-12)[0]


@_vectorize
def f1_printed_integral(x: float) -> float:
    """
    The candidate expression
    ``int_0^{sqrt(1-(x-1)^2)} K(xi)/xi ((1-xi^2)^(1/5) - (1-xi^2)^(-1/5))^2 dxi``
    evaluated by adaptive quadrature (``K`` in the parameter convention).
    Experimental: see :func:`f1_simple`.
    """
    ax = abs(x)
    up = 1.0 - (ax - 1.0) ** 2
    if up <= 0.0:
        return 0.0

    def integrand(t):
        if t >= 1.0:
            return 0.0
        w = (1.0 - t * t) ** 0.2
        return elliptic_k(t) / t * (w - 1.0 / w) ** 2

    return quad(integrand, 0.0, math.sqrt(up), limit=200)[0]


@dataclass
class MismatchDiagnostic:
    x: float
    candidate: float
    mc_value: float
    mc_stderr: float
    reference: float

    @property
    def z(self) -> float:
        return (self.candidate - self.mc_value) / self.mc_stderr if self.mc_stderr > 0 else math.inf


@lru_cache(maxsize=4)
def _f1_reference_histogram(n: int, seed: int, bins: int = 80):
    rng = np.random.default_rng(seed)

    def amp():
        return np.cos(math.pi * rng.random(n)) + np.where(rng.random(n) < 0.5, -1.0, 1.0)

    w1 = np.abs(rng.random(n) * (rng.random(n) * amp() + amp()))
    counts, edges = np.histogram(w1, bins=bins, range=(0.0, 4.0))
    width = edges[1] - edges[0]
    return counts, edges, width


def f1_check(x: float, *, n: int = 1_000_000, seed: int = 12345) -> MismatchDiagnostic:
    """Compare :func:`f1_printed_integral` with a histogram of ``U1 (U0 X0 + X1)``."""
    counts, edges, width = _f1_reference_histogram(n, seed)
    ax = abs(float(x))
    i = min(int(ax / width), len(counts) - 1)
    dens = counts[i] / (2.0 * n * width)
    se = math.sqrt(max(counts[i], 1)) / (2.0 * n * width)
    a, b = edges[i], edges[i + 1]
    # compare bin averages so the histogram resolution does not matter
    cand = quad(lambda t: f1_printed_integral(t), a, b, limit=50)[0] / width
    ref = quad(lambda t: f1_density(t), a, b, limit=50)[0] / width
    return MismatchDiagnostic(ax, cand, float(dens), float(se), ref)


def f1_simple(x: float, *, n: int = 1_000_000, seed: int = 12345) -> float:
    """
    Experimental density of ``W1`` from the printed integral.

    The value is returned only if its bin average agrees with the Monte-Carlo
    histogram within 3 standard errors; otherwise
    :class:`FormulaMismatchError` is raised carrying the diagnostic (with
    the mixing-integral value :func:`f1_density` as reference).
    """
    ax = abs(float(x))
    if ax >= 4.0:
        return 0.0
    d = f1_check(ax, n=n, seed=seed)
    if abs(d.z) > 3.0:
        err = FormulaMismatchError(
            f"printed f1 integral disagrees with Monte Carlo at x={ax}: "
            f"bin mean {d.candidate:.6g} vs {d.mc_value:.6g} +- {d.mc_stderr:.2g} "
            f"(mixing integral {d.reference:.6g})")
        err.diagnostic = d
        raise err
    return float(f1_printed_integral(ax))


# ---------------------------------------------------------------------------
# Registry
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SupportedDensity:
    """Density with compact support and known integrable singularities."""

    name: str
    support: tuple
    eval: Callable
    singular: tuple = ()
    sampler: Callable | None = field(default=None, compare=False)
    mass: Callable | None = field(default=None, compare=False)

    def __call__(self, x):
        return self.eval(x)

    def _breaks(self, a: float, b: float) -> list:
        pts = sorted({a, b, *[s for s in self.singular if a < s < b]})
        return pts

    def probability(self, a: float, b: float) -> float:
        """``P(a < X < b)`` by adaptive quadrature split at singular points."""
        lo, hi = self.support
        a, b = max(a, lo), min(b, hi)
        if b <= a:
            return 0.0
        if self.mass is not None:
            return self.mass(a, b)
        pts = self._breaks(a, b)
        total = 0.0
        for u, v in zip(pts[:-1], pts[1:]):
            total += quad(lambda t: float(self.eval(t)), u, v, limit=200,
                          epsabs=1e-13, epsrel=1e-11)[0]
        return total

    def integrate(self) -> float:
        return self.probability(*self.support)

    def grid(self, xs):
        """Values on a grid with singular points removed; returns ``(x, f, removed)``."""
        xs = np.asarray(xs, dtype=float)
        bad = np.isin(xs, np.asarray(self.singular))
        return xs[~bad], np.asarray(self.eval(xs[~bad]), dtype=float), xs[bad].tolist()

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        if self.sampler is None:
            raise NotImplementedError(f"no sampler for {self.name}")
        return self.sampler(rng, n)


def _f1_positive_mass(a: float, b: float) -> float:
    # P(a < W1 < b) for 0 <= a < b = int g1(y)/y (min(y, b) - a)_+ dy
    def w(y):
        return g1_density(y) / y * (min(y, b) - a)

    pts = sorted({a, b, 2.0, 4.0} & {p for p in (a, b, 2.0, 4.0) if a <= p <= 4.0})
    total = 0.0
    for u, v in zip(pts[:-1], pts[1:]):
        if v > u:
            total += quad(w, u, v, limit=200, epsabs=1e-14, epsrel=1e-12)[0]
    return total


def _f1_mass(a: float, b: float) -> float:
    if a >= 0.0:
        return _f1_positive_mass(a, b)
    if b <= 0.0:
        return _f1_positive_mass(-b, -a)
    return _f1_positive_mass(0.0, b) + _f1_positive_mass(0.0, -a)


def _amp(rng, n):
    return np.cos(math.pi * rng.random(n)) + np.where(rng.random(n) < 0.5, -1.0, 1.0)


def _uniform_product(rng, n, k):
    u = np.ones(n)
    for _ in range(k):
        u *= rng.random(n)
    return u


def _waiting_sampler(rng, n):
    extra = np.where(rng.random(n) < 0.5, 1.0, rng.random(n))
    return rng.random(n) * extra * _amp(rng, n)


CLOSED_FORMS = {
    "f0_simple": SupportedDensity("f0_simple", (-2.0, 2.0), f0_simple, (0.0,),
                                  lambda r, n: _uniform_product(r, n, 1) * _amp(r, n)),
    "f0_triggered": SupportedDensity("f0_triggered", (-2.0, 2.0), f0_triggered, (0.0,),
                                     lambda r, n: _uniform_product(r, n, 2) * _amp(r, n)),
    "f_waiting_time": SupportedDensity("f_waiting_time", (-2.0, 2.0), f_waiting_time, (0.0,),
                                       _waiting_sampler),
    "f0_three_uniforms": SupportedDensity("f0_three_uniforms", (-2.0, 2.0), f0_three_uniforms,
                                          (0.0,), lambda r, n: _uniform_product(r, n, 3) * _amp(r, n)),
    "g1": SupportedDensity("g1", (-4.0, 4.0), g1_density, (-2.0, 0.0, 2.0),
                           lambda r, n: r.random(n) * _amp(r, n) + _amp(r, n)),
    "f1": SupportedDensity("f1", (-4.0, 4.0), f1_density, (-2.0, 0.0, 2.0),
                           lambda r, n: r.random(n) * (r.random(n) * _amp(r, n) + _amp(r, n)),
                           _f1_mass),
}


def bin_probabilities(density: SupportedDensity, edges) -> np.ndarray:
    """Exact bin masses of a closed form, symmetric laws computed on ``|x|``."""
    edges = np.asarray(edges, dtype=float)
    return np.array([density.probability(a, b) for a, b in zip(edges[:-1], edges[1:])])
