"""
Triggered shot noise with pairs of arrivals (``l = 2``).

The recurrence ``W' = U1 U2 (W + Lambda)`` has the stationary transform
``h`` solving

    s^2 h'' + 3 s h' + (1 - g(s)) h = 0,    h(0) = 1,

equivalently ``D^2 y = g y`` for ``y = s h`` and ``D = s d/ds``.  ``h`` is
computed piecewise: the power series near the origin, an explicit
Runge-Kutta integration up to ``s_hi``, and beyond it the matched
large-``s`` form

    s h(s) = C1 ((ln s + gamma)(1 + CJi2) + 2 CJi3) + (C2 - C1)(1 + CJi2)
             + (second-order and t^{-3/2} corrections).

The constants are fitted on the window where the integrated solution and
the matched form overlap.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from functools import lru_cache

import mpmath
import numpy as np
from scipy.integrate import solve_ivp

from .errors import ConfigError, DomainError, IllConditionedError, UnsupportedLawError
from .hyperint import EXAMPLE, cji, iterated_expansion
from .inversion import DensityGrid, _gl_panels, _power_exp_tail
from .specfun import EULER_GAMMA, HypergeometricLaw

# ---------------------------------------------------------------------------
# Moments and series
# ---------------------------------------------------------------------------


def amplitude_moments(law: HypergeometricLaw, nmax: int) -> list:
    """
    Moments ``K_0 .. K_{2 nmax}`` of the amplitude; odd entries vanish.

    From ``g(s) = sum_k c_k (-s^2)^k / k! = sum_k (-1)^k K_{2k} s^{2k} / (2k)!``
    one reads ``K_{2k} = (2k)! c_k / k!``.  Exact (Fractions) for rational laws.
    """
    if nmax < 1:
        raise DomainError("nmax must be >= 1")
    K = []
    for k in range(nmax + 1):
        K.append(Fraction(math.factorial(2 * k)) * law.coefficient(k) / math.factorial(k)
                 if law.is_exact else
                 math.factorial(2 * k) * float(law.coefficient(k)) / math.factorial(k))
        if k < nmax:
            K.append(Fraction(0) if law.is_exact else 0.0)
    return K


def series_coefficients(K, N: int) -> list:
    """
    Coefficients ``c_0 .. c_{2N}`` of ``h(s) = sum c_i s^i``.

    ``4 n (n + 1) c_{2n} = sum_{j=0}^{n-1} (-1)^{n-j} c_{2j} K_{2(n-j)} / (2(n-j))!``
    """
    if len(K) < 2 * N + 1:
        raise DomainError(f"need moments up to K_{2 * N}")
    c = [K[0] * 0 + 1]
    for n in range(1, N + 1):
        acc = 0
        for j in range(n):
            acc += (-1) ** (n - j) * c[2 * j] * K[2 * (n - j)] / math.factorial(2 * (n - j))
        c.extend([K[0] * 0, acc / (4 * n * (n + 1))])
    return c


def _charfn_series_mp(law: HypergeometricLaw, s, terms: int = 80):
    s2 = -s * s
    acc = mpmath.mpf(0)
    t = mpmath.mpf(1)
    for k in range(terms):
        if k:
            t *= s2 / k
        ck = law.coefficient(k)
        ck = mpmath.mpf(ck.numerator) / ck.denominator if isinstance(ck, Fraction) else mpmath.mpf(ck)
        acc += ck * t
    return acc


def ode_residual(law: HypergeometricLaw, c, s: float, dps: int = 60) -> tuple[float, float]:
    """
    ``(residual, h(s))`` of the truncated series in the ODE, evaluated with
    ``dps`` decimal digits so that tiny residuals are not swamped by rounding.
    """
    with mpmath.workdps(dps):
        s = mpmath.mpf(s)
        cs = [mpmath.mpf(v.numerator) / v.denominator if isinstance(v, Fraction) else mpmath.mpf(v)
              for v in c]
        h = sum(ci * s ** i for i, ci in enumerate(cs))
        h1 = sum(i * ci * s ** (i - 1) for i, ci in enumerate(cs) if i >= 1)
        h2 = sum(i * (i - 1) * ci * s ** (i - 2) for i, ci in enumerate(cs) if i >= 2)
        g = _charfn_series_mp(law, s)
        r = s * s * h2 + 3 * s * h1 + (1 - g) * h
        return float(r), float(h)


# ---------------------------------------------------------------------------
# Model
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TriggeredConfig:
    """
    Numerical settings.

    ``s_lo`` is where the series hands over to the ODE integration,
    ``match_window`` the interval on which the matched form is fitted; its
    upper end is also where the matched form takes over.  ``T`` is the
    inversion split; beyond it the transform is integrated in closed form.
    """

    N: int = 40
    s_lo: float = 3.0
    match_window: tuple = (200.0, 400.0)
    match_points: int = 300
    T: float = 400.0
    h: float = 0.25
    order: int = 16
    rtol: float = 1e-13

    def __post_init__(self):
        lo, hi = self.match_window
        if not 0 < self.s_lo < lo < hi:
            raise ConfigError("need 0 < s_lo < match_window[0] < match_window[1]")
        if self.T > hi:
            raise ConfigError("T must not exceed the upper end of match_window")
        if self.N < 6:
            raise ConfigError("N must be >= 6")
        if abs(self.T / self.h - round(self.T / self.h)) > 1e-9:
            raise ConfigError("T must be a multiple of h")


def _basis(s: float):
    L = math.log(s)
    c2, c3 = cji(2, s), cji(3, s)
    y0 = 1.0 + c2 + 1.0 / (math.pi * s)
    y1 = (L + EULER_GAMMA) * (1.0 + c2) + 2.0 * c3 + (L + EULER_GAMMA + 6.0) / (math.pi * s)
    return (y0, y1, s ** -1.5, s ** -1.5 * L)


@dataclass(frozen=True)
class TriggeredModel:
    """
    Fitted representation of the ``l = 2`` transform.

    ``D`` holds the coefficients of the ``s^{-3/2}`` and ``s^{-3/2} ln s``
    corrections of the matched form.
    """

    law: HypergeometricLaw
    K: tuple
    c: tuple
    C1: float
    C2: float
    D: tuple
    match_window: tuple
    N: int
    config: TriggeredConfig
    fit_residual: float = 0.0
    condition: float = 0.0
    _sol: object = field(default=None, repr=False, compare=False)

    # -- pieces ---------------------------------------------------------------
    def series(self, s):
        s = np.asarray(s, dtype=float)
        cf = [float(v) for v in self.c[::-1]]
        return np.polyval(cf, s)

    def series_derivative(self, s):
        s = np.asarray(s, dtype=float)
        cf = np.polyder(np.array([float(v) for v in self.c[::-1]]))
        return np.polyval(cf, s)

    def matched(self, s):
        """Matched large-``s`` form of ``h``."""
        s = np.atleast_1d(np.asarray(s, dtype=float))
        b = np.array([_basis(v) for v in s])
        y = self.C1 * b[:, 1] + (self.C2 - self.C1) * b[:, 0] + self.D[0] * b[:, 2] + self.D[1] * b[:, 3]
        return y / s

    def to_dict(self) -> dict:
        return {
            "law": {"a": [str(v) for v in self.law.a], "b": [str(v) for v in self.law.b]},
            "K": [str(v) for v in self.K[:13]],
            "c": [str(v) for v in self.c[:13]],
            "C1": self.C1,
            "C2": self.C2,
            "D": list(self.D),
            "match_window": list(self.match_window),
            "N": self.N,
            "fit_residual": self.fit_residual,
            "condition": self.condition,
            "seams": [self.config.s_lo, self.match_window[1]],
            "config": asdict(self.config),
        }


def _integrate(law: HypergeometricLaw, c, cfg: TriggeredConfig):
    s0 = cfg.s_lo
    cf = np.array([float(v) for v in c[::-1]])
    h0 = float(np.polyval(cf, s0))
    dh0 = float(np.polyval(np.polyder(cf), s0))

    def rhs(s, z):
        return [z[1] / s, float(law.charfn(s)) * z[0] / s]

    z0 = [s0 * h0, s0 * (h0 + s0 * dh0)]
    sol = solve_ivp(rhs, (s0, cfg.match_window[1]), z0, method="DOP853",
                    rtol=cfg.rtol, atol=1e-15, dense_output=True)
    if not sol.success:
        raise RuntimeError(sol.message)
    return sol


def match_constants(law: HypergeometricLaw, c, sol, window, points: int = 300):
    """
    Least-squares fit of ``s h = y`` on ``window`` to the matched basis.

    Returns ``(C1, C2, D, max residual, condition number)``.  Columns are
    normalized before the condition number is taken.
    """
    if law.key() != EXAMPLE.key():
        raise UnsupportedLawError("matched form is available for the example law only")
    ss = np.linspace(window[0], window[1], points)
    A = np.array([_basis(s) for s in ss])
    y = sol.sol(ss)[0]
    scale = np.linalg.norm(A, axis=0)
    cond = float(np.linalg.cond(A / scale))
    if cond > 1e8:
        raise IllConditionedError(f"matching system condition number {cond:.3g} exceeds 1e8")
    coef, *_ = np.linalg.lstsq(A / scale, y, rcond=None)
    coef = coef / scale
    resid = float(np.max(np.abs(A @ coef - y)))
    C1 = float(coef[1])
    C2 = float(coef[0] + C1)
    return C1, C2, (float(coef[2]), float(coef[3])), resid, cond


def build_model(law: HypergeometricLaw = EXAMPLE, config: TriggeredConfig | None = None) -> TriggeredModel:
    """Series, ODE solution and matched constants for ``law``."""
    return _build(law, TriggeredConfig() if config is None else config)


@lru_cache(maxsize=8)
def _build(law: HypergeometricLaw, cfg: TriggeredConfig) -> TriggeredModel:
    K = amplitude_moments(law, cfg.N)
    c = series_coefficients(K, cfg.N)
    sol = _integrate(law, c, cfg)
    C1, C2, D, resid, cond = match_constants(law, c, sol, cfg.match_window, cfg.match_points)
    return TriggeredModel(law, tuple(K), tuple(c), C1, C2, D, tuple(cfg.match_window), cfg.N,
                          cfg, resid, cond, sol)


def h2(model: TriggeredModel, s):
    """
    Transform ``h(s)``, even in ``s``: series below ``s_lo``, integrated
    solution up to the end of the match window, matched form beyond.
    """
    s = np.abs(np.atleast_1d(np.asarray(s, dtype=float)))
    out = np.empty_like(s)
    lo, hi = model.config.s_lo, model.match_window[1]
    a = s < lo
    b = (s >= lo) & (s <= hi)
    c = s > hi
    out[a] = model.series(s[a])
    if np.any(b):
        out[b] = model._sol.sol(s[b])[0] / s[b]
    if np.any(c):
        out[c] = model.matched(s[c])
    return out


# ---------------------------------------------------------------------------
# Inversion
# ---------------------------------------------------------------------------

def tail_terms(model: TriggeredModel, nu_max: float = 3.5) -> dict:
    """
    Non-oscillating large-``t`` expansion of ``h`` as ``{(nu, m): a}``
    meaning ``sum a t^{-nu} (ln t)^m``.
    """
    n2 = iterated_expansion(EXAMPLE, 2).non_oscillating()
    n3 = iterated_expansion(EXAMPLE, 3).non_oscillating()
    C1, C2 = model.C1, model.C2
    y: dict = {}

    def add(p, m, v):
        y[(p, m)] = y.get((p, m), 0.0) + v

    # Y0 = 1 + N2 + 1/(pi t)
    # Y1 = (L + gamma)(1 + N2) + 2 N3 + (L + gamma + 6)/(pi t)
    w0 = C2 - C1
    add(0.0, 0, w0 + C1 * EULER_GAMMA)
    add(0.0, 1, C1)
    for cc, nu in zip(n2.coef, n2.nu):
        cc = float(np.real(cc))
        add(nu, 0, (w0 + C1 * EULER_GAMMA) * cc)
        add(nu, 1, C1 * cc)
    for cc, nu in zip(n3.coef, n3.nu):
        add(nu, 0, 2.0 * C1 * float(np.real(cc)))
    add(1.0, 0, (w0 + C1 * (EULER_GAMMA + 6.0)) / math.pi)
    add(1.0, 1, C1 / math.pi)
    add(1.5, 0, model.D[0])
    add(1.5, 1, model.D[1])
    return {(p + 1.0, m): v for (p, m), v in y.items() if p + 1.0 <= nu_max}


def _log_power_tail(nu: float, m: int, kappa, X: float, step: float = 1e-4):
    """``int_X^inf t^{-nu} (ln t)^m e^{i kappa t} dt`` for ``m`` in {0, 1}."""
    if m == 0:
        return _power_exp_tail(nu, kappa, X)
    # -d/dnu by a Richardson-extrapolated central difference
    d1 = (_power_exp_tail(nu - step, kappa, X) - _power_exp_tail(nu + step, kappa, X)) / (2 * step)
    d2 = (_power_exp_tail(nu - 2 * step, kappa, X) - _power_exp_tail(nu + 2 * step, kappa, X)) / (4 * step)
    return (4.0 * d1 - d2) / 3.0


@lru_cache(maxsize=8)
def _table(model: TriggeredModel):
    cfg = model.config
    _, t, w = _gl_panels(0.0, cfg.T, cfg.h, cfg.order)
    t, w = t.ravel(), w.ravel()
    return t, w, h2(model, t)


def _tail_integral(model: TriggeredModel, x: np.ndarray, kind: str) -> np.ndarray:
    T = model.config.T
    acc = np.zeros(x.shape, dtype=complex)
    for (nu, m), a in tail_terms(model).items():
        if kind == "cos":
            ep = _log_power_tail(nu, m, x, T)
            acc += a * ep
        else:
            ep = _log_power_tail(nu + 1.0, m, x, T)
            acc += a * ep
    # cos -> real part, sin -> imaginary part of int e^{i x t}
    return acc.real if kind == "cos" else acc.imag


def triggered_density(model: TriggeredModel, x):
    """
    ``f(x) = (1/pi) int_0^inf cos(x t) h(t) dt``: Gauss-Legendre panels on
    ``[0, T]`` plus the closed-form integral of the large-``t`` expansion.
    ``f`` is even and infinite at ``x = 0``.
    """
    xa = np.abs(np.atleast_1d(np.asarray(x, dtype=float)))
    t, w, h = _table(model)
    out = np.full(xa.shape, np.inf)
    nz = xa > 0
    if np.any(nz):
        xs = xa[nz]
        body = np.cos(np.outer(xs, t)) @ (w * h)
        with np.errstate(invalid="ignore"):
            tail = _tail_integral(model, xs, "cos")
        out[nz] = (body + tail) / math.pi
    return float(out[0]) if np.ndim(x) == 0 else out


def triggered_cdf(model: TriggeredModel, x):
    """``F(x) = 1/2 + (1/pi) int_0^inf sin(x t) h(t) / t dt``."""
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    t, w, h = _table(model)
    body = np.sin(np.outer(xa, t)) @ (w * h / t)
    sgn = np.sign(xa)
    tail = np.zeros_like(xa)
    nz = xa != 0
    if np.any(nz):
        tail[nz] = sgn[nz] * _tail_integral(model, np.abs(xa[nz]), "sin")
    out = 0.5 + (body + tail) / math.pi
    return float(out[0]) if np.ndim(x) == 0 else out


def triggered_density_grid(model: TriggeredModel, xs) -> DensityGrid:
    """Density on a grid with a quality flag when the tail piece dominates."""
    xs = np.asarray(xs, dtype=float)
    f = triggered_density(model, xs)
    ax = np.abs(xs)
    tail = np.zeros_like(xs)
    nz = ax > 0
    with np.errstate(invalid="ignore"):
        tail[nz] = _tail_integral(model, ax[nz], "cos") / math.pi
    fin = np.isfinite(f) & (f != 0)
    flagged = bool(np.any(np.abs(tail[fin]) > 0.1 * np.abs(f[fin])))
    return DensityGrid(xs, f, "fourier-split", (model.config.s_lo, model.config.T, model.config.h),
                       model.fit_residual / model.config.T,
                       meta={"model": model.to_dict(), "tail_dominant": flagged})
