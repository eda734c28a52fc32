"""
Stationary density of the simple shot noise ``W = U (W + Lambda)``.

With an even amplitude law of characteristic function ``g`` the stationary
transform is

    h(s) = exp(-int_0^s (1 - g(xi)) / xi dxi) = (C / s) exp(-Ji(s)),

``C = exp(m_1)``, and the density follows from the cosine inversion

    f(x) = (1/pi) int_0^inf cos(x t) h(t) dt.

The integral is split into three pieces.  On ``[0, x1]`` the cosine
transform is integrated directly; on ``[x1, x2]`` one integration by
parts (``h' = -(1 - g) h / t``) turns it into a faster decaying sine
transform; beyond ``x2`` the asymptotic expansion of ``h`` is integrated
term by term in closed form with generalized exponential integrals, so no
truncation remainder is left beyond the order of that expansion.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from functools import lru_cache

import numpy as np

from .errors import ConfigError, DomainError
from .hyperint import (
    Expansion,
    IntegralConstants,
    integration_constants,
    iterated_expansion,
    ti_iter,
)
from .specfun import HypergeometricLaw, expint_e

# ---------------------------------------------------------------------------
# Density grids
# ---------------------------------------------------------------------------


# Euler-Maclaurin constants of ln d and ln^2 d on a unit grid
_ZETA1 = -0.5 * math.log(2.0 * math.pi)
_ZETA2 = 2.006356455908584851


@dataclass
class DensityGrid:
    """
    Tabulated density with metadata.

    ``method`` is one of ``fourier-split``, ``saddle``, ``closed-form`` or
    ``monte-carlo``.  Points where the density is singular carry ``inf``
    and are listed in ``singular``.
    """

    x: np.ndarray
    f: np.ndarray
    method: str
    cutoffs: tuple = ()
    err_estimate: np.ndarray | float = 0.0
    stderr: np.ndarray | None = None
    count: np.ndarray | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=float)
        self.f = np.asarray(self.f, dtype=float)

    @property
    def singular(self) -> list[float]:
        return [float(v) for v in self.x[~np.isfinite(self.f)]]

    @property
    def negative_flag(self) -> bool:
        """True when ringing pushes the density below -1e-9 somewhere."""
        fin = np.isfinite(self.f)
        return bool(np.any(self.f[fin] < -1e-9))

    def integral(self) -> float:
        """
        Trapezoid integral that tolerates logarithmic singularities.

        On each side of a singular point the density is modelled as
        ``A + B ln d + C ln^2 d + E d`` (``d`` the distance), fitted to the
        four nearest grid values.  The trapezoid sum over the regular cells is
        then corrected with the Euler-Maclaurin constants of ``ln`` and
        ``ln^2`` on a uniform grid, ``zeta'(0)`` and ``-zeta''(0)``, which
        accounts for the cell touching the singularity as well as for the
        trapezoid error of its neighbours.
        """
        x, f = self.x, self.f
        fin = np.isfinite(f)
        total = 0.0
        for i in range(len(x) - 1):
            if fin[i] and fin[i + 1]:
                total += 0.5 * (x[i + 1] - x[i]) * (f[i] + f[i + 1])
        for s in np.flatnonzero(~fin):
            for step in (1, -1):
                idx = []
                j = s + step
                while 0 <= j < len(x) and fin[j] and len(idx) < 4:
                    idx.append(j)
                    j += step
                if not idx:
                    continue
                dist = np.abs(x[idx] - x[s])
                k = len(idx)
                ln = np.log(dist)
                cols = [np.ones(k), ln, dist, ln * ln][:k]
                coef = list(np.linalg.solve(np.column_stack(cols), f[idx])) + [0.0] * (4 - k)
                A, B, E, C = coef
                delta = dist[0]
                ld = math.log(delta)
                total += delta * (A + B * (ld + _ZETA1) + 0.5 * E * delta
                                  + C * (ld * ld + 2.0 * ld * _ZETA1 + _ZETA2))
        return total

    def to_csv(self, path=None) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        err = np.broadcast_to(np.asarray(self.err_estimate, dtype=float), self.x.shape)
        if self.stderr is not None:
            w.writerow(["x", "f", "stderr", "count"])
            cnt = self.count if self.count is not None else np.zeros_like(self.x)
            for row in zip(self.x, self.f, self.stderr, cnt):
                w.writerow([_fmt(row[0]), _fmt(row[1]), _fmt(row[2]), int(row[3])])
        else:
            w.writerow(["x", "f", "method", "err"])
            for xi, fi, ei in zip(self.x, self.f, err):
                w.writerow([_fmt(xi), _fmt(fi), self.method, _fmt(ei)])
        text = buf.getvalue()
        if path is not None:
            with open(path, "w", newline="") as fh:
                fh.write(text)
        return text

    def to_json(self, path=None, config: dict | None = None) -> str:
        err = np.broadcast_to(np.asarray(self.err_estimate, dtype=float), self.x.shape)
        doc = {
            "method": self.method,
            "cutoffs": list(self.cutoffs),
            "x": [_num(v) for v in self.x],
            "f": [_num(v) for v in self.f],
            "err": [_num(v) for v in err],
            "singular": self.singular,
            "meta": self.meta,
        }
        if self.stderr is not None:
            doc["stderr"] = [_num(v) for v in self.stderr]
            doc["count"] = [int(v) for v in self.count]
        if config is not None:
            doc["config"] = config
        text = json.dumps(doc, indent=1, sort_keys=True)
        if path is not None:
            with open(path, "w") as fh:
                fh.write(text)
        return text


def _fmt(v: float) -> str:
    return repr(float(v)) if math.isfinite(v) else ("inf" if v > 0 else "-inf" if v < 0 else "nan")


def _num(v):
    v = float(v)
    return v if math.isfinite(v) else str(v)


# ---------------------------------------------------------------------------
# Normalization and transform
# ---------------------------------------------------------------------------

def normalization_constant(law: HypergeometricLaw) -> float:
    """``C = exp((-gamma - sum psi(a) + sum psi(b)) / 2) = exp(m_1)``."""
    return math.exp(integration_constants(law, 1).m[0])


def log_transform_h(law: HypergeometricLaw, constants: IntegralConstants | None,
                    s: float, *, switch: float = 30.0) -> float:
    """
    ``ln h(s) = ln C - ln s - pTi(s) / 2``.

    The iterated function is summed from its series up to ``switch`` and
    from the asymptotic expansion beyond (registered laws only).
    """
    s = float(s)
    if not s > 0:
        raise DomainError("s must be positive")
    if constants is None:
        constants = integration_constants(law, 6)
    if s <= switch:
        return constants.m[0] - math.log(s) - 0.5 * ti_iter(law, 1, s, constants)
    return constants.m[0] - math.log(s) - float(iterated_expansion(law, 1)(s))


# ---------------------------------------------------------------------------
# Exponential sums: sum_j c_j t^{-nu_j} e^{i omega_j t}
# ---------------------------------------------------------------------------

class ExpSum:
    """Real function written as a conjugate-closed complex exponential sum."""

    def __init__(self, terms: dict | None = None, nu_max: float = 8.0):
        self.terms = {} if terms is None else dict(terms)
        self.nu_max = nu_max

    @classmethod
    def from_expansion(cls, e: Expansion, nu_max: float = 8.0) -> "ExpSum":
        out = cls(nu_max=nu_max)
        for c, nu, om in zip(e.coef, e.nu, e.omega):
            if nu > nu_max:
                continue
            if om == 0.0:
                out._add((nu, 0.0), complex(c).real)
            else:
                out._add((nu, om), 0.5 * c)
                out._add((nu, -om), 0.5 * np.conj(c))
        return out

    def _add(self, key, c):
        self.terms[key] = self.terms.get(key, 0.0) + c

    def __mul__(self, other: "ExpSum") -> "ExpSum":
        out = ExpSum(nu_max=self.nu_max)
        for (n1, w1), c1 in self.terms.items():
            for (n2, w2), c2 in other.terms.items():
                if n1 + n2 <= self.nu_max + 1e-12:
                    out._add((n1 + n2, w1 + w2), c1 * c2)
        return out

    def scaled(self, k: complex) -> "ExpSum":
        return ExpSum({key: k * c for key, c in self.terms.items()}, self.nu_max)

    def shifted(self, dnu: float) -> "ExpSum":
        """Multiply by ``t^{-dnu}`` (the order cap moves along)."""
        return ExpSum({(n + dnu, w): c for (n, w), c in self.terms.items()},
                      self.nu_max + dnu)

    def exp_neg(self) -> "ExpSum":
        """``exp(-u)`` for an expansion whose orders are all positive."""
        nmin = min(n for n, _ in self.terms)
        out = ExpSum({(0.0, 0.0): 1.0}, self.nu_max)
        power = ExpSum({(0.0, 0.0): 1.0}, self.nu_max)
        k = 1
        while k * nmin <= self.nu_max + 1e-12:
            power = (power * self).scaled(-1.0 / k)
            for key, c in power.terms.items():
                out._add(key, c)
            k += 1
        return out

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        acc = np.zeros(t.shape, dtype=complex)
        for (n, w), c in self.terms.items():
            acc += c * t ** (-n) * np.exp(1j * w * t)
        return acc.real

    def fourier_tail(self, x, X: float, kind: str):
        """
        ``int_X^inf cos(x t) F(t) dt`` (``kind='cos'``) or
        ``int_X^inf sin(x t) F(t) / t dt`` (``kind='sin'``), vectorized in x.
        """
        x = np.asarray(x, dtype=float)
        acc = np.zeros(x.shape, dtype=complex)
        for (n, w), c in self.terms.items():
            nu = n if kind == "cos" else n + 1.0
            ep = _power_exp_tail(nu, w + x, X)
            em = _power_exp_tail(nu, w - x, X)
            if kind == "cos":
                acc += c * 0.5 * (ep + em)
            else:
                acc += c * (ep - em) / 2j
        return acc.real

    def order_bound(self, X: float) -> float:
        """Size of the highest retained order at ``X``; a truncation scale."""
        if not self.terms:
            return 0.0
        ntop = max(n for n, _ in self.terms)
        return sum(abs(c) for (n, _), c in self.terms.items() if n == ntop) * X ** (-ntop)


def _power_exp_tail(nu: float, kappa, X: float):
    """``int_X^inf t^{-nu} e^{i kappa t} dt`` = ``X^{1-nu} E_nu(-i kappa X)``."""
    kappa = np.asarray(kappa, dtype=float)
    out = np.empty(kappa.shape, dtype=complex)
    zero = kappa == 0.0
    if np.any(zero):
        if nu <= 1.0:
            out[zero] = np.inf
        else:
            out[zero] = X ** (1.0 - nu) / (nu - 1.0)
    if np.any(~zero):
        out[~zero] = X ** (1.0 - nu) * expint_e(nu, -1j * kappa[~zero] * X)
    return out


def transform_tail_expansion(law: HypergeometricLaw, nu_max: float = 8.0) -> ExpSum:
    """Large-``t`` expansion of ``h(t) = (C/t) exp(-Ji(t))`` as an ExpSum."""
    C = normalization_constant(law)
    ji = ExpSum.from_expansion(iterated_expansion(law, 1), nu_max - 1.0)
    if ji.terms:
        core = ji.exp_neg()
    else:
        core = ExpSum({(0.0, 0.0): 1.0}, nu_max - 1.0)
    return core.shifted(1.0).scaled(C)


# ---------------------------------------------------------------------------
# Split inversion
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SplitConfig:
    """
    Cutoffs of the split inversion.

    Attributes
    ----------
    x1 : float
        End of the direct cosine piece.
    x2 : float
        End of the integrated-by-parts piece; beyond it the transform is
        replaced by its asymptotic expansion.
    h : float
        Panel width of the composite Gauss-Legendre rule.
    order : int
        Gauss-Legendre nodes per panel.
    nu_max : float
        Highest power ``t^{-nu}`` kept in the tail expansion.
    """

    x1: float = 10.0
    x2: float = 40.0
    h: float = 0.25
    order: int = 16
    nu_max: float = 8.0

    def __post_init__(self):
        if not self.x1 > 0:
            raise ConfigError("x1 must be positive")
        if self.x1 >= self.x2:
            raise ConfigError(f"x1={self.x1} must be below x2={self.x2}")
        if not 0 < self.h < self.x1 / 10:
            raise ConfigError(f"h={self.h} must lie in (0, x1/10)")
        if abs(self.x1 / self.h - round(self.x1 / self.h)) > 1e-9 or \
                abs(self.x2 / self.h - round(self.x2 / self.h)) > 1e-9:
            raise ConfigError("x1 and x2 must be multiples of h")
        if self.order < 4:
            raise ConfigError("order must be >= 4")


def _gl_panels(a: float, b: float, h: float, order: int):
    edges = np.linspace(a, b, int(round((b - a) / h)) + 1)
    u, wu = np.polynomial.legendre.leggauss(order)
    lo, hi = edges[:-1, None], edges[1:, None]
    t = 0.5 * (hi - lo) * u + 0.5 * (hi + lo)
    w = 0.5 * (hi - lo) * wu
    return edges, t, w


def _one_minus_g_over_t(law: HypergeometricLaw, t: np.ndarray) -> np.ndarray:
    g = np.asarray(law.charfn(t), dtype=float)
    out = (1.0 - g) / t
    small = t < 1e-4
    if np.any(small):
        c1 = float(law.coefficient(1))
        c2 = float(law.coefficient(2))
        ts = t[small]
        out[small] = c1 * ts - 0.5 * c2 * ts ** 3
    return out


class TransformTable:
    """``h`` and ``(1 - g) h / t`` tabulated on composite Gauss-Legendre nodes."""

    def __init__(self, law: HypergeometricLaw, config: SplitConfig, order: int | None = None):
        self.law = law
        self.config = config
        order = config.order if order is None else order
        X = config.x2
        edges, t, w = _gl_panels(0.0, X, config.h, order)
        # cumulative int_0^t (1 - g)/xi over panel edges
        u, wu = np.polynomial.legendre.leggauss(config.order)
        ep, tp, wp = _gl_panels(0.0, X, config.h, config.order)
        panel_int = np.sum(wp * _one_minus_g_over_t(law, tp), axis=1)
        cum = np.concatenate([[0.0], np.cumsum(panel_int)])
        # from the panel start to each node
        lo = edges[:-1, None]
        half = 0.5 * (t - lo)
        sub_t = half[..., None] * u + (lo + half)[..., None]
        sub_w = half[..., None] * wu
        partial = np.sum(sub_w * _one_minus_g_over_t(law, sub_t), axis=2)
        ji_n = cum[:-1, None] + partial
        self.edges = edges
        self.t = t.ravel()
        self.w = w.ravel()
        self.h = np.exp(-ji_n).ravel()
        self.dh = (_one_minus_g_over_t(law, t) * np.exp(-ji_n)).ravel()  # equals -h'
        self.h_edge = np.exp(-cum)

    def h_at_edge(self, s: float) -> float:
        i = int(round(s / self.config.h))
        return float(self.h_edge[i])


@lru_cache(maxsize=32)
def _table(law: HypergeometricLaw, config: SplitConfig, order: int) -> TransformTable:
    return TransformTable(law, config, order)


@lru_cache(maxsize=32)
def _tail(law: HypergeometricLaw, nu_max: float) -> ExpSum:
    return transform_tail_expansion(law, nu_max)


def _density_from_table(tab: TransformTable, tail: ExpSum, x: np.ndarray) -> np.ndarray:
    cfg = tab.config
    x1, x2 = cfg.x1, cfg.x2
    ax = np.abs(x)
    out = np.empty_like(ax)
    with np.errstate(invalid="ignore"):
        tail_val = tail.fourier_tail(ax, x2, "cos")
    direct = ax < 0.05
    if np.any(direct):
        xd = ax[direct]
        out[direct] = np.cos(np.outer(xd, tab.t)) @ (tab.w * tab.h)
    if np.any(~direct):
        xs = ax[~direct]
        inner = tab.t <= x1
        mid = ~inner
        piece1 = np.cos(np.outer(xs, tab.t[inner])) @ (tab.w[inner] * tab.h[inner])
        bound1 = -np.sin(xs * x1) * tab.h_at_edge(x1) / xs
        st = np.sin(np.outer(xs, tab.t[mid]))
        piece2 = (st @ (tab.w[mid] * tab.dh[mid])) / xs
        bound2 = np.sin(xs * x2) * tab.h_at_edge(x2) / xs
        out[~direct] = piece1 + bound1 + piece2 + bound2
    out = out + tail_val
    out = out / math.pi
    out[ax == 0.0] = np.inf
    return out


def _cdf_from_table(tab: TransformTable, tail: ExpSum, x: np.ndarray) -> np.ndarray:
    x2 = tab.config.x2
    body = np.sin(np.outer(x, tab.t)) @ (tab.w * tab.h / tab.t)
    return 0.5 + (body + tail.fourier_tail(x, x2, "sin")) / math.pi


def _evaluate(law, x, scheme, kernel):
    scheme = SplitConfig() if scheme is None else scheme
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    tail = _tail(law, scheme.nu_max)
    val = kernel(_table(law, scheme, scheme.order), tail, xa)
    ref = kernel(_table(law, scheme, max(6, scheme.order * 5 // 8)), tail, xa)
    with np.errstate(invalid="ignore"):
        err = np.abs(val - ref)
    err = np.where(np.isfinite(err), err, 0.0) + tail.order_bound(scheme.x2) / scheme.x2 + 1e-12
    return val, err


def stationary_density(law: HypergeometricLaw, x, scheme: SplitConfig | None = None):
    """
    Stationary density ``f(x)`` of the simple shot noise.

    Scalar input gives a float, array input an array.  ``f`` is even and
    has a logarithmic singularity at ``x = 0``, where ``inf`` is returned.
    """
    val, _ = _evaluate(law, x, scheme, _density_from_table)
    return float(val[0]) if np.ndim(x) == 0 else val


def stationary_density_with_error(law, x, scheme: SplitConfig | None = None):
    """Like :func:`stationary_density` but also returns an error estimate."""
    val, err = _evaluate(law, x, scheme, _density_from_table)
    if np.ndim(x) == 0:
        return float(val[0]), float(err[0])
    return val, err


def stationary_cdf(law: HypergeometricLaw, x, scheme: SplitConfig | None = None):
    """``F(x) = 1/2 + (1/pi) int_0^inf sin(x t) h(t) / t dt``."""
    val, _ = _evaluate(law, x, scheme, _cdf_from_table)
    return float(val[0]) if np.ndim(x) == 0 else val


def density_grid(law: HypergeometricLaw, xs, scheme: SplitConfig | None = None) -> DensityGrid:
    scheme = SplitConfig() if scheme is None else scheme
    xs = np.asarray(xs, dtype=float)
    f, err = stationary_density_with_error(law, xs, scheme)
    return DensityGrid(xs, f, "fourier-split", (scheme.x1, scheme.x2, scheme.h), err,
                       meta={"law": {"a": [str(v) for v in law.a], "b": [str(v) for v in law.b]},
                             "config": asdict(scheme)})


def refined_grid(lo: float, hi: float, n: int = 2001, *, center: float = 0.0,
                 min_step: float = 1e-9) -> np.ndarray:
    """
    Uniform grid on ``[lo, hi]`` merged with geometrically spaced points
    around ``center``, for tabulating a CDF across a singular density.
    """
    xs = [np.linspace(lo, hi, n)]
    for sgn, end in ((1.0, hi - center), (-1.0, center - lo)):
        if end > min_step:
            xs.append(center + sgn * np.geomspace(min_step, end, max(n // 4, 10)))
    xs.append([center])
    return np.unique(np.concatenate(xs))


def cdf_interpolant(cdf_values_x: np.ndarray, cdf_values: np.ndarray):
    """Monotone piecewise-linear CDF from tabulated values, clipped to [0, 1]."""
    xs = np.asarray(cdf_values_x, dtype=float)
    Fs = np.clip(np.maximum.accumulate(np.asarray(cdf_values, dtype=float)), 0.0, 1.0)

    def cdf(v):
        return np.interp(v, xs, Fs, left=0.0, right=1.0)

    return cdf
