"""
Validation harness: the acceptance checks of the package, each runnable
from the CLI (``shotnoise acceptance --criterion N``) and from the tests.

Every check returns a :class:`CheckResult` with one line per sub-check so
that a failure says which number missed which target.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import numpy as np
from scipy.special import j0

from .closedforms import CLOSED_FORMS, bin_probabilities, f0_simple, f0_triggered, f_waiting_time
from .hyperint import (
    EXAMPLE,
    asympt_forms,
    cji_ci_representation,
    cji_family,
    integration_constants,
    iterated_expansion,
)
from .inversion import (
    DensityGrid,
    cdf_interpolant,
    density_grid,
    normalization_constant,
    refined_grid,
    stationary_cdf,
    stationary_density,
)
from .montecarlo import (
    SimulationConfig,
    chi2_test,
    ks_distance,
    ks_two_sample,
    sample_moment,
    simulate_recurrence,
    simulate_shot_noise,
)
from .saddle import density_tail, find_saddle
from .specfun import EULER_GAMMA, ZETA3, pfq, polygamma
from .triggered import (
    TriggeredConfig,
    amplitude_moments,
    build_model,
    ode_residual,
    series_coefficients,
    triggered_cdf,
    triggered_density,
)


@dataclass
class CheckResult:
    criterion: int
    title: str
    lines: list = field(default_factory=list)
    elapsed: float = 0.0
    time_limit: float = math.inf

    def add(self, name: str, ok: bool, detail: str) -> None:
        self.lines.append((name, bool(ok), detail))

    @property
    def within_time(self) -> bool:
        return self.elapsed <= self.time_limit

    @property
    def passed(self) -> bool:
        return all(ok for _, ok, _ in self.lines) and self.within_time

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        failed = [n for n, ok, _ in self.lines if not ok]
        if not self.within_time:
            failed.append(f"runtime {self.elapsed:.1f}s > {self.time_limit:.0f}s")
        tail = f" (failed: {', '.join(failed)})" if failed else ""
        return f"criterion {self.criterion:2d} {status}: {self.title}{tail} [{self.elapsed:.2f}s]"

    def report(self) -> str:
        out = [self.summary()]
        for name, ok, detail in self.lines:
            out.append(f"    {'ok  ' if ok else 'FAIL'} {name}: {detail}")
        return "\n".join(out)


def _timed(criterion: int, title: str, limit: float):
    def deco(fn):
        def run(**kw) -> CheckResult:
            res = CheckResult(criterion, title, time_limit=limit)
            t0 = time.perf_counter()
            fn(res, **kw)
            res.elapsed = time.perf_counter() - t0
            return res

        run.__name__ = fn.__name__
        run.__doc__ = fn.__doc__
        return run

    return deco


def _close(res, name, value, target, tol):
    err = abs(value - target)
    res.add(name, err <= tol, f"{value:.15g} vs {target:.15g} (|diff| {err:.2e}, tol {tol:g})")


@_timed(1, "integration constants", 1.0)
def constant_identities(res: CheckResult) -> None:
    c = integration_constants(EXAMPLE)
    _close(res, "m1 = ln 2 - gamma", c.m[0], math.log(2.0) - EULER_GAMMA, 1e-10)
    _close(res, "m2 = pi^2/4", c.m[1], math.pi ** 2 / 4, 1e-10)
    comb = (polygamma(1, 0.25) + polygamma(1, 0.75) - 2 * polygamma(1, 0.5)) / 8.0
    with mpmath.workdps(30):
        ref = float((mpmath.psi(1, 0.25) + mpmath.psi(1, 0.75) - 2 * mpmath.psi(1, 0.5)) / 8)
    _close(res, "m2 polygamma combination", comb, ref, 1e-10)
    _close(res, "m2 combination = m2 of the law", comb, c.m[1], 1e-10)
    _close(res, "m3 = zeta(3)/3", c.m[2], ZETA3 / 3, 1e-10)


@_timed(2, "product identity 2F3 = cos J0", 1.0)
def product_identity(res: CheckResult) -> None:
    xs = np.linspace(0.0, 10.0, 400)
    err = max(abs(pfq(EXAMPLE, -x * x) - math.cos(x) * float(j0(x))) for x in xs)
    res.add("max |pfq - cos J0| on [0, 10]", err < 1e-10, f"{err:.2e} (tol 1e-10)")


def cji_direct_quadrature(x: float, X: float = 400.0) -> float:
    """``int_x^X cos(t) J0(t)/t dt`` by Gauss-Legendre panels plus the far tail."""
    edges = np.append(np.arange(x, X, 0.5), X)
    u, w = np.polynomial.legendre.leggauss(20)
    a, b = edges[:-1, None], edges[1:, None]
    t = 0.5 * (b - a) * u + 0.5 * (a + b)
    ww = 0.5 * (b - a) * w
    return float(np.sum(ww * np.cos(t) * j0(t) / t)) + float(iterated_expansion(EXAMPLE, 1)(X))


@_timed(3, "CJi cross-representation", 5.0)
def cji_cross_representation(res: CheckResult) -> None:
    for x in (0.5, 1.0, 2.0, 5.0, 10.0):
        a = cji_family(1, x)
        b = cji_ci_representation(x)
        c = cji_direct_quadrature(x)
        d = max(abs(a - b), abs(a - c), abs(b - c))
        res.add(f"x={x}", d < 1e-7, f"series {a:.12f}, Ci {b:.12f}, quad {c:.12f} (max diff {d:.1e})")


@_timed(4, "asymptotic overlap", 1.0)
def asymptotic_overlap(res: CheckResult) -> None:
    xs = np.linspace(20.0, 40.0, 81)
    worst1 = max(abs(cji_family(1, x) - asympt_forms("CJI", x)) / (5 * x ** -2.5) for x in xs)
    res.add("CJi vs expansion", worst1 <= 1.0, f"max |diff| / (5 x^-2.5) = {worst1:.3g}")
    worst2 = max(abs(2 * cji_family(2, x) - asympt_forms("CJI2", x, printed=True)) / (5 * x ** -2.5)
                 for x in xs)
    res.add("2 CJi2 vs (4 - 1/(6x))/sqrt(pi x)", worst2 <= 1.0,
            f"max |diff| / (5 x^-2.5) = {worst2:.3g}")


@_timed(5, "normalization", 60.0)
def normalization(res: CheckResult) -> None:
    g = density_grid(EXAMPLE, np.linspace(-6.0, 6.0, 301))
    total = g.integral()
    res.add("integral on [-6, 6], 301 points", abs(total - 1) < 5e-3, f"{total:.6f} (tol 5e-3)")
    _close(res, "C = 2 exp(-gamma)", normalization_constant(EXAMPLE), 2 * math.exp(-EULER_GAMMA), 1e-12)


@_timed(6, "simple shot noise vs Monte Carlo", 120.0)
def simple_mc(res: CheckResult, n: int = 1_000_000, seed: int = 20240601) -> None:
    w = simulate_recurrence(SimulationConfig(n_samples=n, seed=seed, l=1))
    xs = refined_grid(-8.0, 8.0, 3201)
    ks = ks_distance(w, cdf_interpolant(xs, stationary_cdf(EXAMPLE, xs)))
    res.add("KS vs inversion CDF", ks < 0.01, f"{ks:.5f} (tol 0.01, n={n})")
    m2 = sample_moment(w, 2)
    res.add("E W^2 = 3/4", m2.within(0.75), f"{m2.value:.5f} +- {m2.stderr:.5f}")


@_timed(7, "triggered series coefficients", 1.0)
def triggered_series(res: CheckResult) -> None:
    K = amplitude_moments(EXAMPLE, 14)
    c = series_coefficients(K, 14)
    res.add("c2 = -3/32", c[2] == Fraction(-3, 32), str(c[2]))
    res.add("c4 = 97/9216", c[4] == Fraction(97, 9216), str(c[4]))
    r, h = ode_residual(EXAMPLE, c, 0.1)
    res.add("ODE residual at s=0.1, N=14", abs(r / h) < 1e-20, f"{abs(r / h):.2e} relative (tol 1e-20)")


@_timed(8, "triggered density vs Monte Carlo", 300.0)
def triggered_mc(res: CheckResult, n: int = 1_000_000, seed: int = 20240602) -> None:
    model = build_model(EXAMPLE, TriggeredConfig())
    w = simulate_recurrence(SimulationConfig(n_samples=n, seed=seed, l=2))
    xs = refined_grid(-8.0, 8.0, 3201)
    ks = ks_distance(w, cdf_interpolant(xs, triggered_cdf(model, xs)))
    res.add("KS vs triggered CDF", ks < 0.015, f"{ks:.5f} (tol 0.015, n={n})")
    grid = np.linspace(-6.0, 6.0, 301)
    total = DensityGrid(grid, triggered_density(model, grid), "fourier-split").integral()
    res.add("integral on [-6, 6], 301 points", abs(total - 1) < 1e-2, f"{total:.6f} (tol 1e-2)")


@_timed(9, "closed forms", 600.0)
def closed_forms(res: CheckResult, n: int = 10_000_000, seed: int = 20240603, bins: int = 200) -> None:
    _close(res, "f0_simple(1)", f0_simple(1.0), 1 / (2 * math.pi), 1e-12)
    _close(res, "f0_triggered(1)", f0_triggered(1.0), (1 - math.pi / 4) / math.pi, 1e-12)
    _close(res, "f_waiting_time(1)", f_waiting_time(1.0), (3 - math.pi / 2) / (4 * math.pi), 1e-12)
    seqs = np.random.SeedSequence(seed).spawn(len(CLOSED_FORMS))
    for sq, (name, dens) in zip(seqs, CLOSED_FORMS.items()):
        rng = np.random.default_rng(sq)
        samples = dens.sample(rng, n)
        edges = np.linspace(dens.support[0], dens.support[1], bins + 1)
        r = chi2_test(samples, edges, bin_probabilities(dens, edges))
        res.add(f"chi2 {name}", r.passed,
                f"{r.statistic:.1f} on {r.dof} dof (1% threshold {r.threshold:.1f})")


@_timed(10, "saddle point tail", 30.0)
def saddle_sanity(res: CheckResult) -> None:
    for x in (5.0, 10.0, 50.0, 1e3):
        r = find_saddle(x)
        res.add(f"residual x={x:g}", abs(r.residual) < 1e-11 * x, f"{abs(r.residual):.2e} (tol {1e-11 * x:.0e})")
    xs = (4.0, 5.0, 6.0, 7.0)
    ratios = [density_tail(x) / stationary_density(EXAMPLE, x) for x in xs]
    gaps = [abs(q - 1.0) for q in ratios]
    mono = all(b < a for a, b in zip(gaps, gaps[1:]))
    res.add("ratio monotone toward 1 on 4..7", mono,
            ", ".join(f"{x:g}: {q:.5f}" for x, q in zip(xs, ratios)))


@_timed(11, "recurrence vs shot-noise sampler", 180.0)
def sampler_equivalence(res: CheckResult, n: int = 1_000_000, seed: int = 20240604) -> None:
    cfg = SimulationConfig(n_samples=n, seed=seed, l=1)
    a = simulate_recurrence(cfg)
    b = simulate_shot_noise(cfg, 30.0)
    ks = ks_two_sample(a, b)
    res.add("two-sample KS", ks < 0.005, f"{ks:.5f} (tol 0.005, n={n})")


CRITERIA = {
    1: constant_identities,
    2: product_identity,
    3: cji_cross_representation,
    4: asymptotic_overlap,
    5: normalization,
    6: simple_mc,
    7: triggered_series,
    8: triggered_mc,
    9: closed_forms,
    10: saddle_sanity,
    11: sampler_equivalence,
}


def run_criterion(k: int) -> CheckResult:
    return CRITERIA[k]()
