"""
Monte-Carlo reference for the stationary laws.

Two samplers are provided: independent chains of the recurrence
``W' = U1 ... Ul (W + Lambda)`` started from zero, and the continuous-time
sum ``W_T = sum Lambda_k exp(-(T - t_k))`` over Poisson arrivals on
``[0, T]``.  Samples are generated in fixed-size chunks, each with its own
stream spawned from the seed, so the output depends on the seed only and
not on how the chunks are scheduled.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from .errors import ConfigError
from .inversion import DensityGrid
from .specfun import LAW_REGISTRY, HypergeometricLaw

CHUNK = 1 << 16
THREADS_ENV = "SHOTNOISE_THREADS"

_TAGS = {
    "deterministic": 1,
    "gamma": 1,
    "beta": 2,
    "laplace": 1,
    "cauchy": 0,
    "normal": 0,
    "arcsine": 0,
    "bernoulli": 0,
    "arcsine_plus_bernoulli": 0,
}


@dataclass(frozen=True)
class AmplitudeLaw:
    """
    Amplitude distribution from the catalog, times ``scale``.

    ``beta(a, b)`` is the law with Laplace transform ``1F1(a; b; -s)``, a
    Beta(a, b - a) variable; ``laplace(a)`` has characteristic function
    ``(1 + s^2)^(-a)``; ``arcsine`` is ``cos(pi V)`` and ``bernoulli`` is
    ``+-1``.
    """

    tag: str
    params: tuple = ()
    scale: float = 1.0

    def __post_init__(self):
        if self.tag not in _TAGS:
            raise ConfigError(f"tag: unknown amplitude law {self.tag!r}")
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))
        if len(self.params) != _TAGS[self.tag]:
            raise ConfigError(f"params: {self.tag} takes {_TAGS[self.tag]} parameter(s)")
        if self.tag != "deterministic" and any(not p > 0 for p in self.params):
            raise ConfigError("params: must be positive")
        if self.tag == "beta" and not self.params[1] > self.params[0]:
            raise ConfigError("params: beta(a, b) needs b > a")
        if not self.scale > 0:
            raise ConfigError("scale: must be positive")

    @classmethod
    def parse(cls, text: str) -> "AmplitudeLaw":
        """``'gamma(2)'``, ``'beta(1,3)'``, ``'bernoulli*2'`` style strings."""
        text = text.strip()
        scale = 1.0
        if "*" in text:
            text, s = text.split("*", 1)
            scale = float(s)
        if "(" in text:
            tag, rest = text.split("(", 1)
            params = tuple(float(v) for v in rest.rstrip(")").split(",") if v.strip())
        else:
            tag, params = text, ()
        return cls(tag.strip(), params, scale)

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        t, p = self.tag, self.params
        if t == "deterministic":
            x = np.full(n, p[0])
        elif t == "gamma":
            x = rng.standard_gamma(p[0], n)
        elif t == "beta":
            x = rng.beta(p[0], p[1] - p[0], n)
        elif t == "laplace":
            x = rng.standard_gamma(p[0], n) - rng.standard_gamma(p[0], n)
        elif t == "cauchy":
            x = rng.standard_cauchy(n)
        elif t == "normal":
            x = rng.standard_normal(n)
        elif t == "arcsine":
            x = np.cos(math.pi * rng.random(n))
        elif t == "bernoulli":
            x = np.where(rng.random(n) < 0.5, -1.0, 1.0)
        else:
            x = np.cos(math.pi * rng.random(n)) + np.where(rng.random(n) < 0.5, -1.0, 1.0)
        return self.scale * x

    @property
    def even(self) -> bool:
        return self.tag not in ("deterministic", "gamma", "beta")

    def hypergeometric(self) -> HypergeometricLaw:
        """The matching law with characteristic function ``pFq(a; b; -s^2)``."""
        table = {
            ("arcsine_plus_bernoulli", 1.0): "example",
            ("bernoulli", 2.0): "bernoulli",
            ("arcsine", 2.0): "arcsine",
            ("normal", math.sqrt(2.0)): "normal",
        }
        for (tag, sc), name in table.items():
            if tag == self.tag and abs(sc - self.scale) < 1e-12:
                return HypergeometricLaw.named(name)
        if self.tag == "laplace" and self.scale == 1.0:
            return HypergeometricLaw((self.params[0],), ())
        raise ConfigError(f"law: {self} has no registered pFq(a; b; -s^2) form")


EXAMPLE_AMPLITUDE = AmplitudeLaw("arcsine_plus_bernoulli")


def sample_amplitude(law: AmplitudeLaw, rng: np.random.Generator) -> float:
    """One draw of the amplitude."""
    return float(law.sample(rng, 1)[0])


@dataclass(frozen=True)
class SimulationConfig:
    law: AmplitudeLaw = EXAMPLE_AMPLITUDE
    l: int = 1
    n_samples: int = 100_000
    burn_in: int = 64
    seed: int = 0
    poisson_rate: float = 1.0

    def __post_init__(self):
        if self.l < 1:
            raise ConfigError("l: must be >= 1")
        if self.n_samples < 1000:
            raise ConfigError("n_samples: must be >= 1000")
        if self.burn_in < 50:
            raise ConfigError("burn_in: must be >= 50")
        if not 0 <= self.seed < 2 ** 64:
            raise ConfigError("seed: must be a 64-bit unsigned integer")
        if not self.poisson_rate > 0:
            raise ConfigError("poisson_rate: must be positive")

    def to_dict(self) -> dict:
        return {"law": {"tag": self.law.tag, "params": list(self.law.params), "scale": self.law.scale},
                "l": self.l, "n_samples": self.n_samples, "burn_in": self.burn_in,
                "seed": self.seed, "poisson_rate": self.poisson_rate}


def _threads() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        raise ConfigError(f"{THREADS_ENV}: must be an integer") from None


def _chunked(n: int, seed: int, salt: int, work) -> np.ndarray:
    sizes = [CHUNK] * (n // CHUNK) + ([n % CHUNK] if n % CHUNK else [])
    seqs = np.random.SeedSequence([seed, salt]).spawn(len(sizes))
    jobs = [(np.random.default_rng(sq), m) for sq, m in zip(seqs, sizes)]
    nthreads = _threads()
    if nthreads == 1:
        parts = [work(r, m) for r, m in jobs]
    else:
        with ThreadPoolExecutor(nthreads) as ex:
            parts = list(ex.map(lambda j: work(*j), jobs))
    return np.concatenate(parts) if parts else np.empty(0)


def simulate_recurrence(config: SimulationConfig) -> np.ndarray:
    """``n_samples`` independent chains, each run ``burn_in`` steps from zero."""
    law, l, steps = config.law, config.l, config.burn_in

    def work(rng, m):
        w = np.zeros(m)
        for _ in range(steps):
            u = rng.random((l, m)).prod(axis=0) if l > 1 else rng.random(m)
            w = u * (w + law.sample(rng, m))
        return w

    return _chunked(config.n_samples, config.seed, 1, work)


def simulate_shot_noise(config: SimulationConfig, T: float = 30.0) -> np.ndarray:
    """
    ``W_T`` for Poisson arrivals of intensity ``poisson_rate`` on ``[0, T]``.

    With ``l > 1`` only every ``l``-th arrival carries an amplitude; the
    first carrying index is uniform on ``0 .. l-1`` so that ``W_T`` does not
    depend on the time origin.
    """
    if T < 20:
        raise ConfigError("T: horizon must be >= 20")
    law, l, rate = config.law, config.l, config.poisson_rate

    def work(rng, m):
        counts = rng.poisson(rate * T, m)
        total = int(counts.sum())
        owner = np.repeat(np.arange(m), counts)
        times = rng.random(total) * T
        if l > 1:
            order = np.lexsort((times, owner))
            times = times[order]
            starts = np.concatenate([[0], np.cumsum(counts)[:-1]])
            rank = np.arange(total) - np.repeat(starts, counts)
            phase = rng.integers(0, l, m)
            keep = (rank % l) == np.repeat(phase, counts)
            times, owner = times[keep], owner[keep]
        amp = law.sample(rng, times.size)
        return np.bincount(owner, weights=amp * np.exp(-(T - times)), minlength=m)

    return _chunked(config.n_samples, config.seed, 2 + l, work)


# ---------------------------------------------------------------------------
# Statistics
# ---------------------------------------------------------------------------

def ks_distance(samples, cdf) -> float:
    """Exact one-sample Kolmogorov-Smirnov statistic against a callable CDF."""
    x = np.sort(np.asarray(samples, dtype=float))
    n = x.size
    if n == 0:
        raise ConfigError("samples: empty")
    F = np.asarray(cdf(x), dtype=float)
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - F), np.max(F - (i - 1) / n)))


def ks_two_sample(a, b) -> float:
    return float(stats.ks_2samp(a, b, method="asymp").statistic)


def histogram(samples, bins=200, range=None) -> DensityGrid:
    """
    Normalized histogram with Poisson standard errors per bin.  Empty bins
    carry zero density and are listed under ``meta['empty_bins']``.
    """
    samples = np.asarray(samples, dtype=float)
    n = samples.size
    counts, edges = np.histogram(samples, bins=bins, range=range)
    width = np.diff(edges)
    f = counts / (n * width)
    se = np.sqrt(counts) / (n * width)
    centers = 0.5 * (edges[1:] + edges[:-1])
    empty = counts == 0
    return DensityGrid(centers, f, "monte-carlo", (float(edges[0]), float(edges[-1]), float(width[0])),
                       se, stderr=se, count=counts,
                       meta={"n": int(n), "edges": edges.tolist(),
                             "empty_bins": np.flatnonzero(empty).tolist()})


@dataclass
class MomentEstimate:
    value: float
    stderr: float

    def within(self, target: float, k: float = 3.0) -> bool:
        return abs(self.value - target) <= k * self.stderr


def sample_moment(samples, order: int) -> MomentEstimate:
    v = np.asarray(samples, dtype=float) ** order
    return MomentEstimate(float(v.mean()), float(v.std(ddof=1) / math.sqrt(v.size)))


@dataclass
class Chi2Result:
    statistic: float
    dof: int
    threshold: float
    bins_used: int
    meta: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.statistic <= self.threshold


def chi2_test(samples, edges, probs, *, alpha: float = 0.01, min_expected: float = 20.0) -> Chi2Result:
    """
    Pearson chi-square of binned samples against bin probabilities.

    Bins with expected count below ``min_expected`` are pooled into one
    remainder cell together with the mass outside ``edges``.
    """
    samples = np.asarray(samples, dtype=float)
    n = samples.size
    counts, _ = np.histogram(samples, bins=edges)
    probs = np.asarray(probs, dtype=float)
    expected = n * probs
    ok = expected >= min_expected
    obs = list(counts[ok])
    exp = list(expected[ok])
    rest_obs = n - sum(obs)
    rest_exp = n - sum(exp)
    if rest_exp >= min_expected:
        obs.append(rest_obs)
        exp.append(rest_exp)
    obs, exp = np.array(obs, dtype=float), np.array(exp)
    stat = float(np.sum((obs - exp) ** 2 / exp))
    dof = len(obs) - 1
    return Chi2Result(stat, dof, float(stats.chi2.ppf(1.0 - alpha, dof)), len(obs),
                      meta={"n": int(n), "pooled_remainder": bool(rest_exp >= min_expected)})


def registry_amplitude(name: str) -> AmplitudeLaw:
    """Sampler matching a registry law name."""
    table = {"example": EXAMPLE_AMPLITUDE,
             "bernoulli": AmplitudeLaw("bernoulli", scale=2.0),
             "arcsine": AmplitudeLaw("arcsine", scale=2.0),
             "normal": AmplitudeLaw("normal", scale=math.sqrt(2.0))}
    if name not in LAW_REGISTRY or name not in table:
        raise ConfigError(f"law: no sampler for {name!r}")
    return table[name]
