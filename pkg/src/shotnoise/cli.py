"""
Command-line front end.

Each subcommand writes a CSV (to ``--out`` or stdout) and, when ``--out``
is given, a JSON run manifest next to it (``<out>.manifest.json``).  Exit
codes: 0 success, 1 usage or configuration error, 2 failed validation.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import platform
import sys
import time

import numpy as np

from . import __version__
from .errors import ShotNoiseError
from .specfun import LAW_REGISTRY, HypergeometricLaw

EXIT_OK, EXIT_USAGE, EXIT_VALIDATION = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


# ---------------------------------------------------------------------------
# Argument helpers
# ---------------------------------------------------------------------------

def parse_grid(text: str) -> np.ndarray:
    """``start:stop:count`` -> ``linspace(start, stop, count)``."""
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"--grid: expected start:stop:count, got {text!r}")
    try:
        a, b, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise UsageError(f"--grid: cannot parse {text!r}") from None
    if n < 1 or not (math.isfinite(a) and math.isfinite(b)):
        raise UsageError(f"--grid: count must be >= 1 and bounds finite, got {text!r}")
    return np.linspace(a, b, n)


def _floats(text: str | None) -> tuple:
    if text is None or text.strip() == "":
        return ()
    return tuple(v.strip() for v in text.split(","))


def resolve_law(args) -> HypergeometricLaw:
    if getattr(args, "a", None) is not None or getattr(args, "b", None) is not None:
        try:
            return HypergeometricLaw(_floats(args.a), _floats(args.b))
        except ShotNoiseError as exc:
            raise UsageError(f"--a/--b: {exc}") from None
    if args.law not in LAW_REGISTRY:
        raise UsageError(f"--law: unknown law {args.law!r}; choose from {sorted(LAW_REGISTRY)}")
    return HypergeometricLaw.named(args.law)


def _fmt(v) -> str:
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    v = float(v)
    if math.isfinite(v):
        return repr(v)
    return "inf" if v > 0 else ("-inf" if v < 0 else "nan")


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([c if isinstance(c, str) else _fmt(c) for c in r])
    return buf.getvalue()


class Run:
    """Collects outputs and writes the manifest."""

    def __init__(self, args, argv):
        self.args = args
        self.argv = list(argv)
        self.t0 = time.perf_counter()
        self.outputs: list[str] = []
        self.results: dict = {}

    def emit(self, text: str, path: str | None = None, suffix: str = "") -> None:
        path = path if path is not None else self.args.out
        if path is None:
            sys.stdout.write(text)
            return
        if suffix:
            path = path + suffix
        with open(path, "w", newline="") as fh:
            fh.write(text)
        self.outputs.append(path)

    def finish(self) -> None:
        if self.args.out is None:
            return
        cfg = {k: v for k, v in sorted(vars(self.args).items()) if k not in ("func",)}
        import mpmath
        import scipy
        doc = {
            "subcommand": self.args.command,
            "argv": self.argv,
            "config": cfg,
            "seed": getattr(self.args, "seed", None),
            "versions": {"shotnoise": __version__, "python": platform.python_version(),
                         "numpy": np.__version__, "scipy": scipy.__version__,
                         "mpmath": mpmath.__version__},
            "outputs": self.outputs,
            "results": self.results,
            "wall_time": time.perf_counter() - self.t0,
        }
        with open(self.args.out + ".manifest.json", "w") as fh:
            json.dump(doc, fh, indent=1, sort_keys=True, default=_json_default)
            fh.write("\n")


def _json_default(o):
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    return str(o)


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_specfun_table(args, run: Run) -> int:
    from . import hyperint, specfun

    xs = parse_grid(args.grid)
    law = resolve_law(args)
    n = args.order
    fns = {
        "cji": lambda x: hyperint.cji(n, x),
        "cjin": lambda x: hyperint.cjin(x),
        "cii": lambda x: hyperint.cii_family(x),
        "log-ciin": lambda x: hyperint.log_ciin(x),
        "pfq": lambda x: specfun.pfq(law, -x * x),
        "ti": lambda x: hyperint.ti_iter(law, n, x),
        "tin": lambda x: hyperint.tin_iter(law, n, x),
        "ji": lambda x: hyperint.hyp_integral(law, n, x),
        "polygamma": lambda x: specfun.polygamma(n, x),
        "clausen2": lambda x: specfun.clausen2(x),
        "ci": lambda x: float(specfun.cosine_integral(x)),
    }
    fn = fns[args.fn]
    rows = [(x, fn(float(x))) for x in xs]
    run.emit(_csv(["x", args.fn], rows))
    return EXIT_OK


def cmd_density(args, run: Run) -> int:
    from .inversion import SplitConfig, density_grid

    law = resolve_law(args)
    scheme = SplitConfig(x1=args.x1, x2=args.x2, h=args.h)
    g = density_grid(law, parse_grid(args.grid), scheme)
    run.results.update(_mass(g))
    run.results.update({"singular": g.singular, "negative": g.negative_flag})
    run.emit(g.to_csv())
    return EXIT_OK


def cmd_triggered(args, run: Run) -> int:
    from .triggered import TriggeredConfig, build_model, triggered_density_grid

    law = resolve_law(args)
    model = build_model(law, TriggeredConfig(T=args.T))
    g = triggered_density_grid(model, parse_grid(args.grid))
    run.results.update(_mass(g))
    run.results.update({"C1": model.C1, "C2": model.C2,
                        "tail_dominant": g.meta["tail_dominant"]})
    run.emit(g.to_csv())
    if args.out is not None:
        run.emit(json.dumps(model.to_dict(), indent=1, sort_keys=True) + "\n", suffix=".model.json")
    return EXIT_OK


def _mass(g) -> dict:
    """Grid integral; a grid starting at 0 covers half of an even density."""
    total = g.integral()
    out = {"integral": total}
    if g.x.size and g.x[0] == 0.0:
        out["integral_even_extension"] = 2.0 * total
    return out


def cmd_tail(args, run: Run) -> int:
    from .saddle import find_saddle

    law = resolve_law(args)
    rows = []
    for x in parse_grid(args.grid):
        r = find_saddle(float(x), law)
        rows.append((r.x, r.s0, r.phi, r.phi2, r.f_asymptotic))
    run.emit(_csv(["x", "s0", "phi", "phi2", "f"], rows))
    return EXIT_OK


def cmd_closed_form(args, run: Run) -> int:
    from .closedforms import CLOSED_FORMS

    name = args.name or args.law
    if name not in CLOSED_FORMS:
        raise UsageError(f"--name: unknown closed form {name!r}; choose from {sorted(CLOSED_FORMS)}")
    d = CLOSED_FORMS[name]
    x, f, removed = d.grid(parse_grid(args.grid))
    run.results["singular_removed"] = removed
    run.emit(_csv(["x", "f"], zip(x, f)))
    return EXIT_OK


def _mc_config(args):
    from .montecarlo import SimulationConfig, registry_amplitude, AmplitudeLaw

    amp = AmplitudeLaw.parse(args.amplitude) if args.amplitude else registry_amplitude(args.law)
    return SimulationConfig(law=amp, l=args.l, n_samples=args.samples, burn_in=args.burn_in,
                            seed=args.seed, poisson_rate=args.rate)


def _simulate(args, cfg):
    from .montecarlo import simulate_recurrence, simulate_shot_noise

    if args.mode == "shot-noise":
        return simulate_shot_noise(cfg, args.T)
    return simulate_recurrence(cfg)


def cmd_mc(args, run: Run) -> int:
    from .montecarlo import histogram, sample_moment

    cfg = _mc_config(args)
    w = _simulate(args, cfg)
    lo, hi, n = args.range
    h = histogram(w, bins=int(n), range=(lo, hi))
    m2 = sample_moment(w, 2)
    run.results.update({"config": cfg.to_dict(), "EW2": m2.value, "EW2_stderr": m2.stderr,
                        "empty_bins": h.meta["empty_bins"]})
    run.emit(h.to_csv())
    return EXIT_OK


def cmd_compare(args, run: Run) -> int:
    from .inversion import cdf_interpolant, refined_grid, stationary_cdf
    from .montecarlo import histogram, ks_distance
    from .triggered import TriggeredConfig, build_model, triggered_cdf

    law = resolve_law(args)
    cfg = _mc_config(args)
    w = _simulate(args, cfg)
    if cfg.l == 1:
        cdf_fn = lambda v: stationary_cdf(law, v)  # noqa: E731
    elif cfg.l == 2:
        model = build_model(law, TriggeredConfig())
        cdf_fn = lambda v: triggered_cdf(model, v)  # noqa: E731
    else:
        raise UsageError("--l: analytic comparison available for l = 1 and l = 2")
    span = max(8.0, float(np.max(np.abs(w))))
    xs = refined_grid(-span, span, 3201)
    ks = ks_distance(w, cdf_interpolant(xs, cdf_fn(xs)))
    lo, hi, n = args.range
    h = histogram(w, bins=int(n), range=(lo, hi))
    edges = np.asarray(h.meta["edges"])
    F = cdf_fn(edges)
    expected = np.diff(F) / np.diff(edges)
    with np.errstate(divide="ignore", invalid="ignore"):
        z = np.where(h.stderr > 0, (h.f - expected) / h.stderr, np.nan)
    passed = ks < args.threshold
    run.results.update({"ks": ks, "threshold": args.threshold, "passed": passed,
                        "n": int(w.size), "l": cfg.l})
    rows = [(x, f, se, int(c), e, zz) for x, f, se, c, e, zz in
            zip(h.x, h.f, h.stderr, h.count, expected, z)]
    run.emit(_csv(["x", "f_mc", "stderr", "count", "f_analytic", "z"], rows))
    print(f"KS = {ks:.6f} (threshold {args.threshold}) {'PASS' if passed else 'FAIL'}",
          file=sys.stderr)
    return EXIT_OK if passed else EXIT_VALIDATION


def cmd_acceptance(args, run: Run) -> int:
    from .acceptance import CRITERIA

    ks = sorted(CRITERIA) if args.criterion is None else [args.criterion]
    ok = True
    rows = []
    for k in ks:
        res = CRITERIA[k]()
        print(res.report(), file=sys.stderr)
        rows.append((str(k), "PASS" if res.passed else "FAIL", res.elapsed, res.title))
        run.results[str(k)] = {"passed": res.passed, "lines": res.lines, "elapsed": res.elapsed}
        ok &= res.passed
    run.emit(_csv(["criterion", "status", "seconds", "title"], rows))
    return EXIT_OK if ok else EXIT_VALIDATION


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def _range(text: str):
    try:
        a, b, n = text.split(":")
        return float(a), float(b), int(n)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo:hi:bins, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="shotnoise", description=__doc__.strip().splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def common(sp, grid=None):
        sp.add_argument("--law", default="example", help="registry law name")
        sp.add_argument("--a", help="comma-separated numerator parameters")
        sp.add_argument("--b", help="comma-separated denominator parameters")
        sp.add_argument("--out", help="output CSV path (manifest written alongside)")
        if grid is not None:
            sp.add_argument("--grid", default=grid, help="start:stop:count")

    sp = sub.add_parser("specfun-table", help="tabulate a special function")
    common(sp, "0.5:20:40")
    sp.add_argument("--fn", required=True,
                    choices=["cji", "cjin", "cii", "log-ciin", "pfq", "ti", "tin", "ji",
                             "polygamma", "clausen2", "ci"])
    sp.add_argument("--order", type=int, default=1)
    sp.set_defaults(func=cmd_specfun_table)

    sp = sub.add_parser("density", help="stationary density by Fourier inversion")
    common(sp, "-6:6:301")
    sp.add_argument("--x1", type=float, default=10.0)
    sp.add_argument("--x2", type=float, default=40.0)
    sp.add_argument("--h", type=float, default=0.25)
    sp.set_defaults(func=cmd_density)

    sp = sub.add_parser("triggered", help="triggered (l=2) density")
    common(sp, "-6:6:301")
    sp.add_argument("--T", type=float, default=400.0, help="inversion split point")
    sp.set_defaults(func=cmd_triggered)

    sp = sub.add_parser("tail", help="saddle-point tail")
    common(sp, "4:12:9")
    sp.set_defaults(func=cmd_tail)

    sp = sub.add_parser("closed-form", help="closed-form densities")
    common(sp, "-2:2:401")
    sp.add_argument("--name", help="closed form (f0_simple, f0_triggered, ...)")
    sp.set_defaults(func=cmd_closed_form, law=None)

    for name, fn, hlp in (("mc", cmd_mc, "Monte-Carlo histogram"),
                          ("compare", cmd_compare, "analytic density vs Monte Carlo")):
        sp = sub.add_parser(name, help=hlp)
        common(sp)
        sp.add_argument("--seed", type=int, required=True)
        sp.add_argument("--l", type=int, default=1)
        sp.add_argument("--samples", type=int, default=1_000_000)
        sp.add_argument("--burn-in", type=int, default=64)
        sp.add_argument("--mode", choices=["recurrence", "shot-noise"], default="recurrence")
        sp.add_argument("--T", type=float, default=30.0, help="shot-noise horizon")
        sp.add_argument("--rate", type=float, default=1.0, help="Poisson intensity")
        sp.add_argument("--amplitude", help="sampler such as 'gamma(2)' or 'bernoulli*2'")
        sp.add_argument("--range", type=_range, default=(-4.0, 4.0, 160), help="lo:hi:bins")
        if name == "compare":
            sp.add_argument("--threshold", type=float, default=0.01)
        sp.set_defaults(func=fn)

    sp = sub.add_parser("acceptance", help="run acceptance checks")
    sp.add_argument("--criterion", type=int, choices=range(1, 12))
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_acceptance)
    return p


def run(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            parser.print_help(sys.stderr)
            return EXIT_USAGE
        r = Run(args, argv)
        code = args.func(args, r)
        r.finish()
        return code
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except ShotNoiseError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)


def main() -> None:
    sys.exit(run())
