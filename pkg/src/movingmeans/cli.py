"""Command-line front end.

Every subcommand parses and validates its whole configuration (weights,
initial data, referenced files) before computing anything, then writes
deterministic JSON to stdout or ``--output`` and optional CSV artifacts.

Exit status: 0 on success, 1 on a domain error, 2 on a configuration error.
"""

import argparse
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import io
from .circulant import build_circulant, krafft_limit
from .companion import build_companion, companion_limit, eigenvector_identities, partial_sums
from .convex import grid as cg
from .convex.averages import (
    ProxAvgState,
    moving_epi_average,
    moving_proximal_average,
    proximal_average,
    sup_distance,
)
from .convex.conjugate import moreau_envelope
from .errors import ConfigError, MovingMeansError
from .gauss_seidel import build_T, t_limit
from .kolmogorov import iterate_kolmogorov, kolmogorov_limit, parse_generator
from .matrix_means import KINDS, moving_matrix_mean
from .recurrence import DEFAULT_MAX_ITER, DEFAULT_TOL, RecurrenceState, iterate_until, write_trace_csv
from .spectral import power_limit
from .weights import Weights, check_basic_hypothesis, cumulative, limit_functional
from . import _matrix as mx

SEED_ENV = "MOVINGMEANS_SEED"


@dataclass
class ScenarioConfig:
    """Everything a subcommand needs, validated up front."""

    command: str
    weights: Weights | None = None
    initial: list | None = None
    tol: float = DEFAULT_TOL
    max_iter: int = DEFAULT_MAX_ITER
    output: Path | None = None
    artifacts: dict = field(default_factory=dict)  # name -> output path
    seed: int = 0
    options: dict = field(default_factory=dict)


# ---------------------------------------------------------------- parsing


def _parse_number(token):
    token = token.strip()
    try:
        return Fraction(token) if "/" in token else float(token)
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"not a number: {token!r}") from exc


def _parse_list(text, what):
    items = [t for t in text.split(",") if t.strip()]
    if not items:
        raise ConfigError(f"empty {what}")
    return items


def _load_weights(args):
    if args.alphas is not None and args.weights is not None:
        raise ConfigError("give either --alphas or --weights, not both")
    if args.alphas is not None:
        return io.parse_alphas(args.alphas)
    if args.weights is not None:
        return io.weights_from_dict(io.read_json(args.weights))
    raise ConfigError("weights are required (--alphas or --weights)")


def _array_from_json(data, path):
    if isinstance(data, dict) and "rows" in data:
        return io.matrix_from_dict(data)
    try:
        return np.array(data, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{path}: not a numeric array") from exc


def _load_initial(text, exact=False):
    """``"0,3"`` (scalars) or ``"y0.json,y1.json"`` (one array per file)."""
    tokens = _parse_list(text, "initial data")
    if all(t.strip().endswith(".json") for t in tokens):
        return [_array_from_json(io.read_json(t.strip()), t.strip()) for t in tokens]
    vals = [_parse_number(t) for t in tokens]
    if exact and all(isinstance(v, Fraction) or float(v).is_integer() for v in vals):
        return [Fraction(v) for v in vals]
    return [float(v) for v in vals]


def _parse_grid(text):
    parts = _parse_list(text, "grid")
    if len(parts) != 3:
        raise ConfigError(f"--grid wants lo,hi,n, got {text!r}")
    try:
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise ConfigError(f"bad --grid {text!r}") from exc
    if not lo < hi or n < 2:
        raise ConfigError(f"--grid needs lo < hi and n >= 2, got {text!r}")
    return lo, hi, n


def _grid_function(token, grid):
    """A builtin token or a JSON file holding a grid function."""
    token = token.strip()
    if token.endswith(".json"):
        g = io.grid_function_from_dict(io.read_json(token))
        if g.grid != tuple(grid):
            raise ConfigError(f"{token}: grid {g.grid} differs from {tuple(grid)}")
        return g
    name, *params = token.split(":")
    try:
        params = [float(p) for p in params]
    except ValueError as exc:
        raise ConfigError(f"bad parameter in {token!r}") from exc
    makers = {
        "zero": (cg.zero, 0),
        "abs": (cg.absolute, 0),
        "quadratic": (cg.quadratic, 1),
        "point": (cg.indicator_point, 1),
        "indicator": (cg.indicator_interval, 2),
    }
    if name not in makers:
        raise ConfigError(f"unknown function {token!r}; use a .json file or one of {sorted(makers)}")
    fn, nparams = makers[name]
    if name == "quadratic" and not params:
        params = [1.0]
    if len(params) != nparams:
        raise ConfigError(f"{name} takes {nparams} parameter(s), got {token!r}")
    return fn(*params, *grid)


def _seed(args):
    env = os.environ.get(SEED_ENV)
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise ConfigError(f"{SEED_ENV}={env!r} is not an integer") from exc
    return args.seed


def build_config(args):
    """Validate ``args`` into a :class:`ScenarioConfig`; raises ConfigError."""
    cfg = ScenarioConfig(args.command)
    cfg.output = Path(args.output) if getattr(args, "output", None) else None
    if getattr(args, "tol", None) is not None:
        if not args.tol > 0:
            raise ConfigError("--tol must be positive")
        cfg.tol = args.tol
    if getattr(args, "max_iter", None) is not None:
        if args.max_iter < 0:
            raise ConfigError("--max-iter must be nonnegative")
        cfg.max_iter = args.max_iter
    for name in ("trace", "residuals", "csv_dir", "limit_out"):
        if getattr(args, name, None):
            cfg.artifacts[name] = Path(getattr(args, name))
    if cfg.artifacts.get("csv_dir") is not None:
        d = cfg.artifacts["csv_dir"]
        if d.exists() and not d.is_dir():
            raise ConfigError(f"--csv-dir {d} is not a directory")
        d.mkdir(parents=True, exist_ok=True)

    cmd = args.command
    if cmd == "verify":
        cfg.seed = _seed(args)
        if args.count < 1 or args.jobs < 1:
            raise ConfigError("--count and --jobs must be positive")
        suites = _parse_list(args.suites, "suite list")
        unknown = [s for s in suites if s not in SUITES]
        if unknown:
            raise ConfigError(f"unknown suites {unknown}; choose from {sorted(SUITES)}")
        cfg.options = {"suites": suites, "count": args.count, "jobs": args.jobs}
        return cfg

    cfg.weights = _load_weights(args)
    if cmd in ("limit", "iterate"):
        cfg.initial = _load_initial(args.initial, exact=cfg.weights.exact)
    elif cmd == "kmean":
        cfg.initial = [float(v) for v in _load_initial(args.initial)]
        try:
            cfg.options["generator"] = parse_generator(args.generator)
        except MovingMeansError as exc:
            raise ConfigError(str(exc)) from exc
    elif cmd == "matmean":
        cfg.initial = _load_initial(args.initial)
        cfg.options["kind"] = args.kind
    elif cmd == "gauss-seidel":
        if args.powers < 0:
            raise ConfigError("--powers must be nonnegative")
        cfg.options["powers"] = args.powers
    elif cmd in ("proxavg", "epiavg"):
        grid = _parse_grid(args.grid)
        cfg.options["grid"] = grid
        cfg.options["steps"] = args.steps
        if args.steps < 0:
            raise ConfigError("--steps must be nonnegative")
        # builtin tokens are cheap; files are read here, convexity is checked
        # when the functions are built
        cfg.options["functions"] = _parse_list(args.functions, "function list")
        for t in cfg.options["functions"]:
            if t.strip().endswith(".json"):
                io.read_json(t.strip())
        if cmd == "proxavg":
            cfg.options["method"] = args.method
            cfg.options["residual_tol"] = args.residual_tol
            cfg.options["once"] = args.once
    return cfg


# ---------------------------------------------------------------- commands


def _matrix(M):
    return io.matrix_to_dict(M)


def _cmd_limit(cfg):
    y = np.array(cfg.initial, dtype=object if cfg.weights.exact else float)
    if y.dtype == object and y.ndim > 1:
        y = y.astype(float)
    value = limit_functional(cfg.weights, y)
    if np.ndim(value) == 0:
        return value.item() if isinstance(value, np.ndarray) else value
    return np.asarray(value, dtype=float)


def _cmd_iterate(cfg):
    # iteration is numerical; exact data would only grow the denominators
    state = RecurrenceState([np.asarray(y, dtype=float) for y in cfg.initial])
    trace_path = cfg.artifacts.get("trace")
    res = iterate_until(state, cfg.weights, tol=cfg.tol, max_iter=cfg.max_iter,
                        record=trace_path is not None)
    if trace_path is not None:
        write_trace_csv(trace_path, res.trace)
    out = {
        "diagnosis": res.diagnosis,
        "iterations": res.iterations,
        "final_residual": res.final_residual,
        "limit": res.limit,
    }
    if res.period is not None:
        out["period"] = res.period
    return out


def _cmd_check(cfg, verify_roots):
    report = check_basic_hypothesis(cfg.weights, verify_roots=verify_roots)
    return report.to_dict()


def _cmd_companion(cfg):
    w = cfg.weights
    A = build_companion(w)
    res = eigenvector_identities(w)
    cum = cumulative(w)
    pl = power_limit(A)
    out = {
        "A": _matrix(A),
        "a": list(partial_sums(w)),
        "lambda": list(cum.lam),
        "eigen_residuals": {"left": res.left, "right": res.right},
        "power_limit": {"diagnosis": pl.diagnosis, "squarings": pl.squarings, "period": pl.period},
    }
    if check_basic_hypothesis(w).holds:
        L = companion_limit(w)
        out["limit"] = _matrix(L)
        if pl.exists:
            out["power_limit"]["max_error"] = float(np.max(np.abs(pl.limit - mx.to_float(L))))
    else:
        out["limit"] = None
    _csv(cfg, A=A, limit=out["limit"] and companion_limit(w))
    return out


def _cmd_gauss_seidel(cfg):
    w = cfg.weights
    T = build_T(w)
    powers = []
    P = T
    for _ in range(cfg.options["powers"]):
        powers.append(_matrix(P))
        P = mx.matmul(P, T)
    pl = power_limit(T)
    out = {
        "T": _matrix(T),
        "powers": powers,
        "power_limit": {"diagnosis": pl.diagnosis, "squarings": pl.squarings, "period": pl.period},
    }
    L = t_limit(w) if check_basic_hypothesis(w).holds else None
    out["limit"] = None if L is None else _matrix(L)
    if L is not None and pl.exists:
        out["power_limit"]["max_error"] = float(np.max(np.abs(pl.limit - mx.to_float(L))))
    _csv(cfg, T=T, limit=L)
    return out


def _cmd_circulant(cfg):
    spec = build_circulant(cfg.weights)
    L = krafft_limit(spec)
    pl = power_limit(spec.C)
    out = {
        "C": _matrix(spec.C),
        "support": list(spec.support),
        "gcd_period": spec.gcd_period,
        "diff_gcd": spec.diff_gcd,
        "limit_exists": spec.limit_exists,
        "limit": None if L is None else _matrix(L),
        "power_limit": {"diagnosis": pl.diagnosis, "squarings": pl.squarings, "period": pl.period},
    }
    _csv(cfg, C=spec.C, limit=L)
    return out


def _cmd_kmean(cfg):
    gen = cfg.options["generator"]
    w = cfg.weights
    run = iterate_kolmogorov(gen, w, cfg.initial, tol=cfg.tol, max_iter=cfg.max_iter,
                             record="trace" in cfg.artifacts)
    if "trace" in cfg.artifacts:
        write_trace_csv(cfg.artifacts["trace"], run.iterates)
    return {
        "generator": gen.name,
        "limit": kolmogorov_limit(gen, w, cfg.initial),
        "iterated_limit": run.limit,
        "iterations": run.iterations,
        "final_residual": run.final_residual,
        "diagnosis": run.diagnosis,
    }


def _cmd_matmean(cfg):
    res = moving_matrix_mean(cfg.options["kind"], cfg.weights, cfg.initial,
                             tol=cfg.tol, max_iter=cfg.max_iter)
    _csv(cfg, limit=res.limit)
    return {
        "kind": res.kind,
        "limit": _matrix(res.limit),
        "iterated_limit": None if res.iterated_limit is None else _matrix(res.iterated_limit),
        "discrepancy": res.discrepancy,
        "iterations": res.iterations,
        "final_residual": res.final_residual,
        "diagnosis": res.diagnosis,
    }


def _functions(cfg):
    return [_grid_function(t, cfg.options["grid"]) for t in cfg.options["functions"]]


def _write_function(cfg, g):
    path = cfg.artifacts.get("limit_out")
    if path is not None and g is not None:
        path.write_text(io.dumps(g.to_dict()) + "\n")


def _cmd_proxavg(cfg):
    w = cfg.weights
    gs = _functions(cfg)
    method = cfg.options["method"]
    if cfg.options["once"]:
        g = proximal_average(w.as_float(), gs, method)
        env = moreau_envelope(g).values
        expected = sum(a * moreau_envelope(f).values for a, f in zip(w.as_float(), gs))
        _write_function(cfg, g)
        return {"envelope_residual": sup_distance(env, expected)}

    run = moving_proximal_average(ProxAvgState(gs, w), cfg.options["steps"],
                                  residual_tol=cfg.options["residual_tol"], method=method)
    target = None if run.limit is None else moreau_envelope(run.limit).values
    rows = []
    for n, (res, env) in enumerate(zip(run.envelope_residuals, run.envelopes), start=w.m):
        dist = None if target is None else sup_distance(env, target)
        rows.append([n, res, "" if dist is None else dist])
    if "residuals" in cfg.artifacts:
        io.write_rows_csv(cfg.artifacts["residuals"],
                          ["step", "envelope_residual", "distance_to_limit"], rows)
    _write_function(cfg, run.limit)
    return {
        "steps": len(rows),
        "hypothesis_holds": run.hypothesis_holds,
        "max_envelope_residual": max(run.envelope_residuals, default=0.0),
        "final_distance_to_limit": rows[-1][2] if rows and target is not None else None,
    }


def _cmd_epiavg(cfg):
    w = cfg.weights
    gs = _functions(cfg)
    run = moving_epi_average(w, gs, cfg.options["steps"])
    target = moreau_envelope(run.limit).values
    rows = []
    for n, g in enumerate(run.iterates(), start=w.m):
        rows.append([n, sup_distance(moreau_envelope(g).values, target)])
    if "residuals" in cfg.artifacts:
        io.write_rows_csv(cfg.artifacts["residuals"], ["step", "distance_to_limit"], rows)
    _write_function(cfg, run.limit)
    return {
        "steps": len(rows),
        "limit_conjugate": run.limit_conjugate.to_dict(),
        "final_distance_to_limit": rows[-1][1] if rows else None,
    }


def _csv(cfg, **mats):
    d = cfg.artifacts.get("csv_dir")
    if d is None:
        return
    for name, M in mats.items():
        if M is not None and not isinstance(M, dict):
            io.write_matrix_csv(d / f"{name}.csv", M)


# ---------------------------------------------------------------- verify


def _rng(seed, suite, index):
    return np.random.default_rng([seed, sorted(SUITES).index(suite), index])


def _random_weights(rng, m, last_positive=False):
    a = rng.random(m) * (rng.random(m) < 0.7)
    if last_positive or a.sum() == 0:
        a[-1] = rng.random() + 0.05
    return Weights(tuple(a / a.sum()))


def _case_limit(seed, index):
    rng = _rng(seed, "limit", index)
    m = int(rng.integers(2, 11))
    w = _random_weights(rng, m, last_positive=True)
    y = rng.uniform(-10, 10, m)
    res = iterate_until(RecurrenceState(y), w, tol=1e-12)
    err = abs(res.limit - float(limit_functional(w, y)))
    return err <= 1e-8, err


def _case_hull(seed, index):
    rng = _rng(seed, "hull", index)
    m = int(rng.integers(2, 9))
    w = _random_weights(rng, m)
    y = rng.uniform(-10, 10, m)
    state = RecurrenceState(y)
    lo, hi = y.min(), y.max()
    worst = 0.0
    for _ in range(50):
        v = state.advance(state.rotated(w.as_float()))[0]
        worst = max(worst, lo - v, v - hi)
    return worst <= 1e-12, max(worst, 0.0)


def _case_companion(seed, index):
    rng = _rng(seed, "companion", index)
    m = int(rng.integers(2, 11))
    w = _random_weights(rng, m, last_positive=True)
    pl = power_limit(build_companion(w))
    if not pl.exists:
        return False, float("inf")
    err = float(np.max(np.abs(pl.limit - mx.to_float(companion_limit(w)))))
    return err <= 1e-9, err


def _case_krafft(seed, index):
    rng = _rng(seed, "krafft", index)
    m = int(rng.integers(2, 9))
    w = _random_weights(rng, m)
    spec = build_circulant(w)
    pl = power_limit(spec.C)
    if spec.limit_exists != pl.exists:
        return False, float("inf")
    if not pl.exists:
        return True, 0.0
    err = float(np.max(np.abs(pl.limit - mx.to_float(krafft_limit(spec)))))
    return err <= 1e-9, err


def _case_kmean(seed, index):
    rng = _rng(seed, "kmean", index)
    m = int(rng.integers(2, 6))
    w = _random_weights(rng, m, last_positive=True)
    name = ["identity", "log", "reciprocal", "power:2"][index % 4]
    gen = parse_generator(name)
    y = rng.uniform(0.1, 10, m)
    run = iterate_kolmogorov(gen, w, y, tol=1e-12)
    err = abs(run.limit - kolmogorov_limit(gen, w, y))
    return err <= 1e-8, err


SUITES = {
    "companion": _case_companion,
    "hull": _case_hull,
    "kmean": _case_kmean,
    "krafft": _case_krafft,
    "limit": _case_limit,
}


def _run_case(job):
    suite, seed, index = job
    ok, err = SUITES[suite](seed, index)
    return bool(ok), float(err)


def _cmd_verify(cfg):
    opts = cfg.options
    out = {"seed": cfg.seed, "count": opts["count"], "suites": {}}
    for suite in opts["suites"]:
        jobs = [(suite, cfg.seed, i) for i in range(opts["count"])]
        if opts["jobs"] > 1:
            with ProcessPoolExecutor(max_workers=opts["jobs"]) as pool:
                results = list(pool.map(_run_case, jobs, chunksize=16))
        else:
            results = [_run_case(j) for j in jobs]
        failures = [i for i, (ok, _) in enumerate(results) if not ok]
        out["suites"][suite] = {
            "passed": len(results) - len(failures),
            "failed": failures,
            "max_error": max(e for _, e in results),
        }
    out["ok"] = all(not s["failed"] for s in out["suites"].values())
    return out


# ---------------------------------------------------------------- main


def run(cfg, args):
    """Execute a validated configuration; returns the JSON-ready result."""
    cmd = cfg.command
    if cmd == "limit":
        return _cmd_limit(cfg)
    if cmd == "iterate":
        return _cmd_iterate(cfg)
    if cmd == "check-hypothesis":
        return _cmd_check(cfg, args.verify_roots)
    handlers = {
        "companion": _cmd_companion,
        "gauss-seidel": _cmd_gauss_seidel,
        "circulant": _cmd_circulant,
        "kmean": _cmd_kmean,
        "matmean": _cmd_matmean,
        "proxavg": _cmd_proxavg,
        "epiavg": _cmd_epiavg,
        "verify": _cmd_verify,
    }
    return handlers[cmd](cfg)


def _add_weights(p):
    p.add_argument("--alphas", help="comma-separated weights, e.g. 0.5,0.5 or 1/3,2/3")
    p.add_argument("--weights", help='JSON file with "alphas" or "alphas_rational"')


def _add_common(p, iterative=False):
    p.add_argument("--output", "-o", help="write the JSON result here instead of stdout")
    p.add_argument("--indent", type=int, default=None, help="pretty-print JSON")
    if iterative:
        p.add_argument("--tol", type=float, default=None, help=f"stopping tolerance (default {DEFAULT_TOL:g})")
        p.add_argument("--max-iter", type=int, default=None,
                       help=f"iteration cap (default {DEFAULT_MAX_ITER})")


def build_parser():
    parser = argparse.ArgumentParser(prog="movingmeans", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("limit", help="closed-form limit of the moving average")
    _add_weights(p)
    p.add_argument("--initial", required=True, help="m scalars, or m JSON array files")
    _add_common(p)

    p = sub.add_parser("iterate", help="iterate the moving average until the window collapses")
    _add_weights(p)
    p.add_argument("--initial", required=True, help="m scalars, or m JSON array files")
    p.add_argument("--trace", help="CSV file for the full trace")
    _add_common(p, iterative=True)

    p = sub.add_parser("check-hypothesis", help="test the gcd criterion and sufficient conditions")
    _add_weights(p)
    p.add_argument("--verify-roots", action="store_true", help="add a root-based certificate")
    _add_common(p)

    for name, text in (("companion", "companion matrix and its power limit"),
                       ("gauss-seidel", "Gauss-Seidel iteration matrix T and its powers"),
                       ("circulant", "circulant matrix and the gcd criterion for its limit")):
        p = sub.add_parser(name, help=text)
        _add_weights(p)
        p.add_argument("--csv-dir", help="directory for matrix CSV exports")
        if name == "gauss-seidel":
            p.add_argument("--powers", type=int, default=0, help="include T^1..T^N in the output")
        _add_common(p)

    p = sub.add_parser("kmean", help="moving Kolmogorov mean")
    _add_weights(p)
    p.add_argument("--generator", required=True,
                   help="identity, log, reciprocal, power:p (aliases arithmetic, geometric, harmonic)")
    p.add_argument("--initial", required=True, help="m positive scalars")
    p.add_argument("--trace", help="CSV file for the iterates")
    _add_common(p, iterative=True)

    p = sub.add_parser("matmean", help="moving mean of positive definite matrices")
    _add_weights(p)
    p.add_argument("--kind", required=True, choices=KINDS)
    p.add_argument("--initial", required=True, help="m JSON matrix files, comma-separated")
    p.add_argument("--csv-dir", help="directory for matrix CSV exports")
    _add_common(p, iterative=True)

    for name, text in (("proxavg", "moving proximal average of convex functions"),
                       ("epiavg", "moving epi-average of convex functions")):
        p = sub.add_parser(name, help=text)
        _add_weights(p)
        p.add_argument("--functions", required=True,
                       help="m specs: zero, abs, quadratic:c, point:x0, indicator:a:b, or file.json")
        p.add_argument("--grid", default=f"{cg.DEFAULT_LO:g},{cg.DEFAULT_HI:g},{cg.DEFAULT_N}",
                       help="lo,hi,n (default %(default)s)")
        p.add_argument("--steps", type=int, default=10)
        p.add_argument("--residuals", help="CSV file for the per-step envelope residuals")
        p.add_argument("--limit-out", help="JSON file for the limit function")
        if name == "proxavg":
            p.add_argument("--method", choices=("exact", "sampled"), default="exact")
            p.add_argument("--residual-tol", type=float, default=1e-3,
                           help="abort when a step's envelope residual exceeds this")
            p.add_argument("--once", action="store_true",
                           help="one proximal average with the given weights, no iteration")
        _add_common(p)

    p = sub.add_parser("verify", help="randomized self-checks")
    p.add_argument("--suites", default=",".join(sorted(SUITES)))
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--seed", type=int, default=0, help=f"overridden by ${SEED_ENV}")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    _add_common(p)
    return parser


def _emit(cfg, args, result):
    text = io.dumps(result, indent=getattr(args, "indent", None)) + "\n"
    if cfg.output is not None:
        cfg.output.write_text(text)
    else:
        sys.stdout.write(text)


def _origin(exc):
    # module that raised the error, e.g. "movingmeans.weights"
    tb, name = exc.__traceback__, "movingmeans"
    while tb is not None:
        mod = tb.tb_frame.f_globals.get("__name__", "")
        if mod.startswith("movingmeans") and mod != __name__:
            name = mod
        tb = tb.tb_next
    return name


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = build_config(args)
    except ConfigError as exc:
        print(f"movingmeans: config error: {exc}", file=sys.stderr)
        return 2
    try:
        result = run(cfg, args)
    except ConfigError as exc:
        print(f"movingmeans: config error: {exc}", file=sys.stderr)
        return 2
    except MovingMeansError as exc:
        print(f"{_origin(exc)}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"movingmeans: config error: {exc}", file=sys.stderr)
        return 2
    _emit(cfg, args, result)
    if cfg.command == "verify" and not result["ok"]:
        return 1
    return 0
