"""Experiment driver: configure target x kernel x metric runs and emit files.

Configuration comes from a JSON file (--config) with CLI flags taking
precedence; unknown keys anywhere are rejected. All randomness flows from a
single seed; chain c draws from the stream (seed, c), so runs are
bit-reproducible. GEOMALA_THREADS caps the chain work pool.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import diffusion as diffusion_mod
from . import targets as targets_mod
from .diagnostics import summarize
from .exceptions import GeomalaError
from .metrics import METRIC_KINDS, ConstantMetric
from .samplers import KERNEL_KINDS, run_chain

DEFAULT_TARGET_ACCEPTANCE = {
    "rwm": 0.234, "mrwm": 0.234,
    "mala": 0.574, "pmala": 0.574, "smmala": 0.574, "mmala": 0.574,
}


class ConfigError(GeomalaError):
    """Invalid experiment configuration; the message names the offending key."""


def _check_keys(path, obj, allowed, required=()):
    if not isinstance(obj, dict):
        raise ConfigError(f"{path}: expected an object")
    unknown = set(obj) - set(allowed)
    if unknown:
        raise ConfigError(f"{path}: unknown key(s) {sorted(unknown)}")
    missing = [k for k in required if k not in obj]
    if missing:
        raise ConfigError(f"{path}: missing required key(s) {missing}")


def load_config(path):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as err:
        raise ConfigError(f"cannot read config: {err}") from err
    try:
        config = json.loads(text)
    except json.JSONDecodeError as err:
        raise ConfigError(f"{path}:{err.lineno}:{err.colno}: {err.msg}") from err
    if not isinstance(config, dict):
        raise ConfigError(f"{path}: top level must be an object")
    return config


def _load_matrix(value, path_hint):
    """A matrix given inline (list of lists) or as a headerless CSV path."""
    if isinstance(value, str):
        try:
            return np.loadtxt(value, delimiter=",", ndmin=2)
        except OSError as err:
            raise ConfigError(f"{path_hint}: cannot read matrix file: {err}") from err
    return np.asarray(value, dtype=float)


PRODUCT_FAMILIES = {"std_gaussian", "cauchy_product", "quartic_product", "exp_power"}

TARGET_KEYS = {
    "std_gaussian": {"dim"},
    "gaussian": {"mean", "cov"},
    "cauchy_product": {"dim"},
    "quartic_product": {"dim"},
    "exp_power": {"dim", "beta"},
    "bayes_logistic": {"data", "prior_var"},
}


def build_target(spec, dim_override=None):
    _check_keys("target", spec, {"name"} | set().union(*TARGET_KEYS.values()),
                required=("name",))
    name = spec["name"]
    if name not in TARGET_KEYS:
        raise ConfigError(f"target.name: unknown target '{name}'")
    extra = set(spec) - {"name"} - TARGET_KEYS[name]
    if extra:
        raise ConfigError(f"target: key(s) {sorted(extra)} not valid for '{name}'")
    if name == "gaussian":
        if "mean" not in spec or "cov" not in spec:
            raise ConfigError("target: gaussian needs 'mean' and 'cov'")
        mean = np.asarray(spec["mean"], dtype=float)
        cov = _load_matrix(spec["cov"], "target.cov")
        return targets_mod.gaussian(mean, cov)
    if name == "bayes_logistic":
        if "data" not in spec or "prior_var" not in spec:
            raise ConfigError("target: bayes_logistic needs 'data' and 'prior_var'")
        return targets_mod.bayes_logistic_from_csv(spec["data"], spec["prior_var"])
    dim = int(dim_override if dim_override is not None else spec.get("dim", 0))
    if dim <= 0:
        raise ConfigError("target.dim must be a positive integer")
    if name == "exp_power":
        if "beta" not in spec:
            raise ConfigError("target: exp_power needs 'beta'")
        return targets_mod.exp_power(dim, spec["beta"])
    return targets_mod.BUILTINS[name](dim)


METRIC_KEYS = {
    "identity": set(),
    "constant": {"matrix"},
    "fisher": set(),
    "softabs": {"sharpness"},
    "abs_eig": {"floor"},
    "nearest_pd": {"floor", "max_iter"},
}


def build_metric(spec):
    if spec is None:
        return None
    common = {"kind", "derivative_mode", "fd_step"}
    _check_keys("metric", spec, common | set().union(*METRIC_KEYS.values()),
                required=("kind",))
    kind = spec["kind"]
    if kind not in METRIC_KINDS:
        raise ConfigError(f"metric.kind: unknown metric '{kind}'")
    extra = set(spec) - common - METRIC_KEYS[kind]
    if extra:
        raise ConfigError(f"metric: key(s) {sorted(extra)} not valid for '{kind}'")
    kwargs = {}
    if spec.get("derivative_mode") is not None:
        kwargs["derivative_mode"] = spec["derivative_mode"]
    if spec.get("fd_step") is not None:
        kwargs["fd_step"] = float(spec["fd_step"])
    if kind == "constant":
        return ConstantMetric(_load_matrix(spec.get("matrix"), "metric.matrix"), **kwargs)
    if kind == "softabs" and "sharpness" in spec:
        kwargs["sharpness"] = float(spec["sharpness"])
    if kind in ("abs_eig", "nearest_pd") and "floor" in spec:
        kwargs["floor"] = float(spec["floor"])
    if kind == "nearest_pd" and "max_iter" in spec:
        kwargs["max_iter"] = int(spec["max_iter"])
    return METRIC_KINDS[kind](**kwargs)


KERNEL_NEEDS_METRIC = {"smmala", "mmala", "mrwm"}


def build_kernel(spec, metric, step_override=None):
    _check_keys("kernel", spec, {"kind", "step", "step_grid", "cov", "metric"},
                required=("kind",))
    kind = spec["kind"]
    if kind not in KERNEL_KINDS:
        raise ConfigError(f"kernel.kind: unknown kernel '{kind}'")
    step = step_override if step_override is not None else spec.get("step")
    if step is None:
        raise ConfigError("kernel.step is required (or a step_grid for tuning)")
    step = float(step)
    if spec.get("metric") is not None:
        metric = build_metric(spec["metric"])
    if kind in KERNEL_NEEDS_METRIC:
        if metric is None:
            raise ConfigError(f"kernel '{kind}' needs a metric section")
        return KERNEL_KINDS[kind](step, metric)
    if kind == "rwm":
        cov = spec.get("cov")
        return KERNEL_KINDS[kind](step, _load_matrix(cov, "kernel.cov") if cov is not None else None)
    if kind == "pmala":
        if spec.get("cov") is None:
            raise ConfigError("kernel 'pmala' needs 'cov'")
        return KERNEL_KINDS[kind](step, _load_matrix(spec["cov"], "kernel.cov"))
    return KERNEL_KINDS[kind](step)


RUN_KEYS = {"steps", "burn_in", "thin", "chains", "seed", "x0", "tv"}


def _run_settings(config, seed_override=None, chains_override=None):
    spec = config.get("run")
    _check_keys("run", spec, RUN_KEYS, required=("steps",))
    steps = int(spec["steps"])
    burn_in = spec.get("burn_in")
    burn_in = steps // 10 if burn_in is None else int(burn_in)
    thin = int(spec.get("thin", 1))
    chains = int(chains_override if chains_override is not None else spec.get("chains", 1))
    seed = int(seed_override if seed_override is not None else spec.get("seed", 0))
    if chains < 1:
        raise ConfigError("run.chains must be >= 1")
    return steps, burn_in, thin, chains, seed, spec.get("x0"), spec.get("tv")


def _resolve_x0(x0_spec, dim, seed, chain):
    if x0_spec is None:
        return np.zeros(dim)
    if isinstance(x0_spec, dict):
        _check_keys("run.x0", x0_spec, {"distribution", "scale"}, required=("distribution",))
        if x0_spec["distribution"] != "gaussian":
            raise ConfigError("run.x0.distribution: only 'gaussian' is supported")
        scale = float(x0_spec.get("scale", 1.0))
        ss = np.random.SeedSequence(entropy=seed, spawn_key=(chain, 1))
        return scale * np.random.Generator(np.random.Philox(ss)).standard_normal(dim)
    x0 = np.asarray(x0_spec, dtype=float)
    if x0.shape != (dim,):
        raise ConfigError(f"run.x0 must have {dim} entries")
    return x0


def _tv_options(tv_spec, target):
    if tv_spec is None:
        return None
    _check_keys("run.tv", tv_spec, {"bins", "support", "coordinate"})
    name = None
    for builtin, factory in targets_mod.BUILTINS.items():
        if target.name.startswith(builtin + "("):
            name = builtin
            break
    if name not in PRODUCT_FAMILIES:
        raise ConfigError("run.tv: TV estimates need an iid-product target")
    if name == "exp_power":
        raise ConfigError("run.tv: exp_power marginals are not wired up")
    marginal = targets_mod.BUILTINS[name](1)
    return {
        "tv_target": marginal,
        "tv_bins": int(tv_spec.get("bins", 50)),
        "tv_support": tuple(tv_spec.get("support", (-4.0, 4.0))),
        "tv_coordinate": int(tv_spec.get("coordinate", 0)),
    }


def _thread_count(chains):
    env = os.environ.get("GEOMALA_THREADS")
    if env:
        try:
            cap = int(env)
        except ValueError:
            raise ConfigError("GEOMALA_THREADS must be an integer")
        if cap < 1:
            raise ConfigError("GEOMALA_THREADS must be >= 1")
        return min(cap, chains)
    return min(chains, os.cpu_count() or 1)


def _merge_summaries(per_chain, steps_recorded):
    merged = {
        "acceptance_rate": float(np.mean([s["acceptance_rate"] for s in per_chain])),
        "tau": {}, "ess": {},
        "tv": per_chain[0]["tv"],
        "seed": per_chain[0]["seed"],
        "wall_time_s": float(sum(s["wall_time_s"] for s in per_chain)),
        "chains": per_chain,
    }
    for name in per_chain[0]["ess"]:
        total_ess = float(sum(s["ess"][name] for s in per_chain))
        merged["ess"][name] = total_ess
        merged["tau"][name] = len(per_chain) * steps_recorded / total_ess
    return merged


def _write_json(path, payload):
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def cmd_run(config, out_dir, seed=None, chains=None, quiet=False):
    _check_keys("config", config, {"target", "kernel", "metric", "run", "output"},
                required=("target", "kernel", "run"))
    target = build_target(config["target"])
    metric = build_metric(config.get("metric"))
    kernel = build_kernel(config["kernel"], metric)
    steps, burn_in, thin, n_chains, seed, x0_spec, tv_spec = _run_settings(
        config, seed, chains)
    tv_opts = _tv_options(tv_spec, target)
    os.makedirs(out_dir, exist_ok=True)

    def one_chain(c):
        x0 = _resolve_x0(x0_spec, target.dim, seed, c)
        trace = run_chain(target, kernel, x0, steps, burn_in=burn_in,
                          thin=thin, seed=seed, chain_index=c)
        trace.to_csv(os.path.join(out_dir, f"trace_c{c}.csv"))
        return trace

    failures = []
    traces = {}
    with ThreadPoolExecutor(max_workers=_thread_count(n_chains)) as pool:
        futures = {pool.submit(one_chain, c): c for c in range(n_chains)}
        for fut, c in futures.items():
            try:
                traces[c] = fut.result()
            except Exception as err:  # noqa: BLE001 - enumerate all failing runs
                failures.append((c, err))
    if failures:
        for c, err in sorted(failures):
            print(f"chain {c} failed: {err}", file=sys.stderr)
        return 1

    per_chain = []
    for c in range(n_chains):
        summary = summarize(traces[c], **(tv_opts or {}))
        per_chain.append(summary.to_dict())
    merged = _merge_summaries(per_chain, len(traces[0]))
    _write_json(os.path.join(out_dir, "summary.json"), merged)
    if not quiet:
        print(f"wrote {n_chains} trace file(s) and summary.json to {out_dir}")
        print(f"acceptance_rate={merged['acceptance_rate']:.4f}")
    return 0


def _acceptance_probe(target, kernel_spec, metric, step, steps, seed, x0):
    kernel = build_kernel(kernel_spec, metric, step_override=step)
    trace = run_chain(target, kernel, x0, steps, burn_in=steps // 10, seed=seed)
    summary = summarize(trace)
    return trace.acceptance_rate, summary.ess["x1"]


TUNE_KEYS = {"target_acceptance", "steps", "refine", "tolerance"}


def cmd_tune(config, out_dir, seed=None, quiet=False):
    _check_keys("config", config, {"target", "kernel", "metric", "run", "tune", "output"},
                required=("target", "kernel", "run"))
    target = build_target(config["target"])
    metric = build_metric(config.get("metric"))
    kernel_spec = config["kernel"]
    _check_keys("kernel", kernel_spec, {"kind", "step", "step_grid", "cov", "metric"},
                required=("kind", "step_grid"))
    grid = [float(s) for s in kernel_spec["step_grid"]]
    if not grid:
        raise ConfigError("kernel.step_grid must not be empty")
    tune_spec = config.get("tune") or {}
    _check_keys("tune", tune_spec, TUNE_KEYS)
    goal = tune_spec.get("target_acceptance")
    if goal is None:
        goal = DEFAULT_TARGET_ACCEPTANCE[kernel_spec["kind"]]
    goal = float(goal)
    tol = float(tune_spec.get("tolerance", 0.02))
    refine = bool(tune_spec.get("refine", True))
    steps, _, _, _, seed, x0_spec, _ = _run_settings(config, seed)
    steps = int(tune_spec.get("steps", steps))
    x0 = _resolve_x0(x0_spec, target.dim, seed, 0)
    os.makedirs(out_dir, exist_ok=True)

    if len(grid) < 3 and not quiet:
        print("warning: step_grid has fewer than 3 entries", file=sys.stderr)

    rows = []
    for step in sorted(grid):
        acc, ess1 = _acceptance_probe(target, kernel_spec, metric, step, steps, seed, x0)
        rows.append({"step": step, "acceptance": acc, "ess": ess1})
        if not quiet:
            print(f"step={step:g} acceptance={acc:.3f} ess={ess1:.1f}")

    best = min(rows, key=lambda r: abs(r["acceptance"] - goal))
    refined = False
    if refine and abs(best["acceptance"] - goal) > tol and len(rows) >= 2:
        # acceptance decreases with step: bracket the goal, then bisect
        lo = max((r["step"] for r in rows if r["acceptance"] > goal), default=None)
        hi = min((r["step"] for r in rows if r["acceptance"] < goal), default=None)
        if lo is not None and hi is not None:
            for _ in range(12):
                mid = math.sqrt(lo * hi)
                acc, ess1 = _acceptance_probe(
                    target, kernel_spec, metric, mid, steps, seed, x0)
                row = {"step": mid, "acceptance": acc, "ess": ess1}
                rows.append(row)
                refined = True
                if abs(acc - goal) < abs(best["acceptance"] - goal):
                    best = row
                if abs(acc - goal) <= tol:
                    break
                if acc > goal:
                    lo = mid
                else:
                    hi = mid

    report = {
        "kernel": kernel_spec["kind"],
        "target_acceptance": goal,
        "grid": rows,
        "selected": best,
        "refined": refined,
        "seed": seed,
        "steps": steps,
    }
    _write_json(os.path.join(out_dir, "tuning.json"), report)
    if not quiet:
        print(f"selected step={best['step']:g} (acceptance {best['acceptance']:.3f})")
    return 0


SCALING_KEYS = {"dims", "target_acceptance", "steps", "final_steps", "bracket"}


def _tune_by_bisection(target, kernel_spec, metric, goal, steps, seed, bracket):
    lo, hi = bracket
    x0 = np.zeros(target.dim)
    acc_lo, _ = _acceptance_probe(target, kernel_spec, metric, lo, steps, seed, x0)
    if acc_lo < goal:
        raise ConfigError(f"scaling.bracket: acceptance at step {lo} is already below goal")
    acc_hi, _ = _acceptance_probe(target, kernel_spec, metric, hi, steps, seed, x0)
    grow = 0
    while acc_hi > goal and grow < 8:
        hi *= 4.0
        acc_hi, _ = _acceptance_probe(target, kernel_spec, metric, hi, steps, seed, x0)
        grow += 1
    best_step, best_gap = None, math.inf
    for _ in range(14):
        mid = math.sqrt(lo * hi)
        acc, _ = _acceptance_probe(target, kernel_spec, metric, mid, steps, seed, x0)
        gap = abs(acc - goal)
        if gap < best_gap:
            best_step, best_gap = mid, gap
        if gap <= 0.01:
            break
        if acc > goal:
            lo = mid
        else:
            hi = mid
    return best_step


def cmd_scaling(config, out_dir, seed=None, quiet=False):
    _check_keys("config", config, {"target", "kernel", "metric", "run", "scaling", "output"},
                required=("target", "kernel", "scaling"))
    spec = config["scaling"]
    _check_keys("scaling", spec, SCALING_KEYS, required=("dims",))
    dims = [int(n) for n in spec["dims"]]
    if not dims:
        raise ConfigError("scaling.dims must not be empty")
    target_spec = config["target"]
    if target_spec.get("name") not in PRODUCT_FAMILIES:
        raise ConfigError("scaling needs an iid-product target family")
    metric = build_metric(config.get("metric"))
    kernel_spec = config["kernel"]
    goal = spec.get("target_acceptance")
    if goal is None:
        goal = DEFAULT_TARGET_ACCEPTANCE[kernel_spec["kind"]]
    goal = float(goal)
    steps = int(spec.get("steps", 4000))
    final_steps = int(spec.get("final_steps", 2 * steps))
    bracket = [float(v) for v in spec.get("bracket", (1e-3, 10.0))]
    run_seed = int(seed if seed is not None else (config.get("run") or {}).get("seed", 0))
    os.makedirs(out_dir, exist_ok=True)

    rows = []
    for n in dims:
        target = build_target(target_spec, dim_override=n)
        step = _tune_by_bisection(target, kernel_spec, metric, goal, steps,
                                  run_seed, tuple(bracket))
        acc, ess1 = _acceptance_probe(target, kernel_spec, metric, step,
                                      final_steps, run_seed + 1, np.zeros(n))
        rows.append({"dim": n, "step": step, "acceptance": acc, "ess": ess1})
        if not quiet:
            print(f"n={n}: step={step:.4f} acceptance={acc:.3f}")

    slope = None
    if len(rows) >= 2:
        lx = np.log([r["dim"] for r in rows])
        ly = np.log([r["step"] ** 2 for r in rows])
        slope = float(np.polyfit(lx, ly, 1)[0])
    elif not quiet:
        print("warning: single dimension, slope undefined", file=sys.stderr)

    report = {
        "kernel": kernel_spec["kind"],
        "target_acceptance": goal,
        "per_dim": rows,
        "slope_log_step_sq_vs_log_dim": slope,
        "seed": run_seed,
    }
    _write_json(os.path.join(out_dir, "scaling.json"), report)
    if not quiet and slope is not None:
        print(f"slope of log step^2 vs log n: {slope:.3f}")
    return 0


DIFFUSION_KEYS = {"kind", "grid", "fd_step"}


def _grid_points(grid_spec, dim):
    _check_keys("diffusion.grid", grid_spec, {"lo", "hi", "points"},
                required=("lo", "hi", "points"))
    lo, hi, pts = float(grid_spec["lo"]), float(grid_spec["hi"]), int(grid_spec["points"])
    if pts < 1:
        raise ConfigError("diffusion.grid.points must be >= 1")
    axis = np.linspace(lo, hi, pts) if pts > 1 else np.array([lo])
    if dim == 1:
        return axis[:, None]
    if dim == 2:
        a, b = np.meshgrid(axis, axis, indexing="ij")
        return np.column_stack([a.ravel(), b.ravel()])
    raise ConfigError("diffusion-check supports 1-D and 2-D targets only")


def cmd_diffusion_check(config, out_dir, quiet=False):
    _check_keys("config", config, {"target", "metric", "diffusion", "output"},
                required=("target", "diffusion"))
    spec = config["diffusion"]
    _check_keys("diffusion", spec, DIFFUSION_KEYS, required=("kind", "grid"))
    target = build_target(config["target"])
    kind = spec["kind"]
    if kind == "langevin":
        diff = diffusion_mod.langevin(target)
    elif kind == "manifold_langevin":
        metric = build_metric(config.get("metric"))
        if metric is None:
            raise ConfigError("diffusion.kind manifold_langevin needs a metric")
        diff = diffusion_mod.manifold_langevin(target, metric)
    else:
        raise ConfigError(f"diffusion.kind: unknown kind '{kind}'")
    step = float(spec.get("fd_step", 1e-3))
    points = _grid_points(spec["grid"], target.dim)
    os.makedirs(out_dir, exist_ok=True)

    path = os.path.join(out_dir, "residuals.csv")
    worst = 0.0
    with open(path, "w") as fh:
        fh.write(",".join(f"x{i + 1}" for i in range(target.dim)) + ",residual\n")
        for x in points:
            r = float(diffusion_mod.fokker_planck_residual(target, diff, x, step=step))
            worst = max(worst, r)
            fh.write(",".join(repr(float(v)) for v in x) + f",{r!r}\n")
    if not quiet:
        print(f"wrote {len(points)} residuals to {path}; max={worst:.3e}")
    return 0


def cmd_compare(config, out_dir, seed=None, quiet=False):
    _check_keys("config", config, {"target", "metric", "run", "compare", "output"},
                required=("target", "run", "compare"))
    spec = config["compare"]
    _check_keys("compare", spec, {"kernels"}, required=("kernels",))
    kernel_specs = spec["kernels"]
    if not kernel_specs:
        raise ConfigError("compare.kernels must not be empty")
    target = build_target(config["target"])
    metric = build_metric(config.get("metric"))
    steps, burn_in, thin, _, seed, x0_spec, _ = _run_settings(config, seed)
    os.makedirs(out_dir, exist_ok=True)

    rows = []
    for k_spec in kernel_specs:
        kernel = build_kernel(k_spec, metric)
        x0 = _resolve_x0(x0_spec, target.dim, seed, 0)
        trace = run_chain(target, kernel, x0, steps, burn_in=burn_in,
                          thin=thin, seed=seed)
        summary = summarize(trace)
        worst_ess = min(summary.ess.values())
        rows.append({
            "kind": kernel.kind,
            "step": kernel.step,
            "acceptance": trace.acceptance_rate,
            "ess": worst_ess,
            "wall_time_s": summary.wall_time_s,
            "ess_per_second": worst_ess / summary.wall_time_s
            if summary.wall_time_s > 0 else math.inf,
        })

    _write_json(os.path.join(out_dir, "compare.json"),
                {"target": target.name, "rows": rows, "seed": seed, "steps": steps})
    if not quiet:
        print(f"{'kernel':10s} {'step':>8s} {'accept':>8s} {'ess':>10s} {'ess/s':>10s}")
        for r in rows:
            print(f"{r['kind']:10s} {r['step']:8.3f} {r['acceptance']:8.3f} "
                  f"{r['ess']:10.1f} {r['ess_per_second']:10.1f}")
    return 0


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="geomala",
        description="Langevin and manifold-Langevin MCMC experiments")
    parser.add_argument("command",
                        choices=["run", "tune", "scaling", "diffusion-check", "compare"])
    parser.add_argument("--config", required=True, help="JSON experiment config")
    parser.add_argument("--seed", type=int, default=None, help="override run.seed")
    parser.add_argument("--out-dir", default=None, help="override output.directory")
    parser.add_argument("--chains", type=int, default=None, help="override run.chains")
    parser.add_argument("--quiet", action="store_true")
    args = parser.parse_args(argv)

    try:
        config = load_config(args.config)
        out_spec = config.get("output") or {}
        _check_keys("output", out_spec, {"directory", "formats"})
        out_dir = args.out_dir or out_spec.get("directory") or "geomala-out"
        if args.command == "run":
            return cmd_run(config, out_dir, seed=args.seed, chains=args.chains,
                           quiet=args.quiet)
        if args.command == "tune":
            return cmd_tune(config, out_dir, seed=args.seed, quiet=args.quiet)
        if args.command == "scaling":
            return cmd_scaling(config, out_dir, seed=args.seed, quiet=args.quiet)
        if args.command == "diffusion-check":
            return cmd_diffusion_check(config, out_dir, quiet=args.quiet)
        return cmd_compare(config, out_dir, seed=args.seed, quiet=args.quiet)
    except ConfigError as err:
        print(f"config error: {err}", file=sys.stderr)
        return 2
    except GeomalaError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
