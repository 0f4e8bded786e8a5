"""Command-line experiment orchestration.

Subcommands: gen, amp, se, mle, cover, thresholds, sweep-amp, sweep-se, mle-mc.
Global flags: --seed, --jobs, --out-dir, --format {csv,json}.
Exit codes: 0 success, 2 config error, 3 capacity error, 4 numerical divergence.

The sweep subcommands read INI-style config files with one section per
subcommand; trials are distributed over a worker pool and collected by trial
index, so output is byte-identical at any --jobs value.
"""

from __future__ import annotations

import argparse
import configparser
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import amp as amp_mod
from . import coverage as coverage_mod
from . import exact as exact_mod
from . import state_evolution as se_mod
from . import thresholds as thresholds_mod
from .errors import CapacityError, ConfigError, DivergenceError, ParameterError
from .instance import ProblemParams, beta_to_gamma, gamma_to_beta, generate_instance
from .svg import line_chart
from .sweep import SweepResult, fmt_value

_THRESHOLD_SOURCES = {
    "gamma_ub_exact": "union bound, exact recovery",
    "gamma_ub_partial": "union bound, partial recovery",
    "gamma_ub_fraction": "union bound, constant-fraction recovery",
    "gamma_lb_gauss": "max of correlated Gaussians + coverage packing",
    "gamma_lb_fano": "generalized Fano bound + coverage packing",
    "gamma_amp": "message-passing SE fixed-point tangency",
    "beta_amp": "message-passing SE fixed-point tangency (bias scale)",
    "gamma_sos": "sum-of-squares algorithmic scaling",
    "gamma_mmse": "minimum-MSE weak-recovery threshold",
    "gamma_prior_lb": "generic-prior lower bound",
    "gamma_prior_ub": "generic-prior upper bound",
    "beta_sq_detection": "detection, moment-based optimization",
    "lambda_c_detection": "detection, free-energy criterion",
}


# ---------------------------------------------------------------------------
# config parsing
# ---------------------------------------------------------------------------

def load_config(path: str, section: str) -> dict:
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        with open(path, "r", encoding="utf-8") as fh:
            parser.read_file(fh, source=path)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    except configparser.Error as exc:
        raise ConfigError(f"config parse error: {exc}") from None
    if not parser.has_section(section):
        raise ConfigError(f"config {path} has no [{section}] section")
    return dict(parser.items(section))


def _cfg_int(cfg, key, default=None):
    if key not in cfg:
        if default is None:
            raise ConfigError(f"missing required config key {key!r}")
        return default
    try:
        return int(cfg[key])
    except ValueError:
        raise ConfigError(f"config key {key!r}: expected integer, got {cfg[key]!r}") from None


def _cfg_float(cfg, key, default=None):
    if key not in cfg:
        if default is None:
            raise ConfigError(f"missing required config key {key!r}")
        return default
    try:
        return float(cfg[key])
    except ValueError:
        raise ConfigError(f"config key {key!r}: expected number, got {cfg[key]!r}") from None


def _cfg_str(cfg, key, default=None, choices=None):
    v = cfg.get(key, default)
    if v is None:
        raise ConfigError(f"missing required config key {key!r}")
    if choices and v not in choices:
        raise ConfigError(f"config key {key!r}: expected one of {choices}, got {v!r}")
    return v


def parse_grid(text: str) -> np.ndarray:
    """'lo:hi:n' -> n linearly spaced values."""
    parts = text.split(":")
    if len(parts) != 3:
        raise ConfigError(f"grid must be 'lo:hi:n', got {text!r}")
    try:
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise ConfigError(f"grid must be 'lo:hi:n' with numeric parts, got {text!r}") from None
    if n < 1:
        raise ConfigError(f"grid needs at least one point, got {text!r}")
    return np.linspace(lo, hi, n)


def _cfg_int_list(cfg, key):
    if key not in cfg:
        raise ConfigError(f"missing required config key {key!r}")
    try:
        return [int(v.strip()) for v in cfg[key].split(",") if v.strip()]
    except ValueError:
        raise ConfigError(f"config key {key!r}: expected comma-separated integers") from None


def _snr_grid(cfg) -> tuple[str, np.ndarray]:
    if "gamma_grid" in cfg:
        return "gamma", parse_grid(cfg["gamma_grid"])
    if "beta_grid" in cfg:
        return "beta", parse_grid(cfg["beta_grid"])
    raise ConfigError("config needs a gamma_grid or beta_grid entry")


# ---------------------------------------------------------------------------
# worker functions (top level so they pickle)
# ---------------------------------------------------------------------------

def _amp_trial(task):
    (p, k, d, beta, seed, kind, init, max_iter, damping, tol, trial) = task
    params = ProblemParams.with_beta(p, k, d, beta, seed=seed)
    inst = generate_instance(params, trial=trial)
    config = amp_mod.AmpConfig(
        threshold_kind=kind, init_kind=init, max_iter=max_iter,
        damping=damping, tol=tol,
    )
    res = amp_mod.run_amp(inst, config, trial=trial)
    final = res.trajectory[-1] if res.trajectory else 0.0
    return (trial, res.n_iter, final, int(res.converged), res.state.constraint_err)


def _mle_trial(task):
    (p, k, d, beta, seed, trial) = task
    params = ProblemParams.with_beta(p, k, d, beta, seed=seed)
    inst = generate_instance(params, trial=trial)
    res = exact_mod.mle_solve(inst)
    from .tensor import inner_with_power

    planted_w = inner_with_power(inst.observations, inst.signal.astype(float))
    return (trial, res.overlap_with_planted, res.max_weight, planted_w)


def _pool_map(fn, tasks, jobs: int):
    if jobs <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, tasks, chunksize=1))


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_gen(args, out_dir: Path, fmt: str, jobs: int) -> int:
    params = _params_from_args(args)
    for trial in range(args.trials):
        inst = generate_instance(params, trial=trial)
        stem = out_dir / f"instance_t{trial:04d}"
        inst.observations.dump(stem.with_suffix(".bin"))
        np.savetxt(stem.with_suffix(".signal.txt"), inst.signal, fmt="%d")
    meta = {
        "p": params.p, "k": params.k, "d": params.d,
        "snr_kind": params.snr_kind, "snr_value": params.snr_value,
        "beta": params.beta, "gamma": params.gamma,
        "seed": params.seed, "trials": args.trials,
    }
    (out_dir / "instance_params.json").write_text(
        json.dumps(meta, sort_keys=True, indent=2) + "\n"
    )
    print(f"wrote {args.trials} instance(s) to {out_dir}")
    return 0


def _params_from_args(args) -> ProblemParams:
    if getattr(args, "gamma", None) is not None and getattr(args, "beta", None) is not None:
        raise ConfigError("give either --gamma or --beta, not both")
    if getattr(args, "gamma", None) is not None:
        return ProblemParams.with_gamma(args.p, args.k, args.d, args.gamma, seed=args.seed)
    if getattr(args, "beta", None) is not None:
        return ProblemParams.with_beta(args.p, args.k, args.d, args.beta, seed=args.seed)
    raise ConfigError("one of --gamma or --beta is required")


def cmd_amp(args, out_dir: Path, fmt: str, jobs: int) -> int:
    params = _params_from_args(args)
    init = {"ui": "uninformative", "ii": "informative"}[args.init]
    tasks = [
        (params.p, params.k, params.d, params.beta, params.seed,
         args.threshold, init, args.max_iter, args.damping, args.tol, t)
        for t in range(args.trials)
    ]
    rows = _pool_map(_amp_trial, tasks, jobs)
    result = SweepResult(
        columns=["trial", "iter_converged", "final_overlap", "converged_flag"],
        config={
            "subcommand": "amp", "p": params.p, "k": params.k, "d": params.d,
            "beta": params.beta, "gamma": params.gamma, "threshold": args.threshold,
            "init": args.init, "trials": args.trials, "seed": params.seed,
            "damping": args.damping, "max_iter": args.max_iter, "jobs": jobs,
        },
    )
    for (trial, n_iter, final, conv, _err) in rows:
        result.add(trial=trial, iter_converged=n_iter, final_overlap=final,
                   converged_flag=conv)
    path = out_dir / f"amp.{fmt}"
    result.write(path, fmt)
    print(f"wrote {path}")
    return 0


def cmd_mle(args, out_dir: Path, fmt: str, jobs: int) -> int:
    params = _params_from_args(args)
    kprime = args.kprime if args.kprime is not None else params.k
    tasks = [
        (params.p, params.k, params.d, params.beta, params.seed, t)
        for t in range(args.trials)
    ]
    rows = _pool_map(_mle_trial, tasks, jobs)
    result = SweepResult(
        columns=["trial", "overlap", "exact", "max_weight", "planted_weight"],
        config={
            "subcommand": "mle", "p": params.p, "k": params.k, "d": params.d,
            "beta": params.beta, "gamma": params.gamma, "kprime": kprime,
            "trials": args.trials, "seed": params.seed, "jobs": jobs,
        },
    )
    for (trial, ov, max_w, planted_w) in rows:
        result.add(trial=trial, overlap=ov, exact=int(ov == params.k),
                   max_weight=max_w, planted_weight=planted_w)
    path = out_dir / f"mle.{fmt}"
    result.write(path, fmt)
    rate = sum(1 for r in rows if r[1] >= kprime) / len(rows)
    print(f"wrote {path} (recovery rate at k'={kprime}: {rate:.3f})")
    return 0


def cmd_se(args, out_dir: Path, fmt: str, jobs: int) -> int:
    betas = parse_grid(args.beta_grid)
    inits = ["ui", "ii"] if args.init == "both" else [args.init]
    rows = se_mod.phase_grid(
        args.p, args.d, [args.k], betas, init_kinds=inits, order=args.quad_order
    )
    result = SweepResult(
        columns=["beta", "gamma", "init", "m_star_normalized", "iters",
                 "converged", "gamma_amp_claim"],
        config={
            "subcommand": "se", "p": args.p, "k": args.k, "d": args.d,
            "beta_grid": args.beta_grid, "init": args.init,
            "quad_order": args.quad_order, "seed": args.seed,
        },
    )
    for r in rows:
        result.add(**{c: r[c] for c in result.columns})
    path = out_dir / f"se.{fmt}"
    result.write(path, fmt)
    print(f"wrote {path}")
    return 0


def cmd_cover(args, out_dir: Path, fmt: str, jobs: int) -> int:
    from .tensor import binom

    result = SweepResult(
        columns=["r", "cardinality", "lower_bound", "rate"],
        config={"subcommand": "cover", "p": args.p, "k": args.k},
    )
    r_values = range(args.k + 1) if args.r is None else [args.r]
    for r in r_values:
        cov = coverage_mod.greedy_cover(args.p, args.k, r)
        lower = math.ceil(binom(args.p, args.k) / coverage_mod.b_of_r_exact(args.p, args.k, r))
        result.add(
            r=r,
            cardinality=cov.cardinality,
            lower_bound=lower,
            rate=coverage_mod.coverage_rate_bound(args.p, args.k, r).exact,
        )
    path = out_dir / f"cover.{fmt}"
    result.write(path, fmt)
    print(f"wrote {path}")
    return 0


def cmd_thresholds(args, out_dir: Path, fmt: str, jobs: int) -> int:
    report = thresholds_mod.compute_report(
        args.p, args.k, args.d, kprime=args.kprime, alpha_k=args.alpha
    )
    payload = {
        "p": report.p, "k": report.k, "d": report.d, "kprime": report.kprime,
        "alpha_k": report.alpha_k,
        "small_d_regime": report.small_d_regime,
        "growing_d_regime": report.growing_d_regime,
        "gamma_sos_valid": report.gamma_sos_valid,
        "prior_branch": report.prior_branch,
        "ordering_ok": report.ordering_ok,
        "values": report.named_values(),
    }
    if fmt == "json":
        print(json.dumps(payload, sort_keys=True, indent=2))
    else:
        width = max(len(n) for n in report.NAMED_VALUES)
        swidth = max(len(s) for s in _THRESHOLD_SOURCES.values())
        print(f"thresholds for p={report.p} k={report.k} d={report.d} "
              f"(alpha_k={report.alpha_k:.4f}, k'={report.kprime})")
        print(f"{'quantity'.ljust(width)}  {'value':>14}  derivation")
        for name, value in report.named_values().items():
            print(f"{name.ljust(width)}  {value:14.6g}  {_THRESHOLD_SOURCES[name]}")
        print(f"{'ordering gamma_lb_fano <= gamma_lb_gauss <= gamma_ub_exact:'} "
              f"{'ok' if report.ordering_ok else 'VIOLATED'}")
        notes = []
        if not report.gamma_sos_valid:
            notes.append("gamma_sos outside its d >= 3 regime")
        notes.append(f"prior upper-bound branch: {report.prior_branch}")
        for n in notes:
            print(f"note: {n}")
    json_path = out_dir / "thresholds.json"
    json_path.write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    return 0


def run_sweep_amp(cfg: dict, out_dir: Path, fmt: str, jobs: int) -> SweepResult:
    p = _cfg_int(cfg, "p")
    d = _cfg_int(cfg, "d")
    k_values = _cfg_int_list(cfg, "k_values")
    snr_kind, grid = _snr_grid(cfg)
    trials = _cfg_int(cfg, "trials", 20)
    seed = _cfg_int(cfg, "seed", 0)
    threshold = _cfg_str(cfg, "threshold", "both", ("bernoulli", "vectorial", "both"))
    init = _cfg_str(cfg, "init", "ui", ("ui", "ii"))
    max_iter = _cfg_int(cfg, "max_iter", 200)
    damping = _cfg_float(cfg, "damping", 0.0)
    tol = _cfg_float(cfg, "tol", 1e-8)
    kinds = ["bernoulli", "vectorial"] if threshold == "both" else [threshold]
    init_full = {"ui": "uninformative", "ii": "informative"}[init]

    result = SweepResult(
        columns=["k", "threshold", "gamma", "beta", "median_overlap", "q25", "q75",
                 "recovery_rate", "trials", "seed", "gamma_amp"],
        config=dict(cfg, subcommand="sweep-amp", jobs=jobs, format=fmt),
    )
    from .thresholds import gamma_amp as gamma_amp_fn

    points = []
    for k in k_values:
        for kind in kinds:
            for snr in grid:
                beta = gamma_to_beta(float(snr), p, k, d) if snr_kind == "gamma" else float(snr)
                points.append((k, kind, beta))
    tasks = [
        (p, k, d, beta, seed, kind, init_full, max_iter, damping, tol, t)
        for (k, kind, beta) in points
        for t in range(trials)
    ]
    flat = _pool_map(_amp_trial, tasks, jobs)
    for i, (k, kind, beta) in enumerate(points):
        chunk = flat[i * trials : (i + 1) * trials]
        finals = [c[2] for c in chunk]
        qs = result.quantile_summary(finals)
        result.add(
            k=k, threshold=kind,
            gamma=beta_to_gamma(beta, p, k, d), beta=beta,
            median_overlap=qs["median"], q25=qs["q25"], q75=qs["q75"],
            recovery_rate=float(np.mean([f >= 1.0 - 1e-12 for f in finals])),
            trials=trials, seed=seed, gamma_amp=gamma_amp_fn(p, k, d),
        )
    path = out_dir / f"sweep_amp.{fmt}"
    result.write(path, fmt)
    for k in k_values:
        series = []
        for kind in kinds:
            rows = [r for r in result.rows if r["k"] == k and r["threshold"] == kind]
            rows.sort(key=lambda r: r["gamma"])
            series.append((kind, [r["gamma"] for r in rows],
                           [r["median_overlap"] for r in rows]))
        g_amp = gamma_amp_fn(p, k, d)
        svg = line_chart(
            series,
            title=f"AMP median overlap, p={p} d={d} k={k} ({trials} trials)",
            xlabel="gamma", ylabel="median normalized overlap",
            vlines=[(g_amp, "gamma_amp")],
        )
        (out_dir / f"sweep_amp_k{k}.svg").write_text(svg)
    return result


def run_sweep_se(cfg: dict, out_dir: Path, fmt: str, jobs: int) -> SweepResult:
    p = _cfg_int(cfg, "p")
    d_values = _cfg_int_list(cfg, "d_values") if "d_values" in cfg else [_cfg_int(cfg, "d")]
    k_values = _cfg_int_list(cfg, "k_values")
    betas = parse_grid(_cfg_str(cfg, "beta_grid"))
    init = _cfg_str(cfg, "init", "both", ("ui", "ii", "both"))
    order = _cfg_int(cfg, "quad_order", se_mod.DEFAULT_QUAD_ORDER)
    inits = ["ui", "ii"] if init == "both" else [init]

    result = SweepResult(
        columns=["d", "k", "beta", "gamma", "init", "m_star_normalized", "iters",
                 "converged", "beta_amp_claim", "gamma_amp_claim"],
        config=dict(cfg, subcommand="sweep-se", jobs=jobs, format=fmt),
    )
    for d in d_values:
        rows = se_mod.phase_grid(p, d, k_values, betas, init_kinds=inits, order=order)
        for r in rows:
            result.add(d=d, k=r["k"], beta=r["beta"], gamma=r["gamma"], init=r["init"],
                       m_star_normalized=r["m_star_normalized"], iters=r["iters"],
                       converged=r["converged"], beta_amp_claim=r["beta_amp_claim"],
                       gamma_amp_claim=r["gamma_amp_claim"])
    path = out_dir / f"sweep_se.{fmt}"
    result.write(path, fmt)
    for d in d_values:
        for init_kind in inits:
            series = []
            vlines = []
            for k in k_values:
                rows = [r for r in result.rows
                        if r["d"] == d and r["k"] == k and r["init"] == init_kind]
                rows.sort(key=lambda r: r["beta"])
                series.append((f"k={k}", [r["beta"] for r in rows],
                               [r["m_star_normalized"] for r in rows]))
                vlines.append((rows[0]["beta_amp_claim"], f"beta_amp k={k}"))
            svg = line_chart(
                series,
                title=f"SE fixed point, p={p} d={d} init={init_kind}",
                xlabel="beta", ylabel="normalized overlap m*",
                vlines=vlines,
            )
            (out_dir / f"sweep_se_d{d}_{init_kind}.svg").write_text(svg)
    return result


def run_mle_mc(cfg: dict, out_dir: Path, fmt: str, jobs: int) -> SweepResult:
    p = _cfg_int(cfg, "p")
    k = _cfg_int(cfg, "k")
    d = _cfg_int(cfg, "d")
    snr_kind, grid = _snr_grid(cfg)
    trials = _cfg_int(cfg, "trials", 100)
    seed = _cfg_int(cfg, "seed", 0)
    kprime = _cfg_int(cfg, "kprime", k)
    alpha_k = math.log(k) / math.log(p)
    markers = {
        "gamma_ub_exact": thresholds_mod.gamma_upper_exact(alpha_k),
        "gamma_lb_gauss": thresholds_mod.gamma_lower_gauss(alpha_k, d * d < k),
        "gamma_lb_fano": thresholds_mod.gamma_lower_fano(alpha_k),
    }
    result = SweepResult(
        columns=["gamma", "beta", "rate_kprime", "rate_exact", "mean_overlap",
                 "trials", "seed", "gamma_ub_exact", "gamma_lb_gauss", "gamma_lb_fano"],
        config=dict(cfg, subcommand="mle-mc", jobs=jobs, format=fmt),
    )
    for snr in grid:
        beta = gamma_to_beta(float(snr), p, k, d) if snr_kind == "gamma" else float(snr)
        tasks = [(p, k, d, beta, seed, t) for t in range(trials)]
        rows = _pool_map(_mle_trial, tasks, jobs)
        overlaps = np.array([r[1] for r in rows])
        result.add(
            gamma=beta_to_gamma(beta, p, k, d), beta=beta,
            rate_kprime=float(np.mean(overlaps >= kprime)),
            rate_exact=float(np.mean(overlaps == k)),
            mean_overlap=float(np.mean(overlaps)),
            trials=trials, seed=seed, **markers,
        )
    path = out_dir / f"mle_mc.{fmt}"
    result.write(path, fmt)
    rows = sorted(result.rows, key=lambda r: r["gamma"])
    svg = line_chart(
        [(f"k'={kprime}", [r["gamma"] for r in rows], [r["rate_kprime"] for r in rows]),
         ("exact", [r["gamma"] for r in rows], [r["rate_exact"] for r in rows])],
        title=f"MLE recovery rate, p={p} k={k} d={d} ({trials} trials)",
        xlabel="gamma", ylabel="recovery rate",
        vlines=[(v, name) for name, v in markers.items()],
    )
    (out_dir / "mle_mc.svg").write_text(svg)
    return result


# ---------------------------------------------------------------------------
# argument parsing and dispatch
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="kdsh",
        description="Planted k-densest sub-hypergraph experiments",
    )
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--out-dir", default=".")
    ap.add_argument("--format", choices=("csv", "json"), default="csv")
    sub = ap.add_subparsers(dest="command", required=True)

    def add_size_flags(sp, with_d=True):
        sp.add_argument("--p", type=int, required=True)
        sp.add_argument("--k", type=int, required=True)
        if with_d:
            sp.add_argument("--d", type=int, required=True)

    def add_snr_flags(sp):
        sp.add_argument("--gamma", type=float, default=None)
        sp.add_argument("--beta", type=float, default=None)

    sp = sub.add_parser("gen", help="generate planted instances (binary tensor dump)")
    add_size_flags(sp)
    add_snr_flags(sp)
    sp.add_argument("--trials", type=int, default=1)

    sp = sub.add_parser("amp", help="run AMP trials")
    add_size_flags(sp)
    add_snr_flags(sp)
    sp.add_argument("--threshold", choices=("bernoulli", "vectorial"), default="vectorial")
    sp.add_argument("--init", choices=("ui", "ii"), default="ui")
    sp.add_argument("--trials", type=int, default=20)
    sp.add_argument("--damping", type=float, default=0.0)
    sp.add_argument("--max-iter", type=int, default=200, dest="max_iter")
    sp.add_argument("--tol", type=float, default=1e-8)

    sp = sub.add_parser("se", help="state-evolution fixed points over a beta grid")
    add_size_flags(sp)
    sp.add_argument("--beta-grid", required=True, dest="beta_grid")
    sp.add_argument("--init", choices=("ui", "ii", "both"), default="both")
    sp.add_argument("--quad-order", type=int, default=se_mod.DEFAULT_QUAD_ORDER,
                    dest="quad_order")

    sp = sub.add_parser("mle", help="exhaustive MLE trials")
    add_size_flags(sp)
    add_snr_flags(sp)
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--kprime", type=int, default=None)

    sp = sub.add_parser("cover", help="greedy coverage cardinalities")
    add_size_flags(sp, with_d=False)
    sp.add_argument("--r", type=int, default=None)

    sp = sub.add_parser("thresholds", help="threshold report for one (p, k, d)")
    add_size_flags(sp)
    sp.add_argument("--alpha", type=float, default=None)
    sp.add_argument("--kprime", type=int, default=None)

    for name in ("sweep-amp", "sweep-se", "mle-mc"):
        sp = sub.add_parser(name, help=f"{name} from a config file")
        sp.add_argument("config", help="INI config file with a matching section")

    return ap


_DISPATCH = {
    "gen": cmd_gen,
    "amp": cmd_amp,
    "se": cmd_se,
    "mle": cmd_mle,
    "cover": cmd_cover,
    "thresholds": cmd_thresholds,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    out_dir = Path(args.out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        if args.command in _DISPATCH:
            return _DISPATCH[args.command](args, out_dir, args.format, args.jobs)
        section = args.command
        cfg = load_config(args.config, section)
        if "seed" not in cfg:
            cfg["seed"] = str(args.seed)
        runner = {"sweep-amp": run_sweep_amp, "sweep-se": run_sweep_se,
                  "mle-mc": run_mle_mc}[section]
        runner(cfg, out_dir, args.format, args.jobs)
        return 0
    except (ConfigError, ParameterError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except CapacityError as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return 3
    except DivergenceError as exc:
        print(f"numerical divergence: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
