"""Batch front end: TOML run configs in, priced surfaces and reports out.

Verbs: price, check-stability, sweep-lambda, oracle-tree, oracle-mc.
Exit codes: 0 success, 1 bad config or runtime error, 2 stability refusal.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from . import expo, stability
from .errors import (ConfigError, ConvergenceFailure, DomainError,
                     InconsistentSteps, IndexOutOfRange, InvalidProbabilities,
                     NonPositivePivot, OutOfDomain)
from .grid import DEFAULT_BOUND, Grid, all_y, build_grid, interpolate, unflatten
from .model import BasketOption, MarketModel, validate
from .operator import assemble, dump_coo, is_metzler, log_norm_inf, norm_inf, stencil
from .oracles import McParams, TreeParams, mc_price_european, tree_price_2asset
from .stepper import initial_state, run
from .transform import TransformedProblem, build_transform, forward_point, inverse_point

DEFAULT_SWEEP = (0.0, 1.0, 10.0, 100.0, 1000.0, 10000.0)

_REQUIRED = object()


@dataclass
class RunConfig:
    source: str
    market: MarketModel
    option: BasketOption
    lo: np.ndarray
    hi: np.ndarray
    intervals: np.ndarray
    beta: np.ndarray
    time_step: float | str        # "auto" or explicit k in years
    queries: list
    seed: int
    backend: str
    override_stability: bool
    dump_operator: bool
    tree_steps: int
    mc_paths: int
    antithetic: bool
    sweep_penalties: list


class StabilityRefused(RuntimeError):
    def __init__(self, rep: stability.StabilityReport):
        self.report = rep
        super().__init__("stability conditions unsatisfied")


def _get(section: dict, key: str, where: str, default=_REQUIRED):
    if key in section:
        return section[key]
    if default is _REQUIRED:
        raise ConfigError(f"{where}.{key} is required")
    return default


def _number(section, key, where, default=_REQUIRED) -> float:
    v = _get(section, key, where, default)
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"{where}.{key}: expected a number, got {v!r}")
    return float(v)


def _integer(section, key, where, default=_REQUIRED) -> int:
    v = _get(section, key, where, default)
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigError(f"{where}.{key}: expected an integer, got {v!r}")
    return v


def _boolean(section, key, where, default=_REQUIRED) -> bool:
    v = _get(section, key, where, default)
    if not isinstance(v, bool):
        raise ConfigError(f"{where}.{key}: expected a boolean, got {v!r}")
    return v


def _string(section, key, where, default=_REQUIRED, choices=None) -> str:
    v = _get(section, key, where, default)
    if not isinstance(v, str):
        raise ConfigError(f"{where}.{key}: expected a string, got {v!r}")
    if choices and v not in choices:
        raise ConfigError(f"{where}.{key}: expected one of {choices}, got {v!r}")
    return v


def _num_list(section, key, where, default=_REQUIRED) -> list:
    v = _get(section, key, where, default)
    if not isinstance(v, list) or any(isinstance(x, bool) or not isinstance(x, (int, float)) for x in v):
        raise ConfigError(f"{where}.{key}: expected a list of numbers, got {v!r}")
    return [float(x) for x in v]


def load_config(path) -> RunConfig:
    path = Path(path)
    try:
        raw = tomllib.loads(path.read_text())
    except FileNotFoundError:
        raise ConfigError(f"{path}: no such file")
    except tomllib.TOMLDecodeError as e:
        raise ConfigError(f"{path}: {e}")

    mk = raw.get("market")
    if not isinstance(mk, dict):
        raise ConfigError("[market] section is required")
    assets = mk.get("assets")
    if not isinstance(assets, list) or not assets or not all(isinstance(a, dict) for a in assets):
        raise ConfigError("market.assets: expected at least one [[market.assets]] table")
    sigma = [_number(a, "sigma", f"market.assets[{i}]") for i, a in enumerate(assets)]
    dividend = [_number(a, "dividend", f"market.assets[{i}]", 0.0) for i, a in enumerate(assets)]
    m = len(assets)
    corr = mk.get("correlation", np.eye(m).tolist())
    corr_arr = np.asarray(corr, dtype=float) if isinstance(corr, list) else None
    if corr_arr is None or corr_arr.shape != (m, m):
        raise ConfigError(f"market.correlation: expected a {m}x{m} matrix (list of rows)")
    market = MarketModel(rate=_number(mk, "rate", "market"), sigma=np.array(sigma),
                         dividend=np.array(dividend), correlation=corr_arr)

    op = raw.get("option")
    if not isinstance(op, dict):
        raise ConfigError("[option] section is required")
    option = BasketOption(
        weights=np.asarray(_num_list(op, "weights", "option"), dtype=float),
        strike=_number(op, "strike", "option"),
        maturity=_number(op, "maturity", "option"),
        kind=_string(op, "kind", "option", "put", choices=("put", "call")),
        exercise=_string(op, "exercise", "option", "american",
                         choices=("american", "european")),
        penalty=_number(op, "penalty", "option", 0.0),
    )
    rep = validate(market, option)
    if not rep.ok:
        raise ConfigError(f"invalid market/option: {rep}")

    gr = raw.get("grid")
    if not isinstance(gr, dict):
        raise ConfigError("[grid] section is required")
    intervals = gr.get("intervals")
    if (not isinstance(intervals, list) or len(intervals) != m
            or any(isinstance(x, bool) or not isinstance(x, int) for x in intervals)):
        raise ConfigError(f"grid.intervals: expected {m} integers, got {intervals!r}")
    bounds = gr.get("bounds", [[-DEFAULT_BOUND, DEFAULT_BOUND]] * m)
    try:
        barr = np.asarray(bounds, dtype=float)
    except (TypeError, ValueError):
        barr = None
    if barr is None or barr.shape != (m, 2):
        raise ConfigError(f"grid.bounds: expected {m} [lo, hi] pairs, got {bounds!r}")
    beta = np.asarray(_num_list(gr, "beta", "grid", [1.0] * m), dtype=float)
    if beta.size != m:
        raise ConfigError(f"grid.beta: expected {m} entries, got {beta.size}")

    tm = raw.get("time", {})
    step = tm.get("step", "auto")
    if not (step == "auto" or (not isinstance(step, bool) and isinstance(step, (int, float)) and step > 0)):
        raise ConfigError(f'time.step: expected "auto" or a positive number, got {step!r}')

    rn = raw.get("run", {})
    queries_raw = rn.get("queries", [])
    queries = []
    for i, q in enumerate(queries_raw):
        qa = np.asarray(q, dtype=float) if isinstance(q, list) else None
        if qa is None or qa.shape != (m,):
            raise ConfigError(f"run.queries[{i}]: expected {m} spot prices, got {q!r}")
        queries.append(qa)

    oc = raw.get("oracle", {})
    sw = raw.get("sweep", {})
    return RunConfig(
        source=str(path),
        market=market,
        option=option,
        lo=barr[:, 0].copy(),
        hi=barr[:, 1].copy(),
        intervals=np.asarray(intervals, dtype=np.int64),
        beta=beta,
        time_step="auto" if step == "auto" else float(step),
        queries=queries,
        seed=_integer(rn, "seed", "run", 0),
        backend=_string(rn, "backend", "run", "auto", choices=("auto", "dense", "action")),
        override_stability=_boolean(rn, "override_stability", "run", False),
        dump_operator=_boolean(rn, "dump_operator", "run", False),
        tree_steps=_integer(oc, "tree_steps", "oracle", 1000),
        mc_paths=_integer(oc, "mc_paths", "oracle", 1_000_000),
        antithetic=_boolean(oc, "antithetic", "oracle", True),
        sweep_penalties=_num_list(sw, "penalties", "sweep", list(DEFAULT_SWEEP)),
    )


@dataclass
class RunArtifacts:
    config: RunConfig
    option: BasketOption
    tp: TransformedProblem
    grid: Grid
    rep: stability.StabilityReport
    k: float
    n_steps: int
    time_mode: str
    backend_info: dict
    mu_inf: float
    a_norm_inf: float
    metzler: bool
    u: np.ndarray
    min_u: np.ndarray
    max_u: np.ndarray
    query_prices: list
    timings: dict
    operator_dump: object = None   # DiscreteOperator when requested


def execute(cfg: RunConfig, option: BasketOption | None = None,
            override: bool = False) -> RunArtifacts:
    """Run the full pipeline once; raises StabilityRefused when gated off."""
    option = cfg.option if option is None else option
    lam = option.penalty_effective
    t_start = time.perf_counter()

    tp = build_transform(cfg.market)
    gr = build_grid(cfg.lo, cfg.hi, cfg.intervals, cfg.beta)
    coeffs = stencil(tp, gr, cfg.market.rate)
    if cfg.time_step == "auto":
        k, n_steps = stability.auto_time_step(option.maturity, gr.h, coeffs.d,
                                              cfg.market.rate, lam)
        time_mode = "auto"
    else:
        k, n_steps = stability.snap_time_step(option.maturity, float(cfg.time_step))
        time_mode = "explicit"
    rep = stability.report(tp, gr, cfg.market.rate, lam, k)
    if not rep.satisfied and not (override or cfg.override_stability):
        raise StabilityRefused(rep)

    t0 = time.perf_counter()
    op = assemble(coeffs, gr)
    t_assembly = time.perf_counter() - t0

    t0 = time.perf_counter()
    backend = expo.make_backend(op.matrix, k, mode=cfg.backend)
    t_expo = time.perf_counter() - t0

    state = initial_state(gr, tp, cfg.market, option, k, n_steps)
    result = run(state, backend)

    query_prices = []
    for spot in cfg.queries:
        y = forward_point(tp, cfg.market, option, spot)
        price = option.strike * interpolate(gr, result.u, y)
        query_prices.append({"spot": [float(v) for v in spot],
                             "y": [float(v) for v in y],
                             "price": float(price)})

    timings = {
        "assembly_s": t_assembly,
        "exponential_s": t_expo,
        "stepping_s": result.wall_time,
        "total_s": time.perf_counter() - t_start,
    }
    return RunArtifacts(
        config=cfg, option=option, tp=tp, grid=gr, rep=rep, k=k,
        n_steps=n_steps, time_mode=time_mode, backend_info=backend.info(),
        mu_inf=log_norm_inf(op.matrix), a_norm_inf=norm_inf(op.matrix),
        metzler=is_metzler(op.matrix), u=result.u, min_u=result.min_u,
        max_u=result.max_u, query_prices=query_prices, timings=timings,
        operator_dump=op if cfg.dump_operator else None,
    )


def query_price(u: np.ndarray, gr: Grid, tp: TransformedProblem,
                model: MarketModel, option: BasketOption, spot) -> float:
    """Price at an arbitrary spot: interpolate u in y, scale by the strike."""
    y = forward_point(tp, model, option, spot)
    return option.strike * interpolate(gr, u, y)


def summary_dict(art: RunArtifacts, with_timing: bool = True) -> dict:
    cfg = art.config
    out = {
        "config": cfg.source,
        "market": {
            "rate": cfg.market.rate,
            "sigma": cfg.market.sigma.tolist(),
            "dividend": cfg.market.dividend.tolist(),
            "correlation": cfg.market.correlation.tolist(),
        },
        "option": {
            "kind": art.option.kind,
            "exercise": art.option.exercise,
            "weights": art.option.weights.tolist(),
            "strike": art.option.strike,
            "maturity": art.option.maturity,
            "penalty": art.option.penalty,
            "penalty_effective": art.option.penalty_effective,
        },
        "grid": {
            "lo": cfg.lo.tolist(), "hi": cfg.hi.tolist(),
            "intervals": cfg.intervals.tolist(), "beta": cfg.beta.tolist(),
            "h": art.grid.h, "total_nodes": art.grid.total,
        },
        "time": {"k": art.k, "n_steps": art.n_steps, "mode": art.time_mode},
        "stability": {**art.rep.as_dict(),
                      "mu_inf": art.mu_inf,
                      "norm_inf": art.a_norm_inf,
                      "metzler": art.metzler},
        "backend": art.backend_info,
        "diagnostics": {
            "min_u": [float(v) for v in art.min_u],
            "max_u": [float(v) for v in art.max_u],
            "min_price": float(art.min_u.min() * art.option.strike),
            "max_price": float(art.max_u.max() * art.option.strike),
        },
        "queries": art.query_prices,
    }
    if with_timing:
        out["timing"] = art.timings
    return out


def emit_surface(art: RunArtifacts, path) -> None:
    """One CSV row per node: flat index, multi-index, y, S, price."""
    gr, cfg = art.grid, art.config
    multi = unflatten(gr, np.arange(gr.total))
    y = all_y(gr)
    s = inverse_point(art.tp, cfg.market, art.option, y)
    price = art.option.strike * art.u
    mdim = gr.n_axes
    header = (["index"] + [f"j{i+1}" for i in range(mdim)]
              + [f"y{i+1}" for i in range(mdim)]
              + [f"S{i+1}" for i in range(mdim)] + ["price"])
    with open(path, "w") as f:
        f.write(",".join(header) + "\n")
        for j in range(gr.total):
            cells = [str(j)]
            cells += [str(int(v)) for v in multi[j]]
            cells += [f"{v:.10g}" for v in y[j]]
            cells += [f"{v:.10g}" for v in s[j]]
            cells.append(f"{price[j]:.10g}")
            f.write(",".join(cells) + "\n")


def write_outputs(art: RunArtifacts, out_dir) -> list:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []

    summary_path = out_dir / "summary.json"
    summary_path.write_text(json.dumps(summary_dict(art), indent=2, sort_keys=True) + "\n")
    written.append(summary_path)

    surface_path = out_dir / "surface.csv"
    emit_surface(art, surface_path)
    written.append(surface_path)

    if art.query_prices:
        qpath = out_dir / "queries.csv"
        mdim = art.grid.n_axes
        with open(qpath, "w") as f:
            f.write(",".join([f"S{i+1}" for i in range(mdim)] + ["price"]) + "\n")
            for q in art.query_prices:
                f.write(",".join([f"{v:.10g}" for v in q["spot"]]
                                 + [f"{q['price']:.10g}"]) + "\n")
        written.append(qpath)

    if art.operator_dump is not None:
        opath = out_dir / "operator.csv"
        dump_coo(art.operator_dump, opath)
        written.append(opath)
    return written


def _print_refusal(rep: stability.StabilityReport) -> None:
    print("refusing to run: stability conditions unsatisfied "
          "(pass --override-stability to force)", file=sys.stderr)
    print(json.dumps(rep.as_dict(), indent=2, sort_keys=True), file=sys.stderr)


def cmd_price(args) -> int:
    cfg = load_config(args.config)
    try:
        art = execute(cfg, override=args.override_stability)
    except StabilityRefused as e:
        _print_refusal(e.report)
        return 2
    print(f"grid: {art.grid.total} nodes, h = {art.grid.h:.6g}; "
          f"time: k = {art.k:.6g} x {art.n_steps} steps ({art.time_mode}); "
          f"backend: {art.backend_info['mode']}")
    print(f"stability: satisfied = {art.rep.satisfied} "
          f"(h_max = {art.rep.h_max:.6g}, k_max = {art.rep.k_max:.6g})")
    for q in art.query_prices:
        print(f"price at S = {q['spot']}: {q['price']:.10g}")
    if args.out_dir:
        for p in write_outputs(art, args.out_dir):
            print(f"wrote {p}")
    return 0


def cmd_check_stability(args) -> int:
    cfg = load_config(args.config)
    tp = build_transform(cfg.market)
    gr = build_grid(cfg.lo, cfg.hi, cfg.intervals, cfg.beta)
    coeffs = stencil(tp, gr, cfg.market.rate)
    lam = cfg.option.penalty_effective
    if cfg.time_step == "auto":
        k, n_steps = stability.auto_time_step(cfg.option.maturity, gr.h,
                                              coeffs.d, cfg.market.rate, lam)
    else:
        k, n_steps = stability.snap_time_step(cfg.option.maturity, float(cfg.time_step))
    rep = stability.report(tp, gr, cfg.market.rate, lam, k)
    print(json.dumps({**rep.as_dict(), "n_steps": n_steps}, indent=2, sort_keys=True))
    return 0


def cmd_sweep_lambda(args) -> int:
    cfg = load_config(args.config)
    rows = []
    for lam in cfg.sweep_penalties:
        option = dataclasses.replace(cfg.option, penalty=lam,
                                     weights=cfg.option.weights.copy())
        try:
            art = execute(cfg, option=option, override=args.override_stability)
        except StabilityRefused as e:
            _print_refusal(e.report)
            return 2
        prices = [q["price"] for q in art.query_prices]
        rows.append({"penalty": lam, "k": art.k, "n_steps": art.n_steps,
                     "prices": prices})
        ptxt = ", ".join(f"{p:.6f}" for p in prices)
        print(f"lambda = {lam:>8g}: k = {art.k:.6g}, steps = {art.n_steps}, "
              f"prices = [{ptxt}]")
    if args.out_dir:
        out_dir = Path(args.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        path = out_dir / "sweep.json"
        path.write_text(json.dumps(rows, indent=2, sort_keys=True) + "\n")
        print(f"wrote {path}")
    return 0


def cmd_oracle_tree(args) -> int:
    cfg = load_config(args.config)
    steps = args.steps if args.steps else cfg.tree_steps
    rows = []
    for spot in cfg.queries:
        price = tree_price_2asset(cfg.market, cfg.option, spot,
                                  TreeParams(steps=steps))
        rows.append({"spot": [float(v) for v in spot], "price": price})
        print(f"tree price at S = {spot.tolist()} ({steps} steps): {price:.10g}")
    if args.out_dir:
        out_dir = Path(args.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        path = out_dir / "oracle_tree.json"
        path.write_text(json.dumps(rows, indent=2, sort_keys=True) + "\n")
        print(f"wrote {path}")
    return 0


def cmd_oracle_mc(args) -> int:
    cfg = load_config(args.config)
    seed = args.seed if args.seed is not None else cfg.seed
    paths = args.paths if args.paths else cfg.mc_paths
    params = McParams(paths=paths, seed=seed, antithetic=cfg.antithetic)
    rows = []
    for spot in cfg.queries:
        res = mc_price_european(cfg.market, cfg.option, spot, params)
        rows.append({"spot": [float(v) for v in spot], "price": res.price,
                     "stderr": res.stderr, "paths": res.paths, "seed": seed})
        print(f"mc price at S = {spot.tolist()} ({res.paths} paths, seed {seed}): "
              f"{res.price:.10g} +- {res.stderr:.3g}")
    if args.out_dir:
        out_dir = Path(args.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        path = out_dir / "oracle_mc.json"
        path.write_text(json.dumps(rows, indent=2, sort_keys=True) + "\n")
        print(f"wrote {path}")
    return 0


_PIPELINE_ERRORS = (ConfigError, DomainError, InconsistentSteps, IndexOutOfRange,
                    OutOfDomain, ConvergenceFailure, InvalidProbabilities,
                    NonPositivePivot, ValueError)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="basketetd",
        description="Multi-asset basket option pricer (decorrelated grid, "
                    "explicit exponential time stepping)")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", required=True, help="TOML run configuration")
        p.add_argument("--out-dir", default=None, help="directory for output files")
        p.add_argument("--seed", type=int, default=None, help="override run.seed")
        p.add_argument("--override-stability", action="store_true",
                       help="run even when the step-size conditions fail")

    p_price = sub.add_parser("price", help="full pipeline: solve and report prices")
    add_common(p_price)
    p_price.set_defaults(handler=cmd_price)

    p_check = sub.add_parser("check-stability", help="report step-size bounds only")
    add_common(p_check)
    p_check.set_defaults(handler=cmd_check_stability)

    p_sweep = sub.add_parser("sweep-lambda", help="price across penalty values")
    add_common(p_sweep)
    p_sweep.set_defaults(handler=cmd_sweep_lambda)

    p_tree = sub.add_parser("oracle-tree", help="two-asset lattice reference price")
    add_common(p_tree)
    p_tree.add_argument("--steps", type=int, default=None, help="override oracle.tree_steps")
    p_tree.set_defaults(handler=cmd_oracle_tree)

    p_mc = sub.add_parser("oracle-mc", help="Monte Carlo reference price (European)")
    add_common(p_mc)
    p_mc.add_argument("--paths", type=int, default=None, help="override oracle.mc_paths")
    p_mc.set_defaults(handler=cmd_oracle_mc)

    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except _PIPELINE_ERRORS as e:
        print(f"error [{type(e).__name__}]: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
