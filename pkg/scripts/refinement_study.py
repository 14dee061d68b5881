#!/usr/bin/env python3
"""Spatial refinement study for the two-asset American basket put.

Halves the mesh width repeatedly, prices the at-the-money point on each
grid, and reports successive differences and their ratios (a ratio near 4
indicates second-order spatial convergence). A 1000-step recombining
lattice price is printed alongside as an independent reference.

Usage:
    python3 scripts/refinement_study.py [--max-intervals 160] [--step auto]
"""

import argparse
import time

import numpy as np

import basketetd as bk
import basketetd.cli as cli
from basketetd.oracles import TreeParams, tree_price_2asset


def make_config(market, option, intervals, *, step="auto", backend="auto",
                bound=8.0, queries=()):
    m = market.n_assets
    return cli.RunConfig(
        source="<refinement_study>", market=market, option=option,
        lo=np.full(m, -bound), hi=np.full(m, bound),
        intervals=np.full(m, intervals, dtype=np.int64), beta=np.ones(m),
        time_step=step,
        queries=[np.asarray(q, dtype=float) for q in queries],
        seed=0, backend=backend, override_stability=False,
        dump_operator=False, tree_steps=1000, mc_paths=1_000_000,
        antithetic=True, sweep_penalties=[])


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-intervals", type=int, default=160,
                    help="finest grid: intervals per axis (default 160)")
    ap.add_argument("--step", default="auto",
                    help="time step: 'auto' or a number (default auto)")
    ap.add_argument("--tree-steps", type=int, default=1000)
    args = ap.parse_args()

    market = bk.MarketModel(rate=0.05, sigma=np.array([0.3, 0.2]),
                            correlation=np.array([[1.0, 0.6], [0.6, 1.0]]))
    option = bk.BasketOption(weights=np.array([0.7, 0.3]), strike=50.0,
                             maturity=1.0, kind="put", exercise="american",
                             penalty=100.0)
    spot = (50.0, 50.0)
    step = args.step if args.step == "auto" else float(args.step)

    ladder = [n for n in (20, 40, 80, 160, 320) if n <= args.max_intervals]

    print("American basket put, strike 50, maturity 1, penalty 100")
    print(f"query spot {spot}, time step = {step!r}\n")
    header = f"{'n':>4} {'h':>7} {'k':>10} {'steps':>6} {'backend':>7} " \
             f"{'price':>10} {'diff':>11} {'ratio':>7} {'wall s':>8}"
    print(header)
    print("-" * len(header))

    prices = []
    for n in ladder:
        cfg = make_config(market, option, n, step=step, queries=[spot])
        t0 = time.perf_counter()
        art = cli.execute(cfg)
        wall = time.perf_counter() - t0
        price = art.query_prices[0]["price"]
        prices.append(price)
        diff = "" if len(prices) < 2 else f"{prices[-1] - prices[-2]:+.6f}"
        ratio = ""
        if len(prices) >= 3:
            d1 = prices[-2] - prices[-3]
            d2 = prices[-1] - prices[-2]
            ratio = f"{d1 / d2:7.2f}" if d2 != 0 else "    inf"
        print(f"{n:>4} {art.grid.h:>7.3f} {art.k:>10.3e} "
              f"{art.n_steps:>6} {art.backend_info['mode']:>7} "
              f"{price:>10.6f} {diff:>11} {ratio:>7} {wall:>8.2f}")

    t0 = time.perf_counter()
    ref = tree_price_2asset(market, option, spot,
                            TreeParams(steps=args.tree_steps))
    wall = time.perf_counter() - t0
    print("-" * len(header))
    print(f"lattice reference ({args.tree_steps} steps): {ref:.6f} "
          f"[{wall:.2f} s]")
    if len(prices) >= 2:
        print(f"finest grid vs lattice: {prices[-1] - ref:+.6f}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
