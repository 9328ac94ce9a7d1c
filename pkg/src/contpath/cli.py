"""Command-line entry point (``contpath``).

Exit status: 0 on success, 2 for bad configuration or input, 3 when a run
fails numerically.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import harness, regression, tsp
from .bench import DEFAULT_BUDGET, Benchmark, benchmark_problem, objective
from .homotopy import InvalidParam
from .pathmodel import path_sweep
from .rng import RngStream
from .serialize import load_model, save_model

EXIT_CONFIG = 2
EXIT_NUMERIC = 3


def _params(pairs) -> dict:
    out = {}
    for item in pairs or ():
        key, sep, raw = item.partition("=")
        if not sep or not key:
            raise InvalidParam(f"--param expects key=value, got {item!r}")
        try:
            out[key] = json.loads(raw)
        except json.JSONDecodeError:
            out[key] = raw
    return out


def _seeds(text: str | None, first: int) -> list[int] | None:
    if text is None:
        return None
    try:
        if "," in text:
            return [int(s) for s in text.split(",") if s]
        return list(range(first, first + int(text)))
    except ValueError:
        raise InvalidParam(f"--seeds takes a count or a comma list, got {text!r}") from None


def _int_list(text: str, sep: str) -> list[int]:
    try:
        return [int(v) for v in text.split(sep) if v]
    except ValueError:
        raise InvalidParam(f"expected integers separated by {sep!r}, got {text!r}") from None


def _emit(text: str, out) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_bench(args) -> None:
    if args.config:
        try:
            data = json.loads(Path(args.config).read_text())
        except json.JSONDecodeError as exc:
            raise InvalidParam(f"{args.config}: not valid JSON ({exc})") from None
        if isinstance(data, dict) and isinstance(data.get("config"), dict):
            data = data["config"]
        cfg = harness.RunConfig.from_dict(data)
    else:
        cfg = harness.RunConfig(args.problem, args.algo, seed=args.seed, budget=args.budget,
                                params=_params(args.param))
    results = harness.run_bench(cfg, seeds=_seeds(args.seeds, cfg.seed), out_dir=args.out)
    report = results[0].summary() if len(results) == 1 else harness.aggregate(results)
    print(json.dumps(report, indent=2, sort_keys=True))


def cmd_path_train(args) -> None:
    bench = Benchmark.parse(args.problem)
    total = args.budget if args.budget is not None else DEFAULT_BUDGET[bench]
    params = _params(args.param)
    if args.hidden:
        params["hidden"] = _int_list(args.hidden, ",")
    cfg = harness.RunConfig(bench.value, "cpl", seed=args.seed, budget=total, params=params)
    m, trace, x1 = harness.train_path(cfg)
    save_model(m, args.out)
    print(json.dumps({"model": str(args.out), "evals": trace.evals, "x_path": list(map(float, x1)),
                      "f_path": float(objective(bench)(x1))}, indent=2))


def cmd_path_sweep(args) -> None:
    m = load_model(args.model)
    H = benchmark_problem(args.problem, rng=RngStream(args.seed, harness.STREAM_SMOOTHING))
    _emit(path_sweep(m, H, args.grid).to_csv(), args.out)


def cmd_regress(args) -> None:
    p = regression.make_problem(args.problem, n=args.n, noise_scale=args.noise, seed=args.seed)
    _, curve = regression.cpl_regression(p, seed=args.seed, grid_size=args.grid)
    _emit(regression.curve_csv(p, curve), args.out)
    best = int(np.argmin(curve.f_values))
    print(f"minimum clean loss {curve.f_values[best]:.6g} at t={curve.grid[best]:.2f}", file=sys.stderr)


def cmd_tsp_smooth(args) -> None:
    raw = tsp.read_instance(args.instance)
    c = tsp.smooth_costs(tsp.normalize_costs(raw), args.t)
    lines = [" ".join(repr(float(v)) for v in row) for row in c]
    _emit("\n".join(lines) + "\n", args.out)
    if args.tour:
        tour = _int_list(args.tour, ",")
        print(f"tour cost at t={args.t}: {tsp.tour_cost(c, tour)!r}", file=sys.stderr)


def cmd_model_sweep(args) -> None:
    dims = [_int_list(d, "-") for d in args.dims]
    seeds = _seeds(args.seeds, args.seed) or [args.seed]
    rows = harness.run_model_size_sweep(args.problem, dims, budget=args.budget, seeds=seeds)
    _emit(harness.sweep_csv(rows), args.out)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="contpath", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bench", help="run an optimizer on a benchmark")
    b.add_argument("--problem", default="ackley")
    b.add_argument("--algo", default="cpl", choices=harness.ALGORITHMS)
    b.add_argument("--budget", type=int)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--seeds", help="seed count (from --seed) or comma-separated list")
    b.add_argument("--param", action="append", metavar="KEY=VALUE", help="override a hyperparameter")
    b.add_argument("--config", help="replay a stored RunConfig JSON (or a summary's 'config')")
    b.add_argument("--out", help="directory for trace CSV and summary JSON")
    b.set_defaults(func=cmd_bench)

    t = sub.add_parser("path-train", help="train a path model and save it")
    t.add_argument("--problem", default="ackley")
    t.add_argument("--budget", type=int, help="training budget (default: the problem's full budget)")
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--hidden", help="hidden sizes, e.g. 128,128")
    t.add_argument("--param", action="append", metavar="KEY=VALUE")
    t.add_argument("--out", required=True, help="model file to write")
    t.set_defaults(func=cmd_path_train)

    s = sub.add_parser("path-sweep", help="evaluate a saved path model on a t grid")
    s.add_argument("--model", required=True)
    s.add_argument("--problem", default="ackley")
    s.add_argument("--grid", type=int, default=101)
    s.add_argument("--seed", type=int, default=0, help="seed for Monte Carlo smoothing")
    s.add_argument("--out")
    s.set_defaults(func=cmd_path_sweep)

    r = sub.add_parser("regress", help="learn the regression path for F1..F4")
    r.add_argument("--problem", default="F1")
    r.add_argument("--noise", type=float, default=0.1)
    r.add_argument("--n", type=int, default=200)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--grid", type=int, default=101)
    r.add_argument("--out")
    r.set_defaults(func=cmd_regress)

    p = sub.add_parser("tsp-smooth", help="normalize and smooth a TSP cost matrix")
    p.add_argument("--instance", required=True, help="'x y' coordinate lines or a square matrix")
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--tour", help="comma-separated 0-based tour to price")
    p.add_argument("--out")
    p.set_defaults(func=cmd_tsp_smooth)

    m = sub.add_parser("model-sweep", help="CPL final value across path-model sizes")
    m.add_argument("--problem", default="ackley")
    m.add_argument("--dims", action="append", required=True, help="layer sizes like 1-16-2 (repeatable)")
    m.add_argument("--budget", type=int)
    m.add_argument("--seed", type=int, default=0)
    m.add_argument("--seeds")
    m.add_argument("--out")
    m.set_defaults(func=cmd_model_sweep)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except ArithmeticError as exc:
        print(f"contpath: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, KeyError, OSError) as exc:
        print(f"contpath: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return 0


if __name__ == "__main__":
    sys.exit(main())
