"""Experiment orchestration: replayable run configs, seeded trials, reports.

A :class:`RunConfig` names a problem, an algorithm, its hyperparameters, a
budget and a seed. ``resolved()`` fills every default in explicitly, so the
stored JSON replays the run bit for bit. Trials draw from counter-based
streams keyed by their own seed, which makes the output independent of how
trials are scheduled across threads.
"""

from __future__ import annotations

import copy
import json
import math
import os
import statistics
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .bench import DEFAULT_BETA, DEFAULT_BUDGET, DEFAULT_X0, Benchmark, benchmark_problem, objective
from .budget import Budget
from .gradest import GradMode
from .homotopy import InvalidParam, make_schedule
from .optimizers import SlghConfig, classical_homotopy, gradient_descent, slgh
from .pathmodel import CplTrainConfig, local_search, model_forward, model_init, cpl_train
from .rng import RngStream
from .trace import RunTrace

ALGORITHMS = ("gd", "homotopy", "slgh_r", "slgh_d", "cpl")

# Stream ids; each trial keys them with its own seed.
STREAM_ALGO = 1
STREAM_SMOOTHING = 2

# Fraction of the budget spent on path training in the CPL pipeline.
CPL_TRAIN_FRACTION = 0.95

_ACKLEY_GH = {"grad": "gh_zeroth", "k": 1}

DEFAULT_PARAMS = {
    Benchmark.ACKLEY: {
        "gd": {"eta": 1e-2},
        "homotopy": {"schedule": "geometric", "gamma": 0.5, "eta": 0.05, "eta_min": 5e-3, **_ACKLEY_GH},
        "slgh_r": {"gamma": 0.995, "eta1": 1e-2, "eta2": 1e-3, **_ACKLEY_GH},
        "slgh_d": {"gamma": 0.995, "eta1": 1e-2, "eta2": 1e-3, **_ACKLEY_GH},
        "cpl": {"hidden": [128, 128], "optimizer": "sgd", "learning_rate": 5e-2,
                "samples_per_iter": 2, "ls_eta": 5e-3, **_ACKLEY_GH},
    },
    Benchmark.ROSENBROCK: {
        "gd": {"eta": 1e-3},
        "homotopy": {"schedule": "geometric", "gamma": 0.5, "eta": 5e-4},
        "slgh_r": {"gamma": 0.999, "eta1": 5e-4, "eta2": 1e-3},
        "slgh_d": {"gamma": 0.999, "eta1": 5e-4, "eta2": 1e-3},
        "cpl": {"hidden": [128, 128], "optimizer": "adam", "learning_rate": 1e-3,
                "samples_per_iter": 2, "ls_eta": 1.9e-3},
    },
    Benchmark.HIMMELBLAU: {
        "gd": {"eta": 1e-2},
        "homotopy": {"schedule": "geometric", "gamma": 0.5, "eta": 1e-2},
        "slgh_r": {"gamma": 0.995, "eta1": 1e-2, "eta2": 1e-3},
        "slgh_d": {"gamma": 0.995, "eta1": 1e-2, "eta2": 1e-3},
        "cpl": {"hidden": [128, 128], "optimizer": "adam", "learning_rate": 1e-3,
                "samples_per_iter": 2, "ls_eta": 1e-2},
    },
}

# Shared by every algorithm unless overridden.
COMMON_PARAMS = {"grad": "analytic", "k": 1, "sigma": 0.1, "mc_samples": 64, "trace_every": 10}
HOMOTOPY_COMMON = {"levels": 10, "eta_min": None}
CPL_COMMON = {"lr_schedule": "cosine", "activation": "relu", "breakpoints": "uniform", "ls_grad": "analytic"}


@dataclass
class RunConfig:
    problem: str
    algo: str
    seed: int = 0
    budget: int | None = None
    x0: list[float] | None = None
    beta: float | None = None
    params: dict = field(default_factory=dict)
    kind: str = "bench"

    def validate(self) -> None:
        Benchmark.parse(self.problem)
        if self.algo not in ALGORITHMS:
            raise InvalidParam(f"unknown algorithm {self.algo!r}; choose from {ALGORITHMS}")
        if self.kind != "bench":
            raise InvalidParam(f"unknown experiment kind {self.kind!r}")
        if self.budget is not None and self.budget < 2:
            raise InvalidParam("budget must be at least 2")
        if self.x0 is not None and len(self.x0) != 2:
            raise InvalidParam("x0 must have two coordinates")
        if self.beta is not None and self.beta <= 0:
            raise InvalidParam("beta must be positive")
        if not isinstance(self.seed, int) or self.seed < 0:
            raise InvalidParam("seed must be a non-negative integer")

    def resolved(self) -> "RunConfig":
        """A copy with every default written out."""
        self.validate()
        bench = Benchmark.parse(self.problem)
        params = dict(COMMON_PARAMS)
        if self.algo == "cpl":
            params.update(CPL_COMMON)
        elif self.algo == "homotopy":
            params.update(HOMOTOPY_COMMON)
        params.update(DEFAULT_PARAMS[bench][self.algo])
        unknown = set(self.params) - set(params)
        if unknown:
            raise InvalidParam(f"unknown parameter(s) for {self.algo}: {sorted(unknown)}")
        params.update(copy.deepcopy(self.params))
        return RunConfig(
            problem=bench.value,
            algo=self.algo,
            seed=self.seed,
            budget=self.budget if self.budget is not None else DEFAULT_BUDGET[bench],
            x0=[float(v) for v in (self.x0 if self.x0 is not None else DEFAULT_X0[bench])],
            beta=float(self.beta if self.beta is not None else DEFAULT_BETA[bench]),
            params=params,
            kind=self.kind,
        )

    def with_seed(self, seed: int) -> "RunConfig":
        out = copy.deepcopy(self)
        out.seed = seed
        return out

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        if not isinstance(data, dict):
            raise InvalidParam("run config must be a JSON object")
        allowed = set(cls.__dataclass_fields__)
        unknown = set(data) - allowed
        if unknown:
            raise InvalidParam(f"unknown run config field(s): {sorted(unknown)}")
        if "problem" not in data or "algo" not in data:
            raise InvalidParam("run config needs 'problem' and 'algo'")
        cfg = cls(**data)
        cfg.validate()
        return cfg

    @classmethod
    def from_json(cls, text: str) -> "RunConfig":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InvalidParam(f"run config is not valid JSON: {exc}") from None
        return cls.from_dict(data)


@dataclass
class BenchResult:
    config: RunConfig
    x_final: np.ndarray
    f_final: float
    trace: RunTrace
    budget_used: int
    extra: dict = field(default_factory=dict)

    def summary(self) -> dict:
        return {
            "config": self.config.to_dict(),
            "x_final": [float(v) for v in self.x_final],
            "f_final": self.f_final,
            "best_f": self.trace.best,
            "evals": self.budget_used,
            **self.extra,
        }


def _grad_mode(p: dict, beta: float, prefix: str = "") -> GradMode:
    kind = p[prefix + "grad"]
    return GradMode(kind=kind, beta=beta if kind == "gh_zeroth" else None, k=int(p["k"]),
                    sigma=float(p["sigma"]))


def run_trial(config: RunConfig) -> BenchResult:
    """Run one seeded trial. ``config`` is resolved first."""
    cfg = config.resolved()
    p = cfg.params
    H, f, root = _setup(cfg)
    budget = Budget(cfg.budget)
    x0 = np.array(cfg.x0)
    mode = _grad_mode(p, cfg.beta)
    every = int(p["trace_every"])
    extra = {}

    if cfg.algo == "gd":
        res = gradient_descent(H, x0, p["eta"], budget, grad_mode=mode, rng=root, monitor=f,
                               trace_every=every)
    elif cfg.algo == "homotopy":
        if p["schedule"] == "geometric":
            sched = make_schedule("geometric", gamma=p["gamma"])
        else:
            sched = make_schedule("uniform", K=int(p["levels"]))
        eta, eta_min = p["eta"], p["eta_min"]
        step = (lambda t: max(eta * (1.0 - t), eta_min)) if eta_min is not None else eta
        res = classical_homotopy(H, sched, x0, step, budget, grad_mode=mode, rng=root,
                                 monitor=f, trace_every=every)
    elif cfg.algo in ("slgh_r", "slgh_d"):
        sc = SlghConfig(gamma=p["gamma"], eta1=p["eta1"], eta2=p["eta2"],
                        variant="ratio" if cfg.algo == "slgh_r" else "derivative")
        res = slgh(H, sc, x0, budget, grad_mode=mode, rng=root, monitor=f, trace_every=every)
    else:
        return _run_cpl(cfg, H, f, budget, x0, mode, root)
    return BenchResult(cfg, res.x_final, res.f_final, res.trace, res.budget_used, extra)


def _train(cfg, H, f, budget, x0, mode, rng):
    p = cfg.params
    dims = [1, *[int(h) for h in p["hidden"]], 2]
    m = model_init(dims, p["activation"], seed=cfg.seed, out_bias=x0, breakpoints=p["breakpoints"])
    train_cfg = CplTrainConfig(iterations=None, samples_per_iter=int(p["samples_per_iter"]),
                               learning_rate=p["learning_rate"], grad_mode=mode,
                               optimizer=p["optimizer"], lr_schedule=p["lr_schedule"],
                               trace_every=int(p["trace_every"]))
    _, trace = cpl_train(m, H, train_cfg, budget, rng, monitor=f)
    return m, trace


def _setup(cfg):
    bench = Benchmark.parse(cfg.problem)
    H = benchmark_problem(bench, beta=cfg.beta, rng=RngStream(cfg.seed, STREAM_SMOOTHING),
                          mc_samples=int(cfg.params["mc_samples"]))
    return H, objective(bench), RngStream(cfg.seed, STREAM_ALGO)


def train_path(config: RunConfig):
    """Train a CPL path model on the whole budget of ``config`` (no local search).

    Returns ``(model, trace, x_phi(1))``.
    """
    if config.algo != "cpl":
        raise InvalidParam("train_path needs a cpl config")
    cfg = config.resolved()
    H, f, rng = _setup(cfg)
    m, trace = _train(cfg, H, f, Budget(cfg.budget), np.array(cfg.x0), _grad_mode(cfg.params, cfg.beta), rng)
    return m, trace, model_forward(m, 1.0)


def _run_cpl(cfg, H, f, budget, x0, mode, rng) -> BenchResult:
    """95% of the budget trains the path, the rest (minus one) refines x_phi(1)."""
    p = cfg.params
    train = budget.child(int(round(CPL_TRAIN_FRACTION * cfg.budget)))
    m, trace = _train(cfg, H, f, train, x0, mode, rng)
    x_path = model_forward(m, 1.0)
    iteration = trace.records[-1].iter
    search = budget.child(budget.remaining - 1)
    x = local_search(m, H, 1.0, p["ls_eta"], search, _grad_mode(p, cfg.beta, "ls_"), rng)
    iteration += 1
    trace.log(iteration, budget.used, 1.0, float(f(x)))
    budget.charge(1)
    f_final = float(H(x, 1.0))
    trace.log(iteration, budget.used, 1.0, f_final)
    extra = {"f_path": float(f(x_path)), "x_path": [float(v) for v in x_path]}
    return BenchResult(cfg, x, f_final, trace, budget.used, extra)


def thread_cap() -> int:
    raw = os.environ.get("CONTPATH_THREADS", "")
    if not raw:
        return os.cpu_count() or 1
    try:
        n = int(raw)
    except ValueError:
        raise InvalidParam(f"CONTPATH_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise InvalidParam("CONTPATH_THREADS must be at least 1")
    return n


def run_trials(configs, threads: int | None = None) -> list[BenchResult]:
    """Run independent trials, possibly in parallel; results keep input order."""
    configs = list(configs)
    workers = min(threads or thread_cap(), max(len(configs), 1))
    if workers == 1:
        return [run_trial(c) for c in configs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run_trial, configs))


def _stem(cfg: RunConfig) -> str:
    return f"{cfg.problem}-{cfg.algo}-seed{cfg.seed}"


def write_result(result: BenchResult, out_dir) -> tuple[Path, Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    stem = _stem(result.config)
    trace_path = out / f"{stem}.trace.csv"
    summary_path = out / f"{stem}.summary.json"
    trace_path.write_text(result.trace.to_csv())
    summary_path.write_text(json.dumps(result.summary(), indent=2, sort_keys=True) + "\n")
    return trace_path, summary_path


def aggregate(results: list[BenchResult]) -> dict:
    values = [r.f_final for r in results]
    return {
        "config": results[0].config.to_dict() if results else None,
        "seeds": [r.config.seed for r in results],
        "f_final": values,
        "median": statistics.median(values) if values else math.nan,
        "mean": statistics.fmean(values) if values else math.nan,
        "min": min(values, default=math.nan),
        "max": max(values, default=math.nan),
    }


def run_bench(config: RunConfig, seeds=None, out_dir=None, threads: int | None = None) -> list[BenchResult]:
    """Run ``config`` once per seed (default: its own seed) and optionally write reports.

    Each trial writes ``<problem>-<algo>-seed<k>.trace.csv`` and a matching
    ``.summary.json``; multi-seed runs add ``<problem>-<algo>.summary.json``
    with the aggregate.
    """
    seeds = [config.seed] if seeds is None else list(seeds)
    if not seeds:
        raise InvalidParam("need at least one seed")
    results = run_trials([config.with_seed(s) for s in seeds], threads)
    if out_dir is not None:
        for r in results:
            write_result(r, out_dir)
        if len(results) > 1:
            agg = aggregate(results)
            path = Path(out_dir) / f"{results[0].config.problem}-{results[0].config.algo}.summary.json"
            path.write_text(json.dumps(agg, indent=2, sort_keys=True) + "\n")
    return results


@dataclass
class SweepRow:
    """``median``/``values`` are final values; ``path_median`` is x_phi(1) before local search."""

    dims: list[int]
    median: float
    values: list[float]
    path_median: float


def run_model_size_sweep(problem, dims_list, budget: int | None = None, seeds=(0,),
                         threads: int | None = None, params: dict | None = None) -> list[SweepRow]:
    """CPL final values per architecture; one row per entry of ``dims_list``.

    Entries are full layer sizes ``[1, hidden..., 2]``. Duplicates give
    duplicate rows.
    """
    bench = Benchmark.parse(problem)
    rows = []
    for dims in dims_list:
        dims = [int(d) for d in dims]
        if len(dims) < 2 or dims[0] != 1 or dims[-1] != 2:
            raise InvalidParam(f"model dims must look like [1, ..., 2], got {dims}")
        cfg = RunConfig(bench.value, "cpl", budget=budget, params={**(params or {}), "hidden": dims[1:-1]})
        results = run_bench(cfg, seeds=seeds, threads=threads)
        values = [r.f_final for r in results]
        path = statistics.median(r.extra["f_path"] for r in results)
        rows.append(SweepRow(dims, statistics.median(values), values, path))
    return rows


def sweep_csv(rows: list[SweepRow]) -> str:
    lines = ["dims,median,path_median,values"]
    for r in rows:
        dims = "-".join(str(d) for d in r.dims)
        vals = ";".join(repr(v) for v in r.values)
        lines.append(f"{dims},{r.median!r},{r.path_median!r},{vals}")
    return "\n".join(lines) + "\n"
