"""Baseline optimizers: gradient descent, classical homotopy and SLGH.

Every optimizer runs until its budget is spent (or the gradient vanishes)
and always keeps one unit in reserve for the closing evaluation of the
original objective H(x_final, 1).

``monitor`` is an optional uncounted copy of the original objective used
only to fill the trace's best-so-far column; algorithms never read it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .bench import SingularGradient
from .budget import Budget
from .gradest import GradMode, homotopy_grad
from .homotopy import HomotopyProblem, InvalidParam, Schedule
from .rng import RngStream
from .trace import RunTrace

GRAD_TOL = 1e-10


class NonFiniteIterate(ArithmeticError):
    """The iterate left the finite domain; ``last_finite`` holds the last good one."""

    def __init__(self, message: str, last_finite: np.ndarray, trace: RunTrace | None = None):
        super().__init__(message)
        self.last_finite = last_finite
        self.trace = trace


@dataclass
class OptimizerResult:
    x_final: np.ndarray
    f_final: float
    trace: RunTrace
    budget_used: int


@dataclass
class _Progress:
    """Shared loop state so several descents can write one continuous trace."""

    budget: Budget
    trace: RunTrace = field(default_factory=RunTrace)
    monitor: Callable | None = None
    trace_every: int = 1
    iteration: int = 0

    def log(self, x, t):
        if self.iteration % self.trace_every == 0:
            value = float(self.monitor(x)) if self.monitor is not None else float("nan")
            self.trace.log(self.iteration, self.budget.used, t, value)


def _descend(H, x, t, eta, quota, mode, rng, prog: _Progress, reserve: int):
    """Fixed-step descent on H(., t) spending at most ``quota`` units."""
    cost = mode.cost(H)
    spent = 0
    while spent + cost <= quota and prog.budget.affordable(cost, reserve):
        try:
            with np.errstate(over="ignore", invalid="ignore"):  # divergence is reported below
                est = homotopy_grad(H, x, t, mode, rng)
        except SingularGradient:
            break
        prog.budget.charge(est.evals_used)
        spent += est.evals_used
        if not np.all(np.isfinite(est.grad)):
            raise NonFiniteIterate(f"non-finite gradient at t={t}", x.copy(), prog.trace)
        if np.linalg.norm(est.grad) < GRAD_TOL:
            break
        x_new = x - eta * est.grad
        if not np.all(np.isfinite(x_new)):
            raise NonFiniteIterate(f"iterate diverged at t={t}", x.copy(), prog.trace)
        x = x_new
        prog.iteration += 1
        prog.log(x, t)
    return x


def _finish(H, x, prog: _Progress) -> OptimizerResult:
    prog.budget.charge(1)
    f_final = float(H(x, 1.0))
    prog.trace.log(prog.iteration, prog.budget.used, 1.0, f_final)
    return OptimizerResult(x, f_final, prog.trace, prog.budget.used)


def gradient_descent(H: HomotopyProblem, x0, eta: float, budget: Budget, t_fixed: float = 1.0,
                     grad_mode: GradMode | None = None, rng: RngStream | None = None,
                     monitor: Callable | None = None, trace_every: int = 1) -> OptimizerResult:
    """Fixed-step gradient descent on H(., t_fixed)."""
    if eta <= 0:
        raise InvalidParam("eta must be positive")
    mode = grad_mode or GradMode()
    prog = _Progress(budget, monitor=monitor, trace_every=trace_every)
    x = np.asarray(x0, dtype=float).copy()
    prog.log(x, t_fixed)
    x = _descend(H, x, t_fixed, eta, budget.remaining - 1, mode, rng, prog, reserve=1)
    return _finish(H, x, prog)


def classical_homotopy(H: HomotopyProblem, schedule: Schedule, x0, eta, budget: Budget,
                       grad_mode: GradMode | None = None, rng: RngStream | None = None,
                       monitor: Callable | None = None, trace_every: int = 1) -> OptimizerResult:
    """Solve H(., t_k) level by level, warm-starting from the previous level.

    Each level gets an equal share of the budget (the last level also gets
    the rounding remainder). ``eta`` is a float or a callable of the level t.
    """
    mode = grad_mode or GradMode()
    prog = _Progress(budget, monitor=monitor, trace_every=trace_every)
    x = np.asarray(x0, dtype=float).copy()
    levels = list(schedule)
    prog.log(x, levels[0])
    quota = (budget.remaining - 1) // len(levels)
    for i, t in enumerate(levels):
        step = eta(t) if callable(eta) else eta
        if step <= 0:
            raise InvalidParam("eta must be positive")
        q = budget.remaining - 1 if i == len(levels) - 1 else quota
        x = _descend(H, x, t, step, q, mode, rng, prog, reserve=1)
    return _finish(H, x, prog)


@dataclass(frozen=True)
class SlghConfig:
    """Single-loop Gaussian homotopy settings.

    The smoothing level s = 1 - t starts at ``s0`` and shrinks every step:
    ``s <- gamma s`` (ratio) or ``s <- max(0, min(s - eta2 dGH/ds, gamma s))``
    (derivative).
    """

    gamma: float = 0.995
    eta1: float = 1e-3
    eta2: float = 1e-3
    s0: float = 1.0
    variant: str = "ratio"

    def __post_init__(self):
        if not 0.0 < self.gamma < 1.0:
            raise InvalidParam("gamma must lie in (0, 1)")
        if self.eta1 <= 0 or self.eta2 <= 0:
            raise InvalidParam("step sizes must be positive")
        if not 0.0 < self.s0 <= 1.0:
            raise InvalidParam("s0 must lie in (0, 1]")
        if self.variant not in ("ratio", "derivative"):
            raise InvalidParam(f"unknown SLGH variant {self.variant!r}")


# Central-difference step in t when no analytic t-derivative is available.
DT_STEP = 1e-4


def _dH_dt(H: HomotopyProblem, x, t):
    """Returns (derivative, units spent)."""
    if H.grad_t is not None:
        return float(H.grad_t(x, t)), 1
    lo, hi = max(t - DT_STEP, 0.0), min(t + DT_STEP, 1.0)
    return (float(H(x, hi)) - float(H(x, lo))) / (hi - lo), 2 * H.eval_cost


def slgh(H: HomotopyProblem, config: SlghConfig, x0, budget: Budget,
         grad_mode: GradMode | None = None, rng: RngStream | None = None,
         monitor: Callable | None = None, trace_every: int = 1) -> OptimizerResult:
    """Joint descent in x and in the smoothing level of a Gaussian homotopy."""
    mode = grad_mode or GradMode()
    prog = _Progress(budget, monitor=monitor, trace_every=trace_every)
    x = np.asarray(x0, dtype=float).copy()
    s = config.s0
    prog.log(x, 1.0 - s)
    gcost = mode.cost(H)
    if config.variant == "derivative":
        gcost += 1 if H.grad_t is not None else 2 * H.eval_cost
    while budget.affordable(gcost, reserve=1):
        t = 1.0 - s
        try:
            with np.errstate(over="ignore", invalid="ignore"):
                est = homotopy_grad(H, x, t, mode, rng)
        except SingularGradient:
            break
        budget.charge(est.evals_used)
        if config.variant == "derivative":
            # dGH/ds = -dGH/dt, evaluated at the pre-step iterate
            dt, spent = _dH_dt(H, x, t)
            budget.charge(spent)
            s_next = max(0.0, min(s + config.eta2 * dt, config.gamma * s))
        else:
            s_next = config.gamma * s
        x_new = x - config.eta1 * est.grad
        if not np.all(np.isfinite(x_new)):
            raise NonFiniteIterate(f"iterate diverged at t={t}", x.copy(), prog.trace)
        x, s = x_new, s_next
        prog.iteration += 1
        prog.log(x, 1.0 - s)
    return _finish(H, x, prog)
