"""Homotopy problems H(x, t), Gaussian smoothing and continuation schedules.

Convention used throughout the package: ``t = 0`` is the easy surrogate
g and ``t = 1`` is the original objective f. Gaussian homotopy uses the
smoothing radius ``beta * (1 - t)``.

Objectives are vectorized: they accept an array of shape ``(..., d)`` and
return an array of shape ``(...)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .rng import RngStream

Objective = Callable[[np.ndarray], np.ndarray]


class InvalidParam(ValueError):
    pass


@dataclass(frozen=True)
class HomotopyProblem:
    """A family of objectives indexed by the homotopy level t in [0, 1].

    ``fn(x, t)`` evaluates H; ``f`` is the original objective H(., 1).
    ``eval_cost`` is the number of budget units one call of ``fn`` costs
    (1 for closed forms, n for an n-sample Monte Carlo estimate).
    ``grad_x_batch(xs, ts)``, when given, returns the rows ``grad_x(xs[i], ts[i])``
    in one call; it is a speed path and is charged like the per-point one.
    """

    dim: int
    fn: Callable[[np.ndarray, float], float]
    f: Objective
    grad_x: Callable[[np.ndarray, float], np.ndarray] | None = None
    grad_t: Callable[[np.ndarray, float], float] | None = None
    g: Objective | None = None
    beta: float | None = None
    eval_cost: int = 1
    name: str = ""
    grad_x_batch: Callable[[np.ndarray, np.ndarray], np.ndarray] | None = None

    def __call__(self, x, t: float) -> float:
        return self.fn(np.asarray(x, dtype=float), float(t))


def gaussian_radius(t: float, beta: float) -> float:
    return beta * (1.0 - t)


def gh_monte_carlo(f: Objective, x, t: float, beta: float, n: int, rng: RngStream,
                   vectorized: bool = True) -> tuple[float, float]:
    """Monte Carlo estimate of E[f(x + beta (1 - t) u)], u ~ N(0, I).

    Returns ``(estimate, standard_error)``. At ``t = 1`` the smoothing
    radius is zero and f(x) is returned with zero error.
    """
    if not 0.0 <= t <= 1.0:
        raise InvalidParam(f"t must lie in [0, 1], got {t}")
    if beta <= 0:
        raise InvalidParam("beta must be positive")
    if n < 2:
        raise InvalidParam("need at least two samples for a standard error")
    x = np.asarray(x, dtype=float)
    sigma = gaussian_radius(t, beta)
    if sigma == 0.0:
        return float(f(x)), 0.0
    pts = x + sigma * rng.normal((n, x.size))
    if vectorized:
        vals = np.asarray(f(pts), dtype=float)
    else:
        vals = np.array([f(p) for p in pts], dtype=float)
    return float(vals.mean()), float(vals.std(ddof=1) / np.sqrt(n))


def gaussian_homotopy(f: Objective, dim: int, beta: float, n_samples: int,
                      rng: RngStream, vectorized: bool = True, name: str = "") -> HomotopyProblem:
    """GH(x, t) estimated by Monte Carlo, for objectives with no closed form.

    The problem owns ``rng``; every evaluation advances it. No analytic
    x-gradient is attached: use the zeroth-order GH estimator on ``f``.
    """
    if beta <= 0:
        raise InvalidParam("beta must be positive")

    def fn(x, t):
        return gh_monte_carlo(f, x, t, beta, n_samples, rng, vectorized)[0]

    return HomotopyProblem(dim=dim, fn=fn, f=f, g=lambda x: fn(x, 0.0), beta=beta,
                           eval_cost=n_samples, name=name or "gaussian")


def blend_homotopy(f: Objective, g: Objective, dim: int,
                   grad_f: Callable | None = None, grad_g: Callable | None = None,
                   name: str = "blend") -> HomotopyProblem:
    """H(x, t) = t f(x) + (1 - t) g(x); the endpoints are returned exactly."""

    def fn(x, t):
        if t == 0.0:
            return float(g(x))
        if t == 1.0:
            return float(f(x))
        return t * float(f(x)) + (1.0 - t) * float(g(x))

    grad_x = None
    if grad_f is not None and grad_g is not None:
        def grad_x(x, t):
            if t == 0.0:
                return np.asarray(grad_g(x), dtype=float)
            if t == 1.0:
                return np.asarray(grad_f(x), dtype=float)
            return t * np.asarray(grad_f(x)) + (1.0 - t) * np.asarray(grad_g(x))

    def grad_t(x, t):
        return float(f(x)) - float(g(x))

    return HomotopyProblem(dim=dim, fn=fn, f=f, g=g, grad_x=grad_x, grad_t=grad_t, name=name)


# Geometric schedules stop once the smoothing level s = 1 - t drops below this.
SMOOTHING_FLOOR = 1e-3


@dataclass(frozen=True)
class Schedule:
    levels: tuple[float, ...]

    def __post_init__(self):
        lv = self.levels
        if len(lv) < 1:
            raise InvalidParam("a schedule needs at least one level")
        if lv[-1] != 1.0:
            raise InvalidParam("the last level must be exactly 1")
        if lv[0] < 0.0:
            raise InvalidParam("levels must be non-negative")
        if any(b <= a for a, b in zip(lv, lv[1:])):
            raise InvalidParam("levels must be strictly increasing")

    def __len__(self) -> int:
        return len(self.levels)

    def __iter__(self):
        return iter(self.levels)


def make_schedule(kind: str, K: int | None = None, gamma: float | None = None,
                  t_start: float = 0.0) -> Schedule:
    """Build a continuation schedule.

    ``uniform``: K equal steps from 0 to 1 (K = 1 is the degenerate
    schedule ``[1.0]``, i.e. direct optimization of f).
    ``geometric``: smoothing level s = 1 - t starts at ``1 - t_start`` and is
    multiplied by ``gamma`` until it falls below 1e-3; t = 1 is appended.
    """
    if kind == "uniform":
        if K is None or K < 1:
            raise InvalidParam("uniform schedule needs K >= 1")
        if K == 1:
            return Schedule((1.0,))
        return Schedule(tuple(float(v) for v in np.linspace(0.0, 1.0, K + 1)))
    if kind == "geometric":
        if gamma is None or not 0.0 < gamma < 1.0:
            raise InvalidParam("geometric schedule needs 0 < gamma < 1")
        if not 0.0 <= t_start < 1.0:
            raise InvalidParam("t_start must lie in [0, 1)")
        s = 1.0 - t_start
        levels = []
        while s >= SMOOTHING_FLOOR:
            levels.append(1.0 - s)
            s *= gamma
        levels.append(1.0)
        return Schedule(tuple(levels))
    raise InvalidParam(f"unknown schedule kind {kind!r}")
