"""Gradient oracles: central differences, ES and zeroth-order GH estimators.

The two stochastic estimators share one kernel,

    (1 / (sigma K)) sum_k (F(x + sigma u_k) - F(x)) u_k,   u_k ~ N(0, I),

applied either to H(., t) with a fixed sigma (ES) or to the original f with
sigma = beta (1 - t) (Gaussian homotopy). Plain one-sided differences, no
antithetic pairs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .homotopy import HomotopyProblem, InvalidParam
from .rng import RngStream

# Smallest smoothing radius used by the GH estimator; removes the 1/(1 - t)
# blow-up as t -> 1.
MIN_SIGMA = 1e-3


@dataclass(frozen=True)
class GradEstimate:
    grad: np.ndarray
    evals_used: int


def finite_diff_grad(f: Callable, x, h: float = 1e-5) -> GradEstimate:
    if h <= 0:
        raise InvalidParam("step must be positive")
    x = np.asarray(x, dtype=float)
    grad = np.empty(x.size)
    for i in range(x.size):
        e = np.zeros(x.size)
        e[i] = h
        grad[i] = (float(f(x + e)) - float(f(x - e))) / (2.0 * h)
    return GradEstimate(grad, 2 * x.size)


def _smoothed_difference(fun, x, sigma, k, rng):
    u = rng.normal((k, x.size))
    base = float(fun(x))
    acc = np.zeros(x.size)
    for row in u:
        acc += (float(fun(x + sigma * row)) - base) * row
    return acc / (sigma * k)


def es_grad(H, x, t: float, sigma: float, k: int, rng: RngStream) -> GradEstimate:
    """Evolution-strategies estimate of the x-gradient of H(., t)."""
    if sigma <= 0:
        raise InvalidParam("sigma must be positive")
    if k < 1:
        raise InvalidParam("need at least one sample")
    x = np.asarray(x, dtype=float)
    grad = _smoothed_difference(lambda z: H(z, t), x, sigma, k, rng)
    return GradEstimate(grad, k + 1)


def gh_zeroth_grad(f: Callable, x, t: float, beta: float, k: int, rng: RngStream) -> GradEstimate:
    """Zeroth-order estimate of the x-gradient of the Gaussian homotopy of f.

    Only f is queried. The radius ``beta (1 - t)`` is floored at 1e-3.
    """
    if beta <= 0:
        raise InvalidParam("beta must be positive")
    if k < 1:
        raise InvalidParam("need at least one sample")
    if not 0.0 <= t <= 1.0:
        raise InvalidParam(f"t must lie in [0, 1], got {t}")
    sigma = max(beta * (1.0 - t), MIN_SIGMA)
    x = np.asarray(x, dtype=float)
    return GradEstimate(_smoothed_difference(f, x, sigma, k, rng), k + 1)


@dataclass(frozen=True)
class GradMode:
    """How an optimizer obtains the x-gradient of H.

    ``analytic`` uses ``H.grad_x`` (one unit per query); ``es`` applies the
    ES estimator to H with radius ``sigma``; ``gh_zeroth`` applies the GH
    estimator to ``H.f`` with range ``beta`` (defaults to ``H.beta``).
    """

    kind: str = "analytic"
    sigma: float = 0.1
    beta: float | None = None
    k: int = 1

    def __post_init__(self):
        if self.kind not in ("analytic", "es", "gh_zeroth"):
            raise InvalidParam(f"unknown gradient mode {self.kind!r}")
        if self.k < 1:
            raise InvalidParam("k must be at least 1")

    def cost(self, H: HomotopyProblem) -> int:
        if self.kind == "analytic":
            return 1
        if self.kind == "es":
            return (self.k + 1) * H.eval_cost
        return self.k + 1

    def to_dict(self) -> dict:
        return {"kind": self.kind, "sigma": self.sigma, "beta": self.beta, "k": self.k}


def homotopy_grad(H: HomotopyProblem, x, t: float, mode: GradMode,
                  rng: RngStream | None = None) -> GradEstimate:
    """x-gradient of H at (x, t) by the route ``mode`` selects.

    ``evals_used`` is reported in budget units (see :meth:`GradMode.cost`).
    """
    if mode.kind == "analytic":
        if H.grad_x is None:
            raise InvalidParam(f"problem {H.name!r} has no analytic gradient")
        return GradEstimate(np.asarray(H.grad_x(np.asarray(x, dtype=float), t), dtype=float), 1)
    if rng is None:
        raise InvalidParam("stochastic gradient modes need an RngStream")
    if mode.kind == "es":
        est = es_grad(H, x, t, mode.sigma, mode.k, rng)
        return GradEstimate(est.grad, est.evals_used * H.eval_cost)
    beta = mode.beta if mode.beta is not None else H.beta
    if beta is None:
        raise InvalidParam("gh_zeroth mode needs beta (on the mode or the problem)")
    return gh_zeroth_grad(H.f, x, t, beta, mode.k, rng)
