"""Two-dimensional test objectives and their Gaussian homotopies.

All functions take points of shape ``(..., 2)`` and are vectorized over the
leading axes. Closed-form Gaussian homotopies exist for the polynomial
problems (Rosenbrock, Himmelblau); Ackley has none and is smoothed by
Monte Carlo instead.

Rosenbrock's smoothed constant term is ``300 s^4 + 101 s^2 + 1`` with
``s = beta (1 - t)``; the quartic power follows from E[u^4] = 3 for a
standard normal u, and the Monte Carlo tests pin it down.
"""

from __future__ import annotations

import dataclasses
import enum

import numpy as np

from .homotopy import HomotopyProblem, gaussian_homotopy
from .rng import RngStream


class SingularGradient(ArithmeticError):
    """Raised where the objective is not differentiable (Ackley's origin)."""


class UnsupportedProblem(ValueError):
    pass


class Benchmark(str, enum.Enum):
    ACKLEY = "ackley"
    ROSENBROCK = "rosenbrock"
    HIMMELBLAU = "himmelblau"

    @classmethod
    def parse(cls, name) -> "Benchmark":
        if isinstance(name, cls):
            return name
        try:
            return cls(str(name).lower())
        except ValueError:
            raise UnsupportedProblem(f"unknown benchmark {name!r}") from None


# Known global minimizers; every one has value 0.
MINIMIZERS = {
    Benchmark.ACKLEY: [(0.0, 0.0)],
    Benchmark.ROSENBROCK: [(1.0, 1.0)],
    Benchmark.HIMMELBLAU: [
        (3.0, 2.0),
        (-2.805118086952745, 3.131312518250573),
        (-3.779310253377747, -3.2831859912861696),
        (3.5844283403304917, -1.8481265269644036),
    ],
}

# Default starting points (shared by every algorithm for a given problem).
DEFAULT_X0 = {
    Benchmark.ACKLEY: (2.0, 2.0),
    Benchmark.ROSENBROCK: (-1.0, 1.0),
    Benchmark.HIMMELBLAU: (0.0, 0.0),
}

# Total function evaluations and smoothing ranges of the reference setup.
DEFAULT_BUDGET = {Benchmark.ACKLEY: 1000, Benchmark.ROSENBROCK: 20000, Benchmark.HIMMELBLAU: 2000}
DEFAULT_BETA = {Benchmark.ACKLEY: 1.0, Benchmark.ROSENBROCK: 1.5, Benchmark.HIMMELBLAU: 2.0}


def point2(p) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.shape[-1:] != (2,):
        raise ValueError(f"expected points of shape (..., 2), got {p.shape}")
    if not np.all(np.isfinite(p)):
        raise ValueError("point has non-finite coordinates")
    return p


def ackley(p):
    p = np.asarray(p, dtype=float)
    x, y = p[..., 0], p[..., 1]
    r = np.sqrt(0.5 * (x * x + y * y))
    c = 0.5 * (np.cos(2 * np.pi * x) + np.cos(2 * np.pi * y))
    return -20.0 * np.exp(-0.2 * r) - np.exp(c) + np.e + 20.0


def rosenbrock(p):
    p = np.asarray(p, dtype=float)
    x, y = p[..., 0], p[..., 1]
    return 100.0 * (y - x * x) ** 2 + (1.0 - x) ** 2


def himmelblau(p):
    p = np.asarray(p, dtype=float)
    x, y = p[..., 0], p[..., 1]
    return (x * x + y - 11.0) ** 2 + (x + y * y - 7.0) ** 2


def ackley_grad(p):
    x, y = np.float64(p[0]), np.float64(p[1])
    r = np.sqrt(0.5 * (x * x + y * y))
    if r == 0.0:
        raise SingularGradient("Ackley is not differentiable at the origin")
    radial = 2.0 * np.exp(-0.2 * r) / r
    wave = np.pi * np.exp(0.5 * (np.cos(2 * np.pi * x) + np.cos(2 * np.pi * y)))
    return np.array([radial * x + wave * np.sin(2 * np.pi * x),
                     radial * y + wave * np.sin(2 * np.pi * y)])


def rosenbrock_grad(p):
    x, y = np.float64(p[0]), np.float64(p[1])
    return np.array([-400.0 * x * (y - x * x) - 2.0 * (1.0 - x), 200.0 * (y - x * x)])


def himmelblau_grad(p):
    x, y = np.float64(p[0]), np.float64(p[1])
    a = x * x + y - 11.0
    b = x + y * y - 7.0
    return np.array([4.0 * x * a + 2.0 * b, 2.0 * a + 4.0 * y * b])


_FUNCS = {Benchmark.ACKLEY: ackley, Benchmark.ROSENBROCK: rosenbrock, Benchmark.HIMMELBLAU: himmelblau}
_GRADS = {Benchmark.ACKLEY: ackley_grad, Benchmark.ROSENBROCK: rosenbrock_grad,
          Benchmark.HIMMELBLAU: himmelblau_grad}


def objective(bench):
    return _FUNCS[Benchmark.parse(bench)]


def eval_benchmark(bench, p) -> float:
    return float(_FUNCS[Benchmark.parse(bench)](point2(p)))


def grad_benchmark(bench, p) -> np.ndarray:
    p = point2(p)
    if p.ndim != 1:
        raise ValueError("gradients are computed one point at a time")
    return _GRADS[Benchmark.parse(bench)](p)


# --- closed-form Gaussian homotopies -------------------------------------

def _closed_form(bench) -> Benchmark:
    bench = Benchmark.parse(bench)
    if bench is Benchmark.ACKLEY:
        raise UnsupportedProblem("Ackley has no closed-form Gaussian homotopy; use Monte Carlo")
    return bench


def _check_level(t, beta):
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"t must lie in [0, 1], got {t}")
    if beta <= 0:
        raise ValueError("beta must be positive")


def _gh_value(bench, x, y, v):
    # v is the smoothing variance beta^2 (1 - t)^2
    if bench is Benchmark.ROSENBROCK:
        return (100.0 * x**4 + (-200.0 * y + 600.0 * v + 1.0) * x**2 - 2.0 * x
                + 100.0 * y**2 - 200.0 * v * y + 300.0 * v * v + 101.0 * v + 1.0)
    return (x**4 + (2.0 * y + 6.0 * v - 21.0) * x**2 + (2.0 * y**2 + 2.0 * v - 14.0) * x
            + y**4 + (6.0 * v - 13.0) * y**2 + (2.0 * v - 22.0) * y
            + 6.0 * v * v - 34.0 * v + 170.0)


def eval_gh_closed(bench, p, t: float, beta: float):
    bench = _closed_form(bench)
    _check_level(t, beta)
    p = point2(p)
    if t == 1.0:
        return _FUNCS[bench](p) if p.ndim > 1 else float(_FUNCS[bench](p))
    v = (beta * (1.0 - t)) ** 2
    out = _gh_value(bench, p[..., 0], p[..., 1], v)
    return out if p.ndim > 1 else float(out)


def grad_gh_closed(bench, p, t: float, beta: float) -> np.ndarray:
    bench = _closed_form(bench)
    _check_level(t, beta)
    p = point2(p)
    x, y = np.float64(p[0]), np.float64(p[1])
    v = (beta * (1.0 - t)) ** 2
    if bench is Benchmark.ROSENBROCK:
        return np.array([400.0 * x**3 + 2.0 * (-200.0 * y + 600.0 * v + 1.0) * x - 2.0,
                         -200.0 * x * x + 200.0 * y - 200.0 * v])
    return np.array([
        4.0 * x**3 + 2.0 * (2.0 * y + 6.0 * v - 21.0) * x + 2.0 * y * y + 2.0 * v - 14.0,
        2.0 * x * x + 4.0 * x * y + 4.0 * y**3 + 2.0 * (6.0 * v - 13.0) * y + 2.0 * v - 22.0,
    ])


def dt_gh_closed(bench, p, t: float, beta: float) -> float:
    """Partial derivative of the closed-form GH with respect to t."""
    bench = _closed_form(bench)
    _check_level(t, beta)
    x, y = (np.float64(c) for c in point2(p))
    v = (beta * (1.0 - t)) ** 2
    if bench is Benchmark.ROSENBROCK:
        dv = 600.0 * x * x - 200.0 * y + 600.0 * v + 101.0
    else:
        dv = 6.0 * x * x + 2.0 * x + 6.0 * y * y + 2.0 * y + 12.0 * v - 34.0
    return float(dv * (-2.0 * beta * beta * (1.0 - t)))


def _ackley_level_grad(x, t):
    # only the unsmoothed level has a closed-form gradient
    if t != 1.0:
        raise UnsupportedProblem("Ackley's Gaussian homotopy has no closed-form gradient for t < 1")
    return ackley_grad(x)


def benchmark_problem(bench, beta: float | None = None, rng: RngStream | None = None,
                      mc_samples: int = 64) -> HomotopyProblem:
    """Gaussian homotopy of a benchmark as a :class:`HomotopyProblem`.

    Rosenbrock and Himmelblau get closed forms with analytic x- and
    t-derivatives. Ackley is smoothed by ``mc_samples``-point Monte Carlo
    drawn from ``rng``; its analytic x-gradient exists only at t = 1.
    """
    bench = Benchmark.parse(bench)
    beta = DEFAULT_BETA[bench] if beta is None else float(beta)
    f = _FUNCS[bench]
    if bench is Benchmark.ACKLEY:
        H = gaussian_homotopy(f, 2, beta, mc_samples, rng or RngStream(0, 0xAC),
                              name=bench.value)
        return dataclasses.replace(H, grad_x=_ackley_level_grad)
    return HomotopyProblem(
        dim=2,
        fn=lambda x, t: eval_gh_closed(bench, x, t, beta),
        f=f,
        grad_x=lambda x, t: grad_gh_closed(bench, x, t, beta),
        grad_t=lambda x, t: dt_gh_closed(bench, x, t, beta),
        g=lambda x: eval_gh_closed(bench, x, 0.0, beta),
        beta=beta,
        name=bench.value,
    )
