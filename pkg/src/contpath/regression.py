"""Noisy nonlinear regression as a homotopy.

For a feature map psi and noisy responses y_hat the family

    H(alpha, t) = t ||y_hat - psi alpha||^2 + (1 - t) ||alpha||

runs from the trivial problem min ||alpha|| (t = 0, solution 0) to plain
least squares (t = 1). The penalty is the unsquared Euclidean norm, so
H has a kink at alpha = 0; for every fixed t it is convex, which gives an
exact reference solution by proximal gradient descent.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .homotopy import HomotopyProblem, InvalidParam
from .pathmodel import CplTrainConfig, MlpPathModel, PathCurve, cpl_train, model_forward, model_init
from .rng import RngStream


class DomainError(ValueError):
    pass


class RegressionId(str, enum.Enum):
    F1 = "F1"
    F2 = "F2"
    F3 = "F3"
    F4 = "F4"

    @classmethod
    def parse(cls, name) -> "RegressionId":
        if isinstance(name, cls):
            return name
        try:
            return cls(str(name).upper())
        except ValueError:
            raise InvalidParam(f"unknown regression problem {name!r}") from None


TRUE_ALPHA = {
    RegressionId.F1: (0.5, 0.3, 2.0),
    RegressionId.F2: (1.0, 0.2, 0.5),
    RegressionId.F3: (1.0, -0.2, 0.5),
    RegressionId.F4: (2.0, 3.0, 4.0),
}


def features(problem, x) -> np.ndarray:
    """Feature matrix psi(x) of shape (n, 3)."""
    pid = RegressionId.parse(problem)
    x = np.asarray(x, dtype=float)
    if pid is RegressionId.F1:
        cols = (np.sin(x), np.cos(2 * x), np.cos(3 * x))
    elif pid is RegressionId.F2:
        cols = (np.cos(x), np.sin(2 * x), np.sin(3 * x))
    elif pid is RegressionId.F3:
        cols = (np.exp(0.25 * x), np.cos(x), np.sin(4 * x))
    else:
        if np.any(x == 0.0):
            raise DomainError("F4 uses log(0.25 |x|), undefined at x = 0")
        cols = (np.log(0.25 * np.abs(x)), np.sin(6 * x), np.cos(0.5 * x))
    return np.stack(cols, axis=-1)


@dataclass(frozen=True)
class RegressionProblem:
    pid: RegressionId
    x: np.ndarray
    features: np.ndarray
    responses: np.ndarray
    clean_responses: np.ndarray
    truth_alpha: np.ndarray
    noise_scale: float

    @property
    def n(self) -> int:
        return self.features.shape[0]

    @property
    def d(self) -> int:
        return self.features.shape[1]


def make_problem(problem, n: int = 200, noise_scale: float = 0.1, x_low: float = -5.0,
                 x_high: float = 5.0, seed: int = 0) -> RegressionProblem:
    """Sample x ~ U[x_low, x_high] and responses psi(x) alpha* + noise_scale * eps."""
    pid = RegressionId.parse(problem)
    if n < 3:
        raise InvalidParam("need at least as many points as coefficients (3)")
    if not x_low < x_high:
        raise InvalidParam("x_low must be below x_high")
    rng = RngStream(seed, stream_id=0x5E6 + list(RegressionId).index(pid))
    x = x_low + (x_high - x_low) * rng.uniform(n)
    if pid is RegressionId.F4:
        while np.any(x == 0.0):
            bad = x == 0.0
            x[bad] = x_low + (x_high - x_low) * rng.uniform(int(bad.sum()))
    psi = features(pid, x)
    alpha = np.array(TRUE_ALPHA[pid])
    clean = psi @ alpha
    noisy = clean + noise_scale * rng.normal(n)
    return RegressionProblem(pid, x, psi, noisy, clean, alpha, float(noise_scale))


def regression_objective(p: RegressionProblem, alpha, t: float) -> float:
    if not 0.0 <= t <= 1.0:
        raise InvalidParam(f"t must lie in [0, 1], got {t}")
    alpha = np.asarray(alpha, dtype=float)
    r = p.responses - p.features @ alpha
    return float(t * (r @ r) + (1.0 - t) * np.linalg.norm(alpha))


def _objective_grad(p: RegressionProblem, alpha, t):
    # the minimum-norm subgradient of ||alpha|| at 0 is 0
    g = 2.0 * t * (p.features.T @ (p.features @ alpha - p.responses))
    norm = np.linalg.norm(alpha)
    if norm > 0.0:
        g = g + (1.0 - t) * alpha / norm
    return g


def _batch_grad(p: RegressionProblem, alphas, ts):
    ts = np.asarray(ts, dtype=float)[:, None]
    g = 2.0 * ts * ((alphas @ p.features.T - p.responses) @ p.features)
    norms = np.linalg.norm(alphas, axis=1, keepdims=True)
    safe = np.where(norms > 0.0, norms, 1.0)
    return g + np.where(norms > 0.0, (1.0 - ts) * alphas / safe, 0.0)


def regression_homotopy(p: RegressionProblem) -> HomotopyProblem:
    def f(alpha):
        alpha = np.asarray(alpha, dtype=float)
        r = p.responses - alpha @ p.features.T
        return np.sum(r * r, axis=-1)

    return HomotopyProblem(
        dim=p.d,
        fn=lambda a, t: regression_objective(p, a, t),
        f=f,
        g=lambda a: np.linalg.norm(np.asarray(a, dtype=float), axis=-1),
        grad_x=lambda a, t: _objective_grad(p, np.asarray(a, dtype=float), t),
        grad_x_batch=lambda a, t: _batch_grad(p, np.asarray(a, dtype=float), t),
        name=p.pid.value,
    )


def clean_loss(p: RegressionProblem, alpha) -> float:
    r = p.clean_responses - p.features @ np.asarray(alpha, dtype=float)
    return float(r @ r)


def noisy_loss(p: RegressionProblem, alpha) -> float:
    r = p.responses - p.features @ np.asarray(alpha, dtype=float)
    return float(r @ r)


def _stationarity(p, alpha, t):
    smooth = 2.0 * t * (p.features.T @ (p.features @ alpha - p.responses))
    norm = np.linalg.norm(alpha)
    if norm == 0.0:
        return max(0.0, float(np.linalg.norm(smooth)) - (1.0 - t))
    return float(np.linalg.norm(smooth + (1.0 - t) * alpha / norm))


def oracle_solve(p: RegressionProblem, t: float, tol: float = 1e-9,
                 max_iter: int = 200_000) -> np.ndarray:
    """Minimizer of H(., t) by proximal gradient descent.

    The smooth part is the data term; the norm penalty enters through its
    proximal map (block soft-thresholding), so the kink at 0 needs no
    special casing. Runs from 0 and from the least-squares fit and keeps
    the better end point. Stops when the minimum-norm subgradient is below
    ``tol``.
    """
    if not 0.0 <= t <= 1.0:
        raise InvalidParam(f"t must lie in [0, 1], got {t}")
    if tol <= 0:
        raise InvalidParam("tol must be positive")
    if t == 0.0:
        return np.zeros(p.d)
    G = p.features.T @ p.features
    c = p.features.T @ p.responses
    step = 1.0 / (2.0 * t * np.linalg.eigvalsh(G)[-1])
    lam = 1.0 - t
    ls = np.linalg.lstsq(p.features, p.responses, rcond=None)[0]
    best, best_val = None, np.inf
    for alpha in (np.zeros(p.d), ls):
        for _ in range(max_iter):
            if _stationarity(p, alpha, t) <= tol:
                break
            v = alpha - step * 2.0 * t * (G @ alpha - c)
            norm = np.linalg.norm(v)
            shrink = max(0.0, 1.0 - step * lam / norm) if norm > 0.0 else 0.0
            alpha = shrink * v
        val = regression_objective(p, alpha, t)
        if val < best_val:
            best, best_val = alpha, val
    return best


def oracle_curve(p: RegressionProblem, grid_size: int = 101, tol: float = 1e-9) -> PathCurve:
    grid = np.linspace(0.0, 1.0, grid_size)
    alphas = np.array([oracle_solve(p, float(t), tol) for t in grid])
    h = np.array([regression_objective(p, a, float(t)) for a, t in zip(alphas, grid)])
    return PathCurve(grid, alphas, h, np.array([clean_loss(p, a) for a in alphas]))


DEFAULT_TRAIN = CplTrainConfig(iterations=8000, samples_per_iter=64, learning_rate=1e-3,
                               optimizer="adam", lr_schedule="cosine", trace_every=100)


def cpl_regression(p: RegressionProblem, model_dims=(1, 128, 128, 3),
                   config: CplTrainConfig = DEFAULT_TRAIN, seed: int = 0,
                   grid_size: int = 101, breakpoints: str = "log") -> tuple[MlpPathModel, PathCurve]:
    """Learn alpha(t) for the whole family and sweep it.

    The returned curve's ``h_values`` are H(alpha(t), t) and its
    ``f_values`` are the clean-data prediction loss ||y - psi alpha(t)||^2.
    """
    dims = tuple(model_dims)
    if dims[-1] != p.d:
        raise InvalidParam(f"model must output {p.d} coefficients")
    m = model_init(dims, seed=seed, breakpoints=breakpoints)
    H = regression_homotopy(p)
    cpl_train(m, H, config, rng=RngStream(seed, stream_id=0x5EED))
    return m, regression_curve(p, m, grid_size)


def regression_curve(p: RegressionProblem, m: MlpPathModel, grid_size: int = 101) -> PathCurve:
    grid = np.linspace(0.0, 1.0, grid_size)
    alphas = model_forward(m, grid)
    h = np.array([regression_objective(p, a, float(t)) for a, t in zip(alphas, grid)])
    return PathCurve(grid, alphas, h, np.array([clean_loss(p, a) for a in alphas]))


def curve_csv(p: RegressionProblem, curve: PathCurve) -> str:
    """CSV with columns t, h_value, clean_loss, alpha_1..alpha_d, noisy_loss."""
    d = curve.x_values.shape[1]
    head = ["t", "h_value", "clean_loss"] + [f"alpha_{j + 1}" for j in range(d)] + ["noisy_loss"]
    lines = [",".join(head)]
    for t, h, c, a in zip(curve.grid, curve.h_values, curve.f_values, curve.x_values):
        row = [t, h, c, *a, noisy_loss(p, a)]
        lines.append(",".join(repr(float(v)) for v in row))
    return "\n".join(lines) + "\n"
