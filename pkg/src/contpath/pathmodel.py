"""Continuation path models.

A path model is a small fully connected network x_phi(t) taking the
scalar homotopy level t to a point in R^d. Training minimizes the Monte
Carlo average of H(x_phi(t_m), t_m) over levels t_m ~ U[0, 1], using the
chain rule

    grad_phi H(x_phi(t), t) = (d x_phi(t) / d phi)^T  grad_x H(x_phi(t), t)

so only a vector-Jacobian product through the network is needed; the
x-gradient may come from a closed form or a zeroth-order estimator.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .budget import Budget, unlimited
from .gradest import GradMode, homotopy_grad
from .homotopy import HomotopyProblem, InvalidParam
from .optimizers import NonFiniteIterate
from .rng import RngStream
from .trace import RunTrace

ACTIVATIONS = ("relu", "tanh")
BREAKPOINTS = ("uniform", "log", "none")
LOG_BREAKPOINT_MIN = 1e-4


class InvalidArchitecture(ValueError):
    pass


class NonFiniteLoss(ArithmeticError):
    pass


@dataclass
class MlpPathModel:
    """Weights are stored as ``(fan_out, fan_in)`` matrices, one per layer."""

    layer_dims: tuple[int, ...]
    weights: list[np.ndarray]
    biases: list[np.ndarray]
    activation: str = "relu"

    def __post_init__(self):
        _check_dims(self.layer_dims, self.activation)
        dims = self.layer_dims
        if len(self.weights) != len(dims) - 1 or len(self.biases) != len(dims) - 1:
            raise InvalidArchitecture("need one weight matrix and bias per layer")
        for i, (w, b) in enumerate(zip(self.weights, self.biases)):
            if w.shape != (dims[i + 1], dims[i]) or b.shape != (dims[i + 1],):
                raise InvalidArchitecture(f"layer {i} has shapes {w.shape}, {b.shape}")

    @property
    def out_dim(self) -> int:
        return self.layer_dims[-1]

    @property
    def n_params(self) -> int:
        return sum(w.size + b.size for w, b in zip(self.weights, self.biases))

    def params(self) -> np.ndarray:
        """Flat parameter vector: each layer's weights (row-major) then its bias."""
        return np.concatenate([a.ravel() for w, b in zip(self.weights, self.biases) for a in (w, b)])

    def set_params(self, flat: np.ndarray) -> None:
        flat = np.asarray(flat, dtype=float)
        if flat.size != self.n_params:
            raise ValueError(f"expected {self.n_params} parameters, got {flat.size}")
        pos = 0
        for w, b in zip(self.weights, self.biases):
            w[...] = flat[pos:pos + w.size].reshape(w.shape)
            pos += w.size
            b[...] = flat[pos:pos + b.size]
            pos += b.size

    def copy(self) -> "MlpPathModel":
        return MlpPathModel(tuple(self.layer_dims), [w.copy() for w in self.weights],
                            [b.copy() for b in self.biases], self.activation)

    def __call__(self, t):
        return model_forward(self, t)


def _check_dims(dims, activation):
    if len(dims) < 2 or dims[0] != 1 or any(int(d) < 1 for d in dims):
        raise InvalidArchitecture(f"layer_dims must look like [1, ..., out_dim], got {list(dims)}")
    if activation not in ACTIVATIONS:
        raise InvalidArchitecture(f"activation must be one of {ACTIVATIONS}")


def model_init(layer_dims, activation: str = "relu", seed: int = 0,
               out_bias=None, breakpoints: str = "none") -> MlpPathModel:
    """He-uniform weights, reproducible from ``seed``.

    Biases start at zero, which puts every first-layer kink (relu) or
    inflection (tanh) at t = 0 and leaves the untrained network linear on
    the unit interval. ``breakpoints`` can move them inside: unit j of the
    first hidden layer then gets bias ``-w_j tau_j`` with tau_j drawn from
    U(0, 1) (``"uniform"``) or log-uniformly on [1e-4, 1] (``"log"``, for
    paths that bend sharply near t = 0). Curved paths train much faster
    with spread breakpoints; straight ones are easier without.

    ``out_bias`` optionally sets the output-layer bias, which places the
    untrained path around a chosen starting point.
    """
    dims = tuple(int(d) for d in layer_dims)
    _check_dims(dims, activation)
    rng = RngStream(seed, stream_id=0x1417)
    weights, biases = [], []
    for fan_in, fan_out in zip(dims[:-1], dims[1:]):
        limit = np.sqrt(6.0 / fan_in)
        weights.append(limit * (2.0 * rng.uniform((fan_out, fan_in)) - 1.0))
        biases.append(np.zeros(fan_out))
    if breakpoints not in BREAKPOINTS:
        raise InvalidArchitecture(f"breakpoints must be one of {BREAKPOINTS}")
    if breakpoints != "none" and len(dims) > 2:
        u = rng.uniform(dims[1])
        tau = u if breakpoints == "uniform" else LOG_BREAKPOINT_MIN ** (1.0 - u)
        biases[0][...] = -weights[0][:, 0] * tau
    if out_bias is not None:
        biases[-1][...] = np.asarray(out_bias, dtype=float)
    return MlpPathModel(dims, weights, biases, activation)


def _act(name, z):
    return np.maximum(z, 0.0) if name == "relu" else np.tanh(z)


def _act_grad(name, z, a):
    return (z > 0.0).astype(float) if name == "relu" else 1.0 - a * a


def _forward_cache(m: MlpPathModel, ts: np.ndarray):
    a = ts.reshape(-1, 1)
    zs, acts = [], [a]
    last = len(m.weights) - 1
    for i, (w, b) in enumerate(zip(m.weights, m.biases)):
        z = a @ w.T + b
        a = z if i == last else _act(m.activation, z)
        zs.append(z)
        acts.append(a)
    return zs, acts


def model_forward(m: MlpPathModel, t):
    """x_phi(t). Scalar t gives a vector; an array of n levels gives (n, d)."""
    ts = np.asarray(t, dtype=float)
    _, acts = _forward_cache(m, ts.ravel())
    out = acts[-1]
    return out[0].copy() if ts.ndim == 0 else out


def model_backward(m: MlpPathModel, t, upstream) -> np.ndarray:
    """Flat gradient of sum_m upstream_m . x_phi(t_m) with respect to phi.

    ``t`` may be a scalar (``upstream`` of shape (d,)) or an array of n
    levels (``upstream`` of shape (n, d)); the per-level products are summed.
    """
    ts = np.asarray(t, dtype=float).ravel()
    up = np.asarray(upstream, dtype=float).reshape(ts.size, -1)
    if up.shape[1] != m.out_dim:
        raise ValueError(f"upstream has dimension {up.shape[1]}, model outputs {m.out_dim}")
    zs, acts = _forward_cache(m, ts)
    grads = []
    delta = up
    for i in range(len(m.weights) - 1, -1, -1):
        grads.append((delta.sum(axis=0), delta.T @ acts[i]))
        if i > 0:
            delta = (delta @ m.weights[i]) * _act_grad(m.activation, zs[i - 1], acts[i])
    grads.reverse()
    return np.concatenate([a.ravel() for db, dw in grads for a in (dw, db)])


def lipschitz_bound(m: MlpPathModel) -> float:
    """Upper bound on the Lipschitz constant of t -> x_phi(t).

    Both activations are 1-Lipschitz, so the product of the layers'
    spectral norms bounds the whole map.
    """
    return float(np.prod([np.linalg.norm(w, 2) for w in m.weights]))


# --- training ---------------------------------------------------------------

@dataclass(frozen=True)
class CplTrainConfig:
    """``iterations=None`` trains until the budget runs out."""

    iterations: int | None = 1000
    samples_per_iter: int = 8
    learning_rate: float = 1e-3
    grad_mode: GradMode = field(default_factory=GradMode)
    optimizer: str = "sgd"
    lr_schedule: str = "constant"
    adam_betas: tuple[float, float] = (0.9, 0.999)
    adam_eps: float = 1e-8
    trace_every: int = 10

    def __post_init__(self):
        if self.iterations is not None and self.iterations < 0:
            raise InvalidParam("iterations must be non-negative")
        if self.samples_per_iter < 1:
            raise InvalidParam("samples_per_iter must be at least 1")
        if self.learning_rate <= 0:
            raise InvalidParam("learning_rate must be positive")
        if self.optimizer not in ("sgd", "adam"):
            raise InvalidParam(f"unknown optimizer {self.optimizer!r}")
        if self.lr_schedule not in ("constant", "cosine"):
            raise InvalidParam(f"unknown learning-rate schedule {self.lr_schedule!r}")

    def to_dict(self) -> dict:
        return {"iterations": self.iterations, "samples_per_iter": self.samples_per_iter,
                "learning_rate": self.learning_rate, "grad_mode": self.grad_mode.to_dict(),
                "optimizer": self.optimizer, "lr_schedule": self.lr_schedule,
                "trace_every": self.trace_every}


class _Adam:
    def __init__(self, n, lr, betas, eps):
        self.m = np.zeros(n)
        self.v = np.zeros(n)
        self.lr, self.b1, self.b2, self.eps = lr, betas[0], betas[1], eps
        self.k = 0

    def step(self, g):
        self.k += 1
        self.m = self.b1 * self.m + (1 - self.b1) * g
        self.v = self.b2 * self.v + (1 - self.b2) * g * g
        mhat = self.m / (1 - self.b1**self.k)
        vhat = self.v / (1 - self.b2**self.k)
        return self.lr * mhat / (np.sqrt(vhat) + self.eps)


def cpl_train(m: MlpPathModel, H: HomotopyProblem, config: CplTrainConfig,
              budget: Budget | None = None, rng: RngStream | None = None,
              monitor: Callable | None = None) -> tuple[MlpPathModel, RunTrace]:
    """Train the path model in place; returns ``(m, trace)``.

    Each step draws M levels uniformly from [0, 1] and moves phi against
    the averaged chain-rule gradient. Training stops after
    ``config.iterations`` steps or when the budget cannot pay for another
    gradient query (the final step may then use fewer than M levels).
    The trace records ``monitor(x_phi(1))`` every ``trace_every`` steps.
    """
    if m.out_dim != H.dim:
        raise InvalidParam(f"model outputs {m.out_dim} values, problem has dim {H.dim}")
    budget = budget if budget is not None else unlimited()
    rng = rng if rng is not None else RngStream(0)
    mode = config.grad_mode
    cost = mode.cost(H)
    trace = RunTrace()
    lr = config.learning_rate
    adam = _Adam(m.n_params, lr, config.adam_betas, config.adam_eps) if config.optimizer == "adam" else None

    def log(i):
        value = float(monitor(model_forward(m, 1.0))) if monitor is not None else float("nan")
        trace.log(i, budget.used, 1.0, value)

    if config.iterations is not None:
        horizon = config.iterations
    else:
        horizon = -(-budget.remaining // (config.samples_per_iter * cost))

    log(0)
    i = 0
    while config.iterations is None or i < config.iterations:
        n = min(config.samples_per_iter, budget.remaining // cost)
        if n < 1:
            break
        ts = rng.uniform(n)
        xs = model_forward(m, ts)
        if not np.all(np.isfinite(xs)):
            raise NonFiniteLoss(f"path model produced non-finite points at step {i}")
        if mode.kind == "analytic" and H.grad_x_batch is not None:
            budget.charge(n)
            up = np.asarray(H.grad_x_batch(xs, ts), dtype=float)
        else:
            up = np.empty_like(xs)
            for j in range(n):
                est = homotopy_grad(H, xs[j], float(ts[j]), mode, rng)
                budget.charge(est.evals_used)
                up[j] = est.grad
        if not np.all(np.isfinite(up)):
            raise NonFiniteLoss(f"non-finite x-gradient at step {i}")
        g = model_backward(m, ts, up) / n
        if config.lr_schedule == "cosine":
            lr = 0.5 * config.learning_rate * (1.0 + np.cos(np.pi * min(i / max(horizon, 1), 1.0)))
        if adam is not None:
            adam.lr = lr
            delta = adam.step(g)
        else:
            delta = lr * g
        m.set_params(m.params() - delta)
        i += 1
        if i % config.trace_every == 0:
            log(i)
    if i % config.trace_every != 0:
        log(i)
    return m, trace


def local_search(m: MlpPathModel, H: HomotopyProblem, t_prime: float, eta: float,
                 budget: Budget, grad_mode: GradMode | None = None,
                 rng: RngStream | None = None) -> np.ndarray:
    """Gradient descent on H(., t') warm-started at x_phi(t').

    Two budget units pay for comparing H at the start and end points, and
    the better of the two is returned, so the result is never worse than
    the model's own prediction. With fewer than three units the prediction
    is returned untouched.
    """
    if not 0.0 <= t_prime <= 1.0:
        raise InvalidParam(f"t' must lie in [0, 1], got {t_prime}")
    mode = grad_mode or GradMode()
    x0 = model_forward(m, t_prime)
    cost = mode.cost(H)
    if budget.remaining < cost + 2:
        return x0
    budget.charge(1)
    h0 = float(H(x0, t_prime))
    x = x0.copy()
    while budget.affordable(cost, reserve=1):
        est = homotopy_grad(H, x, t_prime, mode, rng)
        budget.charge(est.evals_used)
        x_new = x - eta * est.grad
        if not np.all(np.isfinite(x_new)):
            raise NonFiniteIterate(f"local search diverged at t'={t_prime}", x.copy())
        x = x_new
    budget.charge(1)
    return x if float(H(x, t_prime)) <= h0 else x0


@dataclass
class PathCurve:
    grid: np.ndarray
    x_values: np.ndarray
    h_values: np.ndarray
    f_values: np.ndarray

    def __post_init__(self):
        n = len(self.grid)
        if not (len(self.x_values) == len(self.h_values) == len(self.f_values) == n):
            raise ValueError("curve columns must have equal lengths")

    def to_csv(self) -> str:
        d = self.x_values.shape[1]
        lines = [",".join(["t", "h_value", "f_value"] + [f"x_{j + 1}" for j in range(d)])]
        for t, h, f, x in zip(self.grid, self.h_values, self.f_values, self.x_values):
            lines.append(",".join(repr(float(v)) for v in (t, h, f, *x)))
        return "\n".join(lines) + "\n"


def path_sweep(m: MlpPathModel, H: HomotopyProblem, grid_size: int = 101) -> PathCurve:
    """Evaluate the frozen model on a uniform grid over [0, 1].

    ``h_values`` is the empirical value function H(x_phi(t), t) and
    ``f_values`` the original objective along the path. Not budgeted.
    """
    if grid_size < 2:
        raise InvalidParam("grid_size must be at least 2")
    grid = np.linspace(0.0, 1.0, grid_size)
    xs = model_forward(m, grid)
    h = np.array([float(H(x, float(t))) for x, t in zip(xs, grid)])
    f = np.array([float(H(x, 1.0)) for x in xs])
    return PathCurve(grid, xs, h, f)
