import dataclasses

import numpy as np
import pytest

from contpath import HomotopyProblem


class Counter:
    """Counts every oracle query a HomotopyProblem receives."""

    def __init__(self, H: HomotopyProblem):
        self.fn = self.f = self.grad_x = self.grad_t = 0
        self.inner = H

        def fn(x, t):
            self.fn += 1
            return H.fn(x, t)

        def f(x):
            self.f += 1
            return H.f(x)

        def gx(x, t):
            self.grad_x += 1
            return H.grad_x(x, t)

        def gt(x, t):
            self.grad_t += 1
            return H.grad_t(x, t)

        self.problem = dataclasses.replace(
            H, fn=fn, f=f,
            grad_x=gx if H.grad_x is not None else None,
            grad_t=gt if H.grad_t is not None else None,
        )

    @property
    def units(self) -> int:
        return self.fn * self.inner.eval_cost + self.f + self.grad_x + self.grad_t


@pytest.fixture
def counting():
    return Counter


def shifted_quadratic() -> HomotopyProblem:
    """H(x, t) = (x - t)^2 in one dimension; the exact path is x*(t) = t."""
    return HomotopyProblem(
        dim=1,
        fn=lambda x, t: float((x[0] - t) ** 2),
        f=lambda x: (np.asarray(x, dtype=float)[..., 0] - 1.0) ** 2,
        grad_x=lambda x, t: np.array([2.0 * (x[0] - t)]),
        grad_t=lambda x, t: float(-2.0 * (x[0] - t)),
        g=lambda x: np.asarray(x, dtype=float)[..., 0] ** 2,
        name="shifted-quadratic",
    )


@pytest.fixture
def quad_path():
    return shifted_quadratic()
