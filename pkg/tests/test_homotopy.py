import numpy as np
import pytest

from contpath import (InvalidParam, RngStream, Schedule, blend_homotopy, gaussian_homotopy,
                      gh_monte_carlo, make_schedule)
from contpath.homotopy import SMOOTHING_FLOOR


def square(x):
    return np.asarray(x, dtype=float)[..., 0] ** 2


def test_constant_function_has_no_spread():
    est, se = gh_monte_carlo(lambda x: np.full(np.shape(x)[:-1], 7.0), np.zeros(3), 0.2, 1.5, 50, RngStream(0))
    assert (est, se) == (7.0, 0.0)


def test_square_at_origin_estimates_variance():
    est, se = gh_monte_carlo(square, np.zeros(1), 0.0, 1.0, 10**6, RngStream(1))
    assert abs(est - 1.0) <= 3 * se


def test_t1_is_exact():
    rng = RngStream(2)
    assert gh_monte_carlo(square, np.array([3.0]), 1.0, 2.0, 10, rng) == (9.0, 0.0)
    assert rng.counter == 0


def test_same_seed_bit_identical():
    a = gh_monte_carlo(square, np.array([0.3]), 0.4, 1.0, 1000, RngStream(4, 1))
    b = gh_monte_carlo(square, np.array([0.3]), 0.4, 1.0, 1000, RngStream(4, 1))
    assert a == b


def test_loop_and_vectorized_agree():
    a = gh_monte_carlo(square, np.array([0.3]), 0.4, 1.0, 500, RngStream(4, 1))
    b = gh_monte_carlo(lambda p: float(p[0] ** 2), np.array([0.3]), 0.4, 1.0, 500, RngStream(4, 1),
                       vectorized=False)
    assert a[0] == pytest.approx(b[0], rel=1e-14)


def test_stderr_halves_with_four_times_samples():
    ratios = []
    for seed in range(5):
        _, se1 = gh_monte_carlo(square, np.array([0.5]), 0.0, 1.0, 20_000, RngStream(seed, 1))
        _, se4 = gh_monte_carlo(square, np.array([0.5]), 0.0, 1.0, 80_000, RngStream(seed, 2))
        ratios.append(se1 / se4)
    assert np.mean(ratios) == pytest.approx(2.0, rel=0.2)


@pytest.mark.parametrize("kwargs", [dict(t=-0.1), dict(t=1.1), dict(beta=0.0), dict(n=1)])
def test_monte_carlo_rejects_bad_arguments(kwargs):
    args = dict(t=0.5, beta=1.0, n=10) | kwargs
    with pytest.raises(InvalidParam):
        gh_monte_carlo(square, np.zeros(1), args["t"], args["beta"], args["n"], RngStream(0))


def test_gaussian_homotopy_boundary_and_cost():
    H = gaussian_homotopy(square, 1, 1.0, 32, RngStream(0))
    assert H.eval_cost == 32
    x = np.array([1.7])
    assert H(x, 1.0) == square(x)


def test_blend_boundaries_and_example():
    f, g = square, lambda x: abs(np.asarray(x, dtype=float)[..., 0])
    H = blend_homotopy(f, g, 1, grad_f=lambda x: 2 * x, grad_g=lambda x: np.sign(x))
    rng = RngStream(9)
    for x in rng.normal((100, 1)) * 3:
        assert H(x, 0.0) == g(x)
        assert H(x, 1.0) == f(x)
    assert H(np.array([2.0]), 0.5) == 3.0
    assert np.allclose(H.grad_x(np.array([2.0]), 0.5), 0.5 * 4 + 0.5 * 1)
    assert H.grad_t(np.array([2.0]), 0.3) == 4.0 - 2.0


def test_uniform_schedules():
    assert list(make_schedule("uniform", K=1)) == [1.0]
    assert list(make_schedule("uniform", K=4)) == [0.0, 0.25, 0.5, 0.75, 1.0]


def test_geometric_schedule():
    levels = list(make_schedule("geometric", gamma=0.5))
    assert levels[:4] == [0.0, 0.5, 0.75, 0.875]
    assert levels[-1] == 1.0
    # last smoothed level has s >= 1e-3; halving it once more would cross the floor
    s_last = 1.0 - levels[-2]
    assert s_last >= SMOOTHING_FLOOR and s_last * 0.5 < SMOOTHING_FLOOR
    assert all(b > a for a, b in zip(levels, levels[1:]))


def test_geometric_from_later_start():
    levels = list(make_schedule("geometric", gamma=0.5, t_start=0.5))
    assert levels[:2] == [0.5, 0.75]


@pytest.mark.parametrize("kwargs", [
    dict(kind="uniform", K=0), dict(kind="geometric", gamma=1.0), dict(kind="geometric", gamma=0.0),
    dict(kind="geometric", gamma=0.5, t_start=1.0), dict(kind="cubic"),
])
def test_schedule_validation(kwargs):
    with pytest.raises(InvalidParam):
        make_schedule(**kwargs)


@pytest.mark.parametrize("levels", [(), (0.0, 0.5), (0.5, 0.5, 1.0), (-0.1, 1.0)])
def test_schedule_invariants(levels):
    with pytest.raises(InvalidParam):
        Schedule(levels)
