import numpy as np
import pytest

from contpath import Benchmark, RngStream, SingularGradient, UnsupportedProblem, benchmark_problem
from contpath.bench import (MINIMIZERS, dt_gh_closed, eval_benchmark, eval_gh_closed, grad_benchmark,
                            grad_gh_closed)
from contpath.gradest import finite_diff_grad

ALL = list(Benchmark)
CLOSED = [Benchmark.ROSENBROCK, Benchmark.HIMMELBLAU]


def random_points(n=100, seed=0):
    return -5.0 + 10.0 * RngStream(seed, 77).uniform((n, 2))


@pytest.mark.parametrize("bench,p,value", [
    ("ackley", (0, 0), 0.0),
    ("rosenbrock", (1, 1), 0.0),
    ("rosenbrock", (0, 0), 1.0),
    ("himmelblau", (3, 2), 0.0),
    ("himmelblau", (0, 0), 170.0),
    ("ackley", (1, 1), 20.0 - 20.0 * np.exp(-0.2)),
])
def test_values(bench, p, value):
    assert eval_benchmark(bench, p) == pytest.approx(value, abs=1e-12)


def test_ackley_one_one_digits():
    assert eval_benchmark("ackley", (1, 1)) == pytest.approx(3.625385, abs=1e-6)


@pytest.mark.parametrize("bench", ALL)
def test_minimizers_are_zero(bench):
    for p in MINIMIZERS[bench]:
        assert abs(eval_benchmark(bench, p)) < 1e-12


@pytest.mark.parametrize("bench,p,grad", [
    ("rosenbrock", (1, 1), (0, 0)),
    ("himmelblau", (3, 2), (0, 0)),
    ("rosenbrock", (0, 0), (-2, 0)),
])
def test_gradient_examples(bench, p, grad):
    assert np.allclose(grad_benchmark(bench, p), grad, atol=1e-12)


@pytest.mark.parametrize("bench", ALL)
def test_gradients_match_finite_differences(bench):
    for p in random_points():
        fd = finite_diff_grad(lambda z: eval_benchmark(bench, z), p, h=1e-5).grad
        g = grad_benchmark(bench, p)
        assert np.linalg.norm(g - fd) <= 1e-6 * max(np.linalg.norm(g), 1.0)


def test_ackley_origin_is_singular():
    with pytest.raises(SingularGradient):
        grad_benchmark("ackley", (0.0, 0.0))


def test_non_finite_point_rejected():
    with pytest.raises(ValueError):
        eval_benchmark("rosenbrock", (np.nan, 0.0))


def test_unknown_benchmark():
    with pytest.raises(UnsupportedProblem):
        Benchmark.parse("sphere")


def test_vectorized_matches_pointwise():
    pts = random_points(20)
    for bench in ALL:
        f = benchmark_problem(bench, rng=RngStream(0)).f
        assert np.allclose(f(pts), [eval_benchmark(bench, p) for p in pts], rtol=0, atol=0)


@pytest.mark.parametrize("bench", CLOSED)
def test_gh_closed_is_exact_at_t1(bench):
    for p in random_points():
        assert abs(eval_gh_closed(bench, p, 1.0, 1.5) - eval_benchmark(bench, p)) <= 1e-12


def test_gh_closed_examples():
    assert eval_gh_closed("himmelblau", (0, 0), 0.0, 2.0) == pytest.approx(130.0, abs=1e-12)
    assert eval_gh_closed("rosenbrock", (0, 0), 0.5, 1.5) == pytest.approx(152.734375, abs=1e-12)
    assert np.allclose(grad_gh_closed("rosenbrock", (1, 1), 1.0, 1.5), (0, 0))
    assert np.allclose(grad_gh_closed("himmelblau", (0, 0), 0.0, 2.0), (-6, -14))
    assert np.allclose(grad_gh_closed("rosenbrock", (0, 0), 0.0, 1.5), (-2, -450))


@pytest.mark.parametrize("bench", CLOSED)
@pytest.mark.parametrize("t", [0.0, 0.3, 0.8])
def test_gh_closed_gradients_match_finite_differences(bench, t):
    for p in random_points(30, seed=3):
        fd = finite_diff_grad(lambda z: eval_gh_closed(bench, z, t, 1.5), p, h=1e-5).grad
        g = grad_gh_closed(bench, p, t, 1.5)
        assert np.linalg.norm(g - fd) <= 1e-6 * max(np.linalg.norm(g), 1.0)
        h = 1e-6
        lo, hi = max(t - h, 0.0), t + h
        dt = (eval_gh_closed(bench, p, hi, 1.5) - eval_gh_closed(bench, p, lo, 1.5)) / (hi - lo)
        assert dt_gh_closed(bench, p, t, 1.5) == pytest.approx(dt, rel=1e-5, abs=1e-3)


def test_ackley_has_no_closed_form():
    with pytest.raises(UnsupportedProblem):
        eval_gh_closed("ackley", (1, 1), 0.5, 1.0)


def test_gh_closed_rejects_bad_level():
    with pytest.raises(ValueError):
        eval_gh_closed("rosenbrock", (0, 0), 1.5, 1.0)
    with pytest.raises(ValueError):
        eval_gh_closed("rosenbrock", (0, 0), 0.5, 0.0)


def test_problem_boundaries():
    H = benchmark_problem("himmelblau")
    for p in random_points(10):
        assert H(p, 1.0) == eval_benchmark("himmelblau", p)
        assert H(p, 0.0) == H.g(p)


def test_ackley_problem_gradient_only_at_t1():
    H = benchmark_problem("ackley", rng=RngStream(0))
    assert np.allclose(H.grad_x(np.array([1.0, 0.5]), 1.0), grad_benchmark("ackley", (1.0, 0.5)))
    with pytest.raises(UnsupportedProblem):
        H.grad_x(np.array([1.0, 0.5]), 0.5)
    assert H.eval_cost == 64
