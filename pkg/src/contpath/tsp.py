"""Cost-matrix smoothing for the travelling salesman problem.

The homotopy raises every normalized edge cost to the power t and then
rescales so the off-diagonal total is unchanged. At t = 1 nothing moves;
at t = 0 every positive edge costs the same, so every tour has the same
length. Tours are 0-based permutations of ``range(n)``.
"""

from __future__ import annotations

import itertools
import math
from pathlib import Path

import numpy as np

from .homotopy import InvalidParam


class DegenerateInstance(ValueError):
    pass


class InvalidTour(ValueError):
    pass


def _square(c) -> np.ndarray:
    c = np.asarray(c, dtype=float)
    if c.ndim != 2 or c.shape[0] != c.shape[1] or c.shape[0] < 2:
        raise InvalidParam(f"expected an n x n matrix with n >= 2, got shape {c.shape}")
    if not np.all(np.isfinite(c)):
        raise InvalidParam("cost matrix has non-finite entries")
    return c


def _off_diagonal(n: int) -> np.ndarray:
    return ~np.eye(n, dtype=bool)


def normalize_costs(raw) -> np.ndarray:
    """Divide by the largest off-diagonal entry so costs lie in [0, 1]."""
    raw = _square(raw)
    if not np.allclose(raw, raw.T, rtol=0.0, atol=1e-12):
        raise InvalidParam("distance matrix must be symmetric")
    if np.any(np.diag(raw) != 0.0):
        raise InvalidParam("distance matrix must have a zero diagonal")
    if np.any(raw < 0.0):
        raise InvalidParam("distances must be non-negative")
    top = raw[_off_diagonal(len(raw))].max()
    if top <= 0.0:
        raise DegenerateInstance("all distances are zero")
    return raw / top


def smooth_costs(c, t: float) -> np.ndarray:
    """Entrywise c_ij ** t on the off-diagonal, rescaled to keep the total.

    Zero entries stay zero for every t (including t = 0) and the diagonal
    is left at zero.
    """
    if not 0.0 <= t <= 1.0:
        raise InvalidParam(f"t must lie in [0, 1], got {t}")
    c = _square(c)
    off = _off_diagonal(len(c)) & (c > 0.0)
    out = np.zeros_like(c)
    powered = c[off] ** t
    total = powered.sum()
    if total > 0.0:
        out[off] = powered * (c[off].sum() / total)
    return out


def _check_tour(tour, n: int) -> np.ndarray:
    tour = np.asarray(tour)
    if tour.ndim != 1 or len(tour) != n or not np.issubdtype(tour.dtype, np.integer):
        raise InvalidTour(f"a tour must list each of the {n} cities once")
    if not np.array_equal(np.sort(tour), np.arange(n)):
        raise InvalidTour(f"a tour must be a permutation of 0..{n - 1}")
    return tour


def tour_cost(c, tour) -> float:
    """Length of the closed tour, including the edge back to the start."""
    c = _square(c)
    tour = _check_tour(tour, len(c))
    return float(c[tour, np.roll(tour, -1)].sum())


def homotopy_tour_cost(c, tour, t: float) -> float:
    return tour_cost(smooth_costs(c, t), tour)


def distinct_tours(n: int):
    """Every tour up to rotation and reflection: (n - 1)! / 2 of them for n >= 3.

    City 0 is fixed first and the second city is kept below the last one.
    """
    if n < 2:
        raise InvalidParam("need at least two cities")
    if n < 3:
        yield (0, 1)
        return
    for rest in itertools.permutations(range(1, n)):
        if rest[0] < rest[-1]:
            yield (0, *rest)


def brute_force_tour(c, t: float = 1.0) -> tuple[tuple[int, ...], float]:
    """Exhaustive minimum of the smoothed tour cost (first minimizer found)."""
    c = _square(c)
    if len(c) > 10:
        raise InvalidParam("brute force is limited to 10 cities")
    s = smooth_costs(c, t)
    best, best_cost = None, math.inf
    for tour in distinct_tours(len(c)):
        cost = tour_cost(s, tour)
        if cost < best_cost:
            best, best_cost = tour, cost
    return best, best_cost


def distance_matrix(coords) -> np.ndarray:
    coords = np.asarray(coords, dtype=float)
    if coords.ndim != 2 or coords.shape[1] != 2:
        raise InvalidParam("coordinates must be an (n, 2) array")
    diff = coords[:, None, :] - coords[None, :, :]
    return np.sqrt((diff * diff).sum(axis=-1))


def read_instance(path) -> np.ndarray:
    """Read a raw distance matrix from text.

    Lines holding two numbers are city coordinates ``x y`` (Euclidean
    distances follow); lines holding n numbers each form an explicit n x n
    matrix. Blank lines and ``#`` comments are skipped. Two lines of two
    numbers are ambiguous and read as a matrix.
    """
    rows = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            rows.append([float(v) for v in line.split()])
        except ValueError:
            raise InvalidParam(f"{path}:{lineno}: expected numbers, got {line!r}") from None
    if not rows:
        raise InvalidParam(f"{path}: no data")
    widths = {len(r) for r in rows}
    if len(widths) != 1:
        raise InvalidParam(f"{path}: rows have differing lengths {sorted(widths)}")
    width = widths.pop()
    if width == 2 and len(rows) != 2:
        return distance_matrix(rows)
    if width != len(rows):
        raise InvalidParam(f"{path}: expected 'x y' pairs or a square matrix")
    return _square(rows)
