# %% [markdown]
# # Smoothing a travelling-salesman cost matrix
#
# Raising every normalized distance to the power t and rescaling to keep
# the total flattens the instance at t = 0, where every tour costs the
# same, and leaves it untouched at t = 1.

# %%
import numpy as np

from contpath import RngStream
from contpath.tsp import brute_force_tour, distance_matrix, homotopy_tour_cost, normalize_costs, smooth_costs

cities = RngStream(1, 0).uniform((7, 2))
c = normalize_costs(distance_matrix(cities))
print(np.round(c, 3))

# %% [markdown]
# Off-diagonal spread shrinks as t goes to 0 while the sum stays fixed.

# %%
off = ~np.eye(len(c), dtype=bool)
for t in (1.0, 0.5, 0.1, 0.0):
    s = smooth_costs(c, t)[off]
    print(f"t={t:3.1f}  min {s.min():.3f}  max {s.max():.3f}  sum {s.sum():.6f}")

# %% [markdown]
# Exhaustive search over all 360 distinct 7-city tours at several levels.
# At t = 0 every tour costs n times the mean distance.

# %%
for t in (0.0, 0.3, 0.6, 1.0):
    tour, cost = brute_force_tour(c, t)
    print(f"t={t:3.1f}  best tour {tour}  cost {cost:.4f}")
print("n * mean distance:", len(c) * c[off].mean())
print("an arbitrary tour at t=0:", homotopy_tour_cost(c, [3, 1, 4, 0, 6, 5, 2], 0.0))
