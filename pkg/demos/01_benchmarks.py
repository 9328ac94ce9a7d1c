# %% [markdown]
# # Homotopy methods on three classic test functions
#
# Ackley, Rosenbrock and Himmelblau under fixed evaluation budgets
# (1000, 20000 and 2000). Every algorithm pays for each objective or
# gradient query, and the final value is always the plain objective at the
# returned point.

# %%
import statistics

from contpath import RunConfig
from contpath.harness import ALGORITHMS, run_trials

# %% [markdown]
# A single trial. The resolved config spells out every default, so the
# JSON below is enough to replay the run bit for bit.

# %%
cfg = RunConfig("ackley", "cpl", seed=0)
result = run_trials([cfg])[0]
print(result.config.to_json())
print("final value", result.f_final, "after", result.budget_used, "evaluations")

# %% [markdown]
# The trace logs the best objective value seen so far. For the path
# method the last three rows are the end of training, the local search and
# the final evaluation.

# %%
for row in result.trace.records[-3:]:
    print(row)

# %% [markdown]
# Medians over five seeds for every algorithm. Plain gradient descent
# stalls in one of Ackley's many local dips; the smoothed methods get
# close to the origin.

# %%
for problem in ("ackley", "himmelblau"):
    for algo in ALGORITHMS:
        runs = run_trials([RunConfig(problem, algo, seed=s) for s in range(5)])
        med = statistics.median(r.f_final for r in runs)
        print(f"{problem:10s} {algo:9s} median {med:.3g}")

# %% [markdown]
# For the path method, the value at x(1) straight after training shows
# how much of the result comes from the learned path and how much from the
# short local search.

# %%
runs = run_trials([RunConfig("ackley", "cpl", seed=s) for s in range(5)])
for r in runs:
    print(f"seed {r.config.seed}: path {r.extra['f_path']:.3f} -> final {r.f_final:.3g}")
