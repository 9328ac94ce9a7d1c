"""Function-evaluation budgets.

A query of f, of H, or of an analytic gradient costs one unit; a
K-sample zeroth-order estimate costs K + 1. Optimizers check
``affordable`` before each oracle call and ``charge`` after.
"""

from __future__ import annotations


class BudgetExhausted(RuntimeError):
    pass


class Budget:
    def __init__(self, limit: int, parent: "Budget | None" = None):
        if limit < 0:
            raise ValueError(f"budget limit must be non-negative, got {limit}")
        self.limit = int(limit)
        self.used = 0
        self.parent = parent

    @property
    def remaining(self) -> int:
        own = self.limit - self.used
        if self.parent is not None:
            return min(own, self.parent.remaining)
        return own

    def affordable(self, cost: int, reserve: int = 0) -> bool:
        return self.remaining - reserve >= cost

    def charge(self, cost: int = 1) -> None:
        if cost < 0:
            raise ValueError("cost must be non-negative")
        if cost > self.remaining:
            raise BudgetExhausted(
                f"charging {cost} units with only {self.remaining} of {self.limit} left"
            )
        self.used += cost
        if self.parent is not None:
            self.parent.charge(cost)

    def child(self, limit: int) -> "Budget":
        """Sub-budget whose charges also count against this one."""
        return Budget(min(limit, self.remaining), parent=self)

    def __repr__(self) -> str:
        return f"Budget(used={self.used}, limit={self.limit})"


def unlimited() -> Budget:
    return Budget(2**62)
