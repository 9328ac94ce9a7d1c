"""Per-iteration run records."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

TRACE_HEADER = ("iter", "evals", "t", "f_best")


@dataclass(frozen=True)
class TraceRecord:
    iter: int
    evals: int
    t: float
    f_best: float


@dataclass
class RunTrace:
    """Checkpoints of (evaluations used, active level, best value so far).

    ``f_best`` is the running minimum of whatever values were logged; a NaN
    value (nothing observed yet) leaves the running minimum untouched.
    """

    records: list[TraceRecord] = field(default_factory=list)

    @property
    def best(self) -> float:
        return self.records[-1].f_best if self.records else math.nan

    @property
    def evals(self) -> int:
        return self.records[-1].evals if self.records else 0

    def log(self, iteration: int, evals: int, t: float, value: float) -> None:
        if self.records and evals < self.records[-1].evals:
            raise ValueError("evaluation count went backwards")
        best = self.best
        if not math.isnan(value) and (math.isnan(best) or value < best):
            best = float(value)
        self.records.append(TraceRecord(int(iteration), int(evals), float(t), best))

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(TRACE_HEADER)
        for r in self.records:
            writer.writerow([r.iter, r.evals, repr(r.t), repr(r.f_best)])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "RunTrace":
        rows = list(csv.reader(io.StringIO(text)))
        if not rows or tuple(rows[0]) != TRACE_HEADER:
            raise ValueError("not a trace CSV (bad header)")
        trace = cls()
        for row in rows[1:]:
            trace.records.append(TraceRecord(int(row[0]), int(row[1]), float(row[2]), float(row[3])))
        return trace

    def __len__(self) -> int:
        return len(self.records)
