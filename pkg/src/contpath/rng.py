"""Counter-based random streams.

Every draw is a pure function of ``(seed, stream_id, counter)``: the
stream is keyed Philox (from numpy) and the counter is the number of
64-bit words consumed so far. Two streams with different ``stream_id``
never share key material, so independent trials can run on any number
of threads and still reproduce bit for bit.

Gaussian variates use the Box-Muller transform on top of the uniform
stream rather than numpy's ziggurat sampler, which keeps the mapping from
counter to normal deviate fixed and easy to audit.
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1
_TWO_PI = 2.0 * np.pi


class RngStream:
    """A splittable, seekable source of uniform and normal deviates."""

    def __init__(self, seed: int, stream_id: int = 0, counter: int = 0):
        if counter < 0:
            raise ValueError("counter must be non-negative")
        self.seed = int(seed) & _MASK64
        self.stream_id = int(stream_id) & _MASK64
        self._counter = 0
        self._bitgen = np.random.Philox(key=self.seed | (self.stream_id << 64))
        self._seek(int(counter))

    def _seek(self, counter: int) -> None:
        blocks, words = divmod(counter, 4)
        if blocks:
            self._bitgen.advance(blocks)
        if words:
            self._bitgen.random_raw(words)
        self._counter = counter

    @property
    def counter(self) -> int:
        return self._counter

    def state(self) -> dict:
        return {"seed": self.seed, "stream_id": self.stream_id, "counter": self._counter}

    @classmethod
    def from_state(cls, state: dict) -> "RngStream":
        return cls(state["seed"], state["stream_id"], state["counter"])

    def spawn(self, stream_id: int) -> "RngStream":
        """Fresh stream with the same seed and a different ``stream_id``."""
        return RngStream(self.seed, stream_id)

    def raw(self, n: int) -> np.ndarray:
        words = self._bitgen.random_raw(n) if n else np.empty(0, dtype=np.uint64)
        self._counter += n
        return np.asarray(words, dtype=np.uint64)

    def uniform(self, size=None) -> np.ndarray | float:
        """Uniform deviates on the open interval (0, 1)."""
        n = int(np.prod(size)) if size is not None else 1
        u = ((self.raw(n) >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0**-53
        if size is None:
            return float(u[0])
        return u.reshape(size)

    def normal(self, size=None) -> np.ndarray | float:
        """Standard normal deviates via Box-Muller (two uniforms per pair)."""
        n = int(np.prod(size)) if size is not None else 1
        pairs = (n + 1) // 2
        u = self.uniform(2 * pairs)
        radius = np.sqrt(-2.0 * np.log(u[0::2]))
        angle = _TWO_PI * u[1::2]
        z = np.empty(2 * pairs)
        z[0::2] = radius * np.cos(angle)
        z[1::2] = radius * np.sin(angle)
        if size is None:
            return float(z[0])
        return z[:n].reshape(size)

    def __repr__(self) -> str:
        return f"RngStream(seed={self.seed}, stream_id={self.stream_id}, counter={self._counter})"
