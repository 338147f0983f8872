"""Portable 64-bit xorshift generator for reproducible harness inputs.

The stream is defined by recurrences only, so another implementation can
reproduce it bit for bit:

* Seeding: ``LANES`` lane states come from splitmix64 on ``seed``::

      s += 0x9E3779B97F4A7C15
      z = s
      z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
      z = (z ^ (z >> 27)) * 0x94D049BB133111EB
      state[lane] = z ^ (z >> 31)        # replaced by 1 if it is 0

* Step (xorshift64*), applied to every lane::

      x ^= x >> 12;  x ^= x << 25;  x ^= x >> 27
      out = x * 0x2545F4914F6CDD1D       # mod 2**64

* Output order: step all lanes, emit lane 0, 1, ..., LANES-1, repeat.
* Doubles: ``(out >> 11) * 2**-53`` in ``[0, 1)``;
  ``uniform(a, b) = a + (b - a) * double``.
"""

from __future__ import annotations

import numpy as np

LANES = 64
_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MULT = np.uint64(0x2545F4914F6CDD1D)


def splitmix64(seed: int, n: int) -> list[int]:
    s = seed & _MASK
    out = []
    for _ in range(n):
        s = (s + _GOLDEN) & _MASK
        z = s
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        out.append(z ^ (z >> 31))
    return out


class XorShiftRng:
    """Lane-parallel xorshift64* stream. Not thread-safe; one instance per consumer."""

    def __init__(self, seed: int = 0):
        if seed < 0:
            raise ValueError(f"seed must be a non-negative 64-bit integer, got {seed}")
        self.seed = seed
        states = [s or 1 for s in splitmix64(seed, LANES)]
        self._state = np.array(states, dtype=np.uint64)
        self._buffer = np.empty(0, dtype=np.uint64)

    def _step(self) -> np.ndarray:
        x = self._state
        x ^= x >> np.uint64(12)
        x ^= x << np.uint64(25)
        x ^= x >> np.uint64(27)
        return x * _MULT

    def next_u64(self, size: int) -> np.ndarray:
        chunks = [self._buffer]
        have = len(self._buffer)
        if have < size:
            rounds = -(-(size - have) // LANES)
            block = np.empty((rounds, LANES), dtype=np.uint64)
            for r in range(rounds):
                block[r] = self._step()
            chunks.append(block.ravel())
        stream = np.concatenate(chunks)
        self._buffer = stream[size:]
        return stream[:size]

    def random(self, shape=()) -> np.ndarray:
        n = int(np.prod(shape, dtype=np.int64))
        u = self.next_u64(n)
        return ((u >> np.uint64(11)).astype(np.float64) * 2.0**-53).reshape(shape)

    def uniform(self, low: float = -1.0, high: float = 1.0, shape=()) -> np.ndarray:
        return low + (high - low) * self.random(shape)

    def integers(self, low: int, high: int, shape=()) -> np.ndarray:
        """Integers in ``[low, high)`` via ``floor(double * span)``."""
        return low + np.floor(self.random(shape) * (high - low)).astype(np.int64)
