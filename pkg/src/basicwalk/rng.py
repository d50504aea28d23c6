"""Seeded random streams.

All randomness in this package flows through :class:`RandomStream`, a
buffered 64-bit PCG64 generator (numpy's implementation).  Per-trial
substreams are derived as ``SeedSequence(master_seed, spawn_key=(trial,))``
so batch results are bit-reproducible and independent of how trials are
scheduled across workers.
"""

from __future__ import annotations

import numpy as np

_BUFFER = 4096
_U64 = 1 << 64


class RandomStream:
    """Buffered PCG64 stream of 64-bit words with unbiased bounded draws."""

    __slots__ = ("_gen", "_buf", "_pos")

    def __init__(self, seed):
        if not isinstance(seed, np.random.SeedSequence):
            seed = np.random.SeedSequence(seed)
        self._gen = np.random.Generator(np.random.PCG64(seed))
        self._buf: list[int] = []
        self._pos = 0

    def next_u64(self) -> int:
        if self._pos >= len(self._buf):
            self._buf = self._gen.integers(
                0, _U64, size=_BUFFER, dtype=np.uint64
            ).tolist()
            self._pos = 0
        value = self._buf[self._pos]
        self._pos += 1
        return value

    def below(self, n: int) -> int:
        """Uniform integer in [0, n), unbiased (rejection on the top range)."""
        if n <= 0:
            raise ValueError(f"bound must be positive, got {n}")
        limit = _U64 - (_U64 % n)
        while True:
            u = self.next_u64()
            if u < limit:
                return u % n

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates shuffle."""
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]


def substream(master_seed: int, index: int) -> RandomStream:
    """The stream for trial `index` of a batch seeded with `master_seed`."""
    return RandomStream(np.random.SeedSequence(master_seed, spawn_key=(index,)))
