"""Seeded random streams.

A stream is identified by ``(seed, stream_id)`` plus an optional path of
child indices.  The triple is fed to :class:`numpy.random.SeedSequence` as
entropy and spawn key, so equal identifiers give bitwise-equal draws on any
platform and distinct identifiers give independent streams.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1


class RngStream:
    """Single-owner PCG64 generator with a stable identity."""

    def __init__(self, seed: int, stream_id: int = 0, path: tuple[int, ...] = ()):
        self.seed = int(seed) & MASK64
        self.stream_id = int(stream_id) & MASK64
        self.path = tuple(int(p) for p in path)
        ss = np.random.SeedSequence(entropy=self.seed, spawn_key=(self.stream_id, *self.path))
        self.gen = np.random.Generator(np.random.PCG64(ss))

    def child(self, index: int) -> "RngStream":
        """Independent sub-stream; does not consume draws from ``self``."""
        return RngStream(self.seed, self.stream_id, self.path + (index,))

    def random(self, size=None):
        return self.gen.random(size)

    def __repr__(self) -> str:
        return f"RngStream(seed={self.seed}, stream_id={self.stream_id}, path={self.path})"


def as_stream(rng) -> RngStream:
    if isinstance(rng, RngStream):
        return rng
    if rng is None:
        return RngStream(0)
    return RngStream(int(rng))
