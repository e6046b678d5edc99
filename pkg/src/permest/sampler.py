"""Seeded Gaussian and Rademacher sampling with reproducible substreams.

A stream is identified by ``(seed, stream_id)``. Its state comes from
``numpy.random.SeedSequence(seed, spawn_key=(stream_id,))`` feeding a PCG64
generator, so the sample sequence depends on nothing else: not on the
platform, the thread count or the order in which streams are created.
"""
from __future__ import annotations

import numpy as np

_U64 = 1 << 64


class RngStream:
    """Single-owner random stream. Do not share one instance across threads."""

    def __init__(self, seed: int, stream_id: int = 0):
        seed = int(seed)
        stream_id = int(stream_id)
        if not 0 <= seed < _U64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
        if stream_id < 0:
            raise ValueError(f"stream_id must be non-negative, got {stream_id}")
        self.seed = seed
        self.stream_id = stream_id
        ss = np.random.SeedSequence(seed, spawn_key=(stream_id,))
        self._gen = np.random.Generator(np.random.PCG64(ss))

    def __repr__(self):
        return f"RngStream(seed={self.seed}, stream_id={self.stream_id})"

    def gaussian_scalar(self) -> float:
        return float(self._gen.standard_normal())

    def gaussian_vector(self, n: int) -> np.ndarray:
        if n < 1:
            raise ValueError("n must be at least 1")
        return self._gen.standard_normal(n)

    def gaussian_array(self, shape) -> np.ndarray:
        """Standard normals filling ``shape`` in C order.

        Consumes the stream exactly like the same number of scalar draws.
        """
        return self._gen.standard_normal(shape)

    def rademacher_scalar(self) -> float:
        return -1.0 if self._gen.random() < 0.5 else 1.0

    def rademacher_array(self, shape) -> np.ndarray:
        """Uniform signs in C order, one uniform double consumed per sign."""
        return np.where(self._gen.random(shape) < 0.5, -1.0, 1.0)
