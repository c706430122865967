"""Seeded random streams and primitive random matrices.

Every stream is a Philox counter-based generator keyed by ``(seed,
stream_id)``, so two workers never share state and a given pair always
replays the same draws.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import qr_unitary

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class GinibreSpec:
    rows: int
    cols: int
    field: str = "complex"

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise ValueError(f"Ginibre shape must be positive, got {self.rows}x{self.cols}")
        if self.field not in ("complex", "real"):
            raise ValueError(f"field must be 'complex' or 'real', not {self.field!r}")


class SeededStream:
    """A reproducible random stream identified by ``(seed, stream_id)``."""

    def __init__(self, seed: int, stream_id: int = 0):
        self.seed = int(seed) & _MASK64
        self.stream_id = int(stream_id) & _MASK64
        ss = np.random.SeedSequence(entropy=self.seed, spawn_key=(self.stream_id,))
        self.generator = np.random.Generator(np.random.Philox(ss))

    def __repr__(self):
        return f"SeededStream(seed={self.seed}, stream_id={self.stream_id})"

    def normal(self, size) -> np.ndarray:
        return self.generator.standard_normal(size)

    def uniform(self, size=None):
        return self.generator.random(size)


def ginibre(spec: GinibreSpec, rng: SeededStream) -> np.ndarray:
    """Matrix of i.i.d. Gaussian entries with unit entry variance.

    Complex entries have independent real and imaginary parts of variance
    1/2 each; real entries are standard normal.
    """
    shape = (spec.rows, spec.cols)
    if spec.field == "real":
        return rng.normal(shape)
    z = rng.normal(shape + (2,))
    return (z[..., 0] + 1j * z[..., 1]) * np.sqrt(0.5)


def haar_unitary(n: int, rng: SeededStream) -> np.ndarray:
    if n < 1:
        raise ValueError("n must be >= 1")
    q, _ = qr_unitary(ginibre(GinibreSpec(n, n), rng))
    return q


def haar_orthogonal(n: int, rng: SeededStream) -> np.ndarray:
    if n < 1:
        raise ValueError("n must be >= 1")
    q, _ = qr_unitary(ginibre(GinibreSpec(n, n, "real"), rng))
    return q.real
