"""Exactly uniform random Dyck paths and non-crossing partitions.

Algorithm: the cycle lemma.  Shuffle n up steps and n+1 down steps
uniformly; the total is -1, so all 2n+1 rotations are distinct and
exactly one stays nonnegative before its final step.  Rotating there and
dropping the final down step yields a Dyck path, and every path has
exactly 2n+1 preimages, so the output is uniform without any big-integer
arithmetic.

Randomness comes from numpy's Philox counter-based generator keyed by
(seed, stream): identical keys reproduce identical samples on every
platform, and distinct streams are independent, which is what the
harness uses to parallelize.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bijections import dyck_to_partition
from .structures import DyckPath, NCPartition

_MASK64 = (1 << 64) - 1

# Work-unit size used by the harness: sample index i is drawn from the
# stream i // SAMPLES_PER_STREAM, so results do not depend on how many
# threads consume the units.
SAMPLES_PER_STREAM = 4096


@dataclass(frozen=True)
class RngState:
    """Seed plus stream id for a keyed Philox generator."""

    seed: int
    stream: int = 0

    def generator(self) -> np.random.Generator:
        key = [self.seed & _MASK64, self.stream & _MASK64]
        return np.random.Generator(np.random.Philox(key=key))

    def with_stream(self, stream: int) -> "RngState":
        return RngState(self.seed, stream)


def sample_dyck_steps(n: int, count: int, gen: np.random.Generator) -> np.ndarray:
    """Draw ``count`` uniform Dyck paths as a (count, 2n) array of +-1 steps."""
    if n < 1:
        raise ValueError("n must be >= 1")
    m = 2 * n + 1
    base = np.concatenate(
        [np.ones(n, dtype=np.int8), np.full(n + 1, -1, dtype=np.int8)]
    )
    mat = np.tile(base, (count, 1))
    gen.permuted(mat, axis=1, out=mat)
    prefix = np.cumsum(mat, axis=1, dtype=np.int32)
    # first position attaining the prefix minimum; the valid rotation
    # starts right after it and the dropped element is that down step
    first_min = np.argmin(prefix, axis=1)
    idx = (first_min[:, None] + 1 + np.arange(2 * n, dtype=np.int64)) % m
    return np.take_along_axis(mat, idx, axis=1)


def sample_dyck(n: int, rng: RngState) -> DyckPath:
    """One uniform Dyck path with 2n steps."""
    steps = sample_dyck_steps(n, 1, rng.generator())[0]
    return DyckPath(tuple(int(s) for s in steps))


def sample_nc_partition(n: int, rng: RngState) -> NCPartition:
    """One uniform non-crossing partition of [n] (via the path bijection)."""
    return dyck_to_partition(sample_dyck(n, rng))
