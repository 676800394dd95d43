"""Partition statistics: block count, per-size counts, largest block, width.

Scalar functions operate on the domain objects.  The ``batch_*`` kernels
compute the same statistics directly on arrays of Dyck-path steps (one
row per sample, entries +1/-1) so Monte Carlo runs stay vectorized; the
test suite pins them against the scalar versions.
"""

from __future__ import annotations

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .structures import DyckPath, NCPairing, NCPartition


def num_blocks(pi: NCPartition) -> int:
    return len(pi.blocks)


def block_size_histogram(pi: NCPartition) -> list[int]:
    """Entry l-1 counts the blocks of size l, for l = 1..n."""
    hist = [0] * pi.n
    for block in pi.blocks:
        hist[len(block) - 1] += 1
    return hist


def largest_block(pi: NCPartition) -> int:
    return max((len(b) for b in pi.blocks), default=0)


def width_profile(pi: NCPartition) -> list[int]:
    """Number of blocks spanning each gap x+1/2, for x = 1..n-1.

    A block spans gap x iff min(block) <= x < max(block); within a block
    at most one arc crosses each gap, so this equals the arc-crossing
    count of the picture with blocks drawn as chained semicircles.
    """
    if pi.n <= 1:
        return []
    diff = [0] * (pi.n + 1)
    for block in pi.blocks:
        if len(block) > 1:
            diff[block[0]] += 1
            diff[block[-1]] -= 1
    out = []
    acc = 0
    for x in range(1, pi.n):
        acc += diff[x]
        out.append(acc)
    return out


def width(pi: NCPartition) -> int:
    return max(width_profile(pi), default=0)


def pairing_width(pairing: NCPairing) -> int:
    """Maximum number of simultaneously open pairs over all gaps."""
    opens = {a for a, _ in pairing.pairs}
    h = best = 0
    for i in range(1, pairing.m + 1):
        h += 1 if i in opens else -1
        best = max(best, h)
    return best


def dyck_height(path: DyckPath) -> int:
    h = best = 0
    for s in path.steps:
        h += s
        best = max(best, h)
    return best


def dyck_peaks(path: DyckPath) -> int:
    return sum(
        1 for a, b in zip(path.steps, path.steps[1:]) if a == 1 and b == -1
    )


# ---------------------------------------------------------------------------
# vectorized kernels over (rows, 2n) step arrays


def batch_num_blocks(steps: np.ndarray) -> np.ndarray:
    """Blocks per row = peaks (an up step directly followed by a down step)."""
    if steps.shape[1] == 0:
        return np.zeros(steps.shape[0], dtype=np.int64)
    peaks = (steps[:, :-1] > 0) & (steps[:, 1:] < 0)
    return peaks.sum(axis=1, dtype=np.int64)


def _down_run_starts(down: np.ndarray) -> np.ndarray:
    starts = down.copy()
    starts[:, 1:] &= ~down[:, :-1]
    return starts


def batch_count_blocks_of_size(steps: np.ndarray, size: int) -> np.ndarray:
    """Blocks of exactly the given size = maximal down runs of that length."""
    rows, m = steps.shape
    if size < 1 or size > m // 2:
        return np.zeros(rows, dtype=np.int64)
    down = steps < 0
    starts = _down_run_starts(down)

    def at_least(length: int) -> np.ndarray:
        if length > m:
            return np.zeros(rows, dtype=np.int64)
        window = sliding_window_view(down, length, axis=1).all(axis=2)
        return (starts[:, : window.shape[1]] & window).sum(axis=1, dtype=np.int64)

    return at_least(size) - at_least(size + 1)


def batch_largest_block(steps: np.ndarray) -> np.ndarray:
    """Longest down run per row."""
    rows, m = steps.shape
    if m == 0:
        return np.zeros(rows, dtype=np.int64)
    down = steps < 0
    idx = np.arange(m, dtype=np.int64)
    last_up = np.maximum.accumulate(np.where(~down, idx, np.int64(-1)), axis=1)
    run_len = np.where(down, idx[None, :] - last_up, 0)
    return run_len.max(axis=1)


def batch_width(steps: np.ndarray) -> np.ndarray:
    """Width per row, straight from the path.

    Uses the doubling picture: the width at gap x equals the number of
    non-singleton blocks opened at or before x and not yet closed, so it
    suffices to classify each element as the minimum or maximum of a
    non-singleton block and take a running-sum maximum.  The up/down
    matching needed for that classification comes from sorting step
    positions by the level boundary they cross: crossings of one boundary
    alternate up/down, so after the sort consecutive entries are matched
    pairs.
    """
    rows, m = steps.shape
    n = m // 2
    if n == 0:
        return np.zeros(rows, dtype=np.int64)
    up = steps > 0
    after = np.cumsum(steps, axis=1, dtype=np.int32)
    before = after - steps
    boundary = np.where(up, before, before - 1).astype(np.int64)
    order = np.argsort(boundary * m + np.arange(m, dtype=np.int64), axis=1)
    up_pos = order[:, 0::2]
    down_pos = order[:, 1::2]
    is_max = down_pos == up_pos + 1
    nxt = down_pos + 1
    at_end = nxt == m
    next_is_up = np.take_along_axis(up, np.where(at_end, m - 1, nxt), axis=1)
    is_min = at_end | next_is_up
    # singletons are both min and max and cancel to zero net contribution
    net = is_min.astype(np.int32) - is_max.astype(np.int32)
    label = np.take_along_axis(np.cumsum(up, axis=1, dtype=np.int64), up_pos, axis=1)
    per_element = np.zeros((rows, n), dtype=np.int32)
    np.put_along_axis(per_element, label - 1, net, axis=1)
    profile = np.cumsum(per_element, axis=1)
    return profile.max(axis=1).astype(np.int64)


def batch_height(steps: np.ndarray) -> np.ndarray:
    if steps.shape[1] == 0:
        return np.zeros(steps.shape[0], dtype=np.int64)
    return np.cumsum(steps, axis=1, dtype=np.int32).max(axis=1).astype(np.int64)
