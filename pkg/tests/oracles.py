"""Independent reference computations used only by the tests.

Nothing here imports the decoder kernels; everything works from a dense
parity-check matrix and first-principles definitions.
"""

from __future__ import annotations

import numpy as np

SAT = 15


def sat(x):
    return np.clip(x, -SAT, SAT)


def naive_two_min(mags: np.ndarray):
    """Two-pass scan over the last axis: first minimum (lowest index), then the rest."""
    mags = np.asarray(mags, dtype=np.int64)
    idx = np.argmin(mags, axis=-1)
    min1 = np.take_along_axis(mags, idx[..., None], -1)[..., 0]
    masked = mags.copy()
    np.put_along_axis(masked, idx[..., None], np.iinfo(np.int64).max, -1)
    return min1, masked.min(axis=-1), idx


def brute_cn(msgs: np.ndarray, offset: int) -> np.ndarray:
    """Extrinsic offset min-sum: for each lane, min and sign product over all *other* lanes."""
    msgs = np.asarray(msgs, dtype=np.int64)
    d = msgs.shape[-1]
    out = np.empty_like(msgs)
    for i in range(d):
        others = np.delete(msgs, i, axis=-1)
        mag = np.maximum(np.abs(others).min(axis=-1) - offset, 0)
        neg = (others < 0).sum(axis=-1) % 2 == 1
        out[..., i] = np.where(neg, -mag, mag)
    return out


class DenseReference:
    """Offset min-sum flooding on a dense H, batched over frames.

    Variable-node sums run over check rows in ascending row order (which is
    base-row order) with saturation after every addition.
    """

    def __init__(self, H: np.ndarray, offset: int = 1):
        self.H = np.asarray(H, dtype=np.uint8)
        self.offset = offset
        self.rows = [np.flatnonzero(r) for r in self.H]
        self.cols = [np.flatnonzero(c) for c in self.H.T]

    def totals(self, ch: np.ndarray, R: dict) -> np.ndarray:
        tot = ch.astype(np.int64).copy()
        for n, checks in enumerate(self.cols):
            for m in checks:
                tot[:, n] = sat(tot[:, n] + R[m, n])
        return tot

    def iterate(self, ch: np.ndarray, R: dict) -> tuple[dict, np.ndarray]:
        tot = self.totals(ch, R)
        Q = {(m, n): sat(tot[:, n] - R[m, n]) for m, row in enumerate(self.rows) for n in row}
        R_new = {}
        for m, row in enumerate(self.rows):
            for n in row:
                others = np.stack([Q[m, j] for j in row if j != n], axis=-1)
                mag = np.maximum(np.abs(others).min(axis=-1) - self.offset, 0)
                neg = (others < 0).sum(axis=-1) % 2 == 1
                R_new[m, n] = np.where(neg, -mag, mag)
        return R_new, self.totals(ch, R_new)

    def zero_messages(self, batch: int) -> dict:
        return {(m, n): np.zeros(batch, dtype=np.int64) for m, row in enumerate(self.rows) for n in row}


def dense_syndrome(H: np.ndarray, bits: np.ndarray) -> np.ndarray:
    return (np.asarray(bits, dtype=np.int64) @ np.asarray(H, dtype=np.int64).T) % 2
