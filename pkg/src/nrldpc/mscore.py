"""Fixed-point offset min-sum kernels and the flooding decoder.

All messages are saturating 5-bit integers in [-15, 15] (see ``channel``).
Conventions that matter for bit-exactness:

* the sign of zero is positive (hard bit 0, no flip in sign products);
* variable-node sums are accumulated base row by base row, saturating after
  every addition;
* comparator lanes with no connection are driven with +15;
* min1 ties resolve to the lowest lane.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple, Sequence

import numpy as np

from .basegraph import N_CORE_COLS, ParityMatrix
from .channel import QLLR_DTYPE, QLLR_MAX

COMPARATOR_WIDTH = 16
HALF_LAYER = N_CORE_COLS // 2
_BIG = np.iinfo(np.int16).max


class TwoMinResult(NamedTuple):
    min1: int
    min2: int
    idx: int


def two_min_naive(mags: Sequence[int]) -> TwoMinResult:
    """Reference two-pass scan."""
    if len(mags) < 2:
        raise ValueError("two_min needs at least 2 inputs")
    idx = 0
    for i, m in enumerate(mags):
        if m < mags[idx]:
            idx = i
    min2 = min(m for i, m in enumerate(mags) if i != idx)
    return TwoMinResult(int(mags[idx]), int(min2), idx)


def two_min_tree(mags: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Balanced-tree two-minimum reduction over the last axis.

    Each node merges ``(min1, min2, idx)`` of its left and right children;
    the left child wins ties, so ``idx`` is the lowest tying lane.
    """
    mags = np.asarray(mags)
    n = mags.shape[-1]
    if n < 2:
        raise ValueError("two_min needs at least 2 inputs")
    m1 = mags.astype(np.int16)
    m2 = np.full_like(m1, _BIG)
    idx = np.broadcast_to(np.arange(n, dtype=np.int16), m1.shape).copy()
    while m1.shape[-1] > 1:
        if m1.shape[-1] % 2:
            pad = m1.shape[:-1] + (1,)
            m1 = np.concatenate([m1, np.full(pad, _BIG, np.int16)], axis=-1)
            m2 = np.concatenate([m2, np.full(pad, _BIG, np.int16)], axis=-1)
            idx = np.concatenate([idx, np.full(pad, n, np.int16)], axis=-1)
        l1, r1 = m1[..., 0::2], m1[..., 1::2]
        l2, r2 = m2[..., 0::2], m2[..., 1::2]
        li, ri = idx[..., 0::2], idx[..., 1::2]
        right = r1 < l1
        m1 = np.where(right, r1, l1)
        m2 = np.where(right, np.minimum(l1, r2), np.minimum(l2, r1))
        idx = np.where(right, ri, li)
    return m1[..., 0], m2[..., 0], idx[..., 0]


def two_min(mags: Sequence[int], n: int | None = None) -> TwoMinResult:
    """One pass of the 16-input comparator over ``mags[:n]``."""
    mags = list(mags if n is None else mags[:n])
    if not 2 <= len(mags) <= COMPARATOR_WIDTH:
        raise ValueError(f"comparator takes 2..{COMPARATOR_WIDTH} inputs, got {len(mags)}")
    m1, m2, idx = two_min_tree(np.array(mags))
    return TwoMinResult(int(m1), int(m2), int(idx))


def two_min_feedback(prev: TwoMinResult, mags: Sequence[int], base: int) -> TwoMinResult:
    """Second comparator pass: previous (min1, min2) re-enter on lanes 0 and 1.

    ``base`` is the global lane number of ``mags[0]``; the returned index is
    global.
    """
    res = two_min([prev.min1, prev.min2, *mags])
    idx = prev.idx if res.idx < 2 else base + res.idx - 2
    return TwoMinResult(res.min1, res.min2, idx)


def _sign_bits(x: np.ndarray) -> np.ndarray:
    return x < 0


def cn_update_array(msgs: np.ndarray, offset_lsb: int = 1) -> np.ndarray:
    """Offset min-sum check-node update over the last axis (any batch shape)."""
    msgs = np.asarray(msgs)
    mags = np.abs(msgs.astype(np.int16))
    m1, m2, idx = two_min_tree(mags)
    lanes = np.arange(msgs.shape[-1])
    mag = np.where(lanes == idx[..., None], m2[..., None], m1[..., None])
    mag = np.maximum(mag - offset_lsb, 0)
    neg = _sign_bits(msgs)
    parity = np.logical_xor.reduce(neg, axis=-1, keepdims=True)
    out = np.where(neg ^ parity, -mag, mag)
    return out.astype(QLLR_DTYPE)


def cn_update(in_msgs: Sequence[int], offset_lsb: int = 1) -> list[int]:
    if len(in_msgs) < 2:
        raise ValueError("check node degree must be at least 2")
    return [int(v) for v in cn_update_array(np.array(in_msgs, dtype=np.int16), offset_lsb)]


def cn_layer_update(core: Sequence[int], ext: int | None = None, offset_lsb: int = 1) -> list[int]:
    """Check node as wired in hardware: 26 core lanes plus an optional extension lane.

    Lanes 0..12 are compared first; their (min1, min2) re-enter the
    comparator with lanes 13..25 and the extension lane (16 inputs).
    Unconnected lanes must already carry +15.
    """
    if len(core) != N_CORE_COLS:
        raise ValueError(f"expected {N_CORE_COLS} core lanes")
    lanes = list(core) + ([] if ext is None else [ext])
    mags = [abs(int(v)) for v in lanes]
    first = two_min(mags[:HALF_LAYER])
    m1, m2, idx = two_min_feedback(first, mags[HALF_LAYER:], HALF_LAYER)
    parity = sum(1 for v in lanes if v < 0) & 1
    out = []
    for i, v in enumerate(lanes):
        mag = max((m2 if i == idx else m1) - offset_lsb, 0)
        out.append(-mag if (parity ^ (v < 0)) else mag)
    return out


def _sat(x: int) -> int:
    return max(-QLLR_MAX, min(QLLR_MAX, x))


def vn_update(channel: int, incoming: Sequence[int]) -> tuple[int, list[int]]:
    """Primary variable node: saturating accumulation in arrival order."""
    total = _sat(int(channel))
    for m in incoming:
        total = _sat(total + int(m))
    return total, [_sat(total - int(m)) for m in incoming]


def evn_update(channel: int, cn_msg: int) -> tuple[int, int]:
    """Degree-1 extension variable node: one adder, no feedback register.

    Returns ``(hard_bit, outgoing)``.  The outgoing message is what the check
    node sees after removing its own stored message from the node total, i.e.
    the channel LLR unless the total saturated.
    """
    total = _sat(int(channel) + int(cn_msg))
    return int(total < 0), _sat(total - int(cn_msg))


def syndrome_ok(hard_bits: np.ndarray, H: ParityMatrix) -> bool | np.ndarray:
    """True where every expanded row has even parity (per frame if batched)."""
    syn = H.syndrome(hard_bits)
    ok = ~syn.any(axis=-1)
    return bool(ok) if ok.ndim == 0 else ok


@dataclass(frozen=True)
class DecodeParams:
    max_iters: int = 10
    offset_lsb: int = 1
    early_termination: bool = True

    def __post_init__(self):
        if self.max_iters < 1:
            raise ValueError("max_iters must be at least 1")
        if self.offset_lsb < 0:
            raise ValueError("offset_lsb must be nonnegative")


@dataclass
class DecodeResult:
    hard_bits: np.ndarray
    iterations_run: int
    converged: bool
    totals: np.ndarray = field(repr=False)

    def __iter__(self):
        # allows ``bits, iters, ok = decode(...)``
        return iter((self.hard_bits, self.iterations_run, self.converged))


@dataclass
class DecoderState:
    """Flooding state for a batch of frames (leading axis = frame)."""

    channel_llrs: np.ndarray  # (B, n_code)
    cn_messages: np.ndarray  # (B, n_blocks * Z), edge e = block * Z + lane
    totals: np.ndarray  # (B, n_code)
    hard_bits: np.ndarray  # (B, n_code)
    iterations_run: np.ndarray  # (B,)
    converged: np.ndarray  # (B,)


class FloodingDecoder:
    """Offset min-sum flooding decoder bound to one parity matrix."""

    def __init__(self, H: ParityMatrix):
        self.H = H
        Z = H.Z
        n_blocks = len(H.blocks)
        self.n_edges = n_blocks * Z
        self.edge_cols = H.cols.reshape(-1)

        # per base row: edge ids of primary (core) and extension connections
        self._row_core: list[tuple[np.ndarray, np.ndarray]] = []
        ext_edges = []
        row_blocks = [H.row_blocks(r) for r in range(H.cfg.mb)]
        for blocks in row_blocks:
            core = [b for b in blocks if H.blocks[b][1] < N_CORE_COLS]
            e = (np.array(core, dtype=np.int64)[:, None] * Z + np.arange(Z)).reshape(-1)
            self._row_core.append((e, self.edge_cols[e]))
            ext_edges += [b * Z + lane for b in blocks if H.blocks[b][1] >= N_CORE_COLS for lane in range(Z)]
        self._ext_edges = np.array(ext_edges, dtype=np.int64)
        self._ext_cols = self.edge_cols[self._ext_edges] if ext_edges else np.empty(0, np.int64)

        # comparator wiring: (expanded row, lane) -> edge id, pad slot = n_edges
        dmax = max(len(b) for b in row_blocks)
        wiring = np.full((H.n_rows, dmax), self.n_edges, dtype=np.int64)
        for r, blocks in enumerate(row_blocks):
            for j, b in enumerate(blocks):
                wiring[r * Z: (r + 1) * Z, j] = b * Z + np.arange(Z)
        self._wiring = wiring
        self._wired = wiring < self.n_edges

    # -- node updates ------------------------------------------------------

    def vn_totals(self, ch: np.ndarray, c2v: np.ndarray) -> np.ndarray:
        """Per-column totals: primary VNs accumulate row by row, EVNs add once."""
        total = ch.copy()
        for e, cols in self._row_core:
            total[:, cols] = np.clip(total[:, cols] + c2v[:, e], -QLLR_MAX, QLLR_MAX)
        if self._ext_edges.size:
            total[:, self._ext_cols] = np.clip(
                ch[:, self._ext_cols] + c2v[:, self._ext_edges], -QLLR_MAX, QLLR_MAX)
        return total

    def vn_messages(self, total: np.ndarray, c2v: np.ndarray) -> np.ndarray:
        return np.clip(total[:, self.edge_cols] - c2v, -QLLR_MAX, QLLR_MAX)

    def cn_messages(self, v2c: np.ndarray, offset_lsb: int) -> np.ndarray:
        padded = np.concatenate(
            [v2c, np.full((v2c.shape[0], 1), QLLR_MAX, dtype=v2c.dtype)], axis=1)
        out = cn_update_array(padded[:, self._wiring], offset_lsb)
        c2v = np.empty_like(v2c)
        c2v[:, self._wiring[self._wired]] = out[:, self._wired]
        return c2v

    # -- iteration ---------------------------------------------------------

    def init_state(self, llrs: np.ndarray) -> DecoderState:
        llrs = np.atleast_2d(np.asarray(llrs))
        if llrs.shape[-1] != self.H.n_cols:
            raise ValueError(f"expected {self.H.n_cols} LLRs per frame, got {llrs.shape[-1]}")
        if np.abs(llrs.astype(np.int16)).max(initial=0) > QLLR_MAX:
            raise ValueError(f"LLRs must lie in [-{QLLR_MAX}, {QLLR_MAX}]")
        ch = llrs.astype(QLLR_DTYPE)
        B = ch.shape[0]
        return DecoderState(
            channel_llrs=ch,
            cn_messages=np.zeros((B, self.n_edges), dtype=QLLR_DTYPE),
            totals=ch.copy(),
            hard_bits=(ch < 0).astype(np.uint8),
            iterations_run=np.zeros(B, dtype=np.int64),
            converged=np.zeros(B, dtype=bool),
        )

    def iterate(self, state: DecoderState, params: DecodeParams, frames: np.ndarray | None = None) -> None:
        """One flooding iteration on ``frames`` (default: all), in place."""
        if frames is None:
            frames = np.arange(state.channel_llrs.shape[0])
        ch = state.channel_llrs[frames]
        c2v = state.cn_messages[frames]
        total = state.totals[frames]
        v2c = self.vn_messages(total, c2v)
        c2v = self.cn_messages(v2c, params.offset_lsb)
        total = self.vn_totals(ch, c2v)
        hard = (total < 0).astype(np.uint8)
        state.cn_messages[frames] = c2v
        state.totals[frames] = total
        state.hard_bits[frames] = hard
        state.iterations_run[frames] += 1
        state.converged[frames] = syndrome_ok(hard, self.H)

    def run(self, llrs: np.ndarray, params: DecodeParams = DecodeParams()) -> DecoderState:
        state = self.init_state(llrs)
        active = np.arange(state.channel_llrs.shape[0])
        for _ in range(params.max_iters):
            self.iterate(state, params, active)
            if params.early_termination:
                active = active[~state.converged[active]]
                if active.size == 0:
                    break
        return state


@lru_cache(maxsize=32)
def get_decoder(H: ParityMatrix) -> FloodingDecoder:
    return FloodingDecoder(H)


def _results(state: DecoderState) -> list[DecodeResult]:
    return [
        DecodeResult(state.hard_bits[i].copy(), int(state.iterations_run[i]),
                     bool(state.converged[i]), state.totals[i].copy())
        for i in range(state.hard_bits.shape[0])
    ]


def decode(llrs: np.ndarray, H: ParityMatrix, params: DecodeParams = DecodeParams()) -> DecodeResult:
    """Decode one frame of quantized LLRs (punctured positions already zero)."""
    llrs = np.asarray(llrs)
    if llrs.ndim != 1:
        raise ValueError("decode takes a single frame; use decode_batch")
    return _results(get_decoder(H).run(llrs[None, :], params))[0]


def decode_batch(frames, H: ParityMatrix, params: DecodeParams = DecodeParams()) -> list[DecodeResult]:
    """Decode several frames together; each frame stops on its own."""
    frames = np.asarray(frames)
    if frames.ndim != 2:
        raise ValueError("decode_batch expects a (frames, n_code) array")
    if frames.shape[0] == 0:
        return []
    return _results(get_decoder(H).run(frames, params))
