"""Systematic encoding and puncturing for the lifted base graph.

Codeword layout is ``[info (22Z) | core parity (4Z) | extension parity ((mb-4)Z)]``.
The core parity solves the 4Z x 4Z system of base rows 0..3 by a GF(2)
inverse computed once per parity matrix.  Each extension row has a single
degree-1 parity column, so its parity block is the XOR of that row's other
connections.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .basegraph import N_CORE_COLS, N_CORE_ROWS, N_INFO_COLS, CodeConfig, ParityMatrix


class EncoderSetupError(RuntimeError):
    pass


def gf2_inverse(A: np.ndarray) -> np.ndarray:
    """Inverse of a square binary matrix over GF(2) (Gauss-Jordan).

    Raises ``np.linalg.LinAlgError`` if ``A`` is singular.
    """
    n = A.shape[0]
    M = np.concatenate([A.astype(bool), np.eye(n, dtype=bool)], axis=1)
    for col in range(n):
        pivots = np.flatnonzero(M[col:, col])
        if pivots.size == 0:
            raise np.linalg.LinAlgError(f"singular over GF(2) at column {col}")
        p = col + pivots[0]
        if p != col:
            M[[col, p]] = M[[p, col]]
        hits = M[:, col].copy()
        hits[col] = False
        M[hits] ^= M[col]
    return M[:, n:].astype(np.uint8)


class Encoder:
    """Encoder bound to one expanded parity matrix; immutable after setup."""

    def __init__(self, H: ParityMatrix):
        self.H = H
        Z = H.Z
        core_blocks = [b for b, (r, c, _) in enumerate(H.blocks)
                       if r < N_CORE_ROWS and N_INFO_COLS <= c < N_CORE_COLS]
        core = np.zeros((N_CORE_ROWS * Z, N_CORE_ROWS * Z), dtype=np.uint8)
        lanes = np.arange(Z)
        for b in core_blocks:
            r = H.blocks[b][0]
            core[r * Z + lanes, H.cols[b] - N_INFO_COLS * Z] = 1
        try:
            self._core_inv = gf2_inverse(core)
        except np.linalg.LinAlgError as exc:
            cfg = H.cfg
            raise EncoderSetupError(
                f"core parity system is singular for Z={cfg.Z}, lifting set {cfg.lifting_set}"
            ) from exc
        self._info_blocks = [b for b, (r, c, _) in enumerate(H.blocks)
                             if r < N_CORE_ROWS and c < N_INFO_COLS]
        self._ext_rows = []
        for r in range(N_CORE_ROWS, H.cfg.mb):
            blocks = H.row_blocks(r)
            ext = [b for b in blocks if H.blocks[b][1] >= N_CORE_COLS]
            rest = [b for b in blocks if H.blocks[b][1] < N_CORE_COLS]
            self._ext_rows.append((ext[0], rest))

    @property
    def cfg(self) -> CodeConfig:
        return self.H.cfg

    def encode(self, info: np.ndarray) -> np.ndarray:
        """Encode one frame (shape ``(k,)``) or a batch (shape ``(B, k)``)."""
        info = np.asarray(info, dtype=np.uint8)
        cfg, H, Z = self.cfg, self.H, self.H.Z
        if info.shape[-1] != cfg.k:
            raise ValueError(f"expected {cfg.k} information bits, got {info.shape[-1]}")
        if np.any(info > 1):
            raise ValueError("information bits must be 0 or 1")
        batch = info.shape[:-1]
        cw = np.zeros(batch + (cfg.n_code,), dtype=np.uint8)
        cw[..., : cfg.k] = info

        syn = np.zeros(batch + (N_CORE_ROWS, Z), dtype=np.uint8)
        for b in self._info_blocks:
            syn[..., H.blocks[b][0], :] ^= info[..., H.cols[b]]
        syn = syn.reshape(batch + (N_CORE_ROWS * Z,))
        core = (syn.astype(np.int64) @ self._core_inv.T.astype(np.int64)) & 1
        cw[..., cfg.k: N_CORE_COLS * Z] = core

        for ext, rest in self._ext_rows:
            acc = np.zeros(batch + (Z,), dtype=np.uint8)
            for b in rest:
                acc ^= cw[..., H.cols[b]]
            cw[..., H.cols[ext]] = acc
        return cw


@lru_cache(maxsize=64)
def get_encoder(H: ParityMatrix) -> Encoder:
    return Encoder(H)


def encode(info: np.ndarray, H: ParityMatrix, cfg: CodeConfig | None = None) -> np.ndarray:
    if cfg is not None and cfg != H.cfg:
        raise ValueError("configuration does not match the parity matrix")
    return get_encoder(H).encode(info)


def puncture(codeword: np.ndarray, cfg: CodeConfig) -> np.ndarray:
    codeword = np.asarray(codeword)
    if codeword.shape[-1] != cfg.n_code:
        raise ValueError(f"expected codeword length {cfg.n_code}, got {codeword.shape[-1]}")
    return codeword[..., cfg.n_punctured:]


def depuncture_llrs(rx: np.ndarray, cfg: CodeConfig) -> np.ndarray:
    """Prepend 2Z zero LLRs (erasures) for the punctured columns."""
    rx = np.asarray(rx)
    if rx.shape[-1] != cfg.n_tx:
        raise ValueError(f"expected {cfg.n_tx} received LLRs, got {rx.shape[-1]}")
    pad = np.zeros(rx.shape[:-1] + (cfg.n_punctured,), dtype=rx.dtype)
    return np.concatenate([pad, rx], axis=-1)
