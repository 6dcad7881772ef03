"""BPSK over AWGN, channel LLRs and 5-bit quantization.

Quantized LLRs are integers in [-15, 15] with an LSB of 0.5, so an offset of
0.5 is exactly one LSB.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

QLLR_MAX = 15
QLLR_LSB = 0.5
QLLR_DTYPE = np.int8


@dataclass(frozen=True)
class ChannelParams:
    ebn0_db: float
    rate: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if not 0 < self.rate <= 1:
            raise ValueError(f"rate must lie in (0, 1], got {self.rate}")

    @property
    def sigma2(self) -> float:
        """Noise variance per real dimension for unit-energy BPSK."""
        return 1.0 / (2.0 * self.rate * 10.0 ** (self.ebn0_db / 10.0))

    @property
    def sigma(self) -> float:
        return float(np.sqrt(self.sigma2))


def make_rng(seed: int, *stream: int) -> np.random.Generator:
    """PCG64 generator for the sub-stream ``stream`` of ``seed``.

    Streams are derived with ``SeedSequence(seed, spawn_key=stream)`` so any
    frame can be regenerated without replaying the ones before it.
    """
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=tuple(stream))))


def modulate(bits: np.ndarray) -> np.ndarray:
    bits = np.asarray(bits)
    return 1.0 - 2.0 * bits.astype(np.float64)


def add_noise(symbols: np.ndarray, p: ChannelParams, rng: np.random.Generator | None = None) -> np.ndarray:
    """y = x + n with n ~ N(0, sigma^2); ``rng`` defaults to ``make_rng(p.seed)``."""
    symbols = np.asarray(symbols, dtype=np.float64)
    if rng is None:
        rng = make_rng(p.seed)
    sigma = p.sigma
    if sigma == 0.0:
        return symbols.copy()
    return symbols + sigma * rng.standard_normal(symbols.shape)


def llr(y: np.ndarray, p: ChannelParams) -> np.ndarray:
    return 2.0 * np.asarray(y, dtype=np.float64) / p.sigma2


def quantize(L) -> np.ndarray:
    """Round half away from zero to the 0.5 grid, then clamp to +-15 LSB."""
    x = np.asarray(L, dtype=np.float64) / QLLR_LSB
    q = np.sign(x) * np.floor(np.abs(x) + 0.5)
    return np.clip(q, -QLLR_MAX, QLLR_MAX).astype(QLLR_DTYPE)


def saturate(x) -> np.ndarray:
    return np.clip(x, -QLLR_MAX, QLLR_MAX)
