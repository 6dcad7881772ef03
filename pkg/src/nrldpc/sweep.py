"""Seeded Monte-Carlo BER/FER sweeps.

Frame ``f`` of grid point ``p`` draws its information bits and noise from
``make_rng(seed, p, f)``, so any frame can be reproduced on its own and the
result of a sweep does not depend on how frames are split across workers.
Stopping rules are applied frame by frame in index order; frames simulated
past the stopping point are discarded.
"""

from __future__ import annotations

import csv
import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from fractions import Fraction
from typing import Iterable, TextIO

import numpy as np

from .basegraph import BaseGraph, CodeConfig, expand, load_bg1
from .channel import ChannelParams, add_noise, llr, make_rng, modulate, quantize
from .codec import depuncture_llrs, get_encoder, puncture
from .mscore import DecodeParams, get_decoder

CSV_HEADER = ["rate", "z", "mb", "ebn0_db", "frames", "bit_errors", "frame_errors", "avg_iters", "ber", "fer"]


@dataclass
class SweepConfig:
    Z: int
    mb: int
    ebn0_db: list[float]
    lifting_set: int = 0
    bg: BaseGraph | None = None
    max_frames: int = 100_000
    max_bit_errors: int | None = None
    max_frame_errors: int | None = 100
    seed: int = 0
    workers: int = 1
    ebn0_norm: str = "info"
    decode: DecodeParams = field(default_factory=DecodeParams)
    chunk: int = 32

    def __post_init__(self):
        if not self.ebn0_db:
            raise ValueError("Eb/N0 grid is empty")
        if self.max_frames < 1:
            raise ValueError("max_frames must be positive")
        for name in ("max_bit_errors", "max_frame_errors"):
            v = getattr(self, name)
            if v is not None and v < 1:
                raise ValueError(f"{name} must be positive")
        if self.workers < 1 or self.chunk < 1:
            raise ValueError("workers and chunk must be positive")
        if self.ebn0_norm not in ("info", "tx"):
            raise ValueError(f"unknown Eb/N0 normalization {self.ebn0_norm!r}")

    @property
    def code(self) -> CodeConfig:
        return CodeConfig(Z=self.Z, mb=self.mb, lifting_set=self.lifting_set)

    def channel(self, ebn0_db: float) -> ChannelParams:
        rate = float(self.code.rate) if self.ebn0_norm == "info" else 1.0
        return ChannelParams(ebn0_db=ebn0_db, rate=rate, seed=self.seed)


@dataclass(frozen=True)
class SweepPoint:
    ebn0_db: float
    frames: int
    bit_errors: int
    frame_errors: int
    avg_iterations: float
    k: int
    Z: int = 0
    mb: int = 0

    @property
    def ber(self) -> float:
        return self.bit_errors / (self.frames * self.k) if self.frames else 0.0

    @property
    def fer(self) -> float:
        return self.frame_errors / self.frames if self.frames else 0.0

    @property
    def rate(self) -> Fraction:
        return Fraction(22, 20 + self.mb)


_WORKER_BG: BaseGraph | None = None


def _init_worker(bg: BaseGraph) -> None:
    global _WORKER_BG
    _WORKER_BG = bg


@lru_cache(maxsize=16)
def _expand(bg: BaseGraph, cfg: CodeConfig):
    return expand(bg, cfg)


def simulate_frames(bg: BaseGraph, cfg: CodeConfig, ch: ChannelParams, params: DecodeParams,
                    point: int, frames: range) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per-frame (bit errors, frame error, iterations) for ``frames`` of one grid point."""
    H = _expand(bg, cfg)
    rngs = [make_rng(ch.seed, point, f) for f in frames]
    info = np.array([rng.integers(0, 2, cfg.k, dtype=np.uint8) for rng in rngs]).reshape(-1, cfg.k)
    tx = puncture(get_encoder(H).encode(info), cfg)
    rx = np.array([add_noise(modulate(bits), ch, rng) for bits, rng in zip(tx, rngs)]).reshape(tx.shape)
    q = depuncture_llrs(quantize(llr(rx, ch)), cfg)
    state = get_decoder(H).run(q, params)
    bit_errors = (state.hard_bits[:, : cfg.k] != info).sum(axis=1)
    return bit_errors, bit_errors > 0, state.iterations_run.copy()


def _chunk_job(args):
    cfg, ch, params, point, start, stop = args
    return simulate_frames(_WORKER_BG, cfg, ch, params, point, range(start, stop))


def _point_chunks(sc: SweepConfig, point: int, ch: ChannelParams):
    for start in range(0, sc.max_frames, sc.chunk):
        yield (sc.code, ch, sc.decode, point, start, min(start + sc.chunk, sc.max_frames))


def run_sweep(sc: SweepConfig) -> list[SweepPoint]:
    bg = sc.bg if sc.bg is not None else load_bg1()
    cfg = sc.code
    grid = sorted(enumerate(sc.ebn0_db), key=lambda t: t[1])
    points = []
    pool = ProcessPoolExecutor(sc.workers, initializer=_init_worker, initargs=(bg,)) if sc.workers > 1 else None
    if pool is None:
        _init_worker(bg)
    try:
        for point, ebn0 in grid:
            ch = sc.channel(ebn0)
            frames = bit_errors = frame_errors = iters = 0
            done = False
            chunks = _point_chunks(sc, point, ch)
            while not done:
                wave = [job for _, job in zip(range(sc.workers), chunks)]
                if not wave:
                    break
                results = pool.map(_chunk_job, wave) if pool else map(_chunk_job, wave)
                for be, fe, it in results:
                    for b, f, i in zip(be, fe, it):
                        frames += 1
                        bit_errors += int(b)
                        frame_errors += int(f)
                        iters += int(i)
                        if (sc.max_bit_errors is not None and bit_errors >= sc.max_bit_errors) or \
                                (sc.max_frame_errors is not None and frame_errors >= sc.max_frame_errors):
                            done = True
                            break
                    if done:
                        break
            points.append(SweepPoint(ebn0, frames, bit_errors, frame_errors,
                                     iters / frames if frames else 0.0, cfg.k, cfg.Z, cfg.mb))
    finally:
        if pool is not None:
            pool.shutdown(cancel_futures=True)
    return points


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def emit_csv(points: Iterable[SweepPoint], destination: TextIO) -> None:
    w = csv.writer(destination, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for p in sorted(points, key=lambda p: p.ebn0_db):
        w.writerow([str(p.rate), p.Z, p.mb, _fmt(p.ebn0_db), p.frames, p.bit_errors, p.frame_errors,
                    _fmt(p.avg_iterations), _fmt(p.ber), _fmt(p.fer)])


def csv_text(points: Iterable[SweepPoint]) -> str:
    buf = io.StringIO()
    emit_csv(points, buf)
    return buf.getvalue()


def parse_csv(source: TextIO) -> list[dict]:
    rows = []
    for rec in csv.DictReader(source):
        rows.append({
            "rate": Fraction(rec["rate"]),
            "z": int(rec["z"]),
            "mb": int(rec["mb"]),
            "ebn0_db": float(rec["ebn0_db"]),
            "frames": int(rec["frames"]),
            "bit_errors": int(rec["bit_errors"]),
            "frame_errors": int(rec["frame_errors"]),
            "avg_iters": float(rec["avg_iters"]),
            "ber": float(rec["ber"]),
            "fer": float(rec["fer"]),
        })
    return rows
