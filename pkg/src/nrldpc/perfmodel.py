"""Worst-case throughput arithmetic for the multi-frame decoder.

throughput = f_clk * frames_pipelined * frames_parallel * bits_per_frame
             / (cycles_per_iter * max_iters)

Every frame is charged ``max_iters`` iterations; early termination is not
credited.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .basegraph import CodeConfig
from .shiftnet import Mode, mode_for

# Clock cycles per iteration by number of parity rows; only the mother code is known.
CYCLES_PER_ITER = {4: 18}
FRAMES_PIPELINED = 2


@dataclass(frozen=True)
class PerfParams:
    f_clk_hz: float
    cycles_per_iter: int = CYCLES_PER_ITER[4]
    max_iters: int = 10
    frames_pipelined: int = FRAMES_PIPELINED
    frames_parallel: int = 1
    bits_per_frame: int = 2304

    def __post_init__(self):
        if self.f_clk_hz <= 0:
            raise ValueError(f"clock frequency must be positive, got {self.f_clk_hz}")
        for name in ("cycles_per_iter", "max_iters", "frames_pipelined", "bits_per_frame"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.frames_parallel not in (1, 2, 4):
            raise ValueError(f"frames_parallel must be 1, 2 or 4, got {self.frames_parallel}")


def bits_per_frame(cfg: CodeConfig, bits: str = "tx") -> int:
    return {"tx": cfg.n_tx, "info": cfg.k, "code": cfg.n_code}[bits]


def throughput_bps(p: PerfParams) -> float:
    denom = p.cycles_per_iter * p.max_iters
    if p.f_clk_hz == 0 or denom == 0:
        raise ZeroDivisionError("degenerate throughput parameters")
    return p.f_clk_hz * p.frames_pipelined * p.frames_parallel * p.bits_per_frame / denom


def frames_in_flight(p: PerfParams) -> int:
    return p.frames_pipelined * p.frames_parallel


@dataclass(frozen=True)
class ThroughputRow:
    Z: int
    mode: Mode
    bits_per_frame: int
    frames_in_flight: int
    single_bps: float
    multi_bps: float


def throughput_vs_z(p: PerfParams, Z_list, mb: int = 4, bits: str = "tx") -> list[ThroughputRow]:
    """Throughput per lifting size with and without sub-network parallelism."""
    rows = []
    for Z in Z_list:
        mode = mode_for(Z)
        nbits = bits_per_frame(CodeConfig(Z=Z, mb=mb), bits)
        single = replace(p, frames_parallel=1, bits_per_frame=nbits)
        multi = replace(single, frames_parallel=mode.n_subnets)
        rows.append(ThroughputRow(Z, mode, nbits, frames_in_flight(multi),
                                  throughput_bps(single), throughput_bps(multi)))
    return rows
