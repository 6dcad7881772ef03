"""Cyclic shift network models.

``banyan_variant_shift`` evaluates the two-rotator construction stage by
stage: rotator A rotates all N lanes by SV, rotator B by SV + (N - Z), and a
final multiplexer row picks A for lanes ``i < Z - SV`` and B otherwise.  Each
rotator is a cascade of ceil(log2 N) conditional fixed rotations (by 2^k when
bit k of its amount is set), which keeps stages and switches countable for
non power-of-two widths such as 96.

Shift convention, shared with the circulant lifting: ``out[i] = in[(i + SV) % Z]``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Any, Sequence

Z_MAX = 96


class ShiftConfigError(ValueError):
    pass


class DontCare:
    """Payload of an inactive lane; any comparison or arithmetic on it fails."""

    __slots__ = ()

    def __repr__(self) -> str:
        return "DONT_CARE"

    def _poison(self, *_: Any):
        raise RuntimeError("inactive shift-network lane was routed to an output")

    __eq__ = __ne__ = __lt__ = __le__ = __gt__ = __ge__ = _poison
    __add__ = __radd__ = __sub__ = __rsub__ = __abs__ = __neg__ = __bool__ = _poison
    __hash__ = object.__hash__


DONT_CARE = DontCare()


class Mode(str, enum.Enum):
    SINGLE_96 = "single-96"
    DUAL_48 = "dual-48"
    QUAD_24 = "quad-24"

    @property
    def n_subnets(self) -> int:
        return {Mode.SINGLE_96: 1, Mode.DUAL_48: 2, Mode.QUAD_24: 4}[self]

    @property
    def width(self) -> int:
        return Z_MAX // self.n_subnets


def mode_for(Z: int) -> Mode:
    """Widest parallelism the lifting size allows."""
    if not 1 <= Z <= Z_MAX:
        raise ShiftConfigError(f"Z={Z} outside 1..{Z_MAX}")
    if Z <= Z_MAX // 4:
        return Mode.QUAD_24
    if Z <= Z_MAX // 2:
        return Mode.DUAL_48
    return Mode.SINGLE_96


@dataclass(frozen=True)
class ShiftConfig:
    N: int
    Z: int
    SV: int
    mode: Mode = Mode.SINGLE_96

    def __post_init__(self):
        if self.N < 1:
            raise ShiftConfigError(f"network width {self.N} must be positive")
        if not 1 <= self.Z <= self.N:
            raise ShiftConfigError(f"active lanes Z={self.Z} outside 1..N={self.N}")
        if not 0 <= self.SV < self.Z:
            raise ShiftConfigError(f"shift value {self.SV} outside 0..Z-1={self.Z - 1}")
        if self.Z > Mode(self.mode).width:
            raise ShiftConfigError(f"Z={self.Z} too large for mode {Mode(self.mode).value}")


def cyclic_shift_oracle(data: Sequence, SV: int) -> list:
    Z = len(data)
    return [data[(i + SV) % Z] for i in range(Z)]


def rotator_stages(N: int) -> int:
    return max(1, math.ceil(math.log2(N))) if N > 1 else 0


def rotate(lanes: Sequence, amount: int) -> list:
    """Full-width left rotation through the conditional-rotation cascade."""
    N = len(lanes)
    out = list(lanes)
    amount %= N
    for k in range(rotator_stages(N)):
        if amount >> k & 1:
            step = (1 << k) % N
            out = out[step:] + out[:step]
    return out


@dataclass
class ShiftTrace:
    """Instrumentation of one structural evaluation."""

    rotation_a: int
    rotation_b: int
    select_b: list[bool] = field(default_factory=list)


def banyan_variant_shift(data: Sequence, cfg: ShiftConfig, trace: ShiftTrace | None = None) -> list:
    """Shift ``data`` (Z active items) through the N-lane two-rotator network."""
    N, Z, SV = cfg.N, cfg.Z, cfg.SV
    if len(data) != Z:
        raise ShiftConfigError(f"expected {Z} active items, got {len(data)}")
    lanes = list(data) + [DONT_CARE] * (N - Z)
    amount_a = SV
    amount_b = SV + (N - Z)
    out_a = rotate(lanes, amount_a)
    out_b = rotate(lanes, amount_b)
    select_b = [i >= Z - SV for i in range(Z)]
    if trace is not None:
        trace.rotation_a, trace.rotation_b, trace.select_b = amount_a, amount_b, select_b
    return [out_b[i] if select_b[i] else out_a[i] for i in range(Z)]


def partitioned_shift(frames: Sequence[tuple[Sequence, int]], mode: Mode | str) -> list[list]:
    """Run one independent sub-network per frame; all frames share one Z."""
    mode = Mode(mode)
    if len(frames) != mode.n_subnets:
        raise ShiftConfigError(f"mode {mode.value} takes {mode.n_subnets} frames, got {len(frames)}")
    sizes = {len(d) for d, _ in frames}
    if len(sizes) != 1:
        raise ShiftConfigError(f"sub-networks must share one lifting size, got {sorted(sizes)}")
    return [
        banyan_variant_shift(data, ShiftConfig(mode.width, len(data), sv, mode))
        for data, sv in frames
    ]


@dataclass(frozen=True)
class NetworkCost:
    topology: str
    multiplexer_count: int
    stage_count: int


def network_costs(N: int) -> dict[str, NetworkCost]:
    """Closed-form multiplexer/stage counts; N must be a power of two.

    QSN has no closed-form multiplexer count here (reported as -1).
    """
    if N < 2 or N & (N - 1):
        raise ValueError(f"closed forms need a power-of-two N, got {N}")
    lg = N.bit_length() - 1
    return {
        "benes": NetworkCost("benes", 2 * N * lg - N, 2 * lg - 1),
        "banyan": NetworkCost("banyan", N * lg, lg),
        "qsn": NetworkCost("qsn", -1, lg + 1),
    }


@dataclass(frozen=True)
class StructuralCost:
    N: int
    rotator_stages: int
    mux_stages: int
    multiplexers: int

    @property
    def total_stages(self) -> int:
        return self.rotator_stages + self.mux_stages


def banyan_variant_cost(N: int) -> StructuralCost:
    """Counts for the modelled network: two rotators plus one select row."""
    s = rotator_stages(N)
    return StructuralCost(N, s, 1, 2 * s * N + N)
