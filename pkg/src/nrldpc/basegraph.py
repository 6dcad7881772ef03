"""Quasi-cyclic base graph loading, validation and lifting.

The base graph is stored sparsely as ``(row, col) -> shifts`` where ``shifts``
holds one coefficient per lifting set (8 for the standard BG1 table, or a
single value for hand-made graphs).  Lifting replaces every entry with the
circulant ``P^s`` where ``P^s[i, j] = 1`` iff ``j == (i + s) % Z``.
"""

from __future__ import annotations

import io
import os
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Iterable, TextIO

import numpy as np

N_ROWS = 46
N_COLS = 68
N_INFO_COLS = 22
N_CORE_ROWS = 4
N_CORE_COLS = 26
N_PUNCTURED_COLS = 2
Z_MAX = 96

# 3GPP TS 38.212 Table 5.3.2-1: lifting set index -> base value a, Z = a * 2^j
LIFTING_SET_BASES = (2, 3, 5, 7, 9, 11, 13, 15)


class BaseGraphError(ValueError):
    """Base class for base-graph problems."""


class BaseGraphParseError(BaseGraphError):
    def __init__(self, lineno: int, msg: str):
        super().__init__(f"line {lineno}: {msg}")
        self.lineno = lineno


class BaseGraphValidationError(BaseGraphError):
    def __init__(self, rule: str, msg: str):
        super().__init__(f"{rule}: {msg}")
        self.rule = rule


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class BaseGraphEntry:
    row: int
    col: int
    shifts: tuple[int, ...]

    def shift(self, lifting_set: int = 0) -> int:
        if len(self.shifts) == 1:
            return self.shifts[0]
        return self.shifts[lifting_set]


@dataclass(frozen=True)
class InvariantResult:
    rule: str
    ok: bool
    detail: str = ""


@dataclass(frozen=True)
class BaseGraph:
    entries: tuple[BaseGraphEntry, ...]
    n_rows: int = N_ROWS
    n_cols: int = N_COLS
    n_info_cols: int = N_INFO_COLS
    _index: dict = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        index = {}
        for e in self.entries:
            index.setdefault((e.row, e.col), e)
        object.__setattr__(self, "_index", index)

    def __len__(self) -> int:
        return len(self.entries)

    def get(self, row: int, col: int) -> BaseGraphEntry | None:
        return self._index.get((row, col))

    def row_entries(self, row: int) -> list[BaseGraphEntry]:
        return sorted((e for e in self.entries if e.row == row), key=lambda e: e.col)

    @property
    def n_sets(self) -> int:
        return max((len(e.shifts) for e in self.entries), default=1)

    def check(self) -> list[InvariantResult]:
        """Evaluate every structural rule; never raises."""
        results = []

        bad = [e for e in self.entries if not (0 <= e.row < self.n_rows and 0 <= e.col < self.n_cols)]
        results.append(InvariantResult(
            "index range", not bad,
            "" if not bad else f"entry ({bad[0].row},{bad[0].col}) outside {self.n_rows}x{self.n_cols}"))

        neg = [e for e in self.entries if any(s < 0 for s in e.shifts)]
        results.append(InvariantResult(
            "nonnegative shift", not neg,
            "" if not neg else f"entry ({neg[0].row},{neg[0].col}) has a negative shift"))

        seen, dups = set(), []
        for e in self.entries:
            if (e.row, e.col) in seen:
                dups.append(e)
            seen.add((e.row, e.col))
        results.append(InvariantResult(
            "unique entry", not dups,
            "" if not dups else f"duplicate entry ({dups[0].row},{dups[0].col})"))

        problems = []
        for r in range(N_CORE_ROWS, self.n_rows):
            ext = [e for e in self.entries if e.row == r and e.col >= N_CORE_COLS]
            if len(ext) != 1 or ext[0].col != N_INFO_COLS + r:
                cols = sorted(e.col for e in ext)
                problems.append(f"row {r} has extension columns {cols}, expected [{N_INFO_COLS + r}]")
        results.append(InvariantResult(
            "extension row degree", not problems, "; ".join(problems[:3])))

        nonzero = [e for e in self.entries
                   if e.row >= N_CORE_ROWS and e.col >= N_CORE_COLS and any(s != 0 for s in e.shifts)]
        results.append(InvariantResult(
            "extension shift zero", not nonzero,
            "" if not nonzero else f"entry ({nonzero[0].row},{nonzero[0].col}) has shift {nonzero[0].shifts}"))

        core_ext = [e for e in self.entries if e.row < N_CORE_ROWS and e.col >= N_CORE_COLS]
        results.append(InvariantResult(
            "core rows confined", not core_ext,
            "" if not core_ext else f"entry ({core_ext[0].row},{core_ext[0].col}) lies in the extension"))

        widths = {len(e.shifts) for e in self.entries}
        results.append(InvariantResult(
            "consistent shift sets", len(widths) <= 1,
            "" if len(widths) <= 1 else f"entries carry {sorted(widths)} shift values"))
        return results

    def validate(self) -> None:
        for res in self.check():
            if not res.ok:
                raise BaseGraphValidationError(res.rule, res.detail)


def parse_entries(lines: Iterable[str]) -> list[BaseGraphEntry]:
    entries = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if not 3 <= len(fields) <= 10:
            raise BaseGraphParseError(lineno, f"expected 'r c s0 [s1 .. s7]', got {len(fields)} fields")
        try:
            values = [int(f, 10) for f in fields]
        except ValueError:
            raise BaseGraphParseError(lineno, f"non-integer field in {line!r}") from None
        r, c, *shifts = values
        entries.append(BaseGraphEntry(r, c, tuple(shifts)))
    return entries


def load_basegraph(source: TextIO | str | os.PathLike) -> BaseGraph:
    """Parse a ``r c s0 [s1 .. s7]`` table and validate it.

    ``source`` may be an open text stream or a path.
    """
    if isinstance(source, (str, os.PathLike)):
        with open(source, encoding="utf-8") as fh:
            entries = parse_entries(fh)
    else:
        entries = parse_entries(source)
    bg = BaseGraph(tuple(entries))
    bg.validate()
    return bg


def load_bg1() -> BaseGraph:
    """The shipped BG1 table (all eight lifting sets)."""
    text = resources.files("nrldpc").joinpath("data/bg1.txt").read_text(encoding="utf-8")
    return load_basegraph(io.StringIO(text))


def standard_lifting_set(Z: int) -> int | None:
    """Index of the standard lifting set containing ``Z``, or None."""
    for i, a in enumerate(LIFTING_SET_BASES):
        z = a
        while z <= 384:
            if z == Z:
                return i
            z *= 2
    return None


@dataclass(frozen=True)
class CodeConfig:
    Z: int
    mb: int = N_CORE_ROWS
    lifting_set: int = 0

    def __post_init__(self):
        if not 1 <= self.Z <= Z_MAX:
            raise ConfigError(f"lifting size Z={self.Z} outside 1..{Z_MAX}")
        if not N_CORE_ROWS <= self.mb <= N_ROWS:
            raise ConfigError(f"mb={self.mb} outside {N_CORE_ROWS}..{N_ROWS}")
        if not 0 <= self.lifting_set < len(LIFTING_SET_BASES):
            raise ConfigError(f"lifting set {self.lifting_set} outside 0..7")

    @property
    def k(self) -> int:
        return N_INFO_COLS * self.Z

    @property
    def n_cols_used(self) -> int:
        return N_INFO_COLS + self.mb

    @property
    def n_code(self) -> int:
        return self.n_cols_used * self.Z

    @property
    def n_tx(self) -> int:
        return (self.n_cols_used - N_PUNCTURED_COLS) * self.Z

    @property
    def n_punctured(self) -> int:
        return N_PUNCTURED_COLS * self.Z

    @property
    def rate(self) -> Fraction:
        return Fraction(N_INFO_COLS, self.n_cols_used - N_PUNCTURED_COLS)

    @classmethod
    def for_rate(cls, rate: str | Fraction, Z: int, lifting_set: int = 0) -> "CodeConfig":
        """Resolve a rate alias such as ``"1/2"`` to the matching mb."""
        r = Fraction(rate)
        if r <= 0:
            raise ConfigError(f"invalid rate {rate}")
        mb = Fraction(N_INFO_COLS) / r - N_INFO_COLS + N_PUNCTURED_COLS
        if mb.denominator != 1 or not N_CORE_ROWS <= mb <= N_ROWS:
            raise ConfigError(f"rate {rate} is not 22/(20+mb) for any mb in 4..46")
        return cls(Z=Z, mb=int(mb), lifting_set=lifting_set)


def code_lengths(cfg: CodeConfig) -> tuple[int, int, int, Fraction]:
    return cfg.k, cfg.n_code, cfg.n_tx, cfg.rate


@dataclass(frozen=True, eq=False)
class ParityMatrix:
    """Expanded binary parity-check matrix in block-sparse form.

    ``blocks`` lists ``(base_row, base_col, shift)`` with the shift already
    reduced mod Z, ordered row-major by base row and then base column.
    ``cols[b, i]`` is the expanded column hit by lane ``i`` of block ``b``,
    i.e. the single 1 in expanded row ``base_row * Z + i``.
    """

    cfg: CodeConfig
    blocks: tuple[tuple[int, int, int], ...]
    cols: np.ndarray

    @property
    def Z(self) -> int:
        return self.cfg.Z

    @property
    def n_rows(self) -> int:
        return self.cfg.mb * self.cfg.Z

    @property
    def n_cols(self) -> int:
        return self.cfg.n_code

    @property
    def shape(self) -> tuple[int, int]:
        return self.n_rows, self.n_cols

    @property
    def block_rows(self) -> np.ndarray:
        return np.array([b[0] for b in self.blocks], dtype=np.int64)

    @property
    def block_cols(self) -> np.ndarray:
        return np.array([b[1] for b in self.blocks], dtype=np.int64)

    def row_blocks(self, base_row: int) -> list[int]:
        return [i for i, b in enumerate(self.blocks) if b[0] == base_row]

    def row_support(self, row: int) -> list[int]:
        """Sorted column indices of expanded row ``row``."""
        r, lane = divmod(row, self.Z)
        return sorted(int(self.cols[b, lane]) for b in self.row_blocks(r))

    def syndrome(self, bits: np.ndarray) -> np.ndarray:
        """H @ bits over GF(2); ``bits`` may carry leading batch axes."""
        bits = np.asarray(bits, dtype=np.uint8)
        gathered = bits[..., self.cols]  # (..., n_blocks, Z)
        out = np.zeros(bits.shape[:-1] + (self.cfg.mb, self.Z), dtype=np.uint8)
        for b, (r, _, _) in enumerate(self.blocks):
            out[..., r, :] ^= gathered[..., b, :]
        return out.reshape(bits.shape[:-1] + (self.n_rows,))

    def to_dense(self) -> np.ndarray:
        H = np.zeros(self.shape, dtype=np.uint8)
        lanes = np.arange(self.Z)
        for b, (r, _, _) in enumerate(self.blocks):
            H[r * self.Z + lanes, self.cols[b]] = 1
        return H


def circulant_cols(shift: int, Z: int) -> np.ndarray:
    return (np.arange(Z) + shift) % Z


def expand(bg: BaseGraph, cfg: CodeConfig) -> ParityMatrix:
    """Lift the first ``cfg.mb`` rows of ``bg`` with lifting size ``cfg.Z``."""
    if cfg.lifting_set >= bg.n_sets and bg.n_sets > 1:
        raise ConfigError(f"lifting set {cfg.lifting_set} not present in base graph")
    used = sorted(
        (e for e in bg.entries if e.row < cfg.mb and e.col < cfg.n_cols_used),
        key=lambda e: (e.row, e.col),
    )
    blocks = []
    cols = np.empty((len(used), cfg.Z), dtype=np.int64)
    for b, e in enumerate(used):
        s = e.shift(cfg.lifting_set) % cfg.Z
        blocks.append((e.row, e.col, s))
        cols[b] = e.col * cfg.Z + circulant_cols(s, cfg.Z)
    cols.setflags(write=False)
    return ParityMatrix(cfg, tuple(blocks), cols)
