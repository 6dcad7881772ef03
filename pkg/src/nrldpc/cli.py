"""Command-line front end.

Exit codes: 0 success, 1 usage/configuration error, 2 validation failure,
3 runtime error.
"""

from __future__ import annotations

import argparse
import random
import sys
from pathlib import Path

import numpy as np

from . import basegraph as bgmod
from .basegraph import BaseGraphError, CodeConfig, ConfigError, expand, standard_lifting_set
from .codec import EncoderSetupError, get_encoder, puncture
from .mscore import DecodeParams
from .perfmodel import CYCLES_PER_ITER, FRAMES_PIPELINED, PerfParams, throughput_vs_z
from .shiftnet import (
    Mode,
    ShiftConfig,
    ShiftConfigError,
    ShiftTrace,
    banyan_variant_cost,
    banyan_variant_shift,
    cyclic_shift_oracle,
    network_costs,
    partitioned_shift,
)
from .sweep import SweepConfig, emit_csv, run_sweep

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_RUNTIME = 0, 1, 2, 3

RATE_ALIASES = {"11/12": 4, "1/2": 24, "1/3": 46}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _global_options(p: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--bg", type=Path, default=d(None), help="base-graph table (default: shipped BG1)")
    p.add_argument("--lifting-set", type=int, choices=range(8), default=d(None), metavar="{0..7}",
                   help="shift column of the table (default: the standard set containing Z)")
    p.add_argument("--seed", type=int, default=d(0), help="RNG seed (u64)")
    p.add_argument("--workers", type=int, default=d(1), help="worker processes")
    p.add_argument("--out", type=Path, default=d(None), help="output file (default: stdout)")


def parse_grid(text: str) -> list[float]:
    """``start:step:stop`` (inclusive) or a comma-separated list."""
    try:
        if ":" in text:
            start, step, stop = (float(x) for x in text.split(":"))
            if step <= 0 or stop < start:
                raise ValueError
            n = int(round((stop - start) / step)) + 1
            return [round(start + i * step, 10) for i in range(n) if start + i * step <= stop + 1e-9]
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad Eb/N0 grid {text!r}; use start:step:stop") from None


def resolve_mb(args) -> int:
    if getattr(args, "rate", None):
        if args.rate in RATE_ALIASES:
            return RATE_ALIASES[args.rate]
        return CodeConfig.for_rate(args.rate, 2).mb
    return args.mb


def resolve_lifting_set(args, Z: int) -> int:
    if args.lifting_set is not None:
        return args.lifting_set
    ls = standard_lifting_set(Z)
    if ls is None:
        raise UsageError(f"Z={Z} is not a standard lifting size; pass --lifting-set explicitly")
    return ls


def load_graph(args):
    return bgmod.load_basegraph(args.bg) if args.bg else bgmod.load_bg1()


def _open_out(args, binary=False):
    if args.out is None:
        return sys.stdout.buffer if binary else sys.stdout
    return open(args.out, "wb" if binary else "w", encoding=None if binary else "utf-8", newline=None)


# -- validate ---------------------------------------------------------------


def cmd_validate(args) -> int:
    path = args.path or args.bg
    try:
        if path:
            with open(path, encoding="utf-8") as fh:
                graph = bgmod.BaseGraph(tuple(bgmod.parse_entries(fh)))
        else:
            graph = bgmod.load_bg1()
    except bgmod.BaseGraphParseError as exc:
        print(f"FAIL parse: {exc}")
        return EXIT_INVALID
    results = graph.check()
    for res in results:
        line = f"{'PASS' if res.ok else 'FAIL'} {res.rule}"
        print(line + (f": {res.detail}" if res.detail else ""))
    ok = all(r.ok for r in results)
    print(f"{len(graph)} entries, {graph.n_sets} lifting set(s): {'valid' if ok else 'INVALID'}")
    return EXIT_OK if ok else EXIT_INVALID


# -- encode -----------------------------------------------------------------


def read_bits(path: Path | None, packed: bool) -> np.ndarray:
    src = sys.stdin.buffer if path is None or str(path) == "-" else open(path, "rb")
    with src:
        data = src.read()
    if packed:
        return np.unpackbits(np.frombuffer(data, dtype=np.uint8))
    text = data.decode("ascii")
    bits = [c for c in text if not c.isspace()]
    if any(c not in "01" for c in bits):
        raise UsageError("ASCII bit files may contain only '0', '1' and whitespace")
    return np.array([c == "1" for c in bits], dtype=np.uint8)


def cmd_encode(args) -> int:
    Z, mb = args.z, resolve_mb(args)
    cfg = CodeConfig(Z=Z, mb=mb, lifting_set=resolve_lifting_set(args, Z))
    H = expand(load_graph(args), cfg)
    bits = read_bits(args.infile, args.packed)
    n_frames, rest = divmod(bits.size, cfg.k)
    if rest and not (args.packed and rest < 8 and not bits[-rest:].any()):
        raise UsageError(f"input holds {bits.size} bits, not a multiple of k={cfg.k}")
    info = bits[: n_frames * cfg.k].reshape(n_frames, cfg.k)
    cw = get_encoder(H).encode(info)
    if args.puncture:
        cw = puncture(cw, cfg)
    if args.packed:
        out = _open_out(args, binary=True)
        out.write(np.packbits(cw.reshape(-1)).tobytes())
    else:
        out = _open_out(args)
        for frame in cw:
            out.write("".join("1" if b else "0" for b in frame) + "\n")
    if out not in (sys.stdout, sys.stdout.buffer):
        out.close()
    print(f"encoded {n_frames} frame(s): k={cfg.k}, n={cw.shape[-1] if n_frames else cfg.n_code}",
          file=sys.stderr)
    return EXIT_OK


# -- ber-sweep --------------------------------------------------------------


def cmd_ber_sweep(args) -> int:
    Z, mb = args.z, resolve_mb(args)
    sc = SweepConfig(
        Z=Z, mb=mb, ebn0_db=args.ebn0, lifting_set=resolve_lifting_set(args, Z),
        bg=load_graph(args), max_frames=args.max_frames,
        max_bit_errors=args.max_bit_errors, max_frame_errors=args.max_frame_errors or None,
        seed=args.seed, workers=args.workers, ebn0_norm=args.ebn0_norm,
        decode=DecodeParams(max_iters=args.max_iters, offset_lsb=args.offset,
                            early_termination=not args.no_early_termination),
    )
    sc.code  # validates Z/mb before any work
    points = run_sweep(sc)
    out = _open_out(args)
    emit_csv(points, out)
    if out is not sys.stdout:
        out.close()
    return EXIT_OK


# -- shiftnet-verify --------------------------------------------------------


def verify_shiftnet(N: int, exhaustive: bool, samples: int, seed: int) -> tuple[int, int]:
    rng = random.Random(seed)
    if exhaustive:
        cases = [(Z, sv) for Z in range(1, N + 1) for sv in range(Z)]
    else:
        cases = [(Z, rng.randrange(Z)) for Z in (rng.randint(1, N) for _ in range(samples))]
    passed = failed = 0
    for Z, sv in cases:
        data = [rng.getrandbits(32) for _ in range(Z)]
        trace = ShiftTrace(0, 0)
        try:
            got = banyan_variant_shift(data, ShiftConfig(N, Z, sv), trace)
            good = got == cyclic_shift_oracle(data, sv) and trace.select_b == [i >= Z - sv for i in range(Z)]
        except RuntimeError:
            good = False
        passed += good
        failed += not good
    return passed, failed


def verify_partitions(seed: int) -> tuple[int, int]:
    rng = random.Random(seed)
    passed = failed = 0
    for mode in (Mode.DUAL_48, Mode.QUAD_24):
        for Z in range(1, mode.width + 1):
            frames = [([rng.getrandbits(16) for _ in range(Z)], rng.randrange(Z)) for _ in range(mode.n_subnets)]
            got = partitioned_shift(frames, mode)
            good = got == [cyclic_shift_oracle(d, sv) for d, sv in frames]
            passed += good
            failed += not good
    return passed, failed


def cmd_shiftnet_verify(args) -> int:
    passed, failed = verify_shiftnet(args.n, args.exhaustive, args.samples, args.seed)
    print(f"banyan-variant N={args.n}: {passed} passed, {failed} failed")
    if args.n == 96:
        p2, f2 = verify_partitions(args.seed)
        print(f"partitioned dual-48/quad-24: {p2} passed, {f2} failed")
        failed += f2
    cost = banyan_variant_cost(args.n)
    print(f"model N={cost.N}: {cost.rotator_stages} rotator stages + {cost.mux_stages} select stage "
          f"= {cost.total_stages} stages, {cost.multiplexers} 2:1 multiplexers")
    p2n = 1 << max(1, (args.n - 1).bit_length())
    print(f"\nclosed forms at N={p2n}:")
    print(f"{'topology':<10}{'muxes':>8}{'stages':>8}")
    for c in network_costs(p2n).values():
        muxes = "-" if c.multiplexer_count < 0 else str(c.multiplexer_count)
        print(f"{c.topology:<10}{muxes:>8}{c.stage_count:>8}")
    return EXIT_OK if failed == 0 else EXIT_INVALID


# -- throughput -------------------------------------------------------------


def cmd_throughput(args) -> int:
    mb = args.mb
    cycles = args.cycles_per_iter or CYCLES_PER_ITER.get(mb)
    if cycles is None:
        raise UsageError(f"no schedule constant for mb={mb}; pass --cycles-per-iter")
    base = PerfParams(f_clk_hz=args.fclk, cycles_per_iter=cycles, max_iters=args.max_iters,
                      frames_pipelined=args.frames_pipelined)
    rows = throughput_vs_z(base, args.z, mb=mb, bits=args.bits)
    out = _open_out(args)
    if args.csv:
        out.write("z,mode,bits_per_frame,frames_in_flight,single_bps,multi_bps\n")
        for r in rows:
            out.write(f"{r.Z},{r.mode.value},{r.bits_per_frame},{r.frames_in_flight},"
                      f"{r.single_bps:.6g},{r.multi_bps:.6g}\n")
    else:
        out.write(f"f_clk={args.fclk / 1e6:g} MHz, {cycles} cycles/iter, {args.max_iters} iterations, "
                  f"{args.frames_pipelined} frames pipelined, bits={args.bits}\n")
        out.write(f"{'Z':>4} {'mode':<10}{'bits':>7}{'frames':>8}{'single Gbps':>13}{'multi Gbps':>12}\n")
        for r in rows:
            out.write(f"{r.Z:>4} {r.mode.value:<10}{r.bits_per_frame:>7}{r.frames_in_flight:>8}"
                      f"{r.single_bps / 1e9:>13.4f}{r.multi_bps / 1e9:>12.4f}\n")
    if out is not sys.stdout:
        out.close()
    return EXIT_OK


def _frequency(text: str) -> float:
    units = {"ghz": 1e9, "mhz": 1e6, "khz": 1e3, "hz": 1.0}
    t = text.strip().lower()
    for u, scale in units.items():
        if t.endswith(u):
            return float(t[: -len(u)]) * scale
    return float(t)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="nrldpc", description="5G NR BG1 offset min-sum decoder model")
    _global_options(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("validate", help="check a base-graph table against the BG1 rules")
    _global_options(p, suppress=True)
    p.add_argument("path", nargs="?", type=Path, help="table to check (default: --bg or shipped BG1)")
    p.set_defaults(func=cmd_validate)

    def code_args(p):
        p.add_argument("--z", type=int, default=96, help="lifting size (1..96)")
        g = p.add_mutually_exclusive_group()
        g.add_argument("--mb", type=int, default=4, help="parity rows used (4..46)")
        g.add_argument("--rate", help="rate alias, e.g. 11/12, 1/2, 1/3")

    p = sub.add_parser("encode", help="encode information bits")
    _global_options(p, suppress=True)
    code_args(p)
    p.add_argument("--in", dest="infile", type=Path, help="input bit file (default: stdin)")
    p.add_argument("--packed", action="store_true", help="raw bytes, MSB first, instead of ASCII 0/1")
    p.add_argument("--puncture", action="store_true", help="drop the first 2Z bits of each codeword")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser(
        "ber-sweep", help="Monte-Carlo BER/FER sweep",
        description="Bit errors are counted on the 22Z information bits, including the 2Z punctured ones.")
    _global_options(p, suppress=True)
    code_args(p)
    p.add_argument("--ebn0", type=parse_grid, required=True, help="Eb/N0 grid in dB, start:step:stop")
    p.add_argument("--ebn0-norm", choices=("info", "tx"), default="info",
                   help="info: Eb per information bit at rate 22/(20+mb); tx: energy per transmitted bit")
    p.add_argument("--max-frames", type=int, default=100_000)
    p.add_argument("--max-bit-errors", type=int, default=None)
    p.add_argument("--max-frame-errors", type=int, default=100, help="0 disables")
    p.add_argument("--max-iters", type=int, default=10)
    p.add_argument("--offset", type=int, default=1, help="offset in LSB (1 LSB = 0.5)")
    p.add_argument("--no-early-termination", action="store_true")
    p.set_defaults(func=cmd_ber_sweep)

    p = sub.add_parser("shiftnet-verify", help="check the shift-network model against cyclic rotation")
    _global_options(p, suppress=True)
    p.add_argument("--n", type=int, default=96, help="network width")
    p.add_argument("--exhaustive", action="store_true", help="all (Z, SV) pairs")
    p.add_argument("--samples", type=int, default=1000, help="random cases when not exhaustive")
    p.set_defaults(func=cmd_shiftnet_verify)

    p = sub.add_parser("throughput", help="analytical throughput table")
    _global_options(p, suppress=True)
    p.add_argument("--fclk", type=_frequency, required=True, help="clock, e.g. 526e6 or 526MHz")
    p.add_argument("--z", type=int, nargs="+", default=[96])
    p.add_argument("--mb", type=int, default=4)
    p.add_argument("--cycles-per-iter", type=int, default=None)
    p.add_argument("--max-iters", type=int, default=10)
    p.add_argument("--frames-pipelined", type=int, default=FRAMES_PIPELINED)
    p.add_argument("--bits", choices=("tx", "info", "code"), default="tx")
    p.add_argument("--csv", action="store_true")
    p.set_defaults(func=cmd_throughput)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ConfigError, ShiftConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BaseGraphError as exc:
        print(f"invalid base graph: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (OSError, EncoderSetupError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
