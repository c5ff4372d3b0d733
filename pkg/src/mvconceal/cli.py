"""Command-line front end.

Subcommands: estimate (ground-truth MV fields), inject (loss maps),
conceal (one frame, one algorithm), bench (full benchmark with CSV
output), dump (per-frame damaged/reconstructed images). All outputs
land under --out. Exit codes: 0 success, 1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .bench import (BenchConfig, REF_CLEAN, REF_PROPAGATE, format_tables,
                    psnr_luma, report_to_csv, run_benchmark)
from .conceal import ALGORITHMS, conceal_frame
from .frame_io import FormatError, Sequence, load_yuv, save_pgm, save_yuv
from .loss import apply_loss, damage_frame, generate_loss_map, save_loss_map
from .motion import MvField, estimate_field, save_field

MB = 16


class UsageError(Exception):
    """Bad flags or flag values; maps to exit code 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _mb_dim(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer")
    if value <= 0 or value % MB:
        raise argparse.ArgumentTypeError(
            f"dimensions must be positive multiples of {MB}, got {value}")
    return value


def _rate(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a number")
    if not 0.0 < value <= 1.0:
        raise argparse.ArgumentTypeError(f"rate must be in (0, 1], got {value}")
    return value


def _algo_list(text: str) -> list[str]:
    if text == "all":
        return list(ALGORITHMS)
    names = [name.strip() for name in text.split(",") if name.strip()]
    for name in names:
        if name not in ALGORITHMS:
            raise argparse.ArgumentTypeError(
                f"unknown algorithm {name!r}; valid: {', '.join(ALGORITHMS)}")
    if not names:
        raise argparse.ArgumentTypeError("empty algorithm list")
    return names


def _add_dims(sp, with_input=True):
    if with_input:
        sp.add_argument("--input", required=True, help="raw I420 .yuv file")
    sp.add_argument("--width", type=_mb_dim, required=True)
    sp.add_argument("--height", type=_mb_dim, required=True)


def _add_common(sp, frames_default=None):
    sp.add_argument("--frames", type=int, default=frames_default,
                    help="number of frames to use (default: all)")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--p", type=int, default=7, help="full-search range")
    sp.add_argument("--out", default=".", help="output directory")


def parse_args(argv) -> argparse.Namespace:
    """Parse argv into a validated command; raises UsageError."""
    parser = _Parser(prog="mvconceal",
                     description="motion-vector recovery benchmark tool")
    subs = parser.add_subparsers(dest="command", required=True,
                                 parser_class=_Parser)

    sp = subs.add_parser("estimate", help="write ground-truth MV fields")
    _add_dims(sp)
    _add_common(sp)

    sp = subs.add_parser("inject", help="write seeded loss maps")
    _add_dims(sp, with_input=False)
    sp.add_argument("--rate", type=_rate, required=True)
    sp.add_argument("--trials", type=int, default=20)
    _add_common(sp, frames_default=2)

    sp = subs.add_parser("conceal", help="conceal the last loaded frame")
    _add_dims(sp)
    sp.add_argument("--rate", type=_rate, required=True)
    sp.add_argument("--algo", type=_algo_list, required=True,
                    help="one algorithm name")
    _add_common(sp)

    sp = subs.add_parser("bench", help="run the full benchmark")
    _add_dims(sp)
    sp.add_argument("--rate", type=_rate, required=True)
    sp.add_argument("--algo", type=_algo_list, default=list(ALGORITHMS),
                    help="comma-separated algorithm names (default: all)")
    sp.add_argument("--trials", type=int, default=20)
    sp.add_argument("--ref", choices=(REF_CLEAN, REF_PROPAGATE),
                    default=REF_CLEAN)
    _add_common(sp)

    sp = subs.add_parser("dump", help="write damaged/reconstructed frames")
    _add_dims(sp)
    sp.add_argument("--rate", type=_rate, required=True)
    sp.add_argument("--algo", type=_algo_list, required=True,
                    help="one algorithm name")
    _add_common(sp)

    args = parser.parse_args(argv)
    if args.command in ("conceal", "dump") and len(args.algo) != 1:
        raise UsageError(f"{args.command} takes exactly one --algo name")
    if args.command in ("bench", "estimate", "conceal", "dump"):
        if args.frames is not None and args.frames < 2:
            raise UsageError("--frames must be at least 2")
    if args.command in ("inject", "bench") and args.trials < 1:
        raise UsageError("--trials must be at least 1")
    return args


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _cmd_estimate(args) -> int:
    seq = load_yuv(args.input, args.width, args.height, args.frames)
    if len(seq) < 2:
        raise FormatError("estimate needs at least 2 frames")
    out = _out_dir(args)
    for n in range(1, len(seq)):
        field = estimate_field(seq[n], seq[n - 1], args.p)
        save_field(field, out / f"field_f{n:04d}.txt")
    print(f"wrote {len(seq) - 1} MV field file(s) under {out}")
    return 0


def _cmd_inject(args) -> int:
    cols, rows = args.width // MB, args.height // MB
    out = _out_dir(args)
    count = 0
    for trial in range(args.trials):
        for n in range(1, args.frames):
            lmap = generate_loss_map(cols, rows, args.rate,
                                     (args.seed, trial, n))
            save_loss_map(lmap, out / f"loss_t{trial:02d}_f{n:04d}.txt")
            count += 1
    print(f"wrote {count} loss map(s) under {out}")
    return 0


def _conceal_one(seq, n, algorithm, rate, seed, p):
    cols, rows = seq.width // MB, seq.height // MB
    field = estimate_field(seq[n], seq[n - 1], p)
    if n >= 2:
        prev_field = estimate_field(seq[n - 1], seq[n - 2], p)
    else:
        prev_field = MvField.zeros(cols, rows)
    lmap = generate_loss_map(cols, rows, rate, (seed, 0, n))
    damaged_field = apply_loss(field, lmap)
    damaged = damage_frame(seq[n], lmap)
    recon, out_field = conceal_frame(algorithm, damaged, seq[n - 1],
                                     damaged_field, prev_field, lmap)
    return damaged, recon, out_field, lmap


def _cmd_conceal(args) -> int:
    seq = load_yuv(args.input, args.width, args.height, args.frames)
    if len(seq) < 2:
        raise FormatError("conceal needs at least 2 frames")
    algorithm = args.algo[0]
    n = len(seq) - 1
    damaged, recon, out_field, lmap = _conceal_one(
        seq, n, algorithm, args.rate, args.seed, args.p)
    out = _out_dir(args)
    save_yuv(Sequence(seq.width, seq.height, [damaged]), out / "damaged.yuv")
    save_yuv(Sequence(seq.width, seq.height, [recon]), out / "reconstructed.yuv")
    save_pgm(damaged.y, out / "damaged.pgm")
    save_pgm(recon.y, out / "reconstructed.pgm")
    save_field(out_field, out / "field.txt")
    save_loss_map(lmap, out / "loss.txt")
    psnr = psnr_luma(seq[n], recon)
    print(f"frame {n}: algorithm={algorithm} lost={lmap.count()} "
          f"psnr_db={psnr:.4f}")
    return 0


def _cmd_bench(args) -> int:
    cfg = BenchConfig(
        path=args.input, width=args.width, height=args.height,
        frame_count=args.frames, rates=(args.rate,),
        algorithms=tuple(args.algo), trials=args.trials, seed=args.seed,
        p=args.p, reference_mode=args.ref)
    report = run_benchmark(cfg)
    out = _out_dir(args)
    raw_path, summary_path = report_to_csv(report, out / "records.csv")
    print(format_tables(report))
    print(f"wrote {raw_path} and {summary_path}")
    return 0


def _cmd_dump(args) -> int:
    seq = load_yuv(args.input, args.width, args.height, args.frames)
    if len(seq) < 2:
        raise FormatError("dump needs at least 2 frames")
    algorithm = args.algo[0]
    out = _out_dir(args)
    damaged_frames, recon_frames = [], []
    for n in range(1, len(seq)):
        damaged, recon, _, _ = _conceal_one(
            seq, n, algorithm, args.rate, args.seed, args.p)
        save_pgm(damaged.y, out / f"damaged_f{n:04d}.pgm")
        save_pgm(recon.y, out / f"reconstructed_f{n:04d}.pgm")
        damaged_frames.append(damaged)
        recon_frames.append(recon)
    save_yuv(Sequence(seq.width, seq.height, damaged_frames),
             out / "damaged.yuv")
    save_yuv(Sequence(seq.width, seq.height, recon_frames),
             out / "reconstructed.yuv")
    print(f"wrote {len(damaged_frames)} damaged/reconstructed frame pair(s) "
          f"under {out}")
    return 0


_COMMANDS = {
    "estimate": _cmd_estimate,
    "inject": _cmd_inject,
    "conceal": _cmd_conceal,
    "bench": _cmd_bench,
    "dump": _cmd_dump,
}


def run_command(args) -> int:
    """Execute a parsed command; data problems raise FormatError/OSError."""
    return _COMMANDS[args.command](args)


def main(argv=None) -> int:
    try:
        args = parse_args(sys.argv[1:] if argv is None else argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # argparse --help
        return int(exc.code or 0)
    try:
        return run_command(args)
    except (FormatError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
