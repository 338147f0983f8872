"""Command-line entry point: ``spiralrope {freq-support,reconstruct,verify,bench,rotate}``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import formats, fourier
from .attnharness import AttentionConfig, overhead_bench
from .ropecore import ConfigError, DimensionError, RopeConfig, apply_variant
from .verify import SUITES, run_suites


def _grid(text: str) -> tuple[int, int]:
    """``"32x32"`` or ``"32"`` -> ``(h, w)``."""
    try:
        parts = [int(v) for v in text.lower().split("x")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid must look like 32 or 32x32, got {text!r}")
    if len(parts) == 1:
        parts *= 2
    if len(parts) != 2 or min(parts) < 1:
        raise argparse.ArgumentTypeError(f"grid must look like 32 or 32x32, got {text!r}")
    return parts[0], parts[1]


def _seed(text: str) -> int:
    v = int(text, 0)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError(f"seed must fit in an unsigned 64-bit integer, got {text}")
    return v


def _add_rope_args(p: argparse.ArgumentParser, dim: int, k: int) -> None:
    p.add_argument("--dim", type=int, default=dim, help="per-head embedding dimension d")
    p.add_argument("--k", type=int, default=k, help="number of spiral directions K (even)")
    p.add_argument("--theta-base", type=float, default=10000.0)
    p.add_argument("--freq-scale", type=float, default=1.0)


def _rope_config(args, variant: str) -> RopeConfig:
    cfg = RopeConfig(args.dim, args.k, args.theta_base, args.freq_scale)
    if variant in ("spiral", "both"):
        cfg.check_spiral()
    return cfg


def _emit(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        formats.write_text(path, text)


def cmd_freq_support(args) -> int:
    variants = ("axial", "spiral") if args.variant == "both" else (args.variant,)
    cfg = _rope_config(args, args.variant)
    rows = [(v, pt) for v in variants for pt in fourier.support_points(v, cfg)]
    _emit(args.out, formats.frequency_csv(rows))
    return 0


def cmd_reconstruct(args) -> int:
    cfg = _rope_config(args, args.variant)
    n = args.grid
    if args.image == "point":
        img = fourier.make_point_image(n)
    else:
        img = fourier.make_circle_image(n, args.radius)
    res = fourier.run_reconstruction(img, args.variant, cfg, full=args.full_mask)
    formats.write_bytes(args.out, formats.pgm_bytes(fourier.to_uint8(res.reconstruction)))
    metrics = {
        "mse": res.mse,
        "kept_bins": len(res.mask),
        "clamped": res.mask.clamped,
        "axis_energy_fraction": fourier.axis_energy_fraction(res.reconstruction),
        "max_imag": res.max_imag,
    }
    metrics_path = args.metrics or str(Path(args.out).with_suffix(".txt"))
    formats.write_text(metrics_path, formats.metrics_text(metrics))
    return 0


def cmd_verify(args) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    checks = run_suites(names, args.trials, args.seed)
    for c in checks:
        print(c.line())
    failed = [c for c in checks if not c.passed]
    if failed:
        print(f"{len(failed)} invariant(s) breached: " + "; ".join(c.name for c in failed), file=sys.stderr)
        return 1
    print(f"all {len(checks)} checks passed")
    return 0


def cmd_bench(args) -> int:
    if args.iters < 1:
        raise ConfigError(f"--iters must be >= 1, got {args.iters}")
    h, w = args.grid
    axial_dim = args.axial_dim or args.dim
    spiral_dim = args.spiral_dim or args.dim
    if axial_dim != spiral_dim:
        raise ConfigError(f"axial and spiral must share dim for a fair comparison ({axial_dim} vs {spiral_dim})")
    cfg_a = AttentionConfig(args.heads, axial_dim, h, w, "axial", 2, args.theta_base, args.freq_scale)
    cfg_s = AttentionConfig(args.heads, spiral_dim, h, w, "spiral", args.k, args.theta_base, args.freq_scale)
    report = overhead_bench(cfg_a, cfg_s, args.iters, seed=args.seed)
    header = [f"dim={axial_dim}", f"k={args.k}", f"grid={h}x{w}", f"heads={args.heads}"]
    _emit(args.out, "\n".join(header + report.lines()) + "\n")
    return 0


def cmd_rotate(args) -> int:
    try:
        text = Path(args.input).read_text() if args.input != "-" else sys.stdin.read()
    except OSError as e:
        raise OSError(f"cannot read {args.input}: {e.strerror or e}") from e
    vectors = formats.read_vectors(text)
    if vectors.size and vectors.shape[1] != args.dim:
        raise DimensionError(f"vectors in {args.input} have length {vectors.shape[1]}, expected --dim {args.dim}")
    cfg = _rope_config(args, args.variant)
    pos = [float(v) for v in args.pos.split(",")]
    if args.variant == "1d":
        position = np.float64(pos[0])
    else:
        if len(pos) != 2:
            raise ConfigError(f"--pos needs x,y for the {args.variant} variant, got {args.pos!r}")
        position = np.array(pos)
    out = apply_variant(vectors, position, args.variant, cfg) if vectors.size else vectors
    _emit(args.output, formats.vectors_text(out))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spiralrope", description="Spiral / axial RoPE analysis tools")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("freq-support", help="export frequency-support points as CSV")
    _add_rope_args(p, 1024, 8)
    p.add_argument("--variant", choices=("axial", "spiral", "both"), default="spiral")
    p.add_argument("--out", help="CSV path (default: stdout)")
    p.set_defaults(func=cmd_freq_support)

    p = sub.add_parser("reconstruct", help="masked FFT reconstruction of a binary image")
    _add_rope_args(p, 1024, 8)
    p.add_argument("--variant", choices=("axial", "spiral"), default="spiral")
    p.add_argument("--image", choices=("point", "circle"), default="circle")
    p.add_argument("--grid", type=int, default=64)
    p.add_argument("--radius", type=int, default=16)
    p.add_argument("--full-mask", action="store_true", help="keep every bin (round-trip check)")
    p.add_argument("--out", default="reconstruction.pgm")
    p.add_argument("--metrics", help="metrics path (default: --out with .txt suffix)")
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("verify", help="run the invariant suites")
    p.add_argument("--suite", choices=("all",) + tuple(SUITES), default="all")
    p.add_argument("--trials", type=int, help="random draws per randomized check")
    p.add_argument("--seed", type=_seed, default=0)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="time table-based axial vs spiral application")
    _add_rope_args(p, 64, 8)
    p.add_argument("--axial-dim", type=int)
    p.add_argument("--spiral-dim", type=int)
    p.add_argument("--grid", type=_grid, default=(32, 32))
    p.add_argument("--heads", type=int, default=1)
    p.add_argument("--iters", type=int, default=200)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--out", help="report path (default: stdout)")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("rotate", help="rotate whitespace-separated vectors read from a text file")
    _add_rope_args(p, 64, 8)
    p.add_argument("--variant", choices=("1d", "axial", "spiral"), default="spiral")
    p.add_argument("--pos", default="0,0", help="position: 'x,y' (or 'm' for 1d)")
    p.add_argument("--input", required=True)
    p.add_argument("--output", help="output path (default: stdout)")
    p.set_defaults(func=cmd_rotate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, DimensionError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
