"""Command-line interface.

Exit codes: 0 success, 1 runtime or I/O failure, 2 invalid parameters.
"""
import argparse
import csv
import re
import sys
from math import sqrt
from pathlib import Path

import numpy as np

from . import frameio
from .delay_analysis import render_delay_tables
from .discrete_spatial import DEFAULT_EPS, s_from_degrees
from .discrete_temporal import build_cascade, tau_from_seconds
from .engine import Operator, ReceptiveFieldSpec, SpatioTemporalEngine, preset, sample_rf_kernel
from .errors import InvalidParameterError
from .scale_distribution import ScaleDistribution
from .temporal_kernels import KernelCascade

DEFAULT_C = "sqrt2"


def parse_c(text: str) -> float:
    """Decimal, ``sqrt2`` or a power literal such as ``2^0.75``."""
    t = text.strip().lower()
    if t in ("sqrt2", "sqrt(2)"):
        return sqrt(2.0)
    m = re.fullmatch(r"([0-9.]+)\^([0-9.+-]+)", t)
    try:
        value = float(m.group(1)) ** float(m.group(2)) if m else float(t)
    except ValueError:
        raise InvalidParameterError(f"cannot parse c value {text!r}") from None
    return value


def parse_c_list(text: str) -> list[float]:
    return [parse_c(part) for part in text.split(",") if part.strip()]


def parse_k_range(text: str) -> list[int]:
    m = re.fullmatch(r"\s*(-?\d+)\s*(?:\.\.\s*(-?\d+)\s*)?", text)
    if not m:
        raise InvalidParameterError(f"cannot parse K range {text!r}; use e.g. 7 or 2..8")
    lo = int(m.group(1))
    hi = int(m.group(2)) if m.group(2) else lo
    if lo < 1 or hi < lo:
        raise InvalidParameterError(f"K range {text!r} must satisfy 1 <= K_lo <= K_hi")
    return list(range(lo, hi + 1))


def parse_pair(text: str) -> tuple[float, float]:
    parts = [float(p) for p in text.split(",")]
    if len(parts) == 1:
        parts.append(0.0)
    if len(parts) != 2:
        raise InvalidParameterError(f"expected 'v1,v2', got {text!r}")
    return tuple(parts)


def _distribution(args, tau: float) -> ScaleDistribution:
    if args.uniform:
        return ScaleDistribution.uniform(args.K, tau)
    c = parse_c(args.c if args.c is not None else DEFAULT_C)
    return ScaleDistribution.logarithmic(args.K, c, tau)


def _add_distribution_args(p, with_tau=True):
    p.add_argument("--K", type=int, default=7, help="number of cascade stages")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--uniform", action="store_true", help="uniform scale levels")
    group.add_argument("--c", help=f"logarithmic distribution parameter (default {DEFAULT_C})")
    if with_tau:
        p.add_argument("--tau", type=float, default=1.0, help="temporal variance")


def _open_out(path):
    if path in (None, "-"):
        return sys.stdout, False
    return open(path, "w", newline="", encoding="utf-8"), True


def cmd_kernels(args) -> int:
    dist = _distribution(args, args.tau)
    kernel = KernelCascade(dist.time_constants())
    mean, var = kernel.mean_variance()
    t = np.linspace(0.0, mean + 6.0 * sqrt(var), args.samples)
    cols = [t, kernel(t), kernel.derivative(t, 1), kernel.derivative(t, 2)]
    fh, close = _open_out(args.out)
    try:
        w = csv.writer(fh)
        w.writerow(["t", "h", "h_t", "h_tt"])
        for row in zip(*cols):
            w.writerow([f"{v:.10g}" for v in row])
    finally:
        if close:
            fh.close()
    return 0


def cmd_delays(args) -> int:
    if args.uniform and args.c is not None:
        raise InvalidParameterError("--uniform and --c are mutually exclusive")
    Ks = parse_k_range(args.K)
    c_list = [] if args.uniform else parse_c_list(args.c or "sqrt2,2^0.75,2")
    if not args.tau > 0:
        raise InvalidParameterError("tau must be > 0")
    tables = render_delay_tables(Ks, c_list, args.tau)
    which = ["mean", "tmax"] if args.table == "both" else [args.table]
    titles = {"mean": "temporal mean delay", "tmax": "delay of kernel maximum"}
    fh, close = _open_out(args.out)
    try:
        for name in which:
            header = ["K"] + tables.column_labels()
            rows = tables.rows(name)
            if args.format == "csv":
                w = csv.writer(fh)
                w.writerow(["table"] + header)
                for row in rows:
                    w.writerow([name] + row)
            else:
                fh.write(f"{titles[name]} (units of sqrt(tau))\n")
                widths = [max(len(r[i]) for r in [header] + rows) for i in range(len(header))]
                for row in [header] + rows:
                    fh.write("  ".join(v.rjust(wd) for v, wd in zip(row, widths)) + "\n")
                fh.write("\n")
    finally:
        if close:
            fh.close()
    return 0


def _levels_arg(text: str, K: int):
    if text == "top":
        return [K - 1]
    if text == "all":
        return list(range(K))
    return [int(k) for k in text.split(",")]


def cmd_filter(args) -> int:
    if args.sigma_t is not None:
        tau = tau_from_seconds(args.sigma_t, args.rate)
    else:
        tau = args.tau
    s = s_from_degrees(args.sigma_x, args.ppd) if args.sigma_x is not None else args.s
    dist = _distribution(args, tau)
    spec = build_cascade(dist)
    operators = [Operator.parse(op) for op in args.ops.split(",")]
    engine = SpatioTemporalEngine(
        s, spec, operators, levels=_levels_arg(args.levels, spec.K),
        velocity=parse_pair(args.velocity), interpolation=args.interp,
        eps=args.eps, prime=args.prime)

    out = Path(args.output)
    out.mkdir(parents=True, exist_ok=True)
    frames = frameio.iter_frames(args.input)
    with open(out / "manifest.tsv", "w", encoding="utf-8") as manifest:
        for n, frame in enumerate(frames):
            for ff in engine.process_frame(frame):
                for name, plane in ff.maps.items():
                    rel = Path(f"level{ff.scale_index}") / name / f"frame_{n:06d}.f32"
                    (out / rel).parent.mkdir(parents=True, exist_ok=True)
                    frameio.write_plane(out / rel, plane)
                    if args.preview:
                        frameio.write_preview((out / rel).with_suffix(".pgm"), plane)
                    p32 = plane.astype(np.float32)
                    manifest.write(f"{n}\t{ff.tau:.10g}\t{name}\t{p32.min():.9g}\t"
                                   f"{p32.max():.9g}\t{rel.as_posix()}\n")
    return 0


def _rf_spec(args) -> ReceptiveFieldSpec:
    overrides = {"p": args.ppd, "r": args.rate}
    if args.uniform or args.c is not None:
        overrides["distribution"] = _distribution(args, 1.0)
    else:
        overrides["distribution"] = ScaleDistribution.logarithmic(args.K, parse_c(DEFAULT_C), 1.0)
    if args.preset:
        return preset(args.preset, **overrides)
    return ReceptiveFieldSpec(
        spatial_order=(args.alpha, 0), temporal_order=args.beta,
        sigma_x=args.sigma_x, sigma_t=args.sigma_t, v=parse_pair(args.v), **overrides)


def cmd_rf_model(args) -> int:
    spec = _rf_spec(args)
    kernel, x, t = sample_rf_kernel(spec, args.width, args.frames, args.interp)
    if args.format == "raw":
        if not args.out:
            raise InvalidParameterError("--format raw needs --out")
        frameio.write_plane(args.out, kernel)
        Path(args.out + ".json").write_text(
            f'{{"width": {kernel.shape[1]}, "height": {kernel.shape[0]}, "frames": 1, '
            f'"dtype": "float32", "endian": "little"}}')
        return 0
    fh, close = _open_out(args.out)
    try:
        w = csv.writer(fh)
        w.writerow(["t\\x"] + [str(v) for v in x])
        for ti, row in zip(t, kernel):
            w.writerow([str(ti)] + [f"{v:.10g}" for v in row])
    finally:
        if close:
            fh.close()
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="timecausal", description="Time-causal, time-recursive receptive fields")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("kernels", help="sample a continuous cascade kernel as CSV")
    _add_distribution_args(p)
    p.add_argument("--samples", type=int, default=2000)
    p.add_argument("--out", help="output CSV (default stdout)")
    p.set_defaults(func=cmd_kernels)

    p = sub.add_parser("delays", help="mean and maximum delay tables")
    p.add_argument("--K", default="2..8", help="K or K_lo..K_hi")
    p.add_argument("--c", help="comma separated c values (default sqrt2,2^0.75,2)")
    p.add_argument("--uniform", action="store_true", help="uniform column only")
    p.add_argument("--tau", type=float, default=1.0)
    p.add_argument("--table", choices=["mean", "tmax", "both"], default="both")
    p.add_argument("--format", choices=["text", "csv"], default="text")
    p.add_argument("--out")
    p.set_defaults(func=cmd_delays)

    p = sub.add_parser("filter", help="filter a video stream frame by frame")
    p.add_argument("input", help="directory of P5 PGM frames or raw float32 stream")
    p.add_argument("output", help="output directory")
    _add_distribution_args(p)
    p.add_argument("--sigma-t", type=float, help="temporal scale in seconds (needs --rate)")
    p.add_argument("--rate", type=float, default=25.0, help="frames per second")
    p.add_argument("--s", type=float, default=0.0, help="spatial variance in pixels^2")
    p.add_argument("--sigma-x", type=float, help="spatial scale in degrees (needs --ppd)")
    p.add_argument("--ppd", type=float, default=10.0, help="pixels per degree")
    p.add_argument("--ops", default="L", help="comma separated operators, e.g. L,Lt,Lxx")
    p.add_argument("--levels", default="top", help="top, all or comma separated indices")
    p.add_argument("--velocity", default="0,0", help="image velocity v1,v2 in pixels/frame")
    p.add_argument("--interp", choices=["linear", "cubic"], default="linear")
    p.add_argument("--eps", type=float, default=DEFAULT_EPS)
    p.add_argument("--prime", action="store_true", help="start the cascade from the first frame")
    p.add_argument("--preview", action="store_true", help="also write 8-bit PGM previews")
    p.set_defaults(func=cmd_filter)

    p = sub.add_parser("rf-model", help="sample an x-t receptive field kernel")
    p.add_argument("--preset", choices=["a", "b", "c", "d"])
    p.add_argument("--alpha", type=int, default=0)
    p.add_argument("--beta", type=int, default=0)
    p.add_argument("--sigma-x", type=float, default=0.6, help="degrees")
    p.add_argument("--sigma-t", type=float, default=0.06, help="seconds")
    p.add_argument("--v", default="0", help="velocity in degrees/ms")
    _add_distribution_args(p, with_tau=False)
    p.add_argument("--ppd", type=float, default=10.0, help="pixels per degree")
    p.add_argument("--rate", type=float, default=1000.0 / 16.0, help="frames per second")
    p.add_argument("--width", type=int, default=101)
    p.add_argument("--frames", type=int, default=64)
    p.add_argument("--interp", choices=["linear", "cubic"], default="linear")
    p.add_argument("--format", choices=["csv", "raw"], default="csv")
    p.add_argument("--out")
    p.set_defaults(func=cmd_rf_model)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InvalidParameterError, ValueError) as exc:
        msg = str(exc)
        if not msg.startswith("invalid-parameter"):
            msg = f"invalid-parameter: {msg}"
        print(f"timecausal: {msg}", file=sys.stderr)
        return 2
    except (OSError, RuntimeError, ArithmeticError) as exc:
        print(f"timecausal: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
