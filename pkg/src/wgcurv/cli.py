"""Command-line front end: ``wgcurv {compute,compare,synth,lut-dump,bench}``."""

from __future__ import annotations

import argparse
import logging
import os
import sys

import numpy as np

from wgcurv import bench, imgio, synth
from wgcurv.core import BoundaryPolicy, SchemeConfig, StencilMode

log = logging.getLogger("wgcurv")

PRESET_NAME = "synthetic-cone-cylinder"


class UsageError(Exception):
    pass


def _threads(value: str) -> int:
    n = int(value)
    if n < 1:
        raise argparse.ArgumentTypeError("threads must be >= 1")
    return n


def _positive_float(value: str) -> float:
    v = float(value)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _size(value: str):
    try:
        w, h = synth.parse_size(value)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from None
    if w < 1 or h < 1:
        raise argparse.ArgumentTypeError("size must be positive")
    return w, h


def _add_scheme_options(p, with_scheme=True):
    if with_scheme:
        p.add_argument("--scheme", choices=bench.SCHEMES, default="discrete-kw")
    p.add_argument("--lut", default=None, help="none, full or partial:T (default: full for discrete-kw)")
    p.add_argument("--stencil", choices=[m.value for m in StencilMode], default=StencilMode.STANDARD.value)
    p.add_argument("--boundary", choices=[b.value for b in BoundaryPolicy], default=BoundaryPolicy.REPLICATE.value)
    p.add_argument("--pixel-size", type=_positive_float, default=1.0, metavar="H")
    p.add_argument("--threads", type=_threads, default=os.cpu_count() or 1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wgcurv", description="Weighted Gaussian curvature of grayscale images.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="compute a curvature field")
    p.add_argument("input", help=f"binary PGM, or {PRESET_NAME}")
    p.add_argument("output", help="field dump path")
    _add_scheme_options(p)
    p.add_argument("--vis", metavar="PGM", help="also write offset + gain * K as an 8-bit PGM")
    p.add_argument("--vis-offset", type=float, default=128.0)
    p.add_argument("--vis-gain", type=float, default=20.0)
    p.add_argument("--stats", metavar="CSV", help="write metric,value statistics")
    p.add_argument("--region", choices=["interior", "full"], default="interior")

    p = sub.add_parser("compare", help="mean |Kw| of both weighted schemes on one image")
    p.add_argument("input", help=f"binary PGM, or {PRESET_NAME}")
    _add_scheme_options(p, with_scheme=False)
    p.add_argument("--region", choices=["interior", "full"], default="interior")
    p.add_argument("--csv", metavar="PATH", help="write CSV here instead of stdout")
    p.add_argument("--classical-out", metavar="PATH", help="field dump of the classical Kw")
    p.add_argument("--discrete-out", metavar="PATH", help="field dump of the discrete Kw")

    p = sub.add_parser("synth", help="generate a synthetic test image")
    p.add_argument("output")
    p.add_argument("--kind", choices=["flat", "cone", "cylinder", "ramp", "composite"], default="composite")
    p.add_argument("--size", type=_size, default=(256, 256), metavar="WxH")
    p.add_argument("--config", metavar="FILE", help="key=value spec file; overrides --kind")
    p.add_argument("--level", type=float, default=128.0, help="flat")
    p.add_argument("--center", type=float, nargs=2, metavar=("CX", "CY"), help="cone apex (default: image centre)")
    p.add_argument("--radius", type=float, help="cone / cylinder radius")
    p.add_argument("--peak", type=float, default=255.0, help="cone / cylinder height")
    p.add_argument("--orientation", choices=["vertical", "horizontal"], default="vertical")
    p.add_argument("--coeffs", type=float, nargs=3, default=(1.0, 0.0, 0.0), metavar=("A", "B", "C"), help="ramp")
    p.add_argument("--raw", action="store_true", help="skip quantisation and write a float64 field dump")

    p = sub.add_parser("lut-dump", help="write an angle lookup table")
    p.add_argument("output")
    p.add_argument("--variant", choices=["full", "partial"], default="full")
    p.add_argument("--threshold", type=int, default=31)

    p = sub.add_parser("bench", help="throughput of each scheme in megapixels/second")
    p.add_argument("input", nargs="?", help=f"binary PGM or {PRESET_NAME}; default a random image")
    p.add_argument("--size", type=_size, default=(4096, 2160), metavar="WxH", help="random image size")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--repetitions", type=int, default=3)
    p.add_argument("--threads", type=_threads, default=os.cpu_count() or 1)
    p.add_argument("--threshold", type=int, default=31, help="partial LUT threshold")
    p.add_argument("--csv", metavar="PATH")
    return parser


def _load_input(name: str):
    if name == PRESET_NAME:
        return synth.generate(synth.cone_cylinder_composite())
    return imgio.read_image(name)


def _scheme_config(args) -> SchemeConfig:
    return SchemeConfig(args.pixel_size, args.boundary, args.stencil)


def _bench_config(args, scheme: str) -> bench.BenchConfig:
    lut = args.lut
    if lut is None:
        lut = "full" if scheme == "discrete-kw" and args.pixel_size == 1.0 else "none"
    try:
        bench.parse_lut(lut)
        return bench.BenchConfig(scheme, lut, args.threads, _scheme_config(args))
    except ValueError as e:
        raise UsageError(str(e)) from None


def _emit(text: str, path: str | None):
    if path:
        with open(path, "w", newline="") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def cmd_compute(args) -> int:
    cfg = _bench_config(args, args.scheme)
    field = bench.compute(_load_input(args.input), cfg)
    imgio.write_field(field, args.output)
    if args.vis:
        params = imgio.VisualizationParams(args.vis_offset, args.vis_gain)
        imgio.write_image(imgio.visualize_curvature(field, params), args.vis)
    if args.stats:
        imgio.write_stats(synth.curvature_stats(field, args.region).rows(), args.stats)
    log.info("wrote %s (%s)", args.output, cfg.label)
    return 0


def cmd_compare(args) -> int:
    img = _load_input(args.input)
    classical = bench.compute(img, _bench_config(args, "classical-kw"))
    discrete = bench.compute(img, _bench_config(args, "discrete-kw"))
    c = synth.curvature_stats(classical, args.region).mean_abs
    d = synth.curvature_stats(discrete, args.region).mean_abs
    ratio = c / d if d > 0 else float("inf")
    rows = [("classical_mean_abs", c), ("discrete_mean_abs", d), ("ratio", ratio)]
    _emit(imgio.stats_csv(rows), args.csv)
    if args.classical_out:
        imgio.write_field(classical, args.classical_out)
    if args.discrete_out:
        imgio.write_field(discrete, args.discrete_out)
    return 0


def _synth_spec(args) -> synth.SyntheticSpec:
    if args.config:
        with open(args.config) as f:
            spec = synth.parse_spec_text(f.read())
        if args.raw:
            spec = synth.SyntheticSpec(spec.primitives, spec.width, spec.height, False, spec.clamp)
        return spec
    w, h = args.size
    quantize = not args.raw
    if args.kind == "composite":
        if w != h:
            raise UsageError("the composite preset is square; use --size NxN")
        return synth.cone_cylinder_composite(w, quantize)
    if args.kind == "flat":
        prim = synth.Flat(args.level)
    elif args.kind == "ramp":
        prim = synth.Ramp(*args.coeffs)
    elif args.kind == "cone":
        cx, cy = args.center if args.center else ((w - 1) / 2, (h - 1) / 2)
        prim = synth.Cone(cx, cy, args.radius or min(w, h) / 4, args.peak)
    else:
        span = w if args.orientation == "vertical" else h
        prim = synth.CylinderRidge(args.orientation, (span - 1) / 2, args.radius or span / 4, args.peak)
    return synth.SyntheticSpec((prim,), w, h, quantize)


def cmd_synth(args) -> int:
    spec = _synth_spec(args)
    img = synth.generate(spec)
    if spec.quantize:
        imgio.write_image(img, args.output)
    else:
        imgio.write_field(img, args.output)
    return 0


def cmd_lut_dump(args) -> int:
    from wgcurv import lut as lutmod

    if args.variant == "full":
        table = lutmod.build_full_lut()
    else:
        try:
            table = lutmod.build_partial_lut(args.threshold)
        except ValueError as e:
            raise UsageError(str(e)) from None
    lutmod.write_lut(table, args.output)
    return 0


def cmd_bench(args) -> int:
    if args.repetitions < 3:
        raise UsageError("--repetitions must be >= 3")
    if args.input:
        img = _load_input(args.input)
    else:
        w, h = args.size
        img = np.random.default_rng(args.seed).integers(0, 256, (h, w), dtype=np.uint8)
    report = bench.run_bench(img, bench.default_configs(args.threads, args.threshold), args.repetitions)
    print(report.format_table())
    if args.csv:
        _emit(report.to_csv(), args.csv)
    return 0


COMMANDS = {
    "compute": cmd_compute,
    "compare": cmd_compare,
    "synth": cmd_synth,
    "lut-dump": cmd_lut_dump,
    "bench": cmd_bench,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except UsageError as e:
        parser.error(str(e))  # exits 2
    except (OSError, ValueError) as e:
        print(f"wgcurv {args.command}: error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
