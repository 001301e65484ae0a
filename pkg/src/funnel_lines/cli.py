"""Command-line interface: ``funnel-lines {detect,synth,experiment,render}``."""

import argparse
import json
import math
import sys
from dataclasses import replace

from . import experiments as exps
from .detect import DetectConfig, detect_lines, parameter_spaces
from .imaging import NoiseModel, apply_noise, occlude_disk
from .io import PGMError, draw_overlay, load_image, render_heatmap, save_image
from .parammap import LineModel, line_to_rho_theta
from .scenes import render_lines, star_scene, step_scene

EXIT_USAGE = 2   # bad flags or scene specs
EXIT_IO = 2      # unreadable or malformed files


class CLIError(Exception):
    """A user-facing failure carrying its exit code."""

    def __init__(self, message, code=1):
        super().__init__(message)
        self.code = code


def _sig(x):
    """Round to 6 significant digits for JSON output."""
    if x is None:
        return None
    x = float(x)
    if not math.isfinite(x):
        return None
    return float(f"{x:.6g}")


def record(det):
    """JSON record of a :class:`~funnel_lines.detect.DetectedLine` (fixed field order)."""
    rho, theta = line_to_rho_theta(det.line)
    ext = det.extent
    return {
        "space": det.peak.space,
        "m": int(det.peak.m),
        "n": int(det.peak.n),
        "slope_or_inv_slope": _sig(det.line.slope),
        "intercept_px": _sig(det.line.intercept),
        "rho_px": _sig(rho),
        "theta_deg": _sig(theta),
        "brightness": _sig(det.peak.brightness),
        "verified": bool(det.verified),
        "score": _sig(det.score),
        "endpoints": None if ext is None else [[_sig(x), _sig(y)] for x, y in ext.endpoints],
        "length_px": None if ext is None else _sig(ext.length),
        "width_px": None if ext is None else int(ext.width),
    }


def _add_detect_flags(p, with_defaults=True):
    """Detection flags; without defaults unset flags stay ``None``."""
    d = DetectConfig()

    def dflt(v):
        return v if with_defaults else None

    p.add_argument("--max-lines", type=int, default=dflt(d.max_peaks),
                   help="peaks examined per space and lines reported")
    p.add_argument("--threshold-ratio", type=float, default=dflt(d.threshold_ratio))
    p.add_argument("--neighborhood", type=int, default=dflt(d.neighborhood))
    p.add_argument("--band-width", type=int, default=dflt(d.band_width))
    p.add_argument("--verify-ratio", type=float, default=dflt(d.verify_ratio))
    p.add_argument("--no-mask-boundaries", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=dflt(d.threads), help="0 = one per CPU")


_FLAG_FIELDS = {
    "max_lines": "max_peaks",
    "threshold_ratio": "threshold_ratio",
    "neighborhood": "neighborhood",
    "band_width": "band_width",
    "verify_ratio": "verify_ratio",
    "threads": "threads",
}


def _config(args, base=None):
    """Detection config from the flags; unset (``None``) flags keep ``base``."""
    base = DetectConfig() if base is None else base
    changes = {f: getattr(args, a) for a, f in _FLAG_FIELDS.items()
               if getattr(args, a) is not None}
    if args.no_mask_boundaries:
        changes["mask_boundaries"] = False
    try:
        return replace(base, **changes)
    except ValueError as e:
        raise CLIError(str(e), EXIT_USAGE)


def _load(path):
    try:
        return load_image(path)
    except PGMError as e:
        raise CLIError(f"{path}: {e}", EXIT_IO)
    except OSError as e:
        raise CLIError(f"{path}: {e}", EXIT_IO)
    except ValueError as e:
        raise CLIError(f"{path}: {e}", EXIT_IO)


def _save_gray(path, img):
    try:
        save_image(path, img)
    except OSError as e:
        raise CLIError(f"{path}: {e}", EXIT_IO)


def cmd_detect(args, out):
    img = _load(args.input)
    cfg = _config(args)
    try:
        found = detect_lines(img, cfg)[:args.max_lines]
    except ValueError as e:
        raise CLIError(f"{args.input}: {e}", EXIT_IO)
    out.write(json.dumps([record(d) for d in found], indent=2) + "\n")
    if args.overlay:
        try:
            draw_overlay(img, found).save(args.overlay)
        except OSError as e:
            raise CLIError(f"{args.overlay}: {e}", EXIT_IO)
    return 0


def parse_line_spec(text):
    """Parse ``"k=0.5,b=10"`` (optionally ``inverse`` / ``inverse=1``) into a line."""
    values, inverse = {}, False
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if part in ("inverse", "inv"):
            inverse = True
            continue
        key, sep, val = part.partition("=")
        if not sep:
            raise CLIError(f"bad line spec {text!r}: expected key=value", EXIT_USAGE)
        key = key.strip()
        if key in ("inverse", "inv"):
            inverse = val.strip().lower() in ("1", "true", "yes")
            continue
        if key not in ("k", "b"):
            raise CLIError(f"bad line spec {text!r}: unknown key {key!r}", EXIT_USAGE)
        try:
            values[key] = float(val)
        except ValueError:
            raise CLIError(f"bad line spec {text!r}: {val!r} is not a number", EXIT_USAGE)
    if set(values) != {"k", "b"}:
        raise CLIError(f"bad line spec {text!r}: need both k and b", EXIT_USAGE)
    if not all(math.isfinite(v) for v in values.values()):
        raise CLIError(f"bad line spec {text!r}: values must be finite", EXIT_USAGE)
    return LineModel(values["k"], values["b"], inverse)


def parse_noise(text):
    """``variant:level`` with variant gaussian, salt_pepper or speckle."""
    variant, sep, level = text.partition(":")
    variant = variant.strip().replace("-", "_")
    if not sep:
        raise CLIError(f"bad noise spec {text!r}: expected variant:level", EXIT_USAGE)
    try:
        return variant, float(level)
    except ValueError:
        raise CLIError(f"bad noise spec {text!r}", EXIT_USAGE)


def synth_image(args):
    """Float image described by the ``synth`` flags."""
    w = args.width or args.size
    h = args.height or args.size
    if w < 4 or h < 4:
        raise CLIError("image must be at least 4x4", EXIT_USAGE)
    if args.thickness < 1:
        raise CLIError("thickness must be >= 1", EXIT_USAGE)
    if args.scene == "step":
        if w != h:
            raise CLIError("the step scene is square", EXIT_USAGE)
        img, _ = step_scene(w)
    else:
        lines = [parse_line_spec(s) for s in args.lines]
        if args.star:
            if w != h:
                raise CLIError("--star needs a square image", EXIT_USAGE)
            lines += star_scene(w, n_lines=args.star)[1]
        img = render_lines(w, h, lines, thickness=args.thickness, profile=args.profile)
    if args.occlude:
        if args.occlude < 0:
            raise CLIError("occlusion diameter must be non-negative", EXIT_USAGE)
        img = occlude_disk(img, 0, 0, args.occlude)
    for spec in args.noise:
        variant, level = parse_noise(spec)
        try:
            img = apply_noise(img, NoiseModel(variant, level, args.seed))
        except ValueError as e:
            raise CLIError(str(e), EXIT_USAGE)
    return img


def cmd_synth(args, out):
    img = synth_image(args)
    _save_gray(args.output, img)
    return 0


def _floats(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise CLIError(f"bad number list {text!r}", EXIT_USAGE)


def cmd_experiment(args, out):
    scene_name = args.scene if args.kind == "noise-sweep" else "star"
    size = args.size or (None if args.kind == "noise-sweep" else 351)
    try:
        _, truth, ratio = exps.scene(scene_name, size)
    except ValueError as e:
        raise CLIError(str(e), EXIT_USAGE)
    per_line = 2 if args.kind == "thickness" else exps.PEAKS_PER_LINE[scene_name]
    cfg = _config(args, DetectConfig(max_peaks=per_line * len(truth), verify_ratio=ratio))
    if args.kind == "noise-sweep":
        levels = _floats(args.values or "0,0.05,0.1,0.2,0.5,1")
        try:
            rows = exps.noise_sweep(levels, args.noise.replace("-", "_"), scene_name,
                                    size, args.seed, cfg=cfg)
        except ValueError as e:
            raise CLIError(str(e), EXIT_USAGE)
    elif args.kind == "occlusion-sweep":
        rows = exps.occlusion_sweep(_floats(args.values or "1,77,129,286"), size, cfg=cfg)
    else:
        rows = exps.thickness_sweep(_floats(args.values or "1,3,5,7"), size, cfg=cfg)
    text = exps.rows_to_csv(rows, include_runtime=not args.omit_runtime)
    if args.output:
        try:
            with open(args.output, "w", newline="") as fh:
                fh.write(text)
        except OSError as e:
            raise CLIError(f"{args.output}: {e}", EXIT_IO)
    else:
        out.write(text)
    return 0


def cmd_render(args, out):
    img = _load(args.input)
    cfg = _config(args)
    spaces = dict((s.kind, s) for s in parameter_spaces(img, cfg))
    heat = render_heatmap(spaces[args.space].magnitudes, log=args.log)
    _save_gray(args.output, heat / 255.0)
    return 0


def build_parser():
    p = argparse.ArgumentParser(
        prog="funnel-lines",
        description="Straight-line detection in grayscale images with the funnel transform.")
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("detect", help="detect lines; JSON records on stdout")
    d.add_argument("input", help="grayscale PGM (P5) or PNG")
    _add_detect_flags(d)
    d.add_argument("--overlay", help="write an RGB overlay (PNG) of the detections")
    d.set_defaults(func=cmd_detect)

    s = sub.add_parser("synth", help="write a synthetic test image")
    s.add_argument("-o", "--output", required=True, help="output .pgm or .png")
    s.add_argument("--size", type=int, default=64, help="square side (default 64)")
    s.add_argument("--width", type=int)
    s.add_argument("--height", type=int)
    s.add_argument("--lines", action="append", default=[], metavar="SPEC",
                   help='line "k=..,b=..[,inverse]"; repeatable')
    s.add_argument("--star", type=int, default=0, metavar="N",
                   help="N ridge lines through the center, evenly spaced in angle")
    s.add_argument("--scene", choices=["lines", "step"], default="lines",
                   help="'step' draws the three-edge step scene")
    s.add_argument("--profile", choices=["ridge", "step"], default="ridge")
    s.add_argument("--thickness", type=float, default=1.0)
    s.add_argument("--occlude", type=float, default=0.0, metavar="DIAMETER")
    s.add_argument("--noise", action="append", default=[], metavar="VARIANT:LEVEL",
                   help="gaussian:VAR, salt_pepper:DENSITY or speckle:VAR; repeatable")
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_synth)

    e = sub.add_parser("experiment", help="run a sweep; CSV on stdout")
    e.add_argument("kind", choices=["noise-sweep", "occlusion-sweep", "thickness"])
    e.add_argument("--values", help="comma-separated sweep values")
    e.add_argument("--noise", default="gaussian",
                   choices=["gaussian", "salt_pepper", "salt-pepper", "speckle"])
    e.add_argument("--scene", choices=["star", "step"], default="star")
    e.add_argument("--size", type=int)
    e.add_argument("-o", "--output")
    e.add_argument("--omit-runtime", action="store_true",
                   help="leave runtime_ms empty for byte-reproducible output")
    _add_detect_flags(e, with_defaults=False)
    e.set_defaults(func=cmd_experiment)

    r = sub.add_parser("render", help="write a parameter-space heatmap")
    r.add_argument("input")
    r.add_argument("--space", choices=["regular", "inverse"], default="regular")
    r.add_argument("-o", "--output", required=True)
    r.add_argument("--log", action="store_true", help="log(1 + x) before normalizing")
    _add_detect_flags(r)
    r.set_defaults(func=cmd_render)
    return p


def main(argv=None, out=None):
    out = sys.stdout if out is None else out
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, out)
    except CLIError as e:
        print(f"funnel-lines: error: {e}", file=sys.stderr)
        return e.code


if __name__ == "__main__":
    sys.exit(main())
