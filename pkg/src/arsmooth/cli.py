"""Command-line interface: ``arsmooth {smooth,design,analyze}``.

Exit codes: 0 success, 2 I/O error, 3 invalid input, 4 verification failure.
Diagnostics go to stderr, at the level named by ``SMOOTH_LOG``
(``error``, ``info`` or ``debug``; default ``error``).
"""

import argparse
import datetime
import json
import logging
import math
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .core import Signal, Theta, make_uniform_offcenter, make_uniform_window, weights_from_theta
from .design import DEFAULT_A, DesignConfig, default_max_half_width, design_search
from .exceptions import InvalidWeightsError, SmoothingError, VerificationError
from .io import dump_json, format_values, read_signal_csv, read_weights_json, write_indexed
from .smoother import ar_smooth, local_mean
from .spectral import build_ar_kernel, build_ar_kernel_theta, effective_window
from .verification import MAX_ORACLE_N, max_relative_error, smooth_dense

logger = logging.getLogger("arsmooth")

EXIT_OK, EXIT_IO, EXIT_INVALID, EXIT_VERIFY = 0, 2, 3, 4
VERIFY_TOL = 1e-10


def _setup_logging():
    level = os.environ.get("SMOOTH_LOG", "error").upper()
    logging.basicConfig(
        level=getattr(logging, level, logging.ERROR),
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )


def synthetic_signal(n, seed):
    """Noisy two-tone sine used when no input file is given."""
    rng = np.random.default_rng(seed)
    t = np.arange(n)
    clean = np.sin(2 * np.pi * t / n) + 0.5 * np.sin(6 * np.pi * t / n)
    return Signal(clean + 0.3 * rng.standard_normal(n))


def _load_signal(args):
    if args.input is not None:
        return read_signal_csv(args.input)
    if args.synthetic is not None:
        return synthetic_signal(args.synthetic, args.seed)
    raise SmoothingError("one of --input or --synthetic is required")


def _uniform_theta(m, a, n):
    p = make_uniform_window(m, n)
    if a == 1.0:
        return Theta(p.weights)
    return Theta.from_shapes(p.weights, make_uniform_offcenter(m, n).weights, a)


def _load_theta(args, n):
    if args.weights is not None:
        return read_weights_json(args.weights)
    if args.uniform is not None:
        if not 0 < args.a <= 1:
            raise SmoothingError(f"--a must lie in (0, 1], got {args.a}")
        return _uniform_theta(args.uniform, args.a, n)
    raise SmoothingError("one of --weights or --uniform is required")


def _stem(args, default):
    if args.output:
        out = Path(args.output)
        return out.with_suffix("")
    return Path(default)


def _write_manifest(primary, command, args, outputs, elapsed, extra=None):
    manifest = {
        "command": command,
        "inputs": {k: getattr(args, k) for k in ("input", "weights") if getattr(args, k, None)},
        "config": {
            k: v for k, v in sorted(vars(args).items())
            if k not in ("func", "input", "weights", "output")
        },
        "outputs": [str(p) for p in outputs],
        "elapsed": elapsed,
        "version": __version__,
        "created": datetime.datetime.now(datetime.timezone.utc).isoformat(),
    }
    if extra:
        manifest.update(extra)
    path = Path(str(primary) + ".manifest.json")
    dump_json(path, manifest)
    return path


def _emit(text, path):
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _verify(y, theta, x):
    if len(y) > MAX_ORACLE_N:
        logger.warning("verification skipped: N=%d exceeds oracle limit %d", len(y), MAX_ORACLE_N)
        return None
    dev = max_relative_error(x, smooth_dense(y, theta))
    if dev > VERIFY_TOL:
        raise VerificationError(f"max relative deviation {dev:.3e} exceeds {VERIFY_TOL:g}")
    return dev


def cmd_smooth(args):
    start = time.perf_counter()
    y = _load_signal(args)
    theta = _load_theta(args, len(y))
    x = ar_smooth(y, theta)
    outputs = []
    _emit(format_values(x.values), args.output)
    if args.output:
        outputs.append(Path(args.output))
    extra = {}
    if args.verify:
        dev = _verify(y, theta, x)
        extra["verify_max_relative_deviation"] = dev
        msg = "verification skipped (N too large)" if dev is None else (
            f"verification ok: max relative deviation {dev:.3e}"
        )
        print(msg, file=sys.stdout if args.output else sys.stderr)
    if args.emit_plot:
        stem = _stem(args, "smooth")
        for name, values in (("y", y.values), ("ybar", local_mean(y, theta).values), ("x", x.values)):
            path = Path(f"{stem}.{name}.csv")
            write_indexed(path, values)
            outputs.append(path)
    if args.output:
        _write_manifest(args.output, "smooth", args, outputs, time.perf_counter() - start, extra)
    return EXIT_OK


def cmd_design(args):
    start = time.perf_counter()
    y = _load_signal(args)
    n = len(y)
    L = args.max_halfwidth or default_max_half_width(n)
    cfg = DesignConfig(max_half_width=L, a_mass=args.a, mode=args.mode)
    report = design_search(y, cfg, n_jobs=args.jobs)
    x = ar_smooth(y, report.best_theta)
    text = json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n"
    outputs = []
    if args.output:
        Path(args.output).write_text(format_values(x.values))
        report_path = Path(args.report) if args.report else Path(f"{_stem(args, 'design')}.report.json")
        report_path.write_text(text)
        outputs += [Path(args.output), report_path]
    elif args.report:
        Path(args.report).write_text(text)
        outputs.append(Path(args.report))
    else:
        sys.stdout.write(text)
    if args.emit_plot:
        path = Path(f"{_stem(args, 'design')}.x.csv")
        write_indexed(path, x.values)
        outputs.append(path)
    if outputs:
        _write_manifest(outputs[0], "design", args, outputs, time.perf_counter() - start)
    return EXIT_OK


def _analysis_kernel(theta):
    try:
        w = weights_from_theta(theta)
    except InvalidWeightsError:
        # non-tapering equivalent window: the kernel is still well defined
        return build_ar_kernel_theta(theta)
    return build_ar_kernel(w)


def cmd_analyze(args):
    start = time.perf_counter()
    theta = _load_theta(args, args.n)
    kernel = _analysis_kernel(theta)
    report = effective_window(kernel, args.n)
    payload = report.to_dict()
    payload["V_min"] = float(report.V.min())
    payload["kernel"] = kernel.v.tolist()
    if report.r_star is None:
        payload["note"] = "NoSmoothingTerm: kernel has no off-center taps"
    _emit(json.dumps(payload, indent=2, sort_keys=True) + "\n", args.output)
    outputs = [Path(args.output)] if args.output else []
    if args.output or args.emit_plot:
        path = Path(f"{_stem(args, 'analyze')}.u.csv")
        n = args.n
        offsets = np.arange(n) - n // 2
        u = report.centered_u
        lines = ["offset,u,log10_u\n"]
        for k, val in zip(offsets.tolist(), u):
            log_u = "%.17g" % math.log10(val) if val > 0 else "nan"
            lines.append(f"{k},{'%.17g' % val},{log_u}\n")
        path.write_text("".join(lines))
        outputs.append(path)
    if args.output:
        _write_manifest(args.output, "analyze", args, outputs, time.perf_counter() - start)
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="arsmooth",
        description="Auto-regressive moving-mean smoothing with circular FFT deconvolution.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, signal=True, weights=True):
        if signal:
            p.add_argument("--input", help="CSV series: one value per line or index,value")
            p.add_argument("--synthetic", type=int, metavar="N",
                           help="use a seeded synthetic series of length N instead of --input")
            p.add_argument("--seed", type=int, default=0)
        if weights:
            p.add_argument("--weights", help="weights JSON")
            p.add_argument("--uniform", type=int, metavar="M",
                           help="uniform p and off-center q windows of half-width M")
        p.add_argument("--a", type=float, default=DEFAULT_A, help="data mass A (B = 1 - A)")
        p.add_argument("--output", help="output path (default: stdout)")
        p.add_argument("--emit-plot", action="store_true", help="write plot-ready data files")

    p = sub.add_parser("smooth", help="smooth a series with given weights")
    common(p)
    p.add_argument("--verify", action="store_true",
                   help=f"cross-check against the dense oracle (N <= {MAX_ORACLE_N})")
    p.set_defaults(func=cmd_smooth)

    p = sub.add_parser("design", help="search window vertices for the best weights")
    common(p, weights=False)
    p.add_argument("--mode", choices=("joint", "tied", "cascade"), default="joint")
    p.add_argument("--max-halfwidth", type=int, help="largest vertex half-width L")
    p.add_argument("--report", help="report JSON path (default: <output>.report.json)")
    p.add_argument("--jobs", type=int, default=1, help="threads for vertex evaluation")
    p.set_defaults(func=cmd_design)

    p = sub.add_parser("analyze", help="spectrum, effective window and decay root")
    common(p, signal=False)
    p.add_argument("--n", type=int, required=True, help="signal length N")
    p.set_defaults(func=cmd_analyze)
    return parser


def main(argv=None):
    _setup_logging()
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except VerificationError as exc:
        logger.error("%s", exc)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except json.JSONDecodeError as exc:
        print(f"error: invalid JSON: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
