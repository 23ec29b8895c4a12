"""Command-line front end.

Exit codes: 0 success, 2 usage error, 3 data/format error, 4 precondition
violation. Every subcommand accepts ``--config FILE`` holding ``key = value``
lines; flags given on the command line take precedence.
"""

import argparse
import os
import sys

import numpy as np

from . import _backend
from .config import PipelineConfig, parse_bool, parse_config_text
from .detection import (DEFAULT_THRESHOLD, detect, out_of_band_fraction, select_feature_scales,
                        single_scale, spectrum)
from .filters import get_filter
from .io import read_matrix, read_signal, write_csv, write_matrix
from .operator import (ExtractionOperator, FormatError, ScaleMask, apply_operator, bench_compare,
                       build_operator, extract_iterative)
from .synth import BlockDesign, generate

EXIT_USAGE, EXIT_DATA, EXIT_PRECONDITION = 2, 3, 4


def _int_at_least(lo):
    def conv(text):
        try:
            value = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
        if value < lo:
            raise argparse.ArgumentTypeError(f"must be >= {lo}, got {value}")
        return value
    return conv


def _onoff(text):
    try:
        return parse_bool(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _floats(text):
    try:
        return tuple(float(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _add_pipeline(p, keep=True):
    p.add_argument("--wavelet", default="d4", help="haar or d4 (default: d4)")
    p.add_argument("--depth", type=_int_at_least(1), default=3)
    p.add_argument("--refilter", type=_onoff, default=True, metavar="on|off")
    if keep:
        p.add_argument("--keep", default="all", help="all, none, or a list such as r1,r3,approx")


def build_parser():
    parser = argparse.ArgumentParser(prog="wavefeat", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    subs = {}

    def add(name, func, help):
        p = sub.add_parser(name, help=help, description=help)
        p.add_argument("--config", help="key = value file; flags override it")
        p.set_defaults(func=func)
        subs[name] = p
        return p

    p = add("synth", cmd_synth, "generate a synthetic block-design voxel dataset")
    p.add_argument("--T", type=_int_at_least(4), help="time points (required)")
    p.add_argument("--P", type=_int_at_least(1), help="voxel count (required)")
    p.add_argument("--frac-active", type=float, default=0.05)
    p.add_argument("--amplitude", type=float, default=1.0)
    p.add_argument("--noise-sigma", type=float, default=1.0)
    p.add_argument("--drift", type=_floats, default=None,
                   help="polynomial coefficients in t/T (default: 0,0.5*noise_sigma)")
    p.add_argument("--dt", type=float, default=2.0, help="seconds per time point")
    p.add_argument("--block-len", type=_int_at_least(1), default=16)
    p.add_argument("--block-on", type=_int_at_least(1))
    p.add_argument("--block-off", type=_int_at_least(1))
    p.add_argument("--seed", type=int, help="random seed (required)")
    p.add_argument("--out-dir", default=".")
    p.add_argument("--prefix", default="")
    p.add_argument("--format", choices=("fvx", "csv"), default="fvx")

    p = add("extract", cmd_extract, "apply wavelet feature extraction to a voxel matrix")
    p.add_argument("--input", help="voxel matrix (FVX1 or CSV)")
    p.add_argument("--output", help="extracted matrix; .csv suffix selects CSV")
    _add_pipeline(p)
    p.add_argument("--mode", choices=("matrix", "iterative"), default="matrix")
    p.add_argument("--operator-in", help="load a compiled operator instead of building one")
    p.add_argument("--operator-out", help="save the compiled operator")
    p.add_argument("--block-size", type=_int_at_least(1))

    p = add("detect", cmd_detect, "correlate extracted voxels with the extracted reference")
    p.add_argument("--input", help="voxel matrix (FVX1 or CSV)")
    p.add_argument("--reference", help="reference signal CSV")
    p.add_argument("--output", help="activation CSV")
    _add_pipeline(p)
    p.add_argument("--mode", choices=("matrix", "iterative"), default="matrix")
    p.add_argument("--operator-in")
    p.add_argument("--threshold", type=float, default=DEFAULT_THRESHOLD)
    p.add_argument("--truth", help="truth CSV; prints a confusion summary")

    p = add("spectrum", cmd_spectrum, "one-sided magnitude spectrum, optionally of one scale")
    p.add_argument("--input", help="signal CSV")
    p.add_argument("--column", help="CSV column (default: last)")
    p.add_argument("--tone", type=float, help="use a cosine probe at this DFT bin instead of --input")
    p.add_argument("--T", type=_int_at_least(4), default=256, help="probe length for --tone")
    p.add_argument("--scale", help="single scale to reconstruct first, e.g. r2 or l3")
    _add_pipeline(p, keep=False)
    p.add_argument("--dt", type=float, default=1.0)
    p.add_argument("--output", help="spectrum CSV")

    p = add("scales", cmd_scales, "rank wavelet scales of a reference signal")
    p.add_argument("--input", help="reference signal CSV")
    p.add_argument("--column")
    _add_pipeline(p, keep=False)
    p.add_argument("--k", type=_int_at_least(1), default=2)
    p.add_argument("--output")

    p = add("bench", cmd_bench, "time per-voxel extraction against the compiled operator")
    p.add_argument("--T", type=_int_at_least(4), default=128)
    p.add_argument("--P", type=_int_at_least(1), nargs="+", default=[1000, 10000])
    _add_pipeline(p)
    p.add_argument("--repetitions", type=_int_at_least(1), default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--backend", choices=("auto", "python", "native"), default="auto")
    p.add_argument("--output", help="also write the table as CSV")
    return parser, subs


def _require(sub, args, *names):
    missing = ["--" + n.replace("_", "-") for n in names if getattr(args, n, None) is None]
    if missing:
        sub.error("the following arguments are required: " + ", ".join(missing))


def _pipeline(args):
    f = get_filter(args.wavelet)
    mask = ScaleMask.parse(getattr(args, "keep", "all"), args.depth)
    return f, mask, args.refilter


def _config(args, **extra):
    cfg = PipelineConfig(
        wavelet=getattr(args, "wavelet", "d4"), depth=getattr(args, "depth", 3),
        refilter=getattr(args, "refilter", True), keep=getattr(args, "keep", "all"),
        threshold=getattr(args, "threshold", DEFAULT_THRESHOLD), seed=getattr(args, "seed", 0) or 0,
        input=getattr(args, "input", "") or "", output=getattr(args, "output", "") or "")
    return cfg.hash(command=args.command, **extra)


def cmd_synth(args, sub):
    _require(sub, args, "T", "P", "seed")
    if args.block_on or args.block_off:
        on = args.block_on or args.block_len
        off = args.block_off or args.block_len
        if args.T % (on + off):
            raise ValueError(f"--T {args.T} is not a whole number of {on}+{off} cycles")
        design = BlockDesign(args.dt, on, off, args.T // (on + off))
    else:
        design = BlockDesign.for_length(args.T, args.block_len, args.dt)
    ds = generate(design, args.P, args.frac_active, args.amplitude, args.noise_sigma,
                  args.drift, args.seed)
    h = _config(args, **{k: v for k, v in ds.params.items()})
    os.makedirs(args.out_dir, exist_ok=True)
    stem = os.path.join(args.out_dir, args.prefix)
    vpath = stem + ("voxels.csv" if args.format == "csv" else "voxels.fvx")
    write_matrix(vpath, ds.V, h)
    write_csv(stem + "reference.csv", {"t": np.arange(design.T), "U": ds.U}, h)
    write_csv(stem + "truth.csv", {"voxel": np.arange(args.P), "active": ds.truth.astype(np.int64)}, h)
    print(f"wrote {vpath}, {stem}reference.csv, {stem}truth.csv "
          f"(T={design.T}, P={args.P}, active={int(ds.truth.sum())}, config={h})")


def _extractor(args, T):
    """Return (callable applied to a (T, P) or (T,) array, hash-relevant extras)."""
    if args.operator_in:
        op = ExtractionOperator.load(args.operator_in)
        if args.mode != "matrix":
            raise ValueError("--operator-in requires --mode matrix")
        if op.T != T:
            raise ValueError(f"operator is for T={op.T} but the data has T={T}")
        extras = dict(operator=op.filter_name, op_depth=op.depth, op_keep=op.mask.describe(),
                      op_refilter=op.refilter)
        return (lambda x: apply_operator(op, x, getattr(args, "block_size", None))), op, extras
    f, mask, refilter = _pipeline(args)
    if args.mode == "iterative":
        def run(x):
            x = np.asarray(x, dtype=np.float64)
            if x.ndim == 1:
                return extract_iterative(x, f, mask, refilter)
            out = np.empty_like(x)
            for p in range(x.shape[1]):
                out[:, p] = extract_iterative(x[:, p], f, mask, refilter)
            return out
        return run, None, {}
    op = build_operator(f, mask, refilter, T)
    return (lambda x: apply_operator(op, x, getattr(args, "block_size", None))), op, {}


def cmd_extract(args, sub):
    _require(sub, args, "input", "output")
    V = read_matrix(args.input)
    run, op, extras = _extractor(args, V.shape[0])
    if args.operator_out:
        if op is None:
            f, mask, refilter = _pipeline(args)
            op = build_operator(f, mask, refilter, V.shape[0])
        op.save(args.operator_out)
    write_matrix(args.output, run(V), _config(args, **extras))
    print(f"wrote {args.output} (T={V.shape[0]}, P={V.shape[1]}, mode={args.mode})")


def _reference(path, column=None):
    from .io import read_csv
    names, _ = read_csv(path)
    if column is None and "U" in names:
        column = "U"
    return read_signal(path, column)


def cmd_detect(args, sub):
    _require(sub, args, "input", "reference", "output")
    V = read_matrix(args.input)
    U = _reference(args.reference)
    if U.shape[0] != V.shape[0]:
        raise ValueError(f"reference has {U.shape[0]} time points, voxel matrix has {V.shape[0]}")
    run, _, extras = _extractor(args, V.shape[0])
    amap = detect(run(V), run(U), args.threshold)
    write_csv(args.output, {
        "voxel": np.arange(V.shape[1]), "r": amap.r, "C": amap.C,
        "active": amap.active.astype(np.int64), "degenerate": amap.degenerate.astype(np.int64),
    }, _config(args, **extras))
    line = f"active={amap.n_active}/{V.shape[1]} threshold={amap.threshold} A={amap.A}"
    if args.truth:
        truth = read_signal(args.truth, "active").astype(bool)
        if truth.size != V.shape[1]:
            raise ValueError(f"truth has {truth.size} voxels, data has {V.shape[1]}")
        tp = int(np.sum(truth & amap.active))
        fp = int(np.sum(~truth & amap.active))
        fn = int(np.sum(truth & ~amap.active))
        line += f" tp={tp} fp={fp} fn={fn} exact={'yes' if fp == fn == 0 else 'no'}"
    print(line)


def cmd_spectrum(args, sub):
    if args.tone is None:
        _require(sub, args, "input")
        x = read_signal(args.input, args.column)
    else:
        t = np.arange(args.T)
        x = np.cos(2 * np.pi * args.tone * t / args.T)
    _require(sub, args, "output")
    extras = dict(scale=args.scale, dt=args.dt, tone=args.tone, T=x.size if args.tone is not None else None)
    if args.scale:
        f = get_filter(args.wavelet)
        x = single_scale(x, f, args.scale, args.depth, args.refilter)
    spec = spectrum(x, args.dt)
    write_csv(args.output, {"bin": spec.bins, "freq": spec.freq, "magnitude": spec.magnitude},
              _config(args, **extras))
    msg = f"wrote {args.output}"
    if args.scale:
        frac = out_of_band_fraction(x, args.scale, args.depth)
        msg += f" out_of_band_fraction={frac:.6e}"
    print(msg)


def cmd_scales(args, sub):
    _require(sub, args, "input")
    U = _reference(args.input, args.column)
    ranked = select_feature_scales(U, get_filter(args.wavelet), args.depth, args.refilter, args.k)
    print(f"{'rank':>4}  {'scale':<6}{'score':>14}{'energy':>14}{'corr':>10}  characteristic")
    for i, s in enumerate(ranked, start=1):
        print(f"{i:>4}  {s.scale:<6}{s.score:>14.6g}{s.energy:>14.6g}{s.corr:>10.4f}  "
              f"{'yes' if s.characteristic else 'no'}")
    if args.output:
        write_csv(args.output, {
            "rank": np.arange(1, len(ranked) + 1),
            "scale_index": np.array([_scale_index(s.scale) for s in ranked]),
            "score": np.array([s.score for s in ranked]),
            "energy": np.array([s.energy for s in ranked]),
            "corr": np.array([s.corr for s in ranked]),
            "characteristic": np.array([int(s.characteristic) for s in ranked]),
        }, _config(args, k=args.k))


def _scale_index(name):
    """``r<j>`` -> j, approximation -> 0 (numeric column for CSV)."""
    return 0 if name.startswith("l") else int(name[1:])


BENCH_COLUMNS = ("mode", "T", "P", "wall_ms", "speedup", "max_discrepancy")


def cmd_bench(args, sub):
    previous = None
    if args.backend != "auto":
        previous = _backend.set_backend(args.backend)
    try:
        f, mask, refilter = _pipeline(args)
        rows = []
        for P in args.P:
            rep = bench_compare(args.T, P, f, mask, refilter, args.repetitions, args.seed)
            rows.append(("iterative", rep.T, rep.P, 1e3 * rep.iterative_s, 1.0, rep.max_discrepancy))
            rows.append(("matrix", rep.T, rep.P, 1e3 * rep.matrix_s, rep.speedup, rep.max_discrepancy))
        backend = _backend.active()
    finally:
        if previous is not None:
            _backend.set_backend(previous)
    print(f"# backend={backend} wavelet={args.wavelet} depth={args.depth} "
          f"refilter={'on' if refilter else 'off'} keep={mask.describe()} reps={args.repetitions}")
    print(f"{'mode':<10}{'T':>6}{'P':>8}{'wall_ms':>12}{'speedup':>10}{'max_discrepancy':>18}")
    for mode, T, P, ms, sp, disc in rows:
        print(f"{mode:<10}{T:>6}{P:>8}{ms:>12.3f}{sp:>10.2f}{disc:>18.3e}")
    if args.output:
        write_csv(args.output, {
            "mode": np.array([0 if r[0] == "iterative" else 1 for r in rows]),
            "T": np.array([r[1] for r in rows]), "P": np.array([r[2] for r in rows]),
            "wall_ms": np.array([r[3] for r in rows]), "speedup": np.array([r[4] for r in rows]),
            "max_discrepancy": np.array([r[5] for r in rows]),
        }, _config(args, T=args.T, P=list(args.P), backend=backend))
    return rows


def _apply_config_file(parser, subs, argv):
    """Re-parse with config-file values installed as defaults of the chosen subcommand."""
    args = parser.parse_args(argv)
    if not args.config:
        return args
    with open(args.config) as fh:
        values = parse_config_text(fh.read())
    sub = subs[args.command]
    dests = {a.dest for a in sub._actions}
    usable = {k: v for k, v in values.items() if k in dests and k not in ("config", "help")}
    for key, value in usable.items():
        action = next(a for a in sub._actions if a.dest == key)
        if action.nargs in ("+", "*"):
            usable[key] = [action.type(v) if action.type else v for v in value.replace(",", " ").split()]
    sub.set_defaults(**usable)
    return parser.parse_args(argv)


def main(argv=None):
    parser, subs = build_parser()
    try:
        args = _apply_config_file(parser, subs, argv)
    except OSError as exc:
        print(f"wavefeat: cannot read config: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as exc:
        print(f"wavefeat: bad config file: {exc}", file=sys.stderr)
        return EXIT_DATA
    try:
        args.func(args, subs[args.command])
    except FormatError as exc:
        print(f"wavefeat: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"wavefeat: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as exc:
        print(f"wavefeat: precondition violated: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    return 0
