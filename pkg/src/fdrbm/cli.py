"""Command line interface.

Subcommands: train-rbm, train-stack, collinearity-scan, feature-scan,
gradcheck, reconstruct.  Every option can also come from a line-oriented
`key = value` config file (--config); explicit flags override file values.

Exit codes: 0 success, 2 configuration error, 3 I/O or file-format error,
4 numerical divergence.  `gradcheck` exits 1 when a cell fails tolerance.
"""

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import experiments, gradcheck as gradcheck_mod, io, rbm, stack as stack_mod
from .exceptions import ConfigError, DataFormatError, DivergenceError
from .metrics import mse

DEFAULT_SEED = 42
DEFAULT_EPOCHS = 100


def _positive_int(text):
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return v


def _size_list(text):
    try:
        sizes = tuple(int(p) for p in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated size list: {text!r}")
    if any(s <= 0 for s in sizes):
        raise argparse.ArgumentTypeError("sizes must be positive")
    return sizes


def _parse_bool(text):
    low = str(text).strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"not a boolean: {text!r}")


def _add_common(sub):
    sub.add_argument("--config", help="key = value config file; flags override it")
    sub.add_argument("--seed", type=int, default=DEFAULT_SEED)
    sub.add_argument("--verbose", action="store_true", help="progress lines on stderr")


def _add_training(sub):
    sub.add_argument("--scheme", choices=rbm.SCHEMES, default="gd")
    sub.add_argument("--rate", type=float, default=None,
                     help="learning rate (default 0.01 gd / 0.005 fd)")
    sub.add_argument("--energy", choices=rbm.ENERGY_VARIANTS, default="plain")
    sub.add_argument("--epochs", type=_positive_int, default=DEFAULT_EPOCHS)
    sub.add_argument("--no-shuffle", action="store_true")


def _add_image_io(sub):
    sub.add_argument("--images", help="IDX image file")
    sub.add_argument("--out-dir")
    sub.add_argument("--limit", type=_positive_int, default=9000,
                     help="training images taken from the front of the file")
    sub.add_argument("--test-count", type=_positive_int, default=1000,
                     help="held-out images taken after the training slice")
    sub.add_argument("--triplets", type=_positive_int, default=10,
                     help="held-out images rendered as PGM triplets")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="fdrbm",
        description="squared-error training of symmetric two-layer mappings",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    registry = {}

    sub = subparsers.add_parser("train-rbm", help="train one model on IDX images")
    sub.add_argument("--shape", type=_size_list, metavar="M,N")
    sub.add_argument("--act-h", default="identity")
    sub.add_argument("--act-v", default="identity")
    _add_image_io(sub)
    _add_training(sub)
    _add_common(sub)
    sub.set_defaults(func=cmd_train_rbm)
    registry["train-rbm"] = sub

    sub = subparsers.add_parser("train-stack", help="greedy layer-wise training")
    sub.add_argument("--stack", type=_size_list, metavar="S0,S1,...")
    sub.add_argument("--act-h", default="identity",
                     help="hidden activation for every layer")
    sub.add_argument("--act-v", default="identity",
                     help="visible activation of the first layer")
    _add_image_io(sub)
    _add_training(sub)
    _add_common(sub)
    sub.set_defaults(func=cmd_train_stack)
    registry["train-stack"] = sub

    sub = subparsers.add_parser("collinearity-scan",
                                help="reconstruction error vs hidden node count")
    sub.add_argument("--out-dir")
    sub.add_argument("--no-standardize", action="store_true")
    _add_training(sub)
    _add_common(sub)
    sub.set_defaults(func=cmd_collinearity_scan)
    registry["collinearity-scan"] = sub

    sub = subparsers.add_parser("feature-scan",
                                help="reconstruction error vs feature dimension")
    sub.add_argument("--out-dir")
    sub.add_argument("--no-standardize", action="store_true")
    _add_training(sub)
    _add_common(sub)
    sub.set_defaults(func=cmd_feature_scan)
    registry["feature-scan"] = sub

    sub = subparsers.add_parser("gradcheck",
                                help="analytic gradients vs central differences")
    sub.add_argument("--seeds", type=_positive_int, default=20)
    sub.add_argument("--step", type=float, default=1e-5)
    sub.add_argument("--tol", type=float, default=1e-6)
    _add_common(sub)
    sub.set_defaults(func=cmd_gradcheck)
    registry["gradcheck"] = sub

    sub = subparsers.add_parser("reconstruct",
                                help="run images through a saved model or stack")
    sub.add_argument("--model")
    sub.add_argument("--images", required=True)
    sub.add_argument("--out-dir")
    sub.add_argument("--count", type=_positive_int, default=10)
    sub.add_argument("--offset", type=_positive_int, default=0)
    _add_common(sub)
    sub.set_defaults(func=cmd_reconstruct)
    registry["reconstruct"] = sub

    return parser, registry


def load_config_file(path, sub):
    """Parse `key = value` lines into converted defaults for one subparser."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as err:
        raise DataFormatError(f"cannot read config file {path}: {err}") from None
    actions = {a.dest: a for a in sub._actions}
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        key, _, value = line.partition("=")
        dest = key.strip().lower().replace("-", "_")
        value = value.strip()
        action = actions.get(dest)
        if action is None or dest in ("config", "help"):
            raise ConfigError(f"{path}:{lineno}: unknown option '{key.strip()}'")
        if isinstance(action, (argparse._StoreTrueAction, argparse._StoreFalseAction)):
            values[dest] = _parse_bool(value)
        elif action.choices is not None and value not in action.choices:
            raise ConfigError(
                f"{path}:{lineno}: '{value}' not one of {sorted(action.choices)}"
            )
        else:
            try:
                values[dest] = action.type(value) if action.type else value
            except (ValueError, argparse.ArgumentTypeError) as err:
                raise ConfigError(f"{path}:{lineno}: bad value for '{dest}': {err}") from None
    return values


def parse_args(argv):
    parser, registry = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "config", None):
        sub = registry[args.command]
        sub.set_defaults(**load_config_file(args.config, sub))
        args = parser.parse_args(argv)
    return args


# ---------------------------------------------------------------------------
# shared helpers

def _say(args, message):
    if args.verbose:
        print(message, file=sys.stderr)


def _require(args, *names):
    """Options that must arrive via flag or config file."""
    missing = [n for n in names if getattr(args, n.replace("-", "_")) is None]
    if missing:
        raise ConfigError("missing required option(s): "
                          + ", ".join(f"--{n}" for n in missing))


def _out_dir(args):
    path = Path(args.out_dir)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _train_config(args):
    rate = args.rate
    if rate is None:
        rate = 0.01 if args.scheme == "gd" else 0.005
    if rate <= 0:
        raise ConfigError(f"learning rate must be positive, got {rate}")
    return rbm.TrainConfig(
        scheme=args.scheme, rate=rate, energy_variant=args.energy,
        epochs=args.epochs, seed=args.seed, shuffle=not args.no_shuffle,
    )


def _load_split(args):
    images = io.read_idx(args.images)
    n_train = min(args.limit, images.count)
    n_test = min(args.test_count, images.count - n_train)
    train = images.samples(0, n_train)
    test = images.samples(n_train, n_test)
    if not train:
        raise ConfigError(f"{args.images}: no training images (limit {args.limit})")
    return images, train, test


def _write_triplets(out_dir, images, test, model_stack, count, verbose_args):
    """PGM triplets (original / reconstruction / feature map) per test image."""
    side = images.rows
    code_len = model_stack.n_hidden
    feat_side = math.isqrt(code_len)
    render_features = feat_side * feat_side == code_len
    if not render_features:
        _say(verbose_args, f"feature maps skipped: {code_len} is not a square")
    scale_rows = []
    clamped = 0
    for i, x in enumerate(test[:count]):
        code = stack_mod.encode(model_stack, x)
        recon = stack_mod.decode(model_stack, code)
        clamped += io.write_pgm(x.reshape(side, side), out_dir / f"img{i:03d}_original.pgm")
        clamped += io.write_pgm(recon.reshape(side, side), out_dir / f"img{i:03d}_recon.pgm")
        if render_features:
            flat = code.ravel()
            lo, hi = float(flat.min()), float(flat.max())
            span = hi - lo if hi > lo else 1.0
            io.write_pgm(((flat - lo) / span).reshape(feat_side, feat_side),
                         out_dir / f"img{i:03d}_features.pgm")
            scale_rows.append((i, lo, hi))
    if render_features:
        io.write_csv(out_dir / "features_scale.csv", scale_rows,
                     header=("image", "lo", "hi"))
    if clamped:
        _say(verbose_args, f"{clamped} reconstruction values clamped to [0, 1]")


def _run_stack_training(args, sizes):
    out_dir = _out_dir(args)
    images, train, test = _load_split(args)
    pixels = images.rows * images.cols
    if sizes[0] != pixels:
        raise ConfigError(
            f"first size {sizes[0]} does not match image dimension {pixels}"
        )
    n_visible, specs = stack_mod.specs_from_sizes(
        sizes, act_h=args.act_h, act_v=args.act_v
    )
    config = _train_config(args)

    def progress(layer, epoch, energy_value):
        _say(args, f"layer {layer + 1} epoch {epoch + 1}: mean energy {energy_value:.6g}")

    trained, traces = stack_mod.train_greedy(
        n_visible, specs, train, config, callback=progress
    )
    if len(trained.layers) == 1:
        io.save_model(trained.layers[0], out_dir / "model.dmfd")
        io.write_csv(out_dir / "energy.csv",
                     [(e + 1, v) for e, v in enumerate(traces[0])],
                     header=("epoch", "mean_energy"))
    else:
        io.save_stack(trained, out_dir / "model.dmfd")
        for k, trace in enumerate(traces, start=1):
            io.write_csv(out_dir / f"energy_layer{k}.csv",
                         [(e + 1, v) for e, v in enumerate(trace)],
                         header=("epoch", "mean_energy"))
    _write_triplets(out_dir, images, test, trained, args.triplets, args)
    return 0


# ---------------------------------------------------------------------------
# subcommands

def cmd_train_rbm(args):
    _require(args, "shape", "images", "out-dir")
    if len(args.shape) != 2:
        raise ConfigError(f"--shape wants M,N; got {args.shape}")
    return _run_stack_training(args, args.shape)


def cmd_train_stack(args):
    _require(args, "stack", "images", "out-dir")
    if len(args.stack) < 2:
        raise ConfigError(f"--stack wants at least two sizes; got {args.stack}")
    return _run_stack_training(args, args.stack)


def _run_scan(args, runner, default_rate, filename):
    _require(args, "out-dir")
    out_dir = _out_dir(args)
    rate = args.rate if args.rate is not None else default_rate
    if rate <= 0:
        raise ConfigError(f"learning rate must be positive, got {rate}")

    def progress(param, value):
        _say(args, f"{filename}: {param} -> mse {value:.6g}")

    curve, diverged = runner(
        seed=args.seed, epochs=args.epochs, rate=rate, scheme=args.scheme,
        standardize=not args.no_standardize, on_result=progress,
    )
    io.write_csv(out_dir / filename, curve.rows(), header=curve.header())
    for param in diverged:
        print(f"warning: training diverged at {curve.param_name}={param}",
              file=sys.stderr)
    return 0


def cmd_collinearity_scan(args):
    return _run_scan(args, experiments.collinearity_curve,
                     experiments.COLLINEARITY_RATE, "collinearity.csv")


def cmd_feature_scan(args):
    return _run_scan(args, experiments.feature_curve,
                     experiments.FEATURE_RATE, "feature.csv")


def cmd_gradcheck(args):
    cells = gradcheck_mod.run_gradcheck(n_seeds=args.seeds, step=args.step,
                                        seed0=1000 + args.seed)
    failed = 0
    for cell in cells:
        ok = cell.max_error <= args.tol
        failed += 0 if ok else 1
        status = "ok  " if ok else "FAIL"
        repairs = f"  kink-nudges={cell.repairs}" if cell.repairs else ""
        print(f"{status} {cell.label}  max-rel-err={cell.max_error:.3e}{repairs}")
    print(f"{len(cells) - failed}/{len(cells)} cells within {args.tol:g}")
    return 1 if failed else 0


def cmd_reconstruct(args):
    _require(args, "model", "images", "out-dir")
    out_dir = _out_dir(args)
    trained = io.load_any(args.model)
    images = io.read_idx(args.images)
    pixels = images.rows * images.cols
    if trained.n_visible != pixels:
        raise ConfigError(
            f"model expects {trained.n_visible} inputs, images carry {pixels}"
        )
    count = min(args.count, images.count - args.offset)
    batch = images.samples(args.offset, count)
    _write_triplets(out_dir, images, batch, trained, count, args)
    rows = []
    for i, x in enumerate(batch):
        recon = stack_mod.decode(trained, stack_mod.encode(trained, x))
        rows.append((args.offset + i, mse(recon, x)))
    io.write_csv(out_dir / "recon_mse.csv", rows, header=("image", "mse"))
    return 0


def main(argv=None):
    try:
        args = parse_args(argv)
        return args.func(args)
    except ConfigError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except (DataFormatError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 3
    except DivergenceError as err:
        print(f"error: {err}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
