"""Command-line frontend: sweep, bound, check-constellation, demo-em."""

from __future__ import annotations

import argparse
import hashlib
import sys
from pathlib import Path

import numpy as np

from . import __version__, _kernels
from .bounds import mse_lower_bound
from .channel import ChannelPair, FadingConfig, sample_h_aa, sample_h_ba, \
    synthesize_frame, trial_streams
from .constellation import Constellation, check_symmetry, load_points, make_qam, shift
from .estimator import em_estimate, merge_channels
from .montecarlo import ExperimentConfig, sweep, write_csv

_GRID_KEYS = {"beta_grid", "eb_n0_db_grid", "sir_db_grid"}
_INT_KEYS = {"order", "frame_len", "trials", "master_seed", "n_pilots",
             "em_max_iter", "workers"}
_FLOAT_KEYS = {"rician_k", "n0", "em_tol", "beta_b"}


def load_config(path) -> ExperimentConfig:
    """Flat key=value config; '#' comments; grids as comma-separated lists."""
    kwargs = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key=value")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key in _GRID_KEYS:
            kwargs[key] = tuple(float(v) for v in value.split(","))
        elif key in _INT_KEYS:
            kwargs[key] = int(value)
        elif key in _FLOAT_KEYS:
            kwargs[key] = float(value)
        elif key == "rician_k_db":
            kwargs["rician_k"] = 10.0 ** (float(value) / 10.0)
        elif key == "estimators":
            kwargs["estimators"] = tuple(v.strip() for v in value.split(","))
        else:
            raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
    return ExperimentConfig(**kwargs)


def parse_args(argv=None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(prog="fdshift")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="run a Monte Carlo sweep and write CSV")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--full", action="store_true",
                   help="override trials to 5000")

    p = sub.add_parser("bound", help="print the MSE lower bound for a grid")
    p.add_argument("--n", default="128")
    p.add_argument("--e", default="1")
    p.add_argument("--beta", default="0.2")
    p.add_argument("--sigma2", default="1")

    p = sub.add_parser("check-constellation",
                       help="report the symmetry witness of a points file")
    p.add_argument("--file", required=True)
    p.add_argument("--beta", type=float, default=None,
                   help="apply the asymmetry shift before checking")
    p.add_argument("--tol", type=float, default=1e-9)

    p = sub.add_parser("demo-em", help="run one seeded EM trial and print the trace")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--eb-n0-db", type=float, default=10.0)
    p.add_argument("--beta", type=float, default=0.2)
    p.add_argument("--sir-db", type=float, default=-50.0)
    p.add_argument("--frame-len", type=int, default=128)

    return parser.parse_args(argv)


def _grid(text: str):
    return [float(v) for v in str(text).split(",")]


def _cmd_bound(args) -> int:
    print("n,e,beta,sigma2,bound,bound_per_channel")
    for n in _grid(args.n):
        for e in _grid(args.e):
            for beta in _grid(args.beta):
                for s2 in _grid(args.sigma2):
                    b = mse_lower_bound(int(n), e, beta, s2)
                    print(f"{n:.17g},{e:.17g},{beta:.17g},{s2:.17g},"
                          f"{b:.17g},{2 * b:.17g}")
    return 0


def _cmd_check(args) -> int:
    points = load_points(args.file)
    if args.beta is not None:
        points = shift(Constellation(points), args.beta).points
    witness = check_symmetry(points, tol=args.tol)
    if witness is None:
        print("identifiable")
    else:
        print(f"symmetric: c = {witness.ratio:.12g}, "
              f"orbit length {witness.orbit_length}")
    return 0


def _cmd_demo(args) -> int:
    streams = trial_streams(args.seed)
    eb = 10.0 ** (args.eb_n0_db / 10.0)
    shifted = shift(make_qam(16, eb), args.beta)
    fad = FadingConfig(sir_db=args.sir_db)
    ch = ChannelPair(sample_h_aa(fad, streams["h_aa"], zeta_rng=streams["zeta"]),
                     sample_h_ba(fad, streams["h_ba"]), 1.0)
    n = args.frame_len
    idx_a = streams["symbols_a"].integers(0, 16, n)
    idx_b = streams["symbols_b"].integers(0, 16, n)
    frame = synthesize_frame(shifted.points[idx_a], shifted.points[idx_b],
                             ch, rng=streams["noise"])
    report = em_estimate(frame.y, frame.x_a, shifted, 1.0)
    for i, ll in enumerate(report.loglik_trace, 1):
        print(f"iter {i:3d}  loglik {ll:.6f}")
    truth = merge_channels(ch.h_aa, ch.h_ba)
    print(f"converged: {report.converged} after {report.iterations} iterations")
    print(f"estimate:  {np.array2string(report.estimate, precision=6)}")
    print(f"truth:     {np.array2string(truth, precision=6)}")
    return 0


def _cmd_sweep(args) -> int:
    cfg = load_config(args.config)
    if args.full:
        cfg.trials = 5000
    if args.trials is not None:
        cfg.trials = args.trials
    if args.seed is not None:
        cfg.master_seed = args.seed
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rows = sweep(cfg)
    write_csv(rows, out / "results.csv")
    config_text = Path(args.config).read_text()
    meta = [
        f"fdshift {__version__}",
        f"kernels: {'numba' if _kernels.USE_NUMBA else 'numpy'}",
        f"config sha256: {hashlib.sha256(config_text.encode()).hexdigest()}",
        f"master_seed: {cfg.master_seed}",
        f"trials: {cfg.trials}",
        "mse/bound columns are per complex channel, E|h_hat - h|^2",
        "--- config ---",
        config_text.rstrip("\n"),
    ]
    (out / "meta.txt").write_text("\n".join(meta) + "\n")
    print(f"wrote {out / 'results.csv'} ({len(rows)} rows)")
    return 0


def run(args: argparse.Namespace) -> int:
    handlers = {"sweep": _cmd_sweep, "bound": _cmd_bound,
                "check-constellation": _cmd_check, "demo-em": _cmd_demo}
    return handlers[args.command](args)


def main(argv=None) -> int:
    args = parse_args(argv)
    try:
        return run(args)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
