"""Compare the numba kernel path against the pure-numpy fallback.

Runs both implementations on identical inputs in one process and reports
per-call times for the three hot kernels plus a full EM solve.  Usage:

    python3 benchmarks/bench_em.py [--frame-len 128] [--repeats 200]
"""

import argparse
import time

import numpy as np

from fdshift import _kernels, estimator
from fdshift.channel import ChannelPair, synthesize_frame
from fdshift.constellation import make_qam, shift


def make_problem(n, eb_n0_db, seed=0):
    rng = np.random.default_rng(seed)
    eb = 10.0 ** (eb_n0_db / 10.0)
    alpha = shift(make_qam(16, eb), 0.2)
    x_a = alpha.points[rng.integers(0, 16, n)]
    x_b = alpha.points[rng.integers(0, 16, n)]
    h_aa = complex(*rng.standard_normal(2)) * 316.0
    h_ba = complex(*rng.standard_normal(2)) / np.sqrt(2)
    frame = synthesize_frame(x_a, x_b, ChannelPair(h_aa, h_ba, 1.0), rng=rng)
    return frame, alpha


def time_call(fn, repeats):
    fn()  # warm-up (and numba compilation on the first call)
    t0 = time.perf_counter()
    for _ in range(repeats):
        fn()
    return (time.perf_counter() - t0) / repeats


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--frame-len", type=int, default=128)
    ap.add_argument("--eb-n0-db", type=float, default=10.0)
    ap.add_argument("--repeats", type=int, default=200)
    args = ap.parse_args()

    if not _kernels.USE_NUMBA:
        print("numba path unavailable (FDSHIFT_DISABLE_NUMBA set or numba "
              "missing); benchmarking the numpy path only")

    frame, alpha = make_problem(args.frame_len, args.eb_n0_db)
    y, x_a, points = frame.y, frame.x_a, alpha.points
    h_aa, h_ba = 1.0 + 0.5j, 0.4 - 0.2j
    t = _kernels.posterior_np(y, x_a, h_aa, h_ba, points, 1.0)

    paths = {"numpy": (_kernels.posterior_np, _kernels.loglik_sum_np,
                       _kernels.mstep_sums_np)}
    if _kernels.USE_NUMBA:
        paths["numba"] = (_kernels.posterior_nb, _kernels.loglik_sum_nb,
                          _kernels.mstep_sums_nb)

    print(f"frame_len={args.frame_len}, 16-QAM, "
          f"Eb/N0={args.eb_n0_db} dB, {args.repeats} repeats")
    print(f"{'kernel':<14}" + "".join(f"{name:>12}" for name in paths))
    rows = {
        "posterior": lambda p: p[0](y, x_a, h_aa, h_ba, points, 1.0),
        "loglik_sum": lambda p: p[1](y, x_a, h_aa, h_ba, points, 1.0),
        "mstep_sums": lambda p: p[2](t, y, x_a, points),
    }
    for label, call in rows.items():
        times = [time_call(lambda p=p: call(p), args.repeats)
                 for p in paths.values()]
        print(f"{label:<14}" + "".join(f"{1e6 * v:>10.1f}us" for v in times))

    em_times = []
    saved = (_kernels.posterior, _kernels.loglik_sum, _kernels.mstep_sums)
    try:
        for p in paths.values():
            _kernels.posterior, _kernels.loglik_sum, _kernels.mstep_sums = p
            em_times.append(time_call(
                lambda: estimator.em_estimate(y, x_a, alpha, 1.0),
                max(1, args.repeats // 10)))
    finally:
        _kernels.posterior, _kernels.loglik_sum, _kernels.mstep_sums = saved
    print(f"{'em_estimate':<14}"
          + "".join(f"{1e3 * v:>10.2f}ms" for v in em_times))
    if len(em_times) == 2:
        print(f"speedup (numba over numpy): {em_times[0] / em_times[1]:.1f}x")


if __name__ == "__main__":
    main()
