"""Monte Carlo trial orchestration, sweeps over (beta, Eb/N0, SIR), aggregation.

Each trial draws one channel/noise/symbol realization from named seeded
streams, runs every selected estimator on that identical realization, and
records squared channel errors plus detection bit errors.  The pilot baseline
transmits its own (unshifted, pilot-bearing) frames but reuses the trial's
channel, noise, and symbol-index draws so the comparison is paired.
"""

from __future__ import annotations

import concurrent.futures
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .baselines import EstimationError, head_layout, ls_pilot_estimate, perfect_csi
from .bounds import mse_lower_bound
from .channel import ChannelPair, FadingConfig, sample_h_aa, sample_h_ba, \
    synthesize_frame, trial_streams
from .constellation import make_qam, shift
from .detection import cancel_and_detect
from .estimator import DegenerateUpdateError, DivergenceError, em_estimate, \
    merge_channels, split_channels

ESTIMATORS = ("em", "pilot", "perfect")

CSV_HEADER = ("beta,eb_n0_db,sir_db,estimator,mse_hba,mse_hba_db,"
              "mse_haa,mse_haa_db,ber,bound,bound_db,trials_used,degenerate")


@dataclass
class ExperimentConfig:
    order: int = 16
    frame_len: int = 128
    beta_grid: Tuple[float, ...] = (0.2,)
    eb_n0_db_grid: Tuple[float, ...] = (10.0,)
    sir_db_grid: Tuple[float, ...] = (-50.0,)
    rician_k: float = 1.0
    n0: float = 1.0
    trials: int = 500
    master_seed: int = 20240817
    estimators: Tuple[str, ...] = ESTIMATORS
    n_pilots: int = 64
    beta_b: Optional[float] = None
    em_max_iter: int = 200
    em_tol: float = 1e-8
    workers: int = 1

    def __post_init__(self):
        if self.trials < 1 or self.frame_len < 4:
            raise ValueError("trials >= 1 and frame_len >= 4 required")
        for grid in (self.beta_grid, self.eb_n0_db_grid, self.sir_db_grid):
            if len(grid) == 0:
                raise ValueError("sweep grids must be non-empty")
        unknown = set(self.estimators) - set(ESTIMATORS)
        if unknown:
            raise ValueError(f"unknown estimators: {sorted(unknown)}")


@dataclass(frozen=True)
class SweepPoint:
    beta: float
    eb_n0_db: float
    sir_db: float


@dataclass
class TrialResult:
    phi_true: np.ndarray
    estimates: Dict[str, Optional[np.ndarray]]
    sq_err_coord: Dict[str, np.ndarray]
    bit_errors: Dict[str, int]
    bits_total: Dict[str, int]
    em_iterations: int = 0
    degenerate: Dict[str, bool] = field(default_factory=dict)


@dataclass
class AggregateRow:
    beta: float
    eb_n0_db: float
    sir_db: float
    estimator: str
    mse_hba: float
    mse_haa: float
    ber: float
    bound: float
    trials_used: int
    degenerate: int


def bit_energy(cfg: ExperimentConfig, eb_n0_db: float) -> float:
    return cfg.n0 * 10.0 ** (eb_n0_db / 10.0)


def frame_energy_budget(cfg: ExperimentConfig, point: SweepPoint,
                        scheme: str) -> float:
    """Nominal (expected) transmit energy of one frame under either scheme."""
    e = bit_energy(cfg, point.eb_n0_db) * np.log2(cfg.order)
    n = cfg.frame_len
    if scheme == "em":
        return n * e * (1.0 + point.beta)
    if scheme == "pilot":
        layout = head_layout(n, cfg.n_pilots, point.beta)
        return (layout.n_pilots * e * layout.pilot_energy_factor
                + (n - layout.n_pilots) * e)
    raise ValueError(f"unknown scheme {scheme!r}")


def run_trial(cfg: ExperimentConfig, point: SweepPoint,
              point_index: int = 0, trial_index: int = 0) -> TrialResult:
    streams = trial_streams(cfg.master_seed, point_index, trial_index)
    n = cfg.frame_len
    eb = bit_energy(cfg, point.eb_n0_db)
    base = make_qam(cfg.order, eb)
    shifted_a = shift(base, point.beta)
    shifted_b = shift(base, cfg.beta_b if cfg.beta_b is not None else point.beta)
    sigma2 = cfg.n0

    fad = FadingConfig(var_h_ba=1.0, sir_db=point.sir_db,
                       rician_k=cfg.rician_k, n0=cfg.n0)
    h_ba = sample_h_ba(fad, streams["h_ba"])
    h_aa = sample_h_aa(fad, streams["h_aa"], zeta_rng=streams["zeta"])
    ch = ChannelPair(h_aa, h_ba, sigma2)
    phi_true = merge_channels(h_aa, h_ba)

    idx_a = streams["symbols_a"].integers(0, cfg.order, n)
    idx_b = streams["symbols_b"].integers(0, cfg.order, n)
    rng_noise = streams["noise"]
    noise = np.sqrt(sigma2 / 2.0) * (rng_noise.standard_normal(n)
                                     + 1j * rng_noise.standard_normal(n))

    bits_b = shifted_b.bits(idx_b)
    frame = synthesize_frame(shifted_a.points[idx_a], shifted_b.points[idx_b],
                             ch, noise=noise, bits_b=bits_b)

    result = TrialResult(phi_true=phi_true, estimates={}, sq_err_coord={},
                         bit_errors={}, bits_total={}, degenerate={})

    for name in cfg.estimators:
        try:
            if name == "em":
                report = em_estimate(frame.y, frame.x_a, shifted_b, sigma2,
                                     max_iter=cfg.em_max_iter, tol=cfg.em_tol)
                result.em_iterations = report.iterations
                _record(result, name, report.estimate, phi_true)
                det = cancel_and_detect(frame.y, frame.x_a, report.estimate,
                                        shifted_b, true_bits=bits_b)
                result.bit_errors[name] = det.bit_errors
                result.bits_total[name] = bits_b.size
            elif name == "perfect":
                _record(result, name, perfect_csi(ch), phi_true)
                det = cancel_and_detect(frame.y, frame.x_a, phi_true,
                                        shifted_b, true_bits=bits_b)
                result.bit_errors[name] = det.bit_errors
                result.bits_total[name] = bits_b.size
            elif name == "pilot":
                _run_pilot(cfg, point, result, base, ch, idx_a, idx_b, noise)
        except (DegenerateUpdateError, DivergenceError, EstimationError):
            result.estimates[name] = None
            result.degenerate[name] = True
    return result


def _record(result: TrialResult, name: str, phi_hat: np.ndarray,
            phi_true: np.ndarray) -> None:
    result.estimates[name] = phi_hat
    result.sq_err_coord[name] = (phi_hat - phi_true) ** 2
    result.degenerate[name] = False


def _run_pilot(cfg, point, result, base, ch, idx_a, idx_b, noise) -> None:
    n = cfg.frame_len
    layout = head_layout(n, cfg.n_pilots, point.beta)
    scale = np.sqrt(layout.pilot_energy_factor)
    x_a = base.points[idx_a].copy()
    x_b = base.points[idx_b].copy()
    x_a[layout.positions] *= scale
    x_b[layout.positions] *= scale
    frame = synthesize_frame(x_a, x_b, ch, noise=noise)
    phi_hat = ls_pilot_estimate(frame.y, frame.x_a, x_b[layout.positions], layout)
    _record(result, "pilot", phi_hat, result.phi_true)
    data = np.setdiff1d(np.arange(n), layout.positions)
    if data.size == 0:
        result.bit_errors["pilot"] = 0
        result.bits_total["pilot"] = 0
        return
    true_bits = base.bits(idx_b[data])
    det = cancel_and_detect(frame.y[data], frame.x_a[data], phi_hat, base,
                            true_bits=true_bits)
    result.bit_errors["pilot"] = det.bit_errors
    result.bits_total["pilot"] = true_bits.size


def _trial_star(args) -> TrialResult:
    return run_trial(*args)


def run_point(cfg: ExperimentConfig, point: SweepPoint,
              point_index: int = 0) -> List[TrialResult]:
    jobs = [(cfg, point, point_index, t) for t in range(cfg.trials)]
    if cfg.workers > 1:
        with concurrent.futures.ProcessPoolExecutor(cfg.workers) as pool:
            return list(pool.map(_trial_star, jobs, chunksize=32))
    return [run_trial(*job) for job in jobs]


def aggregate_point(cfg: ExperimentConfig, point: SweepPoint,
                    results: Sequence[TrialResult]) -> List[AggregateRow]:
    e_pre = bit_energy(cfg, point.eb_n0_db) * np.log2(cfg.order)
    bound = mse_lower_bound(cfg.frame_len, e_pre, point.beta, cfg.n0,
                            per_complex_channel=True)
    rows = []
    for name in cfg.estimators:
        good = [r for r in results if not r.degenerate.get(name, True)]
        n_deg = len(results) - len(good)
        if good:
            sq = np.array([r.sq_err_coord[name] for r in good])
            mse_haa = float(np.mean(sq[:, 0] + sq[:, 1]))
            mse_hba = float(np.mean(sq[:, 2] + sq[:, 3]))
        else:
            mse_haa = mse_hba = float("nan")
        errs = sum(r.bit_errors.get(name, 0) for r in good)
        bits = sum(r.bits_total.get(name, 0) for r in good)
        rows.append(AggregateRow(
            beta=point.beta, eb_n0_db=point.eb_n0_db, sir_db=point.sir_db,
            estimator=name, mse_hba=mse_hba, mse_haa=mse_haa,
            ber=errs / bits if bits else float("nan"),
            bound=bound, trials_used=len(good), degenerate=n_deg))
    return rows


def sweep_points(cfg: ExperimentConfig) -> List[SweepPoint]:
    return [SweepPoint(b, e, s)
            for b in cfg.beta_grid
            for e in cfg.eb_n0_db_grid
            for s in cfg.sir_db_grid]


def sweep(cfg: ExperimentConfig) -> List[AggregateRow]:
    rows: List[AggregateRow] = []
    for idx, point in enumerate(sweep_points(cfg)):
        results = run_point(cfg, point, idx)
        rows.extend(aggregate_point(cfg, point, results))
    return rows


def _db(x: float) -> float:
    return 10.0 * np.log10(x) if x > 0 else float("nan")


def format_row(row: AggregateRow) -> str:
    vals = [row.beta, row.eb_n0_db, row.sir_db]
    cols = [f"{v:.17g}" for v in vals] + [row.estimator]
    cols += [f"{v:.17g}" for v in (
        row.mse_hba, _db(row.mse_hba), row.mse_haa, _db(row.mse_haa),
        row.ber, row.bound, _db(row.bound))]
    cols += [str(row.trials_used), str(row.degenerate)]
    return ",".join(cols)


def write_csv(rows: Sequence[AggregateRow], path) -> None:
    with open(path, "w") as fh:
        fh.write(CSV_HEADER + "\n")
        for row in rows:
            fh.write(format_row(row) + "\n")
