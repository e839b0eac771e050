"""Blind channel estimation for full-duplex links via shifted constellations."""

__version__ = "0.1.0"

from .baselines import PilotLayout, head_layout, ls_pilot_estimate, perfect_csi
from .bounds import fim_avg, fim_conditional, mse_lower_bound
from .channel import ChannelPair, FadingConfig, Frame, sample_h_aa, sample_h_ba, \
    sinr, synthesize_frame, trial_streams
from .constellation import Constellation, ShiftedConstellation, SymmetryWitness, \
    check_symmetry, load_points, dump_points, make_qam, shift
from .detection import DetectionResult, ber, cancel_and_detect
from .estimator import EmReport, em_estimate, log_likelihood, m_step, \
    merge_channels, posterior_matrix, split_channels
from .montecarlo import AggregateRow, ExperimentConfig, SweepPoint, TrialResult, \
    aggregate_point, run_point, run_trial, sweep, write_csv
