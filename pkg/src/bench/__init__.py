"""
Benchmark harness: generators, metrics, Monte Carlo runner and reports
"""

from .generators import gen_block_sparse_signal, gen_matrix, scg
from .instance import ProblemInstance, make_instance, measure
from .metrics import (
    draw_noise,
    genie_lmmse,
    lmmse_estimate,
    nmse,
    nmse_db,
    noise_std,
    sigma_for_snr,
    to_db,
)
from .presets import PRESET_ALIASES, PRESETS, get_preset, preset_names
from .reporting import aggregate_csv, plot_script, trials_csv, write_report
from .runner import ExperimentRunner, run_experiment, run_trial, seed_for

__all__ = [
    'gen_block_sparse_signal',
    'gen_matrix',
    'scg',
    'ProblemInstance',
    'make_instance',
    'measure',
    'draw_noise',
    'genie_lmmse',
    'lmmse_estimate',
    'nmse',
    'nmse_db',
    'noise_std',
    'sigma_for_snr',
    'to_db',
    'PRESETS',
    'PRESET_ALIASES',
    'get_preset',
    'preset_names',
    'aggregate_csv',
    'plot_script',
    'trials_csv',
    'write_report',
    'ExperimentRunner',
    'run_experiment',
    'run_trial',
    'seed_for',
]
