"""
Support-state MRF: topologies and sum-product message passing
"""

from .topology import MessageBoard, MrfTopology
from .message_passing import MrfResult, mrf_output, mrf_sweep, output_probabilities, run_mrf

__all__ = [
    'MrfTopology',
    'MessageBoard',
    'MrfResult',
    'mrf_sweep',
    'run_mrf',
    'mrf_output',
    'output_probabilities',
]
