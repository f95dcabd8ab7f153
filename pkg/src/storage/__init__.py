"""
File formats, atomic writes and layered settings
"""

from .atomic import atomic_write_bytes, atomic_write_text
from .matrix_io import decode_matrix, encode_matrix, read_csv_matrix, read_matrix, read_pgm, read_vector, write_matrix
from .settings import load_config_file, load_experiment_spec, load_mapping, resolve_config, worker_cap

__all__ = [
    'atomic_write_bytes',
    'atomic_write_text',
    'decode_matrix',
    'encode_matrix',
    'read_csv_matrix',
    'read_matrix',
    'read_pgm',
    'read_vector',
    'write_matrix',
    'load_config_file',
    'load_experiment_spec',
    'load_mapping',
    'resolve_config',
    'worker_cap',
]
