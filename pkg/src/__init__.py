"""
Variance State Propagation - block-sparse signal recovery
"""

__version__ = "1.0.0"
__author__ = "VSP Team"
__description__ = "Variance state propagation for block-sparse compressed sensing"
