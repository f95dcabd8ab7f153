"""Orchestrator package"""
from .vsp_orchestrator import VspOrchestrator, initial_variances, kappa, mu_from_pi, pi_from_mu, run_vsp

__all__ = ['VspOrchestrator', 'run_vsp', 'kappa', 'pi_from_mu', 'mu_from_pi', 'initial_variances']
