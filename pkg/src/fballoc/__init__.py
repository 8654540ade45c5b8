"""Feedback-bit allocation for limited-feedback cognitive radio.

Solvers for distributing quantization bits among primary users so that the
residual zero-forcing interference from a secondary transmitter is
minimized, plus a Monte Carlo simulator of random vector quantization.
"""

from .model import (
    AllocationReport,
    BitAllocation,
    SolverConfig,
    SolverTag,
    SystemParams,
    asymptotic_minmax,
    avg_interference,
    bits_for_interference,
    distortion,
)
from .allocator import (
    ConvergenceError,
    WaterfillTrace,
    allocate_lnorm,
    allocate_minmax_exact,
    brute_force_minmax,
    min_bits_for_threshold,
    round_allocation,
)

__version__ = "0.1.0"

__all__ = [
    "AllocationReport",
    "BitAllocation",
    "ConvergenceError",
    "SolverConfig",
    "SolverTag",
    "SystemParams",
    "WaterfillTrace",
    "allocate_lnorm",
    "allocate_minmax_exact",
    "asymptotic_minmax",
    "avg_interference",
    "bits_for_interference",
    "brute_force_minmax",
    "distortion",
    "min_bits_for_threshold",
    "round_allocation",
]
