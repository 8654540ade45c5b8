"""Analytical interference model and shared domain types.

All gains and powers are linear. Bit counts are real-valued unless they
have been passed through :func:`fballoc.allocator.round_allocation`.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

REAL_BUDGET_TOL = 1e-9


class SolverTag(str, enum.Enum):
    EXACT_MINMAX = "ExactMinMax"
    LNORM_WATERFILL = "LNormWaterfill"
    BRUTE_FORCE = "BruteForce"
    THRESHOLD_MIN = "ThresholdMin"


@dataclass(frozen=True)
class SystemParams:
    """Physical description of one secondary transmitter and its PUs.

    Parameters
    ----------
    num_antennas : int
        Transmit antennas at the secondary transmitter, ``N >= 2``.
    avg_gains : sequence of float
        Average channel gain towards each primary user (linear). Its length
        defines the number of primary users ``K``.
    tx_power : float
        Transmit power ``P0`` in linear units.
    """

    num_antennas: int
    avg_gains: np.ndarray
    tx_power: float = 1.0

    def __post_init__(self):
        gains = np.asarray(self.avg_gains, dtype=float).reshape(-1)
        object.__setattr__(self, "avg_gains", gains)
        if int(self.num_antennas) != self.num_antennas or self.num_antennas < 2:
            raise ValueError(f"num_antennas must be an integer >= 2, got {self.num_antennas}")
        object.__setattr__(self, "num_antennas", int(self.num_antennas))
        if gains.size < 1:
            raise ValueError("avg_gains must contain at least one primary user")
        if not np.all(np.isfinite(gains)) or np.any(gains <= 0):
            raise ValueError(f"avg_gains must be finite and > 0, got {gains.tolist()}")
        if not (math.isfinite(self.tx_power) and self.tx_power > 0):
            raise ValueError(f"tx_power must be > 0, got {self.tx_power}")

    @property
    def num_pus(self) -> int:
        return int(self.avg_gains.size)

    def with_gains(self, gains: Sequence[float]) -> "SystemParams":
        return SystemParams(self.num_antennas, np.asarray(gains, dtype=float), self.tx_power)

    def zero_bit_interference(self) -> np.ndarray:
        """Per-PU interference when no feedback bits are spent."""
        return avg_interference(self.tx_power, self.avg_gains, distortion(0.0, self.num_antennas))


@dataclass(frozen=True)
class BitAllocation:
    bits: np.ndarray
    budget: float

    def __post_init__(self):
        bits = np.asarray(self.bits, dtype=float).reshape(-1)
        object.__setattr__(self, "bits", bits)
        if np.any(bits < 0) or not np.all(np.isfinite(bits)):
            raise ValueError(f"bit counts must be finite and >= 0, got {bits.tolist()}")
        if self.budget < 0:
            raise ValueError(f"budget must be >= 0, got {self.budget}")
        tol = 0.0 if self.is_integer else REAL_BUDGET_TOL * max(1.0, self.budget)
        if bits.sum() > self.budget + tol:
            raise ValueError(f"allocation uses {bits.sum()} bits, budget is {self.budget}")

    @property
    def is_integer(self) -> bool:
        return bool(np.all(self.bits == np.round(self.bits)))

    @property
    def total(self) -> float:
        return float(self.bits.sum())

    @property
    def unused(self) -> float:
        return float(self.budget - self.bits.sum())


@dataclass
class SolverConfig:
    l_exponent: int = 100
    bisection_tol: float = 1e-10
    max_iters: int = 200

    def __post_init__(self):
        if int(self.l_exponent) != self.l_exponent or self.l_exponent < 1:
            raise ValueError(f"l_exponent must be a positive integer, got {self.l_exponent}")
        if not self.bisection_tol > 0:
            raise ValueError(f"bisection_tol must be > 0, got {self.bisection_tol}")
        if self.max_iters < 1:
            raise ValueError(f"max_iters must be >= 1, got {self.max_iters}")


@dataclass
class AllocationReport:
    allocation: BitAllocation
    per_pu_interference: np.ndarray
    max_interference: float
    solver_tag: SolverTag
    # total bits before rounding; only the threshold solver fills this in
    unrounded_total: Optional[float] = None
    unrounded_bits: Optional[np.ndarray] = None
    trace: Optional[object] = field(default=None, repr=False)

    @classmethod
    def from_bits(cls, params: SystemParams, bits, budget: float, tag: SolverTag, **extra) -> "AllocationReport":
        allocation = BitAllocation(bits, budget)
        per_pu = per_pu_interference(params, allocation.bits)
        return cls(allocation, per_pu, float(per_pu.max()), SolverTag(tag), **extra)

    @property
    def bits(self) -> np.ndarray:
        return self.allocation.bits


def distortion(bits, num_antennas: int):
    """Average quantization distortion ``(N-1)/N * 2**(-b/(N-1))``.

    Works elementwise on arrays of bit counts.
    """
    if num_antennas < 2:
        raise ValueError(f"num_antennas must be >= 2, got {num_antennas}")
    b = np.asarray(bits, dtype=float)
    if np.any(b < 0):
        raise ValueError("bits must be >= 0")
    n1 = num_antennas - 1
    out = n1 / num_antennas * np.exp2(-b / n1)
    return float(out) if out.ndim == 0 else out


def avg_interference(tx_power, gain, distortion):
    """Average interference ``P0 * gain * distortion`` seen by a primary user."""
    p, g, d = (np.asarray(x, dtype=float) for x in (tx_power, gain, distortion))
    if np.any(p <= 0) or np.any(g <= 0) or np.any(d <= 0):
        raise ValueError("tx_power, gain and distortion must all be > 0")
    out = p * g * d
    return float(out) if out.ndim == 0 else out


def bits_for_interference(tx_power, gain, target, num_antennas: int):
    """Real-valued bit count that brings one PU's interference down to ``target``.

    Returns 0 where the zero-bit interference is already below the target.
    """
    if num_antennas < 2:
        raise ValueError(f"num_antennas must be >= 2, got {num_antennas}")
    t = np.asarray(target, dtype=float)
    if np.any(t <= 0):
        raise ValueError("target interference must be > 0")
    n1 = num_antennas - 1
    out = n1 * np.maximum(
        np.log2(np.asarray(tx_power, dtype=float) * np.asarray(gain, dtype=float))
        - np.log2(num_antennas * t / n1),
        0.0,
    )
    return float(out) if out.ndim == 0 else out


def asymptotic_minmax(params: SystemParams, budget: float) -> float:
    """Large-budget law for the minimized maximum interference.

    ``(N-1)/N * P0 * geomean(gains) * 2**(-B / (K (N-1)))``
    """
    if budget < 0:
        raise ValueError(f"budget must be >= 0, got {budget}")
    n, k = params.num_antennas, params.num_pus
    log_geomean = float(np.mean(np.log2(params.avg_gains)))
    return (n - 1) / n * params.tx_power * 2.0 ** (log_geomean - budget / (k * (n - 1)))


def per_pu_interference(params: SystemParams, bits) -> np.ndarray:
    # same product as avg_interference, minus its positivity check: distortion
    # underflows to 0.0 past roughly 1000 * (N-1) bits
    d = distortion(np.asarray(bits, dtype=float), params.num_antennas)
    return np.atleast_1d(params.tx_power * params.avg_gains * d)
