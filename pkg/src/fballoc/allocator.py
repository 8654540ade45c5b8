"""Feedback-bit allocation solvers.

Four solvers share the per-PU model in :mod:`fballoc.model`:

* :func:`allocate_minmax_exact` -- continuous min-max optimum, found by
  bisection on the common interference level.
* :func:`allocate_lnorm` -- water-filling solution of the L-norm surrogate,
  found by bisection on the log of the water-filling multiplier.
* :func:`brute_force_minmax` -- exhaustive integer search, used as an oracle.
* :func:`min_bits_for_threshold` -- fewest integer bits meeting a per-PU
  interference cap.

Water-filling arithmetic is done on ``log2`` quantities throughout, since
``gain**L`` overflows a double for realistic gains at ``L = 100``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .model import (
    AllocationReport,
    BitAllocation,
    SolverConfig,
    SolverTag,
    SystemParams,
    bits_for_interference,
    per_pu_interference,
)

BRUTE_FORCE_LIMIT = 10**7
# relative slack when checking a rounded threshold allocation
THRESHOLD_RTOL = 1e-12


class ConvergenceError(RuntimeError):
    """Raised when a bisection does not meet its tolerance within ``max_iters``."""

    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (residual {residual:.3e})")
        self.residual = residual


@dataclass
class WaterfillTrace:
    log2_multiplier: float
    iterations: int
    active_set: frozenset
    residual: float

    @property
    def multiplier(self) -> float:
        try:
            return 2.0 ** float(self.log2_multiplier)
        except OverflowError:
            return math.inf


def _bisect_decreasing(total, lo, hi, budget, tol, max_iters, what):
    """Find x in [lo, hi] with ``total(x) == budget`` for decreasing ``total``.

    Returns the final bracket midpoint and the iteration count.
    """
    for it in range(1, max_iters + 1):
        mid = 0.5 * (lo + hi)
        s = total(mid)
        if s > budget:
            lo = mid
        else:
            hi = mid
        if abs(s - budget) <= tol:
            return mid, it
        if hi - lo <= 4 * np.finfo(float).eps * max(1.0, abs(mid)):
            break
    mid = 0.5 * (lo + hi)
    residual = abs(total(mid) - budget)
    if residual <= tol:
        return mid, it
    raise ConvergenceError(f"{what} did not converge in {max_iters} iterations", residual)


def _polish_level(log_caps, active, budget, n1):
    """Closed-form common log-level for a fixed active set.

    Solves ``sum_{k in active} n1 * (log_caps[k] - level) == budget``.
    """
    return (log_caps[active].sum() - budget / n1) / active.sum()


def _equalized_bits(params: SystemParams, budget: float, cfg: SolverConfig):
    """Shared solver core: common log-level, bits and bisection stats.

    ``level`` is ``log2`` of the common interference scaled by ``N/(N-1)/P0``,
    i.e. a PU with ``log2(gain) > level`` gets ``(N-1)*(log2(gain) - level)``
    bits.
    """
    n1 = params.num_antennas - 1
    log_gains = np.log2(params.avg_gains)

    def bits_at(level):
        return n1 * np.maximum(log_gains - level, 0.0)

    def total(level):
        return float(bits_at(level).sum())

    tol = cfg.bisection_tol * max(1.0, budget)
    hi = float(log_gains.max())
    # every PU active below lo and the sum at least the budget
    lo = float(log_gains.min()) - budget / n1 - 1.0
    level, iters = _bisect_decreasing(total, lo, hi, budget, tol, cfg.max_iters, "interference-level bisection")
    active = bits_at(level) > 0
    if active.any():
        polished = _polish_level(log_gains, active, budget, n1)
        # accept the closed form only if it keeps the same active set
        if np.array_equal(bits_at(polished) > 0, active):
            level = polished
    bits = bits_at(level)
    residual = abs(float(bits.sum()) - budget)
    if residual > tol:
        raise ConvergenceError("interference-level bisection left a budget residual", residual)
    # absorb sub-tolerance drift so BitAllocation's budget check holds
    if bits.sum() > budget:
        bits = bits * (budget / bits.sum())
    return level, bits, iters, residual


def allocate_minmax_exact(params: SystemParams, budget: float, cfg: Optional[SolverConfig] = None) -> AllocationReport:
    """Continuous optimum of the min-max interference problem.

    Every PU that receives bits ends at the same interference level ``t``;
    PUs left at zero bits already sit at or below ``t``. ``t`` is located by
    bisection so that the per-PU bit requirements sum to ``budget``.
    """
    cfg = cfg or SolverConfig()
    if budget < 0:
        raise ValueError(f"budget must be >= 0, got {budget}")
    if budget == 0:
        return AllocationReport.from_bits(params, np.zeros(params.num_pus), 0.0, SolverTag.EXACT_MINMAX)
    _, bits, _, _ = _equalized_bits(params, budget, cfg)
    return AllocationReport.from_bits(params, bits, budget, SolverTag.EXACT_MINMAX)


def allocate_lnorm(params: SystemParams, budget: float, cfg: Optional[SolverConfig] = None) -> AllocationReport:
    """Water-filling solution of the L-norm surrogate of the min-max problem.

    Bits follow ``b_k = (N-1)/L * [L log2(gain_k) - m]^+`` where ``m`` is the
    log2 of the scaled water-filling multiplier, searched by bracketing and
    bisection until the bits sum to ``budget``. The trace is attached to the
    returned report as ``report.trace``.
    """
    cfg = cfg or SolverConfig()
    if budget < 0:
        raise ValueError(f"budget must be >= 0, got {budget}")
    L = int(cfg.l_exponent)
    n1 = params.num_antennas - 1
    scaled = L * np.log2(params.avg_gains)

    def bits_at(m):
        return n1 / L * np.maximum(scaled - m, 0.0)

    def total(m):
        return float(bits_at(m).sum())

    if budget == 0:
        m = float(scaled.max())
        trace = WaterfillTrace(m + math.log2(L / n1), 0, frozenset(), 0.0)
        return AllocationReport.from_bits(params, np.zeros(params.num_pus), 0.0, SolverTag.LNORM_WATERFILL, trace=trace)

    tol = cfg.bisection_tol * max(1.0, budget)
    hi = float(scaled.max())
    # start at the weakest PU's water level and double the step downwards
    lo, step, expansions = float(scaled.min()), float(L), 0
    while total(lo) < budget:
        lo -= step
        step *= 2.0
        expansions += 1
        if expansions > cfg.max_iters:
            raise ConvergenceError("water-level bracket search failed", abs(total(lo) - budget))
    m, iters = _bisect_decreasing(total, lo, hi, budget, tol, cfg.max_iters, "water-filling bisection")
    active = bits_at(m) > 0
    polished = (scaled[active].sum() - L * budget / n1) / active.sum()
    if np.array_equal(bits_at(polished) > 0, active):
        m = polished
    bits = bits_at(m)
    residual = abs(float(bits.sum()) - budget)
    if residual > tol:
        raise ConvergenceError("water-filling bisection left a budget residual", residual)
    if bits.sum() > budget:
        bits = bits * (budget / bits.sum())
    trace = WaterfillTrace(
        log2_multiplier=float(m + math.log2(L / n1)),
        iterations=iters + expansions,
        active_set=frozenset(int(k) for k in np.flatnonzero(bits > 0)),
        residual=residual,
    )
    return AllocationReport.from_bits(params, bits, budget, SolverTag.LNORM_WATERFILL, trace=trace)


def round_allocation(real_alloc: BitAllocation, budget: int, params: Optional[SystemParams] = None) -> BitAllocation:
    """Round a real allocation to integers and repair the total to ``budget``.

    Entries are rounded half-up. While the total exceeds ``budget`` the
    entry whose decrement gives the smallest resulting maximum interference
    is decremented (ties go to the highest index); while it falls short,
    the entry with the largest interference is incremented (ties go to the
    lowest index). Without ``params`` all PUs are ranked as if their gains
    were equal.
    """
    budget = int(budget)
    if budget < 0:
        raise ValueError(f"budget must be >= 0, got {budget}")
    if params is None:
        params = SystemParams(2, np.ones(real_alloc.bits.size))
    elif params.num_pus != real_alloc.bits.size:
        raise ValueError("params and allocation disagree on the number of PUs")
    bits = np.floor(real_alloc.bits + 0.5).astype(np.int64)

    while bits.sum() > budget:
        best, best_max = -1, math.inf
        for k in range(bits.size - 1, -1, -1):
            if bits[k] == 0:
                continue
            trial = bits.copy()
            trial[k] -= 1
            worst = float(per_pu_interference(params, trial).max())
            if worst < best_max:
                best, best_max = k, worst
        bits[best] -= 1

    while bits.sum() < budget:
        interf = per_pu_interference(params, bits)
        bits[int(np.argmax(interf))] += 1

    return BitAllocation(bits.astype(float), float(budget))


def _compositions(budget: int, parts: int) -> np.ndarray:
    """All non-negative integer vectors of length ``parts`` summing to at most ``budget``."""
    bars = np.array(list(itertools.combinations(range(budget + parts), parts)), dtype=np.int64)
    bits = np.empty_like(bars)
    bits[:, 0] = bars[:, 0]
    bits[:, 1:] = np.diff(bars, axis=1) - 1
    return bits


def brute_force_minmax(params: SystemParams, budget: int) -> AllocationReport:
    """Exhaustive integer min-max allocation.

    Ties on the maximum interference are broken by the smaller sum of
    interference, then by the lexicographically largest bit vector. The sum
    rule guarantees that a stronger PU never gets fewer bits than a weaker one.
    """
    if int(budget) != budget or budget < 0:
        raise ValueError(f"budget must be a non-negative integer, got {budget}")
    budget = int(budget)
    k = params.num_pus
    count = math.comb(budget + k, k)
    if count > BRUTE_FORCE_LIMIT:
        raise ValueError(f"{count} candidate allocations exceed the enumeration limit {BRUTE_FORCE_LIMIT}")
    cands = _compositions(budget, k)
    # interference table: row k, column b
    table = per_pu_interference(params, np.zeros(k))[:, None] * np.exp2(
        -np.arange(budget + 1) / (params.num_antennas - 1)
    )[None, :]
    interf = table[np.arange(k)[None, :], cands]
    worst = interf.max(axis=1)
    keep = worst <= worst.min() * (1 + 1e-12)
    ties, sums = cands[keep], interf[keep].sum(axis=1)
    ties = ties[sums <= sums.min() * (1 + 1e-12)]
    order = np.lexsort(ties.T[::-1])
    choice = ties[order[-1]]
    return AllocationReport.from_bits(params, choice.astype(float), float(budget), SolverTag.BRUTE_FORCE)


def min_bits_for_threshold(params: SystemParams, threshold: float) -> AllocationReport:
    """Fewest integer bits keeping every PU's interference at or below ``threshold``.

    The report's ``budget`` equals the integer total; ``unrounded_total`` holds
    the sum of the real-valued requirements.
    """
    if not threshold > 0:
        raise ValueError(f"threshold must be > 0, got {threshold}")
    real = np.atleast_1d(
        bits_for_interference(params.tx_power, params.avg_gains, threshold, params.num_antennas)
    )
    # snap values within rounding noise of an integer before taking the ceiling
    bits = np.ceil(real - 1e-9 * np.maximum(1.0, real))
    bits = np.maximum(bits, 0.0)
    limit = threshold * (1 + THRESHOLD_RTOL)
    interf = per_pu_interference(params, bits)
    while np.any(interf > limit):
        bits[interf > limit] += 1
        interf = per_pu_interference(params, bits)
    total = float(bits.sum())
    return AllocationReport.from_bits(
        params,
        bits,
        total,
        SolverTag.THRESHOLD_MIN,
        unrounded_total=float(real.sum()),
        unrounded_bits=real,
    )
