"""Monte Carlo simulation of quantized zero-forcing beamforming.

Each trial draws Rayleigh channels to the secondary user and to every PU,
quantizes each PU's channel direction with a random vector quantization
(RVQ) codebook of ``2**b_k`` entries, builds the zero-forcing beamformer
from the quantized directions and records the interference leaking to each
PU.

Trial ``t`` of a run seeded with ``seed`` draws everything from
``SeedSequence(seed, spawn_key=(0, t))``, so the result does not depend on
how trials are split across workers.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
from scipy.special import betaln

from .model import BitAllocation, SystemParams

MAX_CODEBOOK_BITS = 16
UNIT_NORM_TOL = 1e-12
# HᴴH condition number beyond which the beamformer is treated as rank deficient
MAX_GRAM_CONDITION = 1e12
MAX_RESAMPLES = 100

SeedLike = Union[int, np.random.Generator, np.random.SeedSequence, None]


class RankDeficientError(np.linalg.LinAlgError):
    pass


@dataclass(frozen=True)
class ChannelRealization:
    su_channel: np.ndarray  # (N,)
    pu_channels: np.ndarray  # (K, N), row k = sqrt(gain_k) * h_k
    pu_small_scale: np.ndarray  # (K, N), the unit-variance h_k

    @property
    def pu_directions(self) -> np.ndarray:
        return self.pu_small_scale / np.linalg.norm(self.pu_small_scale, axis=1, keepdims=True)


@dataclass(frozen=True)
class Codebook:
    entries: np.ndarray  # (2**bits, N), unit-norm rows
    bits: int

    @property
    def size(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class QuantizationResult:
    index: int
    quantized_dir: np.ndarray
    cos2_theta: float

    @property
    def sin2_theta(self) -> float:
        return 1.0 - self.cos2_theta


@dataclass
class MonteCarloStats:
    """Per-PU Monte Carlo averages.

    ``mean_interference`` is the average of ``P0 * |sqrt(gain_k) h_k^H v0|^2``
    and ``mean_distortion`` the average of ``sin^2(theta_k)``; both come with
    standard errors. ``mean_direction_leak`` is the average of
    ``|hbar_k^H v0|^2`` for the unit-norm direction ``hbar_k``.
    """

    trials: int
    seed: int
    mean_interference: np.ndarray
    std_error: np.ndarray
    mean_distortion: np.ndarray
    distortion_std_error: np.ndarray
    mean_direction_leak: np.ndarray
    direction_leak_std_error: np.ndarray


def _rng(seed: SeedLike) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def complex_gaussian(rng: np.random.Generator, shape) -> np.ndarray:
    """Circularly symmetric complex Gaussian samples with unit variance per entry."""
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) * np.sqrt(0.5)


def generate_channels(params: SystemParams, seed: SeedLike = None) -> ChannelRealization:
    n, k = params.num_antennas, params.num_pus
    if n < k + 1:
        raise ValueError(f"zero-forcing needs num_antennas >= K + 1 = {k + 1}, got {n}")
    rng = _rng(seed)
    h0 = complex_gaussian(rng, n)
    h = complex_gaussian(rng, (k, n))
    return ChannelRealization(h0, np.sqrt(params.avg_gains)[:, None] * h, h)


def build_rvq_codebook(bits: int, num_antennas: int, seed: SeedLike = None) -> Codebook:
    """Random codebook of ``2**bits`` isotropic unit vectors in C^N."""
    if int(bits) != bits or not 0 <= bits <= MAX_CODEBOOK_BITS:
        raise ValueError(f"codebook bits must be an integer in [0, {MAX_CODEBOOK_BITS}], got {bits}")
    bits = int(bits)
    entries = complex_gaussian(_rng(seed), (2**bits, num_antennas))
    entries /= np.linalg.norm(entries, axis=1, keepdims=True)
    return Codebook(entries, bits)


def quantize(direction: np.ndarray, codebook: Codebook) -> QuantizationResult:
    """Pick the codeword with the largest ``|hbar^H c|^2``; the lowest index wins ties."""
    gains = np.abs(codebook.entries.conj() @ direction) ** 2
    idx = int(np.argmax(gains))
    return QuantizationResult(idx, codebook.entries[idx], float(min(gains[idx], 1.0)))


def zf_beamformer(su_channel: np.ndarray, quantized_pu_dirs: np.ndarray) -> np.ndarray:
    """Unit-norm zero-forcing beamformer towards the secondary user.

    Normalized first column of ``H (H^H H)^{-1}`` with
    ``H = [h0, hhat_1, ..., hhat_K]``.
    """
    H = np.column_stack([su_channel, *np.atleast_2d(quantized_pu_dirs)])
    if H.shape[1] > H.shape[0]:
        raise RankDeficientError(f"{H.shape[1]} columns exceed {H.shape[0]} antennas")
    gram = H.conj().T @ H
    if np.linalg.cond(gram) > MAX_GRAM_CONDITION:
        raise RankDeficientError("stacked channel matrix is (numerically) rank deficient")
    e0 = np.zeros(H.shape[1], dtype=complex)
    e0[0] = 1.0
    v = H @ np.linalg.solve(gram, e0)
    return v / np.linalg.norm(v)


def _one_trial(params, bits, rng, codebooks, perfect_cdi):
    """Returns (interference, sin2, direction_leak), each of length K."""
    n = params.num_antennas
    for _ in range(MAX_RESAMPLES):
        ch = generate_channels(params, rng)
        dirs = ch.pu_directions
        if perfect_cdi:
            qdirs, sin2 = dirs, np.zeros(params.num_pus)
        else:
            results = [
                quantize(dirs[k], codebooks[k] if codebooks is not None else build_rvq_codebook(bits[k], n, rng))
                for k in range(params.num_pus)
            ]
            qdirs = np.array([r.quantized_dir for r in results])
            sin2 = np.array([r.sin2_theta for r in results])
        try:
            v0 = zf_beamformer(ch.su_channel, qdirs)
        except RankDeficientError:
            continue
        leak = np.abs(dirs.conj() @ v0) ** 2
        interf = params.tx_power * np.abs(ch.pu_channels.conj() @ v0) ** 2
        return interf, sin2, leak
    raise RankDeficientError(f"no full-rank channel after {MAX_RESAMPLES} draws")


def _run_trials(params, bits, seed, start, stop, fixed_codebook, perfect_cdi):
    codebooks = None
    if fixed_codebook:
        codebooks = [
            build_rvq_codebook(bits[k], params.num_antennas, np.random.SeedSequence(seed, spawn_key=(1, k)))
            for k in range(params.num_pus)
        ]
    out = np.empty((stop - start, 3, params.num_pus))
    for i, t in enumerate(range(start, stop)):
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(0, t)))
        out[i] = _one_trial(params, bits, rng, codebooks, perfect_cdi)
    return out


def default_seed() -> int:
    return int(os.environ.get("FBALLOC_SEED", "20170101"))


def measure_interference(
    params: SystemParams,
    allocation: BitAllocation,
    trials: int,
    seed: Optional[int] = None,
    *,
    fixed_codebook: bool = False,
    perfect_cdi: bool = False,
    workers: int = 1,
) -> MonteCarloStats:
    """Monte Carlo estimate of each PU's average interference.

    Parameters
    ----------
    params : SystemParams
        Scenario; requires ``num_antennas >= K + 1``.
    allocation : BitAllocation
        Integer bits per PU; PU ``k`` gets a codebook of ``2**bits[k]`` entries.
    trials : int
        Number of independent channel draws.
    seed : int, optional
        Master seed. Defaults to ``$FBALLOC_SEED`` or a fixed constant.
    fixed_codebook : bool
        Draw one codebook per PU for the whole run instead of one per trial.
    perfect_cdi : bool
        Beamform on the true directions (quantization bypassed).
    workers : int
        Processes to split trials over; the result is identical for any value.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    bits = allocation.bits
    if bits.size != params.num_pus:
        raise ValueError("allocation and params disagree on the number of PUs")
    if not allocation.is_integer:
        raise ValueError("simulation needs an integer allocation")
    if params.num_antennas < params.num_pus + 1:
        raise ValueError(f"zero-forcing needs num_antennas >= K + 1 = {params.num_pus + 1}")
    bits = bits.astype(int)
    seed = default_seed() if seed is None else int(seed)

    if workers > 1 and trials > 1:
        edges = np.linspace(0, trials, min(workers, trials) + 1).astype(int)
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = pool.map(
                _run_trials,
                *zip(*[(params, bits, seed, a, b, fixed_codebook, perfect_cdi) for a, b in zip(edges[:-1], edges[1:])]),
            )
            samples = np.concatenate(list(parts))
    else:
        samples = _run_trials(params, bits, seed, 0, trials, fixed_codebook, perfect_cdi)

    means = samples.mean(axis=0)
    if trials > 1:
        errs = samples.std(axis=0, ddof=1) / np.sqrt(trials)
    else:
        errs = np.zeros_like(means)
    return MonteCarloStats(
        trials=trials,
        seed=seed,
        mean_interference=means[0],
        std_error=errs[0],
        mean_distortion=means[1],
        distortion_std_error=errs[1],
        mean_direction_leak=means[2],
        direction_leak_std_error=errs[2],
    )


def rvq_distortion(bits, num_antennas: int):
    """Exact ensemble distortion ``2**b * Beta(2**b, N/(N-1))`` of an RVQ codebook."""
    m = np.exp2(np.asarray(bits, dtype=float))
    out = np.exp(np.log(m) + betaln(m, num_antennas / (num_antennas - 1)))
    return float(out) if out.ndim == 0 else out


def rvq_interference(params: SystemParams, bits) -> np.ndarray:
    """Exact mean interference per PU under per-trial RVQ codebooks and ZF.

    ``P0 * gain_k * N/(N-1) * rvq_distortion(b_k, N)``: the channel norm
    contributes ``N`` and the leak of the quantization error onto the
    beamformer a further ``1/(N-1)``.
    """
    n = params.num_antennas
    return params.tx_power * params.avg_gains * n / (n - 1) * np.atleast_1d(rvq_distortion(bits, n))
