"""BPSK over AWGN and the channel LLRs that seed the decoder.

All randomness flows from numpy Generators; frame-level substreams are
derived from (master seed, frame index) so a sweep gives identical results
no matter how frames are scheduled.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ChannelObservation:
    """Received samples plus the intrinsic LLRs 2*r/sigma^2."""

    received: np.ndarray
    noise_var: float
    channel_llr: np.ndarray


def make_observation(received: np.ndarray, noise_var: float) -> ChannelObservation:
    if noise_var <= 0:
        raise ValueError("noise variance must be positive")
    received = np.asarray(received, dtype=np.float64)
    return ChannelObservation(
        received=received,
        noise_var=float(noise_var),
        channel_llr=2.0 * received / noise_var,
    )


def modulate_bpsk(bits: np.ndarray) -> np.ndarray:
    """Map bit 0 -> +1, bit 1 -> -1."""
    bits = np.asarray(bits)
    return (1 - 2 * bits).astype(np.float64)


def awgn(signal: np.ndarray, noise_var: float, rng: np.random.Generator) -> np.ndarray:
    """Add zero-mean Gaussian noise with the given variance per sample."""
    if noise_var <= 0:
        raise ValueError("noise variance must be positive")
    signal = np.asarray(signal, dtype=np.float64)
    return signal + rng.standard_normal(signal.shape) * np.sqrt(noise_var)


def snr_to_sigma2(ebn0_db: float, rate: float) -> float:
    """Noise variance for BPSK at the given Eb/N0 (dB) and code rate."""
    if not 0.0 < rate <= 1.0:
        raise ValueError(f"rate {rate} outside (0, 1]")
    return 1.0 / (2.0 * rate * 10.0 ** (ebn0_db / 10.0))


def frame_rng(master_seed: int, frame_index: int) -> np.random.Generator:
    """Independent, order-free substream for one simulated frame."""
    return np.random.default_rng(np.random.SeedSequence((master_seed, frame_index)))
