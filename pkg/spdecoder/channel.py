"""BPSK over the binary-input AWGN channel, producing decoder LLRs."""
import math
from dataclasses import dataclass

import numpy as np

from spdecoder.helpers import settings


class InvalidLlrFrameException(ValueError):
    """Raise when an LLR frame is empty, not one dimensional or not finite"""


@dataclass(frozen=True)
class ChannelParams:
    """Noise level of one operating point

    :param float ebn0_db: Eb/N0 in dB
    :param float rate: Code rate used to map Eb/N0 to sigma
    :param float sigma: Noise standard deviation
    :param int seed: Seed of the generator owned by whoever transmits
    """
    ebn0_db: float
    rate: float
    sigma: float
    seed: int = 0

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError(f'sigma must be positive, got {self.sigma}')

    @classmethod
    def from_ebn0(cls, ebn0_db, rate, seed=0):
        """sigma^2 = 1 / (2 R 10^(Eb/N0 / 10))"""
        sigma = math.sqrt(1.0 / (2.0 * rate * 10 ** (ebn0_db / 10.0)))
        return cls(float(ebn0_db), float(rate), sigma, int(seed))

    @classmethod
    def noiseless(cls, rate, seed=0, ebn0_db=math.inf):
        """Channel with sigma clamped to settings.sim.noiseless_sigma"""
        return cls(float(ebn0_db), float(rate), float(settings.sim.noiseless_sigma), int(seed))

    @property
    def variance(self):
        return self.sigma * self.sigma


@dataclass(frozen=True)
class LlrFrame:
    """Channel LLRs of one frame, positive values favour bit 0"""
    alpha: np.ndarray

    def __post_init__(self):
        alpha = np.asarray(self.alpha, dtype=np.float64)
        if alpha.ndim != 1 or alpha.size == 0:
            raise InvalidLlrFrameException(f'expected a 1-D LLR vector, got shape {alpha.shape}')
        if not np.all(np.isfinite(alpha)):
            raise InvalidLlrFrameException('LLR frame holds non finite values')
        object.__setattr__(self, 'alpha', alpha)

    def __len__(self):
        return self.alpha.size


def modulate(x):
    """BPSK: bit 0 -> +1.0, bit 1 -> -1.0

    :param x: Bits
    :returns numpy.ndarray: float64 symbols
    """
    return 1.0 - 2.0 * np.asarray(x, dtype=np.float64)


def transmit(s, params, rng):
    """Adds N(0, sigma^2) noise and converts to LLRs alpha = 2 y / sigma^2

    :param s: BPSK symbols
    :param ChannelParams params: Noise level
    :param numpy.random.Generator rng: Source of the noise samples
    :returns LlrFrame: The decoder input
    """
    s = np.asarray(s, dtype=np.float64)
    y = s + rng.normal(0.0, params.sigma, size=s.shape)
    return LlrFrame(2.0 / params.variance * y)


def hard_decision(alpha):
    """Bit 0 iff alpha >= 0"""
    return (np.asarray(alpha) < 0).astype(np.uint8)


def clip_llrs(frame, limit):
    """Saturates the LLRs at +-limit, for fixed-point style experiments"""
    return LlrFrame(np.clip(frame.alpha, -limit, limit))


def frame_rng(seed, point_index, frame_index):
    """Generator of one frame, a function of the three integers only

    Frames get their own stream so that the split of frames between workers
    cannot change what any frame sees.
    """
    sequence = np.random.SeedSequence([int(seed), int(point_index), int(frame_index)])
    return np.random.default_rng(sequence)


def dump_llr_frame(frame, path):
    """Writes one LLR per line with full precision"""
    np.savetxt(path, frame.alpha, fmt='%.17g')


def load_llr_frame(path):
    return LlrFrame(np.loadtxt(path, dtype=np.float64, ndmin=1))
