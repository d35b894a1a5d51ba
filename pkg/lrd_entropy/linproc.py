"""
Truncated moving-average simulation of the linear process

    X_t = sum_{i=0}^{M} a_i eps_{t-i},   a_0 = 1,  a_i = c0 i^{-beta}.
"""
from dataclasses import dataclass
from enum import Enum
import logging
from typing import Optional

import numpy as np
from scipy import fft, special

from lrd_entropy.exceptions import DivergentSeriesError, ValidationError
from lrd_entropy.stable_core import InnovationSpec
from lrd_entropy.util.streams import make_stream

DEFAULT_TRUNCATION = 2**20
# above this many taps the moving average switches to FFT convolution
DIRECT_MAX_TAPS = 1024
FFT_TOLERANCE = 1e-9


class Regime(Enum):
    DIVERGENT = "divergent"
    LONG_MEMORY = "long_memory"
    SHORT_MEMORY = "short_memory"


@dataclass(frozen=True)
class CoefficientSpec:
    beta: float
    c0: float = 1.0
    truncation_m: int = DEFAULT_TRUNCATION

    def __post_init__(self) -> None:
        if not self.c0 > 0.0:
            raise ValidationError(f"c0 must be positive, got {self.c0}")
        if not self.beta > 0.0:
            raise ValidationError(f"beta must be positive, got {self.beta}")
        if int(self.truncation_m) != self.truncation_m or self.truncation_m < 1:
            raise ValidationError(
                f"truncation_m must be a positive integer, got {self.truncation_m}"
            )


@dataclass(frozen=True)
class ProcessConfig:
    innovation: InnovationSpec
    coeffs: CoefficientSpec
    n: int
    base_seed: int = 0

    def __post_init__(self) -> None:
        if int(self.n) != self.n or self.n < 2:
            raise ValidationError(f"path length n must be an integer >= 2, got {self.n}")
        if not 0 <= self.base_seed < 2**64:
            raise ValidationError(f"base_seed must be a 64-bit unsigned integer, got {self.base_seed}")
        if self.memory_regime is Regime.DIVERGENT:
            raise DivergentSeriesError("alpha*beta <= 1: series diverges")

    @property
    def memory_regime(self) -> "Regime":
        return regime(self.innovation.alpha, self.coeffs.beta)


def regime(alpha: float, beta: float) -> Regime:
    if not 0.0 < alpha < 2.0:
        raise ValidationError(f"alpha must lie in (0, 2), got {alpha}")
    if not beta > 0.0:
        raise ValidationError(f"beta must be positive, got {beta}")
    product = alpha * beta
    if product <= 1.0:
        return Regime.DIVERGENT
    if product < 2.0:
        return Regime.LONG_MEMORY
    return Regime.SHORT_MEMORY


def coefficient(spec: CoefficientSpec, i: int) -> float:
    if i < 0:
        raise ValidationError(f"coefficient index must be >= 0, got {i}")
    if i == 0:
        return 1.0
    return spec.c0 * float(i) ** (-spec.beta)


def coefficients(spec: CoefficientSpec, count: Optional[int] = None) -> np.ndarray:
    """a_0 .. a_{count-1}; defaults to the M+1 taps of the truncated filter."""
    if count is None:
        count = spec.truncation_m + 1
    taps = np.empty(count, dtype=float)
    taps[0] = 1.0
    if count > 1:
        taps[1:] = spec.c0 * np.arange(1, count, dtype=float) ** (-spec.beta)
    return taps


def _exponent(spec: CoefficientSpec, alpha: float) -> float:
    s = alpha * spec.beta
    if s <= 1.0:
        raise DivergentSeriesError("alpha*beta <= 1: series diverges")
    return s


def alpha_norm_sum(spec: CoefficientSpec, alpha: float) -> float:
    """S = sum_{i>=0} |a_i|^alpha = 1 + c0^alpha zeta(alpha*beta)."""
    s = _exponent(spec, alpha)
    return 1.0 + spec.c0**alpha * float(special.zeta(s, 1.0))


def truncation_tail(spec: CoefficientSpec, alpha: float) -> float:
    """Mass sum_{i>M} |a_i|^alpha dropped by truncating the filter at M."""
    s = _exponent(spec, alpha)
    return spec.c0**alpha * float(special.zeta(s, spec.truncation_m + 1.0))


def truncated_norm_sum(spec: CoefficientSpec, alpha: float) -> float:
    """S_M = sum_{i=0}^{M} |a_i|^alpha, the scale actually simulated."""
    _exponent(spec, alpha)
    return float(np.sum(np.abs(coefficients(spec)) ** alpha))


def moving_average(innovations: np.ndarray, taps: np.ndarray, method: str = "auto") -> np.ndarray:
    """
    Valid part of the convolution: out[t] = sum_i taps[i] * innovations[t + M - i].

    `direct` is the reference summation; `fft` uses a circular convolution
    padded to the next power of two >= len(innovations), which leaves the
    valid outputs untouched by wrap-around. The two agree to FFT_TOLERANCE
    in absolute terms for paths of moderate dynamic range.
    """
    innovations = np.asarray(innovations, dtype=float)
    taps = np.asarray(taps, dtype=float)
    if taps.size < 1 or innovations.size < taps.size:
        raise ValidationError("need at least as many innovations as filter taps")
    if method == "auto":
        method = "direct" if taps.size <= DIRECT_MAX_TAPS else "fft"

    if method == "direct":
        return np.convolve(innovations, taps, mode="valid")
    if method == "fft":
        size = 1 << int(innovations.size - 1).bit_length()
        spectrum = fft.rfft(innovations, n=size) * fft.rfft(taps, n=size)
        full = fft.irfft(spectrum, n=size)
        return full[taps.size - 1 : innovations.size]
    raise ValidationError(f"unknown convolution method: {method}")


def simulate_path(config: ProcessConfig, rng: Optional[np.random.Generator] = None, method: str = "auto") -> np.ndarray:
    """
    X_1..X_n from innovations eps_{1-M}..eps_n drawn in index order from a
    single stream (the config's base seed when no stream is given).
    """
    if rng is None:
        rng = make_stream(config.base_seed)
    m = config.coeffs.truncation_m
    logging.debug(f"Simulating path n={config.n}, M={m}, method={method}")
    innovations = config.innovation.sample(rng, config.n + m)
    return moving_average(innovations, coefficients(config.coeffs), method)
