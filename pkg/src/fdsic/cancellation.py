"""Digital self-interference cancellation and the residual-power law.

The estimated taps reconstruct the received self-interference as X h_hat,
which is subtracted from the received samples.  Two residuals matter:

* analysis residual  X (h - h_hat) = (y - w) - X h_hat, the pure leftover
  interference, computable here because the simulation retains the noise
  draw w.  Its average power obeys the closed-form law k * sigma_w2 / n.
* practical residual y - X h_hat, the only signal a real receiver has
  (leftover interference plus the composite noise).

Driving the analysis-residual power below the AWGN variance sigma_n2
requires the frame length n to exceed a threshold n0 that grows with the
channel length k.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .estimation import ChannelEstimate
from .signal_model import ChannelImpulseResponse, ConvolutionMatrix, ReceivedFrame


@dataclass(frozen=True)
class CancellationResult:
    """Residual vectors and their empirical/predicted powers for one frame.

    below_noise flags whether the empirical analysis-residual power fell
    under the AWGN variance sigma_n2 (the sub-noise cancellation target).
    """

    analysis_residual: np.ndarray
    practical_residual: np.ndarray
    empirical_analysis_power: float
    empirical_practical_power: float
    predicted_power: float
    below_noise: bool


def _as_taps(estimate: ChannelEstimate | ChannelImpulseResponse | np.ndarray) -> np.ndarray:
    if isinstance(estimate, ChannelEstimate):
        return estimate.taps
    if isinstance(estimate, ChannelImpulseResponse):
        return estimate.taps
    taps = np.asarray(estimate, dtype=np.complex128)
    if taps.ndim != 1:
        raise ValueError("taps must be a 1-D vector")
    return taps


def reconstruct(
    X: ConvolutionMatrix,
    estimate: ChannelEstimate | ChannelImpulseResponse | np.ndarray,
) -> np.ndarray:
    """Rebuild the received self-interference from the estimated taps: X h_hat."""
    taps = _as_taps(estimate)
    if taps.size != X.n_cols:
        raise ValueError(f"estimate has {taps.size} taps but matrix has {X.n_cols} columns")
    return X.entries @ taps


def cancel(
    frame: ReceivedFrame,
    X: ConvolutionMatrix,
    estimate: ChannelEstimate | ChannelImpulseResponse | np.ndarray,
) -> CancellationResult:
    """Subtract the reconstructed self-interference from the frame.

    Powers are sample means of |.|^2 over the frame; the analysis residual
    uses the retained noise draw to strip w from y before subtracting.
    """
    if X.n_rows != len(frame):
        raise ValueError(f"matrix has {X.n_rows} rows but frame has {len(frame)} samples")
    reconstructed = reconstruct(X, estimate)
    practical = frame.samples - reconstructed
    analysis = (frame.samples - frame.noise_realization) - reconstructed
    analysis_power = float(np.mean(np.abs(analysis) ** 2))
    practical_power = float(np.mean(np.abs(practical) ** 2))
    spec = frame.noise_spec
    predicted = predicted_residual_power(X.n_cols, spec.sigma_w2, X.n_rows)
    return CancellationResult(
        analysis_residual=analysis,
        practical_residual=practical,
        empirical_analysis_power=analysis_power,
        empirical_practical_power=practical_power,
        predicted_power=predicted,
        below_noise=bool(analysis_power < spec.sigma_n2),
    )


def predicted_residual_power(k: int, sigma_w2: float, n: int) -> float:
    """Closed-form residual self-interference power: k * sigma_w2 / n."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if n < k:
        raise ValueError(f"n={n} must be >= k={k}")
    if sigma_w2 < 0:
        raise ValueError("sigma_w2 must be >= 0")
    return k * sigma_w2 / n


def find_threshold_n0(k: int, sigma_w2: float, sigma_n2: float) -> int:
    """Smallest frame length whose predicted residual power is below sigma_n2.

    Strict inequality: the returned n0 = floor(k * sigma_w2 / sigma_n2) + 1
    is the first length with k * sigma_w2 / n0 < sigma_n2.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if sigma_w2 < 0:
        raise ValueError("sigma_w2 must be >= 0")
    if sigma_n2 <= 0:
        raise ValueError("sigma_n2 must be > 0")
    return math.floor(k * sigma_w2 / sigma_n2) + 1
