"""Full-duplex self-interference cancellation in the digital baseband.

A receiver that knows every symbol its own transmitter sent can estimate
the self-interference channel by least squares over the whole frame,
reconstruct the interference, and subtract it.  This package simulates
that chain and validates the closed-form error laws behind it: the
estimation MSE (sigma_w2 / k) * Tr{(X^H X)^-1} and the residual
interference power k * sigma_w2 / n, including the frame length beyond
which the residual drops below the thermal-noise floor.
"""

from .cancellation import (
    CancellationResult,
    cancel,
    find_threshold_n0,
    predicted_residual_power,
    reconstruct,
)
from .estimation import (
    GRAM_CONDITION_LIMIT,
    ChannelEstimate,
    SingularGramError,
    empirical_mse,
    ls_estimate,
    predicted_mse,
    single_tap_estimate,
    trace_metric,
)
from .signal_model import (
    ChannelImpulseResponse,
    ConvolutionMatrix,
    Modulation,
    NoiseSpec,
    ReceivedFrame,
    SymbolSequence,
    build_convolution_matrix,
    component_rng,
    generate_symbols,
    noise_for_taps,
    resolve_noise,
    sample_channel,
    transmit,
)
from .sweeps import (
    ConfigError,
    ResidualMode,
    SweepCellError,
    SweepConfig,
    SweepRow,
    derive_trial_seed,
    run_mse_sweep,
    run_rsi_sweep,
    run_trace_sweep,
)

__version__ = "0.1.0"

__all__ = [
    "CancellationResult",
    "ChannelEstimate",
    "ChannelImpulseResponse",
    "ConfigError",
    "ConvolutionMatrix",
    "GRAM_CONDITION_LIMIT",
    "Modulation",
    "NoiseSpec",
    "ReceivedFrame",
    "ResidualMode",
    "SingularGramError",
    "SweepCellError",
    "SweepConfig",
    "SweepRow",
    "SymbolSequence",
    "build_convolution_matrix",
    "cancel",
    "component_rng",
    "derive_trial_seed",
    "empirical_mse",
    "find_threshold_n0",
    "generate_symbols",
    "ls_estimate",
    "noise_for_taps",
    "predicted_mse",
    "predicted_residual_power",
    "reconstruct",
    "resolve_noise",
    "run_mse_sweep",
    "run_rsi_sweep",
    "run_trace_sweep",
    "sample_channel",
    "single_tap_estimate",
    "trace_metric",
    "transmit",
]
