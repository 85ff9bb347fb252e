"""Monte Carlo sweeps over frame length and channel length.

Each sweep cell (n, k) runs `trials` independent trials; every trial draws
fresh symbols, channel, and noise from a seed that is a pure function of
(master_seed, n, k, trial_index), so results are reproducible and
independent of execution order.  The self-interference power feeding the
dB ratios is recomputed per k (unit-energy symbols through k unit-variance
taps carry average power k), so sir_db/snr_db keep their meaning across k.

Aggregates are summed in trial order for bit-reproducible output.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .cancellation import cancel
from .estimation import SingularGramError, ls_estimate, trace_metric
from .signal_model import (
    Modulation,
    NoiseSpec,
    build_convolution_matrix,
    generate_symbols,
    noise_for_taps,
    sample_channel,
    transmit,
)

DEFAULT_N_VALUES = (250, 500, 1000, 2000, 4000, 8000)
DEFAULT_K_VALUES = (5, 20, 40)
DEFAULT_TRIALS = 10_000

_SYMBOL_ENERGY = 1.0


class ResidualMode(enum.Enum):
    ANALYSIS = "analysis"
    PRACTICAL = "practical"


class ConfigError(ValueError):
    """A sweep configuration violates its invariants."""


class SweepCellError(RuntimeError):
    """Numerical failure inside one Monte Carlo cell."""

    def __init__(self, n: int, k: int, trial: int, cause: Exception):
        self.n = n
        self.k = k
        self.trial = trial
        super().__init__(f"numerical failure at cell n={n}, k={k}, trial={trial}: {cause}")


def _normalize_residual_mode(mode: ResidualMode | str) -> ResidualMode:
    if isinstance(mode, ResidualMode):
        return mode
    try:
        return ResidualMode(str(mode).lower())
    except ValueError:
        valid = ", ".join(m.value for m in ResidualMode)
        raise ConfigError(f"unknown residual_mode {mode!r}; expected one of: {valid}") from None


@dataclass(frozen=True)
class SweepConfig:
    """Grid, trial count, and link parameters for one sweep.

    sigma_w2 directly pins the composite-noise variance for controlled
    experiments; when None the variance follows from sir_db/snr_db and the
    per-k interference power convention.
    """

    n_values: tuple[int, ...] = DEFAULT_N_VALUES
    k_values: tuple[int, ...] = DEFAULT_K_VALUES
    trials: int = DEFAULT_TRIALS
    modulation: Modulation = Modulation.BPSK
    sir_db: float = 10.0
    snr_db: float = 20.0
    master_seed: int = 0
    residual_mode: ResidualMode = ResidualMode.ANALYSIS
    sigma_w2: float | None = None

    def __post_init__(self) -> None:
        n_values = tuple(int(n) for n in self.n_values)
        k_values = tuple(int(k) for k in self.k_values)
        if not n_values or not k_values:
            raise ConfigError("n_values and k_values must be non-empty")
        if any(b <= a for a, b in zip(n_values, n_values[1:])):
            raise ConfigError(f"n_values must be strictly ascending, got {n_values}")
        if min(k_values) < 1:
            raise ConfigError("k_values must be positive")
        if min(n_values) < max(k_values):
            raise ConfigError(
                f"every n must be >= max(k_values)={max(k_values)}, got min n={min(n_values)}"
            )
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if self.sigma_w2 is not None and self.sigma_w2 < 0:
            raise ConfigError("sigma_w2 must be >= 0")
        object.__setattr__(self, "n_values", n_values)
        object.__setattr__(self, "k_values", k_values)
        object.__setattr__(self, "trials", int(self.trials))
        object.__setattr__(self, "modulation", Modulation(self.modulation))
        object.__setattr__(self, "residual_mode", _normalize_residual_mode(self.residual_mode))

    def noise_for(self, k: int) -> NoiseSpec:
        """Noise spec for a cell with k channel taps (si_power = E_x * k)."""
        return noise_for_taps(k, self.sir_db, self.snr_db, sigma_w2=self.sigma_w2)


@dataclass(frozen=True)
class SweepRow:
    """One (n, k) cell: sample mean/stderr of the metric vs its prediction."""

    n: int
    k: int
    metric_mean: float
    metric_stderr: float
    predicted: float
    trials: int
    noise_floor: float


def derive_trial_seed(master_seed: int, n: int, k: int, trial: int) -> int:
    """Per-trial seed: a pure function of (master_seed, n, k, trial)."""
    entropy = [int(master_seed) & 0xFFFFFFFFFFFFFFFF, int(n), int(k), int(trial)]
    return int(np.random.SeedSequence(entropy).generate_state(1, np.uint64)[0])


def _mean_stderr(values: np.ndarray) -> tuple[float, float]:
    mean = float(np.mean(values))
    if values.size < 2:
        return mean, 0.0
    return mean, float(np.std(values, ddof=1) / math.sqrt(values.size))


def run_trace_sweep(cfg: SweepConfig) -> list[SweepRow]:
    """Mean of Tr{(X^H X)^-1} over independent symbol draws, per (n, k).

    The prediction is the Gram-concentration value k / (n * E_x).
    """
    rows = []
    for k in cfg.k_values:
        noise = cfg.noise_for(k)
        for n in cfg.n_values:
            values = np.empty(cfg.trials)
            for trial in range(cfg.trials):
                seed = derive_trial_seed(cfg.master_seed, n, k, trial)
                x = generate_symbols(n, cfg.modulation, seed)
                try:
                    values[trial] = trace_metric(build_convolution_matrix(x, k))
                except SingularGramError as err:
                    raise SweepCellError(n, k, trial, err) from err
            mean, stderr = _mean_stderr(values)
            rows.append(
                SweepRow(
                    n=n,
                    k=k,
                    metric_mean=mean,
                    metric_stderr=stderr,
                    predicted=k / (n * _SYMBOL_ENERGY),
                    trials=cfg.trials,
                    noise_floor=noise.sigma_n2,
                )
            )
    return rows


def run_mse_sweep(cfg: SweepConfig) -> list[SweepRow]:
    """Per-tap estimation MSE over trials, per (n, k).

    Each trial redraws symbols, channel, and noise; the prediction is
    (sigma_w2 / k) times the mean observed trace, so it tracks the same
    symbol draws the empirical column saw.
    """
    rows = []
    for k in cfg.k_values:
        noise = cfg.noise_for(k)
        for n in cfg.n_values:
            sq_errors = np.empty(cfg.trials)
            traces = np.empty(cfg.trials)
            for trial in range(cfg.trials):
                seed = derive_trial_seed(cfg.master_seed, n, k, trial)
                x = generate_symbols(n, cfg.modulation, seed)
                h = sample_channel(k, seed)
                matrix = build_convolution_matrix(x, k)
                frame = transmit(x, h, noise, seed, matrix=matrix)
                try:
                    estimate = ls_estimate(matrix, frame.samples)
                except SingularGramError as err:
                    raise SweepCellError(n, k, trial, err) from err
                sq_errors[trial] = np.mean(np.abs(estimate.taps - h.taps) ** 2)
                traces[trial] = estimate.trace_metric
            mean, stderr = _mean_stderr(sq_errors)
            rows.append(
                SweepRow(
                    n=n,
                    k=k,
                    metric_mean=mean,
                    metric_stderr=stderr,
                    predicted=(noise.sigma_w2 / k) * float(np.mean(traces)),
                    trials=cfg.trials,
                    noise_floor=noise.sigma_n2,
                )
            )
    return rows


def run_rsi_sweep(cfg: SweepConfig) -> list[SweepRow]:
    """Residual self-interference power over trials, per (n, k).

    The metric is the analysis or practical residual power per
    cfg.residual_mode; the prediction is the closed-form law
    k * sigma_w2 / n, and rows carry the AWGN floor sigma_n2 for
    threshold reporting.
    """
    rows = []
    for k in cfg.k_values:
        noise = cfg.noise_for(k)
        for n in cfg.n_values:
            powers = np.empty(cfg.trials)
            for trial in range(cfg.trials):
                seed = derive_trial_seed(cfg.master_seed, n, k, trial)
                x = generate_symbols(n, cfg.modulation, seed)
                h = sample_channel(k, seed)
                matrix = build_convolution_matrix(x, k)
                frame = transmit(x, h, noise, seed, matrix=matrix)
                try:
                    estimate = ls_estimate(matrix, frame.samples)
                except SingularGramError as err:
                    raise SweepCellError(n, k, trial, err) from err
                result = cancel(frame, matrix, estimate)
                if cfg.residual_mode is ResidualMode.ANALYSIS:
                    powers[trial] = result.empirical_analysis_power
                else:
                    powers[trial] = result.empirical_practical_power
            mean, stderr = _mean_stderr(powers)
            rows.append(
                SweepRow(
                    n=n,
                    k=k,
                    metric_mean=mean,
                    metric_stderr=stderr,
                    predicted=k * noise.sigma_w2 / n,
                    trials=cfg.trials,
                    noise_floor=noise.sigma_n2,
                )
            )
    return rows
