"""Baseband signal model for a full-duplex link.

The local transmitter sends a known symbol sequence x through a K-tap FIR
self-interference channel h.  The receiver observes

    y = X h + w

where X is the lower-banded Toeplitz convolution matrix of the transmitted
symbols and w lumps together the desired signal from the remote end and the
thermal AWGN, modelled as i.i.d. circularly-symmetric complex Gaussian noise
with per-sample variance sigma_w2 = sigma_d2 + sigma_n2.

Everything here is a pure function of its inputs and a seed.  Symbol,
channel, and noise draws use distinct sub-streams of the same seed, so the
three can be regenerated independently and reproducibly.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import toeplitz


class Modulation(enum.Enum):
    BPSK = "bpsk"
    QPSK = "qpsk"


_QPSK_POINTS = np.array([1 + 1j, 1 - 1j, -1 + 1j, -1 - 1j]) / np.sqrt(2.0)

# Sub-stream tags: one seed yields independent symbol/channel/noise draws.
_SYMBOL_STREAM = 1
_CHANNEL_STREAM = 2
_NOISE_STREAM = 3

_UINT64_MASK = 0xFFFFFFFFFFFFFFFF


def component_rng(seed: int, stream: int) -> np.random.Generator:
    """Generator for one component sub-stream of `seed`.

    Streams with different tags are statistically independent even for the
    same seed; the mapping is platform-independent.
    """
    entropy = [int(seed) & _UINT64_MASK, int(stream)]
    return np.random.default_rng(np.random.SeedSequence(entropy))


def _normalize_modulation(modulation: Modulation | str) -> Modulation:
    if isinstance(modulation, Modulation):
        return modulation
    try:
        return Modulation(str(modulation).lower())
    except ValueError:
        valid = ", ".join(m.value for m in Modulation)
        raise ValueError(f"unknown modulation {modulation!r}; expected one of: {valid}") from None


@dataclass(frozen=True)
class SymbolSequence:
    """Known transmitted symbols: unit-energy constellation points.

    `symbol_energy` is the nominal per-symbol energy of the constellation
    (1 for BPSK and QPSK), used to normalize correlator outputs.
    """

    symbols: np.ndarray
    modulation: Modulation
    symbol_energy: float = 1.0

    def __post_init__(self) -> None:
        symbols = np.asarray(self.symbols, dtype=np.complex128)
        if symbols.ndim != 1 or symbols.size < 1:
            raise ValueError("symbols must be a non-empty 1-D vector")
        object.__setattr__(self, "symbols", symbols)
        object.__setattr__(self, "modulation", _normalize_modulation(self.modulation))

    def __len__(self) -> int:
        return self.symbols.size


@dataclass(frozen=True)
class ChannelImpulseResponse:
    """FIR self-interference channel: complex tap vector of length K >= 1."""

    taps: np.ndarray

    def __post_init__(self) -> None:
        taps = np.asarray(self.taps, dtype=np.complex128)
        if taps.ndim != 1 or taps.size < 1:
            raise ValueError("taps must be a non-empty 1-D vector")
        if not np.all(np.isfinite(taps)):
            raise ValueError("channel taps must be finite")
        object.__setattr__(self, "taps", taps)

    def __len__(self) -> int:
        return self.taps.size


@dataclass(frozen=True)
class NoiseSpec:
    """Power bookkeeping for the composite noise w.

    sigma_d2 is the desired-signal power folded into w, sigma_n2 the AWGN
    variance, and sigma_w2 = sigma_d2 + sigma_n2 the per-sample variance of
    the composite.  Use :func:`resolve_noise` to derive the variances from
    dB ratios, or :meth:`from_sigma_w2` to pin sigma_w2 directly in
    controlled experiments.
    """

    sir_db: float
    snr_db: float
    si_power: float
    sigma_d2: float
    sigma_n2: float
    sigma_w2: float

    @classmethod
    def from_sigma_w2(cls, sigma_w2: float, si_power: float = 1.0) -> "NoiseSpec":
        """Composite noise of variance `sigma_w2` with no desired-signal part.

        Models the infinite-SIR limit (sigma_d2 = 0, sigma_n2 = sigma_w2);
        sigma_w2 = 0 gives a noiseless link for exact-recovery tests.
        """
        sigma_w2 = float(sigma_w2)
        if sigma_w2 < 0:
            raise ValueError("sigma_w2 must be >= 0")
        return cls(
            sir_db=math.inf,
            snr_db=-math.inf,
            si_power=float(si_power),
            sigma_d2=0.0,
            sigma_n2=sigma_w2,
            sigma_w2=sigma_w2,
        )


@dataclass(frozen=True)
class ConvolutionMatrix:
    """N x K lower-banded Toeplitz matrix of transmitted symbols.

    Column j (0-based) is the symbol vector shifted down by j rows and
    zero-padded, so matrix-vector products realize the first N samples of
    the linear convolution of the symbols with a K-tap channel.
    """

    entries: np.ndarray

    def __post_init__(self) -> None:
        entries = np.asarray(self.entries, dtype=np.complex128)
        if entries.ndim != 2:
            raise ValueError("entries must be a 2-D matrix")
        object.__setattr__(self, "entries", entries)

    @property
    def n_rows(self) -> int:
        return self.entries.shape[0]

    @property
    def n_cols(self) -> int:
        return self.entries.shape[1]

    def __array__(self, dtype=None, copy=None) -> np.ndarray:
        if dtype is not None:
            return self.entries.astype(dtype)
        return self.entries


@dataclass(frozen=True)
class ReceivedFrame:
    """Received samples y together with the noise bookkeeping.

    The noise realization is retained so that analysis-mode identities
    (estimation-error decomposition, residual projection) can be checked
    against the exact draw that produced the frame.
    """

    samples: np.ndarray
    noise_spec: NoiseSpec
    noise_realization: np.ndarray

    def __post_init__(self) -> None:
        samples = np.asarray(self.samples, dtype=np.complex128)
        noise = np.asarray(self.noise_realization, dtype=np.complex128)
        if samples.shape != noise.shape or samples.ndim != 1:
            raise ValueError("samples and noise_realization must be 1-D vectors of equal length")
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "noise_realization", noise)

    def __len__(self) -> int:
        return self.samples.size


def generate_symbols(n: int, modulation: Modulation | str, seed: int) -> SymbolSequence:
    """Draw `n` i.i.d. uniform constellation symbols, deterministic per seed."""
    if n < 1:
        raise ValueError("n must be >= 1")
    modulation = _normalize_modulation(modulation)
    rng = component_rng(seed, _SYMBOL_STREAM)
    if modulation is Modulation.BPSK:
        symbols = (1.0 - 2.0 * rng.integers(0, 2, size=n)).astype(np.complex128)
    else:
        symbols = _QPSK_POINTS[rng.integers(0, 4, size=n)]
    return SymbolSequence(symbols=symbols, modulation=modulation, symbol_energy=1.0)


def sample_channel(k: int, seed: int) -> ChannelImpulseResponse:
    """Draw K i.i.d. circularly-symmetric complex Gaussian taps of unit variance."""
    if k < 1:
        raise ValueError("k must be >= 1")
    rng = component_rng(seed, _CHANNEL_STREAM)
    taps = (rng.standard_normal(k) + 1j * rng.standard_normal(k)) / np.sqrt(2.0)
    return ChannelImpulseResponse(taps=taps)


def build_convolution_matrix(x: SymbolSequence, k: int) -> ConvolutionMatrix:
    """Form the N x K convolution matrix of the symbol sequence.

    Raises
    ------
    ValueError
        If k > N: fewer output samples than taps leaves the least-squares
        system underdetermined (rank-deficient).
    """
    n = len(x)
    if k < 1:
        raise ValueError("k must be >= 1")
    if k > n:
        raise ValueError(
            f"k={k} taps exceed n={n} symbols: convolution matrix would be rank-deficient"
        )
    entries = toeplitz(x.symbols, np.zeros(k, dtype=np.complex128))
    return ConvolutionMatrix(entries=entries)


def resolve_noise(sir_db: float, snr_db: float, si_power: float) -> NoiseSpec:
    """Derive the composite-noise variances from dB ratios.

    sir_db is the self-interference to desired-signal power ratio, snr_db
    the desired-signal to AWGN ratio, and si_power the average received
    self-interference power per sample, so

        sigma_d2 = si_power / 10^(sir_db/10)
        sigma_n2 = sigma_d2 / 10^(snr_db/10)
        sigma_w2 = sigma_d2 + sigma_n2
    """
    si_power = float(si_power)
    if not si_power > 0:
        raise ValueError("si_power must be > 0")
    sigma_d2 = si_power / 10.0 ** (sir_db / 10.0)
    sigma_n2 = sigma_d2 / 10.0 ** (snr_db / 10.0)
    return NoiseSpec(
        sir_db=float(sir_db),
        snr_db=float(snr_db),
        si_power=si_power,
        sigma_d2=sigma_d2,
        sigma_n2=sigma_n2,
        sigma_w2=sigma_d2 + sigma_n2,
    )


def noise_for_taps(
    k: int,
    sir_db: float,
    snr_db: float,
    sigma_w2: float | None = None,
) -> NoiseSpec:
    """Noise spec for a link whose channel has k unit-variance taps.

    Unit-energy symbols through k unit-variance taps carry average
    self-interference power k, so si_power = k keeps the dB ratios
    meaningful across channel lengths.  A non-None sigma_w2 bypasses the
    dB path and pins the composite variance directly.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    si_power = 1.0 * k
    if sigma_w2 is not None:
        return NoiseSpec.from_sigma_w2(sigma_w2, si_power=si_power)
    return resolve_noise(sir_db, snr_db, si_power)


def transmit(
    x: SymbolSequence,
    h: ChannelImpulseResponse,
    noise: NoiseSpec,
    seed: int,
    matrix: ConvolutionMatrix | None = None,
) -> ReceivedFrame:
    """Propagate the symbols through the channel and add composite noise.

    Pass a prebuilt `matrix` to avoid re-forming the convolution matrix when
    the caller needs it as well (the estimator does).
    """
    k = len(h)
    if matrix is None:
        matrix = build_convolution_matrix(x, k)
    elif matrix.n_rows != len(x) or matrix.n_cols != k:
        raise ValueError(
            f"matrix shape {matrix.n_rows}x{matrix.n_cols} does not match "
            f"n={len(x)} symbols and k={k} taps"
        )
    rng = component_rng(seed, _NOISE_STREAM)
    n = len(x)
    scale = np.sqrt(noise.sigma_w2 / 2.0)
    omega = scale * (rng.standard_normal(n) + 1j * rng.standard_normal(n))
    samples = matrix.entries @ h.taps + omega
    return ReceivedFrame(samples=samples, noise_spec=noise, noise_realization=omega)
