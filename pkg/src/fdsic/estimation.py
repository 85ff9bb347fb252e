"""Least-squares estimation of the self-interference channel.

Because every transmitted symbol is known at the local receiver, the whole
frame acts as a pilot: the channel taps are the least-squares solution of
y ~ X h over all N samples.  The solver factors the K x K Gram matrix
X^H X (Cholesky) instead of forming an explicit pseudoinverse; the trace of
the inverse Gram, which governs the estimation error, comes from the same
triangular factor.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .signal_model import ChannelImpulseResponse, ConvolutionMatrix, SymbolSequence

#: Gram condition estimate beyond which the solve is refused: past this the
#: trace and tap digits are ruined by double-precision roundoff.
GRAM_CONDITION_LIMIT = 1e12


class SingularGramError(np.linalg.LinAlgError):
    """Gram matrix X^H X is numerically singular."""

    def __init__(self, condition: float):
        self.condition = float(condition)
        super().__init__(
            f"Gram matrix is numerically singular: condition estimate {self.condition:.3e} "
            f"exceeds {GRAM_CONDITION_LIMIT:.0e}"
        )


@dataclass(frozen=True)
class ChannelEstimate:
    """Least-squares tap estimate with its error bookkeeping.

    trace_metric is Tr{(X^H X)^-1}, the quantity that multiplies the noise
    variance in the estimation MSE; gram_condition is the 2-norm condition
    estimate of X^H X from the solve.
    """

    taps: np.ndarray
    trace_metric: float
    gram_condition: float

    def __len__(self) -> int:
        return self.taps.size


def _as_matrix(x: ConvolutionMatrix | np.ndarray) -> np.ndarray:
    if isinstance(x, ConvolutionMatrix):
        return x.entries
    a = np.asarray(x, dtype=np.complex128)
    if a.ndim != 2:
        raise ValueError("expected a 2-D matrix")
    return a


def _factor_gram(matrix: np.ndarray) -> tuple[np.ndarray, float, float]:
    """Cholesky-factor the Gram matrix; return (inverse factor, trace, condition).

    The inverse of the lower Cholesky factor L gives both the solve
    (Gram^-1 = L^-H L^-1) and the trace of the inverse Gram as its squared
    Frobenius norm.  Raises SingularGramError when the condition estimate
    exceeds GRAM_CONDITION_LIMIT (or the Gram is indefinite to roundoff).
    """
    n, k = matrix.shape
    if n < k:
        raise ValueError(f"underdetermined system: n={n} rows < k={k} taps")
    gram = matrix.conj().T @ matrix
    eigvals = np.linalg.eigvalsh(gram)
    if eigvals[0] <= 0 or eigvals[-1] <= 0:
        raise SingularGramError(np.inf)
    condition = float(eigvals[-1] / eigvals[0])
    if condition > GRAM_CONDITION_LIMIT:
        raise SingularGramError(condition)
    lower = np.linalg.cholesky(gram)
    inv_lower = np.linalg.solve(lower, np.eye(k, dtype=np.complex128))
    trace = float(np.sum(inv_lower.real**2 + inv_lower.imag**2))
    return inv_lower, trace, condition


def ls_estimate(X: ConvolutionMatrix | np.ndarray, y: np.ndarray) -> ChannelEstimate:
    """Solve min_h ||y - X h||^2 via the normal equations.

    The returned taps satisfy X^H X h = X^H y, so the residual y - X h is
    orthogonal to the column space of X.
    """
    matrix = _as_matrix(X)
    y = np.asarray(y, dtype=np.complex128)
    if y.ndim != 1 or y.size != matrix.shape[0]:
        raise ValueError(f"y must be a vector of length {matrix.shape[0]}")
    inv_lower, trace, condition = _factor_gram(matrix)
    taps = inv_lower.conj().T @ (inv_lower @ (matrix.conj().T @ y))
    return ChannelEstimate(taps=taps, trace_metric=trace, gram_condition=condition)


def trace_metric(X: ConvolutionMatrix | np.ndarray) -> float:
    """Tr{(X^H X)^-1}: the symbol-matrix factor of the estimation MSE."""
    _, trace, _ = _factor_gram(_as_matrix(X))
    return trace


def predicted_mse(sigma_w2: float, k: int, trace: float) -> float:
    """Closed-form per-tap estimation MSE: (sigma_w2 / k) * Tr{(X^H X)^-1}."""
    if sigma_w2 < 0:
        raise ValueError("sigma_w2 must be >= 0")
    if k < 1:
        raise ValueError("k must be >= 1")
    if trace <= 0:
        raise ValueError("trace must be > 0")
    return (sigma_w2 / k) * trace


def single_tap_estimate(x: SymbolSequence, y: np.ndarray) -> complex:
    """Despreading estimator for a single-tap channel: (x^H y) / (x^H x).

    Correlating the received samples with the known symbols and normalizing
    by the total symbol energy is exactly the K = 1 least-squares solution.
    """
    y = np.asarray(y, dtype=np.complex128)
    symbols = x.symbols
    if y.shape != symbols.shape:
        raise ValueError("x and y must have the same length")
    energy = np.vdot(symbols, symbols).real
    if energy <= 0:
        raise ValueError("symbol sequence has zero energy")
    return complex(np.vdot(symbols, y) / energy)


def empirical_mse(
    h: ChannelImpulseResponse,
    estimates: Iterable[ChannelEstimate | np.ndarray],
) -> float:
    """Sample MSE per tap: mean of |h_hat_k - h_k|^2 over taps and trials."""
    truth = h.taps
    total = 0.0
    trials = 0
    for est in estimates:
        taps = est.taps if isinstance(est, ChannelEstimate) else np.asarray(est, dtype=np.complex128)
        if taps.shape != truth.shape:
            raise ValueError("estimate length does not match channel length")
        total += float(np.sum(np.abs(taps - truth) ** 2))
        trials += 1
    if trials == 0:
        raise ValueError("estimates must be non-empty")
    return total / (trials * truth.size)
