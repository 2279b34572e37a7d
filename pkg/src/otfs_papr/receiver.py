"""MMSE equalization in the DD domain, phase detection and error counting."""

from dataclasses import dataclass

import numpy as np

from .errors import EqualizerError, ParameterError
from .frame import FrameParams, gray_encode


@dataclass(frozen=True)
class EqualizerInput:
    """DD-domain observations with the exact channel and noise level.

    y = H_eff @ x + w with white DD-domain noise of per-element variance
    sigma2_dd; Es is the symbol energy assumed by the regularizer.
    """

    y: np.ndarray
    H_eff: np.ndarray
    sigma2_dd: float
    Es: float

    def __post_init__(self):
        if self.sigma2_dd < 0:
            raise ParameterError(f"sigma2_dd must be >= 0, got {self.sigma2_dd}")
        if not self.Es > 0:
            raise ParameterError(f"Es must be positive, got {self.Es}")


@dataclass(frozen=True)
class ErrorCounts:
    symbols: int
    symbol_errors: int
    bits: int
    bit_errors: int

    @property
    def ser(self) -> float:
        return self.symbol_errors / self.symbols if self.symbols else 0.0

    @property
    def ber(self) -> float:
        return self.bit_errors / self.bits if self.bits else 0.0

    def __add__(self, other: "ErrorCounts") -> "ErrorCounts":
        return ErrorCounts(self.symbols + other.symbols,
                           self.symbol_errors + other.symbol_errors,
                           self.bits + other.bits,
                           self.bit_errors + other.bit_errors)


def dd_noise_variance(sigma2_td: float, params: FrameParams) -> float:
    """Per-element DD-domain noise variance after demodulation.

    The analysis transform is (1/N) times an N-scaled unitary map, so
    white time-domain noise of variance sigma2 stays white with variance
    sigma2/N.
    """
    if sigma2_td < 0:
        raise ParameterError(f"sigma2_td must be >= 0, got {sigma2_td}")
    return sigma2_td / params.N


def mmse_equalize(inp: EqualizerInput) -> np.ndarray:
    """Linear MMSE symbol estimates.

    Solves (H^H H + (sigma2_dd/Es) I) x = H^H y with a direct linear
    solve; deterministic for fixed inputs.  Raises EqualizerError when
    the solve fails or returns non-finite values.
    """
    H = np.asarray(inp.H_eff, dtype=complex)
    y = np.asarray(inp.y, dtype=complex)
    n = H.shape[0]
    if H.shape != (n, n) or y.shape != (n,):
        raise ParameterError(f"shape mismatch: H {H.shape}, y {y.shape}")
    gram = H.conj().T @ H
    gram[np.diag_indices(n)] += inp.sigma2_dd / inp.Es
    try:
        x_hat = np.linalg.solve(gram, H.conj().T @ y)
    except np.linalg.LinAlgError as exc:
        raise EqualizerError(f"MMSE solve failed: {exc}") from exc
    if not np.all(np.isfinite(x_hat)):
        raise EqualizerError("MMSE solve produced non-finite estimates")
    return x_hat


_POPCOUNT_BYTE = np.array([bin(i).count("1") for i in range(256)], dtype=np.int64)


def count_errors(detected, truth, D: int) -> ErrorCounts:
    """Symbol and Gray-label bit errors between two index sequences."""
    detected = np.asarray(detected, dtype=np.int64)
    truth = np.asarray(truth, dtype=np.int64)
    if detected.shape != truth.shape:
        raise ParameterError(
            f"length mismatch: {detected.shape} vs {truth.shape}")
    if not 2 <= D <= 256:
        raise ParameterError(f"modulation order out of range: {D}")
    bits_per_symbol = max(int(D - 1).bit_length(), 1)
    diff = gray_encode(detected) ^ gray_encode(truth)
    bit_errors = int(_POPCOUNT_BYTE[diff & 0xFF].sum())
    return ErrorCounts(symbols=detected.size,
                       symbol_errors=int(np.count_nonzero(detected != truth)),
                       bits=detected.size * bits_per_symbol,
                       bit_errors=bit_errors)
