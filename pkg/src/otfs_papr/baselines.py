"""Comparison PAPR-reduction methods: mu-law companding, iterative
clipping-and-filtering, and unitary DFT spreading.

These are standard textbook forms with every parameter exposed in the
configs; they serve as reference points for the amplitude precoder.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .frame import FrameParams

_ROUND_TRIP_GUARD = 1e-12


@dataclass(frozen=True)
class CompandingConfig:
    mu: float = 4.0

    def __post_init__(self):
        if not self.mu > 0:
            raise ParameterError(f"mu must be positive, got {self.mu}")


@dataclass(frozen=True)
class IcfConfig:
    clip_ratio_db: float = 4.0
    iterations: int = 3
    oversample_factor: int = 4

    def __post_init__(self):
        if self.iterations < 1:
            raise ParameterError(f"iterations must be >= 1, got {self.iterations}")
        if self.oversample_factor < 2:
            raise ParameterError(
                f"oversample_factor must be >= 2, got {self.oversample_factor}")


@dataclass(frozen=True)
class DftSpreadConfig:
    axis: str = "delay"

    def __post_init__(self):
        if self.axis not in ("delay", "doppler"):
            raise ParameterError(f"axis must be 'delay' or 'doppler', got {self.axis!r}")


def mu_compand(s, cfg: CompandingConfig, V: float) -> np.ndarray:
    """Logarithmic magnitude compression toward the peak reference V.

    |out| = V * ln(1 + mu*|s|/V) / ln(1 + mu), phases preserved.  V must
    be at least the frame peak so the map stays on [0, V].
    """
    s = np.asarray(s, dtype=complex)
    mag = np.abs(s)
    peak = mag.max() if s.size else 0.0
    if not peak > 0:
        raise ParameterError("cannot compand an all-zero frame")
    if V < peak:
        raise ParameterError(f"peak reference V={V} below frame peak {peak}")
    out_mag = V * np.log1p(cfg.mu * mag / V) / np.log1p(cfg.mu)
    return _with_magnitude(s, mag, out_mag)


def mu_expand(s, cfg: CompandingConfig, V: float) -> np.ndarray:
    """Exact functional inverse of mu_compand on magnitudes.

    Magnitudes above V (possible after channel and noise) are clipped to
    V first; callers that care count the exceedances via clip_count().
    """
    s = np.asarray(s, dtype=complex)
    if not V > 0:
        raise ParameterError(f"peak reference must be positive, got {V}")
    mag = np.minimum(np.abs(s), V)
    out_mag = (V / cfg.mu) * np.expm1(mag * np.log1p(cfg.mu) / V)
    return _with_magnitude(s, np.abs(s), out_mag)


def clip_count(s, V: float) -> int:
    """Number of samples whose magnitude exceeds the expander range."""
    return int(np.count_nonzero(np.abs(np.asarray(s)) > V))


def _with_magnitude(s, mag, new_mag):
    out = np.zeros_like(s)
    nz = mag > 0
    out[nz] = s[nz] * (new_mag[nz] / mag[nz])
    return out


def _spectral_interpolate(s, L: int) -> np.ndarray:
    """Zero-padded spectrum extension to L times the sample count."""
    n = len(s)
    head = (n + 1) // 2
    spec = np.fft.fft(s)
    padded = np.zeros(L * n, dtype=complex)
    padded[:head] = spec[:head]
    padded[L * n - (n - head):] = spec[head:]
    return np.fft.ifft(padded) * L


def _spectral_decimate(up, n: int, L: int) -> np.ndarray:
    """Inverse of _spectral_interpolate: keep the n in-band bins."""
    head = (n + 1) // 2
    spec = np.fft.fft(up) / L
    kept = np.concatenate([spec[:head], spec[L * n - (n - head):]])
    return np.fft.ifft(kept)


def icf(s, cfg: IcfConfig, params: FrameParams) -> np.ndarray:
    """Iterative clipping and filtering.

    Each round interpolates to an oversampled grid, clips magnitudes at
    gamma = rms * 10^(clip_ratio_db/20) (phase preserved), and removes
    the out-of-band regrowth by keeping only the in-band spectral bins.
    The receiver applies no inverse; the residual clipping distortion
    rides along as noise.
    """
    s = np.asarray(s, dtype=complex)
    if s.shape != (params.size,):
        raise ParameterError(f"expected {params.size} samples, got shape {s.shape}")
    out = s
    L = cfg.oversample_factor
    for _ in range(cfg.iterations):
        up = _spectral_interpolate(out, L)
        rms = np.sqrt(np.mean(np.abs(up) ** 2))
        if rms == 0:
            return out
        gamma = rms * 10 ** (cfg.clip_ratio_db / 20)
        mag = np.abs(up)
        over = mag > gamma
        up[over] *= gamma / mag[over]
        out = _spectral_decimate(up, params.size, L)
    return out


def dft_spread(u, cfg: DftSpreadConfig, params: FrameParams) -> np.ndarray:
    """Unitary DFT precoding of the symbol grid along one axis.

    axis='delay' replaces each Doppler row's M-long delay sequence by
    its unitary M-point DFT; axis='doppler' transforms the N-long
    Doppler columns instead.
    """
    u = np.asarray(u, dtype=complex)
    if u.shape != (params.size,):
        raise ParameterError(f"expected {params.size} symbols, got shape {u.shape}")
    grid = u.reshape(params.N, params.M)
    if cfg.axis == "delay":
        spread = np.fft.fft(grid, axis=1) / np.sqrt(params.M)
    else:
        spread = np.fft.fft(grid, axis=0) / np.sqrt(params.N)
    return spread.reshape(params.size)


def dft_despread(x, cfg: DftSpreadConfig, params: FrameParams) -> np.ndarray:
    """Exact inverse of dft_spread, applied after equalization."""
    x = np.asarray(x, dtype=complex)
    if x.shape != (params.size,):
        raise ParameterError(f"expected {params.size} symbols, got shape {x.shape}")
    grid = x.reshape(params.N, params.M)
    if cfg.axis == "delay":
        out = np.fft.ifft(grid, axis=1) * np.sqrt(params.M)
    else:
        out = np.fft.ifft(grid, axis=0) * np.sqrt(params.N)
    return out.reshape(params.size)
