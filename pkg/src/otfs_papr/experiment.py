"""Seeded Monte Carlo experiment runners and CSV rendering.

Runners are pure with respect to the filesystem; the CLI writes the
rendered CSV text.  Every frame draws from its own RNG substream keyed
by (seed, sweep-point index, frame index), so results do not depend on
execution order and different methods see identical frames, channels
and noise.
"""

import datetime
from dataclasses import dataclass, field, replace

import numpy as np

from . import __version__
from .baselines import (CompandingConfig, DftSpreadConfig, IcfConfig, clip_count,
                        dft_despread, dft_spread, icf, mu_compand, mu_expand)
from .channel import (PathProfile, add_awgn, apply_channel, calibrate_noise,
                      effective_dd_matrix, identity_channel, named_profile,
                      sample_channel)
from .config import ExperimentConfig, config_summary
from .errors import EqualizerError, ParameterError
from .frame import FrameParams, PskAlphabet, detect_symbols, map_bits_to_symbols
from .metrics import CcdfCurve, ccdf, papr, papr_at_ccdf
from .modem import demodulate, modulate
from .precoder import GreedyConfig, greedy_precode
from .receiver import (EqualizerInput, ErrorCounts, count_errors,
                       dd_noise_variance, mmse_equalize)

RNG_SCHEME = "pcg64-seedseq-v1"
CCDF_TARGETS = (0.5, 0.1)
DOPPLER_SWEEP_DEFAULT_HZ = tuple(float(v) for v in range(0, 2401, 300))
DOPPLER_SWEEP_SNR_DB = 18.0


def frame_rng(seed: int, *path: int) -> np.random.Generator:
    """Deterministic per-frame substream; independent of worker scheduling."""
    return np.random.default_rng(
        np.random.SeedSequence(entropy=seed, spawn_key=tuple(path)))


def _frame_params(cfg: ExperimentConfig) -> FrameParams:
    return FrameParams(M=cfg.M, N=cfg.N, delta_f=cfg.delta_f)


def _alphabet(cfg: ExperimentConfig) -> PskAlphabet:
    return PskAlphabet(D=cfg.modulation, A=cfg.amplitude)


def _greedy_config(cfg: ExperimentConfig) -> GreedyConfig:
    return GreedyConfig(max_iter=None if cfg.max_iter == 0 else cfg.max_iter)


def _profile(cfg: ExperimentConfig) -> PathProfile | None:
    """None signals the deterministic identity channel."""
    if cfg.profile.lower() == "identity":
        return None
    return named_profile(cfg.profile)


def draw_info_vector(cfg: ExperimentConfig, params: FrameParams,
                     alphabet: PskAlphabet, rng: np.random.Generator):
    """Random information bits and their mapped symbol vector."""
    bits = rng.integers(0, 2, params.size * alphabet.bits_per_symbol)
    return bits, map_bits_to_symbols(bits, alphabet, params)


@dataclass(frozen=True)
class TransmitFrame:
    """Transmit-side products of one frame for one method."""

    s: np.ndarray
    peak_reference: float | None = None  # companding side information
    flips: int = 0


def transmit(u, method: str, cfg: ExperimentConfig, params: FrameParams) -> TransmitFrame:
    """Apply one method's transmit path to an information vector."""
    if method == "none":
        return TransmitFrame(s=modulate(u, params))
    if method == "proposed":
        result = greedy_precode(u, params, _greedy_config(cfg))
        return TransmitFrame(s=modulate(result.x_star, params), flips=len(result.flips))
    if method == "companding":
        s0 = modulate(u, params)
        V = float(np.abs(s0).max())
        return TransmitFrame(s=mu_compand(s0, CompandingConfig(mu=cfg.mu), V),
                             peak_reference=V)
    if method == "icf":
        icf_cfg = IcfConfig(clip_ratio_db=cfg.clip_ratio_db,
                            iterations=cfg.icf_iterations,
                            oversample_factor=cfg.icf_oversample)
        return TransmitFrame(s=icf(modulate(u, params), icf_cfg, params))
    if method == "dft":
        spread = dft_spread(u, DftSpreadConfig(axis=cfg.dft_axis), params)
        return TransmitFrame(s=modulate(spread, params))
    raise ParameterError(f"unknown method {method!r}")


# ---------------------------------------------------------------------------
# CCDF experiments


@dataclass(frozen=True)
class CcdfResult:
    config: ExperimentConfig
    method: str
    samples_db: np.ndarray
    curve: CcdfCurve
    papr_at_targets: dict


def run_ccdf(cfg: ExperimentConfig, method: str = None) -> CcdfResult:
    """PAPR of `frames` random frames under one method, with its CCDF."""
    method = cfg.methods[0] if method is None else method
    params = _frame_params(cfg)
    alphabet = _alphabet(cfg)
    samples = np.empty(cfg.frames)
    for f in range(cfg.frames):
        rng = frame_rng(cfg.seed, f)
        _, u = draw_info_vector(cfg, params, alphabet, rng)
        samples[f] = papr(transmit(u, method, cfg, params).s).value_db
    curve = ccdf(samples)
    targets = {t: papr_at_ccdf(samples, t) for t in CCDF_TARGETS}
    return CcdfResult(config=cfg, method=method, samples_db=samples,
                      curve=curve, papr_at_targets=targets)


# ---------------------------------------------------------------------------
# Error-rate experiments


@dataclass(frozen=True)
class ErrorRatePoint:
    method: str
    snr_db: float
    nu_max_hz: float
    frames: int
    counts: ErrorCounts
    skipped_frames: int = 0
    expander_clips: int = 0


@dataclass(frozen=True)
class ErrorRateResult:
    config: ExperimentConfig
    points: list = field(default_factory=list)


def _run_error_point(cfg: ExperimentConfig, method: str, snr_db: float,
                     nu_max: float, point_idx: int) -> ErrorRatePoint:
    params = _frame_params(cfg)
    alphabet = _alphabet(cfg)
    profile = _profile(cfg)
    comp_cfg = CompandingConfig(mu=cfg.mu)
    dft_cfg = DftSpreadConfig(axis=cfg.dft_axis)
    counts = ErrorCounts(0, 0, 0, 0)
    skipped = 0
    clips = 0
    for f in range(cfg.frames):
        rng = frame_rng(cfg.seed, point_idx, f)
        _, u = draw_info_vector(cfg, params, alphabet, rng)
        truth = detect_symbols(u, alphabet)
        tx = transmit(u, method, cfg, params)
        if profile is None:
            ch = identity_channel()
        else:
            ch = sample_channel(profile, nu_max, params, rng)
        r0 = apply_channel(tx.s, ch, params)
        sigma2 = calibrate_noise(snr_db, r0)
        r = add_awgn(r0, sigma2, rng)
        if method == "companding":
            clips += clip_count(r, tx.peak_reference)
            r = mu_expand(r, comp_cfg, tx.peak_reference)
        y = demodulate(r, params)
        H = effective_dd_matrix(ch, params)
        try:
            x_hat = mmse_equalize(EqualizerInput(
                y=y, H_eff=H, sigma2_dd=dd_noise_variance(sigma2, params),
                Es=alphabet.A ** 2))
        except EqualizerError:
            skipped += 1
            continue
        if method == "dft":
            x_hat = dft_despread(x_hat, dft_cfg, params)
        counts = counts + count_errors(detect_symbols(x_hat, alphabet), truth,
                                       alphabet.D)
    return ErrorRatePoint(method=method, snr_db=snr_db, nu_max_hz=nu_max,
                          frames=cfg.frames - skipped, counts=counts,
                          skipped_frames=skipped, expander_clips=clips)


def run_error_rate(cfg: ExperimentConfig) -> ErrorRateResult:
    """SER/BER over the configured SNR grid for each configured method.

    Methods share RNG substreams, so they are compared on identical
    information vectors, channel draws and noise.
    """
    if not cfg.snr_db_list:
        raise ParameterError("snr_db_list must be non-empty for error-rate runs")
    points = []
    for point_idx, snr_db in enumerate(cfg.snr_db_list):
        for method in cfg.methods:
            points.append(_run_error_point(cfg, method, float(snr_db),
                                           cfg.nu_max_hz, point_idx))
    return ErrorRateResult(config=cfg, points=points)


def run_doppler_sweep(cfg: ExperimentConfig, nu_max_list=None,
                      snr_db: float = DOPPLER_SWEEP_SNR_DB) -> ErrorRateResult:
    """SER at fixed SNR across a maximum-Doppler grid."""
    nus = DOPPLER_SWEEP_DEFAULT_HZ if nu_max_list is None else tuple(nu_max_list)
    points = []
    for point_idx, nu in enumerate(nus):
        for method in cfg.methods:
            points.append(_run_error_point(cfg, method, snr_db, float(nu),
                                           point_idx))
    return ErrorRateResult(config=cfg, points=points)


# ---------------------------------------------------------------------------
# Grid-size scaling table


@dataclass(frozen=True)
class ScalingRow:
    M: int
    N: int
    method: str
    papr_db_at_ccdf_0p1: float


@dataclass(frozen=True)
class ScalingResult:
    config: ExperimentConfig
    rows: list = field(default_factory=list)


def run_scaling_table(cfg: ExperimentConfig, sweep_m=None, sweep_n=None) -> ScalingResult:
    """PAPR at CCDF 0.1 for every (grid size, method) combination.

    Exactly one of sweep_m / sweep_n gives the swept dimension; the
    other dimension is held at the config value.
    """
    if (sweep_m is None) == (sweep_n is None):
        raise ParameterError("provide exactly one of sweep_m or sweep_n")
    values = sweep_m if sweep_m is not None else sweep_n
    rows = []
    for grid_idx, value in enumerate(values):
        sized = replace(cfg, M=int(value) if sweep_m is not None else cfg.M,
                        N=int(value) if sweep_n is not None else cfg.N)
        params = _frame_params(sized)
        alphabet = _alphabet(sized)
        for method in cfg.methods:
            samples = np.empty(cfg.frames)
            for f in range(cfg.frames):
                rng = frame_rng(cfg.seed, grid_idx, f)
                _, u = draw_info_vector(sized, params, alphabet, rng)
                samples[f] = papr(transmit(u, method, sized, params).s).value_db
            rows.append(ScalingRow(M=sized.M, N=sized.N, method=method,
                                   papr_db_at_ccdf_0p1=papr_at_ccdf(samples, 0.1)))
    return ScalingResult(config=cfg, rows=rows)


# ---------------------------------------------------------------------------
# Single-frame precoding (CLI `precode` subcommand)


@dataclass(frozen=True)
class PrecodeFrameResult:
    x_star: np.ndarray
    papr_before_db: float
    papr_after_db: float
    iterations_used: int
    flips: list


def precode_frame(u, cfg: ExperimentConfig) -> PrecodeFrameResult:
    params = _frame_params(cfg)
    before = papr(modulate(np.asarray(u, complex), params)).value_db
    result = greedy_precode(u, params, _greedy_config(cfg))
    return PrecodeFrameResult(x_star=result.x_star, papr_before_db=before,
                              papr_after_db=result.papr_star.value_db,
                              iterations_used=result.iterations_used,
                              flips=list(result.flips))


# ---------------------------------------------------------------------------
# CSV rendering (bodies are byte-stable; only the timestamp header varies)


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.10g}"
    return str(v)


def _metadata_lines(cfg: ExperimentConfig, kind: str, extra=()) -> list:
    now = datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds")
    lines = [f"# otfs-papr v{__version__} {kind}",
             f"# generated: {now}",
             f"# rng: {RNG_SCHEME} seed={cfg.seed}",
             f"# config: {config_summary(cfg)}"]
    lines.extend(f"# {e}" for e in extra)
    return lines


def render_ccdf_samples_csv(result: CcdfResult) -> str:
    extra = [f"method: {result.method}"] + [
        f"papr_db_at_ccdf_{t}: {_fmt(result.papr_at_targets[t])}"
        for t in CCDF_TARGETS]
    lines = _metadata_lines(result.config, "ccdf-samples", extra)
    lines.append("frame_idx,papr_db")
    lines.extend(f"{i},{_fmt(float(v))}" for i, v in enumerate(result.samples_db))
    return "\n".join(lines) + "\n"


def render_ccdf_curve_csv(result: CcdfResult) -> str:
    extra = [f"method: {result.method}"] + [
        f"papr_db_at_ccdf_{t}: {_fmt(result.papr_at_targets[t])}"
        for t in CCDF_TARGETS]
    lines = _metadata_lines(result.config, "ccdf-curve", extra)
    lines.append("threshold_db,ccdf")
    lines.extend(f"{_fmt(float(t))},{_fmt(float(p))}"
                 for t, p in zip(result.curve.thresholds_db,
                                 result.curve.probabilities))
    return "\n".join(lines) + "\n"


def render_error_rate_csv(result: ErrorRateResult) -> str:
    extra = []
    for p in result.points:
        if p.skipped_frames:
            extra.append(f"skipped: method={p.method} snr_db={_fmt(p.snr_db)} "
                         f"nu_max_hz={_fmt(p.nu_max_hz)} count={p.skipped_frames}")
        if p.expander_clips:
            extra.append(f"expander_clips: method={p.method} snr_db={_fmt(p.snr_db)} "
                         f"nu_max_hz={_fmt(p.nu_max_hz)} count={p.expander_clips}")
    lines = _metadata_lines(result.config, "error-rate", extra)
    lines.append("method,snr_db,nu_max_hz,frames,symbols,symbol_errors,bit_errors,ser,ber")
    for p in result.points:
        c = p.counts
        lines.append(",".join([p.method, _fmt(p.snr_db), _fmt(p.nu_max_hz),
                               str(p.frames), str(c.symbols), str(c.symbol_errors),
                               str(c.bit_errors), _fmt(c.ser), _fmt(c.ber)]))
    return "\n".join(lines) + "\n"


def render_scaling_csv(result: ScalingResult) -> str:
    lines = _metadata_lines(result.config, "scaling-table")
    lines.append("M,N,method,papr_db_at_ccdf_0p1")
    lines.extend(f"{r.M},{r.N},{r.method},{_fmt(r.papr_db_at_ccdf_0p1)}"
                 for r in result.rows)
    return "\n".join(lines) + "\n"


def csv_body(text: str) -> str:
    """CSV text with `#` metadata lines stripped (the deterministic part)."""
    return "\n".join(line for line in text.splitlines()
                     if not line.startswith("#")) + "\n"
