"""Experiment runners: determinism, CSV schemas, and end-to-end sanity."""

import numpy as np
import pytest

from otfs_papr import ExperimentConfig, ParameterError
from otfs_papr.experiment import (csv_body, frame_rng, precode_frame,
                                  render_ccdf_curve_csv,
                                  render_ccdf_samples_csv,
                                  render_error_rate_csv, render_scaling_csv,
                                  run_ccdf, run_doppler_sweep, run_error_rate,
                                  run_scaling_table, transmit)
from otfs_papr.frame import FrameParams, PskAlphabet, map_bits_to_symbols
from otfs_papr.metrics import papr
from otfs_papr.modem import modulate

SMALL = dict(M=4, N=4, frames=20, seed=9)


class TestRngContract:
    def test_substreams_are_reproducible_and_distinct(self):
        a = frame_rng(7, 0, 3).standard_normal(4)
        b = frame_rng(7, 0, 3).standard_normal(4)
        c = frame_rng(7, 0, 4).standard_normal(4)
        assert np.array_equal(a, b)
        assert not np.array_equal(a, c)


class TestRunCcdf:
    def test_deterministic_bodies(self):
        cfg = ExperimentConfig(method="proposed", **SMALL)
        r1, r2 = run_ccdf(cfg), run_ccdf(cfg)
        assert csv_body(render_ccdf_samples_csv(r1)) == csv_body(render_ccdf_samples_csv(r2))
        assert csv_body(render_ccdf_curve_csv(r1)) == csv_body(render_ccdf_curve_csv(r2))

    def test_single_frame_curve_is_a_unit_step(self):
        cfg = ExperimentConfig(M=4, N=4, frames=1, seed=3)
        result = run_ccdf(cfg)
        probs = result.curve.probabilities
        assert set(np.unique(probs)) <= {0.0, 1.0}
        drop = np.nonzero(np.diff(probs) < 0)[0]
        assert len(drop) == 1
        assert abs(result.curve.thresholds_db[drop[0]] - result.samples_db[0]) <= 0.1

    def test_samples_csv_schema(self):
        cfg = ExperimentConfig(**SMALL)
        text = render_ccdf_samples_csv(run_ccdf(cfg))
        body = csv_body(text).splitlines()
        assert body[0] == "frame_idx,papr_db"
        assert len(body) == 1 + cfg.frames
        assert text.splitlines()[0].startswith("#")

    def test_proposed_never_exceeds_uncompensated(self):
        cfg = ExperimentConfig(**SMALL)
        none = run_ccdf(cfg, method="none")
        proposed = run_ccdf(cfg, method="proposed")
        assert np.all(proposed.samples_db <= none.samples_db + 1e-9)


class TestTransmitDispatch:
    def test_methods_produce_frames_of_correct_size(self):
        cfg = ExperimentConfig(M=4, N=2, modulation=4)
        params = FrameParams(M=4, N=2)
        alphabet = PskAlphabet(D=4)
        rng = np.random.default_rng(0)
        bits = rng.integers(0, 2, params.size * 2)
        u = map_bits_to_symbols(bits, alphabet, params)
        for method in ("none", "proposed", "companding", "icf", "dft"):
            tx = transmit(u, method, cfg, params)
            assert tx.s.shape == (params.size,)

    def test_unknown_method_rejected(self):
        cfg = ExperimentConfig(M=2, N=2)
        with pytest.raises(ParameterError):
            transmit(np.ones(4, complex), "slm", cfg, FrameParams(M=2, N=2))


class TestRunErrorRate:
    def test_requires_snr_grid(self):
        with pytest.raises(ParameterError):
            run_error_rate(ExperimentConfig(**SMALL))

    def test_noiseless_identity_chain_is_error_free(self):
        cfg = ExperimentConfig(M=4, N=4, frames=15, seed=2, profile="identity",
                               snr_db_list=(float("inf"),),
                               method="none,proposed,companding,dft")
        result = run_error_rate(cfg)
        assert len(result.points) == 4
        for p in result.points:
            assert p.counts.symbol_errors == 0
            assert p.counts.bit_errors == 0
            assert p.skipped_frames == 0

    def test_error_csv_schema_and_determinism(self):
        cfg = ExperimentConfig(M=4, N=4, frames=10, seed=4,
                               snr_db_list=(12.0, 18.0), method="none,dft")
        r1, r2 = run_error_rate(cfg), run_error_rate(cfg)
        t1, t2 = render_error_rate_csv(r1), render_error_rate_csv(r2)
        assert csv_body(t1) == csv_body(t2)
        body = csv_body(t1).splitlines()
        assert body[0] == ("method,snr_db,nu_max_hz,frames,symbols,"
                           "symbol_errors,bit_errors,ser,ber")
        assert len(body) == 1 + 2 * 2  # snr points x methods

    def test_methods_share_frames_and_channels(self):
        # identical substreams mean identical symbol counts per point
        cfg = ExperimentConfig(M=4, N=4, frames=8, seed=6,
                               snr_db_list=(15.0,), method="none,icf")
        result = run_error_rate(cfg)
        symbols = {p.counts.symbols for p in result.points}
        assert symbols == {8 * 16}


class TestRunDopplerSweep:
    def test_default_grid_and_zero_point(self):
        cfg = ExperimentConfig(M=4, N=4, frames=5, seed=8, method="none")
        result = run_doppler_sweep(cfg, nu_max_list=(0.0, 600.0))
        assert [p.nu_max_hz for p in result.points] == [0.0, 600.0]
        assert all(p.snr_db == 18.0 for p in result.points)

    def test_csv_rows_match_grid(self):
        cfg = ExperimentConfig(M=4, N=4, frames=4, seed=8, method="none,dft")
        result = run_doppler_sweep(cfg, nu_max_list=(0.0, 300.0, 600.0))
        body = csv_body(render_error_rate_csv(result)).splitlines()
        assert len(body) == 1 + 3 * 2


class TestRunScalingTable:
    def test_rows_and_schema(self):
        cfg = ExperimentConfig(M=4, N=4, frames=30, seed=5, method="none,proposed")
        result = run_scaling_table(cfg, sweep_n=[2, 4])
        assert [(r.M, r.N, r.method) for r in result.rows] == [
            (4, 2, "none"), (4, 2, "proposed"), (4, 4, "none"), (4, 4, "proposed")]
        body = csv_body(render_scaling_csv(result)).splitlines()
        assert body[0] == "M,N,method,papr_db_at_ccdf_0p1"
        assert len(body) == 5

    def test_exactly_one_sweep_axis(self):
        cfg = ExperimentConfig(**SMALL)
        with pytest.raises(ParameterError):
            run_scaling_table(cfg)
        with pytest.raises(ParameterError):
            run_scaling_table(cfg, sweep_m=[4], sweep_n=[4])


class TestPrecodeFrame:
    def test_reports_before_and_after(self):
        cfg = ExperimentConfig(M=2, N=2, modulation=2)
        result = precode_frame(np.ones(4, complex), cfg)
        params = FrameParams(M=2, N=2)
        assert result.papr_before_db == pytest.approx(
            papr(modulate(np.ones(4, complex), params)).value_db)
        assert result.papr_after_db <= result.papr_before_db + 1e-12
