"""Frame parameters, alphabets, Gray mapping and phase detection."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from otfs_papr import (FrameParams, ParameterError, PskAlphabet,
                       UnsupportedModulationError, detect_symbol,
                       detect_symbols, map_bits_to_symbols, symbols_to_bits,
                       validate_info_vector)


class TestFrameParams:
    def test_derived_timing_is_exact(self):
        p = FrameParams(M=16, N=16, delta_f=15e3)
        assert p.T * p.delta_f == 1.0
        assert p.Ts == 1.0 / (16 * 15e3)
        assert p.size == 256

    @pytest.mark.parametrize("kwargs", [
        dict(M=0, N=4), dict(M=4, N=0), dict(M=4, N=4, delta_f=0.0),
        dict(M=4, N=4, delta_f=-1.0),
    ])
    def test_rejects_bad_dimensions(self, kwargs):
        with pytest.raises(ParameterError):
            FrameParams(**kwargs)


class TestPskAlphabet:
    def test_symbols_sit_on_the_ring(self):
        a = PskAlphabet(D=8, A=2.5)
        syms = a.symbols()
        assert np.allclose(np.abs(syms), 2.5)
        assert np.allclose(syms[0], 2.5)
        assert len(np.unique(np.round(np.angle(syms), 12))) == 8

    def test_rejects_degenerate_orders(self):
        with pytest.raises(ParameterError):
            PskAlphabet(D=1)
        with pytest.raises(ParameterError):
            PskAlphabet(D=4, A=0.0)

    def test_bits_per_symbol_requires_power_of_two(self):
        assert PskAlphabet(D=4).bits_per_symbol == 2
        with pytest.raises(UnsupportedModulationError):
            PskAlphabet(D=6).bits_per_symbol


class TestBitMapping:
    def test_bpsk_is_antipodal(self):
        a = PskAlphabet(D=2, A=1.0)
        p = FrameParams(M=2, N=1)
        u = map_bits_to_symbols([0, 1], a, p)
        assert np.allclose(u, [1.0, -1.0])

    def test_qpsk_gray_order(self):
        a = PskAlphabet(D=4)
        p = FrameParams(M=2, N=2)
        u = map_bits_to_symbols([0, 0, 0, 1, 1, 1, 1, 0], a, p)
        assert np.array_equal(detect_symbols(u, a), [0, 1, 2, 3])

    def test_all_zero_bits_give_constant_vector(self):
        a = PskAlphabet(D=8, A=3.0)
        p = FrameParams(M=4, N=2)
        u = map_bits_to_symbols(np.zeros(8 * 3, dtype=int), a, p)
        assert np.allclose(u, 3.0)

    def test_bit_length_mismatch(self):
        with pytest.raises(ParameterError):
            map_bits_to_symbols([0, 1, 0], PskAlphabet(D=2), FrameParams(M=2, N=1))

    def test_non_power_of_two_order(self):
        with pytest.raises(UnsupportedModulationError):
            map_bits_to_symbols([0, 1], PskAlphabet(D=3), FrameParams(M=2, N=1))

    @settings(deadline=None, max_examples=40)
    @given(st.integers(0, 3).map(lambda k: 2 ** (k + 1)),
           st.integers(0, 2 ** 16 - 1), st.integers(1, 4), st.integers(1, 4))
    def test_round_trip_recovers_bits(self, D, bit_seed, M, N):
        a = PskAlphabet(D=D)
        p = FrameParams(M=M, N=N)
        rng = np.random.default_rng(bit_seed)
        bits = rng.integers(0, 2, p.size * a.bits_per_symbol)
        u = map_bits_to_symbols(bits, a, p)
        recovered = symbols_to_bits(detect_symbols(u, a), a)
        assert np.array_equal(recovered, bits)


class TestDetection:
    def test_amplitude_is_ignored(self):
        a = PskAlphabet(D=8, A=1.0)
        assert detect_symbol(3.0 * a.symbol(1), a) == 1

    def test_nearest_phase_rounding(self):
        a = PskAlphabet(D=8)
        z = np.exp(1j * (0.4 * np.pi / 8))  # offset under half a sector
        assert detect_symbol(z, a) == 0

    def test_negative_real_maps_to_half_order(self):
        assert detect_symbol(-5.0 + 0j, PskAlphabet(D=4)) == 2

    def test_zero_falls_back_to_index_zero(self):
        assert detect_symbol(0j, PskAlphabet(D=4)) == 0
        assert detect_symbols([0j, 1 + 0j], PskAlphabet(D=4)).tolist() == [0, 0]

    def test_non_finite_rejected(self):
        with pytest.raises(ParameterError):
            detect_symbol(complex(np.nan, 0), PskAlphabet(D=4))

    @settings(deadline=None, max_examples=60)
    @given(st.integers(2, 16), st.integers(0, 15),
           st.floats(1e-3, 1e3, allow_nan=False))
    def test_scale_invariance(self, D, p, c):
        a = PskAlphabet(D=D)
        assert detect_symbol(c * a.symbol(p % D), a) == p % D


class TestInfoVectorValidation:
    def test_accepts_mapped_vectors(self):
        a = PskAlphabet(D=4, A=2.0)
        p = FrameParams(M=2, N=2)
        u = a.A * np.exp(2j * np.pi * np.array([0, 1, 2, 3]) / 4)
        validate_info_vector(u, a, p)

    def test_rejects_wrong_amplitude_and_phase(self):
        a = PskAlphabet(D=4)
        p = FrameParams(M=2, N=2)
        with pytest.raises(ParameterError):
            validate_info_vector(np.array([1, 1, 1, 1.5], complex), a, p)
        with pytest.raises(ParameterError):
            validate_info_vector(np.exp(1j * np.array([0, 0.3, 0, 0])), a, p)
