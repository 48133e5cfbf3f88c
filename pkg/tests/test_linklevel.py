import csv
import io
from dataclasses import replace

import numpy as np
import pytest

from kpcfeedback.channel import ChannelConfig
from kpcfeedback.codebook import CodebookSpec
from kpcfeedback.linklevel import (CSV_HEADER, BerRecord, SimConfig, ber_std, coding_gain,
                                   complex_noise, noise_density, qpsk_demodulate, qpsk_modulate,
                                   records_to_csv, run_sweep, run_trial, snr_at_ber,
                                   sweep_errors)

ALL_PAIRS = np.array([0, 0, 0, 1, 1, 0, 1, 1])


def small_config(**kw):
    ch = ChannelConfig(m_th=2, m_tv=2, i_mpc=3, angular_spread=0.3)
    base = SimConfig(channel=ch, codebook=CodebookSpec(4, 4, 2, 2), snr_db_list=(-6, -3, 0, 3),
                     iterations=60, symbols_per_iteration=256)
    return replace(base, **kw)


class TestQpsk:

    def test_gray_map(self):
        s = qpsk_modulate(ALL_PAIRS)
        np.testing.assert_allclose(s, np.array([1 + 1j, 1 - 1j, -1 + 1j, -1 - 1j]) / np.sqrt(2))
        assert np.mean(np.abs(s) ** 2) == pytest.approx(1.0)

    def test_odd_bits(self):
        with pytest.raises(ValueError):
            qpsk_modulate([0, 1, 1])

    def test_round_trip(self):
        eff = 0.3 - 1.7j
        assert np.array_equal(qpsk_demodulate(eff * qpsk_modulate(ALL_PAIRS), eff), ALL_PAIRS)

    def test_rotated_channel(self):
        eff = 2.0 * np.exp(1j * np.pi / 3)
        assert np.array_equal(qpsk_demodulate(eff * qpsk_modulate(ALL_PAIRS), eff), ALL_PAIRS)

    def test_boundary_rule(self):
        assert list(qpsk_demodulate(1.0 + 0j, 1.0)) == [0, 0]
        assert list(qpsk_demodulate(0j, 1.0)) == [0, 0]
        assert list(qpsk_demodulate(-1.0 + 0j, 1.0)) == [1, 0]

    def test_zero_channel(self):
        with pytest.raises(ValueError):
            qpsk_demodulate(1.0, 0)


class TestNoise:

    def test_variance(self):
        n0 = noise_density(3.0)
        z = complex_noise(1_000_000, n0, np.random.default_rng(0))
        assert np.mean(np.abs(z) ** 2) == pytest.approx(n0, rel=0.01)

    def test_snr_bookkeeping(self):
        rng = np.random.default_rng(1)
        eff = 0.8 * np.exp(0.4j)
        n0 = noise_density(5.0)
        x = qpsk_modulate(rng.integers(0, 2, 200_000))
        y = eff * x + complex_noise(x.size, n0, rng)
        measured = np.mean(np.abs(eff * x) ** 2) / np.mean(np.abs(y - eff * x) ** 2)
        assert measured == pytest.approx(abs(eff) ** 2 / n0, rel=0.02)


class TestTrial:

    def test_high_snr_on_grid_is_error_free(self):
        ch = ChannelConfig(m_th=4, m_tv=4, i_mpc=1, angular_spread=0.0,
                           mean_azimuth=np.pi / 2, mean_elevation=np.pi / 2)
        cfg = SimConfig(channel=ch, codebook=CodebookSpec(4, 4, 4, 4), symbols_per_iteration=4096)
        for t in range(5):
            assert run_trial(cfg, 60.0, t) == (0, 8192)

    def test_deterministic(self):
        cfg = small_config()
        assert run_trial(cfg, -3.0, 7) == run_trial(cfg, -3.0, 7)
        assert run_trial(cfg, -3.0, 7) != run_trial(cfg, -3.0, 8)

    @pytest.mark.parametrize("scheme", ["3d-psk", "2d-dft", "3d-dft", "kpc-exhaustive"])
    def test_schemes_run(self, scheme):
        errors, total = run_trial(small_config(scheme=scheme), 0.0, 0)
        assert 0 <= errors <= total == 512

    @pytest.mark.parametrize("kw", [dict(scheme="foo"), dict(iterations=0),
                                    dict(snr_db_list=()), dict(dft_oversample=0),
                                    dict(codebook=CodebookSpec(4, 4, 2, 3))])
    def test_invalid(self, kw):
        with pytest.raises(ValueError):
            small_config(**kw)


class TestSweep:

    def test_records(self):
        cfg = small_config()
        recs = run_sweep(cfg)
        assert len(recs) == 4
        for r in recs:
            assert r.ber == r.bit_errors / r.total_bits
            assert 0 <= r.ber <= 1
            assert r.trials == 60 and r.total_bits == 60 * 512
            assert 0 <= r.empirical_rho <= 1

    @pytest.mark.parametrize("scheme", ["3d-psk", "2d-dft", "3d-dft"])
    def test_monotone_in_snr(self, scheme):
        cfg = small_config(scheme=scheme)
        errors = sweep_errors(cfg)
        recs = run_sweep(cfg, errors)
        std = ber_std(errors, 512)
        for j in range(len(recs) - 1):
            assert recs[j + 1].ber <= recs[j].ber + 2 * np.hypot(std[j], std[j + 1])

    def test_reproducible_and_thread_independent(self):
        cfg = small_config()
        a = run_sweep(cfg)
        assert run_sweep(cfg) == a
        assert run_sweep(replace(cfg, threads=3)) == a
        assert run_sweep(replace(cfg, seed=1)) != a

    def test_exhaustive_kpc_dominates(self):
        cfg = small_config(iterations=150)
        e_q = sweep_errors(cfg) / 512
        e_x = sweep_errors(replace(cfg, scheme="kpc-exhaustive")) / 512
        diff = e_x - e_q
        se = diff.std(axis=0, ddof=1) / np.sqrt(len(diff))
        assert np.all(diff.mean(axis=0) <= 2 * se + 1e-15)


class TestCurves:

    def test_snr_at_ber(self):
        # log10 BER: -1 at 0 dB, -2 at 10 dB
        assert snr_at_ber([0, 10], [1e-1, 1e-2], 10 ** -1.5) == pytest.approx(5.0)
        assert np.isnan(snr_at_ber([0, 10], [1e-1, 1e-2], 1e-3))

    def test_coding_gain_sign(self):
        mk = lambda name, bers: [BerRecord(name, s, 1, 1, 0, b, 1.0) for s, b in zip([0, 10], bers)]
        ref = mk("a", [1e-1, 1e-2])
        cand = mk("b", [10 ** -1.2, 10 ** -2.2])
        # candidate curve sits 2 dB to the left
        assert coding_gain(ref, cand, 10 ** -1.5) == pytest.approx(2.0)

    def test_ber_std_matches_formula(self):
        errors = np.array([[1], [3], [5]])
        assert ber_std(errors, 10)[0] == pytest.approx(np.std([0.1, 0.3, 0.5], ddof=1) / np.sqrt(3))


def test_csv_format():
    recs = [BerRecord("3d-psk", 2.0, 10, 100, 7, 0.07, 0.9)]
    rows = list(csv.reader(io.StringIO(records_to_csv(recs))))
    assert tuple(rows[0]) == CSV_HEADER == ("scheme", "snr_db", "trials", "total_bits",
                                            "bit_errors", "ber", "empirical_rho")
    assert rows[1] == ["3d-psk", "2.0", "10", "100", "7", "0.07", "0.9"]
