import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from kpcfeedback.codebook import (CodebookSizeError, CodebookSpec, PskCodeword, canonicalize,
                                  dft_codebook, enumerate_kpc, feedback_bits, kpc_matrix,
                                  kron_beamformer, kron_dft_codebook, realize,
                                  verify_unitary_kron)


def words(draw_len, n_const):
    return st.lists(st.integers(0, n_const - 1), min_size=draw_len, max_size=draw_len)


class TestPskCodeword:

    def test_realize(self):
        np.testing.assert_allclose(realize(PskCodeword((0, 0, 0), 4)), [1, 1, 1])
        np.testing.assert_allclose(realize(PskCodeword((0, 1, 2, 3), 4)), [1, 1j, -1, -1j],
                                   atol=1e-15)
        np.testing.assert_allclose(realize(PskCodeword((0, 1), 8)),
                                   [1, (1 + 1j) / np.sqrt(2)], atol=1e-15)

    @pytest.mark.parametrize("g,n", [((0, 4), 4), ((), 4), ((0, -1), 2), ((0,), 1)])
    def test_invalid(self, g, n):
        with pytest.raises(ValueError):
            PskCodeword(g, n)

    def test_canonical(self):
        cw = PskCodeword((3, 0, 1), 4)
        assert not cw.is_canonical
        assert cw.canonical().g == (0, 1, 2)
        assert canonicalize([2, 2, 2], 4) == (0, 0, 0)


class TestKronBeamformer:

    def test_hand_example(self):
        bf = kron_beamformer(PskCodeword((0, 2), 4), PskCodeword((0, 1), 4))
        np.testing.assert_allclose(bf.w, np.array([1, -1, 1j, -1j]) / 2, atol=1e-15)

    def test_all_zero(self):
        bf = kron_beamformer(PskCodeword((0,) * 3, 4), PskCodeword((0,) * 2, 8))
        np.testing.assert_allclose(bf.w, np.full(6, 1 / np.sqrt(6)))

    @given(st.data(), st.integers(1, 5), st.integers(1, 5), st.sampled_from([2, 4, 8]))
    def test_structure(self, data, m_th, m_tv, n):
        g_h = PskCodeword([0] + data.draw(words(m_th - 1, n)), n)
        g_v = PskCodeword([0] + data.draw(words(m_tv - 1, n)), n)
        bf = kron_beamformer(g_h, g_v)
        m_t = m_th * m_tv
        assert np.linalg.norm(bf.w) == pytest.approx(1.0)
        np.testing.assert_allclose(np.abs(bf.w), 1 / np.sqrt(m_t), rtol=1e-12)
        outer = np.outer(realize(g_h), realize(g_v)).reshape(-1, order="F") / np.sqrt(m_t)
        np.testing.assert_allclose(bf.w, outer, atol=1e-12)
        for n_idx, m_idx in itertools.product(range(m_tv), range(m_th)):
            assert bf.w[n_idx * m_th + m_idx] == pytest.approx(
                realize(g_h)[m_idx] * realize(g_v)[n_idx] / np.sqrt(m_t))


class TestEnumeration:

    @pytest.mark.parametrize("spec,count", [(CodebookSpec(2, 2, 2, 2), 4),
                                            (CodebookSpec(4, 2, 2, 1), 4),
                                            (CodebookSpec(4, 4, 2, 3), 64)])
    def test_count_and_distinct(self, spec, count):
        cb = list(enumerate_kpc(spec))
        assert len(cb) == count == spec.size
        w = np.stack([b.w for b in cb])
        dist = np.abs(w[:, None, :] - w[None, :, :]).sum(axis=2)
        assert np.all(dist[~np.eye(count, dtype=bool)] > 1e-9)
        for b in cb:
            np.testing.assert_allclose(np.abs(b.w), 1 / np.sqrt(spec.m_t), rtol=1e-12)
            assert b.g_h.is_canonical and b.g_v.is_canonical

    def test_matrix_matches_enumeration_order(self):
        spec = CodebookSpec(4, 2, 3, 2)
        np.testing.assert_allclose(kpc_matrix(spec), np.stack([b.w for b in enumerate_kpc(spec)]),
                                   atol=1e-15)

    def test_cap(self):
        with pytest.raises(CodebookSizeError, match=str(4 ** 14)):
            next(enumerate_kpc(CodebookSpec(4, 4, 8, 8), cap=2 ** 24))
        with pytest.raises(CodebookSizeError):
            kpc_matrix(CodebookSpec(2, 2, 3, 3), cap=8)


class TestDft:

    def test_two_point(self):
        np.testing.assert_allclose(dft_codebook(2), np.array([[1, 1], [1, -1]]) / np.sqrt(2),
                                   atol=1e-15)

    @pytest.mark.parametrize("m", [1, 3, 4, 8])
    def test_orthonormal(self, m):
        d = dft_codebook(m)
        np.testing.assert_allclose(d.conj().T @ d, np.eye(m), atol=1e-12)

    def test_oversampled(self):
        d = dft_codebook(4, 2)
        assert d.shape == (4, 8)
        np.testing.assert_allclose(np.linalg.norm(d, axis=0), 1.0)
        # column q entry k = exp(-j 2 pi k q / 8) / 2
        assert d[3, 5] == pytest.approx(np.exp(-2j * np.pi * 15 / 8) / 2)

    def test_kron_layout(self):
        cb = kron_dft_codebook(3, 2)
        d_h, d_v = dft_codebook(3), dft_codebook(2)
        np.testing.assert_allclose(cb[:, 1 * 3 + 2], np.kron(d_v[:, 1], d_h[:, 2]))
        np.testing.assert_allclose(cb.conj().T @ cb, np.eye(6), atol=1e-12)


class TestUnitarity:

    @pytest.mark.parametrize("m_th,m_tv,tol", [(2, 2, 1e-12), (8, 8, 1e-10), (1, 4, 1e-12)])
    def test_examples(self, m_th, m_tv, tol):
        assert verify_unitary_kron(m_th, m_tv) < tol

    def test_up_to_16(self):
        for m_th, m_tv in itertools.product(range(1, 17), repeat=2):
            assert verify_unitary_kron(m_th, m_tv) < 1e-10


class TestFeedbackBits:

    @pytest.mark.parametrize("spec,bits", [(CodebookSpec(4, 4, 8, 8), 28),
                                           (CodebookSpec(2, 2, 2, 2), 2),
                                           (CodebookSpec(4, 8, 1, 1), 0),
                                           (CodebookSpec(8, 2, 3, 5), 2 * 3 + 4 * 1)])
    def test_bits(self, spec, bits):
        assert feedback_bits(spec) == bits

    def test_non_power_of_two(self):
        with pytest.raises(ValueError):
            CodebookSpec(3, 4, 2, 2)
