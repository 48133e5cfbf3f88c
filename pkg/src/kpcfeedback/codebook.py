"""PSK factor codebooks, their Kronecker product, and DFT baseline codebooks."""

import itertools
from dataclasses import dataclass, field

import numpy as np

ENUMERATION_CAP = 2 ** 24


class CodebookSizeError(ValueError):
    """Raised when an enumeration would exceed the configured cap."""


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class PskCodeword:
    """Integer phase indices of an N-PSK sequence; entry k maps to exp(j 2 pi g[k] / N)."""

    g: tuple
    n_const: int

    def __post_init__(self):
        g = tuple(int(v) for v in self.g)
        if self.n_const < 2:
            raise ValueError(f"constellation size must be >= 2, got {self.n_const}")
        if not g:
            raise ValueError("codeword must have length >= 1")
        if any(v < 0 or v >= self.n_const for v in g):
            raise ValueError(f"indices must lie in [0, {self.n_const}), got {g}")
        object.__setattr__(self, "g", g)

    def __len__(self):
        return len(self.g)

    @property
    def is_canonical(self) -> bool:
        return self.g[0] == 0

    def canonical(self) -> "PskCodeword":
        return PskCodeword(canonicalize(self.g, self.n_const), self.n_const)


def canonicalize(g, n_const: int) -> tuple:
    """Rotate indices so the first is zero; removes the PSK global-phase ambiguity."""
    g = np.asarray(g, dtype=np.int64)
    return tuple(int(v) for v in np.mod(g - g[0], n_const))


def realize(cw: PskCodeword) -> np.ndarray:
    """Complex unit-modulus symbols of a PSK codeword."""
    return np.exp(2j * np.pi * np.asarray(cw.g) / cw.n_const)


@dataclass(frozen=True)
class CodebookSpec:
    n_h: int = 4
    n_v: int = 4
    m_th: int = 8
    m_tv: int = 8

    def __post_init__(self):
        if min(self.n_h, self.n_v, self.m_th, self.m_tv) < 1:
            raise ValueError("codebook parameters must all be >= 1")
        if not (_is_power_of_two(self.n_h) and _is_power_of_two(self.n_v)):
            raise ValueError(
                f"constellation sizes must be powers of two, got N_H={self.n_h}, N_V={self.n_v}")

    @property
    def m_t(self) -> int:
        return self.m_th * self.m_tv

    @property
    def size(self) -> int:
        """Number of distinct canonical KPC codewords."""
        return self.n_h ** (self.m_th - 1) * self.n_v ** (self.m_tv - 1)


@dataclass(frozen=True)
class KpcBeamformer:
    """Unit-norm equal-gain beamformer ``vec(w_H w_V^T) / sqrt(M_t)`` with its feedback indices."""

    w: np.ndarray = field(repr=False)
    g_h: PskCodeword
    g_v: PskCodeword

    @property
    def indices(self) -> tuple[tuple, tuple]:
        return self.g_h.g, self.g_v.g


def kron_beamformer(g_h: PskCodeword, g_v: PskCodeword) -> KpcBeamformer:
    m_t = len(g_h) * len(g_v)
    w = np.kron(realize(g_v), realize(g_h)) / np.sqrt(m_t)
    return KpcBeamformer(w, g_h, g_v)


def _canonical_words(length: int, n_const: int):
    for tail in itertools.product(range(n_const), repeat=length - 1):
        yield PskCodeword((0,) + tail, n_const)


def enumerate_kpc(spec: CodebookSpec, cap: int = ENUMERATION_CAP):
    """Yield every canonical KPC beamformer once, horizontal index varying fastest."""
    if spec.size > cap:
        raise CodebookSizeError(
            f"KPC enumeration needs {spec.size} codewords, cap is {cap}")
    for g_v in _canonical_words(spec.m_tv, spec.n_v):
        for g_h in _canonical_words(spec.m_th, spec.n_h):
            yield kron_beamformer(g_h, g_v)


def kpc_matrix(spec: CodebookSpec, cap: int = ENUMERATION_CAP) -> np.ndarray:
    """All canonical KPC beamformers as rows of a (size, M_t) matrix."""
    if spec.size > cap:
        raise CodebookSizeError(
            f"KPC enumeration needs {spec.size} codewords, cap is {cap}")
    w_h = np.stack([realize(c) for c in _canonical_words(spec.m_th, spec.n_h)])
    w_v = np.stack([realize(c) for c in _canonical_words(spec.m_tv, spec.n_v)])
    # row index = v_idx * |W_H| + h_idx, matching enumerate_kpc order
    rows = (w_v[:, None, :, None] * w_h[None, :, None, :]).reshape(len(w_v) * len(w_h), -1)
    return rows / np.sqrt(spec.m_t)


def dft_codebook(m: int, oversample: int = 1) -> np.ndarray:
    """Oversampled DFT codebook as an (m, m * oversample) matrix of unit-norm columns."""
    if m < 1 or oversample < 1:
        raise ValueError("m and oversample must be >= 1")
    q = m * oversample
    k = np.arange(m)[:, None]
    cols = np.arange(q)[None, :]
    return np.exp(-2j * np.pi * k * cols / q) / np.sqrt(m)


def kron_dft_codebook(m_th: int, m_tv: int, oversample: int = 1) -> np.ndarray:
    """Kronecker DFT codebook laid out like the channel (vertical index major)."""
    d_h = dft_codebook(m_th, oversample)
    d_v = dft_codebook(m_tv, oversample)
    # column (v, h) -> d_v[:, v] kron d_h[:, h]
    cb = np.einsum("nv,mh->nmvh", d_v, d_h)
    return cb.reshape(m_th * m_tv, -1)


def verify_unitary_kron(m_th: int, m_tv: int) -> float:
    """Frobenius error of U_K U_K^H against identity, with U_K the Kronecker of two DFT matrices."""
    u_k = np.kron(dft_codebook(m_th), dft_codebook(m_tv))
    return float(np.linalg.norm(u_k @ u_k.conj().T - np.eye(m_th * m_tv)))


def feedback_bits(spec: CodebookSpec) -> int:
    """Bits fed back per channel use; the first index of each factor is fixed at zero."""
    if not (_is_power_of_two(spec.n_h) and _is_power_of_two(spec.n_v)):
        raise ValueError("constellation sizes must be powers of two")
    return ((spec.m_th - 1) * int(np.log2(spec.n_h))
            + (spec.m_tv - 1) * int(np.log2(spec.n_v)))
