"""CSI quantization on the Kronecker PSK codebook via noncoherent sequence detection.

The received gain of a beamformer ``w`` on a row channel ``h`` is
``|h @ w|**2`` (no conjugation). Detection maximizes ``|y^H x|**2``, so the
factor detectors are fed the conjugated sub-channels; the returned indices
then describe ``w`` directly.
"""

import itertools
from dataclasses import dataclass, field

import numpy as np

from .codebook import (ENUMERATION_CAP, CodebookSizeError, CodebookSpec, KpcBeamformer,
                       PskCodeword, canonicalize, feedback_bits, kpc_matrix, kron_beamformer,
                       realize)


@dataclass(frozen=True)
class DetectionResult:
    """Canonical PSK codeword and its GLRT metric ``|y^H x|^2 / L``."""

    codeword: PskCodeword
    metric: float

    @property
    def correlation(self) -> float:
        """Unnormalized objective ``|y^H x|^2``."""
        return self.metric * len(self.codeword)


@dataclass(frozen=True)
class QuantizedCsi:
    beamformer: KpcBeamformer
    h_hat_h: np.ndarray = field(repr=False)
    h_hat_v: np.ndarray = field(repr=False)
    bits: int
    detection_h: DetectionResult
    detection_v: DetectionResult


def glrt_metric(y: np.ndarray, g, n_const: int) -> float:
    x = np.exp(2j * np.pi * np.asarray(g) / n_const)
    return float(np.abs(np.vdot(y, x)) ** 2 / len(x))


def _check_input(y: np.ndarray, n_const: int) -> np.ndarray:
    y = np.asarray(y, dtype=complex).ravel()
    if y.size == 0:
        raise ValueError("empty input vector")
    if n_const < 2:
        raise ValueError(f"constellation size must be >= 2, got {n_const}")
    if not np.all(np.isfinite(y)):
        raise ValueError("input contains non-finite entries")
    if np.any(y == 0):
        raise ValueError("input has zero entries; crossover phases are undefined")
    return y


def _round_half_away(x: np.ndarray) -> np.ndarray:
    return np.sign(x) * np.floor(np.abs(x) + 0.5)


def ncsd_detect(y, n_const: int) -> DetectionResult:
    """Maximum-likelihood noncoherent N-PSK sequence detection in O(L log L).

    Rounds each phase to the nearest constellation point, then sweeps the
    common rotation over one sector ``[0, 2 pi / N)``: each crossover bumps
    one index by +1, the inner product is updated recursively, and the best
    prefix of bumps is kept.
    """
    y = _check_input(y, n_const)
    ang = np.angle(y)
    ang[ang == -np.pi] = np.pi
    scaled = ang * n_const / (2 * np.pi)
    g = _round_half_away(scaled).astype(np.int64)
    # stable sort: equal residuals keep original index order
    order = np.argsort(g - scaled, kind="stable")

    step = np.exp(2j * np.pi / n_const)
    p = np.conj(y) * np.exp(2j * np.pi * g / n_const)
    terms = np.concatenate(([p.sum()], p[order] * (step - 1)))
    b = int(np.argmax(np.abs(np.cumsum(terms))))
    g[order[:b]] += 1

    g = canonicalize(np.mod(g, n_const), n_const)
    return DetectionResult(PskCodeword(g, n_const), glrt_metric(y, g, n_const))


def exhaustive_psk_detect(y, n_const: int, cap: int = ENUMERATION_CAP) -> DetectionResult:
    """Brute-force maximization of ``|y^H x|^2`` over every canonical N-PSK codeword.

    Ties resolve to the lexicographically smallest index vector.
    """
    y = np.asarray(y, dtype=complex).ravel()
    if y.size == 0:
        raise ValueError("empty input vector")
    n_cand = n_const ** (y.size - 1)
    if n_cand > cap:
        raise CodebookSizeError(f"exhaustive detection needs {n_cand} candidates, cap is {cap}")
    tails = np.array(list(itertools.product(range(n_const), repeat=y.size - 1)),
                     dtype=np.int64).reshape(n_cand, y.size - 1)
    cands = np.hstack([np.zeros((n_cand, 1), dtype=np.int64), tails])
    scores = np.abs(np.exp(2j * np.pi * cands / n_const) @ np.conj(y)) ** 2
    best = cands[int(np.argmax(scores))]
    g = tuple(int(v) for v in best)
    return DetectionResult(PskCodeword(g, n_const), glrt_metric(y, g, n_const))


def decompose_channel(h, m_th: int, m_tv: int) -> tuple[np.ndarray, np.ndarray]:
    """Split ``h`` into its first horizontal row and its first vertical column."""
    h = np.asarray(h, dtype=complex).ravel()
    if h.size != m_th * m_tv:
        raise ValueError(f"channel length {h.size} does not match {m_th}x{m_tv} array")
    return h[:m_th].copy(), h[::m_th][:m_tv].copy()


def quantize_csi(h, spec: CodebookSpec) -> QuantizedCsi:
    """Quantize a channel to a KPC beamformer with two independent factor detections."""
    h_hat_h, h_hat_v = decompose_channel(h, spec.m_th, spec.m_tv)
    det_h = ncsd_detect(np.conj(h_hat_h), spec.n_h)
    det_v = ncsd_detect(np.conj(h_hat_v), spec.n_v)
    bf = kron_beamformer(det_h.codeword, det_v.codeword)
    return QuantizedCsi(bf, h_hat_h, h_hat_v, feedback_bits(spec), det_h, det_v)


def beamforming_gain(h, w) -> float:
    """Received power gain ``|h @ w|^2``."""
    return float(np.abs(np.dot(np.asarray(h).ravel(), np.asarray(w).ravel())) ** 2)


def _word_from_index(idx: int, length: int, n_const: int) -> PskCodeword:
    digits = []
    for _ in range(length - 1):
        idx, r = divmod(idx, n_const)
        digits.append(r)
    return PskCodeword((0,) + tuple(reversed(digits)), n_const)


def exhaustive_kpc_search(h, spec: CodebookSpec, cap: int = ENUMERATION_CAP) -> KpcBeamformer:
    """Best KPC beamformer by exhaustive search of ``|h @ v|^2``; ties by enumeration order."""
    h = np.asarray(h, dtype=complex).ravel()
    if h.size != spec.m_t:
        raise ValueError(f"channel length {h.size} does not match codebook length {spec.m_t}")
    rows = kpc_matrix(spec, cap)
    best = int(np.argmax(np.abs(rows @ h) ** 2))
    n_words_h = spec.n_h ** (spec.m_th - 1)
    v_idx, h_idx = divmod(best, n_words_h)
    return kron_beamformer(_word_from_index(h_idx, spec.m_th, spec.n_h),
                           _word_from_index(v_idx, spec.m_tv, spec.n_v))
