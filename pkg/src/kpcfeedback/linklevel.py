"""Monte Carlo BER harness for limited-feedback MISO beamforming with QPSK.

SNR values are Eb/N0 in dB with unit symbol energy, so the noise density is
``N0 = 1 / (2 * 10**(snr_db / 10))``. Each trial draws one block-fading
channel and transmits a block of QPSK symbols through ``y = (h @ w) x + n``.
With ``unit_power_channel`` (the default) the channel is scaled by
``1 / sqrt(M_t)`` before transmission, so the SNR axis excludes array gain.

Random streams are keyed by ``(seed, trial_index)``: the channel stream is
shared by every scheme and SNR point, and the symbol/noise stream is shared
by every SNR point, so curves for different schemes are paired draws.
"""

import csv
import io
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .channel import ChannelConfig, empirical_correlation, generate_channel
from .codebook import CodebookSpec, dft_codebook, kron_dft_codebook
from .quantizer import exhaustive_kpc_search, quantize_csi

SCHEMES = ("3d-psk", "2d-dft", "3d-dft")
# exhaustive search over the same KPC that 3d-psk quantizes to; oracle only
ORACLE_SCHEMES = ("kpc-exhaustive",)

CSV_HEADER = ("scheme", "snr_db", "trials", "total_bits", "bit_errors", "ber", "empirical_rho")

_CHANNEL_STREAM = 0
_DATA_STREAM = 1
_RHO_STREAM = 2


@dataclass(frozen=True)
class SimConfig:
    channel: ChannelConfig = field(default_factory=ChannelConfig)
    codebook: CodebookSpec = field(default_factory=CodebookSpec)
    scheme: str = "3d-psk"
    snr_db_list: tuple = (0.0,)
    iterations: int = 200
    symbols_per_iteration: int = 1024
    dft_oversample: int = 1
    seed: int = 0
    threads: int = 1
    rho_samples: int = 2000
    unit_power_channel: bool = True

    def __post_init__(self):
        object.__setattr__(self, "snr_db_list", tuple(float(s) for s in self.snr_db_list))
        if self.scheme not in SCHEMES + ORACLE_SCHEMES:
            raise ValueError(f"unknown scheme {self.scheme!r}; expected one of {SCHEMES}")
        if self.iterations < 1 or self.symbols_per_iteration < 1:
            raise ValueError("iterations and symbols_per_iteration must be >= 1")
        if not self.snr_db_list:
            raise ValueError("snr_db_list must not be empty")
        if self.dft_oversample < 1:
            raise ValueError("dft_oversample must be >= 1")
        if (self.channel.m_th, self.channel.m_tv) != (self.codebook.m_th, self.codebook.m_tv):
            raise ValueError("channel and codebook array dimensions differ")


@dataclass(frozen=True)
class BerRecord:
    scheme: str
    snr_db: float
    trials: int
    total_bits: int
    bit_errors: int
    ber: float
    empirical_rho: float

    def as_row(self) -> tuple:
        return (self.scheme, repr(self.snr_db), self.trials, self.total_bits, self.bit_errors,
                repr(self.ber), repr(self.empirical_rho))


def noise_density(snr_db: float) -> float:
    """N0 for unit-energy QPSK symbols at the given Eb/N0."""
    return 1.0 / (2.0 * 10.0 ** (snr_db / 10.0))


def qpsk_modulate(bits) -> np.ndarray:
    """Gray-mapped QPSK: bit pair (b1, b0) -> ((1 - 2 b1) + j (1 - 2 b0)) / sqrt(2)."""
    bits = np.asarray(bits, dtype=np.int64).ravel()
    if bits.size % 2:
        raise ValueError(f"QPSK needs an even number of bits, got {bits.size}")
    pairs = bits.reshape(-1, 2)
    return ((1 - 2 * pairs[:, 0]) + 1j * (1 - 2 * pairs[:, 1])) / np.sqrt(2)


def qpsk_demodulate(y, effective_channel: complex) -> np.ndarray:
    """Coherent ML QPSK decisions given the known scalar channel.

    A sample exactly on a decision boundary maps to bit 0.
    """
    if effective_channel == 0:
        raise ValueError("effective channel is zero")
    z = np.atleast_1d(np.asarray(y, dtype=complex)) * np.conj(effective_channel)
    bits = np.empty((z.size, 2), dtype=np.int64)
    bits[:, 0] = z.real < 0
    bits[:, 1] = z.imag < 0
    return bits.ravel()


def complex_noise(n: int, n0: float, rng: np.random.Generator) -> np.ndarray:
    """Circularly symmetric CN(0, n0) samples."""
    return np.sqrt(n0 / 2) * (rng.normal(size=n) + 1j * rng.normal(size=n))


def _rng(seed: int, trial_index: int, stream: int) -> np.random.Generator:
    return np.random.default_rng([seed, trial_index, stream])


def select_beamformer(h: np.ndarray, cfg: SimConfig) -> np.ndarray:
    """Transmit beamformer chosen by the configured scheme for channel ``h``."""
    if cfg.scheme == "3d-psk":
        return quantize_csi(h, cfg.codebook).beamformer.w
    if cfg.scheme == "kpc-exhaustive":
        return exhaustive_kpc_search(h, cfg.codebook).w
    if cfg.scheme == "2d-dft":
        cb = dft_codebook(cfg.channel.m_t, cfg.dft_oversample)
    else:
        cb = kron_dft_codebook(cfg.channel.m_th, cfg.channel.m_tv, cfg.dft_oversample)
    return cb[:, int(np.argmax(np.abs(h @ cb)))]


def trial_errors(cfg: SimConfig, trial_index: int, snr_db_list=None) -> np.ndarray:
    """Bit errors of one trial at each SNR point (same channel and noise shape for all)."""
    snrs = cfg.snr_db_list if snr_db_list is None else snr_db_list
    h = generate_channel(cfg.channel, _rng(cfg.seed, trial_index, _CHANNEL_STREAM))
    w = select_beamformer(h, cfg)
    eff = complex(h @ w)
    if cfg.unit_power_channel:
        eff /= np.sqrt(cfg.channel.m_t)

    rng = _rng(cfg.seed, trial_index, _DATA_STREAM)
    n_sym = cfg.symbols_per_iteration
    bits = rng.integers(0, 2, size=2 * n_sym)
    x = qpsk_modulate(bits)
    unit_noise = complex_noise(n_sym, 1.0, rng)
    errors = np.empty(len(snrs), dtype=np.int64)
    for i, snr in enumerate(snrs):
        y = eff * x + np.sqrt(noise_density(snr)) * unit_noise
        errors[i] = np.count_nonzero(qpsk_demodulate(y, eff) != bits)
    return errors


def run_trial(cfg: SimConfig, snr_db: float, trial_index: int) -> tuple[int, int]:
    """(bit_errors, total_bits) for a single trial at one SNR point."""
    errors = trial_errors(cfg, trial_index, (float(snr_db),))
    return int(errors[0]), 2 * cfg.symbols_per_iteration


def sweep_errors(cfg: SimConfig) -> np.ndarray:
    """Per-trial bit errors, shape (iterations, len(snr_db_list))."""
    indices = range(cfg.iterations)
    if cfg.threads == 1:
        rows = [trial_errors(cfg, i) for i in indices]
    else:
        with ThreadPoolExecutor(max_workers=cfg.threads or None) as pool:
            rows = list(pool.map(lambda i: trial_errors(cfg, i), indices))
    return np.vstack(rows)


def sweep_rho(cfg: SimConfig) -> float:
    return empirical_correlation(cfg.channel, cfg.rho_samples,
                                 _rng(cfg.seed, 0, _RHO_STREAM))


def run_sweep(cfg: SimConfig, errors: np.ndarray | None = None) -> list[BerRecord]:
    """Aggregate BER records, one per SNR point."""
    if errors is None:
        errors = sweep_errors(cfg)
    rho = sweep_rho(cfg) if cfg.channel.m_t > 1 else 1.0
    total = 2 * cfg.symbols_per_iteration * cfg.iterations
    records = []
    for j, snr in enumerate(cfg.snr_db_list):
        n_err = int(errors[:, j].sum())
        records.append(BerRecord(cfg.scheme, snr, cfg.iterations, total, n_err,
                                 n_err / total, rho))
    return records


def ber_std(errors: np.ndarray, bits_per_trial: int) -> np.ndarray:
    """Sampling std of the BER estimate, treating trials as i.i.d. clusters."""
    errors = np.atleast_2d(np.asarray(errors, dtype=float).T).T
    per_trial = errors / bits_per_trial
    n = per_trial.shape[0]
    return per_trial.std(axis=0, ddof=1) / np.sqrt(n)


def snr_at_ber(snr_db, ber, target: float) -> float:
    """SNR where a BER curve crosses ``target``, by linear interpolation of log10(BER).

    Returns NaN if the curve never brackets the target.
    """
    snr_db = np.asarray(snr_db, dtype=float)
    ber = np.asarray(ber, dtype=float)
    logb = np.log10(np.maximum(ber, 1e-300))
    lt = np.log10(target)
    for i in range(len(snr_db) - 1):
        a, b = logb[i], logb[i + 1]
        if (a - lt) * (b - lt) <= 0 and a != b:
            return float(snr_db[i] + (lt - a) * (snr_db[i + 1] - snr_db[i]) / (b - a))
    return float("nan")


def coding_gain(reference: list[BerRecord], candidate: list[BerRecord], target: float = 4e-2) -> float:
    """Horizontal dB shift of ``candidate`` relative to ``reference`` at ``target`` BER.

    Positive means the candidate needs less SNR.
    """
    s_ref = snr_at_ber([r.snr_db for r in reference], [r.ber for r in reference], target)
    s_cand = snr_at_ber([r.snr_db for r in candidate], [r.ber for r in candidate], target)
    return s_ref - s_cand


def records_to_csv(records: list[BerRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in records:
        writer.writerow(r.as_row())
    return buf.getvalue()
