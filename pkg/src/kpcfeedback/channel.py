"""3D uniform planar array (UPA) channel model.

Channel vectors use column-major layout: antenna (m, n), with m the
horizontal and n the vertical index, sits at position ``n * m_th + m``.
All spacings are expressed in wavelengths.
"""

from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class ChannelConfig:
    """Geometry and angular statistics of the 3D multipath channel ensemble.

    :param m_th: number of horizontal antennas
    :param m_tv: number of vertical antennas
    :param d_h: horizontal spacing in wavelengths
    :param d_v: vertical spacing in wavelengths
    :param i_mpc: number of multipath components
    :param mean_azimuth: mean azimuth of departure [rad]
    :param mean_elevation: mean elevation of departure [rad]
    :param angular_spread: standard deviation of both angles [rad]
    :param fading: ``"rayleigh"`` for CN(0, 1/I) path gains, ``"none"`` for
        unit-power gains with uniform random phase
    :param seed: default RNG seed for ensemble diagnostics
    """

    m_th: int = 8
    m_tv: int = 8
    d_h: float = 0.5
    d_v: float = 0.5
    i_mpc: int = 20
    mean_azimuth: float = np.pi / 3
    mean_elevation: float = np.pi / 3
    angular_spread: float = 0.0
    fading: str = "rayleigh"
    seed: int = 0

    def __post_init__(self):
        if self.m_th < 1 or self.m_tv < 1:
            raise ValueError(f"antenna counts must be >= 1, got {self.m_th}x{self.m_tv}")
        if self.d_h <= 0 or self.d_v <= 0:
            raise ValueError("antenna spacings must be positive")
        if self.i_mpc < 1:
            raise ValueError(f"i_mpc must be >= 1, got {self.i_mpc}")
        if self.angular_spread < 0:
            raise ValueError("angular_spread must be non-negative")
        if self.fading not in ("rayleigh", "none"):
            raise ValueError(f"unknown fading model {self.fading!r}")

    @property
    def m_t(self) -> int:
        return self.m_th * self.m_tv


@dataclass(frozen=True)
class AngleOfDeparture:
    """Azimuth/elevation pair; azimuth is wrapped to [0, 2pi), elevation clamped to [0, pi]."""

    azimuth: float
    elevation: float

    def __post_init__(self):
        object.__setattr__(self, "azimuth", float(np.mod(self.azimuth, TWO_PI)))
        object.__setattr__(self, "elevation", float(np.clip(self.elevation, 0.0, np.pi)))


def steering_horizontal(mu: float, m_th: int) -> np.ndarray:
    """Horizontal steering vector ``[1, e^{-j mu}, ..., e^{-j (m_th-1) mu}]``."""
    return np.exp(-1j * mu * np.arange(m_th))


def steering_vertical(upsilon: float, m_tv: int) -> np.ndarray:
    """Vertical steering vector ``[1, e^{-j upsilon}, ...]`` of length ``m_tv``."""
    return np.exp(-1j * upsilon * np.arange(m_tv))


def phases_from_aod(aod: AngleOfDeparture, cfg: ChannelConfig) -> tuple[float, float]:
    """Inter-element phase progressions (mu, upsilon) for one departure angle."""
    mu = TWO_PI * cfg.d_h * np.cos(aod.azimuth) * np.sin(aod.elevation)
    upsilon = TWO_PI * cfg.d_v * np.cos(aod.elevation)
    return float(mu), float(upsilon)


def array_response_from_phases(mu: float, upsilon: float, m_th: int, m_tv: int) -> np.ndarray:
    """vec() of the outer product of horizontal and vertical steering vectors."""
    outer = np.outer(steering_horizontal(mu, m_th), steering_vertical(upsilon, m_tv))
    return outer.reshape(-1, order="F")


def array_response(aod: AngleOfDeparture, cfg: ChannelConfig) -> np.ndarray:
    """Single-path UPA response for ``aod``; every entry has unit modulus."""
    mu, upsilon = phases_from_aod(aod, cfg)
    return array_response_from_phases(mu, upsilon, cfg.m_th, cfg.m_tv)


def draw_aods(cfg: ChannelConfig, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Gaussian AoD draws around the mean angle, wrapped/clamped like AngleOfDeparture."""
    az = rng.normal(cfg.mean_azimuth, cfg.angular_spread, size=cfg.i_mpc)
    el = rng.normal(cfg.mean_elevation, cfg.angular_spread, size=cfg.i_mpc)
    return np.mod(az, TWO_PI), np.clip(el, 0.0, np.pi)


def _path_gains(cfg: ChannelConfig, rng: np.random.Generator) -> np.ndarray:
    if cfg.fading == "rayleigh":
        g = rng.normal(size=cfg.i_mpc) + 1j * rng.normal(size=cfg.i_mpc)
        return g * np.sqrt(0.5 / cfg.i_mpc)
    return np.exp(1j * rng.uniform(0.0, TWO_PI, size=cfg.i_mpc)) / np.sqrt(cfg.i_mpc)


def generate_channel(cfg: ChannelConfig, rng: np.random.Generator) -> np.ndarray:
    """Draw one MISO channel realization as a sum of ``i_mpc`` UPA paths.

    Path gains have total expected power 1 per antenna, so E[||h||^2] = M_t
    regardless of the number of paths.
    """
    az, el = draw_aods(cfg, rng)
    alpha = _path_gains(cfg, rng)
    mu = TWO_PI * cfg.d_h * np.cos(az) * np.sin(el)
    upsilon = TWO_PI * cfg.d_v * np.cos(el)
    # (paths, antennas) with antenna index n * m_th + m
    m = np.tile(np.arange(cfg.m_th), cfg.m_tv)
    n = np.repeat(np.arange(cfg.m_tv), cfg.m_th)
    responses = np.exp(-1j * (np.outer(mu, m) + np.outer(upsilon, n)))
    return alpha @ responses


def generate_channels(cfg: ChannelConfig, n: int, rng: np.random.Generator) -> np.ndarray:
    """Stack of ``n`` independent realizations, shape (n, M_t)."""
    return np.stack([generate_channel(cfg, rng) for _ in range(n)])


def _adjacent_correlation(x: np.ndarray, y: np.ndarray) -> float:
    x = x - x.mean()
    y = y - y.mean()
    vx = np.vdot(x, x).real
    vy = np.vdot(y, y).real
    if vx == 0 or vy == 0:
        raise ValueError("degenerate channel ensemble: zero variance")
    return float(np.abs(np.vdot(x, y)) / np.sqrt(vx * vy))


def empirical_correlation(cfg: ChannelConfig, n_samples: int = 2000,
                          rng: np.random.Generator | None = None) -> float:
    """Average magnitude of the sample correlation coefficient between adjacent antennas.

    Horizontal pairs are (0, 1), vertical pairs are (0, m_th); a 1-D array
    contributes only the pair it has.
    """
    if n_samples < 100:
        raise ValueError(f"n_samples must be >= 100, got {n_samples}")
    if rng is None:
        rng = np.random.default_rng(cfg.seed)
    h = generate_channels(cfg, n_samples, rng)
    values = []
    if cfg.m_th > 1:
        values.append(_adjacent_correlation(h[:, 0], h[:, 1]))
    if cfg.m_tv > 1:
        values.append(_adjacent_correlation(h[:, 0], h[:, cfg.m_th]))
    if not values:
        # single antenna: trivially self-correlated, still reject empty ensembles
        _adjacent_correlation(h[:, 0], h[:, 0])
        return 1.0
    return float(np.mean(values))


def calibrate_spread(cfg: ChannelConfig, target: float, n_samples: int = 4000,
                     max_spread: float = np.pi / 2, tol: float = 0.005) -> float:
    """Bisect the angular spread until ``empirical_correlation`` hits ``target``.

    Uses a fixed RNG stream per evaluation so the objective is deterministic
    in the spread.
    """
    from dataclasses import replace

    def corr(s):
        return empirical_correlation(replace(cfg, angular_spread=s), n_samples,
                                     np.random.default_rng(cfg.seed))

    lo, hi = 0.0, max_spread
    if corr(hi) > target:
        raise ValueError(f"target correlation {target} not reachable below spread {max_spread}")
    for _ in range(40):
        mid = 0.5 * (lo + hi)
        c = corr(mid)
        if abs(c - target) < tol:
            return mid
        if c > target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
