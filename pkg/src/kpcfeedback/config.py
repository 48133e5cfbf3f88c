"""Flat ``key = value`` simulation config files and run manifests."""

from dataclasses import dataclass, replace

from .channel import ChannelConfig, calibrate_spread
from .codebook import CodebookSpec
from .linklevel import SCHEMES, SimConfig


class ConfigError(ValueError):
    """Malformed config; ``line`` is 1-based or None."""

    def __init__(self, message, line=None):
        super().__init__(f"line {line}: {message}" if line else message)
        self.line = line


def _floats(text):
    return tuple(float(v) for v in text.split(",") if v.strip())


def _bool(text):
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _schemes(text):
    names = tuple(s.strip() for s in text.split(",") if s.strip())
    for s in names:
        if s not in SCHEMES:
            raise ValueError(f"unknown scheme {s!r}")
    if not names:
        raise ValueError("empty scheme list")
    return names


# key -> (parser, default)
KEYS = {
    "m_th": (int, 8),
    "m_tv": (int, 8),
    "d_h": (float, 0.5),
    "d_v": (float, 0.5),
    "i_mpc": (int, 2),
    "mean_azimuth": (float, 1.5707963267948966),
    "mean_elevation": (float, 1.5707963267948966),
    "angular_spread": (float, 0.0),
    "target_rho": (float, None),
    "fading": (str, "rayleigh"),
    "n_h": (int, 4),
    "n_v": (int, 4),
    "schemes": (_schemes, ("3d-psk",)),
    "snr_db": (_floats, (0.0,)),
    "iterations": (int, 200),
    "symbols_per_iteration": (int, 1024),
    "dft_oversample": (int, 1),
    "seed": (int, 0),
    "threads": (int, 1),
    "rho_samples": (int, 2000),
    "unit_power_channel": (_bool, True),
}


@dataclass(frozen=True)
class RunConfig:
    values: dict

    def channel(self) -> ChannelConfig:
        v = self.values
        cfg = ChannelConfig(m_th=v["m_th"], m_tv=v["m_tv"], d_h=v["d_h"], d_v=v["d_v"],
                            i_mpc=v["i_mpc"], mean_azimuth=v["mean_azimuth"],
                            mean_elevation=v["mean_elevation"],
                            angular_spread=v["angular_spread"], fading=v["fading"],
                            seed=v["seed"])
        if v["target_rho"] is not None:
            cfg = replace(cfg, angular_spread=calibrate_spread(cfg, v["target_rho"]))
        return cfg

    def sim_configs(self) -> list[SimConfig]:
        v = self.values
        ch = self.channel()
        cb = CodebookSpec(n_h=v["n_h"], n_v=v["n_v"], m_th=v["m_th"], m_tv=v["m_tv"])
        return [SimConfig(channel=ch, codebook=cb, scheme=s, snr_db_list=v["snr_db"],
                          iterations=v["iterations"],
                          symbols_per_iteration=v["symbols_per_iteration"],
                          dft_oversample=v["dft_oversample"], seed=v["seed"],
                          threads=v["threads"], rho_samples=v["rho_samples"],
                          unit_power_channel=v["unit_power_channel"])
                for s in v["schemes"]]


def parse_config(text: str, overrides: dict | None = None) -> RunConfig:
    """Parse config text; '#' starts a comment, unknown keys are rejected."""
    values = {k: default for k, (_, default) in KEYS.items()}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", lineno)
        key, val = (p.strip() for p in line.split("=", 1))
        if key not in KEYS:
            raise ConfigError(f"unknown key {key!r}", lineno)
        try:
            values[key] = KEYS[key][0](val)
        except ValueError as exc:
            raise ConfigError(f"bad value for {key!r}: {exc}", lineno) from None
    values.update(overrides or {})
    run = RunConfig(values)
    try:
        run.sim_configs()
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    return run


def load_config(path, overrides=None) -> RunConfig:
    with open(path) as fh:
        return parse_config(fh.read(), overrides)


def _format(value):
    if isinstance(value, tuple):
        return ",".join(repr(v) if isinstance(v, float) else str(v) for v in value)
    if isinstance(value, float):
        return repr(value)
    if value is None:
        return None
    return str(value)


def render_manifest(run: RunConfig, meta: dict) -> str:
    """Config echo that parses back to the same run; metadata goes in comments."""
    lines = [f"# {k} = {v}" for k, v in meta.items()]
    for key in KEYS:
        text = _format(run.values[key])
        if text is not None:
            lines.append(f"{key} = {text}")
    return "\n".join(lines) + "\n"
