"""Block-fading multipath channels for the two-user multicarrier link.

Each of the four links (two direct, two cross) gets ``n_taps`` independent
circularly symmetric complex Gaussian taps. Taps are zero padded to the
number of subcarriers and sent through an FFT; the squared magnitudes are
the per-subcarrier power gains the solvers work with.
"""

import json
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ChannelConfig:
    n_subcarriers: int = 64
    n_taps: int = 16
    cross_power: float = 1.0
    seed: int = 0

    def __post_init__(self):
        n = self.n_subcarriers
        if n < 1 or n & (n - 1):
            raise ValueError(f"n_subcarriers must be a power of two, got {n}")
        if not 1 <= self.n_taps <= n:
            raise ValueError(f"n_taps must lie in [1, {n}], got {self.n_taps}")
        if not (np.isfinite(self.cross_power) and self.cross_power >= 0):
            raise ValueError(f"cross_power must be >= 0, got {self.cross_power}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")


@dataclass(frozen=True)
class ChannelRealization:
    """Power gains |h|^2 per subcarrier.

    ``h21`` is the gain from transmitter 2 into receiver 1, ``h12`` the
    reverse.
    """

    h11: np.ndarray
    h22: np.ndarray
    h21: np.ndarray
    h12: np.ndarray

    def __post_init__(self):
        arrays = [np.asarray(getattr(self, k), dtype=float) for k in ("h11", "h22", "h21", "h12")]
        n = arrays[0].shape
        for name, arr in zip(("h11", "h22", "h21", "h12"), arrays):
            if arr.ndim != 1 or arr.shape != n:
                raise ValueError("all gain sequences must be 1-D with equal length")
            if not np.all(np.isfinite(arr)) or np.any(arr < 0):
                raise ValueError(f"{name} must be finite and >= 0")
            object.__setattr__(self, name, arr)

    @property
    def n_subcarriers(self):
        return self.h11.size

    def direct(self, user):
        return self.h11 if user == 0 else self.h22

    def cross_into(self, user):
        """Gain from the other transmitter into ``user``'s receiver."""
        return self.h21 if user == 0 else self.h12

    def to_dict(self):
        return {k: getattr(self, k).tolist() for k in ("h11", "h22", "h21", "h12")}

    @classmethod
    def from_dict(cls, d):
        return cls(**{k: np.asarray(d[k], dtype=float) for k in ("h11", "h22", "h21", "h12")})

    def to_json(self, path=None):
        text = json.dumps(self.to_dict())
        if path is not None:
            with open(path, "w") as fh:
                fh.write(text)
        return text

    @classmethod
    def from_json(cls, source):
        """Load from a JSON string or a path to a JSON file."""
        if isinstance(source, str) and source.lstrip().startswith("{"):
            return cls.from_dict(json.loads(source))
        with open(source) as fh:
            return cls.from_dict(json.load(fh))


def realization_rng(seed: int, index: int) -> np.random.Generator:
    """Independent generator for realization ``index`` under ``seed``."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(index,))))


def _tap_gains(rng, n_sub, n_taps, variance):
    # complex taps: real and imaginary parts each carry half the variance
    taps = rng.normal(scale=np.sqrt(variance / 2.0), size=(2, n_taps))
    freq = np.fft.fft(taps[0] + 1j * taps[1], n=n_sub)
    return np.abs(freq) ** 2


def draw_realization(cfg: ChannelConfig, index: int) -> ChannelRealization:
    """Deterministic draw for ``(cfg, index)``.

    Direct links have unit average power, cross links ``cfg.cross_power``.
    """
    if index < 0:
        raise ValueError("realization index must be >= 0")
    rng = realization_rng(cfg.seed, index)
    n, taps = cfg.n_subcarriers, cfg.n_taps
    h11 = _tap_gains(rng, n, taps, 1.0 / taps)
    h22 = _tap_gains(rng, n, taps, 1.0 / taps)
    h21 = _tap_gains(rng, n, taps, cfg.cross_power / taps)
    h12 = _tap_gains(rng, n, taps, cfg.cross_power / taps)
    return ChannelRealization(h11, h22, h21, h12)


def db_to_linear(x_db):
    return 10.0 ** (np.asarray(x_db, dtype=float) / 10.0)
