"""Achievable rates under opportunistic multiuser detection.

A receiver facing one interferer picks whichever of three decoders gives
the highest rate: successive decoding (interferer first, then cancel),
joint decoding of both messages, or single-user detection that treats the
interferer as noise. Noise power is unity, so all gains are SNR gains.
"""

import enum
from dataclasses import dataclass, field

import numpy as np

from .numerics import _cap, cap

# slack on regime boundaries so a power sitting exactly on a boundary is
# classified per the closed side of the interval despite rounding
_TIE = 1e-12


class DecodingMethod(enum.IntEnum):
    SUCCESSIVE = 0
    JOINT = 1
    SINGLE_USER = 2


class Encoding(str, enum.Enum):
    CIE = "CIE"  # independent codeword per subcarrier
    CJE = "CJE"  # one codeword over all subcarriers


@dataclass(frozen=True)
class SubcarrierView:
    """What the updating user sees on one subcarrier."""

    h_dir: float
    h_cross: float
    p_other: float
    r_other: float = 0.0

    def __post_init__(self):
        for name in ("h_dir", "h_cross", "p_other", "r_other"):
            val = getattr(self, name)
            if not (np.isfinite(val) and val >= 0):
                raise ValueError(f"{name} must be finite and >= 0, got {val}")


def _as_vec(x, name):
    arr = np.array(x, dtype=float, ndmin=1)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional")
    if not np.all(np.isfinite(arr)) or np.any(arr < 0):
        raise ValueError(f"{name} must be finite and >= 0")
    return arr


@dataclass
class InterferenceView:
    """Per-subcarrier view of the channel and of the frozen opponent.

    ``r_other`` holds the opponent's per-subcarrier rates (CIE);
    ``other_rate_total`` its single codeword rate (CJE).
    """

    h_dir: np.ndarray
    h_cross: np.ndarray
    p_other: np.ndarray
    r_other: np.ndarray = None
    other_rate_total: float = 0.0
    encoding: Encoding = Encoding.CIE
    interference: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        self.h_dir = _as_vec(self.h_dir, "h_dir")
        n = self.h_dir.size
        self.h_cross = _as_vec(self.h_cross, "h_cross")
        self.p_other = _as_vec(self.p_other, "p_other")
        if self.r_other is None:
            self.r_other = np.zeros(n)
        self.r_other = _as_vec(self.r_other, "r_other")
        if not (self.h_cross.size == self.p_other.size == self.r_other.size == n):
            raise ValueError("all per-subcarrier arrays must have the same length")
        self.other_rate_total = float(self.other_rate_total)
        if not (np.isfinite(self.other_rate_total) and self.other_rate_total >= 0):
            raise ValueError("other_rate_total must be finite and >= 0")
        self.encoding = Encoding(self.encoding)
        # received interference power h_cross * p_other
        self.interference = self.h_cross * self.p_other

    def __len__(self):
        return self.h_dir.size

    def __getitem__(self, n) -> SubcarrierView:
        return SubcarrierView(self.h_dir[n], self.h_cross[n], self.p_other[n], self.r_other[n])

    @classmethod
    def from_views(cls, views, other_rate_total=0.0, encoding=Encoding.CIE):
        views = list(views)
        return cls(
            h_dir=[v.h_dir for v in views],
            h_cross=[v.h_cross for v in views],
            p_other=[v.p_other for v in views],
            r_other=[v.r_other for v in views],
            other_rate_total=other_rate_total,
            encoding=encoding,
        )


# -- vectorized kernels ------------------------------------------------------

def threshold_powers(h_dir, interference, r_other):
    """Power at which the successive and joint rate curves cross.

    +inf where the opponent's rate is zero (successive decoding always
    works), -inf on dead subcarriers.
    """
    h_dir = np.asarray(h_dir, dtype=float)
    r_other = np.asarray(r_other, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        pth = (np.asarray(interference) / np.expm1(r_other * np.log(2.0)) - 1.0) / h_dir
    pth = np.where(r_other == 0, np.inf, pth)
    return np.where(h_dir > 0, pth, -np.inf)


def cie_rates(h_dir, interference, r_other, p1):
    """Per-subcarrier rates and decoder choices for given powers."""
    h_dir, interference, r_other, p1 = np.broadcast_arrays(
        *(np.asarray(a, dtype=float) for a in (h_dir, interference, r_other, p1)))
    sig = h_dir * p1
    succ_bound = _cap(interference / (1.0 + sig))
    joint_bound = _cap(interference)
    succ = r_other <= succ_bound + _TIE
    joint = ~succ & (r_other <= joint_bound + _TIE)
    rates = np.where(
        succ, _cap(sig),
        np.where(joint, _cap(sig + interference) - r_other, _cap(sig / (1.0 + interference))))
    methods = np.where(succ, DecodingMethod.SUCCESSIVE,
                       np.where(joint, DecodingMethod.JOINT, DecodingMethod.SINGLE_USER))
    return np.maximum(rates, 0.0), methods.astype(int)


def cje_rate_arrays(h_dir, interference, p1, other_rate):
    """Codeword rate over all subcarriers and the single decoder it uses."""
    sig = np.asarray(h_dir) * np.asarray(p1)
    if np.mean(_cap(interference / (1.0 + sig))) + _TIE >= other_rate:
        return float(np.mean(_cap(sig))), DecodingMethod.SUCCESSIVE
    if other_rate <= np.mean(_cap(interference)) + _TIE:
        rate = np.mean(_cap(sig + interference)) - other_rate
        return max(float(rate), 0.0), DecodingMethod.JOINT
    return float(np.mean(_cap(sig / (1.0 + interference)))), DecodingMethod.SINGLE_USER


# -- scalar / view level API -------------------------------------------------

def rate_cie(v: SubcarrierView, p1: float):
    """Rate of the updating user on one subcarrier at power ``p1``.

    Returns ``(rate, DecodingMethod)``.
    """
    if p1 < 0:
        raise ValueError("p1 must be >= 0")
    rates, methods = cie_rates(v.h_dir, v.h_cross * v.p_other, v.r_other, p1)
    return float(rates), DecodingMethod(int(methods))


def p_threshold(v: SubcarrierView) -> float:
    """Crossing power of the successive/joint branches; may be negative."""
    return float(threshold_powers(v.h_dir, v.h_cross * v.p_other, v.r_other))


def rate_cje(views, p1, other_rate: float):
    """Single-codeword rate for powers ``p1`` against an opponent at ``other_rate``.

    ``views`` is an InterferenceView or a sequence of SubcarrierView.
    """
    if not isinstance(views, InterferenceView):
        views = InterferenceView.from_views(views, other_rate, Encoding.CJE)
    p1 = np.asarray(p1, dtype=float)
    if p1.shape != views.h_dir.shape:
        raise ValueError(f"power vector has shape {p1.shape}, expected {views.h_dir.shape}")
    if np.any(p1 < 0) or other_rate < 0:
        raise ValueError("powers and rates must be >= 0")
    return cje_rate_arrays(views.h_dir, views.interference, p1, other_rate)


def sd_rates(h_dir, interference, p1):
    """Single-user detection rates, interference treated as noise."""
    return _cap(np.asarray(h_dir) * p1 / (1.0 + np.asarray(interference)))


__all__ = [
    "DecodingMethod", "Encoding", "SubcarrierView", "InterferenceView",
    "rate_cie", "rate_cje", "p_threshold", "cap",
    "threshold_powers", "cie_rates", "cje_rate_arrays", "sd_rates",
]
