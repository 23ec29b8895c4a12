"""Orthogonal wavelet filter pairs."""

from dataclasses import dataclass
import math

import numpy as np

_TOL = 1e-12


def _frozen(values):
    arr = np.array(values, dtype=np.float64).ravel()
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class FilterPair:
    """Decomposition and reconstruction filters of an orthogonal wavelet.

    The reconstruction filters are the time reverses of the decomposition
    filters. Together with the synthesis advance of ``len - 1`` samples used in
    :mod:`wavefeat.dwt` this gives perfect reconstruction.
    """

    lowpass_dec: np.ndarray
    highpass_dec: np.ndarray
    lowpass_rec: np.ndarray
    highpass_rec: np.ndarray
    name: str

    def __post_init__(self):
        for field in ("lowpass_dec", "highpass_dec", "lowpass_rec", "highpass_rec"):
            object.__setattr__(self, field, _frozen(getattr(self, field)))
        self.validate()

    @classmethod
    def from_lowpass(cls, lowpass, name):
        """Build the full quadrature-mirror bank from a scaling filter."""
        lo = np.asarray(lowpass, dtype=np.float64).ravel()
        L = lo.size
        hi = np.array([(-1) ** k * lo[L - 1 - k] for k in range(L)])
        return cls(lo, hi, lo[::-1].copy(), hi[::-1].copy(), name)

    @property
    def length(self):
        return self.lowpass_dec.size

    def validate(self):
        lo, hi = self.lowpass_dec, self.highpass_dec
        L = lo.size
        if L < 2 or L % 2:
            raise ValueError(f"filter length must be even and >= 2, got {L}")
        for field in ("highpass_dec", "lowpass_rec", "highpass_rec"):
            if getattr(self, field).size != L:
                raise ValueError(f"{field} has length {getattr(self, field).size}, expected {L}")
        if not all(np.isfinite(getattr(self, f)).all()
                   for f in ("lowpass_dec", "highpass_dec", "lowpass_rec", "highpass_rec")):
            raise ValueError("filter coefficients must be finite")
        # double-shift orthonormality; the m = 0 term is the unit-norm condition
        for m in range(L // 2):
            dot = float(np.dot(lo[: L - 2 * m], lo[2 * m:]))
            target = 1.0 if m == 0 else 0.0
            if abs(dot - target) > _TOL:
                raise ValueError(
                    f"{self.name}: lowpass not orthonormal under even shifts "
                    f"(shift {2 * m}: {dot!r})")
        qmf = np.array([(-1) ** k * lo[L - 1 - k] for k in range(L)])
        if np.max(np.abs(hi - qmf)) > _TOL:
            raise ValueError(f"{self.name}: highpass_dec is not the quadrature mirror of lowpass_dec")
        if (np.max(np.abs(self.lowpass_rec - lo[::-1])) > _TOL
                or np.max(np.abs(self.highpass_rec - hi[::-1])) > _TOL):
            raise ValueError(f"{self.name}: reconstruction filters must be the reversed decomposition filters")


_S2 = math.sqrt(2.0)
_S3 = math.sqrt(3.0)

HAAR = FilterPair.from_lowpass([1 / _S2, 1 / _S2], "haar")
D4 = FilterPair.from_lowpass(
    [(1 + _S3) / (4 * _S2), (3 + _S3) / (4 * _S2), (3 - _S3) / (4 * _S2), (1 - _S3) / (4 * _S2)],
    "d4",
)

_BUILTIN = {"haar": HAAR, "d4": D4, "db2": D4}


def get_filter(name):
    try:
        return _BUILTIN[name.lower()]
    except KeyError:
        raise ValueError(f"unknown wavelet {name!r}; choose from haar, d4") from None
