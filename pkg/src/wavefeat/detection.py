"""Correlation-based activation detection, spectra and scale ranking."""

from dataclasses import dataclass

import numpy as np

from .operator import ScaleMask, extract_iterative

R_CLAMP = 1.0 - 1e-7
DEFAULT_THRESHOLD = 3.09
_DEGENERATE_RTOL = 1e-10


def _centered_norms(x):
    """Centre columns along axis 0; flag columns whose variance is numerically nil."""
    raw = np.sqrt(np.sum(x * x, axis=0))
    xc = x - x.mean(axis=0)
    cn = np.sqrt(np.sum(xc * xc, axis=0))
    return xc, cn, cn <= _DEGENERATE_RTOL * raw


def pearson_corr(u, v):
    """Pearson correlation of two series; returns ``(r, degenerate)``.

    A constant input gives ``r = 0`` with ``degenerate = True`` instead of NaN.
    """
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape or u.ndim != 1:
        raise ValueError(f"pearson_corr needs two 1-D series of equal length, got {u.shape} and {v.shape}")
    if u.size < 3:
        raise ValueError(f"pearson_corr needs at least 3 samples, got {u.size}")
    r, deg = correlate_columns(u, v[:, None])
    return float(r[0]), bool(deg[0])


def correlate_columns(u, V):
    """Pearson correlation between ``u`` and every column of ``V``."""
    uc, un, udeg = _centered_norms(np.asarray(u, dtype=np.float64)[:, None])
    Vc, vn, vdeg = _centered_norms(np.asarray(V, dtype=np.float64))
    degenerate = vdeg | udeg[0]
    denom = np.where(degenerate, 1.0, un[0] * vn)
    r = np.where(degenerate, 0.0, (uc[:, 0] @ Vc) / denom)
    return np.clip(r, -1.0, 1.0), degenerate


def fisher_c(r, A):
    """Fisher statistic ``sqrt(A - 3)/2 * ln((1 + r)/(1 - r))`` with ``|r|`` clamped below 1."""
    if A < 4:
        raise ValueError(f"Fisher statistic needs A >= 4 time points, got {A}")
    rc = np.clip(np.asarray(r, dtype=np.float64), -R_CLAMP, R_CLAMP)
    c = 0.5 * np.sqrt(A - 3.0) * (np.log1p(rc) - np.log1p(-rc))
    return float(c) if c.ndim == 0 else c


@dataclass(frozen=True)
class ActivationMap:
    r: np.ndarray
    C: np.ndarray
    active: np.ndarray
    degenerate: np.ndarray
    threshold: float
    A: int

    @property
    def n_active(self):
        return int(self.active.sum())


def detect(V_E, U_E, threshold=DEFAULT_THRESHOLD):
    V_E = np.asarray(V_E, dtype=np.float64)
    U_E = np.asarray(U_E, dtype=np.float64)
    if V_E.ndim != 2 or U_E.ndim != 1 or V_E.shape[0] != U_E.shape[0]:
        raise ValueError(f"reference of length {U_E.shape} does not match voxel matrix {V_E.shape}")
    if np.isnan(threshold) or threshold == np.inf:
        raise ValueError(f"threshold must be finite or -inf, got {threshold}")
    T = V_E.shape[0]
    r, degenerate = correlate_columns(U_E, V_E)
    C = fisher_c(r, T)
    C = np.atleast_1d(C)
    return ActivationMap(r, C, C >= threshold, degenerate, float(threshold), T)


@dataclass(frozen=True)
class Spectrum:
    magnitude: np.ndarray
    freq: np.ndarray
    dt: float

    @property
    def bins(self):
        return np.arange(self.magnitude.size)


def spectrum(v, dt=1.0):
    """One-sided DFT magnitude with frequency axis ``k / (T dt)``."""
    v = np.asarray(v, dtype=np.float64)
    if v.ndim != 1 or v.size < 4:
        raise ValueError(f"spectrum needs a 1-D series of length >= 4, got shape {v.shape}")
    if not dt > 0:
        raise ValueError(f"sampling interval must be positive, got {dt}")
    return Spectrum(np.abs(np.fft.rfft(v)), np.fft.rfftfreq(v.size, d=dt), float(dt))


def nominal_band(scale, depth, T):
    """Half-open DFT bin interval ``(lo, hi]`` a scale nominally covers (``[0, hi]`` for ``l_I``)."""
    if scale.startswith("l") or scale == "approx":
        return 0, T // 2 ** (depth + 1)
    j = int(scale[1:])
    return T // 2 ** (j + 1), T // 2 ** j


def out_of_band_fraction(x, scale, depth):
    """Share of ``x``'s energy outside the nominal band of ``scale``."""
    x = np.asarray(x, dtype=np.float64)
    T = x.size
    power = np.abs(np.fft.fft(x)) ** 2
    total = power.sum()
    if total == 0:
        return 0.0
    k = np.minimum(np.arange(T), T - np.arange(T))
    lo, hi = nominal_band(scale, depth, T)
    inside = (k <= hi) if scale.startswith("l") or scale == "approx" else (k > lo) & (k <= hi)
    return float(power[~inside].sum() / total)


def scale_names(depth):
    return [f"r{j}" for j in range(1, depth + 1)] + [f"l{depth}"]


@dataclass(frozen=True)
class ScaleScore:
    scale: str
    score: float
    energy: float
    corr: float
    characteristic: bool


def single_scale(U, f, scale, depth, refilter=False):
    return extract_iterative(U, f, ScaleMask.parse(scale, depth), refilter)


def select_feature_scales(U, f, depth=3, refilter=False, k=2):
    """Rank scales by ``||U_s|| * |corr(U_s, U)|`` of their single-scale reconstructions."""
    if not 1 <= k <= depth + 1:
        raise ValueError(f"k must be between 1 and {depth + 1}, got {k}")
    U = np.asarray(U, dtype=np.float64)
    scored = []
    for name in scale_names(depth):
        Us = single_scale(U, f, name, depth, refilter)
        energy = float(np.linalg.norm(Us))
        corr = pearson_corr(Us, U)[0] if energy > 0 else 0.0
        scored.append((name, energy * abs(corr), energy, corr))
    # stable sort keeps the finest-first listing for ties
    scored.sort(key=lambda s: -s[1])
    return [ScaleScore(n, s, e, c, i < k) for i, (n, s, e, c) in enumerate(scored)]
