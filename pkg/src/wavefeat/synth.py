"""Synthetic block-design voxel data with known ground truth."""

from dataclasses import dataclass, field
import math

import numpy as np

from .dwt import circular_convolve

# voxels whose noise comes from one generator stream
NOISE_BLOCK = 4096


@dataclass(frozen=True)
class BlockDesign:
    dt: float
    block_on: int
    block_off: int
    n_cycles: int

    def __post_init__(self):
        if self.block_on < 1 or self.block_off < 1:
            raise ValueError("block_on and block_off must be >= 1")
        if self.n_cycles < 1:
            raise ValueError("n_cycles must be >= 1")
        if not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt}")

    @property
    def T(self):
        return self.n_cycles * (self.block_on + self.block_off)

    @classmethod
    def for_length(cls, T, block_len=16, dt=2.0):
        """Equal on/off blocks of ``block_len`` points repeated to fill ``T``."""
        if T % (2 * block_len):
            raise ValueError(f"T={T} is not a whole number of {block_len}-on/{block_len}-off cycles")
        return cls(dt, block_len, block_len, T // (2 * block_len))


def boxcar(design):
    cycle = np.r_[np.ones(design.block_on), np.zeros(design.block_off)]
    return np.tile(cycle, design.n_cycles)


def _gamma_pdf(t, shape, scale):
    return t ** (shape - 1) * np.exp(-t / scale) / (math.gamma(shape) * scale ** shape)


def hrf_kernel(dt, length_s=32.0):
    """Double-gamma haemodynamic response sampled every ``dt`` seconds, peak 1."""
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt}")
    t = np.arange(0.0, length_s + 1e-9, dt)
    g = _gamma_pdf(t, 6.0, 1.0) - _gamma_pdf(t, 16.0, 1.0) / 6.0
    return g / g.max()


def _fold(h, n):
    """Wrap a kernel onto period ``n`` so circular convolution sees all of it."""
    if h.size <= n:
        return h
    out = np.zeros(n)
    np.add.at(out, np.arange(h.size) % n, h)
    return out


def reference_signal(design):
    """Mean-removed circular convolution of the stimulus with the HRF."""
    stim = boxcar(design)
    u = circular_convolve(stim, _fold(hrf_kernel(design.dt), stim.size))
    return u - u.mean()


def drift_signal(T, coeffs):
    """Polynomial ``sum_i c_i (t/T)**i`` over ``t = 0..T-1``."""
    tn = np.arange(T) / T
    return np.polynomial.polynomial.polyval(tn, np.asarray(coeffs, dtype=np.float64)) * np.ones(T)


@dataclass(frozen=True, eq=False)
class SyntheticDataset:
    V: np.ndarray
    U: np.ndarray
    truth: np.ndarray
    params: dict = field(default_factory=dict)


def _noise(T, P, sigma, seed):
    out = np.empty((T, P))
    for b, start in enumerate(range(0, P, NOISE_BLOCK)):
        width = min(NOISE_BLOCK, P - start)
        rng = np.random.default_rng([seed, 1, b])
        # voxel-major draw: a voxel's samples do not depend on the block width
        out[:, start:start + width] = rng.standard_normal((width, T)).T
    return sigma * out


def generate(design, P, frac_active=0.05, amplitude=1.0, noise_sigma=1.0, drift=None, seed=0):
    """Voxel matrix in which a seeded subset of columns carries the reference.

    ``drift`` holds polynomial coefficients in normalised time; ``None`` means a
    linear trend of slope ``0.5 * noise_sigma``.
    """
    if P < 1:
        raise ValueError(f"P must be >= 1, got {P}")
    if not 0.0 <= frac_active <= 1.0:
        raise ValueError(f"frac_active must lie in [0, 1], got {frac_active}")
    if noise_sigma < 0:
        raise ValueError(f"noise_sigma must be >= 0, got {noise_sigma}")
    if amplitude <= 0:
        raise ValueError(f"amplitude must be positive, got {amplitude}")
    if drift is None:
        drift = (0.0, 0.5 * noise_sigma)
    T = design.T
    U = reference_signal(design)
    n_active = int(math.floor(frac_active * P + 0.5))
    chooser = np.random.default_rng([seed, 0])
    truth = np.zeros(P, dtype=bool)
    truth[chooser.choice(P, size=n_active, replace=False)] = True

    V = drift_signal(T, drift)[:, None] + _noise(T, P, noise_sigma, seed)
    V[:, truth] += amplitude * U[:, None]
    params = dict(dt=design.dt, block_on=design.block_on, block_off=design.block_off,
                  n_cycles=design.n_cycles, P=P, frac_active=frac_active, amplitude=amplitude,
                  noise_sigma=noise_sigma, drift=tuple(float(c) for c in drift), seed=seed)
    return SyntheticDataset(V, U, truth, params)
