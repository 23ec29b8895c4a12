"""Periodic Mallat decomposition and reconstruction.

Conventions
-----------
Analysis filtering is circular convolution ``y[n] = sum_k h[k] x[(n-k) mod N]``
followed by keeping even indices. Synthesis inserts zeros between samples,
convolves with the reconstruction filter and advances the result by
``L - 1`` samples, which is what makes time-reversed reconstruction filters
invert the analysis stage exactly.

All routines accept a single signal of shape ``(T,)`` or a batch of shape
``(T, P)`` whose columns are processed independently.

Scale ``r_1`` is the first-level (finest) detail band.
"""

from dataclasses import dataclass

import numpy as np

from . import _backend
from .refilter import refilter_highpass, refilter_lowpass


def _as_batch(x):
    """Return a C-contiguous (N, P) float64 view and whether input was 1-D."""
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim == 1:
        return np.ascontiguousarray(arr[:, None]), True
    if arr.ndim == 2:
        return np.ascontiguousarray(arr), False
    raise ValueError(f"expected a 1-D signal or 2-D (T, P) batch, got shape {arr.shape}")


def _restore(y, was_1d):
    return y[:, 0] if was_1d else y


def _filter_array(h):
    h = np.ascontiguousarray(h, dtype=np.float64).ravel()
    if h.size == 0:
        raise ValueError("filter must have at least one coefficient")
    if not np.isfinite(h).all():
        raise ValueError("filter coefficients must be finite")
    return h


def circular_convolve(x, h):
    """Circular convolution of each column of ``x`` with ``h``."""
    h = _filter_array(h)
    xb, was_1d = _as_batch(x)
    if xb.shape[0] < h.size:
        raise ValueError(f"signal length {xb.shape[0]} is shorter than filter length {h.size}")
    return _restore(_backend.kernels.cconv(xb, h, 0), was_1d)


def downsample2(x):
    x = np.asarray(x, dtype=np.float64)
    if x.shape[0] % 2:
        raise ValueError(f"downsample2 needs an even length, got {x.shape[0]}")
    return x[0::2].copy()


def upsample2(x):
    x = np.asarray(x, dtype=np.float64)
    out = np.zeros((2 * x.shape[0],) + x.shape[1:])
    out[0::2] = x
    return out


def _frozen(a):
    a = np.array(a, dtype=np.float64)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class WaveletPyramid:
    """Coefficient set ``[l_I, r_I, ..., r_1]`` of one signal or batch.

    ``details[j - 1]`` holds ``r_j``; ``approx`` holds ``l_I``.
    """

    approx: np.ndarray
    details: tuple
    original_length: int

    def __post_init__(self):
        object.__setattr__(self, "approx", _frozen(self.approx))
        object.__setattr__(self, "details", tuple(_frozen(d) for d in self.details))
        self.check()

    @property
    def depth(self):
        return len(self.details)

    def check(self):
        T, I = self.original_length, self.depth
        if I < 1:
            raise ValueError("pyramid needs at least one detail level")
        if T % (2 ** I):
            raise ValueError(f"original length {T} is not divisible by 2**{I}")
        trailing = self.approx.shape[1:]
        for j, d in enumerate(self.details, start=1):
            if d.shape[0] != T // 2 ** j or d.shape[1:] != trailing:
                raise ValueError(
                    f"r_{j} has shape {d.shape}, expected ({T // 2 ** j},) + {trailing}")
        if self.approx.shape[0] != T // 2 ** I:
            raise ValueError(f"l_{I} has length {self.approx.shape[0]}, expected {T // 2 ** I}")

    def as_list(self):
        """Coefficients in ``[l_I, r_I, ..., r_1]`` order."""
        return [self.approx, *reversed(self.details)]

    def masked(self, keep_details, keep_approx):
        """Copy with every scale outside the kept set zeroed."""
        details = [d if j in keep_details else np.zeros_like(d)
                   for j, d in enumerate(self.details, start=1)]
        approx = self.approx if keep_approx else np.zeros_like(self.approx)
        return WaveletPyramid(approx, tuple(details), self.original_length)


def required_divisor(depth, refilter):
    return 2 ** (depth + 1) if refilter else 2 ** depth


def check_length(T, depth, refilter):
    if depth < 1:
        raise ValueError(f"depth must be >= 1, got {depth}")
    div = required_divisor(depth, refilter)
    if T % div:
        mode = "refilter=on" if refilter else "refilter=off"
        raise ValueError(f"length {T} must be divisible by {div} for depth {depth} with {mode}")


def _analysis(x, h, project):
    if project is None:
        return _backend.kernels.conv_down(x, h)
    y = project(_backend.kernels.cconv(x, h, 0))
    return np.ascontiguousarray(y[0::2])


def _synthesis(c, g, project):
    shift = g.size - 1
    if project is None:
        return _backend.kernels.up_conv(np.ascontiguousarray(c), g, shift)
    up = np.zeros((2 * c.shape[0], c.shape[1]))
    up[0::2] = c
    return _backend.kernels.cconv(np.ascontiguousarray(project(up)), g, shift)


def decompose(v, f, depth=3, refilter=False):
    """Multi-level periodic DWT of ``v`` (optionally with spectral re-filtering)."""
    xb, was_1d = _as_batch(v)
    T = xb.shape[0]
    check_length(T, depth, refilter)
    if not np.isfinite(xb).all():
        raise ValueError("signal contains non-finite values")
    lo, hi = f.lowpass_dec, f.highpass_dec
    if T // 2 ** (depth - 1) < lo.size:
        raise ValueError(f"depth {depth} leaves fewer samples than the {lo.size}-tap filter")
    pk = refilter_lowpass if refilter else None
    pb = refilter_highpass if refilter else None
    details = []
    approx = xb
    for _ in range(depth):
        details.append(_restore(_analysis(approx, hi, pb), was_1d))
        approx = _analysis(approx, lo, pk)
    return WaveletPyramid(_restore(approx, was_1d), tuple(details), T)


def reconstruct(p, f, refilter=False):
    """Inverse of :func:`decompose`."""
    p.check()
    check_length(p.original_length, p.depth, refilter)
    was_1d = p.approx.ndim == 1
    lo, hi = f.lowpass_rec, f.highpass_rec
    pk = refilter_lowpass if refilter else None
    pb = refilter_highpass if refilter else None
    approx, _ = _as_batch(p.approx)
    for j in range(p.depth, 0, -1):
        detail, _ = _as_batch(p.details[j - 1])
        approx = _synthesis(approx, lo, pk) + _synthesis(detail, hi, pb)
    return _restore(approx, was_1d)
