"""Fourier-domain re-filtering projections used to suppress aliasing.

``refilter_lowpass`` keeps DFT bins ``k <= N/4`` and ``k >= 3N/4``;
``refilter_highpass`` keeps the complementary middle half. The quarter
boundary bins belong to the low-pass set, so both sets are conjugate
symmetric and the two projections sum to the identity.
"""

import numpy as np


def retained_bins(n, kind):
    """Boolean mask over DFT bins ``0..n-1`` kept by the given projection."""
    if n % 4:
        raise ValueError(f"re-filtering needs a length divisible by 4, got {n}")
    k = np.arange(n)
    low = (k <= n // 4) | (k >= 3 * n // 4)
    if kind == "lowpass":
        return low
    if kind == "highpass":
        return ~low
    raise ValueError(f"kind must be 'lowpass' or 'highpass', got {kind!r}")


def spectral_project(x, kind, return_complex=False):
    """Zero the discarded bins of ``x`` along axis 0 and transform back.

    With ``return_complex=True`` the raw inverse DFT is returned so callers
    can inspect the imaginary residue that is otherwise dropped.
    """
    x = np.asarray(x, dtype=np.float64)
    keep = retained_bins(x.shape[0], kind)
    spec = np.fft.fft(x, axis=0)
    spec[~keep] = 0.0
    y = np.fft.ifft(spec, axis=0)
    return y if return_complex else y.real.copy()


def refilter_lowpass(x):
    return spectral_project(x, "lowpass")


def refilter_highpass(x):
    return spectral_project(x, "highpass")
