"""Numpy implementations of the filter-bank inner loops.

Every kernel takes a C-contiguous float64 array of shape ``(N, P)`` whose
columns are independent signals, and a 1-D float64 filter. Signals are treated
as periodic with period ``N``.
"""

import numpy as np

NAME = "python"


def cconv(x, h, shift=0):
    """``y[n] = sum_k h[k] * x[(n + shift - k) mod N]`` for each column."""
    n = x.shape[0]
    base = np.arange(n) + shift
    y = np.zeros_like(x)
    for k in range(h.shape[0]):
        y += h[k] * x[(base - k) % n]
    return y


def conv_down(x, h):
    """Circular convolution followed by keeping the even-indexed outputs."""
    n = x.shape[0]
    base = np.arange(0, n, 2)
    y = np.zeros((n // 2, x.shape[1]))
    for k in range(h.shape[0]):
        y += h[k] * x[(base - k) % n]
    return y


def up_conv(c, g, shift=0):
    """Zero-insertion upsampling followed by ``cconv(., g, shift)``."""
    m = c.shape[0]
    n = 2 * m
    base = np.arange(n) + shift
    up = np.zeros((n, c.shape[1]))
    up[0::2] = c
    y = np.zeros_like(up)
    for k in range(g.shape[0]):
        y += g[k] * up[(base - k) % n]
    return y
