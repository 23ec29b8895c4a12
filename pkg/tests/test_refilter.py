import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from wavefeat.refilter import refilter_highpass, refilter_lowpass, retained_bins, spectral_project

from oracles import fft_project

LENGTHS = [8, 16, 32, 64, 128, 256, 512]


def test_constant():
    x = np.full(16, 2.5)
    np.testing.assert_allclose(refilter_lowpass(x), x, atol=1e-14)
    np.testing.assert_allclose(refilter_highpass(x), 0, atol=1e-14)


def test_nyquist():
    x = np.tile([1.0, -1.0], 8)
    np.testing.assert_allclose(refilter_lowpass(x), 0, atol=1e-14)
    np.testing.assert_allclose(refilter_highpass(x), x, atol=1e-14)


def test_boundary_bins_go_to_lowpass():
    keep = retained_bins(16, "lowpass")
    assert keep[4] and keep[12]
    assert not keep[5] and not keep[11]
    k = np.arange(16)
    np.testing.assert_array_equal(keep, keep[(16 - k) % 16])


@pytest.mark.parametrize("n", [6, 10, 18])
def test_length_not_multiple_of_four(n):
    with pytest.raises(ValueError, match="divisible by 4"):
        refilter_lowpass(np.zeros(n))
    with pytest.raises(ValueError, match="divisible by 4"):
        refilter_highpass(np.zeros(n))


@pytest.mark.parametrize("n", LENGTHS)
def test_against_fft_oracle(n, rng):
    x = rng.standard_normal(n)
    k = np.arange(n)
    low = (k <= n / 4) | (k >= 3 * n / 4)
    np.testing.assert_allclose(refilter_lowpass(x), fft_project(x, low), atol=1e-12)
    np.testing.assert_allclose(refilter_highpass(x), fft_project(x, ~low), atol=1e-12)


@pytest.mark.parametrize("n", LENGTHS)
def test_projection_algebra(n, rng):
    x, y = rng.standard_normal((2, n))
    gk, gb = refilter_lowpass(x), refilter_highpass(x)
    assert np.max(np.abs(gk + gb - x)) < 1e-12
    assert np.max(np.abs(refilter_lowpass(gk) - gk)) < 1e-12
    assert np.max(np.abs(refilter_highpass(gb) - gb)) < 1e-12
    assert abs(refilter_lowpass(x) @ refilter_highpass(y)) < 1e-10
    for kind in ("lowpass", "highpass"):
        assert np.max(np.abs(spectral_project(x, kind, return_complex=True).imag)) < 1e-12


def test_batch_columns(rng):
    X = rng.standard_normal((32, 4))
    out = refilter_lowpass(X)
    for p in range(4):
        np.testing.assert_allclose(out[:, p], refilter_lowpass(X[:, p]), atol=1e-14)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 64), st.floats(-5, 5), st.floats(-5, 5), st.integers(0, 2 ** 32 - 1))
def test_linearity(quarter, a, b, seed):
    n = 4 * quarter
    x, y = np.random.default_rng(seed).standard_normal((2, n))
    for op in (refilter_lowpass, refilter_highpass):
        np.testing.assert_allclose(op(a * x + b * y), a * op(x) + b * op(y), atol=1e-12)
