import numpy as np
import pytest
from scipy import optimize, stats

from wavefeat import D4
from wavefeat.detection import detect, spectrum
from wavefeat.operator import ScaleMask, apply_operator, build_operator
from wavefeat.synth import (BlockDesign, boxcar, drift_signal, generate, hrf_kernel,
                            reference_signal)


def analytic_hrf(t):
    return (stats.gamma.pdf(t, 6, scale=1.0) - stats.gamma.pdf(t, 16, scale=1.0) / 6)


class TestBoxcar:
    def test_definition(self):
        np.testing.assert_array_equal(boxcar(BlockDesign(1.0, 4, 4, 2)),
                                      [1, 1, 1, 1, 0, 0, 0, 0, 1, 1, 1, 1, 0, 0, 0, 0])

    def test_mean(self):
        d = BlockDesign(2.0, 3, 5, 4)
        assert boxcar(d).mean() == pytest.approx(3 / 8)
        assert d.T == 32

    def test_fundamental(self):
        d = BlockDesign(2.0, 8, 8, 6)
        mag = spectrum(boxcar(d)).magnitude
        assert np.argmax(mag[1:]) + 1 == d.n_cycles

    def test_invalid(self):
        with pytest.raises(ValueError):
            BlockDesign(1.0, 0, 4, 2)
        with pytest.raises(ValueError, match="whole number"):
            BlockDesign.for_length(100, 16)


class TestHRF:
    @pytest.mark.parametrize("dt", [0.1, 0.5, 1.0, 2.0])
    def test_peak(self, dt):
        t_peak = optimize.minimize_scalar(lambda t: -analytic_hrf(t), bounds=(1, 10),
                                          method="bounded", options={"xatol": 1e-8}).x
        h = hrf_kernel(dt)
        assert abs(np.argmax(h) * dt - t_peak) <= dt
        assert abs(t_peak - 5.0) < 0.1
        assert h.max() == 1.0

    def test_undershoot(self):
        crossing = optimize.brentq(analytic_hrf, 8, 20)
        assert 10 < crossing < 13
        h = hrf_kernel(0.5)
        t = np.arange(h.size) * 0.5
        assert np.all(h[(t > crossing) & (t <= 32)] < 0)
        assert t[-1] == 32.0

    def test_bad_dt(self):
        with pytest.raises(ValueError):
            hrf_kernel(0.0)


class TestGenerate:
    design = BlockDesign.for_length(128, 16, 2.0)

    def test_reproducible(self):
        a = generate(self.design, 500, 0.1, seed=3)
        b = generate(self.design, 500, 0.1, seed=3)
        assert a.V.tobytes() == b.V.tobytes()
        np.testing.assert_array_equal(a.truth, b.truth)
        assert not np.array_equal(a.V, generate(self.design, 500, 0.1, seed=4).V)

    @pytest.mark.parametrize("P,frac", [(1000, 0.05), (7, 0.5), (10, 0.25), (33, 0.0), (5, 1.0)])
    def test_truth_count(self, P, frac):
        ds = generate(self.design, P, frac, seed=1)
        assert ds.truth.sum() == int(np.floor(frac * P + 0.5))

    def test_reference_mean_zero(self):
        assert abs(reference_signal(self.design).mean()) < 1e-12

    def test_structure(self):
        ds = generate(self.design, 200, 0.2, amplitude=2.0, noise_sigma=0.0, drift=(1.0, 3.0), seed=2)
        drift = drift_signal(128, (1.0, 3.0))
        np.testing.assert_allclose(ds.V[:, ~ds.truth], np.repeat(drift[:, None], 160, axis=1))
        np.testing.assert_allclose(ds.V[:, ds.truth] - drift[:, None], 2.0 * ds.U[:, None] * np.ones(40))

    def test_default_drift(self):
        ds = generate(self.design, 2000, 0.0, noise_sigma=2.0, seed=0)
        np.testing.assert_allclose(ds.V.mean(axis=1), np.arange(128) / 128 * 1.0, atol=0.15)
        assert ds.params["drift"] == (0.0, 1.0)

    def test_voxel_streams_do_not_depend_on_P(self):
        a = generate(self.design, 10, 0.0, seed=9)
        b = generate(self.design, 5000, 0.0, seed=9)
        np.testing.assert_array_equal(a.V, b.V[:, :10])

    def test_noiseless_recovery(self):
        ds = generate(self.design, 400, 0.05, noise_sigma=0.0, drift=(0.0,), seed=11)
        op = build_operator(D4, ScaleMask.parse("r2,r3", 3), True, 128)
        U_E = apply_operator(op, ds.U)
        for threshold in (0.5, 3.09, 50.0):
            amap = detect(apply_operator(op, ds.V), U_E, threshold)
            np.testing.assert_array_equal(amap.active, ds.truth)

    def test_null_rate(self):
        ds = generate(self.design, 50_000, 0.0, noise_sigma=1.0, drift=(0.0,), seed=12)
        assert not ds.truth.any()
        amap = detect(ds.V, ds.U, 3.09)
        lo, hi = stats.binom.interval(0.95, 50_000, stats.norm.sf(3.09))
        assert lo <= amap.n_active <= hi

    @pytest.mark.parametrize("kw", [dict(P=0), dict(frac_active=1.5), dict(noise_sigma=-1.0),
                                    dict(amplitude=0.0)])
    def test_invalid(self, kw):
        args = dict(P=10, frac_active=0.1, amplitude=1.0, noise_sigma=1.0)
        args.update(kw)
        with pytest.raises(ValueError):
            generate(self.design, **args)
