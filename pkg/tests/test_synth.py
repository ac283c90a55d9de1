import numpy as np
import pytest
from scipy import stats

from sarsd import SceneSpec, SdConfig, decompose, generate, intensity, measure_irw, multilook_channel
from sarsd.synth import SynthError


class TestSpeckle:
    def test_mean_and_distribution(self):
        v = generate(SceneSpec(kind="speckle", n_az=512, n_rg=512, rng_seed=7))
        power = intensity(v.data).ravel().astype(np.float64)
        assert np.mean(power) == pytest.approx(1.0, rel=0.02)
        # fully developed speckle: exponential intensity
        ks = stats.kstest(power, "expon", args=(0, np.mean(power))).statistic
        assert ks < 0.02

    def test_determinism(self):
        spec = SceneSpec(kind="speckle", n_az=64, n_rg=64, rng_seed=123)
        a, b = generate(spec), generate(spec)
        np.testing.assert_array_equal(a.data, b.data)

    def test_seed_changes_scene(self):
        a = generate(SceneSpec(kind="speckle", n_az=32, n_rg=32, rng_seed=1))
        b = generate(SceneSpec(kind="speckle", n_az=32, n_rg=32, rng_seed=2))
        assert not np.array_equal(a.data, b.data)

    def test_azimuth_whiteness(self):
        v = generate(SceneSpec(kind="speckle", n_az=512, n_rg=512, rng_seed=11))
        z = v.data.astype(np.complex128)
        denom = np.mean(np.abs(z) ** 2)
        for lag in (1, 2, 5):
            rho = np.mean(z[lag:] * np.conj(z[:-lag])) / denom
            assert abs(rho) < 0.05


class TestSwell:
    def test_mean_intensity_follows_modulation(self):
        spec = SceneSpec(
            kind="swell",
            n_az=512,
            n_rg=64,
            rng_seed=5,
            wavelength_m=400.0,
            direction_deg=0.0,
            modulation_depth=0.8,
        )
        v = generate(spec)
        power = intensity(v.data)
        # average over range columns; compare with expected 1 + m cos
        profile = power.mean(axis=1)
        i = np.arange(512) * spec.pixel_spacing_az
        expected = 1.0 + 0.8 * np.cos(2 * np.pi * i / 400.0)
        rho = np.corrcoef(profile, expected)[0, 1]
        assert rho > 0.8

    def test_modulation_depth_bounds(self):
        with pytest.raises(SynthError):
            SceneSpec(kind="swell", n_az=32, n_rg=32, modulation_depth=1.0)


class TestPointTarget:
    def test_peak_at_requested_position(self):
        v = generate(
            SceneSpec(kind="point_target", n_az=256, n_rg=16, position=(100, 5), amplitude=2.0)
        )
        power = intensity(v.data)
        assert np.unravel_index(np.argmax(power), power.shape) == (100, 5)

    def test_subaperture_width_is_n_times_full(self):
        spec = SceneSpec(kind="point_target", n_az=1024, n_rg=64, rng_seed=0)
        v = generate(spec)
        j = 32
        w_full = measure_irw(intensity(v.data[:, j]))
        out = decompose(v, SdConfig())
        widths = [measure_irw(intensity(img[:, j])) for _, img in out.bands]
        for w in widths:
            assert 3.2 * w_full <= w <= 4.8 * w_full


class TestTwoTexture:
    def test_invisible_before_visible_after(self):
        spec = SceneSpec(kind="two_texture_directional", n_az=512, n_rg=256, rng_seed=9)
        v = generate(spec)
        power = intensity(v.data)
        boundary = 128
        left = power[:, :boundary].mean()
        right = power[:, boundary:].mean()
        contrast_full = max(left, right) / min(left, right)
        assert contrast_full < 1.05

        cfg = SdConfig(lowpass_size=4, lowpass_coefficient=1 / 16, decimation_factor=4)
        out = decompose(v, cfg)
        contrasts = []
        for _, img in out.bands:
            ml = multilook_channel(img, cfg)
            b = boundary // 4
            l, r = ml[:, :b].mean(), ml[:, b:].mean()
            contrasts.append(max(l, r) / min(l, r))
        assert max(contrasts) > 1.5

    def test_boundary_validation(self):
        with pytest.raises(SynthError):
            generate(
                SceneSpec(
                    kind="two_texture_directional", n_az=64, n_rg=32, boundary_col=32
                )
            )


class TestUnknownKind:
    def test_rejected(self):
        with pytest.raises(SynthError, match="unknown scene kind"):
            SceneSpec(kind="nonsense", n_az=32, n_rg=32)


class TestMeasureIrw:
    def test_triangle(self):
        assert measure_irw(np.array([0.0, 1.0, 2.0, 1.0, 0.0])) == pytest.approx(2.0)

    def test_scale_invariance(self):
        p = np.array([0.0, 1.0, 3.0, 7.0, 3.0, 1.0, 0.0])
        assert measure_irw(p) == pytest.approx(measure_irw(17.3 * p))

    def test_windowed_sinc_band(self):
        # closed-form oracle: 1024-point band, rectangular window -> the
        # intensity mainlobe is sinc^2 with -3 dB width 0.886 * n/m
        n, m = 1024, 256
        spec = np.zeros(n, dtype=np.complex128)
        spec[(n - m) // 2 : (n + m) // 2] = 1.0
        profile = np.abs(np.fft.ifft(np.fft.ifftshift(spec))) ** 2
        profile = np.fft.fftshift(profile)
        width = measure_irw(profile)
        assert width == pytest.approx(0.886 * n / m, rel=0.05)

    def test_edge_peak_rejected(self):
        with pytest.raises(SynthError):
            measure_irw(np.array([5.0, 1.0, 0.0]))

    def test_no_crossing_rejected(self):
        with pytest.raises(SynthError):
            measure_irw(np.array([0.9, 0.95, 1.0, 0.95, 0.9]))
