import numpy as np
import pytest

from sarsd import ReferenceProfile, calibrate, reference_factor
from sarsd.calibration import CalibrationError

from conftest import random_vignette


class TestReferenceFactor:
    def test_scalar_ignores_angle(self):
        p = ReferenceProfile(kind="scalar", scalar_value=0.1)
        assert reference_factor(p, 10.0) == 0.1
        assert reference_factor(p, 45.0) == 0.1

    def test_table_midpoint_interpolation(self):
        p = ReferenceProfile.from_pairs([(20.0, 0.2), (40.0, 0.1)])
        assert reference_factor(p, 30.0) == pytest.approx(0.15)

    def test_table_no_extrapolation(self):
        p = ReferenceProfile.from_pairs([(20.0, 0.2), (40.0, 0.1)])
        with pytest.raises(CalibrationError, match="outside table range"):
            reference_factor(p, 45.0)

    def test_invalid_profiles_rejected(self):
        with pytest.raises(CalibrationError):
            ReferenceProfile(kind="scalar", scalar_value=0.0)
        with pytest.raises(CalibrationError):
            ReferenceProfile.from_pairs([(20.0, 0.2)])
        with pytest.raises(CalibrationError):
            ReferenceProfile.from_pairs([(40.0, 0.2), (20.0, 0.1)])
        with pytest.raises(CalibrationError):
            ReferenceProfile.from_pairs([(20.0, 0.2), (40.0, -0.1)])


class TestCalibrate:
    def test_unit_profile_is_identity(self, rng):
        v = random_vignette(rng)
        out = calibrate(v, ReferenceProfile.unit())
        np.testing.assert_array_equal(out.data, v.data)

    def test_constant_field_scalar_profile(self):
        from sarsd import ComplexVignette

        a, r = 3.0, 4.0
        v = ComplexVignette(
            data=np.full((8, 4), a, dtype=np.complex128),
            pixel_spacing_az=5.0,
            pixel_spacing_rg=5.0,
        )
        out = calibrate(v, ReferenceProfile(kind="scalar", scalar_value=r))
        np.testing.assert_allclose(np.abs(out.data), a / np.sqrt(r))
        np.testing.assert_allclose(np.abs(out.data) ** 2, a**2 / r)

    def test_per_column_table_matches_bruteforce(self, rng):
        # oracle: loop over columns, interpolate and divide by hand
        angles = np.linspace(21.0, 27.0, 6)
        v = random_vignette(rng, 16, 6, dtype=np.complex128, incidence_angle_deg=angles)
        table = [(20.0, 0.25), (24.0, 0.16), (28.0, 0.09)]
        p = ReferenceProfile.from_pairs(table)
        out = calibrate(v, p)
        ta = np.array([a for a, _ in table])
        ts = np.array([s for _, s in table])
        for j, theta in enumerate(angles):
            ref = np.interp(theta, ta, ts)
            np.testing.assert_allclose(out.data[:, j], v.data[:, j] / np.sqrt(ref), rtol=1e-12)

    def test_out_of_range_column_reported(self, rng):
        v = random_vignette(rng, 8, 3, incidence_angle_deg=np.array([21.0, 25.0, 41.0]))
        p = ReferenceProfile.from_pairs([(20.0, 0.2), (40.0, 0.1)])
        with pytest.raises(CalibrationError, match="column 2"):
            calibrate(v, p)

    def test_linearity(self, rng):
        v = random_vignette(rng, 32, 4, dtype=np.complex128)
        p = ReferenceProfile(kind="scalar", scalar_value=0.3)
        alpha = 2.0 - 1.5j
        left = calibrate(v.with_data(alpha * v.data), p).data
        right = alpha * calibrate(v, p).data
        np.testing.assert_allclose(left, right, rtol=1e-12)

    def test_energy_scaling(self, rng):
        v = random_vignette(rng, 64, 16, dtype=np.complex64)
        r = 0.7
        out = calibrate(v, ReferenceProfile(kind="scalar", scalar_value=r))
        e_in = np.sum(np.abs(v.data.astype(np.complex128)) ** 2)
        e_out = np.sum(np.abs(out.data.astype(np.complex128)) ** 2)
        assert e_out == pytest.approx(e_in / r, rel=1e-6)

    def test_metadata_unchanged(self, rng):
        v = random_vignette(rng)
        out = calibrate(v, ReferenceProfile(kind="scalar", scalar_value=2.0))
        assert out.data.shape == v.data.shape
        assert out.pixel_spacing_az == v.pixel_spacing_az
        assert out.pixel_spacing_rg == v.pixel_spacing_rg
