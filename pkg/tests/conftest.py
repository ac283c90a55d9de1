import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def random_vignette(rng, n_az=64, n_rg=8, dtype=np.complex64, **kw):
    from sarsd import ComplexVignette

    data = (rng.standard_normal((n_az, n_rg)) + 1j * rng.standard_normal((n_az, n_rg)))
    return ComplexVignette(
        data=data.astype(dtype),
        pixel_spacing_az=kw.pop("pixel_spacing_az", 5.0),
        pixel_spacing_rg=kw.pop("pixel_spacing_rg", 5.0),
        **kw,
    )
