"""Subaperture decomposition toolkit for ocean SAR vignettes."""

from .calibration import ReferenceProfile, calibrate, reference_factor
from .multilook import boxcar_lowpass, decimate, intensity, multilook_channel
from .raster_model import (
    AzimuthSpectrum,
    BandDescriptor,
    ComplexVignette,
    ProcessedStack,
    RasterModelError,
    SdConfig,
    SubapertureStack,
    validate,
)
from .sd_core import (
    HammingWindow,
    StageError,
    azimuth_fft,
    azimuth_ifft_all,
    center_spectrum,
    compensate_hamming,
    decompose,
    generate_subaperture_spectra,
    make_bands,
    uncenter_spectrum,
)
from .synth import SceneSpec, generate, measure_irw

__version__ = "0.1.0"
