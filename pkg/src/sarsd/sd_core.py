"""Spectral core of the decomposition: azimuth FFT, transmit-window
compensation, shifted sub-band windowing, and inverse FFT.

FFT convention: unnormalized forward, 1/n inverse, transform length
always equal to n_az (never padded). Windows use the generalized
Hamming form w[n] = a - (1-a) cos(2 pi n / (M-1)), applied on the
centered spectrum assuming zero Doppler centroid.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.fft

from .calibration import calibrate
from .raster_model import (
    AzimuthSpectrum,
    BandDescriptor,
    ComplexVignette,
    RasterModelError,
    SdConfig,
    SubapertureStack,
)


class StageError(RuntimeError):
    """Pipeline failure tagged with the stage that raised it."""

    def __init__(self, stage: str, message: str):
        self.stage = stage
        super().__init__(f"[{stage}] {message}")


@dataclass(frozen=True)
class HammingWindow:
    """Generalized Hamming window of given length and coefficient."""

    length: int
    coefficient: float

    def __post_init__(self):
        if self.length < 1:
            raise RasterModelError([f"window length must be >= 1, got {self.length}"])
        if not (0.5 < self.coefficient <= 1.0):
            raise RasterModelError(
                [f"window coefficient must be in (0.5, 1.0], got {self.coefficient}"]
            )

    @property
    def weights(self) -> np.ndarray:
        m, a = self.length, self.coefficient
        if m == 1:
            return np.ones(1)
        n = np.arange(m)
        w = a - (1.0 - a) * np.cos(2.0 * np.pi * n / (m - 1))
        # exact mirror symmetry regardless of cos rounding
        return 0.5 * (w + w[::-1])


def azimuth_fft(v: ComplexVignette, workers: int = 1) -> AzimuthSpectrum:
    """Column-wise unnormalized forward DFT of length exactly n_az."""
    spec = scipy.fft.fft(v.data, axis=0, workers=workers)
    return AzimuthSpectrum(data=spec.astype(v.data.dtype), centered=False, source_id=v.id)


def center_spectrum(s: AzimuthSpectrum) -> AzimuthSpectrum:
    """Rotate rows by n_az//2 to put the zero-frequency bin at the middle."""
    if s.centered:
        raise StageError("center", "spectrum is already centered")
    return AzimuthSpectrum(
        data=np.roll(s.data, s.n_az // 2, axis=0), centered=True, source_id=s.source_id
    )


def uncenter_spectrum(s: AzimuthSpectrum) -> AzimuthSpectrum:
    """Exact inverse of center_spectrum."""
    if not s.centered:
        raise StageError("uncenter", "spectrum is not centered")
    return AzimuthSpectrum(
        data=np.roll(s.data, -(s.n_az // 2), axis=0), centered=False, source_id=s.source_id
    )


def compensate_hamming(s: AzimuthSpectrum, coefficient: float) -> AzimuthSpectrum:
    """Divide each centered-spectrum row by the full-length window weight.

    Removes the azimuth weighting applied during SAR processing so the
    sub-band windows act on a flat spectrum. Coefficients <= 0.5 are
    rejected because the window would reach zero.
    """
    if not s.centered:
        raise StageError("compensate", "compensation requires a centered spectrum")
    w = HammingWindow(s.n_az, coefficient).weights
    inv = (1.0 / w).astype(np.float32 if s.data.dtype == np.complex64 else np.float64)
    return AzimuthSpectrum(
        data=s.data * inv[:, np.newaxis], centered=True, source_id=s.source_id
    )


def make_bands(n_az: int, n_subapertures: int, coefficient: float = 0.75) -> list[BandDescriptor]:
    """Partition centered-spectrum rows into N contiguous equal bands.

    Band k covers [k*(n_az//N), (k+1)*(n_az//N)); the final band is
    extended to n_az so leftover rows from integer division are absorbed.
    """
    n = n_subapertures
    if not (1 <= n <= n_az // 4):
        raise RasterModelError(
            [f"n_subapertures must be in [1, n_az//4] = [1, {n_az // 4}], got {n}"]
        )
    width = n_az // n
    bands = []
    for k in range(n):
        start = k * width
        end = (k + 1) * width if k < n - 1 else n_az
        bands.append(
            BandDescriptor(
                index=k,
                start_row=start,
                end_row=end,
                center_row=(start + end) // 2,
                window_coefficient=coefficient,
            )
        )
    return bands


def generate_subaperture_spectra(
    s: AzimuthSpectrum, bands: list[BandDescriptor]
) -> list[AzimuthSpectrum]:
    """Apply one shifted Hamming window per band; rows outside are zero."""
    if not s.centered:
        raise StageError("window", "sub-band windowing requires a centered spectrum")
    if bands and bands[-1].end_row > s.n_az:
        raise StageError("window", f"bands exceed spectrum rows ({bands[-1].end_row} > {s.n_az})")
    out = []
    for band in bands:
        w = HammingWindow(band.width, band.window_coefficient).weights
        w = w.astype(np.float32 if s.data.dtype == np.complex64 else np.float64)
        data = np.zeros_like(s.data)
        data[band.start_row : band.end_row] = (
            s.data[band.start_row : band.end_row] * w[:, np.newaxis]
        )
        out.append(AzimuthSpectrum(data=data, centered=True, source_id=s.source_id))
    return out


def azimuth_ifft_all(
    spectra: list[AzimuthSpectrum],
    bands: list[BandDescriptor],
    workers: int = 1,
) -> SubapertureStack:
    """Uncenter each sub-band spectrum and inverse-transform it (1/n norm)."""
    if len(spectra) != len(bands):
        raise StageError("ifft", f"{len(spectra)} spectra but {len(bands)} bands")
    members = []
    for band, spec in zip(bands, spectra):
        natural = uncenter_spectrum(spec) if spec.centered else spec
        img = scipy.fft.ifft(natural.data, axis=0, workers=workers)
        members.append((band, img.astype(natural.data.dtype)))
    return SubapertureStack(bands=tuple(members), source_id=spectra[0].source_id if spectra else "")


def decompose(v: ComplexVignette, cfg: SdConfig) -> SubapertureStack:
    """Full spectral chain: calibrate, FFT, center, compensate, window, iFFT.

    Deterministic: identical inputs give bit-identical outputs on the
    same build regardless of fft worker count (columns transform
    independently).
    """
    from .calibration import ReferenceProfile

    cfg.check_applicable(v.n_az)
    profile = cfg.calibration or ReferenceProfile.unit()
    try:
        cal = calibrate(v, profile)
    except Exception as e:
        raise StageError("calibrate", str(e)) from e
    spec = azimuth_fft(cal, workers=cfg.fft_workers)
    spec = center_spectrum(spec)
    if cfg.compensate_transmit_window:
        spec = compensate_hamming(spec, cfg.hamming_coefficient)
    bands = make_bands(v.n_az, cfg.n_subapertures, cfg.hamming_coefficient)
    sub_spectra = generate_subaperture_spectra(spec, bands)
    return azimuth_ifft_all(sub_spectra, bands, workers=cfg.fft_workers)
