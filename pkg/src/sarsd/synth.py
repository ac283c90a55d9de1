"""Synthetic vignette generator and impulse-response measurement.

Ground-truth scenes for the physical properties the pipeline must
honor: fully developed speckle (circular complex Gaussian, exponential
intensity), swell-modulated speckle, band-limited point targets, and a
two-region scene whose right texture lives in a single quarter of the
azimuth spectrum so it only becomes visible after sub-band splitting.

RNG: numpy PCG64 (default_rng), explicitly seeded; the algorithm name
is recorded in provenance so scenes are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .raster_model import ComplexVignette, RasterModelError
from .sd_core import HammingWindow

RNG_ALGORITHM = "numpy-PCG64"

SCENE_KINDS = ("speckle", "swell", "point_target", "two_texture_directional")


class SynthError(ValueError):
    pass


@dataclass(frozen=True)
class SceneSpec:
    """Deterministic description of one synthetic scene."""

    kind: str
    n_az: int
    n_rg: int
    rng_seed: int = 0
    pixel_spacing_az: float = 5.0
    pixel_spacing_rg: float = 5.0
    # swell
    wavelength_m: float = 200.0
    direction_deg: float = 0.0
    modulation_depth: float = 0.5
    # point_target
    position: Optional[tuple] = None  # (i, j); defaults to center
    amplitude: float = 1.0
    background_level: float = 0.0
    window_coefficient: float = 0.75
    # two_texture_directional
    boundary_col: Optional[int] = None  # defaults to n_rg // 2
    band_fraction_left: float = 1.0
    band_fraction_right: float = 0.25
    confined_band_index: int = 2  # quarter band holding the right texture

    def __post_init__(self):
        if self.kind not in SCENE_KINDS:
            raise SynthError(f"unknown scene kind {self.kind!r} (expected one of {SCENE_KINDS})")
        if self.n_az < 2 or self.n_rg < 1:
            raise SynthError(f"scene dims must be >= 2x1, got {self.n_az}x{self.n_rg}")
        if not (0.0 <= self.modulation_depth < 1.0):
            raise SynthError(f"modulation_depth must be in [0, 1), got {self.modulation_depth}")


def _speckle(rng: np.random.Generator, n_az: int, n_rg: int) -> np.ndarray:
    """Unit-variance circular complex Gaussian field."""
    re = rng.standard_normal((n_az, n_rg))
    im = rng.standard_normal((n_az, n_rg))
    return ((re + 1j * im) / np.sqrt(2.0)).astype(np.complex64)


def _swell(spec: SceneSpec, rng: np.random.Generator) -> np.ndarray:
    field_ = _speckle(rng, spec.n_az, spec.n_rg)
    i = np.arange(spec.n_az)[:, None] * spec.pixel_spacing_az
    j = np.arange(spec.n_rg)[None, :] * spec.pixel_spacing_rg
    theta = np.deg2rad(spec.direction_deg)
    phase = 2.0 * np.pi * (i * np.cos(theta) + j * np.sin(theta)) / spec.wavelength_m
    envelope = np.sqrt(1.0 + spec.modulation_depth * np.cos(phase))
    return (field_ * envelope).astype(np.complex64)


def _band_limit_column(col: np.ndarray, keep: slice, weights: np.ndarray | None = None) -> np.ndarray:
    """Zero a column's centered azimuth spectrum outside ``keep``."""
    n = col.shape[0]
    spec = np.fft.fftshift(np.fft.fft(col, axis=0), axes=0)
    mask = np.zeros((n,) + col.shape[1:], dtype=spec.dtype)
    if weights is None:
        mask[keep] = spec[keep]
    else:
        mask[keep] = spec[keep] * weights.reshape((-1,) + (1,) * (col.ndim - 1))
    return np.fft.ifft(np.fft.ifftshift(mask, axes=0), axis=0)


def _point_target(spec: SceneSpec, rng: np.random.Generator) -> np.ndarray:
    n_az, n_rg = spec.n_az, spec.n_rg
    if spec.background_level > 0:
        data = (_speckle(rng, n_az, n_rg) * spec.background_level).astype(np.complex128)
    else:
        data = np.zeros((n_az, n_rg), dtype=np.complex128)
    i, j = spec.position if spec.position is not None else (n_az // 2, n_rg // 2)
    data[i, j] += spec.amplitude
    # band-limit the target column with a full-aperture window to emulate
    # the processed azimuth impulse response
    w = HammingWindow(n_az, spec.window_coefficient).weights
    data[:, j] = _band_limit_column(data[:, j], slice(0, n_az), weights=w)
    return data.astype(np.complex64)


def _two_texture(spec: SceneSpec, rng: np.random.Generator) -> np.ndarray:
    n_az, n_rg = spec.n_az, spec.n_rg
    boundary = spec.boundary_col if spec.boundary_col is not None else n_rg // 2
    if not (0 < boundary < n_rg):
        raise SynthError(f"boundary_col must be inside (0, {n_rg}), got {boundary}")
    data = _speckle(rng, n_az, n_rg).astype(np.complex128)

    # left region: full-band speckle, optionally narrowed
    if spec.band_fraction_left < 1.0:
        data[:, :boundary] = _confine(data[:, :boundary], n_az, spec.band_fraction_left, None)
    # right region: speckle confined to one quarter band so it is
    # indistinguishable in full-resolution intensity but dominates a
    # single subaperture channel
    data[:, boundary:] = _confine(
        data[:, boundary:], n_az, spec.band_fraction_right, spec.confined_band_index
    )
    return data.astype(np.complex64)


def _confine(block: np.ndarray, n_az: int, fraction: float, band_index: int | None) -> np.ndarray:
    width = max(1, int(round(n_az * fraction)))
    if band_index is None:
        start = (n_az - width) // 2
    else:
        n_bands = int(round(1.0 / fraction))
        start = band_index * (n_az // n_bands)
    limited = _band_limit_column(block, slice(start, start + width))
    # renormalize so mean intensity stays at the full-band level
    power = np.mean(np.abs(limited) ** 2)
    if power > 0:
        limited *= 1.0 / np.sqrt(power)
    return limited


def generate(spec: SceneSpec) -> ComplexVignette:
    """Render the scene; identical spec + seed gives bit-identical output."""
    rng = np.random.default_rng(spec.rng_seed)
    if spec.kind == "speckle":
        data = _speckle(rng, spec.n_az, spec.n_rg)
    elif spec.kind == "swell":
        data = _swell(spec, rng)
    elif spec.kind == "point_target":
        data = _point_target(spec, rng)
    elif spec.kind == "two_texture_directional":
        data = _two_texture(spec, rng)
    else:  # pragma: no cover - guarded by SceneSpec
        raise SynthError(f"unknown scene kind {spec.kind!r}")
    return ComplexVignette(
        data=data,
        pixel_spacing_az=spec.pixel_spacing_az,
        pixel_spacing_rg=spec.pixel_spacing_rg,
        incidence_angle_deg=23.0,
        id=f"{spec.kind}-{spec.n_az}x{spec.n_rg}-seed{spec.rng_seed}",
    )


def measure_irw(intensity_profile: np.ndarray) -> float:
    """-3 dB (half-power) width of a peaked 1-D intensity profile.

    Crossings on each side of the unique global maximum are located by
    linear interpolation between neighboring samples.
    """
    p = np.asarray(intensity_profile, dtype=np.float64)
    if p.ndim != 1 or p.size < 3:
        raise SynthError("profile must be 1-D with at least 3 samples")
    k = int(np.argmax(p))
    if k == 0 or k == p.size - 1:
        raise SynthError("profile maximum lies on an edge")
    half = p[k] / 2.0

    def cross(idx_range) -> float:
        prev = k
        for i in idx_range:
            if p[i] <= half:
                # interpolate between i and prev
                frac = (half - p[i]) / (p[prev] - p[i])
                return i + (prev - i) * frac
            prev = i
        raise SynthError("no half-power crossing found")

    left = cross(range(k - 1, -1, -1))
    right = cross(range(k + 1, p.size))
    return float(right - left)
