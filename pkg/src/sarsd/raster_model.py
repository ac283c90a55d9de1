"""Core in-memory raster types shared by the whole pipeline.

Layout convention: every 2-D array is row-major with azimuth along rows
(axis 0) and range along columns (axis 1). Azimuth FFTs therefore run
down columns; windowing multiplies whole rows.

All types are immutable after construction (backing arrays are marked
read-only) and validate their invariants on construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import TYPE_CHECKING, Optional, Sequence

import numpy as np

if TYPE_CHECKING:
    from .calibration import ReferenceProfile

COMPLEX_DTYPES = (np.complex64, np.complex128)


class RasterModelError(ValueError):
    """Raised when a raster type is constructed with violated invariants."""

    def __init__(self, violations: list[str]):
        self.violations = list(violations)
        super().__init__("; ".join(violations))


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.flags.writeable = False
    return a


def validate(vignette: "ComplexVignette") -> list[str]:
    """Check every ComplexVignette invariant; returns [] when valid.

    Violations are reported as human-readable strings with location info
    (first offending index for non-finite samples). Never mutates input.
    """
    v: list[str] = []
    data = np.asarray(vignette.data)
    if data.ndim != 2:
        v.append(f"data must be 2-D, got ndim={data.ndim}")
        return v
    n_az, n_rg = data.shape
    if n_az < 2:
        v.append(f"n_az must be >= 2, got {n_az}")
    if n_rg < 1:
        v.append(f"n_rg must be >= 1, got {n_rg}")
    if data.dtype not in COMPLEX_DTYPES:
        v.append(f"data dtype must be complex64 or complex128, got {data.dtype}")
    else:
        finite = np.isfinite(data.real) & np.isfinite(data.imag)
        if not finite.all():
            i, j = np.argwhere(~finite)[0]
            v.append(f"non-finite sample at ({i}, {j})")
    if not (vignette.pixel_spacing_az > 0):
        v.append(f"pixel_spacing_az must be > 0, got {vignette.pixel_spacing_az}")
    if not (vignette.pixel_spacing_rg > 0):
        v.append(f"pixel_spacing_rg must be > 0, got {vignette.pixel_spacing_rg}")
    inc = np.atleast_1d(np.asarray(vignette.incidence_angle_deg, dtype=np.float64))
    if inc.ndim != 1 or inc.size not in (1, data.shape[1] if data.ndim == 2 else -1):
        v.append(
            "incidence_angle_deg must be a scalar or one value per range column, "
            f"got shape {inc.shape}"
        )
    if not np.isfinite(inc).all():
        v.append("incidence_angle_deg contains non-finite values")
    return v


@dataclass(frozen=True)
class ComplexVignette:
    """Single-look complex azimuth x range raster with acquisition metadata."""

    data: np.ndarray
    pixel_spacing_az: float
    pixel_spacing_rg: float
    incidence_angle_deg: float | np.ndarray = 0.0
    id: str = ""

    def __post_init__(self):
        object.__setattr__(self, "data", _freeze(self.data))
        violations = validate(self)
        if violations:
            raise RasterModelError(violations)

    @property
    def n_az(self) -> int:
        return self.data.shape[0]

    @property
    def n_rg(self) -> int:
        return self.data.shape[1]

    def incidence_per_column(self) -> np.ndarray:
        """Incidence angle broadcast to one value per range column."""
        inc = np.atleast_1d(np.asarray(self.incidence_angle_deg, dtype=np.float64))
        if inc.size == 1:
            return np.full(self.n_rg, inc[0])
        return inc

    def with_data(self, data: np.ndarray, id_suffix: str = "") -> "ComplexVignette":
        return replace(self, data=data, id=self.id + id_suffix)


@dataclass(frozen=True)
class AzimuthSpectrum:
    """Complex raster in (azimuth-frequency x range) domain.

    ``centered`` records whether the zero-frequency bin sits at row
    n_az//2 (True) or row 0, natural FFT order (False). Only the
    fft/shift operations in sd_core construct this type, which keeps the
    flag consistent with the actual layout.
    """

    data: np.ndarray
    centered: bool
    source_id: str = ""

    def __post_init__(self):
        data = np.asarray(self.data)
        if data.ndim != 2 or data.dtype not in COMPLEX_DTYPES:
            raise RasterModelError(
                [f"spectrum must be 2-D complex, got shape {data.shape} dtype {data.dtype}"]
            )
        object.__setattr__(self, "data", _freeze(data))

    @property
    def n_az(self) -> int:
        return self.data.shape[0]

    @property
    def n_rg(self) -> int:
        return self.data.shape[1]


@dataclass(frozen=True)
class BandDescriptor:
    """Half-open row interval [start_row, end_row) of one sub-band."""

    index: int
    start_row: int
    end_row: int
    center_row: int
    window_coefficient: float

    def __post_init__(self):
        v = []
        if not (0 <= self.start_row < self.end_row):
            v.append(f"band {self.index}: need 0 <= start < end, got [{self.start_row}, {self.end_row})")
        if not (0.5 < self.window_coefficient <= 1.0):
            v.append(f"band {self.index}: window_coefficient must be in (0.5, 1.0], got {self.window_coefficient}")
        if v:
            raise RasterModelError(v)

    @property
    def width(self) -> int:
        return self.end_row - self.start_row


@dataclass(frozen=True)
class SubapertureStack:
    """N co-registered complex subaperture images plus their band descriptors."""

    bands: tuple  # tuple[(BandDescriptor, ndarray), ...]
    source_id: str = ""

    def __post_init__(self):
        bands = tuple((d, _freeze(np.asarray(a))) for d, a in self.bands)
        if not bands:
            raise RasterModelError(["stack must contain at least one band"])
        shapes = {a.shape for _, a in bands}
        if len(shapes) != 1:
            raise RasterModelError([f"member arrays differ in shape: {sorted(shapes)}"])
        object.__setattr__(self, "bands", bands)

    def __len__(self) -> int:
        return len(self.bands)

    @property
    def shape(self) -> tuple[int, int]:
        return self.bands[0][1].shape


@dataclass(frozen=True)
class ProcessedStack:
    """Decimated intensity channels, the ML-ready product."""

    channels: tuple  # tuple[ndarray, ...], real non-negative
    channel_labels: tuple  # tuple[str, ...]
    out_pixel_spacing_az: float
    out_pixel_spacing_rg: float
    provenance: Optional["SdConfig"] = None

    def __post_init__(self):
        channels = tuple(_freeze(np.asarray(c)) for c in self.channels)
        labels = tuple(self.channel_labels)
        v = []
        if len(channels) != len(labels):
            v.append(f"{len(channels)} channels but {len(labels)} labels")
        if len(set(labels)) != len(labels):
            v.append(f"channel labels not unique: {labels}")
        shapes = {c.shape for c in channels}
        if len(shapes) > 1:
            v.append(f"channel shapes differ: {sorted(shapes)}")
        for lbl, c in zip(labels, channels):
            if c.ndim != 2 or c.dtype.kind != "f":
                v.append(f"channel {lbl}: must be 2-D real, got shape {c.shape} dtype {c.dtype}")
            elif not np.isfinite(c).all() or (c < 0).any():
                v.append(f"channel {lbl}: values must be finite and >= 0")
        if v:
            raise RasterModelError(v)
        object.__setattr__(self, "channels", channels)
        object.__setattr__(self, "channel_labels", labels)

    @property
    def shape(self) -> tuple[int, int]:
        return self.channels[0].shape


@dataclass(frozen=True)
class SdConfig:
    """Every tunable of the subaperture-decomposition pipeline.

    Defaults follow the reference processing chain: 4 subapertures,
    0.75 window coefficient, 10x10 unit-gain low-pass, 1/10 decimation.
    """

    n_subapertures: int = 4
    hamming_coefficient: float = 0.75
    compensate_transmit_window: bool = True
    lowpass_size: int = 10
    lowpass_coefficient: float = 0.01
    decimation_factor: int = 10
    include_original_channel: bool = False
    calibration: Optional["ReferenceProfile"] = None
    fft_workers: int = 1

    def __post_init__(self):
        v = []
        if self.n_subapertures < 1:
            v.append(f"n_subapertures must be >= 1, got {self.n_subapertures}")
        if not (0.5 < self.hamming_coefficient <= 1.0):
            v.append(f"hamming_coefficient must be in (0.5, 1.0], got {self.hamming_coefficient}")
        if self.lowpass_size < 1:
            v.append(f"lowpass_size must be >= 1, got {self.lowpass_size}")
        if self.decimation_factor < 1:
            v.append(f"decimation_factor must be >= 1, got {self.decimation_factor}")
        # unit kernel gain: coefficient * size^2 == 1 keeps the low-pass an
        # exact moving average
        gain = self.lowpass_coefficient * self.lowpass_size**2
        if abs(gain - 1.0) > 1e-12:
            v.append(
                f"lowpass_coefficient * lowpass_size^2 must be 1 (unit gain), got {gain!r}"
            )
        if v:
            raise RasterModelError(v)

    def check_applicable(self, n_az: int) -> None:
        """Apply-time constraint: each sub-band must span >= 4 spectrum rows."""
        if self.n_subapertures > n_az // 4:
            raise RasterModelError(
                [f"n_subapertures={self.n_subapertures} too large for n_az={n_az} (max {n_az // 4})"]
            )
