"""Backscatter calibration against an externally supplied ocean reference.

The reference factor represents the expected sigma0 of a constant-wind
ocean surface and is supplied as data (a scalar or an incidence-angle
table), never computed from a geophysical model here. Because sigma0 is
a power quantity and the vignette holds complex amplitude, each sample
is divided by the square root of the reference factor, so downstream
intensity equals calibrated sigma0.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .raster_model import ComplexVignette


class CalibrationError(ValueError):
    pass


@dataclass(frozen=True)
class ReferenceProfile:
    """Scalar reference or a sorted (incidence_deg, sigma0_linear) table."""

    kind: str = "scalar"  # "scalar" | "incidence_table"
    scalar_value: float = 1.0
    table: Optional[tuple] = None  # tuple[(angle_deg, sigma0_linear), ...]

    def __post_init__(self):
        if self.kind == "scalar":
            if not (self.scalar_value > 0):
                raise CalibrationError(f"scalar reference must be > 0, got {self.scalar_value}")
        elif self.kind == "incidence_table":
            t = tuple((float(a), float(s)) for a, s in (self.table or ()))
            if len(t) < 2:
                raise CalibrationError("incidence table needs at least 2 entries")
            angles = [a for a, _ in t]
            if any(b <= a for a, b in zip(angles, angles[1:])):
                raise CalibrationError("table angles must be strictly increasing")
            if any(s <= 0 for _, s in t):
                raise CalibrationError("all reference sigma0 values must be > 0")
            object.__setattr__(self, "table", t)
        else:
            raise CalibrationError(f"unknown profile kind {self.kind!r}")

    @staticmethod
    def unit() -> "ReferenceProfile":
        return ReferenceProfile(kind="scalar", scalar_value=1.0)

    @staticmethod
    def from_pairs(pairs: Sequence[Sequence[float]]) -> "ReferenceProfile":
        """Build a table profile from JSON-style [angle_deg, sigma0] pairs."""
        return ReferenceProfile(kind="incidence_table", table=tuple(tuple(p) for p in pairs))


def reference_factor(profile: ReferenceProfile, incidence_angle_deg: float) -> float:
    """Reference sigma0 (linear power) at the given incidence angle.

    Table profiles interpolate linearly between bracketing entries and
    refuse to extrapolate outside the table range.
    """
    if profile.kind == "scalar":
        return profile.scalar_value
    angles = np.array([a for a, _ in profile.table])
    values = np.array([s for _, s in profile.table])
    if not (angles[0] <= incidence_angle_deg <= angles[-1]):
        raise CalibrationError(
            f"incidence angle {incidence_angle_deg} deg outside table range "
            f"[{angles[0]}, {angles[-1]}]"
        )
    return float(np.interp(incidence_angle_deg, angles, values))


def calibrate(v: ComplexVignette, profile: ReferenceProfile) -> ComplexVignette:
    """Divide the vignette by the per-column amplitude reference.

    Column j is scaled by 1/sqrt(reference_factor(profile, theta_j));
    dimensions and spacing metadata are unchanged.
    """
    inc = v.incidence_per_column()
    factors = np.empty(v.n_rg)
    for j, theta in enumerate(inc):
        try:
            factors[j] = reference_factor(profile, theta)
        except CalibrationError as e:
            raise CalibrationError(f"range column {j}: {e}") from e
    scale = (1.0 / np.sqrt(factors)).astype(
        np.float32 if v.data.dtype == np.complex64 else np.float64
    )
    return v.with_data(v.data * scale[np.newaxis, :], id_suffix="")
