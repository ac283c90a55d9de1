"""Bit-exact file formats for vignettes and processed stacks.

Payloads are headerless little-endian sample dumps (row-major,
azimuth-major for vignettes, channel-major for stacks); a UTF-8 JSON
sidecar carries dtype/shape/metadata. Unknown sidecar fields are
ignored on read and never emitted on write. NPY import (version 1.0,
C-order, complex64/complex128/float32) is supported for convenience.
"""

from __future__ import annotations

import dataclasses
import json
import sys
from pathlib import Path
from typing import Any, Optional

import numpy as np
from PIL import Image

from .calibration import ReferenceProfile
from .raster_model import ComplexVignette, ProcessedStack, RasterModelError, SdConfig

SCHEMA_VERSION = 1

_DTYPES = {
    "c64": np.dtype("<c8"),  # interleaved float32 pairs
    "c128": np.dtype("<c16"),  # interleaved float64 pairs
    "f32": np.dtype("<f4"),
    "f64": np.dtype("<f8"),
}
_DTYPE_NAMES = {v: k for k, v in _DTYPES.items()}


class FormatError(ValueError):
    pass


def _dtype_name(dtype: np.dtype) -> str:
    key = np.dtype(dtype).newbyteorder("<")
    if key not in _DTYPE_NAMES:
        raise FormatError(f"unsupported dtype {dtype}")
    return _DTYPE_NAMES[key]


# ---------------------------------------------------------------------------
# config / profile serialization


def profile_to_json(p: ReferenceProfile) -> dict:
    if p.kind == "scalar":
        return {"kind": "scalar", "scalar_value": p.scalar_value}
    return {"kind": "incidence_table", "table": [list(pair) for pair in p.table]}


def profile_from_json(d: dict) -> ReferenceProfile:
    if d.get("kind") == "incidence_table":
        return ReferenceProfile.from_pairs(d["table"])
    return ReferenceProfile(kind="scalar", scalar_value=float(d.get("scalar_value", 1.0)))


def config_to_json(cfg: SdConfig) -> dict:
    d = dataclasses.asdict(cfg)
    d["calibration"] = profile_to_json(cfg.calibration) if cfg.calibration else None
    return d


def config_from_json(d: dict) -> SdConfig:
    known = {f.name for f in dataclasses.fields(SdConfig)}
    kwargs = {k: v for k, v in d.items() if k in known}
    if kwargs.get("calibration") is not None:
        kwargs["calibration"] = profile_from_json(kwargs["calibration"])
    return SdConfig(**kwargs)


# ---------------------------------------------------------------------------
# sidecar


def _write_sidecar(path: Path, meta: dict) -> None:
    path.write_text(json.dumps(meta, indent=2) + "\n", encoding="utf-8")


def _read_sidecar(path: Path) -> dict:
    try:
        meta = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as e:
        raise FormatError(f"cannot read sidecar {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise FormatError(f"sidecar {path} is not valid JSON: {e}") from e
    version = meta.get("schema_version")
    if version != SCHEMA_VERSION:
        raise FormatError(f"unsupported schema_version {version!r} in {path} (expected {SCHEMA_VERSION})")
    return meta


def _read_payload(path: Path, dtype_name: str, shape: list[int]) -> np.ndarray:
    if dtype_name not in _DTYPES:
        raise FormatError(f"unknown dtype {dtype_name!r}")
    dtype = _DTYPES[dtype_name]
    try:
        raw = Path(path).read_bytes()
    except OSError as e:
        raise FormatError(f"cannot read payload {path}: {e}") from e
    expected = int(np.prod(shape)) * dtype.itemsize
    if len(raw) != expected:
        raise FormatError(
            f"payload {path}: size mismatch, expected {expected} bytes for shape "
            f"{shape} {dtype_name}, actual {len(raw)}"
        )
    return np.frombuffer(raw, dtype=dtype).reshape(shape)


def _write_payload(path: Path, data: np.ndarray) -> None:
    arr = np.ascontiguousarray(data).astype(data.dtype.newbyteorder("<"), copy=False)
    try:
        Path(path).write_bytes(arr.tobytes())
    except OSError as e:
        raise FormatError(f"cannot write payload {path}: {e}") from e


# ---------------------------------------------------------------------------
# vignettes


def write_vignette(v: ComplexVignette, raster_path, sidecar_path) -> None:
    _write_payload(Path(raster_path), v.data)
    inc = v.incidence_angle_deg
    meta = {
        "schema_version": SCHEMA_VERSION,
        "dtype": _dtype_name(v.data.dtype),
        "shape": [v.n_az, v.n_rg],
        "byte_order": "little",
        "pixel_spacing_az": v.pixel_spacing_az,
        "pixel_spacing_rg": v.pixel_spacing_rg,
        "incidence_angle_deg": inc.tolist() if isinstance(inc, np.ndarray) else inc,
        "id": v.id,
    }
    _write_sidecar(Path(sidecar_path), meta)


def read_vignette(raster_path, sidecar_path) -> ComplexVignette:
    meta = _read_sidecar(Path(sidecar_path))
    shape = meta["shape"]
    if len(shape) != 2:
        raise FormatError(f"vignette shape must be 2-D, got {shape}")
    data = _read_payload(Path(raster_path), meta["dtype"], shape)
    if meta["dtype"] not in ("c64", "c128"):
        raise FormatError(f"vignette payload must be complex, got {meta['dtype']}")
    finite = np.isfinite(data.real) & np.isfinite(data.imag)
    if not finite.all():
        i, j = np.argwhere(~finite)[0]
        raise FormatError(f"payload {raster_path}: non-finite sample at ({i}, {j})")
    inc = meta.get("incidence_angle_deg", 0.0)
    return ComplexVignette(
        data=data,
        pixel_spacing_az=float(meta["pixel_spacing_az"]),
        pixel_spacing_rg=float(meta["pixel_spacing_rg"]),
        incidence_angle_deg=np.asarray(inc, dtype=np.float64) if isinstance(inc, list) else float(inc),
        id=str(meta.get("id", "")),
    )


def import_npy(npy_path, pixel_spacing_az=5.0, pixel_spacing_rg=5.0, incidence_angle_deg=0.0, id="") -> ComplexVignette:
    """Load a vignette from a version-1.0 NPY file (C-order only)."""
    with open(npy_path, "rb") as fh:
        version = np.lib.format.read_magic(fh)
        if version != (1, 0):
            raise FormatError(f"NPY version {version} unsupported (only 1.0)")
        shape, fortran, dtype = np.lib.format.read_array_header_1_0(fh)
        if fortran:
            raise FormatError("Fortran-order NPY not supported")
        if dtype not in (np.complex64, np.complex128, np.float32):
            raise FormatError(f"NPY dtype {dtype} unsupported")
        data = np.fromfile(fh, dtype=dtype).reshape(shape)
    if data.dtype == np.float32:
        data = data.astype(np.complex64)
    return ComplexVignette(
        data=data,
        pixel_spacing_az=pixel_spacing_az,
        pixel_spacing_rg=pixel_spacing_rg,
        incidence_angle_deg=incidence_angle_deg,
        id=id or Path(npy_path).stem,
    )


# ---------------------------------------------------------------------------
# processed stacks


def write_stack(s: ProcessedStack, raster_path, sidecar_path) -> None:
    cube = np.stack([np.asarray(c) for c in s.channels], axis=0)
    _write_payload(Path(raster_path), cube)
    meta = {
        "schema_version": SCHEMA_VERSION,
        "dtype": _dtype_name(cube.dtype),
        "shape": list(cube.shape),
        "byte_order": "little",
        "pixel_spacing_az": s.out_pixel_spacing_az,
        "pixel_spacing_rg": s.out_pixel_spacing_rg,
        "channel_labels": list(s.channel_labels),
        "provenance": config_to_json(s.provenance) if s.provenance else None,
    }
    _write_sidecar(Path(sidecar_path), meta)


def read_stack(raster_path, sidecar_path) -> ProcessedStack:
    meta = _read_sidecar(Path(sidecar_path))
    shape = meta["shape"]
    if len(shape) != 3:
        raise FormatError(f"stack shape must be [n_channels, n_az, n_rg], got {shape}")
    cube = _read_payload(Path(raster_path), meta["dtype"], shape)
    labels = meta.get("channel_labels") or [f"C{i}" for i in range(shape[0])]
    prov = meta.get("provenance")
    return ProcessedStack(
        channels=tuple(cube[i] for i in range(shape[0])),
        channel_labels=tuple(labels),
        out_pixel_spacing_az=float(meta["pixel_spacing_az"]),
        out_pixel_spacing_rg=float(meta["pixel_spacing_rg"]),
        provenance=config_from_json(prov) if prov else None,
    )


# ---------------------------------------------------------------------------
# rendering


def render_png(image: np.ndarray, path, stretch: str = "linear") -> None:
    """8-bit grayscale PNG with a p1/p99 percentile stretch.

    ``log`` applies 10*log10(x + 1e-10) first (speckle's heavy tail
    makes a min/max stretch useless). An all-constant image renders as
    uniform mid-gray.
    """
    img = np.asarray(image, dtype=np.float64)
    if not np.isfinite(img).all():
        raise FormatError("render_png requires a finite image")
    if stretch == "log":
        if (img < 0).any():
            raise FormatError("log stretch requires a non-negative image")
        img = 10.0 * np.log10(img + 1e-10)
    elif stretch != "linear":
        raise FormatError(f"unknown stretch {stretch!r}")
    lo, hi = np.percentile(img, [1.0, 99.0])
    if hi > lo:
        out = np.clip((img - lo) / (hi - lo) * 255.0, 0.0, 255.0)
    else:
        out = np.full_like(img, 128.0)
    Image.fromarray(out.astype(np.uint8), mode="L").save(str(path))
