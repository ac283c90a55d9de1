"""Intensity computation, uniform low-pass filtering and decimation.

Filtering is valid-mode (no padding): the output shrinks by size-1 per
dimension, so the final product has ceil((H-size+1)/factor) rows, which
with the default size == factor is exactly floor(H/factor). The
kernel is constant-coefficient; with the defaults (10x10, 0.01) it sums
to 1 and the filter is an exact moving average.
"""

from __future__ import annotations

import numpy as np

from .raster_model import RasterModelError, SdConfig


def intensity(img: np.ndarray) -> np.ndarray:
    """Per-sample power |z|^2 = re^2 + im^2."""
    img = np.asarray(img)
    if np.iscomplexobj(img):
        return img.real**2 + img.imag**2
    return img.astype(np.float64) ** 2 if img.dtype.kind != "f" else img**2


def _moving_sum(x: np.ndarray, size: int, axis: int) -> np.ndarray:
    """Valid-mode running-sum along one axis with float64 accumulation."""
    x = np.moveaxis(x, axis, 0)
    n_out = x.shape[0] - size + 1
    out = np.empty((n_out,) + x.shape[1:], dtype=x.dtype)
    acc = x[:size].sum(axis=0, dtype=np.float64)
    out[0] = acc
    for i in range(1, n_out):
        acc += x[i + size - 1]
        acc -= x[i - 1]
        out[i] = acc
    return np.moveaxis(out, 0, axis)


def boxcar_lowpass(img: np.ndarray, size: int, coefficient: float) -> np.ndarray:
    """Valid-mode correlation with a size x size constant kernel.

    Implemented as a separable two-pass moving average with running
    sums, O(HW) regardless of kernel size.
    """
    img = np.asarray(img)
    h, w = img.shape
    if size < 1:
        raise RasterModelError([f"lowpass size must be >= 1, got {size}"])
    if size > min(h, w):
        raise RasterModelError([f"lowpass size {size} exceeds image dims {h}x{w}"])
    out = _moving_sum(_moving_sum(img, size, axis=0), size, axis=1)
    out *= np.asarray(coefficient, dtype=out.dtype)
    return out


def decimate(img: np.ndarray, factor: int) -> np.ndarray:
    """Pure subsampling: out[i, j] = in[i*factor, j*factor].

    Every in-range sample is kept, so the output has ceil(H/factor)
    rows; composed after the valid-mode boxcar with the default
    size == factor this yields exactly floor(H/factor) output rows for
    any input height H.
    """
    if factor < 1:
        raise RasterModelError([f"decimation factor must be >= 1, got {factor}"])
    return np.ascontiguousarray(np.asarray(img)[::factor, ::factor])


def multilook_channel(img: np.ndarray, cfg: SdConfig) -> np.ndarray:
    """Intensity, low-pass and decimation of one complex channel.

    Equals decimate(boxcar_lowpass(intensity(img), size, coef), factor);
    when the decimated grid makes the kernel windows non-overlapping a
    block-sum fast path is used (same values within float rounding).
    """
    power = intensity(img)
    s, f, c = cfg.lowpass_size, cfg.decimation_factor, cfg.lowpass_coefficient
    h, w = power.shape
    if s > min(h, w):
        raise RasterModelError([f"lowpass size {s} exceeds image dims {h}x{w}"])
    n_az = (h - s + 1 + f - 1) // f
    n_rg = (w - s + 1 + f - 1) // f
    if s <= f and min(n_az, n_rg) > 1:
        # windows at decimated positions are disjoint: paired reduceat
        # segments give the same sums without forming the full filtered image
        rows = _strided_window_sums(power, s, f, n_az, axis=0)
        out = _strided_window_sums(rows, s, f, n_rg, axis=1)
        out *= np.asarray(c, dtype=out.dtype)
        return out
    return decimate(boxcar_lowpass(power, s, c), f)


def _strided_window_sums(x: np.ndarray, size: int, factor: int, n_out: int, axis: int) -> np.ndarray:
    starts = np.arange(n_out) * factor
    if size == factor and starts[-1] + size == np.moveaxis(x, axis, 0).shape[0]:
        idx = starts
    else:
        idx = np.empty(2 * n_out, dtype=np.intp)
        idx[0::2] = starts
        idx[1::2] = starts + size
    sums = np.add.reduceat(np.moveaxis(x, axis, 0).astype(np.float64, copy=False), idx, axis=0)
    if len(idx) != n_out:
        sums = sums[0::2]
    return np.moveaxis(sums, 0, axis).astype(x.dtype, copy=False)
