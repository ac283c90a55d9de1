"""Batch orchestration: staged single-vignette runs with wall-clock
timing, and a worker-pool batch driver whose output is independent of
the parallelism degree.
"""

from __future__ import annotations

import json
import os
import time
import traceback
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from statistics import mean, median

import numpy as np

from . import multilook, sd_core, vignette_io
from .calibration import ReferenceProfile, calibrate
from .raster_model import ComplexVignette, ProcessedStack, SdConfig

STAGE_KEYS = ("calibrate", "fft", "compensate", "window", "ifft", "multilook", "io")


class _StageClock:
    """Accumulates monotonic wall time per pipeline stage."""

    def __init__(self):
        self.ms = {k: 0.0 for k in STAGE_KEYS}

    def add(self, key: str, t0: float) -> float:
        t1 = time.perf_counter()
        self.ms[key] += (t1 - t0) * 1e3
        return t1


def run_single(v: ComplexVignette, cfg: SdConfig) -> tuple[ProcessedStack, dict]:
    """Run the full chain on one vignette, returning the ML-ready stack
    and per-stage times in milliseconds.

    Sub-bands are windowed, inverse-transformed and multilooked one at a
    time so only a single full-size complex image per band is alive.
    """
    cfg.check_applicable(v.n_az)
    clock = _StageClock()
    t = time.perf_counter()

    cal = calibrate(v, cfg.calibration or ReferenceProfile.unit())
    t = clock.add("calibrate", t)

    spec = sd_core.center_spectrum(sd_core.azimuth_fft(cal, workers=cfg.fft_workers))
    t = clock.add("fft", t)

    if cfg.compensate_transmit_window:
        spec = sd_core.compensate_hamming(spec, cfg.hamming_coefficient)
    t = clock.add("compensate", t)

    bands = sd_core.make_bands(v.n_az, cfg.n_subapertures, cfg.hamming_coefficient)

    channels = []
    labels = []
    if cfg.include_original_channel:
        t = time.perf_counter()
        channels.append(multilook.multilook_channel(cal.data, cfg))
        clock.add("multilook", t)
        labels.append("O")
    for band in bands:
        t = time.perf_counter()
        sub_spec = sd_core.generate_subaperture_spectra(spec, [band])[0]
        t = clock.add("window", t)
        img = sd_core.azimuth_ifft_all([sub_spec], [band], workers=cfg.fft_workers)
        t = clock.add("ifft", t)
        channels.append(multilook.multilook_channel(img.bands[0][1], cfg))
        clock.add("multilook", t)
        labels.append(f"S{band.index + 1}")

    stack = ProcessedStack(
        channels=tuple(channels),
        channel_labels=tuple(labels),
        out_pixel_spacing_az=v.pixel_spacing_az * cfg.decimation_factor,
        out_pixel_spacing_rg=v.pixel_spacing_rg * cfg.decimation_factor,
        provenance=cfg,
    )
    return stack, clock.ms


def sidecar_for(payload: Path) -> Path:
    return payload.with_suffix(".json")


def discover_inputs(input_dir: Path) -> list[tuple[Path, Path]]:
    """Vignette payloads are *.bin with a same-stem *.json sidecar."""
    pairs = []
    for payload in sorted(Path(input_dir).glob("*.bin")):
        sidecar = sidecar_for(payload)
        if sidecar.exists():
            pairs.append((payload, sidecar))
    return pairs


def _process_one(args) -> dict:
    payload, sidecar, out_dir, cfg_json = args
    cfg = vignette_io.config_from_json(cfg_json)
    entry = {"input": str(payload), "id": None, "output": None}
    try:
        t0 = time.perf_counter()
        v = vignette_io.read_vignette(payload, sidecar)
        io_ms = (time.perf_counter() - t0) * 1e3
        entry["id"] = v.id or payload.stem
    except Exception as e:
        return {**entry, "error": {"stage": "read", "message": str(e)}}
    try:
        stack, stage_ms = run_single(v, cfg)
    except sd_core.StageError as e:
        return {**entry, "error": {"stage": e.stage, "message": str(e)}}
    except Exception as e:
        return {**entry, "error": {"stage": "pipeline", "message": str(e)}}
    try:
        out_payload = Path(out_dir) / f"{payload.stem}_stack.bin"
        t0 = time.perf_counter()
        vignette_io.write_stack(stack, out_payload, sidecar_for(out_payload))
        stage_ms["io"] = io_ms + (time.perf_counter() - t0) * 1e3
    except Exception as e:
        return {**entry, "error": {"stage": "write", "message": str(e)}}
    entry["output"] = str(out_payload)
    entry["stage_ms"] = {k: round(v, 3) for k, v in stage_ms.items()}
    entry["total_ms"] = round(sum(stage_ms.values()), 3)
    return entry


def _aggregate(entries: list[dict]) -> dict:
    agg = {}
    for key in (*STAGE_KEYS, "total"):
        values = [
            e["total_ms"] if key == "total" else e["stage_ms"][key]
            for e in entries
            if "error" not in e
        ]
        if values:
            agg[key] = {
                "mean_ms": round(mean(values), 3),
                "median_ms": round(median(values), 3),
                "p95_ms": round(float(np.percentile(values, 95)), 3),
            }
    return agg


def run_batch(input_dir, output_dir, cfg: SdConfig, parallelism: int = 1) -> dict:
    """Decompose every vignette in a directory; per-file failures are
    recorded without aborting the batch. Returns the job report."""
    input_dir, output_dir = Path(input_dir), Path(output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)
    pairs = discover_inputs(input_dir)
    cfg_json = vignette_io.config_to_json(cfg)
    jobs = [(p, s, output_dir, cfg_json) for p, s in pairs]

    workers = parallelism if parallelism > 0 else (os.cpu_count() or 1)
    if workers <= 1 or len(jobs) <= 1:
        results = [_process_one(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_process_one, jobs))

    results.sort(key=lambda e: (e["id"] or "", e["input"]))
    entries = [e for e in results if "error" not in e]
    failures = [
        {"input": e["input"], "id": e["id"], **e["error"]} for e in results if "error" in e
    ]
    return {
        "schema_version": 1,
        "n_inputs": len(jobs),
        "n_ok": len(entries),
        "n_failed": len(failures),
        "config": cfg_json,
        "entries": results,
        "aggregate": _aggregate(results),
        "failures": failures,
    }


def bench(n_az: int, n_rg: int, cfg: SdConfig, n_repeats: int = 5, rng_seed: int = 0) -> dict:
    """Time the in-memory pipeline (no disk I/O) on a synthetic speckle
    vignette: 1 warmup run, then per-stage medians over n_repeats."""
    from .synth import SceneSpec, generate

    v = generate(SceneSpec(kind="speckle", n_az=n_az, n_rg=n_rg, rng_seed=rng_seed))
    run_single(v, cfg)  # warmup
    runs = []
    for _ in range(n_repeats):
        _, stage_ms = run_single(v, cfg)
        runs.append(stage_ms)
    report = {
        "size": [n_az, n_rg],
        "n_repeats": n_repeats,
        "stage_median_ms": {
            k: round(median(r[k] for r in runs), 3) for k in STAGE_KEYS if k != "io"
        },
    }
    report["total_median_ms"] = round(
        median(sum(ms for k, ms in r.items() if k != "io") for r in runs), 3
    )
    return report
