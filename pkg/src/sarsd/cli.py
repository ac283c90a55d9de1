"""Command-line surface: decompose, synth, render, bench, inspect.

Exit codes: 0 success, 1 partial failures in a batch, 2 config or
usage errors. CLI flags override config-file fields one-for-one.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

from . import pipeline, vignette_io
from .raster_model import RasterModelError, SdConfig
from .synth import SceneSpec, generate
from .vignette_io import FormatError

PAPER_CPU_MS = 60.0  # reported SD overhead on an i9-class CPU
TARGET_TOTAL_MS = 500.0


def _load_config(path, overrides: dict) -> SdConfig:
    doc = {}
    if path:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    doc.update({k: v for k, v in overrides.items() if v is not None})
    return vignette_io.config_from_json(doc)


def _cmd_decompose(args) -> int:
    overrides = {
        "n_subapertures": args.subapertures,
        "include_original_channel": args.include_original,
    }
    try:
        cfg = _load_config(args.config, overrides)
    except (RasterModelError, json.JSONDecodeError, OSError) as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    report = pipeline.run_batch(args.input, args.output, cfg, parallelism=args.parallelism)
    report_path = Path(args.output) / "job_report.json"
    report_path.write_text(json.dumps(report, indent=2) + "\n", encoding="utf-8")
    print(
        f"processed {report['n_ok']}/{report['n_inputs']} vignettes "
        f"({report['n_failed']} failed); report: {report_path}"
    )
    for f in report["failures"]:
        print(f"  FAILED {f['input']} [{f['stage']}] {f['message']}", file=sys.stderr)
    return 0 if report["n_failed"] == 0 else 1


def _cmd_synth(args) -> int:
    try:
        doc = json.loads(Path(args.spec).read_text(encoding="utf-8"))
        if args.seed is not None:
            doc["rng_seed"] = args.seed
        spec = SceneSpec(**doc)
    except TypeError as e:
        print(f"config error in scene spec: {e}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    v = generate(spec)
    out = Path(args.output)
    out.parent.mkdir(parents=True, exist_ok=True)
    vignette_io.write_vignette(v, out, pipeline.sidecar_for(out))
    print(f"wrote {spec.kind} scene {spec.n_az}x{spec.n_rg} to {out}")
    return 0


def _cmd_render(args) -> int:
    try:
        stack = vignette_io.read_stack(args.input, pipeline.sidecar_for(Path(args.input)))
    except FormatError as e:
        print(f"format error: {e}", file=sys.stderr)
        return 2
    out_dir = Path(args.output)
    out_dir.mkdir(parents=True, exist_ok=True)
    labels = stack.channel_labels or [f"C{i}" for i in range(len(stack.channels))]
    for label, channel in zip(labels, stack.channels):
        path = out_dir / f"{label}.png"
        vignette_io.render_png(channel, path, stretch=args.stretch)
        print(f"wrote {path}")
    return 0


def _cmd_bench(args) -> int:
    try:
        n_az, n_rg = (int(p) for p in args.size.lower().split("x"))
        cfg = _load_config(args.config, {})
    except (ValueError, RasterModelError, OSError) as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    report = pipeline.bench(n_az, n_rg, cfg, n_repeats=args.repeats, rng_seed=args.seed or 0)
    total = report["total_median_ms"]
    report["target_total_ms"] = TARGET_TOTAL_MS
    report["paper_reference_cpu_ms"] = PAPER_CPU_MS
    print(json.dumps(report, indent=2))
    print(
        f"total median {total:.1f} ms vs artifact target {TARGET_TOTAL_MS:.0f} ms "
        f"and the reported ~{PAPER_CPU_MS:.0f} ms i9 reference"
    )
    return 0


def _cmd_inspect(args) -> int:
    path = Path(args.input)
    sidecar = path if path.suffix == ".json" else pipeline.sidecar_for(path)
    try:
        meta = json.loads(sidecar.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        print(f"format error: {e}", file=sys.stderr)
        return 2
    print(json.dumps(meta, indent=2))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sarsd", description="Subaperture decomposition toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("decompose", help="run the SD pipeline over a directory of vignettes")
    d.add_argument("--input", required=True, help="directory of *.bin + *.json vignette pairs")
    d.add_argument("--output", required=True, help="output directory for stacks and job report")
    d.add_argument("--config", help="JSON config file (SdConfig fields)")
    d.add_argument("--parallelism", type=int, default=1, help="worker count, 0 = auto")
    d.add_argument("--subapertures", type=int, help="override n_subapertures")
    d.add_argument(
        "--include-original",
        type=lambda s: s.lower() in ("true", "1", "yes"),
        default=None,
        help="prepend the multilooked original as channel O {true|false}",
    )
    d.set_defaults(func=_cmd_decompose)

    s = sub.add_parser("synth", help="generate a synthetic vignette from a scene spec")
    s.add_argument("--spec", required=True, help="SceneSpec JSON file")
    s.add_argument("--output", required=True, help="payload path (.bin); sidecar written alongside")
    s.add_argument("--seed", type=int, help="override rng_seed")
    s.set_defaults(func=_cmd_synth)

    r = sub.add_parser("render", help="render one PNG per stack channel")
    r.add_argument("--input", required=True, help="stack payload path (.bin)")
    r.add_argument("--output", required=True, help="output directory for PNGs")
    r.add_argument("--stretch", choices=("linear", "log"), default="log")
    r.set_defaults(func=_cmd_render)

    b = sub.add_parser("bench", help="time the in-memory pipeline on synthetic speckle")
    b.add_argument("--size", default="4096x4096", help="n_az x n_rg, e.g. 4096x4096")
    b.add_argument("--repeats", type=int, default=5)
    b.add_argument("--config", help="JSON config file")
    b.add_argument("--seed", type=int, default=0)
    b.set_defaults(func=_cmd_bench)

    i = sub.add_parser("inspect", help="print sidecar metadata")
    i.add_argument("--input", required=True, help="payload or sidecar path")
    i.set_defaults(func=_cmd_inspect)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code not in (0, None) else 0
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
