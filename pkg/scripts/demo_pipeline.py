#!/usr/bin/env python3
"""End-to-end demo: synthesize scenes, decompose them, render previews.

Writes everything under ./demo_out (override with --out).
"""

import argparse
import json
import subprocess
import sys
from pathlib import Path

SCENES = {
    "speckle": {"kind": "speckle", "n_az": 512, "n_rg": 512, "rng_seed": 7},
    "swell": {
        "kind": "swell",
        "n_az": 512,
        "n_rg": 512,
        "rng_seed": 7,
        "wavelength_m": 300.0,
        "direction_deg": 30.0,
        "modulation_depth": 0.7,
    },
    "two_texture": {
        "kind": "two_texture_directional",
        "n_az": 512,
        "n_rg": 512,
        "rng_seed": 7,
    },
}

CONFIG = {
    "n_subapertures": 4,
    "hamming_coefficient": 0.75,
    "lowpass_size": 4,
    "lowpass_coefficient": 0.0625,
    "decimation_factor": 4,
    "include_original_channel": True,
}


def run(*args):
    cmd = [sys.executable, "-m", "sarsd", *map(str, args)]
    print("+", " ".join(cmd))
    subprocess.run(cmd, check=True)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="demo_out")
    args = ap.parse_args()
    out = Path(args.out)
    (out / "in").mkdir(parents=True, exist_ok=True)

    cfg_path = out / "config.json"
    cfg_path.write_text(json.dumps(CONFIG, indent=2))
    for name, scene in SCENES.items():
        spec_path = out / f"{name}_scene.json"
        spec_path.write_text(json.dumps(scene))
        run("synth", "--spec", spec_path, "--output", out / "in" / f"{name}.bin")

    run("decompose", "--input", out / "in", "--output", out / "stacks", "--config", cfg_path)
    for name in SCENES:
        run(
            "render",
            "--input",
            out / "stacks" / f"{name}_stack.bin",
            "--output",
            out / "png" / name,
            "--stretch",
            "log",
        )
    print(f"done; inspect {out}/png and {out}/stacks/job_report.json")


if __name__ == "__main__":
    main()
