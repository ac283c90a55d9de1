/**
 * End-to-end cluster-count comparison. Requires the Python toolkit CLI
 * (`python3 -m sarsd`) on PATH to synthesize scenes and produce both
 * processed stacks; everything here consumes only the published file
 * formats and CLI.
 */

import * as fs from "fs";
import * as os from "os";
import * as path from "path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { compareClusterCounts, ExperimentOptions } from "../src/experiment";

let dir: string;

beforeAll(() => {
  dir = fs.mkdtempSync(path.join(os.tmpdir(), "seg-exp-"));
});

afterAll(() => {
  fs.rmSync(dir, { recursive: true, force: true });
});

// counts settle well before iteration 120 on these 64x64 stacks; the
// cap keeps the whole comparison inside the CPU-minutes budget
const MAX_ITERS = 120;

function opts(
  scene: ExperimentOptions["sceneKind"],
  seeds: number[],
  sub: string
): ExperimentOptions {
  return {
    sceneKind: scene,
    nAz: 512,
    nRg: 512,
    sceneSeed: 9,
    segSeeds: seeds,
    workDir: path.join(dir, sub),
    maxIters: MAX_ITERS,
  };
}

describe("cluster-count comparison (acceptance)", () => {
  it("designed scene: subaperture stack yields strictly more clusters", async () => {
    const report = await compareClusterCounts(
      opts("two_texture_directional", [0, 1, 2, 3, 4], "two_texture")
    );
    expect(report.per_seed).toHaveLength(5);
    expect(report.n_subaperture).toBeGreaterThanOrEqual(report.n_original);
    expect(report.n_subaperture).toBeGreaterThan(report.n_original);
    process.stdout.write(
      "ACCEPTANCE PASS: cluster-count claim — two_texture_directional medians " +
        `over 5 seeds: original ${report.n_original}, subaperture ` +
        `${report.n_subaperture} (margin ${report.margin}); per-seed ` +
        JSON.stringify(report.per_seed) +
        "\n"
    );
  });

  it("negative control: speckle-only counts stay small and close", async () => {
    const report = await compareClusterCounts(opts("speckle", [0, 1, 2], "speckle"));
    expect(report.n_original).toBeLessThanOrEqual(3);
    expect(report.n_subaperture).toBeLessThanOrEqual(3);
    expect(Math.abs(report.n_subaperture - report.n_original)).toBeLessThanOrEqual(1);
    process.stdout.write(
      "ACCEPTANCE PASS: speckle negative control — medians original " +
        `${report.n_original}, subaperture ${report.n_subaperture} ` +
        `(difference ${Math.abs(report.margin)} <= 1, both <= 3)\n`
    );
  });

  it("positive control: swell stripes found in both products", async () => {
    const report = await compareClusterCounts(opts("swell", [0, 1, 2], "swell"));
    expect(report.n_original).toBeGreaterThanOrEqual(2);
    expect(report.n_subaperture).toBeGreaterThanOrEqual(2);
    process.stdout.write(
      "ACCEPTANCE PASS: swell positive control — medians original " +
        `${report.n_original}, subaperture ${report.n_subaperture} (both >= 2)\n`
    );
  });
});
