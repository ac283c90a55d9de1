/**
 * Cluster-count comparison: segment the same synthetic scene twice,
 * once from the original-resolution product (a single identity-path
 * channel) and once from the 4-subaperture stack, and compare how many
 * clusters the unsupervised method finds in each.
 */

import { spawnSync } from "child_process";
import * as fs from "fs";
import * as path from "path";

import { writeLabelMapPng } from "./png";
import { defaultSegConfig, SegConfig, segment } from "./segmenter";
import { readStack, sidecarFor } from "./stackio";

export interface ExperimentOptions {
  sceneKind: "two_texture_directional" | "speckle" | "swell";
  nAz: number;
  nRg: number;
  sceneSeed: number;
  segSeeds: number[];
  workDir: string;
  maxIters?: number;
  pythonBin?: string;
  writePngs?: boolean;
}

export interface SeedResult {
  seed: number;
  nOriginal: number;
  nSubaperture: number;
}

export interface ExperimentReport {
  scene: string;
  n_original: number; // median over seeds
  n_subaperture: number;
  margin: number;
  per_seed: SeedResult[];
}

// identity path (single rectangular full-band "subaperture") reproduces
// the multilooked original through the exact same pipeline and format
const ORIGINAL_CONFIG = {
  n_subapertures: 1,
  hamming_coefficient: 1.0,
  compensate_transmit_window: false,
  lowpass_size: 8,
  lowpass_coefficient: 0.015625,
  decimation_factor: 8,
};

const SUBAPERTURE_CONFIG = {
  n_subapertures: 4,
  hamming_coefficient: 0.75,
  compensate_transmit_window: true,
  lowpass_size: 8,
  lowpass_coefficient: 0.015625,
  decimation_factor: 8,
};

function runCli(pythonBin: string, args: string[]): void {
  const res = spawnSync(pythonBin, ["-m", "sarsd", ...args], { encoding: "utf-8" });
  if (res.status !== 0) {
    throw new Error(
      `sarsd ${args[0]} failed (exit ${res.status}): ${res.stderr || res.stdout}`
    );
  }
}

export function produceStacks(opts: ExperimentOptions): { original: string; subaperture: string } {
  const python = opts.pythonBin ?? process.env.PYTHON ?? "python3";
  const work = opts.workDir;
  fs.mkdirSync(path.join(work, "in"), { recursive: true });

  const scenePath = path.join(work, "scene.json");
  fs.writeFileSync(
    scenePath,
    JSON.stringify({
      kind: opts.sceneKind,
      n_az: opts.nAz,
      n_rg: opts.nRg,
      rng_seed: opts.sceneSeed,
    })
  );
  const vignette = path.join(work, "in", "scene.bin");
  runCli(python, ["synth", "--spec", scenePath, "--output", vignette]);

  const outputs: Record<string, string> = {};
  for (const [name, cfg] of [
    ["original", ORIGINAL_CONFIG],
    ["subaperture", SUBAPERTURE_CONFIG],
  ] as const) {
    const cfgPath = path.join(work, `${name}_cfg.json`);
    fs.writeFileSync(cfgPath, JSON.stringify(cfg));
    const outDir = path.join(work, name);
    runCli(python, [
      "decompose",
      "--input",
      path.join(work, "in"),
      "--output",
      outDir,
      "--config",
      cfgPath,
    ]);
    outputs[name] = path.join(outDir, "scene_stack.bin");
  }
  return { original: outputs.original, subaperture: outputs.subaperture };
}

async function segmentStack(
  stackPath: string,
  seed: number,
  maxIters: number | undefined,
  pngPath?: string
): Promise<number> {
  const stack = readStack(stackPath, sidecarFor(stackPath));
  const cfg: SegConfig = {
    ...defaultSegConfig,
    nChannelsIn: stack.channels.length,
    rngSeed: seed,
    maxIters: maxIters ?? defaultSegConfig.maxIters,
  };
  const { labelMap } = await segment(stack.channels, stack.height, stack.width, cfg);
  if (pngPath) {
    writeLabelMapPng(pngPath, labelMap);
  }
  return labelMap.nUnique;
}

function median(values: number[]): number {
  const sorted = [...values].sort((a, b) => a - b);
  const mid = Math.floor(sorted.length / 2);
  return sorted.length % 2 ? sorted[mid] : (sorted[mid - 1] + sorted[mid]) / 2;
}

export async function compareClusterCounts(opts: ExperimentOptions): Promise<ExperimentReport> {
  const stacks = produceStacks(opts);
  const perSeed: SeedResult[] = [];
  for (const seed of opts.segSeeds) {
    const png = opts.writePngs
      ? (name: string) => path.join(opts.workDir, `labels_${name}_seed${seed}.png`)
      : () => undefined;
    const nOriginal = await segmentStack(stacks.original, seed, opts.maxIters, png("original"));
    const nSubaperture = await segmentStack(
      stacks.subaperture,
      seed,
      opts.maxIters,
      png("subaperture")
    );
    perSeed.push({ seed, nOriginal, nSubaperture });
  }
  const report: ExperimentReport = {
    scene: opts.sceneKind,
    n_original: median(perSeed.map((r) => r.nOriginal)),
    n_subaperture: median(perSeed.map((r) => r.nSubaperture)),
    margin: 0,
    per_seed: perSeed,
  };
  report.margin = report.n_subaperture - report.n_original;
  return report;
}
