/**
 * CLI: `segment` runs the unsupervised method on one stack file and
 * writes a colorized label map plus a JSON summary; `compare` runs the
 * original-vs-subapertures cluster-count experiment on a synthetic
 * scene.
 */

import * as fs from "fs";
import * as path from "path";
import { parseArgs } from "util";

import { compareClusterCounts, ExperimentOptions } from "./experiment";
import { writeLabelMapPng } from "./png";
import { defaultSegConfig, SegConfig, segment } from "./segmenter";
import { readStack, sidecarFor } from "./stackio";

async function cmdSegment(argv: string[]): Promise<number> {
  const { values } = parseArgs({
    args: argv,
    options: {
      stack: { type: "string" },
      out: { type: "string", default: "labels.png" },
      report: { type: "string" },
      seed: { type: "string", default: "0" },
      "max-iters": { type: "string" },
    },
  });
  if (!values.stack) {
    console.error("usage: segment --stack stack.bin [--out labels.png] [--seed N]");
    return 2;
  }
  const stack = readStack(values.stack, sidecarFor(values.stack));
  const cfg: SegConfig = {
    ...defaultSegConfig,
    nChannelsIn: stack.channels.length,
    rngSeed: Number(values.seed),
    maxIters: values["max-iters"] ? Number(values["max-iters"]) : defaultSegConfig.maxIters,
  };
  const { labelMap, log } = await segment(stack.channels, stack.height, stack.width, cfg);
  writeLabelMapPng(values.out!, labelMap);
  const summary = {
    stack: values.stack,
    channels: stack.labels,
    n_unique: labelMap.nUnique,
    iterations: log.length,
    final_loss: log.length ? log[log.length - 1].loss : null,
  };
  if (values.report) {
    fs.writeFileSync(values.report, JSON.stringify({ ...summary, log }, null, 2));
  }
  console.log(JSON.stringify(summary));
  return 0;
}

async function cmdCompare(argv: string[]): Promise<number> {
  const { values } = parseArgs({
    args: argv,
    options: {
      scene: { type: "string", default: "two_texture_directional" },
      size: { type: "string", default: "512x512" },
      seeds: { type: "string", default: "5" },
      "scene-seed": { type: "string", default: "9" },
      "max-iters": { type: "string" },
      out: { type: "string", default: "compare_out" },
    },
  });
  const [nAz, nRg] = values.size!.split("x").map(Number);
  const opts: ExperimentOptions = {
    sceneKind: values.scene as ExperimentOptions["sceneKind"],
    nAz,
    nRg,
    sceneSeed: Number(values["scene-seed"]),
    segSeeds: Array.from({ length: Number(values.seeds) }, (_, i) => i),
    workDir: values.out!,
    maxIters: values["max-iters"] ? Number(values["max-iters"]) : undefined,
    writePngs: true,
  };
  fs.mkdirSync(opts.workDir, { recursive: true });
  const report = await compareClusterCounts(opts);
  const reportPath = path.join(opts.workDir, "cluster_report.json");
  fs.writeFileSync(reportPath, JSON.stringify(report, null, 2));
  console.log(JSON.stringify(report, null, 2));
  console.log(`report written to ${reportPath}`);
  return 0;
}

async function main(): Promise<number> {
  const [cmd, ...rest] = process.argv.slice(2);
  try {
    if (cmd === "segment") return await cmdSegment(rest);
    if (cmd === "compare") return await cmdCompare(rest);
  } catch (err) {
    console.error(String(err));
    return 1;
  }
  console.error("usage: main.js {segment|compare} [options]");
  return 2;
}

main().then((code) => process.exit(code));
