/**
 * Unsupervised segmentation by alternating pseudo-label prediction and
 * feature learning. A small convolutional feature extractor is trained
 * so that (a) pixels with similar features share a label, (b) spatially
 * adjacent pixels share a label (L1 continuity penalty on the response
 * map), while the per-pixel argmax keeps the label set as rich as the
 * data supports. Training stops at maxIters or when the number of
 * distinct labels would fall below minLabels.
 */

import * as tf from "@tensorflow/tfjs";

export interface SegConfig {
  nChannelsIn: number;
  featureDim: number;
  maxIters: number;
  minLabels: number;
  learningRate: number;
  continuityWeight: number;
  rngSeed: number;
}

export const defaultSegConfig: Omit<SegConfig, "nChannelsIn"> = {
  featureDim: 32,
  maxIters: 200,
  minLabels: 2,
  learningRate: 0.1,
  continuityWeight: 2.0,
  rngSeed: 0,
};

export interface TrainLogEntry {
  iter: number;
  loss: number;
  nUnique: number;
}

export interface LabelMap {
  labels: Int32Array; // row-major [height * width]
  height: number;
  width: number;
  nUnique: number;
}

export interface SegResult {
  labelMap: LabelMap;
  log: TrainLogEntry[];
}

let wasmReady: Promise<void> | null = null;

/** Switch to the wasm backend once per process (much faster than cpu). */
export function ensureBackend(): Promise<void> {
  if (!wasmReady) {
    wasmReady = (async () => {
      try {
        // eslint-disable-next-line @typescript-eslint/no-var-requires
        const wasm = require("@tensorflow/tfjs-backend-wasm");
        wasm.setWasmPaths(
          require.resolve("@tensorflow/tfjs-backend-wasm/dist/tfjs-backend-wasm.wasm").replace(
            /tfjs-backend-wasm\.wasm$/,
            ""
          )
        );
        await tf.setBackend("wasm");
      } catch {
        await tf.setBackend("cpu");
      }
      await tf.ready();
    })();
  }
  return wasmReady;
}

/** Zero-mean unit-variance normalization per channel. Subaperture
 * channels carry a fraction of the original's energy; without this the
 * cluster comparison would confound scale with information. */
export function normalizeChannels(channels: Float32Array[]): Float32Array[] {
  return channels.map((ch) => {
    let mean = 0;
    for (const v of ch) mean += v;
    mean /= ch.length;
    let variance = 0;
    for (const v of ch) variance += (v - mean) * (v - mean);
    variance /= ch.length;
    const std = Math.sqrt(variance) || 1;
    return Float32Array.from(ch, (v) => (v - mean) / std);
  });
}

interface Net {
  vars: tf.Variable[];
  forward: (x: tf.Tensor4D) => tf.Tensor4D;
}

/** Normalization over pixels with learnable per-channel scale/offset.
 * The affine part matters: without it every response channel is pinned
 * to zero mean, argmax can never concentrate on a few labels, and the
 * label count stalls on featureless inputs instead of collapsing. */
function instanceNorm(x: tf.Tensor4D, gamma: tf.Variable, beta: tf.Variable): tf.Tensor4D {
  const { mean, variance } = tf.moments(x, [1, 2], true);
  const normed = tf.div(tf.sub(x, mean), tf.sqrt(tf.add(variance, 1e-5)));
  return tf.add(tf.mul(normed, gamma), beta) as tf.Tensor4D;
}

/** Stack the 9 zero-padded 3x3 shifts along channels, so a 3x3 conv
 * becomes a plain matMul. The wasm backend has no conv-backprop
 * kernels; pad/slice/concat/matMul all have gradients there. */
function neighborhoodChannels(x: tf.Tensor4D): tf.Tensor4D {
  const [, h, w] = x.shape;
  const padded = tf.pad(x, [
    [0, 0],
    [1, 1],
    [1, 1],
    [0, 0],
  ]);
  const parts: tf.Tensor4D[] = [];
  for (let di = 0; di < 3; di++) {
    for (let dj = 0; dj < 3; dj++) {
      parts.push(tf.slice(padded, [0, di, dj, 0], [1, h, w, -1]) as tf.Tensor4D);
    }
  }
  return tf.concat(parts, 3) as tf.Tensor4D;
}

function pointwise(x: tf.Tensor4D, w: tf.Tensor): tf.Tensor4D {
  const [, h, wd, c] = x.shape;
  const flat = tf.matMul(tf.reshape(x, [h * wd, c]), w as tf.Tensor2D);
  return tf.reshape(flat, [1, h, wd, w.shape[1] as number]) as tf.Tensor4D;
}

function buildNet(cfg: SegConfig): Net {
  const f = cfg.featureDim;
  const weight = (shape: [number, number], seed: number) =>
    tf.variable(tf.initializers.glorotUniform({ seed }).apply(shape) as tf.Tensor, true);
  const w1 = weight([9 * cfg.nChannelsIn, f], cfg.rngSeed * 7919 + 1);
  const w2 = weight([9 * f, f], cfg.rngSeed * 7919 + 2);
  const w3 = weight([f, f], cfg.rngSeed * 7919 + 3);
  const affine = () =>
    [tf.variable(tf.ones([f])), tf.variable(tf.zeros([f]))] as [tf.Variable, tf.Variable];
  const [g1, b1] = affine();
  const [g2, b2] = affine();
  const [g3, b3] = affine();
  const forward = (x: tf.Tensor4D): tf.Tensor4D =>
    tf.tidy(() => {
      let h = instanceNorm(tf.relu(pointwise(neighborhoodChannels(x), w1)), g1, b1);
      h = instanceNorm(tf.relu(pointwise(neighborhoodChannels(h), w2)), g2, b2);
      return instanceNorm(pointwise(h, w3), g3, b3);
    });
  return { vars: [w1, w2, w3, g1, b1, g2, b2, g3, b3] as tf.Variable[], forward };
}

function countUnique(labels: Int32Array): number {
  return new Set(labels).size;
}

function continuityLoss(logits: tf.Tensor4D): tf.Tensor {
  const dv = tf.abs(
    tf.sub(
      tf.slice(logits, [0, 1, 0, 0], [-1, -1, -1, -1]),
      tf.slice(logits, [0, 0, 0, 0], [-1, logits.shape[1] - 1, -1, -1])
    )
  );
  const dh = tf.abs(
    tf.sub(
      tf.slice(logits, [0, 0, 1, 0], [-1, -1, -1, -1]),
      tf.slice(logits, [0, 0, 0, 0], [-1, -1, logits.shape[2] - 1, -1])
    )
  );
  return tf.add(tf.mean(dv), tf.mean(dh));
}

export async function segment(
  channels: Float32Array[],
  height: number,
  width: number,
  cfg: SegConfig
): Promise<SegResult> {
  await ensureBackend();
  if (channels.length !== cfg.nChannelsIn) {
    throw new Error(
      `config expects ${cfg.nChannelsIn} input channels, stack has ${channels.length}`
    );
  }
  if (height < 32 || width < 32) {
    throw new Error(`spatial dims must be >= 32x32, got ${height}x${width}`);
  }
  const normalized = normalizeChannels(channels);
  const input = tf.tidy(() => {
    const planes = normalized.map((ch) => tf.tensor2d(ch, [height, width]));
    return tf.stack(planes, -1).expandDims(0) as tf.Tensor4D;
  });
  const net = buildNet(cfg);
  const optimizer = tf.train.momentum(cfg.learningRate, 0.9);
  const nPixels = height * width;
  const log: TrainLogEntry[] = [];
  let labels = new Int32Array(nPixels);
  // labels only merge, never resurrect: once a label loses all its
  // pixels it is excluded from later argmax assignments, making the
  // distinct-label count non-increasing by construction
  const alive = new Float32Array(cfg.featureDim); // 0 = alive, -1e9 = retired

  try {
    for (let iter = 0; iter < cfg.maxIters; iter++) {
      const logits = net.forward(input);
      const flat = logits.reshape([nPixels, cfg.featureDim]);
      const masked = tf.tidy(() => tf.add(flat, tf.tensor1d(alive)));
      labels = Int32Array.from(await masked.argMax(-1).data());
      masked.dispose();
      const present = new Set(labels);
      for (let k = 0; k < cfg.featureDim; k++) {
        if (!present.has(k)) alive[k] = -1e9;
      }
      const nUnique = present.size;

      const target = tf.tidy(() =>
        tf.oneHot(tf.tensor1d(labels, "int32"), cfg.featureDim)
      );
      const lossTensor = optimizer.minimize(
        () =>
          tf.tidy(() => {
            const out = net.forward(input);
            const similarity = tf.losses.softmaxCrossEntropy(
              target,
              out.reshape([nPixels, cfg.featureDim])
            );
            return tf.add(
              similarity,
              tf.mul(cfg.continuityWeight, continuityLoss(out))
            ) as tf.Scalar;
          }),
        true
      ) as tf.Scalar;
      const loss = (await lossTensor.data())[0];
      if (!Number.isFinite(loss)) {
        throw new Error(`training diverged (loss ${loss}) at iteration ${iter}`);
      }
      log.push({ iter, loss, nUnique });
      target.dispose();
      lossTensor.dispose();
      flat.dispose();
      logits.dispose();
      if (nUnique < cfg.minLabels) break;
    }
  } finally {
    input.dispose();
    net.vars.forEach((v) => v.dispose());
    (optimizer as unknown as { dispose?: () => void }).dispose?.();
  }

  return {
    labelMap: { labels, height, width, nUnique: countUnique(labels) },
    log,
  };
}
