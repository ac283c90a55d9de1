/**
 * Reader for the toolkit's processed-stack interchange format: a
 * headerless little-endian payload (channel-major float32/float64) next
 * to a JSON sidecar describing dtype, shape and channel labels.
 */

import * as fs from "fs";
import * as os from "os";
import * as path from "path";

export interface StackSidecar {
  schema_version: number;
  dtype: string;
  shape: number[];
  byte_order?: string;
  pixel_spacing_az?: number;
  pixel_spacing_rg?: number;
  channel_labels?: string[];
  provenance?: unknown;
}

export interface ProcessedStack {
  channels: Float32Array[]; // one [height*width] buffer per channel, row-major
  height: number;
  width: number;
  labels: string[];
  sidecar: StackSidecar;
}

export function sidecarFor(payloadPath: string): string {
  const parsed = path.parse(payloadPath);
  return path.join(parsed.dir, `${parsed.name}.json`);
}

export function readStack(payloadPath: string, sidecarPath?: string): ProcessedStack {
  if (os.endianness() !== "LE") {
    throw new Error("stack payloads are little-endian; big-endian hosts unsupported");
  }
  const metaPath = sidecarPath ?? sidecarFor(payloadPath);
  const sidecar = JSON.parse(fs.readFileSync(metaPath, "utf-8")) as StackSidecar;
  if (sidecar.schema_version !== 1) {
    throw new Error(`unsupported schema_version ${sidecar.schema_version} in ${metaPath}`);
  }
  if (sidecar.shape.length !== 3) {
    throw new Error(`stack shape must be [channels, rows, cols], got ${JSON.stringify(sidecar.shape)}`);
  }
  const [nChannels, height, width] = sidecar.shape;
  const bytesPerSample = sidecar.dtype === "f32" ? 4 : sidecar.dtype === "f64" ? 8 : 0;
  if (bytesPerSample === 0) {
    throw new Error(`stack dtype must be f32 or f64, got ${sidecar.dtype}`);
  }
  const raw = fs.readFileSync(payloadPath);
  const expected = nChannels * height * width * bytesPerSample;
  if (raw.byteLength !== expected) {
    throw new Error(
      `payload ${payloadPath}: expected ${expected} bytes for shape ` +
        `${JSON.stringify(sidecar.shape)} ${sidecar.dtype}, actual ${raw.byteLength}`
    );
  }
  const perChannel = height * width;
  const channels: Float32Array[] = [];
  for (let c = 0; c < nChannels; c++) {
    const offset = raw.byteOffset + c * perChannel * bytesPerSample;
    if (sidecar.dtype === "f32") {
      channels.push(new Float32Array(raw.buffer.slice(offset, offset + perChannel * 4)));
    } else {
      const f64 = new Float64Array(raw.buffer.slice(offset, offset + perChannel * 8));
      channels.push(Float32Array.from(f64));
    }
  }
  const labels = sidecar.channel_labels ?? channels.map((_, i) => `C${i}`);
  return { channels, height, width, labels, sidecar };
}
