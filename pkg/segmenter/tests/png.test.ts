import * as fs from "fs";
import * as os from "os";
import * as path from "path";
import * as zlib from "zlib";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { labelColor, writeLabelMapPng, writeRgbPng } from "../src/png";
import type { LabelMap } from "../src/segmenter";

let dir: string;

beforeAll(() => {
  dir = fs.mkdtempSync(path.join(os.tmpdir(), "png-"));
});

afterAll(() => {
  fs.rmSync(dir, { recursive: true, force: true });
});

/** Minimal PNG parser for the single-IDAT files this writer emits. */
function decodePng(file: string): { width: number; height: number; rgb: Buffer } {
  const buf = fs.readFileSync(file);
  expect(Array.from(buf.subarray(0, 8))).toEqual([0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a]);
  let offset = 8;
  let width = 0;
  let height = 0;
  const idat: Buffer[] = [];
  while (offset < buf.length) {
    const length = buf.readUInt32BE(offset);
    const type = buf.toString("ascii", offset + 4, offset + 8);
    const data = buf.subarray(offset + 8, offset + 8 + length);
    if (type === "IHDR") {
      width = data.readUInt32BE(0);
      height = data.readUInt32BE(4);
      expect(data[8]).toBe(8); // bit depth
      expect(data[9]).toBe(2); // truecolor
    } else if (type === "IDAT") {
      idat.push(Buffer.from(data));
    }
    offset += 12 + length;
  }
  const raw = zlib.inflateSync(Buffer.concat(idat));
  const stride = 1 + width * 3;
  const rgb = Buffer.alloc(width * height * 3);
  for (let y = 0; y < height; y++) {
    expect(raw[y * stride]).toBe(0); // filter: none
    raw.copy(rgb, y * width * 3, y * stride + 1, (y + 1) * stride);
  }
  return { width, height, rgb };
}

describe("writeRgbPng", () => {
  it("round-trips pixel data through a standards-compliant file", () => {
    const w = 5;
    const h = 3;
    const rgb = Uint8Array.from({ length: w * h * 3 }, (_, i) => (i * 17) % 256);
    const file = path.join(dir, "roundtrip.png");
    writeRgbPng(file, rgb, w, h);
    const decoded = decodePng(file);
    expect(decoded.width).toBe(w);
    expect(decoded.height).toBe(h);
    expect(Array.from(decoded.rgb)).toEqual(Array.from(rgb));
  });

  it("rejects a buffer of the wrong size", () => {
    expect(() => writeRgbPng(path.join(dir, "bad.png"), new Uint8Array(10), 2, 2)).toThrow(
      /rgb buffer length/
    );
  });
});

describe("labelColor", () => {
  it("gives distinct colors to the first 32 labels", () => {
    const seen = new Set<string>();
    for (let label = 0; label < 32; label++) {
      seen.add(labelColor(label).join(","));
    }
    expect(seen.size).toBe(32);
  });
});

describe("writeLabelMapPng", () => {
  it("colors each label consistently", () => {
    const map: LabelMap = {
      labels: Int32Array.from([0, 1, 1, 0]),
      height: 2,
      width: 2,
      nUnique: 2,
    };
    const file = path.join(dir, "labels.png");
    writeLabelMapPng(file, map);
    const { rgb } = decodePng(file);
    const px = (i: number) => Array.from(rgb.subarray(i * 3, i * 3 + 3));
    expect(px(0)).toEqual(Array.from(labelColor(0)));
    expect(px(1)).toEqual(Array.from(labelColor(1)));
    expect(px(1)).toEqual(px(2));
    expect(px(0)).toEqual(px(3));
    expect(px(0)).not.toEqual(px(1));
  });
});
