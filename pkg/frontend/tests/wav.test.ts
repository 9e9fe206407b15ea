import { describe, expect, it } from "vitest";

import { downmixToMono, encodeWavPcm16 } from "../src/wav.js";

// jsdom's Blob has no arrayBuffer(); go through FileReader instead
async function bytes(blob: Blob): Promise<DataView> {
  const buffer: ArrayBuffer = await new Promise((resolve, reject) => {
    const reader = new FileReader();
    reader.onload = () => resolve(reader.result as ArrayBuffer);
    reader.onerror = () => reject(reader.error);
    reader.readAsArrayBuffer(blob);
  });
  return new DataView(buffer);
}

describe("encodeWavPcm16", () => {
  it("writes a well-formed PCM16 mono header", async () => {
    const view = await bytes(encodeWavPcm16(new Float32Array([0, 0.5]), 16000));
    const ascii = (offset: number, n: number) =>
      Array.from({ length: n }, (_, i) => String.fromCharCode(view.getUint8(offset + i))).join("");
    expect(ascii(0, 4)).toBe("RIFF");
    expect(ascii(8, 4)).toBe("WAVE");
    expect(ascii(12, 4)).toBe("fmt ");
    expect(view.getUint16(20, true)).toBe(1); // PCM
    expect(view.getUint16(22, true)).toBe(1); // mono
    expect(view.getUint32(24, true)).toBe(16000);
    expect(view.getUint16(34, true)).toBe(16); // bits
    expect(ascii(36, 4)).toBe("data");
    expect(view.getUint32(40, true)).toBe(4); // 2 samples * 2 bytes
  });

  it("quantizes samples and clamps out-of-range values", async () => {
    const view = await bytes(encodeWavPcm16(new Float32Array([0, 0.5, 2, -2]), 8000));
    expect(view.getInt16(44, true)).toBe(0);
    expect(view.getInt16(46, true)).toBe(16384);
    expect(view.getInt16(48, true)).toBe(32767);
    expect(view.getInt16(50, true)).toBe(-32768);
  });

  it("declares total size consistent with the payload", async () => {
    const blob = encodeWavPcm16(new Float32Array(100), 16000);
    const view = await bytes(blob);
    expect(view.getUint32(4, true)).toBe(blob.size - 8);
  });
});

describe("downmixToMono", () => {
  it("passes mono through untouched", () => {
    const channel = new Float32Array([0.1, -0.2]);
    expect(downmixToMono([channel])).toBe(channel);
  });

  it("averages stereo frames", () => {
    const out = downmixToMono([
      new Float32Array([1.0, 0.0]),
      new Float32Array([0.0, 0.5]),
    ]);
    expect(Array.from(out)).toEqual([0.5, 0.25]);
  });
});
