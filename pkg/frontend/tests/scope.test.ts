import { describe, expect, it, vi } from "vitest";

import { Oscilloscope } from "../src/scope";
import { decodeWav } from "../src/wav";
import { binaryFixture } from "./helpers";

describe("wav decoding", () => {
  it("decodes the recorded render into normalized samples", () => {
    const { sampleRate, samples } = decodeWav(binaryFixture("scope.wav"));
    expect(sampleRate).toBe(48000);
    expect(samples.length).toBe(2048);
    let peak = 0;
    for (const s of samples) {
      expect(s).toBeGreaterThanOrEqual(-1);
      expect(s).toBeLessThanOrEqual(1);
      peak = Math.max(peak, Math.abs(s));
    }
    // The clip is the attack of a real note, not silence.
    expect(peak).toBeGreaterThan(0.01);
  });

  it("round-trips a hand-built PCM file exactly", () => {
    const values = [0, 16384, -16384, 32767, -32768];
    const buffer = new ArrayBuffer(44 + values.length * 2);
    const view = new DataView(buffer);
    const ascii = (offset: number, text: string) => {
      for (let i = 0; i < text.length; i++) view.setUint8(offset + i, text.charCodeAt(i));
    };
    ascii(0, "RIFF");
    view.setUint32(4, 36 + values.length * 2, true);
    ascii(8, "WAVE");
    ascii(12, "fmt ");
    view.setUint32(16, 16, true);
    view.setUint16(20, 1, true);
    view.setUint16(22, 1, true);
    view.setUint32(24, 8000, true);
    view.setUint32(28, 16000, true);
    view.setUint16(32, 2, true);
    view.setUint16(34, 16, true);
    ascii(36, "data");
    view.setUint32(40, values.length * 2, true);
    values.forEach((v, i) => view.setInt16(44 + i * 2, v, true));

    const { sampleRate, samples } = decodeWav(buffer);
    expect(sampleRate).toBe(8000);
    expect(Array.from(samples)).toEqual(values.map((v) => v / 32768));
  });

  it("rejects non-WAV bytes", () => {
    expect(() => decodeWav(new ArrayBuffer(10))).toThrow(/RIFF/);
  });
});

describe("oscilloscope", () => {
  it("reduces samples to a per-column min/max envelope", () => {
    const samples = new Float32Array([0, 1, -1, 0.5, 0.25, -0.25, 0, 0]);
    const env = Oscilloscope.envelope(samples, 4);
    expect(Array.from(env)).toEqual([0, 1, -1, 0.5, -0.25, 0.25, 0, 0]);
  });

  it("draws the trace through the 2d context", () => {
    const canvas = document.createElement("canvas");
    canvas.width = 64;
    canvas.height = 32;
    const calls: string[] = [];
    const ctx = {
      canvas,
      fillStyle: "",
      strokeStyle: "",
      lineWidth: 0,
      fillRect: vi.fn(() => calls.push("fillRect")),
      beginPath: vi.fn(() => calls.push("beginPath")),
      moveTo: vi.fn(),
      lineTo: vi.fn(),
      stroke: vi.fn(() => calls.push("stroke")),
    };
    vi.spyOn(canvas, "getContext").mockReturnValue(ctx as unknown as CanvasRenderingContext2D);

    const scope = new Oscilloscope(canvas);
    scope.draw(decodeWav(binaryFixture("scope.wav")).samples);

    expect(calls.filter((c) => c === "fillRect").length).toBe(1);
    expect(calls.filter((c) => c === "stroke").length).toBe(2);
    // One vertical envelope bar per pixel column plus the center line.
    expect(ctx.moveTo).toHaveBeenCalledTimes(canvas.width + 1);
  });

  it("survives a canvas with no 2d context", () => {
    const canvas = document.createElement("canvas");
    vi.spyOn(canvas, "getContext").mockReturnValue(null);
    const scope = new Oscilloscope(canvas);
    expect(() => scope.draw(new Float32Array([0, 0.5]))).not.toThrow();
    expect(() => scope.clear()).not.toThrow();
  });
});
