/**
 * Oscilloscope drawing the rendered waveform of the current preset.
 *
 * Long renders are reduced to a min/max envelope per pixel column so the
 * whole note fits the canvas without aliasing into noise.
 */
export class Oscilloscope {
  private readonly canvas: HTMLCanvasElement;
  private readonly ctx: CanvasRenderingContext2D | null;

  constructor(canvas: HTMLCanvasElement) {
    this.canvas = canvas;
    this.ctx = canvas.getContext("2d");
  }

  /**
   * Collapse samples to one [min, max] pair per pixel column.  Exposed for
   * tests; pure function of the input.
   */
  static envelope(samples: Float32Array, columns: number): Float32Array {
    const out = new Float32Array(columns * 2);
    if (samples.length === 0 || columns === 0) return out;
    const step = samples.length / columns;
    for (let x = 0; x < columns; x++) {
      const start = Math.floor(x * step);
      const end = Math.max(start + 1, Math.floor((x + 1) * step));
      let lo = samples[start];
      let hi = samples[start];
      for (let i = start + 1; i < end && i < samples.length; i++) {
        const v = samples[i];
        if (v < lo) lo = v;
        if (v > hi) hi = v;
      }
      out[x * 2] = lo;
      out[x * 2 + 1] = hi;
    }
    return out;
  }

  /** Redraw the trace from raw samples in [-1, 1]. */
  draw(samples: Float32Array): void {
    const ctx = this.ctx;
    if (!ctx) return;
    const { width, height } = this.canvas;

    ctx.fillStyle = "#10151b";
    ctx.fillRect(0, 0, width, height);

    ctx.strokeStyle = "#27313c";
    ctx.lineWidth = 1;
    ctx.beginPath();
    ctx.moveTo(0, height / 2);
    ctx.lineTo(width, height / 2);
    ctx.stroke();

    if (samples.length === 0) return;

    const env = Oscilloscope.envelope(samples, width);
    ctx.strokeStyle = "#39d98a";
    ctx.lineWidth = 1;
    ctx.beginPath();
    for (let x = 0; x < width; x++) {
      const lo = env[x * 2];
      const hi = env[x * 2 + 1];
      const yLo = (1 - lo) * 0.5 * height;
      const yHi = (1 - hi) * 0.5 * height;
      ctx.moveTo(x + 0.5, yLo);
      ctx.lineTo(x + 0.5, yHi);
    }
    ctx.stroke();
  }

  clear(): void {
    const ctx = this.ctx;
    if (!ctx) return;
    ctx.fillStyle = "#10151b";
    ctx.fillRect(0, 0, this.canvas.width, this.canvas.height);
  }
}
