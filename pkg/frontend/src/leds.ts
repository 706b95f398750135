import type { ImportanceRecord } from "./types";

/** Color of a fully lit LED, i.e. the group that matters most. */
export const DEEPEST_GREEN = "hsl(134, 64%, 22%)";

/** Color of an unlit LED. */
export const UNLIT = "hsl(134, 18%, 92%)";

/**
 * Map an importance shade in [0, 1] to a green.  Lightness falls linearly
 * with the shade so a higher score always reads as a deeper green, and
 * shade 1.0 lands exactly on DEEPEST_GREEN.
 */
export function ledColor(shade: number): string {
  const s = Math.min(1, Math.max(0, shade));
  if (s === 0) return UNLIT;
  const sat = Math.round(18 + 46 * s);
  const light = Math.round(92 - 70 * s);
  return `hsl(134, ${sat}%, ${light}%)`;
}

/**
 * Row of one LED per parameter group, shaded by how strongly the current
 * search examples disagree with the rest of the generation on that group.
 */
export class LedRow {
  private readonly root: HTMLElement;

  constructor(root: HTMLElement) {
    this.root = root;
    this.root.classList.add("led-row");
  }

  /** Redraw every LED from an importance record. */
  render(record: ImportanceRecord): void {
    this.root.textContent = "";
    for (const score of record.scores) {
      const cell = document.createElement("div");
      cell.className = "led-cell";

      const led = document.createElement("span");
      led.className = "led";
      led.dataset.group = score.group;
      led.dataset.shade = score.shade.toFixed(3);
      led.style.backgroundColor = ledColor(score.shade);
      led.title = `${score.group}: ${score.raw.toFixed(4)}`;
      if (score.group === record.top_group) led.classList.add("led-top");

      const label = document.createElement("span");
      label.className = "led-label";
      label.textContent = score.group;

      cell.append(led, label);
      this.root.append(cell);
    }
    if (record.truncated) {
      const note = document.createElement("div");
      note.className = "led-note";
      note.textContent = `scored against ${record.corpus_size} presets`;
      this.root.append(note);
    }
  }

  clear(): void {
    this.root.textContent = "";
  }
}
