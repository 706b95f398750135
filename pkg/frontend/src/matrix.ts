import type { Api } from "./api";
import { LedRow } from "./leds";
import type { ApplyRecord, MatrixSnapshot } from "./types";

export interface ModifyCallbacks {
  /** Fired with the service response after a cell is applied. */
  onApplied(record: ApplyRecord): void;
}

/** Row label that applies a column across every parameter group at once. */
export const ALL_GROUPS = "ALL";

/**
 * Example driven modification: a parameter search box, one importance LED
 * per group, and the example matrix.
 *
 * The matrix has one column for the preset's old values plus one per
 * example, and one row per group under a leading ALL row.  Clicking a cell
 * swaps that group (or everything, from the ALL row) to the column's
 * values; clicking old in the ALL row restores the original preset fully.
 * Audio refined matrices are tinted turquoise like audio search results.
 */
export class ModifyPanel {
  private readonly api: Api;
  private readonly callbacks: ModifyCallbacks;
  private readonly input: HTMLInputElement;
  private readonly searchButton: HTMLButtonElement;
  private readonly note: HTMLElement;
  private readonly leds: LedRow;
  private readonly matrixHost: HTMLElement;
  private baseId: string | null = null;
  private snapshot: MatrixSnapshot | null = null;
  private busy = false;

  constructor(root: HTMLElement, api: Api, callbacks: ModifyCallbacks) {
    this.api = api;
    this.callbacks = callbacks;

    root.innerHTML = `
      <div class="modify-bar">
        <input type="text" class="modify-input" placeholder="search parameters" />
        <button type="button" class="modify-search" disabled
                title="audition a preset first">Search Parameters</button>
      </div>
      <p class="modify-note" hidden></p>
      <div class="led-host"></div>
      <div class="matrix-host"></div>
      <p class="matrix-legend" hidden>
        old = current values · columns 1…n = closest examples, best first ·
        ↻ = refine by that example's sound
      </p>
    `;

    this.input = root.querySelector<HTMLInputElement>(".modify-input")!;
    this.searchButton = root.querySelector<HTMLButtonElement>(".modify-search")!;
    this.note = root.querySelector<HTMLElement>(".modify-note")!;
    this.leds = new LedRow(root.querySelector<HTMLElement>(".led-host")!);
    this.matrixHost = root.querySelector<HTMLElement>(".matrix-host")!;

    this.searchButton.addEventListener("click", () => void this.runSearch());
    this.input.addEventListener("keydown", (ev) => {
      if (ev.key === "Enter") void this.runSearch();
    });
  }

  /** Preset the next parameter search will modify. */
  setBase(presetId: string | null): void {
    this.baseId = presetId;
    this.searchButton.disabled = presetId === null;
    this.searchButton.title = presetId === null ? "audition a preset first" : `modify ${presetId}`;
  }

  /** Restore a matrix straight from a session record. */
  async restore(snapshot: MatrixSnapshot): Promise<void> {
    this.baseId = snapshot.base_id;
    this.searchButton.disabled = false;
    this.render(snapshot);
    await this.refreshLeds();
  }

  /** Run the parameter search; an empty query never leaves the browser. */
  async runSearch(): Promise<void> {
    if (this.baseId === null || this.busy) return;
    const query = this.input.value.trim();
    if (query === "") {
      this.showNote("type a description before searching");
      return;
    }
    this.showNote(null);
    await this.runGuarded(async () => {
      this.render(await this.api.modifySearchText(this.baseId!, query));
      await this.refreshLeds();
    });
  }

  /** Re-rank the examples by how one of them sounds. */
  private async refineFrom(anchorId: string): Promise<void> {
    if (this.baseId === null || this.busy) return;
    this.showNote(null);
    await this.runGuarded(async () => {
      this.render(await this.api.modifySearchAudio(this.baseId!, anchorId));
      await this.refreshLeds();
    });
  }

  private async applyCell(group: string, column: number | "old"): Promise<void> {
    if (this.busy || this.snapshot === null) return;
    await this.runGuarded(async () => {
      const record = await this.api.modifyApply(group, column);
      // Mirror the server's bookkeeping so the highlights match a reload.
      if (group === ALL_GROUPS) {
        for (const g of Object.keys(this.snapshot!.selections)) {
          this.snapshot!.selections[g] = column;
        }
      } else {
        this.snapshot!.selections[group] = column;
      }
      this.render(this.snapshot!);
      this.callbacks.onApplied(record);
    });
  }

  private async runGuarded(run: () => Promise<void>): Promise<void> {
    this.busy = true;
    this.searchButton.disabled = true;
    try {
      await run();
    } catch (err) {
      this.showNote(err instanceof Error ? err.message : String(err));
    } finally {
      this.busy = false;
      this.searchButton.disabled = this.baseId === null;
    }
  }

  private async refreshLeds(): Promise<void> {
    this.leds.render(await this.api.importance());
  }

  private showNote(message: string | null): void {
    this.note.hidden = message === null;
    this.note.textContent = message ?? "";
  }

  private render(snapshot: MatrixSnapshot): void {
    this.snapshot = snapshot;
    const groups = Object.keys(snapshot.selections);
    // Example columns are numbered from 1, matching the service contract.
    const columns: Array<number | "old"> = ["old"];
    for (let i = 1; i <= snapshot.example_ids.length; i++) columns.push(i);

    const table = document.createElement("table");
    table.className = "matrix";
    if (snapshot.query_kind === "audio") table.classList.add("turquoise");
    table.dataset.queryKind = snapshot.query_kind;
    table.dataset.base = snapshot.base_id;

    const head = table.createTHead().insertRow();
    head.append(document.createElement("th"));
    for (const col of columns) {
      const th = document.createElement("th");
      if (col === "old") {
        th.textContent = "old";
      } else {
        const exampleId = snapshot.example_ids[col - 1];
        const label = document.createElement("span");
        label.textContent = String(col);
        label.title = exampleId;
        const refine = document.createElement("button");
        refine.type = "button";
        refine.className = "refine-button";
        refine.textContent = "↻";
        refine.title = `refine by the sound of ${exampleId}`;
        refine.addEventListener("click", () => void this.refineFrom(exampleId));
        th.append(label, refine);
      }
      head.append(th);
    }

    const body = table.createTBody();
    for (const group of [ALL_GROUPS, ...groups]) {
      const row = body.insertRow();
      row.dataset.group = group;
      const label = document.createElement("th");
      label.textContent = group;
      row.append(label);
      for (const col of columns) {
        const cell = row.insertCell();
        cell.className = "matrix-cell";
        cell.dataset.column = String(col);
        if (group !== ALL_GROUPS && snapshot.selections[group] === col) {
          cell.classList.add("selected");
        }
        cell.addEventListener("click", () => void this.applyCell(group, col));
      }
    }

    this.matrixHost.textContent = "";
    this.matrixHost.append(table);
    const legend = this.matrixHost.parentElement?.querySelector<HTMLElement>(".matrix-legend");
    if (legend) legend.hidden = false;
  }
}
