import type { Api } from "./api";
import type { GenerationBadge, MixRecord } from "./types";

export interface MixerCallbacks {
  onPick(presetId: string): void;
  onFavorite(presetId: string): void;
  /** Fired after any mutation so the rest of the studio can refresh. */
  onGenerationChange(): void;
}

/**
 * Favorites basket and generation controls.
 *
 * Mixing needs at least two favorites; below that the button stays disabled
 * with a tooltip saying why.  Mix and Clear are confirmed before running,
 * and only one mutating request is in flight at a time.
 */
export class MixerPanel {
  private readonly api: Api;
  private readonly callbacks: MixerCallbacks;
  private readonly favoritesList: HTMLElement;
  private readonly mixButton: HTMLButtonElement;
  private readonly prevButton: HTMLButtonElement;
  private readonly nextButton: HTMLButtonElement;
  private readonly clearButton: HTMLButtonElement;
  private readonly badge: HTMLElement;
  private readonly progress: HTMLElement;
  private readonly childrenPane: HTMLElement;
  private favorites: string[] = [];
  private busy = false;

  constructor(root: HTMLElement, api: Api, callbacks: MixerCallbacks) {
    this.api = api;
    this.callbacks = callbacks;

    root.innerHTML = `
      <div class="favorites">
        <h3>Favorites</h3>
        <ul class="favorites-list"></ul>
      </div>
      <div class="mix-controls">
        <button type="button" class="mix-button">Mix</button>
        <span class="mix-progress" hidden>mixing…</span>
        <span class="generation-badge">generation 0</span>
        <button type="button" class="nav-prev">Prev</button>
        <button type="button" class="nav-next">Next</button>
        <button type="button" class="nav-clear">Clear</button>
      </div>
      <section class="children" hidden>
        <h3>Offspring</h3>
        <ul class="children-list"></ul>
      </section>
    `;

    this.favoritesList = root.querySelector<HTMLElement>(".favorites-list")!;
    this.mixButton = root.querySelector<HTMLButtonElement>(".mix-button")!;
    this.prevButton = root.querySelector<HTMLButtonElement>(".nav-prev")!;
    this.nextButton = root.querySelector<HTMLButtonElement>(".nav-next")!;
    this.clearButton = root.querySelector<HTMLButtonElement>(".nav-clear")!;
    this.badge = root.querySelector<HTMLElement>(".generation-badge")!;
    this.progress = root.querySelector<HTMLElement>(".mix-progress")!;
    this.childrenPane = root.querySelector<HTMLElement>(".children")!;

    this.mixButton.addEventListener("click", () => void this.runMix());
    this.prevButton.addEventListener("click", () => void this.runNavigate("prev"));
    this.nextButton.addEventListener("click", () => void this.runNavigate("next"));
    this.clearButton.addEventListener("click", () => void this.runClear());
    this.setFavorites([]);
  }

  /** Replace the favorites basket from a service response. */
  setFavorites(ids: string[]): void {
    this.favorites = ids;
    this.favoritesList.textContent = "";
    for (const id of ids) {
      const chip = document.createElement("li");
      chip.className = "favorite-chip";
      chip.dataset.preset = id;

      const name = document.createElement("span");
      name.textContent = id;
      name.addEventListener("click", () => this.callbacks.onPick(id));

      const remove = document.createElement("button");
      remove.type = "button";
      remove.className = "favorite-remove";
      remove.textContent = "×";
      remove.title = "remove from favorites";
      remove.addEventListener("click", () => void this.removeFavorite(id));

      chip.append(name, remove);
      this.favoritesList.append(chip);
    }
    this.refreshMixButton();
  }

  /** Update the generation badge from a navigate or session response. */
  setBadge(badge: GenerationBadge): void {
    this.badge.textContent =
      `generation ${badge.index} of ${badge.count - 1} · ${badge.size} presets`;
    this.badge.dataset.index = String(badge.index);
    if (badge.index === 0) this.childrenPane.hidden = true;
  }

  private refreshMixButton(): void {
    const enough = this.favorites.length >= 2;
    this.mixButton.disabled = !enough || this.busy;
    this.mixButton.title = enough ? "breed a new generation" : "pick at least two favorites";
  }

  private setBusy(value: boolean): void {
    this.busy = value;
    this.progress.hidden = !value;
    for (const b of [this.prevButton, this.nextButton, this.clearButton]) b.disabled = value;
    this.refreshMixButton();
  }

  private async removeFavorite(id: string): Promise<void> {
    if (this.busy) return;
    const rec = await this.api.favorite(id, "remove");
    this.setFavorites(rec.favorites);
  }

  private async runMix(): Promise<void> {
    if (this.busy || this.favorites.length < 2) return;
    if (!window.confirm(`Mix ${this.favorites.length} favorites into a new generation?`)) return;
    this.setBusy(true);
    try {
      const rec = await this.api.mix();
      this.renderChildren(rec);
      this.callbacks.onGenerationChange();
    } finally {
      this.setBusy(false);
    }
  }

  private async runNavigate(dir: "next" | "prev"): Promise<void> {
    if (this.busy) return;
    this.setBusy(true);
    try {
      this.setBadge(await this.api.navigate(dir));
      this.callbacks.onGenerationChange();
    } finally {
      this.setBusy(false);
    }
  }

  private async runClear(): Promise<void> {
    if (this.busy) return;
    if (!window.confirm("Clear all generations and return to the bank?")) return;
    this.setBusy(true);
    try {
      this.setBadge(await this.api.navigate("clear"));
      this.childrenPane.hidden = true;
      this.callbacks.onGenerationChange();
    } finally {
      this.setBusy(false);
    }
  }

  private renderChildren(rec: MixRecord): void {
    this.setBadge({ index: rec.index, size: rec.size, count: rec.index + 1 });
    this.childrenPane.hidden = false;
    const list = this.childrenPane.querySelector<HTMLElement>(".children-list")!;
    list.textContent = "";
    for (const id of rec.children) {
      const row = document.createElement("li");
      row.className = "child-row";
      row.dataset.preset = id;
      row.textContent = id;
      row.title = "click to audition, double click to favorite";
      row.addEventListener("click", () => this.callbacks.onPick(id));
      row.addEventListener("dblclick", () => this.callbacks.onFavorite(id));
      list.append(row);
    }
  }
}
