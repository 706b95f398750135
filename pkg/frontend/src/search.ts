import type { Api } from "./api";
import type { SearchHit, SearchResults } from "./types";

export interface SearchCallbacks {
  /** Single click: audition the preset. */
  onPick(presetId: string): void;
  /** Double click: add the preset to the favorites. */
  onFavorite(presetId: string): void;
}

/**
 * Text and audio retrieval over the current generation.
 *
 * Text results land in the primary pane.  Audio search opens a secondary
 * pane tinted turquoise next to it, leaving the text results in place, so
 * the two rankings can be compared side by side.
 */
export class SearchPanel {
  private readonly api: Api;
  private readonly callbacks: SearchCallbacks;
  private readonly input: HTMLInputElement;
  private readonly textButton: HTMLButtonElement;
  private readonly audioButton: HTMLButtonElement;
  private readonly note: HTMLElement;
  private readonly textPane: HTMLElement;
  private readonly audioPane: HTMLElement;
  private anchor: string | null = null;
  private inflight: AbortController | null = null;

  constructor(root: HTMLElement, api: Api, callbacks: SearchCallbacks) {
    this.api = api;
    this.callbacks = callbacks;

    root.innerHTML = `
      <div class="search-bar">
        <input type="text" class="search-input" placeholder="describe a sound" />
        <button type="button" class="search-text">Search Presets</button>
        <button type="button" class="search-audio" disabled
                title="audition a preset first">Audio Search</button>
      </div>
      <p class="search-note" hidden></p>
      <div class="result-panes">
        <section class="results results-text" hidden>
          <h3>Text results</h3>
          <ul class="result-list"></ul>
        </section>
        <section class="results results-audio turquoise" hidden>
          <h3>Sounds like <span class="audio-anchor"></span>
            <button type="button" class="audio-close" title="close">×</button>
          </h3>
          <ul class="result-list"></ul>
        </section>
      </div>
    `;

    this.input = root.querySelector<HTMLInputElement>(".search-input")!;
    this.textButton = root.querySelector<HTMLButtonElement>(".search-text")!;
    this.audioButton = root.querySelector<HTMLButtonElement>(".search-audio")!;
    this.note = root.querySelector<HTMLElement>(".search-note")!;
    this.textPane = root.querySelector<HTMLElement>(".results-text")!;
    this.audioPane = root.querySelector<HTMLElement>(".results-audio")!;

    this.textButton.addEventListener("click", () => void this.runText());
    this.audioButton.addEventListener("click", () => void this.runAudio());
    this.input.addEventListener("keydown", (ev) => {
      if (ev.key === "Enter") void this.runText();
    });
    this.audioPane.querySelector<HTMLButtonElement>(".audio-close")!.addEventListener(
      "click",
      () => {
        this.audioPane.hidden = true;
      },
    );
  }

  /** Preset used as the query example for audio search. */
  setAnchor(presetId: string | null): void {
    this.anchor = presetId;
    this.audioButton.disabled = presetId === null;
    this.audioButton.title = presetId === null ? "audition a preset first" : `query by ${presetId}`;
  }

  /** Run the text search; an empty query never leaves the browser. */
  async runText(): Promise<void> {
    const query = this.input.value.trim();
    if (query === "") {
      this.showNote("type a description before searching");
      return;
    }
    this.showNote(null);
    const results = await this.search(() => this.api.searchText(query, this.signal()));
    if (results) this.renderPane(this.textPane, results.results);
  }

  /** Run an audio search from the current anchor into the secondary pane. */
  async runAudio(): Promise<void> {
    if (this.anchor === null) return;
    this.showNote(null);
    const anchor = this.anchor;
    const results = await this.search(() => this.api.searchAudio(anchor, this.signal()));
    if (results) {
      this.audioPane.querySelector<HTMLElement>(".audio-anchor")!.textContent = anchor;
      this.renderPane(this.audioPane, results.results);
    }
  }

  private signal(): AbortSignal {
    // Starting a search cancels the one still in flight.
    this.inflight?.abort();
    this.inflight = new AbortController();
    return this.inflight.signal;
  }

  private async search(run: () => Promise<SearchResults>): Promise<SearchResults | null> {
    try {
      return await run();
    } catch (err) {
      if (err instanceof DOMException && err.name === "AbortError") return null;
      this.showNote(err instanceof Error ? err.message : String(err));
      return null;
    } finally {
      this.inflight = null;
    }
  }

  private showNote(message: string | null): void {
    this.note.hidden = message === null;
    this.note.textContent = message ?? "";
  }

  private renderPane(pane: HTMLElement, hits: SearchHit[]): void {
    pane.hidden = false;
    const list = pane.querySelector<HTMLElement>(".result-list")!;
    list.textContent = "";
    for (const hit of hits) {
      const row = document.createElement("li");
      row.className = "result-row";
      row.dataset.preset = hit.id;
      row.title = "click to audition, double click to favorite";
      row.innerHTML = `
        <span class="result-rank">${hit.rank}</span>
        <span class="result-name"></span>
        <span class="result-score">${hit.score.toFixed(3)}</span>
        <span class="result-prov"></span>
      `;
      row.querySelector<HTMLElement>(".result-name")!.textContent = hit.name;
      row.querySelector<HTMLElement>(".result-prov")!.textContent = hit.provenance;
      row.addEventListener("click", () => this.callbacks.onPick(hit.id));
      row.addEventListener("dblclick", () => this.callbacks.onFavorite(hit.id));
      list.append(row);
    }
  }
}
