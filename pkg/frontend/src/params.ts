import type { Api } from "./api";
import type { PresetRecord } from "./types";

/**
 * Parameter readout for the current preset.
 *
 * Plain mode lists every parameter.  The changed-only toggle asks the
 * service for the diff against the modification base and lists just those
 * rows with their old and new values; a preset that has not been modified
 * shows an empty list.
 */
export class ParamPanel {
  private readonly api: Api;
  private readonly toggle: HTMLInputElement;
  private readonly list: HTMLElement;
  private readonly empty: HTMLElement;
  private preset: PresetRecord | null = null;
  private baseId: string | null = null;

  constructor(root: HTMLElement, api: Api) {
    this.api = api;

    root.innerHTML = `
      <div class="params-bar">
        <h3 class="params-title">Parameters</h3>
        <label class="params-toggle">
          <input type="checkbox" class="changed-only" /> changed only
        </label>
      </div>
      <p class="params-empty" hidden>no changed parameters</p>
      <table class="params-table">
        <tbody class="params-list"></tbody>
      </table>
    `;

    this.toggle = root.querySelector<HTMLInputElement>(".changed-only")!;
    this.list = root.querySelector<HTMLElement>(".params-list")!;
    this.empty = root.querySelector<HTMLElement>(".params-empty")!;
    this.toggle.addEventListener("change", () => void this.refresh());
  }

  /**
   * Show a preset.  `baseId` is what the diff is taken against; a preset
   * that is its own base has no changes by definition.
   */
  async show(preset: PresetRecord, baseId?: string): Promise<void> {
    this.preset = preset;
    this.baseId = baseId ?? preset.id;
    await this.refresh();
  }

  get changedOnly(): boolean {
    return this.toggle.checked;
  }

  async refresh(): Promise<void> {
    if (this.preset === null) return;
    if (this.toggle.checked) {
      await this.renderChanged();
    } else {
      this.renderAll();
    }
  }

  private renderAll(): void {
    this.empty.hidden = true;
    this.list.textContent = "";
    for (const [id, value] of Object.entries(this.preset!.values)) {
      const row = document.createElement("tr");
      row.className = "param-row";
      row.dataset.param = id;
      row.innerHTML = `<td class="param-id"></td><td class="param-value"></td>`;
      row.querySelector<HTMLElement>(".param-id")!.textContent = id;
      row.querySelector<HTMLElement>(".param-value")!.textContent = String(value);
      this.list.append(row);
    }
  }

  private async renderChanged(): Promise<void> {
    const diff = await this.api.getDiff(this.preset!.id, this.baseId!);
    this.list.textContent = "";
    this.empty.hidden = diff.changed_params.length > 0;
    for (const change of diff.changed_params) {
      const row = document.createElement("tr");
      row.className = "param-row param-changed";
      row.dataset.param = change.id;
      row.innerHTML = `
        <td class="param-id"></td>
        <td class="param-value"><s class="param-old"></s> <span class="param-new"></span></td>
      `;
      row.querySelector<HTMLElement>(".param-id")!.textContent = change.id;
      row.querySelector<HTMLElement>(".param-old")!.textContent = String(change.old);
      row.querySelector<HTMLElement>(".param-new")!.textContent = String(change.new);
      this.list.append(row);
    }
  }
}
