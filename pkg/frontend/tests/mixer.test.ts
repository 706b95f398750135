import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { MixerPanel } from "../src/mixer";
import type { MixRecord } from "../src/types";
import { FakeApi, fixture, flush, host } from "./helpers";

function makePanel(api: FakeApi) {
  const root = host();
  const panel = new MixerPanel(root, api, {
    onPick: () => undefined,
    onFavorite: () => undefined,
    onGenerationChange: () => undefined,
  });
  return { root, panel };
}

describe("mixer panel", () => {
  beforeEach(() => {
    document.body.textContent = "";
    vi.stubGlobal("confirm", vi.fn(() => true));
  });

  afterEach(() => {
    vi.unstubAllGlobals();
  });

  it("disables Mix below two favorites and explains why", () => {
    const { root, panel } = makePanel(new FakeApi());
    const button = root.querySelector<HTMLButtonElement>(".mix-button")!;

    panel.setFavorites(["default_0006"]);
    expect(button.disabled).toBe(true);
    expect(button.title).toContain("at least two");

    panel.setFavorites(["default_0006", "default_0013"]);
    expect(button.disabled).toBe(false);
  });

  it("mixes with a progress indicator and lists the offspring", async () => {
    let release: ((r: MixRecord) => void) | null = null;
    const api = new FakeApi({
      mix: () =>
        new Promise<MixRecord>((resolve) => {
          release = resolve;
        }),
    });
    const { root, panel } = makePanel(api);
    panel.setFavorites(["a", "b", "c"]);

    const button = root.querySelector<HTMLButtonElement>(".mix-button")!;
    button.dispatchEvent(new MouseEvent("click", { bubbles: true }));
    await flush();

    expect(api.callsTo("mix").length).toBe(1);
    expect(root.querySelector<HTMLElement>(".mix-progress")!.hidden).toBe(false);
    expect(button.disabled).toBe(true);

    const record = fixture<MixRecord>("mix.json");
    release!(record);
    await flush();

    expect(root.querySelector<HTMLElement>(".mix-progress")!.hidden).toBe(true);
    const children = root.querySelectorAll(".child-row");
    expect(children.length).toBe(record.children.length);
    expect(children[0].getAttribute("data-preset")).toBe(record.children[0]);
    expect(root.querySelector<HTMLElement>(".generation-badge")!.dataset.index).toBe(
      String(record.index),
    );
  });

  it("does not mix when the confirmation is declined", async () => {
    vi.stubGlobal("confirm", vi.fn(() => false));
    const api = new FakeApi();
    const { root, panel } = makePanel(api);
    panel.setFavorites(["a", "b"]);

    root
      .querySelector<HTMLButtonElement>(".mix-button")!
      .dispatchEvent(new MouseEvent("click", { bubbles: true }));
    await flush();

    expect(api.callsTo("mix").length).toBe(0);
  });

  it("resets the generation badge to 0 on Clear", async () => {
    const api = new FakeApi({ navigate: () => ({ index: 0, size: 16, count: 1 }) });
    const { root, panel } = makePanel(api);
    panel.setBadge({ index: 2, size: 30, count: 3 });

    root
      .querySelector<HTMLButtonElement>(".nav-clear")!
      .dispatchEvent(new MouseEvent("click", { bubbles: true }));
    await flush();

    expect(api.callsTo("navigate")[0].args).toEqual(["clear"]);
    const badge = root.querySelector<HTMLElement>(".generation-badge")!;
    expect(badge.dataset.index).toBe("0");
    expect(badge.textContent).toContain("generation 0");
  });

  it("navigates between generations", async () => {
    const api = new FakeApi();
    const { root } = makePanel(api);

    root
      .querySelector<HTMLButtonElement>(".nav-prev")!
      .dispatchEvent(new MouseEvent("click", { bubbles: true }));
    await flush();

    expect(api.callsTo("navigate")[0].args).toEqual(["prev"]);
    // navigate_prev.json points back at the original bank.
    expect(root.querySelector<HTMLElement>(".generation-badge")!.dataset.index).toBe("0");
  });

  it("removes a favorite through its chip", async () => {
    const api = new FakeApi({ favorite: () => ({ favorites: ["b"] }) });
    const { root, panel } = makePanel(api);
    panel.setFavorites(["a", "b"]);

    root
      .querySelector<HTMLButtonElement>('.favorite-chip[data-preset="a"] .favorite-remove')!
      .dispatchEvent(new MouseEvent("click", { bubbles: true }));
    await flush();

    expect(api.callsTo("favorite")[0].args).toEqual(["a", "remove"]);
    expect(root.querySelectorAll(".favorite-chip").length).toBe(1);
    expect(root.querySelector<HTMLElement>(".favorite-chip")!.dataset.preset).toBe("b");
  });
});
