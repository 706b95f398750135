import { readFileSync } from "node:fs";
import { resolve } from "node:path";

import type { Api } from "../src/api";
import type {
  ApplyRecord,
  DiffRecord,
  FavoritesRecord,
  GenerationBadge,
  HealthRecord,
  ImportanceRecord,
  MatrixSnapshot,
  MixRecord,
  PresetRecord,
  SearchResults,
  SessionRecord,
} from "../src/types";

// Tests run with the package root as the working directory, where
// import.meta.url is an http address and useless for file access.
function fixturePath(name: string): string {
  return resolve(process.cwd(), "tests", "fixtures", name);
}

/** Load a recorded service response from tests/fixtures. */
export function fixture<T>(name: string): T {
  return JSON.parse(readFileSync(fixturePath(name), "utf8")) as T;
}

/** Load a binary fixture as an ArrayBuffer. */
export function binaryFixture(name: string): ArrayBuffer {
  const buf = readFileSync(fixturePath(name));
  return buf.buffer.slice(buf.byteOffset, buf.byteOffset + buf.byteLength);
}

/** One recorded call against the fake service. */
export interface Call {
  method: string;
  args: unknown[];
}

/**
 * Api stand-in that replays the recorded fixtures and logs every call, so
 * the panels run against real response shapes with no engine behind them.
 */
export class FakeApi implements Api {
  readonly calls: Call[] = [];
  private readonly overrides: Partial<Record<keyof Api, unknown>>;

  constructor(overrides: Partial<Record<keyof Api, unknown>> = {}) {
    this.overrides = overrides;
  }

  /** Calls made to one method, in order. */
  callsTo(method: keyof Api): Call[] {
    return this.calls.filter((c) => c.method === method);
  }

  private answer<T>(method: keyof Api, name: string, args: unknown[]): Promise<T> {
    this.calls.push({ method, args });
    const override = this.overrides[method];
    if (override !== undefined) {
      if (typeof override === "function") {
        const fn = override as (...a: unknown[]) => T | Promise<T>;
        return Promise.resolve(fn(...args));
      }
      return Promise.resolve(structuredClone(override) as T);
    }
    return Promise.resolve(fixture<T>(name));
  }

  health(): Promise<HealthRecord> {
    return this.answer("health", "health.json", []);
  }

  createSession(): Promise<SessionRecord> {
    return this.answer("createSession", "session.json", []);
  }

  getSession(): Promise<SessionRecord> {
    return this.answer("getSession", "session.json", []);
  }

  searchText(query: string, signal?: AbortSignal): Promise<SearchResults> {
    return this.answer("searchText", "search_text.json", [query, signal]);
  }

  searchAudio(presetId: string, signal?: AbortSignal): Promise<SearchResults> {
    return this.answer("searchAudio", "search_audio.json", [presetId, signal]);
  }

  favorite(presetId: string, action: "add" | "remove"): Promise<FavoritesRecord> {
    return this.answer("favorite", "favorites.json", [presetId, action]);
  }

  mix(): Promise<MixRecord> {
    return this.answer("mix", "mix.json", []);
  }

  navigate(dir: "next" | "prev" | "clear"): Promise<GenerationBadge> {
    return this.answer("navigate", "navigate_prev.json", [dir]);
  }

  modifySearchText(baseId: string, query: string): Promise<MatrixSnapshot> {
    return this.answer("modifySearchText", "matrix_text.json", [baseId, query]);
  }

  modifySearchAudio(baseId: string, anchorId: string): Promise<MatrixSnapshot> {
    return this.answer("modifySearchAudio", "matrix_audio.json", [baseId, anchorId]);
  }

  modifyApply(group: string, column: number | "old"): Promise<ApplyRecord> {
    const name = column === "old" ? "apply_all_old.json" : "apply_effects1.json";
    return this.answer("modifyApply", name, [group, column]);
  }

  importance(): Promise<ImportanceRecord> {
    return this.answer("importance", "importance.json", []);
  }

  getPreset(presetId: string): Promise<PresetRecord> {
    return this.answer("getPreset", "preset_base.json", [presetId]);
  }

  getDiff(presetId: string, against: string): Promise<DiffRecord> {
    const name = presetId === against ? "diff_none.json" : "diff_changed.json";
    return this.answer("getDiff", name, [presetId, against]);
  }

  renderUrl(presetId: string): string {
    return `/render/${presetId}?session=fake`;
  }
}

/** Mount a fresh host element for a panel under test. */
export function host(): HTMLElement {
  const el = document.createElement("div");
  document.body.append(el);
  return el;
}

/** Let queued promise callbacks run. */
export async function flush(): Promise<void> {
  for (let i = 0; i < 8; i++) await Promise.resolve();
}
