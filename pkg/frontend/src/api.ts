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
} from "./types";

/** Error raised for any non-2xx service response, carrying the server message. */
export class ApiError extends Error {
  readonly status: number;
  readonly code: string;

  constructor(status: number, code: string, message: string) {
    super(message);
    this.status = status;
    this.code = code;
  }
}

/**
 * The service surface the studio is allowed to touch.  Panels depend on this
 * interface rather than the concrete client so tests can substitute a fixture
 * backed fake.
 */
export interface Api {
  health(): Promise<HealthRecord>;
  createSession(): Promise<SessionRecord>;
  getSession(): Promise<SessionRecord>;
  searchText(query: string, signal?: AbortSignal): Promise<SearchResults>;
  searchAudio(presetId: string, signal?: AbortSignal): Promise<SearchResults>;
  favorite(presetId: string, action: "add" | "remove"): Promise<FavoritesRecord>;
  mix(): Promise<MixRecord>;
  navigate(dir: "next" | "prev" | "clear"): Promise<GenerationBadge>;
  modifySearchText(baseId: string, query: string): Promise<MatrixSnapshot>;
  modifySearchAudio(baseId: string, anchorId: string): Promise<MatrixSnapshot>;
  modifyApply(group: string, column: number | "old"): Promise<ApplyRecord>;
  importance(): Promise<ImportanceRecord>;
  getPreset(presetId: string): Promise<PresetRecord>;
  getDiff(presetId: string, against: string): Promise<DiffRecord>;
  renderUrl(presetId: string): string;
}

/** HTTP client for the preset exploration service. */
export class StudioApi implements Api {
  private readonly base: string;
  private session = "";

  constructor(base = "") {
    this.base = base;
  }

  /** Session token used by every session scoped call. */
  get sessionId(): string {
    return this.session;
  }

  set sessionId(value: string) {
    this.session = value;
  }

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
    signal?: AbortSignal,
  ): Promise<T> {
    const init: RequestInit = { method, signal };
    if (body !== undefined) {
      init.headers = { "content-type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const resp = await fetch(this.base + path, init);
    if (!resp.ok) {
      let code = "error";
      let message = `${resp.status} ${resp.statusText}`;
      try {
        const err = (await resp.json()) as { code?: string; message?: string };
        if (err.code) code = err.code;
        if (err.message) message = err.message;
      } catch {
        // Body was not the structured error shape; keep the status text.
      }
      throw new ApiError(resp.status, code, message);
    }
    return (await resp.json()) as T;
  }

  health(): Promise<HealthRecord> {
    return this.request("GET", "/health");
  }

  async createSession(): Promise<SessionRecord> {
    const rec = await this.request<SessionRecord>("POST", "/sessions", {});
    this.session = rec.session;
    return rec;
  }

  getSession(): Promise<SessionRecord> {
    return this.request("GET", `/sessions/${encodeURIComponent(this.session)}`);
  }

  searchText(query: string, signal?: AbortSignal): Promise<SearchResults> {
    return this.request("POST", "/search/text", { session: this.session, query }, signal);
  }

  searchAudio(presetId: string, signal?: AbortSignal): Promise<SearchResults> {
    return this.request(
      "POST",
      "/search/audio",
      { session: this.session, preset_id: presetId },
      signal,
    );
  }

  favorite(presetId: string, action: "add" | "remove"): Promise<FavoritesRecord> {
    return this.request("POST", "/favorites", {
      session: this.session,
      preset_id: presetId,
      action,
    });
  }

  mix(): Promise<MixRecord> {
    return this.request("POST", "/mix", { session: this.session });
  }

  navigate(dir: "next" | "prev" | "clear"): Promise<GenerationBadge> {
    return this.request("POST", "/generations/navigate", { session: this.session, dir });
  }

  modifySearchText(baseId: string, query: string): Promise<MatrixSnapshot> {
    return this.request("POST", "/modify/search", {
      session: this.session,
      base_id: baseId,
      query,
    });
  }

  modifySearchAudio(baseId: string, anchorId: string): Promise<MatrixSnapshot> {
    return this.request("POST", "/modify/search", {
      session: this.session,
      base_id: baseId,
      anchor_id: anchorId,
    });
  }

  modifyApply(group: string, column: number | "old"): Promise<ApplyRecord> {
    return this.request("POST", "/modify/apply", { session: this.session, group, column });
  }

  importance(): Promise<ImportanceRecord> {
    return this.request("GET", `/modify/importance?session=${encodeURIComponent(this.session)}`);
  }

  getPreset(presetId: string): Promise<PresetRecord> {
    return this.request(
      "GET",
      `/presets/${encodeURIComponent(presetId)}?session=${encodeURIComponent(this.session)}`,
    );
  }

  getDiff(presetId: string, against: string): Promise<DiffRecord> {
    const q = `against=${encodeURIComponent(against)}&session=${encodeURIComponent(this.session)}`;
    return this.request("GET", `/presets/${encodeURIComponent(presetId)}/diff?${q}`);
  }

  /** URL of the rendered audio; playback goes through the browser decoder. */
  renderUrl(presetId: string): string {
    const pid = encodeURIComponent(presetId);
    return `${this.base}/render/${pid}?session=${encodeURIComponent(this.session)}`;
  }
}
