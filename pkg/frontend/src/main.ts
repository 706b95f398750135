import { StudioApi } from "./api";
import { MixerPanel } from "./mixer";
import { ModifyPanel } from "./matrix";
import { ParamPanel } from "./params";
import { Oscilloscope } from "./scope";
import { SearchPanel } from "./search";
import { decodeWav } from "./wav";

const SESSION_KEY = "presetlab-session";

/**
 * Wire the panels together.  All state shown anywhere originates from a
 * service response; the only local bookkeeping is which preset is current
 * and which preset the modification matrix is based on.
 */
async function boot(): Promise<void> {
  const api = new StudioApi();
  const $ = (id: string): HTMLElement => document.getElementById(id)!;

  const player = $("player") as HTMLAudioElement;
  const scope = new Oscilloscope($("scope") as HTMLCanvasElement);
  const params = new ParamPanel($("param-panel"), api);

  let current: string | null = null;
  let modifyBase: string | null = null;

  const audition = async (presetId: string): Promise<void> => {
    const url = api.renderUrl(presetId);
    player.src = url;
    void player.play().catch(() => undefined);
    const resp = await fetch(url);
    scope.draw(decodeWav(await resp.arrayBuffer()).samples);
  };

  const pick = async (presetId: string): Promise<void> => {
    current = presetId;
    modifyBase = presetId;
    search.setAnchor(presetId);
    modify.setBase(presetId);
    $("current-preset").textContent = presetId;
    const preset = await api.getPreset(presetId);
    await params.show(preset, presetId);
    await audition(presetId);
  };

  const favorite = async (presetId: string): Promise<void> => {
    const rec = await api.favorite(presetId, "add");
    mixer.setFavorites(rec.favorites);
  };

  const search = new SearchPanel($("search-panel"), api, {
    onPick: (id) => void pick(id),
    onFavorite: (id) => void favorite(id),
  });

  const mixer = new MixerPanel($("mixer-panel"), api, {
    onPick: (id) => void pick(id),
    onFavorite: (id) => void favorite(id),
    onGenerationChange: () => void refreshSession(),
  });

  const modify = new ModifyPanel($("modify-panel"), api, {
    onApplied: (record) => {
      current = record.preset.id;
      search.setAnchor(current);
      $("current-preset").textContent = current;
      void params.show(record.preset, modifyBase ?? record.preset.id);
      void audition(record.preset.id);
    },
  });

  const refreshSession = async (): Promise<void> => {
    const rec = await api.getSession();
    mixer.setBadge(rec.generation);
    mixer.setFavorites(rec.favorites);
  };

  const health = await api.health();
  $("health").textContent =
    `${health.bank_size} presets · ${health.provider} retrieval · ` +
    `${health.kernel_backend} kernels · ${health.sample_rate} Hz`;

  // Reconnect to the session from before a refresh when it still exists.
  const saved = window.sessionStorage.getItem(SESSION_KEY);
  let record = null;
  if (saved) {
    api.sessionId = saved;
    record = await api.getSession().catch(() => null);
  }
  if (record === null) {
    record = await api.createSession();
    window.sessionStorage.setItem(SESSION_KEY, api.sessionId);
  }

  mixer.setBadge(record.generation);
  mixer.setFavorites(record.favorites);
  if (record.matrix) await modify.restore(record.matrix);
  if (record.current_preset) await pick(record.current_preset);
}

void boot();
