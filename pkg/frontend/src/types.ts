/** Response shapes of the preset exploration service, mirrored one to one. */

export interface HealthRecord {
  status: string;
  bank_size: number;
  provider: string;
  kernel_backend: string;
  sample_rate: number;
}

export interface GenerationBadge {
  index: number;
  size: number;
  count: number;
}

export interface ChainEntry {
  index: number;
  size: number;
  parents?: string[];
  seed?: number;
}

export interface MatrixSnapshot {
  base_id: string;
  example_ids: string[];
  query_kind: "text" | "audio";
  // Keyed by group name in schema order; value is "old" or an example column.
  selections: Record<string, number | "old">;
}

export interface SessionRecord {
  session: string;
  created_at: string;
  updated_at: string;
  generation: GenerationBadge;
  chain: ChainEntry[];
  favorites: string[];
  current_preset: string | null;
  matrix: MatrixSnapshot | null;
}

export interface SearchHit {
  rank: number;
  id: string;
  score: number;
  name: string;
  provenance: string;
}

export interface SearchResults {
  kind: "text" | "audio";
  results: SearchHit[];
}

export interface FavoritesRecord {
  favorites: string[];
}

export interface MixRecord {
  index: number;
  size: number;
  seed: number;
  parents: string[];
  children: string[];
}

export interface ImportanceScore {
  group: string;
  raw: number;
  shade: number;
}

export interface ImportanceRecord {
  scores: ImportanceScore[];
  top_group: string | null;
  corpus_size: number;
  truncated: boolean;
}

// Continuous parameters arrive as numbers, choice parameters as strings.
export type ParamValue = string | number;

export interface PresetRecord {
  id: string;
  name: string;
  provenance: string;
  values: Record<string, ParamValue>;
}

export interface ChangedParam {
  id: string;
  old: ParamValue;
  new: ParamValue;
}

export interface DiffRecord {
  changed_params: ChangedParam[];
  changed_groups: string[];
}

export interface ApplyRecord {
  preset: PresetRecord;
  diff: DiffRecord;
}

export interface ErrorBody {
  code: string;
  message: string;
  detail: string | null;
}
