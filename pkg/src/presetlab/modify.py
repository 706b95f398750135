"""Example-driven preset modification and the group importance highlighter.

The highlighter treats every parameter as a random variable. Its
distribution over the whole bank is compared, parameter by parameter,
against its distribution over the 100 presets closest to the query;
a large Jensen-Shannon distance means the parameter co-varies with what
the query describes. Per group, the 20 largest parameter distances are
averaged (so big groups aren't diluted by parameters left at default) and
shades are normalized linearly so the most important group always reads
as the deepest shade.

Continuous parameters bin into 10 equidistant regions plus a dedicated
narrow bin for the spec default (defaults are huge probability spikes in
real banks); discrete parameters get one bin per choice. Every bin takes
additive smoothing so the distance is finite everywhere.
"""

from __future__ import annotations

import weakref
from dataclasses import dataclass, replace

import numpy as np

from .bank import Generation
from .errors import DataError
from .preset import Preset
from .schema import CONTINUOUS, ParameterSchema, ParameterSpec
from .search import AUDIO, audio_search, rank_by_vector, text_search

CONTINUOUS_BINS = 10
DEFAULT_BIN_HALF_WIDTH = 0.005  # matches 6-decimal serialization granularity
TOP_PARAMS_PER_GROUP = 20
CONDITIONED_CORPUS = 100
SMOOTHING_ALPHA = 1.0
EXAMPLE_COLUMNS = 10

OLD = "old"
ALL_GROUPS = "ALL"


def js_distance(p: np.ndarray, q: np.ndarray) -> float:
    """Jensen-Shannon distance: sqrt of the base-2 JS divergence, in [0, 1]."""
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    m = 0.5 * (p + q)
    def _kl(a):
        mask = a > 0.0
        return float(np.sum(a[mask] * np.log2(a[mask] / m[mask])))
    jsd = 0.5 * _kl(p) + 0.5 * _kl(q)
    return float(np.sqrt(min(max(jsd, 0.0), 1.0)))


def bin_count(spec: ParameterSpec) -> int:
    if spec.kind == CONTINUOUS:
        return CONTINUOUS_BINS + 1  # last bin is the default-value window
    return len(spec.choices)


def bin_index(spec: ParameterSpec, value) -> int:
    """A continuous value inside the default window goes to the default bin,
    never to its equidistant bin."""
    if spec.kind == CONTINUOUS:
        if abs(value - spec.default) <= DEFAULT_BIN_HALF_WIDTH:
            return CONTINUOUS_BINS
        return min(int(value * CONTINUOUS_BINS), CONTINUOUS_BINS - 1)
    return spec.choices.index(value)


@dataclass(frozen=True)
class ParameterDistribution:
    param_id: str
    masses: np.ndarray

    def __post_init__(self):
        total = float(self.masses.sum())
        if not np.isclose(total, 1.0, atol=1e-9):
            raise DataError(f"{self.param_id}: masses sum to {total}, not 1")


def distribution(spec: ParameterSpec, values, alpha: float = SMOOTHING_ALPHA) -> ParameterDistribution:
    counts = np.zeros(bin_count(spec), dtype=np.float64)
    for v in values:
        counts[bin_index(spec, v)] += 1.0
    counts += alpha
    return ParameterDistribution(param_id=spec.id, masses=counts / counts.sum())


# keyed by generation identity, then by smoothing alpha; generations are
# immutable once embedded, so cached baselines never go stale
_baseline_cache: "weakref.WeakKeyDictionary[Generation, dict[float, dict[str, ParameterDistribution]]]" = (
    weakref.WeakKeyDictionary()
)


def baseline_distributions(gen: Generation, schema: ParameterSchema,
                           alpha: float = SMOOTHING_ALPHA) -> dict[str, ParameterDistribution]:
    per_alpha = _baseline_cache.setdefault(gen, {})
    cached = per_alpha.get(alpha)
    if cached is not None:
        return cached
    result = {
        spec.id: distribution(spec, [p.values[spec.id] for p in gen.presets], alpha)
        for spec in schema.params
    }
    per_alpha[alpha] = result
    return result


@dataclass(frozen=True)
class GroupScore:
    group: str
    raw: float
    shade: float


@dataclass(frozen=True)
class GroupImportance:
    scores: tuple[GroupScore, ...]
    top_group: str | None  # None when every raw score is 0
    corpus_size: int
    truncated: bool  # bank smaller than the requested corpus

    def shade_of(self, group: str) -> float:
        for s in self.scores:
            if s.group == group:
                return s.shade
        raise DataError(f"unknown group {group!r}")

    def to_records(self) -> list[dict]:
        return [{"group": s.group, "raw": s.raw, "shade": s.shade} for s in self.scores]


def group_importance(
    query,
    gen: Generation,
    provider,
    schema: ParameterSchema,
    corpus_size: int = CONDITIONED_CORPUS,
    top_params: int = TOP_PARAMS_PER_GROUP,
    alpha: float = SMOOTHING_ALPHA,
) -> GroupImportance:
    """query is a text string or ``("audio", preset_id)`` for an anchor."""
    if len(gen) == 0:
        raise DataError("cannot compute importance over an empty generation")
    if isinstance(query, tuple) and query[0] == AUDIO:
        qv = gen.embedding_of(query[1])
    else:
        qv = provider.embed_text(query).values
    truncated = len(gen) < corpus_size
    k = min(corpus_size, len(gen))
    top = rank_by_vector(qv, gen, k)
    top_presets = [gen.get(r.preset_id) for r in top]

    baselines = baseline_distributions(gen, schema, alpha)
    distances: dict[str, float] = {}
    for spec in schema.params:
        conditioned = distribution(spec, [p.values[spec.id] for p in top_presets], alpha)
        distances[spec.id] = js_distance(baselines[spec.id].masses, conditioned.masses)

    raws = []
    for group in schema.groups:
        group_dists = sorted((distances[s.id] for s in schema.by_group[group]), reverse=True)
        top_n = group_dists[: min(top_params, len(group_dists))]
        raws.append(float(np.mean(top_n)))
    max_raw = max(raws)
    if max_raw <= 0.0:
        shades = [0.0] * len(raws)
        top_group = None
    else:
        shades = [r / max_raw for r in raws]
        top_group = schema.groups[int(np.argmax(raws))]
    return GroupImportance(
        scores=tuple(
            GroupScore(group=g, raw=r, shade=s)
            for g, r, s in zip(schema.groups, raws, shades)
        ),
        top_group=top_group,
        corpus_size=k,
        truncated=truncated,
    )


@dataclass
class ExampleMatrix:
    """The modification grid: the base ("old") column plus up to 10 retrieved
    example columns; one selection per parameter group."""

    base: Preset
    examples: list[Preset]
    query_kind: str
    selections: dict[str, object]  # group -> OLD | 1-based column

    @classmethod
    def fresh(cls, base: Preset, examples, query_kind: str, schema: ParameterSchema):
        return cls(
            base=base,
            examples=list(examples),
            query_kind=query_kind,
            selections={g: OLD for g in schema.groups},
        )

    def example_ids(self) -> list[str]:
        return [p.id for p in self.examples]

    def snapshot(self) -> dict:
        return {
            "base_id": self.base.id,
            "example_ids": self.example_ids(),
            "query_kind": self.query_kind,
            "selections": dict(self.selections),
        }


def search_examples(
    query,
    gen: Generation,
    provider,
    schema: ParameterSchema,
    base: Preset,
    columns: int = EXAMPLE_COLUMNS,
) -> ExampleMatrix:
    """Retrieve example columns with the same multimodal search the preset
    list uses; the base survives searches, selections reset to all-old, and
    the presets are snapshotted so later clicks reference saved values."""
    if isinstance(query, tuple) and query[0] == AUDIO:
        results = audio_search(query[1], gen, columns)
    else:
        results = text_search(query, gen, provider, columns)
    examples = [gen.get(r.preset_id) for r in results.results]
    return ExampleMatrix.fresh(base=base, examples=examples,
                               query_kind=results.kind, schema=schema)


def _compose(matrix: ExampleMatrix, schema: ParameterSchema) -> Preset:
    if all(sel == OLD for sel in matrix.selections.values()):
        return matrix.base
    values: dict[str, float | str] = {}
    for group in schema.groups:
        sel = matrix.selections[group]
        source = matrix.base if sel == OLD else matrix.examples[sel - 1]
        for spec in schema.by_group[group]:
            values[spec.id] = source.values[spec.id]
    return replace(
        matrix.base,
        id=f"{matrix.base.id}~mod",
        name=f"{matrix.base.name} (modified)",
        values=values,
        provenance="modified",
    )


def apply_selection(matrix: ExampleMatrix, group: str, column, schema: ParameterSchema) -> Preset:
    """Click a matrix cell: ALL rows copy a whole example (or restore the
    base); a group row copies just that group. Returns the composed preset
    and updates the matrix selections."""
    if column != OLD:
        if not isinstance(column, int) or not 1 <= column <= len(matrix.examples):
            raise DataError(f"column {column!r} out of range (1..{len(matrix.examples)})")
    if group == ALL_GROUPS:
        for g in matrix.selections:
            matrix.selections[g] = column
    elif group in matrix.selections:
        matrix.selections[group] = column
    else:
        raise DataError(f"unknown group {group!r}")
    return _compose(matrix, schema)
