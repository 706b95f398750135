"""Exact cosine ranking of a generation against text or audio queries.

No index structure: bank sizes here are a few thousand presets, so a full
scan is milliseconds and trivially matches the brute-force oracle. Ties
break by preset id ascending. Result lists carry a query-kind tag so a UI
can color them; scores are exposed for debuggability.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bank import Generation
from .errors import DataError, UnknownPresetError

TEXT = "text"
AUDIO = "audio"


@dataclass(frozen=True)
class RankedResult:
    preset_id: str
    score: float
    rank: int


@dataclass(frozen=True)
class SearchResults:
    kind: str  # TEXT | AUDIO
    results: tuple[RankedResult, ...]

    def ids(self) -> list[str]:
        return [r.preset_id for r in self.results]


def _require_embedded(gen: Generation) -> None:
    if not gen.embedded:
        raise DataError("generation has no embeddings; embed it first")


def rank_by_vector(query_vec: np.ndarray, gen: Generation, k: int,
                   pin_first: str | None = None) -> list[RankedResult]:
    """Top-k by cosine (dot product of unit vectors), descending, ties by id.

    pin_first forces that preset to rank 1 regardless of ties (audio search
    puts the anchor itself at the top of the list).
    """
    if k < 0:
        raise DataError("k must be >= 0")
    n = len(gen)
    k = min(k, n)
    if k == 0:
        return []
    scores = gen.embedding_matrix @ np.asarray(query_vec, dtype=np.float64)
    ids = np.array([p.id for p in gen.presets])
    order = np.lexsort((ids, -scores))
    if pin_first is not None:
        anchor_idx = gen.index_of[pin_first]
        order = np.concatenate(([anchor_idx], order[order != anchor_idx]))
    return [
        RankedResult(preset_id=str(ids[i]), score=float(scores[i]), rank=r + 1)
        for r, i in enumerate(order[:k])
    ]


def text_search(query: str, gen: Generation, provider, k: int) -> SearchResults:
    if not query or not query.strip():
        raise DataError("empty text query")
    _require_embedded(gen)
    qv = provider.embed_text(query)
    return SearchResults(kind=TEXT, results=tuple(rank_by_vector(qv.values, gen, k)))


def audio_search(anchor_id: str, gen: Generation, k: int) -> SearchResults:
    _require_embedded(gen)
    if anchor_id not in gen.index_of:
        raise UnknownPresetError(f"no preset with id {anchor_id!r}")
    anchor_vec = gen.embedding_of(anchor_id)
    return SearchResults(
        kind=AUDIO,
        results=tuple(rank_by_vector(anchor_vec, gen, k, pin_first=anchor_id)),
    )
