"""Genetic mixing: uniform crossover over parameter groups.

Breeding two parents produces child pairs where each of the 13 groups is
inherited whole from one parent with equal probability, and the second
child always receives the complement. Mixing a favorites list breeds every
unordered pair 5 times (10 children per pair, so 10 * C(n,2) children),
then renders and embeds the new generation so it stays searchable.

The RNG is numpy PCG64 seeded per mix; draw order is pair-major then
operation-minor with one 13-way coin array per operation, so a recorded
seed replays a generation exactly.
"""

from __future__ import annotations

import datetime as _dt
from dataclasses import dataclass, field

import numpy as np

from .bank import Generation
from .embed import embed_generation
from .errors import DataError, UnknownPresetError
from .preset import Preset
from .render import DEFAULT_CONFIG, SynthConfig
from .schema import ParameterSchema

OPS_PER_PAIR = 5


@dataclass
class Favorites:
    """Ordered preset ids; duplicates rejected at insert."""

    ids: list[str] = field(default_factory=list)

    def add(self, preset_id: str) -> None:
        if preset_id in self.ids:
            raise DataError(f"{preset_id!r} is already a favorite")
        self.ids.append(preset_id)

    def remove(self, preset_id: str) -> None:
        try:
            self.ids.remove(preset_id)
        except ValueError:
            raise DataError(f"{preset_id!r} is not a favorite") from None

    def __len__(self) -> int:
        return len(self.ids)


@dataclass(frozen=True)
class GenerationMeta:
    parents: tuple[str, ...]
    seed: int
    created_at: str


@dataclass
class GenerationChain:
    """Generation 0 is the default bank; mixing appends, clear truncates."""

    generations: list[Generation]
    metas: list[GenerationMeta | None]
    cursor: int = 0

    @classmethod
    def from_default_bank(cls, gen0: Generation) -> "GenerationChain":
        return cls(generations=[gen0], metas=[None], cursor=0)

    def current(self) -> Generation:
        return self.generations[self.cursor]

    def append(self, gen: Generation, meta: GenerationMeta) -> None:
        self.generations.append(gen)
        self.metas.append(meta)
        self.cursor = len(self.generations) - 1

    def find_preset(self, preset_id: str) -> Preset:
        for gen in self.generations:
            if preset_id in gen.index_of:
                return gen.get(preset_id)
        raise UnknownPresetError(f"no preset with id {preset_id!r} in any generation")

    def navigate(self, direction: str) -> "GenerationChain":
        if direction == "next":
            self.cursor = min(self.cursor + 1, len(self.generations) - 1)
        elif direction == "prev":
            self.cursor = max(self.cursor - 1, 0)
        elif direction == "clear":
            del self.generations[1:]
            del self.metas[1:]
            self.cursor = 0
        else:
            raise DataError(f"unknown direction {direction!r}")
        return self


def crossover_masks(rng: np.random.Generator, n_groups: int) -> np.ndarray:
    """One fair coin per group; 1 means child 1 inherits parent A's group."""
    return rng.integers(0, 2, size=n_groups)


def _child_values(take_a: np.ndarray, a: Preset, b: Preset, schema: ParameterSchema):
    values: dict[str, float | str] = {}
    for gi, group in enumerate(schema.groups):
        source = a if take_a[gi] else b
        for spec in schema.by_group[group]:
            values[spec.id] = source.values[spec.id]
    return values


def breed_pair(
    a: Preset,
    b: Preset,
    schema: ParameterSchema,
    ops: int = OPS_PER_PAIR,
    rng: np.random.Generator | int = 0,
    id_base: str | None = None,
) -> list[Preset]:
    """2*ops children; each operation yields a child and its complement."""
    if set(a.values) != set(b.values):
        raise DataError("parents do not share a schema")
    if ops < 1:
        raise DataError("ops must be >= 1")
    if not isinstance(rng, np.random.Generator):
        rng = np.random.Generator(np.random.PCG64(rng))
    base = id_base if id_base is not None else f"{a.id}+{b.id}"
    children: list[Preset] = []
    for op in range(ops):
        mask = crossover_masks(rng, len(schema.groups))
        for k, take_a in enumerate((mask, 1 - mask)):
            cid = f"{base}_{2 * op + k:02d}"
            children.append(
                Preset(id=cid, name=cid, provenance="mixed",
                       values=_child_values(take_a, a, b, schema))
            )
    return children


def mix(
    favorites: Favorites,
    chain: GenerationChain,
    schema: ParameterSchema,
    provider,
    seed: int,
    config: SynthConfig = DEFAULT_CONFIG,
    ops_per_pair: int = OPS_PER_PAIR,
) -> Generation:
    """Breed every unordered favorite pair, embed the children, append the
    generation and move the cursor to it. On any failure the chain is
    unchanged (the append happens last)."""
    if len(favorites) < 2:
        raise DataError("need at least 2 favorites to mix")
    parents = [chain.find_preset(pid) for pid in favorites.ids]
    gen_index = len(chain.generations)
    rng = np.random.Generator(np.random.PCG64(seed))
    children: list[Preset] = []
    counter = 0
    for i in range(len(parents)):
        for j in range(i + 1, len(parents)):
            for op in range(ops_per_pair):
                mask = crossover_masks(rng, len(schema.groups))
                for take_a in (mask, 1 - mask):
                    cid = f"g{gen_index}_{counter:03d}"
                    children.append(
                        Preset(id=cid, name=cid, provenance="mixed",
                               values=_child_values(take_a, parents[i], parents[j], schema))
                    )
                    counter += 1
    gen = Generation(presets=children)
    embed_generation(gen, provider, schema, config)
    meta = GenerationMeta(
        parents=tuple(favorites.ids),
        seed=seed,
        created_at=_dt.datetime.now(_dt.timezone.utc).isoformat(),
    )
    chain.append(gen, meta)
    return gen
