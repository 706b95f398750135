"""Shared fixtures: the reference schema, seeded banks, and a hash-based
provider so combinatorial tests can embed thousands of presets without
rendering any audio."""

from __future__ import annotations

import hashlib

import numpy as np
import pytest

from presetlab.bank import Generation, generate_bank
from presetlab.embed import EmbeddingVector, SpectralProvider, embed_generation
from presetlab.schema import load_reference_schema


class HashProvider:
    """Deterministic unit vectors derived from key/query digests. Needs no
    audio, so embedding a generation skips the renderer entirely."""

    name = "hash"
    dimension = 16
    needs_audio = False

    def _vector(self, tag: str) -> np.ndarray:
        digest = hashlib.blake2b(tag.encode(), digest_size=8).digest()
        rng = np.random.Generator(np.random.PCG64(int.from_bytes(digest, "big")))
        return rng.standard_normal(self.dimension)

    def embed_audio(self, recording=None, key: str | None = None) -> EmbeddingVector:
        if key is None:
            raise ValueError("hash provider needs a preset id key")
        return EmbeddingVector.normalized(self._vector(f"audio:{key}"))

    def embed_text(self, query: str) -> EmbeddingVector:
        return EmbeddingVector.normalized(self._vector(f"text:{query}"))


@pytest.fixture(scope="session")
def schema():
    return load_reference_schema()


@pytest.fixture(scope="session")
def hash_provider():
    return HashProvider()


@pytest.fixture(scope="session")
def bank16(schema, hash_provider):
    """16 seeded presets with hash embeddings attached. Treat as read-only."""
    gen = generate_bank(schema, 16, seed=11)
    return embed_generation(gen, hash_provider, schema)


@pytest.fixture(scope="session")
def spectral_provider():
    return SpectralProvider()


@pytest.fixture(scope="session")
def spectral_bank(schema, spectral_provider):
    """A small bank embedded through the real render + spectral pipeline."""
    gen = generate_bank(schema, 10, seed=5)
    return embed_generation(gen, spectral_provider, schema)


@pytest.fixture
def fresh_bank16(schema, hash_provider):
    """Per-test copy for tests that mutate the generation or its chain."""
    gen = generate_bank(schema, 16, seed=11)
    return embed_generation(gen, hash_provider, schema)


def make_generation(presets, vectors=None) -> Generation:
    gen = Generation(presets=list(presets))
    if vectors is not None:
        gen.embedding_matrix = np.asarray(vectors, dtype=np.float64)
    return gen
