"""Genetic mixing: count law, complement law, fairness, chain semantics."""

import math

import numpy as np
import pytest

from presetlab.bank import generate_bank
from presetlab.errors import DataError, UnknownPresetError
from presetlab.mixing import (
    Favorites,
    GenerationChain,
    OPS_PER_PAIR,
    breed_pair,
    crossover_masks,
    mix,
)
from presetlab.preset import Preset, validate_preset


def distinct_parents(schema):
    """Two presets that differ in every parameter, so each child group's
    source is observable from any single value in it."""
    a_vals, b_vals = {}, {}
    for spec in schema.params:
        if spec.kind == "continuous":
            a_vals[spec.id], b_vals[spec.id] = 0.25, 0.75
        else:
            a_vals[spec.id], b_vals[spec.id] = spec.choices[0], spec.choices[-1]
            if spec.choices[0] == spec.choices[-1]:  # defensive; never happens
                raise AssertionError(f"{spec.id} cannot be distinguished")
    a = Preset(id="parent_a", name="A", values=a_vals)
    b = Preset(id="parent_b", name="B", values=b_vals)
    return a, b


def group_sources(child, a, b, schema):
    """Oracle: classify each group as inherited from a, from b, or torn."""
    sources = []
    for group in schema.groups:
        froms = {
            "a" if child.values[s.id] == a.values[s.id] else "b"
            for s in schema.by_group[group]
        }
        sources.append(froms.pop() if len(froms) == 1 else "torn")
    return sources


class TestFavorites:
    def test_insert_order_kept(self):
        fav = Favorites()
        for pid in ("x", "m", "a"):
            fav.add(pid)
        assert fav.ids == ["x", "m", "a"]
        assert len(fav) == 3

    def test_duplicate_rejected(self):
        fav = Favorites(ids=["x"])
        with pytest.raises(DataError, match="already a favorite"):
            fav.add("x")

    def test_remove_missing_rejected(self):
        with pytest.raises(DataError, match="not a favorite"):
            Favorites().remove("ghost")


class TestBreedPair:
    def test_children_per_op(self, schema):
        a, b = distinct_parents(schema)
        assert len(breed_pair(a, b, schema, ops=7, rng=1)) == 14
        assert len(breed_pair(a, b, schema)) == 2 * OPS_PER_PAIR == 10

    def test_complement_and_verbatim_groups(self, schema):
        a, b = distinct_parents(schema)
        children = breed_pair(a, b, schema, ops=50, rng=3)
        for k in range(0, len(children), 2):
            first = group_sources(children[k], a, b, schema)
            second = group_sources(children[k + 1], a, b, schema)
            assert "torn" not in first and "torn" not in second
            assert all(x != y for x, y in zip(first, second))

    def test_children_are_valid_presets(self, schema):
        a, b = distinct_parents(schema)
        for child in breed_pair(a, b, schema, ops=5, rng=9):
            validate_preset(child, schema)
            assert child.provenance == "mixed"

    def test_child_ids_deterministic(self, schema):
        a, b = distinct_parents(schema)
        children = breed_pair(a, b, schema, ops=2, rng=4)
        assert [c.id for c in children] == [
            "parent_a+parent_b_00", "parent_a+parent_b_01",
            "parent_a+parent_b_02", "parent_a+parent_b_03"]

    def test_seed_reproducibility(self, schema):
        a, b = distinct_parents(schema)
        one = breed_pair(a, b, schema, ops=10, rng=42)
        two = breed_pair(a, b, schema, ops=10, rng=42)
        assert [(c.id, c.values) for c in one] == [(c.id, c.values) for c in two]
        other = breed_pair(a, b, schema, ops=10, rng=43)
        assert any(c.values != d.values for c, d in zip(one, other))

    def test_mismatched_parents_rejected(self, schema):
        a, b = distinct_parents(schema)
        short = Preset(id="s", name="s", values={"vcf_cutoff": 0.5})
        with pytest.raises(DataError, match="share a schema"):
            breed_pair(a, short, schema)

    def test_nonpositive_ops_rejected(self, schema):
        a, b = distinct_parents(schema)
        with pytest.raises(DataError, match="ops must be"):
            breed_pair(a, b, schema, ops=0)


class TestFairness:
    def test_group_source_frequency(self, schema):
        a, b = distinct_parents(schema)
        children = breed_pair(a, b, schema, ops=1000, rng=12345)
        firsts = children[0::2]  # complements would force exactly 0.5
        took_a = 0
        for child in firsts:
            took_a += group_sources(child, a, b, schema).count("a")
        frequency = took_a / (len(firsts) * len(schema.groups))
        assert abs(frequency - 0.5) < 0.02

    def test_masks_are_binary(self):
        rng = np.random.Generator(np.random.PCG64(0))
        masks = crossover_masks(rng, 13)
        assert masks.shape == (13,)
        assert set(np.unique(masks)) <= {0, 1}


class TestMix:
    def favorites_chain(self, schema, hash_provider, n):
        from presetlab.embed import embed_generation

        gen0 = embed_generation(generate_bank(schema, 12, seed=11),
                                hash_provider, schema)
        chain = GenerationChain.from_default_bank(gen0)
        fav = Favorites()
        for p in gen0.presets[:n]:
            fav.add(p.id)
        return fav, chain

    @pytest.mark.parametrize("n", [2, 3, 5, 8])
    def test_count_law(self, schema, hash_provider, n):
        fav, chain = self.favorites_chain(schema, hash_provider, n)
        gen = mix(fav, chain, schema, hash_provider, seed=5)
        assert len(gen) == 10 * math.comb(n, 2)

    def test_children_named_by_generation(self, schema, hash_provider):
        fav, chain = self.favorites_chain(schema, hash_provider, 2)
        gen1 = mix(fav, chain, schema, hash_provider, seed=5)
        assert [p.id for p in gen1.presets] == [f"g1_{i:03d}" for i in range(10)]
        gen2 = mix(fav, chain, schema, hash_provider, seed=6)
        assert [p.id for p in gen2.presets] == [f"g2_{i:03d}" for i in range(10)]

    def test_children_embedded_and_cursor_moved(self, schema, hash_provider):
        fav, chain = self.favorites_chain(schema, hash_provider, 3)
        gen = mix(fav, chain, schema, hash_provider, seed=5)
        assert gen.embedded
        assert chain.current() is gen
        assert chain.metas[-1].parents == tuple(fav.ids)
        assert chain.metas[-1].seed == 5

    def test_seeded_mix_reproducible(self, schema, hash_provider):
        fav1, chain1 = self.favorites_chain(schema, hash_provider, 4)
        fav2, chain2 = self.favorites_chain(schema, hash_provider, 4)
        g1 = mix(fav1, chain1, schema, hash_provider, seed=77)
        g2 = mix(fav2, chain2, schema, hash_provider, seed=77)
        assert [(p.id, p.values) for p in g1.presets] == \
               [(p.id, p.values) for p in g2.presets]
        assert np.array_equal(g1.embedding_matrix, g2.embedding_matrix)

    def test_parents_can_span_generations(self, schema, hash_provider):
        fav, chain = self.favorites_chain(schema, hash_provider, 2)
        gen1 = mix(fav, chain, schema, hash_provider, seed=5)
        cross = Favorites(ids=[chain.generations[0].presets[0].id,
                               gen1.presets[0].id])
        gen2 = mix(cross, chain, schema, hash_provider, seed=6)
        assert len(gen2) == 10

    def test_too_few_favorites(self, schema, hash_provider):
        fav, chain = self.favorites_chain(schema, hash_provider, 1)
        with pytest.raises(DataError, match="at least 2"):
            mix(fav, chain, schema, hash_provider, seed=5)

    def test_unknown_favorite(self, schema, hash_provider):
        fav, chain = self.favorites_chain(schema, hash_provider, 2)
        fav.ids.append("ghost")
        with pytest.raises(UnknownPresetError):
            mix(fav, chain, schema, hash_provider, seed=5)

    def test_failed_embed_leaves_chain_unchanged(self, schema, hash_provider):
        class ExplodingProvider:
            name = "exploding"
            dimension = 4
            needs_audio = False

            def embed_audio(self, recording=None, key=None):
                from presetlab.errors import ProviderError

                raise ProviderError("boom")

        fav, chain = self.favorites_chain(schema, hash_provider, 2)
        before = len(chain.generations)
        with pytest.raises(Exception):
            mix(fav, chain, schema, ExplodingProvider(), seed=5)
        assert len(chain.generations) == before
        assert chain.cursor == 0


class TestNavigate:
    def chain_with_two_generations(self, schema, hash_provider):
        from presetlab.embed import embed_generation

        gen0 = embed_generation(generate_bank(schema, 4, seed=11),
                                hash_provider, schema)
        chain = GenerationChain.from_default_bank(gen0)
        fav = Favorites(ids=[gen0.presets[0].id, gen0.presets[1].id])
        mix(fav, chain, schema, hash_provider, seed=1)
        return chain

    def test_prev_next_clamp(self, schema, hash_provider):
        chain = self.chain_with_two_generations(schema, hash_provider)
        assert chain.cursor == 1
        chain.navigate("next")
        assert chain.cursor == 1  # clamped at the newest generation
        chain.navigate("prev")
        assert chain.cursor == 0
        chain.navigate("prev")
        assert chain.cursor == 0  # clamped at the default bank

    def test_clear_truncates_to_default(self, schema, hash_provider):
        chain = self.chain_with_two_generations(schema, hash_provider)
        chain.navigate("clear")
        assert chain.cursor == 0
        assert len(chain.generations) == 1
        assert chain.metas == [None]

    def test_unknown_direction(self, schema, hash_provider):
        chain = self.chain_with_two_generations(schema, hash_provider)
        with pytest.raises(DataError, match="unknown direction"):
            chain.navigate("sideways")

    def test_find_preset_searches_all_generations(self, schema, hash_provider):
        chain = self.chain_with_two_generations(schema, hash_provider)
        gen0_id = chain.generations[0].presets[0].id
        assert chain.find_preset(gen0_id).id == gen0_id
        assert chain.find_preset("g1_003").id == "g1_003"
        with pytest.raises(UnknownPresetError, match="any generation"):
            chain.find_preset("ghost")
