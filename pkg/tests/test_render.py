"""Renderer contract: sample grid, determinism, envelope shape, WAV bytes."""

import math
import wave as wave_mod
from io import BytesIO

import numpy as np
import pytest

from presetlab.audio import Recording
from presetlab.bank import generate_bank
from presetlab.preset import Preset
from presetlab.render import (
    DEFAULT_CONFIG,
    MIDDLE_C_HZ,
    SynthConfig,
    _ENV_CACHE,
    _OSC_CACHE,
    _exp_map,
    _sample_times,
    adsr_envelope,
    preset_sound_hash,
    render,
)


def preset_with(schema, updates, pid="t", name="T"):
    return Preset(id=pid, name=name, values=schema.default_values()).with_values(updates)


def clear_stage_caches():
    _OSC_CACHE._store.clear()
    _ENV_CACHE._store.clear()


class TestContract:
    def test_length_rate_dtype(self, schema):
        rec = render(preset_with(schema, {}), schema)
        assert rec.samples.shape == (192000,)
        assert rec.samples.dtype == np.float32
        assert rec.sample_rate == 48000
        assert rec.duration == 4.0

    def test_middle_c_pitch(self):
        assert MIDDLE_C_HZ == pytest.approx(261.6255653, abs=1e-6)

    def test_limiter_bound_on_hot_preset(self, schema):
        hot = preset_with(schema, {
            "osc2_level": 1.0, "sub_level": 1.0, "vcf_drive": 1.0,
            "vcf_resonance": 1.0, "amp_gain": 1.0, "amp_boost": "on",
            "delay_send": 1.0, "delay_feedback": 1.0,
        })
        y = render(hot, schema).samples
        assert np.all(np.abs(y) <= 1.0)
        assert np.max(np.abs(y)) > 0.9  # the limiter actually engaged

    def test_custom_config_length(self, schema):
        cfg = SynthConfig(sample_rate=24000, duration=2.0, gate_time=0.5)
        rec = render(preset_with(schema, {}), schema, cfg)
        assert rec.samples.shape == (48000,)
        assert rec.sample_rate == 24000
        # the filter cutoff must track the lower Nyquist; no blowup
        assert np.all(np.isfinite(rec.samples))
        assert np.max(np.abs(rec.samples)) > 0.01


class TestDeterminism:
    def noisy_preset(self, schema, pid="noisy", name="Noisy"):
        # noise osc + sample-hold vibrato: both hashed-noise paths active
        return preset_with(schema, {
            "noise_level": 0.4, "lfo2_wave": "sample_hold", "lfo2_depth": 0.6,
            "vcf_cutoff": 0.4, "vcf_env_amount": 0.9,
        }, pid=pid, name=name)

    def test_bitwise_repeatable_hot_and_cold(self, schema):
        p = self.noisy_preset(schema)
        first = render(p, schema).samples
        second = render(p, schema).samples  # warm caches
        clear_stage_caches()
        third = render(p, schema).samples  # cold caches
        assert np.array_equal(first, second)
        assert np.array_equal(first, third)

    def test_cacheable_preset_same_hot_and_cold(self, schema):
        p = preset_with(schema, {"osc2_level": 0.7, "lfo2_depth": 0.3})
        clear_stage_caches()
        cold = render(p, schema).samples
        warm = render(p, schema).samples
        assert np.array_equal(cold, warm)

    def test_rename_does_not_change_sound(self, schema):
        a = self.noisy_preset(schema, pid="one_name")
        b = self.noisy_preset(schema, pid="another_name", name="Other")
        assert np.array_equal(render(a, schema).samples, render(b, schema).samples)

    def test_sound_hash_tracks_values_not_names(self, schema):
        a = self.noisy_preset(schema, pid="x")
        b = self.noisy_preset(schema, pid="y", name="Y")
        assert preset_sound_hash(a, schema) == preset_sound_hash(b, schema)
        c = a.with_values({"noise_level": 0.5})
        assert preset_sound_hash(c, schema) != preset_sound_hash(a, schema)

    def test_cached_buffers_are_immutable(self, schema):
        p = preset_with(schema, {"osc2_level": 0.7})
        render(p, schema)
        for buf in list(_OSC_CACHE._store.values()) + list(_ENV_CACHE._store.values()):
            assert not buf.flags.writeable


def adsr_scalar(t, gate, attack, decay, sustain, release):
    """Pointwise ADSR from the definition; shares only the knob maps."""
    attack_s = _exp_map(attack, 0.001, 2.0)
    decay_tau = _exp_map(decay, 0.002, 1.5)
    release_tau = _exp_map(release, 0.002, 1.5)
    if t < gate:
        if t < attack_s:
            return t / attack_s
        return sustain + (1.0 - sustain) * math.exp(-(t - attack_s) / decay_tau)
    if attack_s >= gate:
        gate_level = gate / attack_s
    else:
        gate_level = sustain + (1.0 - sustain) * math.exp(-(gate - attack_s) / decay_tau)
    return gate_level * math.exp(-(t - gate) / release_tau)


class TestEnvelope:
    CASES = [
        (0.3, 0.5, 0.6, 0.4),
        (0.0, 0.0, 1.0, 0.0),
        (0.9, 0.2, 0.0, 0.8),   # attack longer than the gate
        (1.0, 1.0, 0.5, 1.0),
    ]

    @pytest.mark.parametrize("attack,decay,sustain,release", CASES)
    def test_matches_pointwise_definition(self, attack, decay, sustain, release):
        gate = 1.0
        attack_s = _exp_map(attack, 0.001, 2.0)
        times = np.sort(np.concatenate([
            np.random.Generator(np.random.PCG64(3)).uniform(0.0, 4.0, 400),
            [0.0, gate, attack_s, min(attack_s, gate)],
        ]))
        env = adsr_envelope(times, gate, attack, decay, sustain, release)
        expect = [adsr_scalar(t, gate, attack, decay, sustain, release) for t in times]
        np.testing.assert_allclose(env, expect, rtol=1e-12, atol=1e-12)

    def test_release_starts_exactly_at_gate_sample(self):
        times = _sample_times(192000, 48000)
        assert times[48000] == np.float32(1.0)  # exact float32 grid point
        env = adsr_envelope(times, 1.0, 0.0, 0.9, 0.6, 0.2)
        # decay is still above sustain at the gate; release decays from there
        assert env[47999] > 0.6
        assert env[48000] == pytest.approx(
            adsr_scalar(1.0, 1.0, 0.0, 0.9, 0.6, 0.2), rel=1e-6)
        assert np.all(np.diff(env[48000:49000]) < 0)

    def test_audible_note_off(self, schema):
        # sustain high, release short: energy collapses after the gate closes
        p = preset_with(schema, {"amp_sustain": 1.0, "amp_release": 0.1})
        y = render(p, schema).samples.astype(np.float64)
        before = np.sqrt(np.mean(y[40000:48000] ** 2))
        after = np.sqrt(np.mean(y[96000:104000] ** 2))
        assert after < before * 0.05


class TestWav:
    def test_riff_fields_round_trip(self, schema):
        rec = render(preset_with(schema, {}), schema)
        with wave_mod.open(BytesIO(rec.wav_bytes()), "rb") as w:
            assert w.getnchannels() == 1
            assert w.getsampwidth() == 2
            assert w.getframerate() == 48000
            assert w.getnframes() == 192000

    def test_pcm_conversion_oracle(self):
        samples = np.array([0.0, 1.0, -1.0, 0.5, 2.0, -2.0, 1.5e-5], dtype=np.float32)
        rec = Recording(samples=samples, sample_rate=48000)
        with wave_mod.open(BytesIO(rec.wav_bytes()), "rb") as w:
            pcm = np.frombuffer(w.readframes(w.getnframes()), dtype="<i2")
        expect = np.clip(np.rint(samples.astype(np.float64) * 32767.0),
                         -32768, 32767).astype(np.int16)
        assert np.array_equal(pcm, expect)
        assert pcm[4] == 32767 and pcm[5] == -32768  # clipping, not wrapping

    def test_save_wav(self, schema, tmp_path):
        rec = render(preset_with(schema, {}), schema)
        out = tmp_path / "t.wav"
        rec.save_wav(out)
        assert out.read_bytes() == rec.wav_bytes()


class TestThroughput:
    def test_faster_than_real_time(self, schema):
        import time

        bank = generate_bank(schema, 12, seed=9)
        render(bank.presets[0], schema)  # warm scipy/numpy dispatch
        t0 = time.perf_counter()
        for p in bank.presets:
            render(p, schema)
        wall = time.perf_counter() - t0
        audio_seconds = 12 * DEFAULT_CONFIG.duration
        assert audio_seconds / wall > 50  # full 200-preset run lives in acceptance
