"""Offline subtractive-synth renderer.

Every preset renders to a deterministic 4-second mono recording: middle C,
note gated on for the first second, release tail for the rest. The mapped
parameter subset is documented in docs/synthesis.md; everything else in
the schema is inert for audio but still participates in mixing and
attribution.

Signal path: oscillators -> drive -> high-pass -> modulated main filter
(block-rate coefficient updates through the kernel backend) -> amp
envelope/gain/tremolo -> feedback delay -> DC blocker -> hard limiter.
Audio-rate buffers are float32; the main filter runs in float64 so the
compiled kernel and the scipy fallback stay bit-identical.

Mixed generations render whole banks whose children share parameter
groups with their parents, so the oscillator stage and the amp envelope
are memoized on the values that feed them. Random sources (the noise
oscillator, sample-hold LFOs) are seeded from those same values, which
keeps renders deterministic and rename-invariant while letting the memo
cover noisy presets too.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

from . import kernels
from .audio import Recording
from .preset import Preset
from .schema import ParameterSchema

MIDDLE_C_HZ = 440.0 * 2.0 ** ((60 - 69) / 12)


@dataclass(frozen=True)
class SynthConfig:
    sample_rate: int = 48000
    duration: float = 4.0
    gate_time: float = 1.0
    block_size: int = 64

    def hash(self) -> str:
        key = f"{self.sample_rate}|{self.duration}|{self.gate_time}|{self.block_size}|v1"
        return hashlib.sha256(key.encode()).hexdigest()[:16]


DEFAULT_CONFIG = SynthConfig()


def preset_sound_hash(preset: Preset, schema: ParameterSchema) -> str:
    """Stable hash of the value assignment only: renaming a preset must not
    change its sound (keys the engine's render cache)."""
    parts = []
    for spec in schema.params:
        v = preset.values[spec.id]
        parts.append(f"{spec.id}={v:.6f}" if isinstance(v, float) else f"{spec.id}={v}")
    return hashlib.sha256("|".join(parts).encode()).hexdigest()


def _values_seed(values, param_ids, stream: int) -> int:
    """Noise seed from the parameter values feeding one stage, so a random
    stream is pinned to the knobs that shape it: deterministic per value
    assignment, rename-invariant, and stable under edits elsewhere."""
    parts = "|".join(
        f"{p}={values[p]:.6f}" if isinstance(values[p], float) else f"{p}={values[p]}"
        for p in param_ids)
    digest = hashlib.sha256(parts.encode()).digest()
    return (int.from_bytes(digest[:8], "big") ^ stream) & 0xFFFFFFFFFFFFFFFF


def _exp_map(v: float, lo: float, hi: float) -> float:
    return lo * (hi / lo) ** v


def _bipolar(v: float) -> float:
    return (v - 0.5) * 2.0


def _lfo_wave(wave: str, phase: np.ndarray, rng: np.random.Generator | None) -> np.ndarray:
    p = phase - np.floor(phase)
    if wave == "sine":
        return np.sin(2.0 * np.pi * p)
    if wave == "triangle":
        return 1.0 - 4.0 * np.abs(p - 0.5)
    if wave == "square":
        return np.where(p < 0.5, 1.0, -1.0)
    if wave == "saw":
        return 2.0 * p - 1.0
    # sample_hold: one uniform value per cycle
    steps = np.floor(phase).astype(np.int64)
    nvals = int(steps.max()) + 1 if len(steps) else 1
    values = rng.uniform(-1.0, 1.0, size=nvals)
    return values[steps]


_LFO_PARAM_SUFFIXES = ("wave", "rate", "depth", "delay", "phase")


def _control_lfo(values, prefix: str, times: np.ndarray, stream: int):
    """LFO sampled on the block-time grid, with fade-in from the delay param."""
    rate = _exp_map(values[f"{prefix}_rate"], 0.05, 25.0)
    phase = values[f"{prefix}_phase"] + rate * times
    rng = None
    if values[f"{prefix}_wave"] == "sample_hold":
        ids = tuple(f"{prefix}_{s}" for s in _LFO_PARAM_SUFFIXES)
        rng = np.random.Generator(np.random.PCG64(_values_seed(values, ids, stream)))
    out = _lfo_wave(values[f"{prefix}_wave"], phase, rng)
    delay_s = values[f"{prefix}_delay"] * 2.0
    if delay_s > 0.0:
        out = out * np.minimum(times / delay_s, 1.0)
    return out


def adsr_envelope(times: np.ndarray, gate_time: float, attack, decay, sustain, release):
    """ADSR evaluated at sorted time points (any grid, any float dtype).

    Linear attack (1 ms..2 s), exponential decay toward sustain, and from
    exactly t = gate_time an exponential release from the gate-boundary level.
    """
    attack_s = _exp_map(attack, 0.001, 2.0)
    decay_tau = _exp_map(decay, 0.002, 1.5)
    release_tau = _exp_map(release, 0.002, 1.5)
    env = np.empty_like(times)
    # typed scalars keep searchsorted from casting the whole grid
    k_gate = int(times.searchsorted(times.dtype.type(gate_time)))
    k_att = min(int(times.searchsorted(times.dtype.type(attack_s))), k_gate)
    env[:k_att] = times[:k_att] / attack_s
    env[k_att:k_gate] = sustain + (1.0 - sustain) * np.exp(
        -(times[k_att:k_gate] - attack_s) / decay_tau)
    if attack_s >= gate_time:
        gate_level = gate_time / attack_s
    else:
        gate_level = sustain + (1.0 - sustain) * np.exp(-(gate_time - attack_s) / decay_tau)
    env[k_gate:] = gate_level * np.exp(-(times[k_gate:] - gate_time) / release_tau)
    return env


_F1 = np.float32(1.0)
_TWO_PI = np.float32(2.0 * np.pi)
_WAVE_IDS = {"saw": kernels.WAVE_SAW, "square": kernels.WAVE_SQUARE,
             "triangle": kernels.WAVE_TRIANGLE}


def _osc_wave(wave: str, phase: np.ndarray, pulse_width: float) -> np.ndarray:
    """Waveform definition in plain numpy; the fused kernels must match it
    bit for bit (pinned by tests), so this is the oracle, not the hot path."""
    p = phase - np.floor(phase)
    if wave == "saw":
        return 2.0 * p - _F1
    if wave == "square":
        pw = 0.05 + 0.9 * pulse_width
        return np.where(p < pw, _F1, -_F1)
    if wave == "triangle":
        return 1.0 - 4.0 * np.abs(p - np.float32(0.5))
    return np.sin(_TWO_PI * p)


def _add_wave(mix: np.ndarray, phase: np.ndarray, wave: str, det: float,
              pulse_width: float, level: float) -> None:
    """mix += level * wave(frac(phase * det)), fused into one pass except
    the sine transcendental, which stays on numpy so both kernel backends
    share a single sin implementation."""
    det32 = np.float32(det)
    lvl = np.float32(level)
    wid = _WAVE_IDS.get(wave)
    if wid is None:
        s = kernels.sine_phase_f32(phase, det32, _TWO_PI)
        kernels.acc_scaled_f32(mix, np.sin(s, out=s), lvl)
    else:
        kernels.osc_acc_f32(mix, phase, det32, wid,
                            np.float32(0.05 + 0.9 * pulse_width), lvl)


_INTERVAL_SEMIS = {"unison": 0.0, "octave_down": -12.0, "octave_up": 12.0, "fifth_up": 7.0}


_GRID_CACHE: dict = {}


def _cached_grid(key, build):
    grid = _GRID_CACHE.get(key)
    if grid is None:
        grid = build()
        grid.flags.writeable = False
        _GRID_CACHE[key] = grid
    return grid


def _sample_times(n: int, sr: int) -> np.ndarray:
    # exact division so times[gate_sample] == gate_time bit-exactly in float32
    return _cached_grid(("t", n, sr),
                        lambda: np.arange(n, dtype=np.float32) / np.float32(sr))


def _sample_index(n: int) -> np.ndarray:
    return _cached_grid(("i", n), lambda: np.arange(1, n + 1, dtype=np.float32))


class _StageCache:
    """Bounded FIFO memo for read-only render-stage buffers."""

    def __init__(self, capacity: int):
        self.capacity = capacity
        self._store: dict = {}

    def get(self, key):
        return self._store.get(key)

    def put(self, key, buf: np.ndarray) -> np.ndarray:
        buf.flags.writeable = False
        if len(self._store) >= self.capacity:
            self._store.pop(next(iter(self._store)))
        self._store[key] = buf
        return buf


_OSC_CACHE = _StageCache(16)
_ENV_CACHE = _StageCache(16)

_OSC_STAGE_PARAMS = (
    "osc1_wave", "osc1_detune", "osc1_level", "osc2_wave", "osc2_detune",
    "osc2_level", "osc2_interval", "sub_level", "noise_level", "pulse_width",
    "transpose", "fine_tune",
    "lfo2_wave", "lfo2_rate", "lfo2_depth", "lfo2_delay", "lfo2_phase",
)


def _lowpass_coeffs(fc: np.ndarray, q: float, sr: int) -> np.ndarray:
    """RBJ biquad low-pass, one row (b0,b1,b2,a1,a2) per control block."""
    w0 = 2.0 * np.pi * fc / sr
    cosw = np.cos(w0)
    alpha = np.sin(w0) / (2.0 * q)
    a0 = 1.0 + alpha
    coeffs = np.empty((len(fc), 5), dtype=np.float64)
    coeffs[:, 0] = (1.0 - cosw) / 2.0 / a0
    coeffs[:, 1] = (1.0 - cosw) / a0
    coeffs[:, 2] = (1.0 - cosw) / 2.0 / a0
    coeffs[:, 3] = (-2.0 * cosw) / a0
    coeffs[:, 4] = (1.0 - alpha) / a0
    return coeffs


def _highpass_ba(fc: float, q: float, sr: int):
    w0 = 2.0 * np.pi * fc / sr
    cosw = np.cos(w0)
    alpha = np.sin(w0) / (2.0 * q)
    b = np.array([(1 + cosw) / 2.0, -(1 + cosw), (1 + cosw) / 2.0])
    a = np.array([1 + alpha, -2 * cosw, 1 - alpha])
    return b / a[0], a / a[0]


_COEFF_PARAMS = (
    "vcf_cutoff", "vcf_resonance", "vcf_env_amount", "vcf_lfo_amount",
    "mod_attack", "mod_decay", "mod_sustain", "mod_release",
    "lfo1_wave", "lfo1_rate", "lfo1_depth", "lfo1_delay", "lfo1_phase",
)
_COEFF_CACHE = _StageCache(32)


def _filter_coeffs(v, config: SynthConfig, sr: int, fc_cap: float,
                   block_times: np.ndarray) -> np.ndarray:
    """Block-rate low-pass coefficient rows, memoized on the parameter
    values that shape the cutoff trajectory."""
    key = (len(block_times), sr, config.gate_time) + tuple(v[p] for p in _COEFF_PARAMS)
    hit = _COEFF_CACHE.get(key)
    if hit is not None:
        return hit
    mod_env = adsr_envelope(block_times, config.gate_time, v["mod_attack"],
                            v["mod_decay"], v["mod_sustain"], v["mod_release"])
    cutoff_oct = _bipolar(v["vcf_env_amount"]) * 4.0 * mod_env
    if v["vcf_lfo_amount"] > 0.0 and v["lfo1_depth"] > 0.0:
        lfo1 = _control_lfo(v, "lfo1", block_times, stream=3)
        cutoff_oct = cutoff_oct + v["vcf_lfo_amount"] * v["lfo1_depth"] * 3.0 * lfo1
    fc = np.clip(_exp_map(v["vcf_cutoff"], 20.0, 21000.0) * 2.0 ** cutoff_oct, 20.0, fc_cap)
    return _COEFF_CACHE.put(key, _lowpass_coeffs(fc, 0.5 + v["vcf_resonance"] * 9.5, sr))


def _osc_stage(preset: Preset, schema: ParameterSchema, config: SynthConfig,
               n: int, block_times: np.ndarray) -> np.ndarray:
    """The summed oscillator mix, float32, before drive and filters. Memoized
    on the parameter values that feed it; noise and sample-hold vibrato are
    seeded from those same values, so the memo stays exact."""
    v = preset.values
    sr = config.sample_rate
    key = (n, sr) + tuple(v[p] for p in _OSC_STAGE_PARAMS)
    hit = _OSC_CACHE.get(key)
    if hit is not None:
        return hit

    # pitch: middle C shifted by transpose semitones and +/-100 cents fine tune
    f0 = MIDDLE_C_HZ * 2.0 ** (int(v["transpose"]) / 12.0 + _bipolar(v["fine_tune"]) * 100.0 / 1200.0)
    if v["lfo2_depth"] > 0.0:
        lfo2 = _control_lfo(v, "lfo2", block_times, stream=2)
        freq_blocks = f0 * 2.0 ** (v["lfo2_depth"] * 50.0 * lfo2 / 1200.0)
        inc = np.repeat((freq_blocks / sr).astype(np.float32), config.block_size)[:n]
        base_phase = np.cumsum(inc, dtype=np.float32)
    else:
        base_phase = _sample_index(n) * np.float32(f0 / sr)

    det1 = 2.0 ** (_bipolar(v["osc1_detune"]) * 50.0 / 1200.0)
    det2 = 2.0 ** ((_bipolar(v["osc2_detune"]) * 50.0 + _INTERVAL_SEMIS[v["osc2_interval"]] * 100.0) / 1200.0)

    mix = np.zeros(n, dtype=np.float32)
    _add_wave(mix, base_phase, v["osc1_wave"], det1, v["pulse_width"], v["osc1_level"])
    if v["osc2_level"] > 0.0:
        _add_wave(mix, base_phase, v["osc2_wave"], det2, v["pulse_width"], v["osc2_level"])
    if v["sub_level"] > 0.0:
        _add_wave(mix, base_phase, "square", 0.5, 0.5, v["sub_level"])
    if v["noise_level"] > 0.0:
        rng = np.random.Generator(np.random.PCG64(
            _values_seed(v, _OSC_STAGE_PARAMS, stream=1)))
        # uniform white noise: same flat spectrum as a gaussian source at a
        # fraction of the generation cost
        noise = rng.random(n, dtype=np.float32)
        mix += v["noise_level"] * 0.5 * (np.float32(2.0) * noise - _F1)
    return _OSC_CACHE.put(key, mix)


def _amp_envelope(n: int, sr: int, gate_time: float, attack, decay, sustain, release):
    key = (n, sr, gate_time, attack, decay, sustain, release)
    hit = _ENV_CACHE.get(key)
    if hit is None:
        hit = _ENV_CACHE.put(key, adsr_envelope(
            _sample_times(n, sr), gate_time, attack, decay, sustain, release))
    return hit


def render(preset: Preset, schema: ParameterSchema, config: SynthConfig = DEFAULT_CONFIG) -> Recording:
    v = preset.values
    sr = config.sample_rate
    n = int(round(config.duration * sr))
    block = config.block_size
    nblocks = -(-n // block)
    block_times = (np.arange(nblocks) * block) / sr

    mix = _osc_stage(preset, schema, config, n, block_times)

    if v["vcf_drive"] > 0.0:
        mix = kernels.drive_f32(mix, np.float32(1.0 + 4.0 * v["vcf_drive"]))

    # cutoffs must stay below Nyquist or the biquads go unstable
    fc_cap = min(21000.0, 0.45 * sr)

    if v["hpf_mode"] != "off":
        fc_hp = min(_exp_map(v["hpf_cutoff"], 20.0, 8000.0), fc_cap)
        if v["hpf_mode"] == "gentle":
            g = np.exp(-2.0 * np.pi * fc_hp / sr)
            mix = kernels.iir1_f32(mix, np.float32((1 + g) / 2.0),
                                   np.float32(-(1 + g) / 2.0), np.float32(-g))
        else:
            b, a = _highpass_ba(fc_hp, 0.707 + v["hpf_resonance"] * 5.0, sr)
            b, a = b.astype(np.float32), a.astype(np.float32)
            mix = kernels.biquad_f32(mix, b[0], b[1], b[2], a[1], a[2])

    # main filter runs in float64 (kernel contract), cutoff modulated by the
    # mod envelope and LFO1 at block rate; amp envelope and gain ride along
    # in the same output pass
    coeffs = _filter_coeffs(v, config, sr, fc_cap, block_times)
    env = _amp_envelope(n, sr, config.gate_time, v["amp_attack"], v["amp_decay"],
                        v["amp_sustain"], v["amp_release"])
    gain = (v["amp_gain"] * 2.0) ** 2 * (2.0 if v["amp_boost"] == "on" else 1.0)
    y = kernels.vcf_amp_f32(mix, coeffs, block, v["vcf_mode"] == "lp24",
                            env, np.float32(gain))
    if v["amp_lfo_amount"] > 0.0 and v["lfo1_depth"] > 0.0:
        lfo1 = _control_lfo(v, "lfo1", block_times, stream=3)
        trem = 1.0 - v["amp_lfo_amount"] * v["lfo1_depth"] * 0.5 * (1.0 + lfo1)
        y *= np.repeat(trem.astype(np.float32), block)[:n]

    if v["delay_send"] > 0.0:
        wet = _feedback_delay(y, v, sr)
        np.multiply(wet, np.float32(v["delay_send"]), out=wet)
        y += wet

    # DC blocker, then hard limiter
    y = kernels.dc_clip_f32(y, np.float32(1.0), np.float32(-1.0), np.float32(-0.995),
                            np.float32(-1.0), np.float32(1.0))
    return Recording(samples=y, sample_rate=sr)


def _feedback_delay(y: np.ndarray, v, sr: int) -> np.ndarray:
    """wet[t] = tone_lp(y[t-D] + fb * wet[t-D])."""
    d = int(round((0.06 + v["delay_time"] * 0.84) * sr))
    fb = np.float32(v["delay_feedback"] * 0.85)
    fc_tone = _exp_map(v["delay_tone"], 500.0, 16000.0)
    g = np.exp(-2.0 * np.pi * fc_tone / sr)
    return kernels.delay_mix_f32(y, d, fb, np.float32(1.0 - g), np.float32(-g))
