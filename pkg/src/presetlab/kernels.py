"""Kernel backend selection: compiled extension if built, scipy fallback otherwise."""

from __future__ import annotations

try:
    from presetlab._kernels import (
        WAVE_SAW,
        WAVE_SQUARE,
        WAVE_TRIANGLE,
        acc_scaled_f32,
        biquad_blocks,
        biquad_blocks_f32io,
        biquad_f32,
        dc_clip_f32,
        delay_mix_f32,
        drive_f32,
        iir1_f32,
        mul2_f32,
        osc_acc_f32,
        power_c64,
        sine_phase_f32,
        vcf_amp_f32,
    )

    BACKEND = "compiled"
except ImportError:  # extension not built; pure fallback is bit-identical, just slower
    from presetlab._kernels_py import (
        WAVE_SAW,
        WAVE_SQUARE,
        WAVE_TRIANGLE,
        acc_scaled_f32,
        biquad_blocks,
        biquad_blocks_f32io,
        biquad_f32,
        dc_clip_f32,
        delay_mix_f32,
        drive_f32,
        iir1_f32,
        mul2_f32,
        osc_acc_f32,
        power_c64,
        sine_phase_f32,
        vcf_amp_f32,
    )

    BACKEND = "fallback"

__all__ = [
    "BACKEND",
    "WAVE_SAW",
    "WAVE_SQUARE",
    "WAVE_TRIANGLE",
    "acc_scaled_f32",
    "biquad_blocks",
    "biquad_blocks_f32io",
    "biquad_f32",
    "dc_clip_f32",
    "delay_mix_f32",
    "drive_f32",
    "iir1_f32",
    "mul2_f32",
    "osc_acc_f32",
    "power_c64",
    "sine_phase_f32",
    "vcf_amp_f32",
]
