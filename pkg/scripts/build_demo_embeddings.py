#!/usr/bin/env python3
"""Build a demo embedding file with text rows for the hybrid provider.

The spectral provider can only embed audio, so text search needs a vector
file. This script renders a bank, stores every preset's spectral vector,
and adds one text row per descriptive label. A label's vector is the
normalized centroid of a few hand-designed archetype patches that sound
like the label, embedded in the same spectral space, so text queries rank
presets by sonic resemblance to the phrase.

Usage:
    python3 scripts/build_demo_embeddings.py --out demo.emb --bank-out demo.bank
    presetlab search --bank demo.bank --provider hybrid:demo.emb --text "warm pad"
"""

from __future__ import annotations

import argparse

import numpy as np

from presetlab.bank import generate_bank, save_bank
from presetlab.embed import EmbeddingVector, SpectralProvider, embed_generation, save_embeddings
from presetlab.preset import Preset, validate_preset
from presetlab.render import render
from presetlab.schema import load_reference_schema

# each label maps to a few archetype patches; their embedding centroid
# becomes the label's text vector
ARCHETYPES: dict[str, list[dict]] = {
    "warm pad": [
        {"osc1_wave": "saw", "osc2_wave": "saw", "osc2_level": 0.8,
         "osc1_detune": 0.65, "osc2_detune": 0.35, "vcf_cutoff": 0.45,
         "amp_attack": 0.65, "amp_release": 0.8, "amp_sustain": 0.9},
        {"osc1_wave": "triangle", "osc2_wave": "saw", "osc2_level": 0.6,
         "vcf_cutoff": 0.4, "amp_attack": 0.7, "amp_release": 0.75,
         "mod_sustain": 0.8, "vcf_env_amount": 0.55},
    ],
    "bright lead": [
        {"osc1_wave": "saw", "vcf_cutoff": 0.95, "vcf_resonance": 0.3,
         "amp_attack": 0.0, "amp_sustain": 1.0, "vcf_drive": 0.4},
        {"osc1_wave": "square", "pulse_width": 0.3, "vcf_cutoff": 0.9,
         "amp_attack": 0.05, "vcf_drive": 0.5, "amp_boost": "on"},
    ],
    "deep bass": [
        {"osc1_wave": "saw", "transpose": "-12", "sub_level": 0.9,
         "vcf_cutoff": 0.3, "amp_sustain": 1.0, "amp_attack": 0.0},
        {"osc1_wave": "square", "transpose": "-12", "sub_level": 0.7,
         "vcf_cutoff": 0.25, "vcf_env_amount": 0.7, "mod_decay": 0.4},
    ],
    "plucky keys": [
        {"osc1_wave": "triangle", "amp_attack": 0.0, "amp_decay": 0.25,
         "amp_sustain": 0.0, "vcf_env_amount": 0.85, "mod_decay": 0.2,
         "mod_sustain": 0.0, "vcf_cutoff": 0.5},
        {"osc1_wave": "square", "pulse_width": 0.25, "amp_attack": 0.0,
         "amp_decay": 0.35, "amp_sustain": 0.1, "mod_decay": 0.3,
         "mod_sustain": 0.0, "vcf_cutoff": 0.55, "vcf_env_amount": 0.8},
    ],
    "noisy texture": [
        {"noise_level": 0.9, "osc1_level": 0.3, "vcf_cutoff": 0.7,
         "amp_attack": 0.5, "amp_sustain": 0.8},
        {"noise_level": 0.75, "osc1_level": 0.15, "vcf_cutoff": 0.55,
         "vcf_lfo_amount": 0.6, "lfo1_depth": 0.7, "lfo1_rate": 0.35},
    ],
    "dub echo": [
        {"delay_send": 0.9, "delay_feedback": 0.85, "delay_time": 0.6,
         "delay_tone": 0.4, "amp_decay": 0.3, "amp_sustain": 0.2},
        {"delay_send": 0.8, "delay_feedback": 0.9, "delay_time": 0.45,
         "osc1_wave": "square", "amp_decay": 0.25, "amp_sustain": 0.0},
    ],
}


def archetype_vector(label: str, overrides_list, schema, provider) -> np.ndarray:
    rows = []
    for i, overrides in enumerate(overrides_list):
        preset = Preset(id=f"_text_{label.replace(' ', '_')}_{i}", name=label,
                        provenance="default",
                        values={**schema.default_values(), **overrides})
        validate_preset(preset, schema)
        rec = render(preset, schema)
        rows.append(provider.embed_audio(rec, key=preset.id).values)
    return EmbeddingVector.normalized(np.mean(rows, axis=0)).values


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", required=True, help="embedding file to write")
    parser.add_argument("--bank-out", default=None,
                        help="also write the demo bank next to the vectors")
    parser.add_argument("--presets", type=int, default=100)
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args(argv)

    schema = load_reference_schema()
    provider = SpectralProvider()
    gen = generate_bank(schema, args.presets, seed=args.seed)
    embed_generation(gen, provider, schema)
    audio = {p.id: gen.embedding_matrix[i] for i, p in enumerate(gen.presets)}

    text = {label: archetype_vector(label, variants, schema, provider)
            for label, variants in ARCHETYPES.items()}

    save_embeddings(args.out, provider.dimension, audio, text)
    if args.bank_out:
        save_bank(gen, schema, args.bank_out)
        print(f"wrote {args.bank_out}: {len(gen)} presets")
    print(f"wrote {args.out}: {len(audio)} audio vectors, "
          f"{len(text)} text labels ({', '.join(text)})")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
