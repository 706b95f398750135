"""presetlab: synthesizer preset search, genetic mixing and example-driven
modification over a self-contained reference synthesizer.

The engine is organized around three operations on an embedded preset bank:
ranking presets against a text or audio query by cosine similarity, breeding
favorite presets by uniform crossover over their 13 parameter groups, and
copying parameter groups from retrieved examples with a Jensen-Shannon
group-importance highlighter pointing at the groups that matter for a query.
"""

from .bank import Generation, generate_bank, load_bank, save_bank
from .embed import SpectralProvider, embed_generation, provider_from_spec
from .errors import DataError, PresetLabError, ProviderError
from .mixing import Favorites, GenerationChain, breed_pair, mix
from .modify import apply_selection, group_importance, search_examples
from .preset import Preset, diff_presets, validate_preset
from .render import DEFAULT_CONFIG, SynthConfig, render
from .schema import ParameterSchema, load_reference_schema, load_schema
from .search import audio_search, text_search

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_CONFIG",
    "DataError",
    "Favorites",
    "Generation",
    "GenerationChain",
    "ParameterSchema",
    "Preset",
    "PresetLabError",
    "ProviderError",
    "SpectralProvider",
    "SynthConfig",
    "apply_selection",
    "audio_search",
    "breed_pair",
    "diff_presets",
    "embed_generation",
    "generate_bank",
    "group_importance",
    "load_bank",
    "load_reference_schema",
    "load_schema",
    "mix",
    "provider_from_spec",
    "render",
    "save_bank",
    "search_examples",
    "text_search",
    "validate_preset",
]
