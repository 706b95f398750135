"""Generation (bank) storage: file IO and the seeded default-bank generator.

Bank files are newline-delimited, one preset per line, with a
format-version header. Continuous values serialize at 6 decimals
(round-half-even); the writer emits values in schema order so the format
round-trips byte-identically. See docs/formats.md.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import BankFormatError, UnknownPresetError
from .preset import PROVENANCES, Preset, validate_preset
from .schema import CONTINUOUS, ParameterSchema, format_value, quantize

BANK_FORMAT_HEADER = "format presetlab-bank 1"

_PRESET_RE = re.compile(
    r'^preset id=(?P<id>\S+) name="(?P<name>[^"]*)" '
    r"provenance=(?P<prov>\S+) values=(?P<values>\S*)$"
)


@dataclass(eq=False)  # identity semantics; generations are cache keys
class Generation:
    """An ordered bank of presets plus (optionally) their embeddings.

    ``embedding_matrix`` is row-aligned with ``presets``; ``embedded`` is
    true once every preset has a vector attached.
    """

    presets: list[Preset]
    embedding_matrix: np.ndarray | None = None
    index_of: dict[str, int] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if not self.index_of:
            self.index_of = {p.id: i for i, p in enumerate(self.presets)}

    def __len__(self) -> int:
        return len(self.presets)

    @property
    def embedded(self) -> bool:
        return self.embedding_matrix is not None and len(self.embedding_matrix) == len(self.presets)

    def get(self, preset_id: str) -> Preset:
        try:
            return self.presets[self.index_of[preset_id]]
        except KeyError:
            raise UnknownPresetError(f"no preset with id {preset_id!r}") from None

    def embedding_of(self, preset_id: str) -> np.ndarray:
        if not self.embedded:
            raise UnknownPresetError("generation has no embeddings attached")
        return self.embedding_matrix[self.index_of[preset_id]]


def _parse_value(raw: str, kind: str):
    if kind == CONTINUOUS:
        try:
            return quantize(float(raw))
        except ValueError:
            raise BankFormatError(f"bad continuous value {raw!r}") from None
    return raw


def parse_bank(text: str, schema: ParameterSchema) -> Generation:
    lines = text.splitlines()
    if not lines or lines[0].strip() != BANK_FORMAT_HEADER:
        raise BankFormatError(f"missing header {BANK_FORMAT_HEADER!r}")
    presets: list[Preset] = []
    seen: set[str] = set()
    for lineno, line in enumerate(lines[1:], start=2):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        m = _PRESET_RE.match(line)
        if not m:
            raise BankFormatError(f"line {lineno}: malformed preset record")
        if m["prov"] not in PROVENANCES:
            raise BankFormatError(f"line {lineno}: unknown provenance {m['prov']!r}")
        values: dict[str, float | str] = {}
        if m["values"]:
            for pair in m["values"].split(","):
                pid, sep, raw = pair.partition(":")
                if not sep:
                    raise BankFormatError(f"line {lineno}: malformed value pair {pair!r}")
                spec = schema.by_id.get(pid)
                if spec is None:
                    raise BankFormatError(f"line {lineno}: unknown parameter id {pid!r}")
                values[pid] = _parse_value(raw, spec.kind)
        preset = Preset(id=m["id"], name=m["name"], values=values, provenance=m["prov"])
        try:
            validate_preset(preset, schema)
        except Exception as exc:
            raise BankFormatError(f"line {lineno}: {exc}") from exc
        if preset.id in seen:
            raise BankFormatError(f"line {lineno}: duplicate preset id {preset.id!r}")
        seen.add(preset.id)
        presets.append(preset)
    return Generation(presets=presets)


def load_bank(path: str | Path, schema: ParameterSchema) -> Generation:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise BankFormatError(f"cannot read bank file: {exc}") from exc
    return parse_bank(text, schema)


def format_preset_line(preset: Preset, schema: ParameterSchema) -> str:
    pairs = []
    for spec in schema.params:  # schema order keeps the format canonical
        v = preset.values[spec.id]
        pairs.append(f"{spec.id}:{format_value(v) if spec.kind == CONTINUOUS else v}")
    return (
        f'preset id={preset.id} name="{preset.name}" '
        f"provenance={preset.provenance} values={','.join(pairs)}"
    )


def dump_bank(gen: Generation, schema: ParameterSchema) -> str:
    lines = [BANK_FORMAT_HEADER]
    lines.extend(format_preset_line(p, schema) for p in gen.presets)
    return "\n".join(lines) + "\n"


def save_bank(gen: Generation, schema: ParameterSchema, path: str | Path) -> None:
    Path(path).write_text(dump_bank(gen, schema), encoding="utf-8")


def generate_bank(
    schema: ParameterSchema,
    count: int,
    seed: int,
    default_fraction: float = 0.6,
    id_prefix: str = "default",
) -> Generation:
    """Deterministic seeded bank: per preset, each parameter stays at its
    default with probability ``default_fraction``, otherwise it is sampled
    uniformly. Reproduces the strong default-value spikes real banks show.
    """
    rng = np.random.Generator(np.random.PCG64(seed))
    presets = []
    for i in range(count):
        values: dict[str, float | str] = {}
        for spec in schema.params:
            if rng.random() < default_fraction:
                values[spec.id] = spec.default
            elif spec.kind == CONTINUOUS:
                values[spec.id] = quantize(rng.random())
            else:
                values[spec.id] = spec.choices[rng.integers(len(spec.choices))]
        presets.append(
            Preset(
                id=f"{id_prefix}_{i:04d}",
                name=f"Default {i:03d}",
                values=values,
                provenance="default",
            )
        )
    return Generation(presets=presets)
