"""Parameter schema: the synthesizer's full parameter inventory.

A schema partitions the synth into exactly 13 named parameter groups and
lists every parameter with its type, range and default. Everything else in
the engine (crossover, attribution, rendering) is driven by the loaded
schema, never by hard-coded parameter names. The reference schema ships as
``presetlab/data/minidiva.schema``; the file format is documented in
docs/formats.md.
"""

from __future__ import annotations

import importlib.resources
from dataclasses import dataclass, field
from pathlib import Path

from .errors import SchemaFormatError

GROUP_COUNT = 13

SCHEMA_FORMAT_HEADER = "format presetlab-schema 1"

CONTINUOUS = "continuous"
DISCRETE = "discrete"

# Serialization granularity for continuous values: 6 decimals, round-half-even.
VALUE_DECIMALS = 6


def quantize(value: float) -> float:
    """Snap a continuous value to its 6-decimal serialized form."""
    return float(format(value, f".{VALUE_DECIMALS}f"))


def format_value(value: float) -> str:
    return format(value, f".{VALUE_DECIMALS}f")


@dataclass(frozen=True)
class ParameterSpec:
    """One synth parameter: continuous in [0,1] or an enumerated choice."""

    id: str
    group: str
    kind: str  # CONTINUOUS | DISCRETE
    default: float | str
    choices: tuple[str, ...] = ()

    def validate_value(self, value) -> bool:
        if self.kind == CONTINUOUS:
            return isinstance(value, float) and 0.0 <= value <= 1.0
        return isinstance(value, str) and value in self.choices


@dataclass(frozen=True)
class ParameterSchema:
    """Ordered parameter inventory partitioned into 13 groups."""

    groups: tuple[str, ...]
    params: tuple[ParameterSpec, ...]
    by_id: dict[str, ParameterSpec] = field(repr=False, default_factory=dict)
    by_group: dict[str, tuple[ParameterSpec, ...]] = field(repr=False, default_factory=dict)

    @classmethod
    def build(cls, groups, params) -> "ParameterSchema":
        groups = tuple(groups)
        params = tuple(params)
        if len(groups) != GROUP_COUNT:
            raise SchemaFormatError(
                f"group count must be {GROUP_COUNT}, got {len(groups)}"
            )
        if len(set(groups)) != len(groups):
            raise SchemaFormatError("duplicate group name")
        by_id: dict[str, ParameterSpec] = {}
        by_group: dict[str, list[ParameterSpec]] = {g: [] for g in groups}
        for spec in params:
            if spec.id in by_id:
                raise SchemaFormatError(f"duplicate parameter id {spec.id!r}")
            if spec.group not in by_group:
                raise SchemaFormatError(
                    f"parameter {spec.id!r} names unknown group {spec.group!r}"
                )
            if spec.kind not in (CONTINUOUS, DISCRETE):
                raise SchemaFormatError(f"parameter {spec.id!r} has unknown kind {spec.kind!r}")
            if spec.kind == DISCRETE and not spec.choices:
                raise SchemaFormatError(f"discrete parameter {spec.id!r} has no choices")
            if not spec.validate_value(spec.default):
                raise SchemaFormatError(f"parameter {spec.id!r} default out of range")
            by_id[spec.id] = spec
            by_group[spec.group].append(spec)
        for g, members in by_group.items():
            if not members:
                raise SchemaFormatError(f"group {g!r} has no parameters")
        return cls(
            groups=groups,
            params=params,
            by_id=by_id,
            by_group={g: tuple(v) for g, v in by_group.items()},
        )

    def default_values(self) -> dict[str, float | str]:
        return {p.id: p.default for p in self.params}

    def param_ids(self) -> tuple[str, ...]:
        return tuple(p.id for p in self.params)


def _parse_default(kind: str, raw: str, choices: tuple[str, ...]):
    if kind == CONTINUOUS:
        try:
            return quantize(float(raw))
        except ValueError as exc:
            raise SchemaFormatError(f"bad continuous default {raw!r}") from exc
    return raw


def _parse_fields(rest: str, lineno: int) -> dict[str, str]:
    fields: dict[str, str] = {}
    for token in rest.split():
        if "=" not in token:
            raise SchemaFormatError(f"line {lineno}: expected key=value, got {token!r}")
        key, _, val = token.partition("=")
        fields[key] = val
    return fields


def parse_schema(text: str) -> ParameterSchema:
    lines = text.splitlines()
    if not lines or lines[0].strip() != SCHEMA_FORMAT_HEADER:
        raise SchemaFormatError(f"missing header {SCHEMA_FORMAT_HEADER!r}")
    groups: tuple[str, ...] | None = None
    params: list[ParameterSpec] = []
    for lineno, line in enumerate(lines[1:], start=2):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        kind, _, rest = line.partition(" ")
        if kind == "groups":
            if groups is not None:
                raise SchemaFormatError(f"line {lineno}: duplicate groups line")
            groups = tuple(g for g in rest.strip().split(",") if g)
        elif kind == "param":
            fields = _parse_fields(rest, lineno)
            for required in ("id", "group", "kind", "default"):
                if required not in fields:
                    raise SchemaFormatError(f"line {lineno}: param missing {required!r}")
            choices = tuple(fields.get("choices", "").split(",")) if fields.get("choices") else ()
            params.append(
                ParameterSpec(
                    id=fields["id"],
                    group=fields["group"],
                    kind=fields["kind"],
                    choices=choices,
                    default=_parse_default(fields["kind"], fields["default"], choices),
                )
            )
        else:
            raise SchemaFormatError(f"line {lineno}: unknown record {kind!r}")
    if groups is None:
        raise SchemaFormatError("missing groups line")
    return ParameterSchema.build(groups, params)


def load_schema(path: str | Path) -> ParameterSchema:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise SchemaFormatError(f"cannot read schema file: {exc}") from exc
    return parse_schema(text)


def dump_schema(schema: ParameterSchema) -> str:
    out = [SCHEMA_FORMAT_HEADER, "groups " + ",".join(schema.groups)]
    for p in schema.params:
        parts = [f"param id={p.id}", f"group={p.group}", f"kind={p.kind}"]
        if p.kind == DISCRETE:
            parts.append("choices=" + ",".join(p.choices))
            parts.append(f"default={p.default}")
        else:
            parts.append(f"default={format_value(p.default)}")
        out.append(" ".join(parts))
    return "\n".join(out) + "\n"


def save_schema(schema: ParameterSchema, path: str | Path) -> None:
    Path(path).write_text(dump_schema(schema), encoding="utf-8")


def reference_schema_path() -> Path:
    """Path of the packaged reference schema (13 groups, 80 parameters)."""
    return Path(importlib.resources.files("presetlab") / "data" / "minidiva.schema")


def load_reference_schema() -> ParameterSchema:
    return load_schema(reference_schema_path())
