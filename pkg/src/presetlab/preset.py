"""Preset representation, validation and diffing."""

from __future__ import annotations

from dataclasses import dataclass, replace

from .errors import ValidationError
from .schema import CONTINUOUS, ParameterSchema

PROVENANCES = ("default", "mixed", "modified")


@dataclass(frozen=True)
class Preset:
    """A named total assignment of values to every parameter in the schema."""

    id: str
    name: str
    values: dict[str, float | str]
    provenance: str = "default"

    def with_values(self, updates: dict[str, float | str], *, id=None, name=None,
                    provenance=None) -> "Preset":
        merged = dict(self.values)
        merged.update(updates)
        return replace(
            self,
            id=id if id is not None else self.id,
            name=name if name is not None else self.name,
            values=merged,
            provenance=provenance if provenance is not None else self.provenance,
        )


@dataclass(frozen=True)
class PresetDiff:
    """Parameters whose values differ, plus the groups they belong to."""

    changed_params: tuple[tuple[str, float | str, float | str], ...]
    changed_groups: frozenset[str]

    @property
    def empty(self) -> bool:
        return not self.changed_params


def validate_preset(preset: Preset, schema: ParameterSchema) -> None:
    """Raise ValidationError unless preset totally and legally assigns the schema.

    Checks: provenance token, exactly one value per schema parameter, no
    unknown ids, every value within its spec's kind/range.
    """
    if preset.provenance not in PROVENANCES:
        raise ValidationError(f"preset {preset.id!r}: unknown provenance {preset.provenance!r}")
    unknown = set(preset.values) - set(schema.by_id)
    if unknown:
        raise ValidationError(
            f"preset {preset.id!r}: unknown parameter id {sorted(unknown)[0]!r}"
        )
    for spec in schema.params:
        if spec.id not in preset.values:
            raise ValidationError(f"preset {preset.id!r}: missing parameter {spec.id!r}")
        value = preset.values[spec.id]
        if spec.kind == CONTINUOUS and isinstance(value, int):
            raise ValidationError(
                f"preset {preset.id!r}: parameter {spec.id!r} must be a float"
            )
        if not spec.validate_value(value):
            raise ValidationError(
                f"preset {preset.id!r}: parameter {spec.id!r} value {value!r} "
                f"out of range for kind {spec.kind}"
            )


def diff_presets(a: Preset, b: Preset, schema: ParameterSchema) -> PresetDiff:
    """List parameters where a and b differ; groups are derived, never stored."""
    if set(a.values) != set(schema.by_id) or set(b.values) != set(schema.by_id):
        raise ValidationError("diff requires two presets over the same schema")
    changed = []
    groups = set()
    for spec in schema.params:
        old, new = a.values[spec.id], b.values[spec.id]
        if old != new:
            changed.append((spec.id, old, new))
            groups.add(spec.group)
    return PresetDiff(changed_params=tuple(changed), changed_groups=frozenset(groups))
