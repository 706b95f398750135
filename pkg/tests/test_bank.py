"""Bank file format: round-trips, validation-on-load, generator behavior."""

import numpy as np
import pytest

from presetlab.bank import (
    BANK_FORMAT_HEADER,
    dump_bank,
    format_preset_line,
    generate_bank,
    load_bank,
    parse_bank,
    save_bank,
)
from presetlab.errors import BankFormatError
from presetlab.schema import CONTINUOUS


class TestRoundTrip:
    def test_dump_parse_bytes_stable(self, schema):
        gen = generate_bank(schema, 12, seed=21)
        text = dump_bank(gen, schema)
        again = parse_bank(text, schema)
        assert [p.id for p in again.presets] == [p.id for p in gen.presets]
        for a, b in zip(gen.presets, again.presets):
            assert a.values == b.values
            assert (a.name, a.provenance) == (b.name, b.provenance)
        assert dump_bank(again, schema) == text  # byte-identical second pass

    def test_values_written_in_schema_order(self, schema):
        gen = generate_bank(schema, 1, seed=21)
        line = format_preset_line(gen.presets[0], schema)
        payload = line.rsplit("values=", 1)[1]
        ids = [pair.split(":", 1)[0] for pair in payload.split(",")]
        assert ids == list(schema.param_ids())

    def test_save_load_file(self, schema, tmp_path):
        gen = generate_bank(schema, 5, seed=21)
        path = tmp_path / "b.bank"
        save_bank(gen, schema, path)
        loaded = load_bank(path, schema)
        assert dump_bank(loaded, schema) == dump_bank(gen, schema)

    def test_comments_and_blank_lines_ignored(self, schema):
        gen = generate_bank(schema, 2, seed=21)
        lines = dump_bank(gen, schema).splitlines()
        lines.insert(1, "# a comment")
        lines.insert(3, "")
        assert len(parse_bank("\n".join(lines) + "\n", schema)) == 2


class TestParseErrors:
    def good_text(self, schema):
        return dump_bank(generate_bank(schema, 2, seed=21), schema)

    def test_missing_header(self, schema):
        with pytest.raises(BankFormatError, match="missing header"):
            parse_bank("preset id=x\n", schema)
        assert BANK_FORMAT_HEADER == "format presetlab-bank 1"

    def test_missing_file(self, schema, tmp_path):
        with pytest.raises(BankFormatError, match="cannot read"):
            load_bank(tmp_path / "absent.bank", schema)

    def test_malformed_record_reports_line(self, schema):
        text = self.good_text(schema) + "preset id=broken\n"
        with pytest.raises(BankFormatError, match="line 4: malformed preset record"):
            parse_bank(text, schema)

    def test_unknown_provenance(self, schema):
        text = self.good_text(schema).replace("provenance=default",
                                              "provenance=stolen", 1)
        with pytest.raises(BankFormatError, match="unknown provenance 'stolen'"):
            parse_bank(text, schema)

    def test_unknown_parameter_id(self, schema):
        text = self.good_text(schema).replace("osc1_wave:", "osc9_wave:", 1)
        with pytest.raises(BankFormatError, match="unknown parameter id 'osc9_wave'"):
            parse_bank(text, schema)

    def test_bad_continuous_value(self, schema):
        text = self.good_text(schema)
        target = "vcf_cutoff:" + text.split("vcf_cutoff:", 1)[1].split(",", 1)[0]
        text = text.replace(target, "vcf_cutoff:loud", 1)
        with pytest.raises(BankFormatError, match="bad continuous value 'loud'"):
            parse_bank(text, schema)

    def test_validation_failure_wrapped_with_line(self, schema):
        # drop one parameter from the first record: incomplete assignment
        text = self.good_text(schema)
        target = "sub_level:" + text.split("sub_level:", 1)[1].split(",", 1)[0] + ","
        text = text.replace(target, "", 1)
        with pytest.raises(BankFormatError, match="line 2.*sub_level"):
            parse_bank(text, schema)

    def test_duplicate_ids_rejected(self, schema):
        # ids key every lookup table in the engine; ambiguity is a load error
        gen = generate_bank(schema, 1, seed=21)
        line = format_preset_line(gen.presets[0], schema)
        text = BANK_FORMAT_HEADER + "\n" + line + "\n" + line + "\n"
        with pytest.raises(BankFormatError, match="line 3: duplicate preset id"):
            parse_bank(text, schema)


class TestGenerateBank:
    def test_deterministic(self, schema):
        a = generate_bank(schema, 6, seed=42)
        b = generate_bank(schema, 6, seed=42)
        assert dump_bank(a, schema) == dump_bank(b, schema)
        c = generate_bank(schema, 6, seed=43)
        assert dump_bank(a, schema) != dump_bank(c, schema)

    def test_ids_and_provenance(self, schema):
        gen = generate_bank(schema, 3, seed=1, id_prefix="seeded")
        assert [p.id for p in gen.presets] == ["seeded_0000", "seeded_0001",
                                               "seeded_0002"]
        assert all(p.provenance == "default" for p in gen.presets)

    def test_default_fraction_shapes_the_bank(self, schema):
        gen = generate_bank(schema, 200, seed=5, default_fraction=0.6)
        at_default = sum(
            1 for p in gen.presets for s in schema.params
            if p.values[s.id] == s.default)
        share = at_default / (200 * len(schema.params))
        # discrete params can land on their default by chance, so the
        # observed share sits a little above the 0.6 pin rate
        assert 0.6 < share < 0.75

    def test_all_default_fraction_one(self, schema):
        gen = generate_bank(schema, 2, seed=5, default_fraction=1.0)
        for p in gen.presets:
            assert p.values == schema.default_values()

    def test_quantized_values_round_trip_exactly(self, schema):
        gen = generate_bank(schema, 30, seed=8, default_fraction=0.0)
        again = parse_bank(dump_bank(gen, schema), schema)
        for a, b in zip(gen.presets, again.presets):
            for spec in schema.params:
                if spec.kind == CONTINUOUS:
                    assert a.values[spec.id] == b.values[spec.id]  # bitwise
