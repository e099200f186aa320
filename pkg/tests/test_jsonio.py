"""Document parsing, serialization round-trips, and schema validation."""

import json
from importlib import resources
from pathlib import Path

import jsonschema
import pytest

from invcycle.jsonio import (
    InputError,
    ParseError,
    SchemaError,
    branch_spec_to_json,
    dumps_canonical,
    exclusion_fact_to_json,
    gram_to_json,
    load_json,
    parse_assumptions,
    parse_branch_spec,
    parse_exclusion_fact,
    parse_gram,
    parse_int_entry,
    parse_surface_config,
    surface_config_to_json,
)
from invcycle.lattice import GramLattice


class TestLoadJson:
    def test_parse_error_carries_position(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text('{"a": 1,\n  "b": }\n', encoding="utf-8")
        with pytest.raises(ParseError) as exc:
            load_json(bad)
        assert "line 2" in str(exc.value)
        assert "column" in str(exc.value)

    def test_error_hierarchy(self):
        assert issubclass(ParseError, InputError)
        assert issubclass(SchemaError, InputError)
        assert issubclass(InputError, ValueError)


class TestIntEntries:
    @pytest.mark.parametrize(
        "raw,expected",
        [("42", 42), ("-7", -7), ("+3", 3), (" 12 ", 12), (0, 0), (-5, -5)],
    )
    def test_accepted(self, raw, expected):
        assert parse_int_entry(raw, "x") == expected

    @pytest.mark.parametrize("raw", ["", "1.5", "0x10", "1e3", "--2", None, 2.0, True])
    def test_rejected(self, raw):
        with pytest.raises(InputError):
            parse_int_entry(raw, "x")

    def test_huge_entry_survives(self):
        big = 10**40
        assert parse_int_entry(str(big), "x") == big


class TestGram:
    def test_roundtrip(self):
        lat = GramLattice([[4, 2], [2, 4]])
        encoded = gram_to_json(lat)
        assert encoded == [["4", "2"], ["2", "4"]]
        assert parse_gram(encoded, "g").gram == lat.gram

    def test_mixed_entries(self):
        assert parse_gram([[2, "1"], ["1", 2]], "g").gram == ((2, 1), (1, 2))

    def test_asymmetric_rejected_as_schema_error(self):
        with pytest.raises(SchemaError):
            parse_gram([["1", "2"], ["3", "4"]], "g")

    def test_non_array_rejected(self):
        with pytest.raises(SchemaError):
            parse_gram({"rows": []}, "g")


class TestSurfaceConfig:
    DOC = {
        "name": "K3-E8-E6-D4",
        "base_genus": 0,
        "fibers": [
            {"label": "0", "type": "II*"},
            {"label": "1", "type": "IV*"},
            {"label": "2", "type": "I0*"},
        ],
    }

    def test_roundtrip(self):
        cfg = parse_surface_config(self.DOC)
        assert surface_config_to_json(cfg) == self.DOC

    def test_missing_field_named(self):
        doc = {"name": "x", "fibers": []}
        with pytest.raises(SchemaError) as exc:
            parse_surface_config(doc)
        assert "base_genus" in str(exc.value)

    def test_unknown_field_named(self):
        doc = dict(self.DOC, genus=1)
        with pytest.raises(SchemaError) as exc:
            parse_surface_config(doc)
        assert "genus" in str(exc.value)

    def test_bad_fiber_token_is_parse_error(self):
        doc = {
            "name": "x",
            "base_genus": 0,
            "fibers": [{"label": "0", "type": "II**"}],
        }
        with pytest.raises(ParseError) as exc:
            parse_surface_config(doc)
        assert "fibers[0]" in str(exc.value)

    def test_duplicate_labels_rejected(self):
        doc = {
            "name": "x",
            "base_genus": 0,
            "fibers": [
                {"label": "0", "type": "II"},
                {"label": "0", "type": "IV"},
            ],
        }
        with pytest.raises(SchemaError):
            parse_surface_config(doc)

    def test_bool_genus_rejected(self):
        doc = dict(self.DOC, base_genus=True)
        with pytest.raises(SchemaError):
            parse_surface_config(doc)


class TestBranchSpec:
    def test_roundtrip(self):
        spec = parse_branch_spec({"branch": ["2", "0", "t", "1"]})
        assert branch_spec_to_json(spec) == {"branch": ["0", "1", "2", "t"]}

    def test_odd_count_is_schema_error(self):
        with pytest.raises(SchemaError):
            parse_branch_spec({"branch": ["0"]})

    def test_duplicates_rejected(self):
        with pytest.raises(SchemaError):
            parse_branch_spec({"branch": ["0", "0"]})

    def test_non_string_label(self):
        with pytest.raises(SchemaError):
            parse_branch_spec({"branch": ["0", 1]})


class TestExclusionFact:
    def test_roundtrip_with_fibers(self):
        doc = {
            "kind": "no_fibration_with_fibers",
            "form": [["4", "2"], ["2", "4"]],
            "fibers": ["I0*", "I0*", "IV", "IV*"],
            "provenance": "table lookup",
        }
        fact = parse_exclusion_fact(doc, "f")
        assert exclusion_fact_to_json(fact) == doc

    def test_form_must_be_even_binary(self):
        doc = {
            "kind": "not_isomorphic_to",
            "form": [["1", "0"], ["0", "2"]],
            "provenance": "p",
        }
        with pytest.raises(SchemaError):
            parse_exclusion_fact(doc, "f")

    def test_unknown_kind(self):
        with pytest.raises(SchemaError):
            parse_exclusion_fact({"kind": "gossip", "provenance": "p"}, "f")


class TestAssumptions:
    def test_flag_assumption(self):
        doc = {
            "assumptions": [
                {"name": "picard_maximal", "provenance": "declared"},
            ]
        }
        (a,) = parse_assumptions(doc)
        assert a.name == "picard_maximal"
        assert a.payload == {}

    def test_unknown_name(self):
        doc = {"assumptions": [{"name": "lucky_guess", "provenance": "p"}]}
        with pytest.raises(SchemaError) as exc:
            parse_assumptions(doc)
        assert "lucky_guess" in str(exc.value)

    def test_blank_provenance(self):
        doc = {"assumptions": [{"name": "picard_maximal", "provenance": "   "}]}
        with pytest.raises(SchemaError):
            parse_assumptions(doc)

    def test_torsion_payload_validated(self):
        doc = {
            "assumptions": [
                {
                    "name": "torsion_order",
                    "payload": {"stage": "Y1", "order": 0},
                    "provenance": "p",
                }
            ]
        }
        with pytest.raises(SchemaError):
            parse_assumptions(doc)

    def test_lattice_payload_validated(self):
        doc = {
            "assumptions": [
                {
                    "name": "seed_transcendental_lattice",
                    "payload": {"gram": [["4", "2"], ["1", "4"]]},
                    "provenance": "p",
                }
            ]
        }
        with pytest.raises(SchemaError):
            parse_assumptions(doc)

    def test_flag_payload_must_be_empty(self):
        doc = {
            "assumptions": [
                {
                    "name": "picard_maximal",
                    "payload": {"extra": 1},
                    "provenance": "p",
                }
            ]
        }
        with pytest.raises(SchemaError):
            parse_assumptions(doc)

    def test_embedded_exclusion_fact_validated(self):
        doc = {
            "assumptions": [
                {
                    "name": "exclusion_fact",
                    "payload": {"kind": "not_isomorphic_to", "provenance": "p"},
                    "provenance": "p",
                }
            ]
        }
        with pytest.raises(SchemaError):
            parse_assumptions(doc)


class TestCanonicalDump:
    def test_sorted_and_newline_terminated(self):
        text = dumps_canonical({"b": 1, "a": [2, 1]})
        assert text == '{\n  "a": [\n    2,\n    1\n  ],\n  "b": 1\n}\n'

    def test_non_ascii_preserved(self):
        assert dumps_canonical({"k": "Néron"}) == '{\n  "k": "Néron"\n}\n'


def bundled(example, name):
    root = resources.files("invcycle").joinpath("data", example, name)
    return json.loads(root.read_text(encoding="utf-8"))


def load_schema():
    path = Path(__file__).resolve().parent.parent / "schemas" / "invcycle.schema.json"
    return json.loads(path.read_text(encoding="utf-8"))


class TestBundledDataFiles:
    @pytest.mark.parametrize("example", ["example1", "example2"])
    def test_parse_cleanly(self, example):
        parse_surface_config(bundled(example, "config.json"))
        parse_branch_spec(bundled(example, "branch.json"))
        assumptions = parse_assumptions(bundled(example, "assumptions.json"))
        assert assumptions

    @pytest.mark.parametrize(
        "example,name,key",
        [
            (ex, name, key)
            for ex in ("example1", "example2")
            for name, key in (
                ("config.json", "config"),
                ("branch.json", "branch"),
                ("assumptions.json", "assumptions"),
            )
        ],
    )
    def test_schema_validates(self, example, name, key):
        schema = load_schema()
        document = bundled(example, name)
        wrapper = {
            "$schema": schema["$schema"],
            "$defs": schema["$defs"],
            "$ref": f"#/$defs/{key}",
        }
        jsonschema.validate(document, wrapper)
