"""End-to-end pipeline reports: frozen values, tampering, failure paths."""

import json
from importlib import resources

import pytest

from invcycle.jsonio import SchemaError
from invcycle.kodaira import fiber
from invcycle.pipeline import (
    PipelineContradictionError,
    PipelineError,
    build_pipeline_spec,
    report_exit_code,
    report_to_json,
    render_text,
    run_custom,
    run_example,
    run_pipeline,
)
from invcycle.surfaces import BranchSpec, SurfaceConfig


def bundled_doc(example, name):
    text = resources.files("invcycle").joinpath("data", example, name).read_text(
        encoding="utf-8"
    )
    return json.loads(text)


def write_docs(tmp_path, config, branch, assumptions):
    out = []
    for name, doc in (
        ("config.json", config),
        ("branch.json", branch),
        ("assumptions.json", assumptions),
    ):
        path = tmp_path / name
        path.write_text(json.dumps(doc), encoding="utf-8")
        out.append(path)
    return out


def docs(example):
    return (
        bundled_doc(example, "config.json"),
        bundled_doc(example, "branch.json"),
        bundled_doc(example, "assumptions.json"),
    )


@pytest.fixture(scope="module")
def report1():
    return run_example(1)


@pytest.fixture(scope="module")
def report2():
    return run_example(2)


class TestExample1:
    @pytest.fixture
    def report(self, report1):
        return report1

    def test_header(self, report):
        assert report["schema"] == "invcycle-report/1"
        assert report["pipeline"] == {"name": "K3-E8-E6-D4"}
        assert report["status"] == "verified"
        assert report["verdict"] == "LICT_fails"
        assert report["notes"] == []

    def test_seed_record(self, report):
        seed = report["seed"]
        assert seed["name"] == "X"
        inv = seed["invariants"]
        assert inv["e"] == {"tag": "derived", "value": 24}
        assert inv["h11"] == {"tag": "derived", "value": 20}
        assert inv["kind"] == "K3"
        st = seed["shioda_tate"]
        assert st["rho"] == {"tag": "assumed", "value": 20}
        assert st["mw_rank"] == {"tag": "derived", "value": 0}
        assert st["trivial_disc"] == {"tag": "derived", "value": "12"}
        assert seed["transcendental"]["gram"] == [["4", "2"], ["2", "4"]]
        assert seed["transcendental"]["disc"] == {"tag": "assumed", "value": 12}

    def test_stage_roster(self, report):
        assert [s["name"] for s in report["stages"]] == ["S_t", "Y0", "Y1", "Y2"]
        by_name = {s["name"]: s for s in report["stages"]}
        assert by_name["S_t"]["family_gate"] == {"ok": True, "detail": "elliptic-elliptic"}
        tokens = lambda s: sorted(f["type"] for f in s["config"]["fibers"])
        assert tokens(by_name["S_t"]) == ["IV", "IV*"]
        assert tokens(by_name["Y0"]) == ["II*", "II*", "IV"]
        assert tokens(by_name["Y1"]) == ["IV*", "IV*", "IV*"]
        assert tokens(by_name["Y2"]) == ["I0*", "I0*", "IV", "IV*"]
        assert by_name["S_t"]["base_change"]["delta"] == {"tag": "derived", "value": 3}
        assert by_name["Y0"]["base_change"]["delta"] == {"tag": "derived", "value": 2}
        assert by_name["S_t"]["config"]["base_genus"] == 1
        assert by_name["S_t"]["invariants"]["kind"] == "elliptic-elliptic"

    def test_candidates(self, report):
        cands = report["analysis"]["candidates"]
        assert cands["disc_seed"] == {"tag": "assumed", "value": 12}
        assert [(c["alpha"], c["disc"]["value"]) for c in cands["list"]] == [
            (0, 3), (1, 12), (2, 48),
        ]

    def test_shioda_inose_and_rigidity(self, report):
        si = report["analysis"]["shioda_inose"]
        assert si["stage"] == "Y0"
        assert si["gram"] == [["2", "1"], ["1", "2"]]
        assert si["disc"] == {"tag": "derived", "value": 3}
        rig = report["analysis"]["rigidity"]
        assert rig["rigid"] is True
        assert rig["index_bound"]["value"] == 10
        assert len(rig["checks"]) == 9

    def test_nearby_lattice(self, report):
        nearby = report["analysis"]["nearby_lattice"]
        assert nearby["disc"] == {"tag": "derived", "value": 3}
        assert nearby["conditional_on"] == [
            "constant_transcendental_vhs",
            "picard_maximal",
            "specialization_injective",
            "shioda_inose_cover",
        ]

    def test_resolution(self, report):
        (item,) = report["analysis"]["resolutions"]
        assert item["stage"] == "Y2"
        res = item["resolution"]
        assert res["resolved"] is True
        assert res["resolved_disc"] == {"tag": "derived", "value": 48}
        assert res["surviving"] == [{"alpha": 2, "disc": 48}]
        cert = {c["disc"]["value"]: c for c in res["certificate"]}
        assert cert[3]["excluded"] and cert[12]["excluded"] and not cert[48]["excluded"]

    def test_denominator_checks(self, report):
        checks = report["analysis"]["denominator_checks"]
        key = lambda c: (c["stage"], c["candidate_disc"]["value"])
        by_key = {key(c): c for c in checks}
        assert by_key[("X", 12)]["mwl_disc"]["value"] == "1"
        assert by_key[("X", 12)]["certified"] and by_key[("X", 12)]["consistent"]
        assert by_key[("S_t", 3)]["mwl_disc"]["value"] == "1/3"
        assert by_key[("S_t", 3)]["denominator_bound"]["value"] == 9
        assert by_key[("Y1", 3)]["torsion_order"]["value"] == 3
        # The excluded candidate 3 fails the bound on Y2; the checker
        # reports it as uncertified rather than as a contradiction.
        y2_small = by_key[("Y2", 3)]
        assert not y2_small["consistent"] and not y2_small["certified"]
        assert y2_small["mwl_disc"]["value"] == "1/48"
        assert y2_small["denominator_bound"]["value"] == 36
        assert by_key[("Y2", 12)]["consistent"] and not by_key[("Y2", 12)]["certified"]
        y2_final = by_key[("Y2", 48)]
        assert y2_final["consistent"] and y2_final["certified"]
        assert y2_final["mwl_disc"]["value"] == "1/3"

    def test_specialization(self, report):
        spec = report["specialization"]
        per = {p["stage"]: p for p in spec["per_stage"]}
        assert per["Y0"]["source"] == "shioda_inose"
        assert per["Y1"]["source"] == "assumption"
        assert per["Y2"]["source"] == "resolution"
        assert [i["index"]["value"] for i in per["Y0"]["indices"]] == [1]
        assert [i["index"]["value"] for i in per["Y2"]["indices"]] == [4]
        assert per["Y2"]["verdict"] == "LICT_fails"
        assert spec["failing_stages"] == ["Y2"]
        assert spec["verdict"] == "LICT_fails"

    def test_exit_code(self, report):
        assert report_exit_code(report) == 0
        assert report_exit_code(report, strict=True) == 0

    def test_ledger(self, report):
        ledger = report["assumption_ledger"]
        assert len(ledger) == 14
        assert all(e["provenance"].strip() for e in ledger)
        fact_entries = [e for e in ledger if e["name"] == "exclusion_fact"]
        assert len(fact_entries) == 3
        assert all("kind" in e["payload"] for e in fact_entries)

    def test_render_text(self, report):
        text = render_text(report)
        assert "pipeline: K3-E8-E6-D4" in text
        assert "status: verified" in text
        assert "verdict: LICT_fails" in text
        assert "excluded by height bound" in text
        assert "CONTRADICTION" not in text


class TestExample2:
    @pytest.fixture
    def report(self, report2):
        return report2

    def test_header(self, report):
        assert report["pipeline"] == {"name": "K3-E8-D5-D5"}
        assert report["status"] == "conditional"
        assert report["verdict"] == "LICT_fails"
        assert report["notes"] == [
            "stage Y1: discriminant not uniquely resolved, surviving candidates {16, 64}",
            "stage Y2: discriminant not uniquely resolved, surviving candidates {16, 64}",
        ]

    def test_candidates(self, report):
        cands = report["analysis"]["candidates"]
        assert cands["disc_seed"]["value"] == 16
        assert [(c["alpha"], c["disc"]["value"]) for c in cands["list"]] == [
            (0, 4), (1, 16), (2, 64),
        ]

    def test_shioda_inose(self, report):
        si = report["analysis"]["shioda_inose"]
        assert si["stage"] == "Y0"
        assert si["gram"] == [["2", "0"], ["0", "2"]]
        assert report["analysis"]["rigidity"]["rigid"] is True
        assert report["analysis"]["nearby_lattice"]["disc"]["value"] == 4

    def test_stage_roster(self, report):
        by_name = {s["name"]: s for s in report["stages"]}
        tokens = lambda s: sorted(f["type"] for f in s["config"]["fibers"])
        assert tokens(by_name["Y0"]) == ["I2", "I2", "II*", "II*"]
        assert tokens(by_name["Y1"]) == ["I1*", "I1*", "I2", "IV*"]
        assert tokens(by_name["Y2"]) == ["I1*", "I1*", "I2", "IV*"]
        assert tokens(by_name["S_t"]) == ["I2", "I2", "IV*"]

    def test_ambiguity_survives_to_specialization(self, report):
        per = {p["stage"]: p for p in report["specialization"]["per_stage"]}
        for stage in ("Y1", "Y2"):
            assert per[stage]["source"] == "resolution"
            pairs = [
                (i["central_disc"]["value"], i["index"]["value"])
                for i in per[stage]["indices"]
            ]
            assert pairs == [(16, 2), (64, 4)]
            assert per[stage]["verdict"] == "LICT_fails"
        assert per["Y0"]["verdict"] == "LICT_holds_possible"
        assert report["specialization"]["failing_stages"] == ["Y1", "Y2"]

    def test_exit_code(self, report):
        assert report_exit_code(report) == 2
        assert report_exit_code(report, strict=True) == 1

    def test_conditional_stages_have_provenance(self, report):
        # Every stage named in a note ties back to ledger entries with
        # nonempty provenance strings.
        assert all(e["provenance"].strip() for e in report["assumption_ledger"])
        noted = {n.split(":")[0].removeprefix("stage ") for n in report["notes"]}
        assert noted == {"Y1", "Y2"}


class TestDeterminism:
    @pytest.mark.parametrize("example", [1, 2])
    def test_repeated_runs_identical(self, example):
        first = run_example(example)
        second = run_example(example)
        assert first == second
        assert report_to_json(first) == report_to_json(second)

    def test_custom_run_matches_bundled(self, tmp_path):
        paths = write_docs(tmp_path, *docs("example1"))
        assert run_custom(*paths) == run_example(1)


class TestTampering:
    def test_wrong_torsion_is_a_contradiction(self, tmp_path):
        config, branch, assumptions = docs("example1")
        for entry in assumptions["assumptions"]:
            if entry["name"] == "torsion_order" and entry["payload"]["stage"] == "Y0":
                entry["payload"]["order"] = 2
        paths = write_docs(tmp_path, config, branch, assumptions)
        with pytest.raises(PipelineContradictionError) as exc:
            run_custom(*paths)
        assert "Y0" in str(exc.value)

    def test_missing_picard_flag_degrades_to_conditional(self, tmp_path):
        config, branch, assumptions = docs("example1")
        assumptions["assumptions"] = [
            a for a in assumptions["assumptions"] if a["name"] != "picard_maximal"
        ]
        report = run_custom(*write_docs(tmp_path, config, branch, assumptions))
        assert report["status"] == "conditional"
        assert any("Picard" in note for note in report["notes"])
        assert "shioda_tate" not in report["seed"]
        assert report_exit_code(report) == 2

    def test_missing_seed_lattice_skips_analysis(self, tmp_path):
        config, branch, assumptions = docs("example1")
        assumptions["assumptions"] = [
            a
            for a in assumptions["assumptions"]
            if a["name"] != "seed_transcendental_lattice"
        ]
        report = run_custom(*write_docs(tmp_path, config, branch, assumptions))
        assert report["status"] == "conditional"
        assert report["analysis"] == {}
        assert "verdict" not in report
        assert any("lattice analysis skipped" in n for n in report["notes"])

    def test_missing_facts_leave_ambiguity_and_mixed_indices(self, tmp_path):
        config, branch, assumptions = docs("example1")
        assumptions["assumptions"] = [
            a for a in assumptions["assumptions"] if a["name"] != "exclusion_fact"
        ]
        report = run_custom(*write_docs(tmp_path, config, branch, assumptions))
        assert report["status"] == "conditional"
        (item,) = report["analysis"]["resolutions"]
        surviving = {s["disc"] for s in item["resolution"]["surviving"]}
        assert surviving == {3, 12, 48}
        per = {p["stage"]: p for p in report["specialization"]["per_stage"]}
        pairs = [
            (i["central_disc"]["value"], i["index"]["value"])
            for i in per["Y2"]["indices"]
        ]
        assert pairs == [(3, 1), (12, 2), (48, 4)]
        assert per["Y2"]["verdict"] == "undetermined"
        assert report["verdict"] == "undetermined"

    def test_missing_si_cover_blocks_specialization(self, tmp_path):
        config, branch, assumptions = docs("example1")
        assumptions["assumptions"] = [
            a for a in assumptions["assumptions"] if a["name"] != "shioda_inose_cover"
        ]
        report = run_custom(*write_docs(tmp_path, config, branch, assumptions))
        assert report["status"] == "conditional"
        assert "shioda_inose" not in report["analysis"]
        assert "per_stage" not in report["specialization"]
        assert any("nearby lattice" in n.lower() for n in report["notes"])


class TestGatesAndErrors:
    def test_family_gate_failure_skips_k3_stages(self, tmp_path):
        config, _branch, assumptions = docs("example1")
        branch = {"branch": ["0", "1", "2", "t", "u", "v"]}
        report = run_custom(*write_docs(tmp_path, config, branch, assumptions))
        assert report["status"] == "conditional"
        gate = report["stages"][0]["family_gate"]
        assert gate["ok"] is False
        assert [s["name"] for s in report["stages"]] == ["S_t"]
        skipped = [n for n in report["notes"] if "skipped" in n]
        assert any("Y0" in n for n in skipped)
        assert any("Y2" in n for n in skipped)

    def test_two_star_branch_fails_family_gate(self, tmp_path):
        # From a K3 seed the family stage can only be elliptic-elliptic
        # when exactly three branched stars absorb the Euler number, so
        # a two-star branch must stop at the gate with no K3 stages.
        config, _branch, assumptions = docs("example1")
        branch = {"branch": ["0", "1"]}
        report = run_custom(*write_docs(tmp_path, config, branch, assumptions))
        assert [s["name"] for s in report["stages"]] == ["S_t"]
        assert report["status"] == "conditional"
        assert report["stages"][0]["family_gate"]["ok"] is False
        assert report["stages"][0]["invariants"]["kind"] == "K3"

    def test_non_k3_seed_rejected(self):
        config = SurfaceConfig(
            name="rational",
            base_genus=0,
            fibers=(("0", fiber("II*")), ("1", fiber("II"))),
        )
        spec = build_pipeline_spec(config, BranchSpec(frozenset({"0", "1"})), ())
        with pytest.raises(PipelineError):
            run_pipeline(spec)

    def test_unknown_example_id(self):
        with pytest.raises(SchemaError):
            run_example(3)


class TestStageDerivation:
    def test_y_stages_are_star_pairs(self):
        config = SurfaceConfig(
            name="seed",
            base_genus=0,
            fibers=(
                ("a", fiber("II*")),
                ("b", fiber("IV")),
                ("c", fiber("IV*")),
                ("d", fiber("I0*")),
            ),
        )
        spec = build_pipeline_spec(
            config, BranchSpec(frozenset({"a", "c", "d", "t"})), ()
        )
        names = dict(spec.stages)
        assert set(names) == {"S_t", "Y0", "Y1", "Y2"}
        assert names["Y0"].labels == frozenset({"c", "d"})
        assert names["Y1"].labels == frozenset({"a", "d"})
        assert names["Y2"].labels == frozenset({"a", "c"})

    def test_no_y_stages_without_three_stars(self):
        config = SurfaceConfig(
            name="seed", base_genus=0, fibers=(("a", fiber("II*")),)
        )
        spec = build_pipeline_spec(config, BranchSpec(frozenset({"a", "t"})), ())
        assert [name for name, _ in spec.stages] == ["S_t"]
