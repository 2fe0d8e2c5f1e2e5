"""Tests for loading and saving JSON files and for the command dispatcher."""
import json

import pytest

from tropical_engine.cli_io import load, run_and_render, run_command, save, to_dict
from tropical_engine.complex_core import star_quotient
from tropical_engine.errors import SchemaError
from tropical_engine.moduli import build_m0n
from tropical_engine.utils.file_utils import read_json


class TestSerialize:
    @pytest.mark.parametrize("name, kind", [
        ("m04_complex.json", "complex"),
        ("adm_complex.json", "complex"),
    ])
    def test_complexes_survive_a_round_trip(self, fixtures_dir, name, kind):
        path = fixtures_dir / name
        assert to_dict(load(path, kind)) == read_json(path)

    @pytest.mark.parametrize("name, kind", [
        ("m04_ray_function.json", "plfn"),
        ("m04_fundamental_cycle.json", "cycle"),
        ("m04_unbalanced_cycle.json", "cycle"),
    ])
    def test_objects_on_m04_survive_a_round_trip(self, fixtures_dir, name, kind):
        m04 = load(fixtures_dir / "m04_complex.json", "complex")
        path = fixtures_dir / name
        assert to_dict(load(path, kind, complex=m04)) == read_json(path)

    def test_morphism_round_trip(self, fixtures_dir):
        m04 = load(fixtures_dir / "m04_complex.json", "complex")
        path = fixtures_dir / "m04_identity_morphism.json"
        assert to_dict(load(path, "morphism", source=m04, target=m04)) == read_json(path)

    def test_a_vertex_with_its_own_id_survives_a_round_trip(self, tmp_path):
        quotient, _ = star_quotient(build_m0n(5), "12")
        loaded = load(save(quotient, tmp_path / "star.json"), "complex")
        assert loaded.vertex.id == "12"
        assert to_dict(loaded) == to_dict(quotient)
        assert to_dict(loaded)["cones"][0] == {"id": "12", "rays": [], "aut": 1}

    def test_adm_complex_matches_its_builder(self, fixtures_dir):
        from tropical_engine.genus_one import build_adm

        loaded = load(fixtures_dir / "adm_complex.json", "complex")
        built, _ = build_adm()
        assert to_dict(loaded) == to_dict(built)
        assert len(loaded.rays) == 20
        assert loaded.cone("b|23").aut_order == 2

    def test_affine_fixture_has_one_vertex_generator(self, fixtures_dir):
        m04 = load(fixtures_dir / "m04_complex.json", "complex")
        A = load(fixtures_dir / "m04_cross_ratio_affine.json", "affine", complex=m04)
        assert A.star_lattice("0").rank == 1

    def test_decimals_are_rejected(self, fixtures_dir):
        m04 = load(fixtures_dir / "m04_complex.json", "complex")
        with pytest.raises(SchemaError) as info:
            load({"dim": 1, "weights": {"12": "1.5"}}, "cycle", complex=m04)
        assert info.value.diagnostics[0][0] == "$.weights.12"

    def test_unknown_cone_in_a_cycle(self, fixtures_dir):
        m04 = load(fixtures_dir / "m04_complex.json", "complex")
        with pytest.raises(SchemaError) as info:
            load({"dim": 1, "weights": {"99": "1"}}, "cycle", complex=m04)
        assert info.value.diagnostics == [("$.weights.99", "unknown cone")]

    def test_extra_fields_are_rejected(self):
        with pytest.raises(SchemaError):
            load({"rays": [], "cones": [], "colour": "red"}, "complex")

    def test_missing_file(self, tmp_path):
        with pytest.raises(SchemaError):
            load(tmp_path / "absent.json", "complex")

    def test_save_writes_sorted_json(self, fixtures_dir, tmp_path):
        m04 = load(fixtures_dir / "m04_complex.json", "complex")
        written = save(m04, tmp_path / "out" / "m04.json")
        text = written.read_text(encoding="utf-8")
        assert text.endswith("\n")
        assert json.loads(text) == read_json(fixtures_dir / "m04_complex.json")


class TestCommands:
    def test_psi_degree_on_m05(self):
        code, report = run_command(["m0n", "--n", "5", "--psi", "1", "--psi", "2", "--degree"])
        assert code == 0
        assert report.results["degree"] == "2"
        assert report.results["expected_degree"] == "2"
        assert report.provenance["expected_degree"] == "derived"

    def test_m0n_counts(self):
        code, report = run_command(["m0n", "--n", "6"])
        assert code == 0
        assert report.results["rays"] == 25
        assert report.results["cones_by_dim"][:2] == [1, 25]
        assert report.results["cones_by_dim"][-1] == 105

    def test_degree_needs_enough_psi_factors(self):
        code, report = run_command(["m0n", "--n", "6", "--psi", "1", "--degree"])
        assert code == 1
        assert report.results["error"] == "UsageError"

    def test_unbalanced_cycle_exits_two_with_a_witness(self, fixtures_dir):
        code, report = run_command([
            "check-balanced",
            "--complex", str(fixtures_dir / "m04_complex.json"),
            "--cycle", str(fixtures_dir / "m04_unbalanced_cycle.json"),
            "--affine", str(fixtures_dir / "m04_cross_ratio_affine.json"),
        ])
        assert code == 2
        assert report.results["balanced"] is False
        assert report.results["failing_cone"] == "0"
        assert report.results["witness"]["slopes"] == {"13": "1", "14": "-1"}

    def test_fundamental_cycle_is_balanced(self, fixtures_dir):
        code, report = run_command([
            "check-balanced",
            "--complex", str(fixtures_dir / "m04_complex.json"),
            "--cycle", str(fixtures_dir / "m04_fundamental_cycle.json"),
            "--affine", str(fixtures_dir / "m04_cross_ratio_affine.json"),
        ])
        assert code == 0
        assert report.results == {"balanced": True}

    def test_intersect_emits_the_product(self, fixtures_dir, tmp_path):
        emitted = tmp_path / "point.json"
        code, report = run_command([
            "intersect",
            "--complex", str(fixtures_dir / "m04_complex.json"),
            "--affine", str(fixtures_dir / "m04_cross_ratio_affine.json"),
            "--function", str(fixtures_dir / "m04_ray_function.json"),
            "--cycle", str(fixtures_dir / "m04_fundamental_cycle.json"),
            "--emit", str(emitted),
        ])
        assert code == 0
        assert report.results["cycle"] == {"dim": 0, "weights": {"0": "1"}}
        assert read_json(emitted) == {"dim": 0, "weights": {"0": "1"}}

    def test_pushforward_and_degree_along_the_identity(self, fixtures_dir):
        files = [
            "--source", str(fixtures_dir / "m04_complex.json"),
            "--target", str(fixtures_dir / "m04_complex.json"),
            "--morphism", str(fixtures_dir / "m04_identity_morphism.json"),
            "--cycle", str(fixtures_dir / "m04_fundamental_cycle.json"),
        ]
        code, report = run_command(["pushforward", *files])
        assert code == 0
        assert report.results["cycle"] == read_json(fixtures_dir / "m04_fundamental_cycle.json")
        code, report = run_command(["degree", *files, "--cone", "13", "--point", "5/2"])
        assert code == 0
        assert report.results["degree"] == "1"

    def test_pushforward_is_certified_against_the_given_structures(self, fixtures_dir):
        files = [
            "--source", str(fixtures_dir / "m04_complex.json"),
            "--target", str(fixtures_dir / "m04_complex.json"),
            "--morphism", str(fixtures_dir / "m04_identity_morphism.json"),
            "--cycle", str(fixtures_dir / "m04_fundamental_cycle.json"),
        ]
        affine = str(fixtures_dir / "m04_cross_ratio_affine.json")
        code, report = run_command(["pushforward", *files, "--target-affine", affine])
        assert code == 2
        assert report.results["error"] == "NotCertified"
        code, report = run_command(["pushforward", *files, "--source-affine", affine, "--target-affine", affine])
        assert code == 0
        assert report.results["cycle"] == read_json(fixtures_dir / "m04_fundamental_cycle.json")

    def test_genus_one_case_study(self):
        code, report = run_command(["case-study", "genus1", "--samples", "1", "--seed", "3"])
        assert code == 0
        assert set(report.results["psi_cycle"]["a"].values()) == {"2/3"}
        assert report.provenance["pushforward along phi1"] == "literature"

    @pytest.mark.parametrize("argv", [
        [],
        ["m0n"],
        ["m0n", "--n", "five"],
        ["case-study", "genus7"],
        ["m0n", "--n", "12"],
    ])
    def test_usage_errors_exit_one(self, argv):
        code, report = run_command(argv)
        assert code == 1
        assert report.status == "failed"

    def test_schema_errors_carry_diagnostics(self, tmp_path, fixtures_dir):
        bad = tmp_path / "bad_cycle.json"
        bad.write_text(json.dumps({"dim": 1, "weights": {"12": "0.5"}}), encoding="utf-8")
        code, report = run_command([
            "check-balanced",
            "--complex", str(fixtures_dir / "m04_complex.json"),
            "--cycle", str(bad),
        ])
        assert code == 1
        assert report.results["error"] == "SchemaError"
        assert report.results["diagnostics"][0]["path"] == "$.weights.12"

    def test_json_output_is_deterministic(self, tmp_path):
        argv = ["m0n", "--n", "5", "--psi", "1", "--psi", "1", "--degree", "--report", "json"]
        first = run_and_render(argv)
        second = run_and_render(argv)
        assert first == second
        payload = json.loads(first[1])
        assert payload["results"]["degree"] == "1"
        assert payload["exit_code"] == 0

    def test_text_report_and_output_file(self, tmp_path):
        out = tmp_path / "report.txt"
        code, text = run_and_render(["m0n", "--n", "4", "--output", str(out)])
        assert code == 0
        assert text.startswith("command: m0n --n 4")
        assert "status: ok (exit 0)" in text
        assert out.read_text(encoding="utf-8") == text
