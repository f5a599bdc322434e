"""Tests for rod-file ingestion, the verify suites, and report plumbing."""

import json

import pytest

from todkit import cli
from todkit.errors import RodDataError

EH_DOC = {
    "mode": "ale",
    "c": "-1/16",
    "rods": [{"z": "-1/4", "a": "1/2"}, {"z": "1/4", "a": "1/2"}],
    "gauge": {"h_constant": "symmetric"},
}


def write_rod_file(tmp_path, doc, name="rods.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def run(args, capsys):
    code = cli.main(args)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestRodFile:
    def test_fraction_strings_give_exact_data(self, tmp_path):
        data, digest = cli.load_rod_file(write_rod_file(tmp_path, EH_DOC))
        assert data.is_exact
        assert float(data.c) == -1 / 16
        assert data.zs == (-0.25, 0.25)
        assert len(digest) == 64

    def test_defaults(self, tmp_path):
        doc = {"c": -0.0625,
               "rods": [{"z": -0.25, "a": 0.5}, {"z": 0.25, "a": 0.5}]}
        data, _ = cli.load_rod_file(write_rod_file(tmp_path, doc))
        assert data.mode == "ale"
        assert data.gauge == "symmetric"

    def test_malformed_documents(self, tmp_path):
        bad = [
            "not json at all",
            json.dumps([1, 2]),
            json.dumps({"c": -1.0}),
            json.dumps({"c": -1.0, "rods": []}),
            json.dumps({"c": -1.0, "rods": [{"z": 0.0}]}),
            json.dumps({"c": -1.0, "rods": [{"z": 0.0, "a": "x/y"}]}),
            json.dumps({"c": -1.0, "rods": [{"z": 0.0, "a": 1.0}],
                        "gauge": {"wrong": 0}}),
            json.dumps({"c": True, "rods": [{"z": 0.0, "a": 1.0}]}),
        ]
        for k, text in enumerate(bad):
            path = tmp_path / f"bad{k}.json"
            path.write_text(text)
            with pytest.raises(RodDataError):
                cli.load_rod_file(str(path))

    def test_validation_exit_codes(self, tmp_path, capsys):
        path = write_rod_file(tmp_path, {
            "c": 0.5, "rods": [{"z": 0.0, "a": 1.0}]})
        code, _, err = run(["verify", path], capsys)
        assert code == 2
        assert "c must be negative" in err

        path = write_rod_file(tmp_path, {
            "c": -1.0,
            "rods": [{"z": -0.5, "a": 0.4}, {"z": 0.5, "a": 0.4}]}, "sum.json")
        code, _, err = run(["verify", path], capsys)
        assert code == 2
        assert "summing to 1" in err


class TestBuild:
    def test_default_grid_row_count(self, tmp_path, capsys):
        path = write_rod_file(tmp_path, EH_DOC)
        code, out, _ = run(["build", path], capsys)
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "rho,zeta,W,F,e2nu,z,lambda"
        assert len(lines) == 401
        first = [float(v) for v in lines[1].split(",")]
        assert len(first) == 7

    def test_grid_flag(self, tmp_path, capsys):
        path = write_rod_file(tmp_path, EH_DOC)
        code, out, _ = run(["build", path, "--grid", "3x5"], capsys)
        assert code == 0
        assert len(out.strip().splitlines()) == 16

    def test_bad_grid(self, tmp_path, capsys):
        path = write_rod_file(tmp_path, EH_DOC)
        code, _, err = run(["build", path, "--grid", "wide"], capsys)
        assert code == 2
        assert "grid" in err

    def test_lambda_column_matches_z(self, tmp_path, capsys):
        path = write_rod_file(tmp_path, EH_DOC)
        code, out, _ = run(["build", path, "--grid", "2x2"], capsys)
        assert code == 0
        for line in out.strip().splitlines()[1:]:
            row = [float(v) for v in line.split(",")]
            assert abs(row[6] - (-2 * (-1 / 16) / row[5] ** 3)) < 1e-12


class TestVerify:
    def test_eh_all_pass(self, tmp_path, capsys):
        path = write_rod_file(tmp_path, EH_DOC)
        code, out, _ = run(["verify", path, "--suite", "all"], capsys)
        assert code == 0
        report = json.loads(out)
        assert report["schema"] == "todkit-report-1"
        assert report["status"] == "pass"
        assert report["summary"]["fail"] == 0
        names = {ch["name"] for ch in report["checks"]}
        assert {"killing_det", "ricci_ratio", "gl2z", "decay_exponent"} <= names

    def test_reports_are_byte_stable(self, tmp_path, capsys):
        path = write_rod_file(tmp_path, EH_DOC)
        _, first, _ = run(["verify", path, "--seed", "5"], capsys)
        _, second, _ = run(["verify", path, "--seed", "5"], capsys)
        assert first == second

    def test_perturbed_weights_fail_integrality(self, tmp_path, capsys):
        doc = {"c": -0.0625,
               "rods": [{"z": -0.25, "a": 0.4}, {"z": 0.25, "a": 0.6}]}
        path = write_rod_file(tmp_path, doc)
        code, out, _ = run(["verify", path, "--suite", "rods"], capsys)
        assert code == 1
        report = json.loads(out)
        by_name = {ch["name"]: ch for ch in report["checks"]}
        assert by_name["gl2z"]["status"] == "fail"

    def test_single_nut_degenerate_code(self, tmp_path, capsys):
        path = write_rod_file(tmp_path, {
            "c": -0.25, "rods": [{"z": 0.0, "a": 1.0}]})
        code, out, _ = run(["verify", path, "--suite", "fields"], capsys)
        assert code == 1
        report = json.loads(out)
        first = report["checks"][0]
        assert first["name"] == "w_identically_zero"
        assert first["status"] == "fail"
        assert first["measured"] == 0.0
        assert all(ch["status"] == "skip" for ch in report["checks"][1:])

    def test_tol_override(self, tmp_path, capsys):
        path = write_rod_file(tmp_path, EH_DOC)
        code, out, _ = run(["verify", path, "--suite", "rods",
                            "--tol", "conical=1e-20"], capsys)
        assert code == 1
        report = json.loads(out)
        by_name = {ch["name"]: ch for ch in report["checks"]}
        assert by_name["conical"]["status"] == "fail"

        code, _, err = run(["verify", path, "--tol", "bogus=1"], capsys)
        assert code == 2
        assert "bogus" in err

    def test_out_file(self, tmp_path, capsys):
        path = write_rod_file(tmp_path, EH_DOC)
        out_path = tmp_path / "report.json"
        code, out, _ = run(["verify", path, "--suite", "rods",
                            "--out", str(out_path)], capsys)
        assert code == 0
        assert out == ""
        report = json.loads(out_path.read_text())
        assert report["suite"] == "rods"

    def test_unnormalized_c_skips_decay(self, tmp_path, capsys):
        # kappa = 1/16 for these nuts but c = -0.25: cone is squashed, so
        # the decay fit is skipped rather than reported as a failure
        doc = {"c": -0.25,
               "rods": [{"z": -0.25, "a": 0.5}, {"z": 0.25, "a": 0.5}]}
        path = write_rod_file(tmp_path, doc)
        code, out, _ = run(["verify", path, "--suite", "cky"], capsys)
        assert code == 0
        report = json.loads(out)
        by_name = {ch["name"]: ch for ch in report["checks"]}
        assert by_name["decay_exponent"]["status"] == "skip"


class TestClassify:
    def test_default_single_family(self, capsys):
        code, out, _ = run(["classify", "--nmax", "4"], capsys)
        assert code == 0
        report = json.loads(out)
        assert report["summary"]["admissible"] == 1
        survivor = report["admissible"][0]
        assert survivor["n"] == 2
        assert survivor["details"]["level"] == 2
        assert survivor["details"]["weights"] == ["1/2", "1/2"]

    def test_nmax_one_has_degeneracy_certificate(self, capsys):
        code, out, _ = run(["classify", "--nmax", "1"], capsys)
        assert code == 0
        report = json.loads(out)
        assert report["summary"]["admissible"] == 0
        branch = report["branches"][0]
        assert "vanishing W" in branch["certificate"]
        assert branch["details"]["degenerate"] is True

    def test_af_lattice_is_informational(self, capsys):
        code, out, _ = run(["classify", "--nmax", "3",
                            "--asymptotics", "af"], capsys)
        assert code == 0
        report = json.loads(out)
        assert report["summary"]["admissible"] == 1
        statuses = {b["status"] for b in report["branches"] if b["n"] == 3}
        assert "informational" in statuses


class TestPd:
    def test_check_spot_values(self, capsys):
        code, out, _ = run(["pd", "check", "--roots",
                            "0.2", "0.4", "2.0", "6.25"], capsys)
        assert code == 0
        report = json.loads(out)
        assert report["verdict"] == "generic"
        assert not report["regular"]
        assert abs(report["m"] - 32 / 3) < 1e-3
        assert abs(report["n"] + 0.120773) < 1e-5

    def test_check_flat_verdict(self, capsys):
        code, out, _ = run(["pd", "check", "--roots",
                            "-2", "-0.5", "0.5", "2"], capsys)
        assert code == 0
        assert json.loads(out)["verdict"] == "flat"

    def test_scan_is_reproducible(self, capsys):
        args = ["pd", "scan", "--case", "ii", "--samples", "100",
                "--seed", "42"]
        code, first, _ = run(args, capsys)
        assert code == 0
        _, second, _ = run(args, capsys)
        assert first == second
        report = json.loads(first)
        assert report["admissible"] == 0
        assert sum(report["certificates"].values()) == 100

    def test_selfdual_certificate(self, capsys):
        code, out, _ = run(["pd", "selfdual", "--case", "a",
                            "--u", "0.3", "--v", "0.6"], capsys)
        assert code == 0
        cert = json.loads(out)["certificate"]
        assert cert["case"] == "a"
        assert not cert["regular"]
        assert 0 < cert["eps"] < 1

    def test_invalid_roots_exit_two(self, capsys):
        code, _, err = run(["pd", "check", "--roots", "1", "2", "3", "4"],
                           capsys)
        assert code == 2
        assert "product" in err

        code, _, err = run(["pd", "selfdual", "--case", "a"], capsys)
        assert code == 2
        assert "--u" in err
