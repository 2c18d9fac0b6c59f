import json

import numpy as np
import pytest

from cscert import (
    CertificationReport,
    DftUniquenessResult,
    ExperimentReport,
    load_matrix_csv,
    save_matrix_csv,
)
from cscert.cli import main
from conftest import DEMO_CSV


def run(*argv):
    return main(list(argv))


class TestCertifyCommand:
    def test_text_report_to_stdout(self, capsys):
        assert run("certify", "--matrix", str(DEMO_CSV)) == 0
        out = capsys.readouterr().out
        assert "spark: 6" in out
        assert "coherence: 0.49" in out

    def test_json_report_round_trips(self, tmp_path, capsys):
        out = tmp_path / "report.json"
        assert run("certify", "--matrix", str(DEMO_CSV), "--format", "json",
                   "--out", str(out)) == 0
        rep = CertificationReport.from_json(out.read_text())
        assert rep.spark == 6
        assert rep.to_json() == out.read_text()

    def test_budget_exhaustion_exits_2(self, tmp_path, capsys):
        assert run("certify", "--matrix", str(DEMO_CSV), "--budget", "10") == 2
        assert "budget" in capsys.readouterr().err

    def test_allow_approx_suppresses_status(self, capsys):
        assert run("certify", "--matrix", str(DEMO_CSV), "--budget", "10",
                   "--allow-approx") == 0

    def test_missing_file_is_input_error(self, capsys):
        assert run("certify", "--matrix", "no-such-file.csv") == 1
        err = capsys.readouterr().err
        assert err.startswith("error:") and err.count("\n") == 1

    def test_unnormalized_matrix_error_and_normalize_flag(self, tmp_path, capsys):
        f = tmp_path / "wide.csv"
        rng = np.random.default_rng(0)
        f.write_text(
            "\n".join(",".join(repr(float(v)) for v in row)
                      for row in rng.standard_normal((3, 5))) + "\n"
        )
        assert run("certify", "--matrix", str(f)) == 1
        assert "normalize" in capsys.readouterr().err
        assert run("certify", "--matrix", str(f), "--normalize") == 0


class TestDftLimitCommand:
    def test_worked_example(self, capsys):
        assert run("dft-limit", "--n", "32",
                   "--missing", "2,3,8,13,19,22,23,28,30") == 0
        out = capsys.readouterr().out
        assert "penalty = 16" in out
        assert "K <= 7" in out

    def test_json_round_trip(self, tmp_path):
        out = tmp_path / "limit.json"
        assert run("dft-limit", "--n", "32",
                   "--missing", "2,3,8,13,19,22,23,28,30",
                   "--format", "json", "--out", str(out)) == 0
        res = DftUniquenessResult.from_json(out.read_text())
        assert res.k_max == 7
        assert res.to_json() == out.read_text()

    def test_non_power_of_two_rejected(self, capsys):
        assert run("dft-limit", "--n", "12", "--missing", "1") == 1
        assert "power of two" in capsys.readouterr().err

    def test_pattern_file(self, tmp_path, capsys):
        f = tmp_path / "p.txt"
        f.write_text("8\n5\n")
        assert run("dft-limit", "--pattern", str(f)) == 0
        assert "K <= 3" in capsys.readouterr().out

    def test_pattern_excludes_inline_flags(self, tmp_path, capsys):
        f = tmp_path / "p.txt"
        f.write_text("8\n5\n")
        assert run("dft-limit", "--pattern", str(f), "--n", "8") == 1


class TestGenCommand:
    def test_gaussian_deterministic_files(self, tmp_path):
        f1, f2 = tmp_path / "a.csv", tmp_path / "b.csv"
        for f in (f1, f2):
            assert run("gen", "gaussian", "--rows", "5", "--cols", "8",
                       "--seed", "42", "--out", str(f)) == 0
        assert f1.read_bytes() == f2.read_bytes()
        a = load_matrix_csv(f1)
        assert a.shape == (5, 8)

    def test_partial_idft_file(self, tmp_path):
        f = tmp_path / "idft.csv"
        assert run("gen", "partial-idft", "--n", "8", "--positions", "0,1,2",
                   "--normalize", "--out", str(f)) == 0
        a = load_matrix_csv(f)
        assert a.shape == (3, 8) and a.normalized

    def test_random_fourier_with_count(self, tmp_path):
        f = tmp_path / "rf.csv"
        assert run("gen", "random-fourier", "--n", "8", "--count", "5",
                   "--seed", "3", "--out", str(f)) == 0
        assert load_matrix_csv(f).shape == (5, 8)

    def test_missing_options_are_input_errors(self, tmp_path, capsys):
        assert run("gen", "gaussian", "--out", str(tmp_path / "x.csv")) == 1
        assert run("gen", "random-fourier", "--n", "4",
                   "--out", str(tmp_path / "y.csv")) == 1


class TestReconCommand:
    def test_recovers_planted_spike(self, tmp_path, capsys):
        from cscert import SparseVector, SupportSet, measure
        a = load_matrix_csv(DEMO_CSV)
        x = SparseVector(8, SupportSet((6,)), np.array([2.0 + 0j]))
        y = measure(a, x)
        yfile = tmp_path / "y.csv"
        yfile.write_text("\n".join(repr(float(v.real)) for v in y) + "\n")
        out = tmp_path / "rec.json"
        assert run("recon", "--matrix", str(DEMO_CSV), "--measurements", str(yfile),
                   "--k", "1", "--format", "json", "--out", str(out)) == 0
        d = json.loads(out.read_text())
        assert d["support"] == [6]
        assert d["values"][0][0] == pytest.approx(2.0, abs=1e-9)
        assert d["residual"] <= 1e-9

    def test_dimension_mismatch_is_input_error(self, tmp_path, capsys):
        yfile = tmp_path / "y.csv"
        yfile.write_text("1.0\n2.0\n")
        assert run("recon", "--matrix", str(DEMO_CSV), "--measurements", str(yfile),
                   "--k", "1") == 1


class TestExperimentCommand:
    def test_json_report(self, tmp_path):
        out = tmp_path / "exp.json"
        assert run("experiment", "--matrix", str(DEMO_CSV), "--ks", "1",
                   "--trials", "25", "--seed", "7", "--out", str(out)) == 0
        rep = ExperimentReport.from_json(out.read_text())
        assert rep.success_rate == {1: 1.0}
        assert rep.to_json() == out.read_text()

    def test_csv_format(self, capsys):
        assert run("experiment", "--matrix", str(DEMO_CSV), "--ks", "1,2",
                   "--trials", "5", "--seed", "0", "--format", "csv") == 0
        out = capsys.readouterr().out
        assert out.splitlines()[0] == "K,success_rate"

    def test_identical_invocations_byte_identical_files(self, tmp_path):
        f1, f2 = tmp_path / "r1.json", tmp_path / "r2.json"
        for f in (f1, f2):
            assert run("experiment", "--matrix", str(DEMO_CSV), "--ks", "1,2",
                       "--trials", "20", "--seed", "11", "--out", str(f)) == 0
        assert f1.read_bytes() == f2.read_bytes()

    def test_bad_ks_is_input_error(self, capsys):
        assert run("experiment", "--matrix", str(DEMO_CSV), "--ks", "abc") == 1


class TestUsageErrors:
    def test_unknown_flag_is_status_1(self, capsys):
        assert run("certify", "--matrix", str(DEMO_CSV), "--frobnicate") == 1
        err = capsys.readouterr().err
        assert err.startswith("error:")

    def test_unknown_command_is_status_1(self, capsys):
        assert run("frobnicate") == 1

    def test_gen_round_trip_through_loader(self, tmp_path):
        f = tmp_path / "m.csv"
        assert run("gen", "gaussian", "--rows", "3", "--cols", "4",
                   "--seed", "1", "--out", str(f)) == 0
        a = load_matrix_csv(f)
        g = tmp_path / "again.csv"
        save_matrix_csv(a, g)
        assert f.read_bytes() == g.read_bytes()
