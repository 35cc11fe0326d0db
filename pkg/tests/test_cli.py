from __future__ import annotations

import json
import subprocess
import sys

import pytest
from conftest import FIXTURES

from hauptraces.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestCommands:
    def test_coeffs_text(self, capsys):
        code, out, _ = run(capsys, "coeffs", "--p", "2", "--star", "--n-max", "3")
        assert code == 0
        assert out.splitlines() == ["q^-1: 1", "q^0: 0", "q^1: 4372", "q^2: 96256", "q^3: 1240002"]

    def test_coeffs_json(self, capsys):
        code, out, _ = run(capsys, "coeffs", "--p", "3", "--n-max", "3", "--format", "json")
        data = json.loads(out)
        assert data["schema_version"] == 1
        assert data["series"]["valuation"] == -1
        assert data["series"]["coeffs"] == ["1", "0", "54", "-76", "-243"]

    def test_coeffs_csv(self, capsys):
        code, out, _ = run(capsys, "coeffs", "--p", "1", "--n-max", "1", "--format", "csv")
        assert out == "n,coefficient\n-1,1\n0,0\n1,196884\n"

    @pytest.mark.parametrize("p", [2, 3, 5])
    def test_table_csv_is_byte_exact(self, capsys, p):
        code, out, _ = run(capsys, "table", "--p", str(p), "--d-max", "50", "--format", "csv")
        assert code == 0
        assert out == (FIXTURES / f"table_p{p}.csv").read_text()

    def test_table_threads_do_not_change_output(self, capsys):
        _, one, _ = run(capsys, "table", "--p", "3", "--d-max", "40", "--format", "json")
        _, two, _ = run(capsys, "table", "--p", "3", "--d-max", "40", "--format", "json", "--threads", "2")
        assert one == two

    def test_trace(self, capsys):
        code, out, _ = run(capsys, "trace", "--p", "2", "--star", "--m", "2", "--d", "47")
        assert out == "t_2^(2*)(47) = -4515675925\n"
        code, out, _ = run(capsys, "trace", "--p", "3", "--m", "1", "--d", "3", "--format", "json")
        assert json.loads(out)["value"] == -14

    def test_faber(self, capsys):
        code, out, _ = run(capsys, "faber", "--p", "1", "--m", "2", "--format", "csv")
        assert out == "power,coefficient\n0,-393768\n1,0\n2,1\n"

    def test_verify_thm1(self, capsys):
        code, out, _ = run(capsys, "verify", "thm1", "--p", "3", "--n-max", "1")
        assert code == 0
        assert "n=1: 54 = 54" in out

    @pytest.mark.parametrize("suite", ["sectors", "star"])
    def test_verify_window(self, capsys, suite):
        code, out, _ = run(capsys, "verify", suite, "--p", "5", "--window", "60", "--format", "json")
        assert code == 0
        data = json.loads(out)
        assert data["ok"] is True and data["window"] == [-1, 59]

    def test_verify_mismatch_exit_code(self, capsys, monkeypatch):
        from hauptraces import identities

        monkeypatch.setitem(identities.SIGMA_CONSTANT, 2, 23)
        code, out, _ = run(capsys, "verify", "thm1", "--p", "2", "--n-max", "3")
        assert code == 1
        assert "MISMATCH" in out

    def test_asym(self, capsys):
        code, out, _ = run(capsys, "asym", "--p", "3", "--grid", "50,100", "--format", "csv")
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "n,residue,exact,predicted,ratio"
        assert len(lines) == 7

    def test_eval_cm(self, capsys):
        code, out, _ = run(capsys, "eval-cm", "--p", "3", "--form", "3,3,1", "--prec", "128", "--format", "json")
        data = json.loads(out)
        assert code == 0
        assert float(data["real_mid"]) == -42.0 and data["real_rad"] < 1e-15
        assert abs(float(data["imag_mid"])) <= data["imag_rad"] + 1e-30

    def test_output_file(self, capsys, tmp_path):
        target = tmp_path / "t.csv"
        code, out, _ = run(capsys, "table", "--p", "5", "--d-max", "50", "--format", "csv", "--output", str(target))
        assert out == ""
        assert target.read_text() == (FIXTURES / "table_p5.csv").read_text()

    def test_seed_tables(self, capsys, tmp_path):
        code, out, _ = run(capsys, "--seed-tables", str(tmp_path))
        assert code == 0
        for p in (2, 3, 5):
            assert (tmp_path / f"table_p{p}.csv").read_text() == (FIXTURES / f"table_p{p}.csv").read_text()


class TestExitCodes:
    def test_unknown_command(self, capsys):
        with pytest.raises(SystemExit) as e:
            main(["bogus"])
        assert e.value.code == 2

    def test_low_precision_ceiling_is_usage_error(self, capsys):
        code, _, err = run(capsys, "trace", "--p", "3", "--m", "2", "--d", "20", "--prec-ceiling", "100")
        assert code == 2 and "128" in err

    def test_precision_failure(self, capsys):
        code, _, err = run(capsys, "trace", "--p", "3", "--m", "2", "--d", "2000", "--prec-ceiling", "128")
        assert code == 3

    def test_form_outside_Q_dp(self, capsys):
        code, _, err = run(capsys, "eval-cm", "--p", "3", "--form", "2,1,1")
        assert code == 2

    def test_bad_grid(self, capsys):
        code, _, _ = run(capsys, "asym", "--p", "3", "--grid", "a,b")
        assert code == 2

    def test_no_command(self, capsys):
        code, _, _ = run(capsys)
        assert code == 2


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "hauptraces", "faber", "--p", "3", "--star", "--m", "2"],
                         capture_output=True, text=True, check=True)
    assert out.stdout == "phi_2(J) = J^2 -1566\n"
