import json
from pathlib import Path

import pytest

from tfcorner.cli import CliConfigError, emit_plots, main


def run(args):
    return main(list(args))


class TestPainleveCommand:
    def test_writes_profile_csv(self, tmp_path):
        out = tmp_path / "out"
        code = run(["painleve", "--p", "2", "--xmin", "-30", "--xmax", "15",
                    "--n", "4000", "--out", str(out)])
        assert code == 0
        hm = out / "hm.csv"
        assert hm.exists()
        assert hm.read_text().splitlines()[0] == "x,v,vx"
        assert (out / "hm.svg").exists()

    def test_truncation_error_exit_1(self, tmp_path):
        code = run(["painleve", "--p", "3", "--xmin", "-15", "--xmax", "15",
                    "--n", "2000", "--out", str(tmp_path / "o")])
        assert code == 1


class TestValidation:
    def test_unknown_trap_kind(self, tmp_path):
        assert run(["ground", "--trap", "nosuch", "--out", str(tmp_path)]) == 2

    def test_unknown_flag_rejected(self, tmp_path):
        assert run(["ground", "--no-such-flag", "1", "--out", str(tmp_path)]) == 2

    def test_bad_epsilon_list(self, tmp_path):
        assert run(["ground", "--eps", "0.05,-0.01", "--out", str(tmp_path)]) == 2

    def test_unknown_config_key(self, tmp_path):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("nonsense_key=3\n")
        assert run(["ground", "--config", str(cfg), "--out", str(tmp_path)]) == 2

    def test_missing_config_file(self, tmp_path):
        assert run(["ground", "--config", str(tmp_path / "nope.cfg"),
                    "--out", str(tmp_path)]) == 2


class TestConfigFile:
    def test_flags_override_config(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("# comment line\ntrap=harmonic\naniso=0.8\n")
        out = tmp_path / "out"
        code = run(["trap", "--config", str(cfg), "--aniso", "1.0", "--out", str(out)])
        assert code == 0
        meta = json.loads((out / "trap.json").read_text())
        assert meta["params"]["aniso"] == 1.0  # flag wins over config

    def test_config_values_used(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("trap=harmonic\naniso=0.8\n")
        out = tmp_path / "out"
        assert run(["trap", "--config", str(cfg), "--out", str(out)]) == 0
        meta = json.loads((out / "trap.json").read_text())
        assert meta["params"]["aniso"] == 0.8


class TestGroundCommand:
    def test_radial_artifacts(self, tmp_path):
        out = tmp_path / "out"
        code = run(["ground", "--trap", "harmonic", "--eps", "0.05",
                    "--n", "2000", "--out", str(out)])
        assert code == 0
        assert (out / "ground_eps0.05.csv").exists()
        meta = json.loads((out / "ground_eps0.05.json").read_text())
        assert meta["epsilon"] == 0.05
        header = (out / "ground_eps0.05.csv").read_text().splitlines()[0]
        assert header == "r,eta,eta_r,W"

    def test_radial_mode_needs_radial_trap(self, tmp_path):
        code = run(["ground", "--trap", "harmonic", "--aniso", "0.8",
                    "--out", str(tmp_path / "o")])
        assert code == 2


@pytest.fixture(scope="module")
def verify_out(tmp_path_factory):
    out = tmp_path_factory.mktemp("verify") / "out"
    code = run(["verify", "--trap", "harmonic", "--aniso", "1.0",
                "--eps", "0.05,0.02,0.01", "--out", str(out)])
    assert code == 0
    return out


class TestVerifyCommand:
    def test_report_contains_lambda_anchor(self, verify_out):
        payload = json.loads((verify_out / "report.json").read_text(encoding="utf-8"))
        assert "λ_ε − λ₀ = O(|ln ε|ε²)" in payload["anchors"]

    def test_artifacts_present(self, verify_out):
        for name in ("hm.csv", "report.json", "report.csv", "lambda_rate.csv",
                     "ground_eps0.05.csv", "ground_eps0.01.json",
                     "hm.svg", "lambda_rate.svg"):
            assert (verify_out / name).exists(), name

    def test_rerun_byte_identical(self, verify_out, tmp_path):
        out2 = tmp_path / "again"
        code = run(["verify", "--trap", "harmonic", "--aniso", "1.0",
                    "--eps", "0.05,0.02,0.01", "--out", str(out2)])
        assert code == 0
        for name in ("report.json", "report.csv", "hm.csv", "lambda_rate.csv",
                     "energy_remainder.csv", "ground_eps0.05.csv",
                     "ground_eps0.02.json"):
            assert (verify_out / name).read_bytes() == (out2 / name).read_bytes(), name


class TestSweep:
    def test_fan_out_and_merge(self, tmp_path, monkeypatch):
        monkeypatch.setenv("TF_CORNER_JOBS", "2")
        out = tmp_path / "sweep"
        code = run(["sweep", "--trap", "harmonic", "--eps", "0.06,0.05",
                    "--n", "2000", "--out", str(out)])
        assert code == 0
        summary = json.loads((out / "summary.json").read_text())
        assert len(summary["jobs"]) == 2
        eps_seen = [j["eps"] for j in summary["jobs"]]
        assert eps_seen == sorted(eps_seen, reverse=True)
        for job in summary["jobs"]:
            assert Path(job["dir"]).is_dir()
            assert any(Path(job["dir"]).glob("ground_eps*.csv"))


class TestEmitPlots:
    def test_overlay_plot(self, tmp_path):
        csv = tmp_path / "prof.csv"
        csv.write_text("x,a,b\n0,1,2\n1,2,3\n2,3,5\n")
        (svg,) = emit_plots([csv], tmp_path)
        text = svg.read_text()
        assert "source: prof.csv sha256:" in text

    def test_rate_plot_has_fit_annotation(self, tmp_path):
        csv = tmp_path / "rate.csv"
        csv.write_text("eps,err\n0.1,0.01\n0.05,0.0025\n0.025,0.000625\n")
        (svg,) = emit_plots([csv], tmp_path)
        assert "fit:" in svg.read_text()

    def test_empty_csv_rejected(self, tmp_path):
        csv = tmp_path / "empty.csv"
        csv.write_text("")
        with pytest.raises(CliConfigError):
            emit_plots([csv], tmp_path)

    def test_malformed_csv_rejected(self, tmp_path):
        csv = tmp_path / "bad.csv"
        csv.write_text("x,y\n1,2\n3,not_a_number\n")
        with pytest.raises(CliConfigError):
            emit_plots([csv], tmp_path)

    def test_malformed_table_gives_exit_2(self, tmp_path):
        table = tmp_path / "table.csv"
        table.write_text("r,W\n0,0\n")
        code = run(["trap", "--trap", "table", "--table-file", str(table),
                    "--out", str(tmp_path / "o")])
        assert code == 2


class TestApproxCommand:
    def test_section_artifacts(self, tmp_path):
        out = tmp_path / "out"
        code = run(["approx", "--trap", "harmonic", "--eps", "0.02",
                    "--n", "2000", "--out", str(out)])
        assert code == 0
        section = out / "section_eps0.02.csv"
        assert section.exists()
        header = section.read_text().splitlines()[0]
        assert header == "t,theta,u_ap,inner,sqrt_a_plus"
        assert (out / "section_eps0.02.svg").exists()


def test_gaussian_trap_flags(tmp_path):
    out = tmp_path / "out"
    code = run(["ground", "--trap", "gaussian", "--bump-a", "0.3", "--bump-b", "1.5",
                "--eps", "0.05", "--n", "2000", "--out", str(out)])
    assert code == 0
    meta = json.loads((out / "ground_eps0.05.json").read_text())
    assert meta["trap_kind"] == "gaussian_bump"
    assert meta["trap_params"] == {"a": 0.3, "b": 1.5}
