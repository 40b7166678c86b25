import pytest

from fraclap import cli
from fraclap.errors import NumericalError
from fraclap.report import CheckReport, CheckRow
from helpers import strip_seconds


def write_cfg(tmp_path, text: str, name="exp.cfg"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


def kernel_cfg(tmp_path, out: str):
    return write_cfg(
        tmp_path,
        f"experiment = kernel_check\ns_list = 0.5\noutput_dir = {out}\n",
    )


class TestSuccessPaths:
    def test_kernel_check_writes_csv(self, tmp_path, capsys):
        cfg = kernel_cfg(tmp_path, tmp_path / "out")
        assert cli.main(["kernel-check", "--config", cfg]) == 0
        text = (tmp_path / "out" / "kernel_check.csv").read_text(encoding="utf-8")
        assert text.startswith("name,value,bound,passed")
        assert capsys.readouterr().out == ""

    def test_verbose_prints_report(self, tmp_path, capsys):
        cfg = kernel_cfg(tmp_path, tmp_path / "out")
        assert cli.main(["kernel-check", "--config", cfg, "--verbose"]) == 0
        out = capsys.readouterr().out
        assert out == (tmp_path / "out" / "kernel_check.csv").read_text(encoding="utf-8")

    def test_out_override(self, tmp_path):
        cfg = kernel_cfg(tmp_path, tmp_path / "ignored")
        dest = tmp_path / "elsewhere" / "deep"
        assert cli.main(["kernel-check", "--config", cfg, "--out", str(dest)]) == 0
        assert (dest / "kernel_check.csv").exists()
        assert not (tmp_path / "ignored").exists()

    def test_rates_emits_csv_and_svg(self, tmp_path):
        cfg = write_cfg(
            tmp_path,
            "experiment = rates\ns_list = 0.6, 0.8\nn = 129\n"
            f"output_dir = {tmp_path / 'out'}\n",
        )
        assert cli.main(["rates", "--config", cfg]) == 0
        csv_path = tmp_path / "out" / "rates.csv"
        svg_path = tmp_path / "out" / "rates.svg"
        assert csv_path.exists() and svg_path.exists()
        first_csv = strip_seconds(csv_path.read_text(encoding="utf-8"))
        first_svg = svg_path.read_bytes()
        assert cli.main(["rates", "--config", cfg]) == 0
        assert strip_seconds(csv_path.read_text(encoding="utf-8")) == first_csv
        assert svg_path.read_bytes() == first_svg

    def test_solve_writes_solution_table(self, tmp_path):
        cfg = write_cfg(
            tmp_path,
            "experiment = solve\ns_list = 0.5\nn = 65\n"
            f"output_dir = {tmp_path / 'out'}\n",
        )
        assert cli.main(["solve", "--config", cfg]) == 0
        text = (tmp_path / "out" / "solve.csv").read_text(encoding="utf-8")
        assert text.splitlines()[0] == "s,x,u"


class TestConfigFailures:
    def test_subcommand_config_mismatch(self, tmp_path, capsys):
        cfg = kernel_cfg(tmp_path, tmp_path / "out")
        assert cli.main(["rates", "--config", cfg]) == 2
        assert "kernel_check" in capsys.readouterr().err

    def test_unknown_config_key(self, tmp_path, capsys):
        cfg = write_cfg(tmp_path, "experiment = rates\ns_list = 0.6\nfoo = 1\n")
        assert cli.main(["rates", "--config", cfg]) == 2
        assert "foo" in capsys.readouterr().err

    def test_missing_config_file(self, tmp_path, capsys):
        assert cli.main(["rates", "--config", str(tmp_path / "nope.cfg")]) == 2
        assert "error:" in capsys.readouterr().err

    def test_missing_config_flag_is_usage_error(self):
        with pytest.raises(SystemExit) as exc:
            cli.main(["kernel-check"])
        assert exc.value.code == 2

    def test_unknown_subcommand_is_usage_error(self):
        with pytest.raises(SystemExit) as exc:
            cli.main(["frobnicate", "--config", "x"])
        assert exc.value.code == 2


class TestRunnerOutcomes:
    def test_failing_check_suite_returns_one(self, tmp_path, monkeypatch):
        failing = CheckReport(
            rows=(CheckRow(name="bad", value=2.0, bound=1.0, passed=False),)
        )
        monkeypatch.setitem(cli._RUNNERS, "kernel-check", lambda cfg: failing)
        cfg = kernel_cfg(tmp_path, tmp_path / "out")
        assert cli.main(["kernel-check", "--config", cfg]) == 1
        # the report is still written so the failure can be inspected
        text = (tmp_path / "out" / "kernel_check.csv").read_text(encoding="utf-8")
        assert "bad" in text

    def test_numerical_error_returns_one(self, tmp_path, monkeypatch, capsys):
        def boom(cfg):
            raise NumericalError("factorization failed")

        monkeypatch.setitem(cli._RUNNERS, "kernel-check", boom)
        cfg = kernel_cfg(tmp_path, tmp_path / "out")
        assert cli.main(["kernel-check", "--config", cfg]) == 1
        assert "factorization" in capsys.readouterr().err
