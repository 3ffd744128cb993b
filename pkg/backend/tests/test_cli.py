"""
Tests for the command-line front end: subcommand output, report files and
exit codes.
"""
import orjson
import pytest

from hetcache import __version__
from hetcache.core.exceptions import DomainError
from hetcache.main import main
from hetcache.schemas.system import SystemConfig
from hetcache.schemas.verification import SuiteResult, VerificationReport


DESK = {"K": 4, "G": 2, "Nc": 4, "Nu": 2, "M": 2}


def desk_scenario(**overrides):
    system = {**DESK, **overrides.pop("system", {})}
    return {"system": system, **overrides}


def run_cli(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestBound:
    def test_no_memory(self, capsys, write_scenario):
        path = write_scenario(desk_scenario(system={"M": 0}))
        code, out, _ = run_cli(capsys, "bound", "--scenario", path)
        assert code == 0
        assert out == "value 4\nbeta_star 0\nconvex true\n"

    def test_desk(self, capsys, write_scenario):
        code, out, _ = run_cli(capsys, "bound", "--scenario", write_scenario(desk_scenario()))
        lines = dict(line.split(" ") for line in out.splitlines())
        assert code == 0
        assert lines["value"].startswith("1.24430")
        assert float(lines["beta_star"]) == pytest.approx(0.454451, abs=1e-4)
        assert lines["convex"] == "true"

    def test_full_memory(self, capsys, write_scenario):
        path = write_scenario(desk_scenario(system={"M": 6}))
        code, out, _ = run_cli(capsys, "bound", "--scenario", path)
        assert code == 0
        assert out.splitlines()[0] == "value 0"

    def test_groups_must_divide_users(self, capsys, write_scenario):
        path = write_scenario(desk_scenario(system={"G": 3}))
        code, out, err = run_cli(capsys, "bound", "--scenario", path)
        assert code == 2
        assert out == ""
        error = orjson.loads(err)
        assert error["error"] == "ConfigurationError"
        assert "G must divide K" in error["context"]["violations"]

    def test_service_errors_map_to_exit_codes(self, capsys, write_scenario, mocker):
        mocker.patch(
            "hetcache.api.endpoints.bound.theorem1_bound",
            side_effect=DomainError("empty search interval"),
        )
        code, _, err = run_cli(capsys, "bound", "--scenario", write_scenario(desk_scenario()))
        assert code == 2
        assert "empty search interval" in err


class TestAchievable:
    def test_desk(self, capsys, write_scenario):
        code, out, _ = run_cli(capsys, "achievable", "--scenario", write_scenario(desk_scenario()))
        lines = dict(line.split(" ") for line in out.splitlines())
        assert code == 0
        assert list(lines) == ["value", "beta", "alpha_star"]
        assert float(lines["value"]) <= 2.25
        assert 0 <= int(lines["alpha_star"]) <= 2


class TestSweep:
    def test_three_point_grid(self, capsys, write_scenario):
        path = write_scenario(desk_scenario(grid=[0, 2, 6]))
        code, out, _ = run_cli(capsys, "sweep", "--scenario", path)
        lines = out.splitlines()
        assert code == 0
        assert lines[0] == "M,beta_ach,achievable,beta_conv,converse,gap"
        assert len(lines) == 4
        gaps = [float(line.split(",")[-1]) for line in lines[1:]]
        assert gaps[0] == gaps[2] == 1
        assert gaps[1] <= 1.81

    def test_empty_grid(self, capsys, write_scenario):
        code, out, _ = run_cli(capsys, "sweep", "--scenario", write_scenario(desk_scenario(grid=[])))
        assert code == 0
        assert out == "M,beta_ach,achievable,beta_conv,converse,gap\n"

    def test_point_count_grid(self, capsys, write_scenario, tmp_path):
        target = tmp_path / "sweep.csv"
        path = write_scenario(desk_scenario(grid=5))
        code, out, _ = run_cli(capsys, "sweep", "--scenario", path, "--out", str(target))
        assert code == 0
        assert out == ""
        assert len(target.read_text().splitlines()) == 6

    def test_memory_outside_range(self, capsys, write_scenario):
        path = write_scenario(desk_scenario(system={"M": 7}))
        code, _, err = run_cli(capsys, "sweep", "--scenario", path)
        assert code == 2
        assert "M must lie in [0, N_c + N_u]" in err

    def test_unwritable_output(self, capsys, write_scenario, tmp_path):
        path = write_scenario(desk_scenario(grid=[0]))
        target = tmp_path / "missing" / "sweep.csv"
        code, _, err = run_cli(capsys, "sweep", "--scenario", path, "--out", str(target))
        assert code == 3
        assert "OutputError" in err


class TestVerify:
    def test_desk_passes(self, capsys, write_scenario, tmp_path):
        target = tmp_path / "report.json"
        path = write_scenario(desk_scenario(beta=0.5))
        code, out, _ = run_cli(capsys, "verify", "--scenario", path, "--out", str(target))
        report = orjson.loads(out)
        assert code == 0
        assert report["passed"] is True
        assert report["beta"] == 0.5
        assert orjson.loads(target.read_bytes()) == report

    def test_failed_suite_exits_one(self, capsys, write_scenario, mocker):
        failing = VerificationReport(
            config=SystemConfig(**DESK),
            beta=0.5,
            seeds=[0],
            suites=[SuiteResult(name="placement", passed=False, detail="partition violated")],
        )
        mocker.patch("hetcache.api.endpoints.verify.run_verification", return_value=failing)
        path = write_scenario(desk_scenario(beta=0.5))
        code, out, err = run_cli(capsys, "verify", "--scenario", path)
        assert code == 1
        assert orjson.loads(out)["passed"] is False
        assert "VerificationFailure" in err

    def test_non_integer_split_is_rejected(self, capsys, write_scenario):
        path = write_scenario(desk_scenario())
        code, _, err = run_cli(capsys, "verify", "--scenario", path, "--beta", "0.3")
        assert code == 2
        assert "DomainError" in err

    def test_default_beta_moves_to_integer_split(self, capsys, write_scenario):
        code, out, _ = run_cli(capsys, "verify", "--scenario", write_scenario(desk_scenario()))
        report = orjson.loads(out)
        assert code == 0
        assert report["beta"] == 0.5
        assert report["passed"] is True

    def test_default_beta_without_integer_split(self, capsys, write_scenario):
        path = write_scenario(desk_scenario(system={"M": 1.3}))
        code, out, err = run_cli(capsys, "verify", "--scenario", path)
        assert code == 2
        assert out == ""
        error = orjson.loads(err)
        assert error["error"] == "DomainError"
        assert "--beta" in error["detail"]


class TestSimulate:
    def test_single_group(self, capsys, write_scenario, tmp_path):
        target = tmp_path / "transmission.json"
        path = write_scenario({"system": {"K": 2, "G": 1, "Nc": 2, "Nu": 2, "M": 2}, "beta": 0.5})
        code, out, _ = run_cli(
            capsys, "simulate", "--scenario", path, "--seed", "5", "--out", str(target)
        )
        summary = orjson.loads(out)
        assert code == 0
        assert summary["seed"] == 5
        assert summary["worst_load"] == "1/1"
        assert summary["decoded"] is True
        assert summary["demands_checked"] == 12
        records = orjson.loads(target.read_bytes())
        assert len(records) == summary["messages"]

    def test_output_is_reproducible(self, capsys, write_scenario):
        path = write_scenario(desk_scenario(beta=0.5, seed=3))
        first = run_cli(capsys, "simulate", "--scenario", path)
        second = run_cli(capsys, "simulate", "--scenario", path)
        assert first[0] == second[0] == 0
        assert first[1] == second[1]


class TestArguments:
    def test_missing_scenario_file(self, capsys, tmp_path):
        code, _, err = run_cli(capsys, "bound", "--scenario", str(tmp_path / "absent.json"))
        assert code == 2
        assert "cannot read scenario" in err

    def test_malformed_scenario(self, capsys, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        code, _, _ = run_cli(capsys, "bound", "--scenario", str(path))
        assert code == 2

    def test_seed_range(self, capsys, write_scenario):
        with pytest.raises(SystemExit) as exc_info:
            main(["simulate", "--scenario", write_scenario(desk_scenario()), "--seed", str(2**64)])
        assert exc_info.value.code == 2

    def test_version(self, capsys):
        with pytest.raises(SystemExit) as exc_info:
            main(["--version"])
        assert exc_info.value.code == 0
        assert __version__ in capsys.readouterr().out
