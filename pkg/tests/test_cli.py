import json

import pytest
from click.testing import CliRunner

from flmarket.cli import main

VALID_DOC = {
    "version": 1,
    "growth_rate": 0.1,
    "firms": [
        {"name": "alpha", "share": 0.6, "loyalty": 0.8, "leave_rate": 0.02},
        {"name": "beta", "share": 0.4, "loyalty": 0.8, "leave_rate": 0.02},
    ],
}

NOT_VIABLE_DOC = {
    "version": 1,
    "growth_rate": 0.0,
    "firms": [
        {"name": "big", "share": 0.7, "loyalty": 0.1, "leave_rate": 0.0},
        {"name": "small", "share": 0.3, "loyalty": 0.1, "leave_rate": 0.0},
    ],
}


@pytest.fixture
def runner():
    return CliRunner()


def write_doc(tmp_path, doc, name="scenario.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


class TestAnalyze:
    def test_viable_scenario_exits_zero(self, runner, tmp_path):
        path = write_doc(tmp_path, VALID_DOC)
        result = runner.invoke(main, ["analyze", "--scenario", path])
        assert result.exit_code == 0
        assert "viable: True" in result.output
        assert "kappa" in result.output

    def test_json_format_matches_library_values(self, runner, tmp_path):
        path = write_doc(tmp_path, VALID_DOC)
        result = runner.invoke(
            main, ["analyze", "--scenario", path, "--format", "json"]
        )
        assert result.exit_code == 0
        doc = json.loads(result.output)
        assert doc["kappa"] == pytest.approx(0.385714, abs=1e-6)
        assert doc["q_hat_min"] == pytest.approx(
            [0.407143, 0.207143], abs=1e-6
        )
        assert doc["viable"] is True

    def test_stable_profile_exits_zero(self, runner, tmp_path):
        path = write_doc(tmp_path, VALID_DOC)
        result = runner.invoke(
            main, ["analyze", "--scenario", path, "--q", "0.5,0.5"]
        )
        assert result.exit_code == 0
        assert "stable: True" in result.output

    def test_unstable_profile_exits_two(self, runner, tmp_path):
        path = write_doc(tmp_path, VALID_DOC)
        result = runner.invoke(
            main,
            ["analyze", "--scenario", path, "--q", "0.5,0.5", "--delta", "0.02"],
        )
        assert result.exit_code == 2
        assert "stable: False" in result.output

    def test_not_viable_exits_two(self, runner, tmp_path):
        path = write_doc(tmp_path, NOT_VIABLE_DOC)
        result = runner.invoke(
            main, ["analyze", "--scenario", path, "--delta", "-0.2"]
        )
        assert result.exit_code == 2
        assert "viable: False" in result.output

    def test_missing_file_exits_one_with_diagnostic(self, runner, tmp_path):
        result = runner.invoke(
            main, ["analyze", "--scenario", str(tmp_path / "nope.json")]
        )
        assert result.exit_code == 1
        assert "not found" in result.stderr

    def test_malformed_json_exits_one(self, runner, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{oops")
        result = runner.invoke(main, ["analyze", "--scenario", str(path)])
        assert result.exit_code == 1
        assert "cannot parse scenario" in result.stderr

    def test_unknown_field_named_in_diagnostic(self, runner, tmp_path):
        path = write_doc(tmp_path, dict(VALID_DOC, bogus=1))
        result = runner.invoke(main, ["analyze", "--scenario", str(path)])
        assert result.exit_code == 1
        assert "bogus" in result.stderr

    def test_invalid_shares_exits_one(self, runner, tmp_path):
        doc = json.loads(json.dumps(VALID_DOC))
        doc["firms"][0]["share"] = 0.5
        path = write_doc(tmp_path, doc)
        result = runner.invoke(main, ["analyze", "--scenario", path])
        assert result.exit_code == 1
        assert "sum" in result.stderr

    def test_bad_q_vector_exits_one(self, runner, tmp_path):
        path = write_doc(tmp_path, VALID_DOC)
        result = runner.invoke(
            main, ["analyze", "--scenario", path, "--q", "0.5"]
        )
        assert result.exit_code == 1
        assert "2 firms" in result.stderr

    def test_frozen_market_reported(self, runner, tmp_path):
        doc = {
            "version": 1,
            "growth_rate": 0.0,
            "firms": [
                {"name": "a", "share": 0.6, "loyalty": 1.0, "leave_rate": 0.0},
                {"name": "b", "share": 0.4, "loyalty": 1.0, "leave_rate": 0.0},
            ],
        }
        path = write_doc(tmp_path, doc)
        result = runner.invoke(main, ["analyze", "--scenario", path])
        assert result.exit_code == 0
        assert "frozen market" in result.output


class TestSweepCommands:
    def test_qmin_writes_csv(self, runner, tmp_path):
        result = runner.invoke(main, ["sweep-qmin", "--out", str(tmp_path)])
        assert result.exit_code == 0
        text = (tmp_path / "sweep_qmin.csv").read_text()
        assert text.splitlines()[0] == "theta,ms,r,q_hat_min,q_min"
        assert len(text.splitlines()) == 1 + 2 * 7 * 6

    def test_kappa_writes_csv(self, runner, tmp_path):
        result = runner.invoke(main, ["sweep-kappa", "--out", str(tmp_path)])
        assert result.exit_code == 0
        text = (tmp_path / "sweep_kappa.csv").read_text()
        assert text.splitlines()[0] == (
            "theta,n_prime,ms_sensitive,r,kappa,kappa_check"
        )
        assert len(text.splitlines()) > 1

    def test_qmin_stdout_matches_file(self, runner, tmp_path):
        to_stdout = runner.invoke(main, ["sweep-qmin"])
        runner.invoke(main, ["sweep-qmin", "--out", str(tmp_path)])
        assert to_stdout.output == (tmp_path / "sweep_qmin.csv").read_text()

    def test_json_format(self, runner):
        result = runner.invoke(main, ["sweep-qmin", "--format", "json"])
        assert result.exit_code == 0
        rows = json.loads(result.output)
        assert set(rows[0]) == {"theta", "ms", "r", "q_hat_min", "q_min"}

    def test_bad_delta_exits_one(self, runner):
        result = runner.invoke(main, ["sweep-qmin", "--delta", "2.0"])
        assert result.exit_code == 1


class TestGameVerify:
    def game_doc(self, peer_gain):
        return {
            "scenario": VALID_DOC,
            "dataset_sizes": [100, 100],
            "curves": [
                {"scale": 1.0, "decay": 0.5},
                {"scale": 1.0, "decay": 0.5},
            ],
            "exchange": {"self_gain": 1.0, "peer_gain": peer_gain},
            "grid_points": 5,
        }

    def test_holds_exits_zero(self, runner, tmp_path):
        path = write_doc(tmp_path, self.game_doc(0.0), "game.json")
        result = runner.invoke(main, ["game-verify", "--game", path])
        assert result.exit_code == 0
        assert "holds" in result.output

    def test_counterexample_exits_two(self, runner, tmp_path):
        path = write_doc(tmp_path, self.game_doc(0.5), "game.json")
        result = runner.invoke(main, ["game-verify", "--game", path])
        assert result.exit_code == 2
        assert "counterexample" in result.output

    def test_missing_key_exits_one(self, runner, tmp_path):
        doc = self.game_doc(0.0)
        del doc["dataset_sizes"]
        path = write_doc(tmp_path, doc, "game.json")
        result = runner.invoke(main, ["game-verify", "--game", path])
        assert result.exit_code == 1
        assert "malformed game spec" in result.stderr

    def test_missing_file_exits_one(self, runner, tmp_path):
        result = runner.invoke(
            main, ["game-verify", "--game", str(tmp_path / "absent.json")]
        )
        assert result.exit_code == 1
