import csv
import math

import numpy as np
import pytest

from qubed.cli import main
from qubed.design import NEG_VARIANCE, DesignDomain, utility_profile
from qubed.inference import make_uniform_prior
from qubed.model import LikelihoodModel
from qubed.risk import risk_curve


def read_csv(path):
    with open(path, newline="") as handle:
        rows = list(csv.reader(handle))
    return rows[0], rows[1:]


class TestRiskCurveCommand:
    def test_schema_and_values_round_trip(self, tmp_path):
        out = tmp_path / "rc.csv"
        code = main(["risk-curve", "--strategies", "nyquist-bayes", "--nmax", "2",
                     "--out", str(out)])
        assert code == 0
        header, rows = read_csv(out)
        assert header == ["strategy", "n", "bayes_risk", "model", "notes"]
        assert len(rows) == 2
        curve = risk_curve("nyquist-bayes", make_uniform_prior(1000),
                           LikelihoodModel.ideal(), 2)
        for row, (n, risk) in zip(rows, curve.entries):
            assert row[0] == "nyquist-bayes"
            assert int(row[1]) == n
            assert float(row[2]) == risk
            assert row[3] == "ideal"

    def test_multiple_strategies_in_requested_order(self, tmp_path):
        out = tmp_path / "rc.csv"
        code = main(["risk-curve", "--strategies", "greedy-negvar,nyquist-bayes",
                     "--nmax", "2", "--out", str(out)])
        assert code == 0
        _, rows = read_csv(out)
        assert [r[0] for r in rows] == ["greedy-negvar"] * 2 + ["nyquist-bayes"] * 2

    def test_byte_identical_reruns(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        args = ["risk-curve", "--strategies", "nyquist-bayes,greedy-negvar",
                "--nmax", "3", "--prior-points", "500"]
        assert main(args + ["--out", str(a)]) == 0
        assert main(args + ["--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_capped_strategy_reported_but_others_survive(self, tmp_path, capsys):
        out = tmp_path / "rc.csv"
        code = main(["risk-curve", "--strategies", "global,nyquist-bayes",
                     "--nmax", "8", "--prior-points", "300", "--out", str(out)])
        assert code == 1
        assert "global" in capsys.readouterr().err
        _, rows = read_csv(out)
        assert {r[0] for r in rows} == {"nyquist-bayes"}
        assert len(rows) == 8

    def test_noisy_model_descriptor_in_rows(self, tmp_path):
        out = tmp_path / "rc.csv"
        code = main(["risk-curve", "--model", "noisy", "--visibility", "0.6",
                     "--t2", "40.0", "--strategies", "nyquist-bayes", "--nmax", "1",
                     "--prior-points", "200", "--out", str(out)])
        assert code == 0
        _, rows = read_csv(out)
        assert rows[0][3] == "noisy(visibility=0.6,t2=40.0)"

    def test_unknown_strategy_is_a_parse_error(self, tmp_path):
        code = main(["risk-curve", "--strategies", "fourier", "--out",
                     str(tmp_path / "x.csv")])
        assert code == 2

    def test_missing_out_is_an_error(self):
        assert main(["risk-curve", "--strategies", "nyquist-bayes"]) == 2


class TestUtilityScanCommand:
    def test_schema_and_grid_length(self, tmp_path):
        out = tmp_path / "scan.csv"
        code = main(["utility-scan", "--utility", "negvar", "--prior-points", "400",
                     "--out", str(out)])
        assert code == 0
        header, rows = read_csv(out)
        assert header == ["t", "expected_utility"]
        assert len(rows) == 240
        assert float(rows[0][0]) == 0.0
        assert float(rows[-1][0]) == pytest.approx(12.0 * math.pi, rel=1e-15)

    def test_matches_library_profile(self, tmp_path):
        out = tmp_path / "scan.csv"
        code = main(["utility-scan", "--utility", "negvar", "--prior-points", "400",
                     "--history", "3.5:1,7.0:0", "--out", str(out)])
        assert code == 0
        _, rows = read_csv(out)
        from qubed.inference import bayes_update

        dist = make_uniform_prior(400)
        for t, d in [(3.5, 1), (7.0, 0)]:
            dist = bayes_update(dist, LikelihoodModel.ideal(), t, d)
        expected = utility_profile(dist, LikelihoodModel.ideal(),
                                   DesignDomain().times(), NEG_VARIANCE)
        got = np.array([float(r[1]) for r in rows])
        assert np.array_equal(got, expected)

    def test_infogain_zero_at_time_zero(self, tmp_path):
        out = tmp_path / "scan.csv"
        assert main(["utility-scan", "--utility", "infogain", "--out", str(out)]) == 0
        _, rows = read_csv(out)
        assert abs(float(rows[0][1])) < 1e-9

    def test_negvar_utilities_bounded(self, tmp_path):
        out = tmp_path / "scan.csv"
        assert main(["utility-scan", "--utility", "negvar", "--history", "2.0:1",
                     "--prior-points", "300", "--out", str(out)]) == 0
        _, rows = read_csv(out)
        values = [float(r[1]) for r in rows]
        assert all(-1.0 / 12.0 - 1e-9 <= v <= 0.0 for v in values)

    def test_impossible_history_fails_cleanly(self, tmp_path, capsys):
        # with two grid points every click probability vanishes at t = 4*pi,
        # so demanding outcome 0 there is impossible
        out = tmp_path / "scan.csv"
        code = main(["utility-scan", "--prior-points", "2",
                     "--history", f"{4.0 * math.pi!r}:0", "--out", str(out)])
        assert code == 1
        assert "error" in capsys.readouterr().err

    def test_bad_history_is_a_parse_error(self, tmp_path):
        code = main(["utility-scan", "--history", "nonsense", "--out",
                     str(tmp_path / "x.csv")])
        assert code == 2


class TestSimulateCommand:
    def test_schema_and_determinism(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        args = ["simulate", "--strategies", "greedy-negvar", "--true-omega", "0.5",
                "--nmax", "4", "--seed", "0"]
        assert main(args + ["--out", str(a)]) == 0
        assert main(args + ["--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()
        header, rows = read_csv(a)
        assert header == ["step", "t", "outcome", "posterior_mean", "posterior_variance"]
        assert [int(r[0]) for r in rows] == [1, 2, 3, 4]
        assert all(r[2] in ("0", "1") for r in rows)

    def test_pinned_seed_zero_first_time(self, tmp_path):
        out = tmp_path / "sim.csv"
        assert main(["simulate", "--strategies", "greedy-negvar", "--true-omega", "0.5",
                     "--nmax", "1", "--seed", "0", "--out", str(out)]) == 0
        _, rows = read_csv(out)
        assert float(rows[0][1]) == pytest.approx(3.5702206690710474, rel=1e-9)

    def test_long_adaptive_run_contracts_variance(self, tmp_path):
        out = tmp_path / "sim.csv"
        assert main(["simulate", "--strategies", "greedy-negvar", "--true-omega", "0.5",
                     "--nmax", "12", "--seed", "0", "--out", str(out)]) == 0
        _, rows = read_csv(out)
        assert len(rows) == 12
        assert float(rows[-1][4]) < 1.0 / 12.0

    def test_zero_time_schedule_keeps_prior_mean(self, tmp_path):
        out = tmp_path / "sim.csv"
        assert main(["simulate", "--strategies", "schedule:0,0,0", "--true-omega",
                     "0.5", "--out", str(out)]) == 0
        _, rows = read_csv(out)
        assert len(rows) == 3
        for row in rows:
            assert float(row[3]) == pytest.approx(0.5, abs=1e-12)

    def test_nyquist_strategy_uses_comb_times(self, tmp_path):
        out = tmp_path / "sim.csv"
        assert main(["simulate", "--strategies", "nyquist-bayes", "--true-omega",
                     "0.3", "--nmax", "3", "--out", str(out)]) == 0
        _, rows = read_csv(out)
        times = [float(r[1]) for r in rows]
        assert times == pytest.approx([math.pi, 2 * math.pi, 3 * math.pi], rel=1e-15)

    def test_two_strategies_rejected(self, tmp_path):
        code = main(["simulate", "--strategies", "greedy-negvar,nyquist-bayes",
                     "--true-omega", "0.5", "--out", str(tmp_path / "x.csv")])
        assert code == 2

    def test_omega_outside_support_fails(self, tmp_path, capsys):
        code = main(["simulate", "--strategies", "nyquist-bayes", "--true-omega",
                     "1.5", "--out", str(tmp_path / "x.csv")])
        assert code == 1
        assert "support" in capsys.readouterr().err


class TestConfigFile:
    def test_file_supplies_defaults(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        out = tmp_path / "rc.csv"
        cfg.write_text("model=noisy\nvisibility=0.6\n# comment line\n\n"
                       f"strategies=nyquist-bayes\nnmax=2\nout={out}\n")
        assert main(["risk-curve", "--config", str(cfg)]) == 0
        _, rows = read_csv(out)
        assert len(rows) == 2
        assert rows[0][3].startswith("noisy(visibility=0.6")

    def test_flags_override_file(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        out = tmp_path / "rc.csv"
        cfg.write_text(f"strategies=nyquist-bayes\nnmax=5\nout={out}\n")
        assert main(["risk-curve", "--config", str(cfg), "--nmax", "1"]) == 0
        _, rows = read_csv(out)
        assert len(rows) == 1

    def test_unknown_key_rejected(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("speed=11\n")
        code = main(["risk-curve", "--config", str(cfg), "--strategies",
                     "nyquist-bayes", "--out", str(tmp_path / "x.csv")])
        assert code == 2

    def test_bad_value_rejected(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("strategies=fourier\n")
        code = main(["risk-curve", "--config", str(cfg),
                     "--out", str(tmp_path / "x.csv")])
        assert code == 2

    def test_missing_file_rejected(self, tmp_path):
        code = main(["risk-curve", "--config", str(tmp_path / "absent.cfg"),
                     "--strategies", "nyquist-bayes",
                     "--out", str(tmp_path / "x.csv")])
        assert code == 2

    def test_hyphenated_keys_accepted(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        out = tmp_path / "rc.csv"
        cfg.write_text(f"prior-points=200\nstrategies=nyquist-bayes\nnmax=1\nout={out}\n")
        assert main(["risk-curve", "--config", str(cfg)]) == 0
        assert out.exists()
