import json
import os
import subprocess
import sys

import pytest

from unibound.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def write(tmp_path, obj, name="dist.json"):
    p = tmp_path / name
    p.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return str(p)


THREE_POINT = {"type": "discrete", "points": [-1, 0, 1], "probs": ["1/5", "1/2", "3/10"]}


class TestBound:
    def values(self, capsys, *argv):
        code, out, _ = run(capsys, "bound", "--json", *argv)
        assert code == 0
        return {b["source"]: b for b in json.loads(out)}

    def test_unimodal(self, capsys):
        got = self.values(capsys, "--shape", "unimodal", "--mean", "0.1", "--mode", "0", "--r", "1")
        assert got["unimodal-variance"]["value"] == pytest.approx(0.01 / 3, rel=1e-15)
        assert got["unimodal-central-even"]["order"] == 2

    def test_lattice(self, capsys):
        got = self.values(capsys, "--shape", "lattice", "--mean", "0.1", "--mode", "0")
        assert got["lattice-unimodal-variance"]["value"] == pytest.approx(11 / 300, rel=1e-15)

    def test_discrete_window(self, capsys):
        got = self.values(capsys, "--shape", "discrete-window", "--xlo", "0", "--xhi", "1",
                          "--mean", "0.1", "--r", "1")
        assert got["discrete-window-central"]["value"] == pytest.approx(0.09, rel=1e-15)

    def test_monotone_lists_witness(self, capsys):
        got = self.values(capsys, "--shape", "non-increasing", "--a", "0", "--b", "2",
                          "--mean", "0.5", "--r", "3")
        assert got["nonincreasing-variance"]["witness"] == {"alpha": 1 / 3, "beta": 1.0}
        assert "witness" in got["nonincreasing-raw-moment"]
        assert got["jacobson-upper"]["kind"] == "upper"

    def test_which_filters(self, capsys):
        got = self.values(capsys, "--shape", "unimodal", "--mean", "1", "--mode", "0",
                          "--which", "unimodal-variance")
        assert list(got) == ["unimodal-variance"]

    def test_human_output_has_tags(self, capsys):
        code, out, _ = run(capsys, "bound", "--shape", "lattice", "--mean", "0.1", "--mode", "0")
        assert code == 0 and "lattice-unimodal-variance" in out and "0.0366667" in out

    def test_odd_order_negative_regime_skipped(self, capsys):
        code, out, err = run(capsys, "bound", "--shape", "unimodal", "--mean", "0",
                             "--mode", "-1", "--r", "3")
        assert code == 0 and "odd order" in err

    @pytest.mark.parametrize("argv", [
        ["--shape", "unimodal", "--mean", "0.1"],
        ["--shape", "lattice", "--mean", "0.1", "--mode", "0", "--which", "no-such-tag"],
        ["--shape", "non-increasing", "--a", "0", "--b", "1", "--mean", "0.9"],
        ["--shape", "discrete-window", "--xlo", "1", "--xhi", "0", "--mean", "0.5"],
        ["--shape", "unimodal", "--a", "0", "--b", "1", "--mode", "0", "--mean", "0.9"],
    ])
    def test_bad_input_exits_2(self, capsys, argv):
        code, _, err = run(capsys, "bound", *argv)
        assert code == 2 and "error" in err

    def test_precondition_message(self, capsys):
        _, _, err = run(capsys, "bound", "--shape", "non-increasing", "--a", "0", "--b", "1",
                        "--mean", "0.9")
        assert "non-increasing" in err and "[0.0, 0.5]" in err

    def test_unknown_shape_is_usage_error(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["bound", "--shape", "bimodal"])
        assert exc.value.code == 2


class TestAudit:
    def test_three_point(self, capsys, tmp_path):
        code, out, _ = run(capsys, "audit", "--json", write(tmp_path, THREE_POINT))
        rep = json.loads(out)
        assert code == 0 and rep["passed"]
        assert rep["variance"] == 0.49
        bounds = {c["source"]: c.get("bound") for c in rep["checks"] if c["order"] == 2}
        assert bounds["lattice-unimodal-variance"] == pytest.approx(11 / 300, rel=1e-15)
        assert bounds["discrete-window-central"] == pytest.approx(0.09, rel=1e-15)

    def test_human(self, capsys, tmp_path):
        code, out, _ = run(capsys, "audit", write(tmp_path, THREE_POINT))
        assert code == 0 and "variance 0.49" in out and "fail" not in out

    def test_point_mass(self, capsys, tmp_path):
        path = write(tmp_path, {"type": "discrete", "points": [0, 1], "probs": [1, 0]})
        code, out, _ = run(capsys, "audit", "--json", path)
        rep = json.loads(out)
        assert code == 0 and rep["passed"]
        lower = [c["bound"] for c in rep["checks"]
                 if c["status"] != "n/a" and c["kind"] == "lower"]
        assert lower and all(v == 0 for v in lower)

    def test_mass_not_one(self, capsys, tmp_path):
        path = write(tmp_path, {"type": "discrete", "points": [0, 1, 2], "probs": [0.3, 0.3, 0.3]})
        code, _, err = run(capsys, "audit", path)
        assert code == 2 and "error" in err

    @pytest.mark.parametrize("text", ["{not json", "[]", '{"type": "discrete"}',
                                      '{"type": "cdf", "points": [0], "probs": [1]}'])
    def test_malformed(self, capsys, tmp_path, text):
        code, _, _ = run(capsys, "audit", write(tmp_path, text))
        assert code == 2

    def test_missing_file(self, capsys, tmp_path):
        assert run(capsys, "audit", str(tmp_path / "absent.json"))[0] == 2

    def test_distribution_round_trips(self, capsys, tmp_path):
        src = {"type": "piecewise", "breakpoints": [0.0, 0.3, 1.0],
               "heights": [1.5, 0.7857142857142857]}
        path = write(tmp_path, src)
        _, out, _ = run(capsys, "audit", "--json", path)
        echoed = json.loads(out)["distribution"]
        again = write(tmp_path, echoed, "again.json")
        _, out2, _ = run(capsys, "audit", "--json", again)
        assert json.loads(out2)["distribution"] == echoed
        assert echoed["breakpoints"] == src["breakpoints"] and echoed["heights"] == src["heights"]

    def test_violation_exits_1(self, capsys, tmp_path, monkeypatch):
        from unibound import bounds as B
        monkeypatch.setattr(B, "variance_ub_jacobson",
                            lambda a, b: B.BoundResult(0, B.BoundKind.UPPER,
                                                       B.Source.JACOBSON_UPPER, "variance", 2))
        path = write(tmp_path, {"type": "piecewise", "breakpoints": [0, 1], "heights": [1]})
        assert run(capsys, "audit", path)[0] == 1


class TestVerify:
    def test_zero_trials(self, capsys):
        assert run(capsys, "verify", "--trials", "0")[0] == 2

    def test_negative_seed(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["verify", "--seed", "-3"])
        assert exc.value.code == 2

    def test_seed_1_clean_and_repeatable(self, capsys):
        code, first, _ = run(capsys, "verify", "--seed", "1", "--trials", "1000", "--json")
        code2, second, _ = run(capsys, "verify", "--seed", "1", "--trials", "1000", "--json")
        assert code == code2 == 0
        assert first == second
        assert json.loads(first)["violations"] == 0

    def test_human_summary(self, capsys):
        code, out, _ = run(capsys, "verify", "--seed", "2", "--trials", "50")
        assert code == 0 and "total violations: 0" in out

    def test_counterexample_written(self, capsys, tmp_path, monkeypatch):
        from unibound import bounds as B
        monkeypatch.setattr(B, "variance_ub_jacobson",
                            lambda a, b: B.BoundResult(0, B.BoundKind.UPPER,
                                                       B.Source.JACOBSON_UPPER, "variance", 2))
        monkeypatch.setenv("UNIBOUND_THREADS", "1")
        code, _, err = run(capsys, "verify", "--seed", "5", "--trials", "20",
                           "--out", str(tmp_path))
        assert code == 1 and "counterexample" in err
        saved = json.loads((tmp_path / "counterexample-seed5.json").read_text())
        assert saved["type"] == "piecewise"


class TestCompare:
    def test_builtins(self, capsys):
        code, out, _ = run(capsys, "compare", "--trials", "100", "--json")
        s = json.loads(out)
        assert code == 0
        assert s["builtin"]["three-point"]["ratio_exact"] == "27/11"
        assert s["builtin"]["point-mass"]["verdict"] == "tie"

    def test_human(self, capsys):
        code, out, _ = run(capsys, "compare", "--trials", "100", "--seed", "4")
        assert code == 0 and "ratio 27/11" in out and "tie" in out

    def test_reproducible(self, capsys):
        a = run(capsys, "compare", "--trials", "300", "--seed", "8", "--json")[1]
        b = run(capsys, "compare", "--trials", "300", "--seed", "8", "--json")[1]
        assert a == b


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "unibound", "bound", "--shape", "lattice",
                           "--mean", "0.1", "--mode", "0", "--json"],
                          capture_output=True, text=True, env={**os.environ})
    assert proc.returncode == 0
    assert json.loads(proc.stdout)[0]["source"] == "lattice-unimodal-variance"
