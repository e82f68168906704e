import json
import math
import shutil
import subprocess

import numpy as np
import pytest

from hartley_conv.cli import main
from hartley_conv.grid import Grid, SampledFunction


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


@pytest.fixture
def out_dir(tmp_path, monkeypatch):
    monkeypatch.delenv("HARTLEY_CONV_OUT", raising=False)
    return tmp_path


class TestTransform:
    def test_lorentzian(self, capsys, out_dir):
        code, d = run(capsys, "--out", str(out_dir), "transform",
                      "--fn", "exp_abs:a=1.2533,c=1", "--kind", "H1")
        assert code == 0 and d["passed"]
        f = SampledFunction.from_csv(out_dir / "transform_H1.csv", Grid(20.0, 4096).frequencies)
        y = f.nodes
        win = np.abs(y) <= 5
        expected = 1.2533 / math.sqrt(math.pi / 2) / (1 + y[win] ** 2)
        assert np.abs(f.values[win] - expected).max() <= 1e-3

    def test_zero(self, capsys, out_dir):
        code, d = run(capsys, "transform", "--fn", "zero", "--kind", "F", "--out", str(out_dir),
                      "--points", "256")
        assert code == 0
        f = SampledFunction.from_csv(out_dir / "transform_F.csv", Grid(20.0, 256).frequencies)
        assert np.all(f.values == 0)

    def test_gauss_matches_direct(self, capsys, out_dir):
        code, d = run(capsys, "transform", "--fn", "gauss:s=1", "--kind", "H2",
                      "--out", str(out_dir), "--points", "1024")
        assert code == 0
        assert d["checks"]["direct_error"] <= 1e-12

    def test_bad_spec(self, capsys, out_dir):
        code = main(["transform", "--fn", "nope", "--kind", "H1", "--out", str(out_dir)])
        assert code == 2
        assert "unknown function" in capsys.readouterr().err

    def test_bad_grid(self, capsys, out_dir):
        assert main(["--points", "7", "transform", "--fn", "zero", "--kind", "H1",
                     "--out", str(out_dir)]) == 2

    def test_env_overrides_out(self, capsys, tmp_path, monkeypatch):
        env_dir = tmp_path / "env"
        monkeypatch.setenv("HARTLEY_CONV_OUT", str(env_dir))
        run(capsys, "transform", "--fn", "zero", "--kind", "H1", "--points", "64",
            "--out", str(tmp_path / "flag"))
        assert (env_dir / "transform_H1.csv").exists()
        assert not (tmp_path / "flag").exists()


class TestConvolve:
    def test_compare(self, capsys, out_dir):
        code, d = run(capsys, "convolve", "--f", "gaussian:mu=1", "--g", "exp_abs:c=2",
                      "--kind", "HF", "--compare", "--out", str(out_dir))
        assert code == 0
        assert d["engine_disagreement"] <= 1e-6
        assert (out_dir / "convolve_HF.csv").exists()

    def test_bad_kind(self, capsys, out_dir):
        assert main(["convolve", "--f", "zero", "--g", "zero", "--kind", "XX",
                     "--out", str(out_dir)]) == 2


class TestVerify:
    def test_ring(self, capsys, out_dir):
        code, d = run(capsys, "verify", "--suite", "ring", "--trials", "1", "--out", str(out_dir))
        assert code == 0
        assert d["ring"]["noncommutativity"]["found"]
        assert d["ring"]["noncommutativity"]["relative_gap"] > 0.1
        assert d["results"]["SUBMULT_HF"]["violations"] == 0
        assert d["ring"]["titchmarsh_trivial"]

    def test_young_small(self, capsys, out_dir):
        code, d = run(capsys, "--points", "1024", "verify", "--suite", "young", "--trials", "5",
                      "--out", str(out_dir))
        assert code == 0
        lines = (out_dir / "verify_young.jsonl").read_text().splitlines()
        assert len(lines) == 7 * 5
        assert all(json.loads(line)["satisfied"] for line in lines)

    def test_zero_trials(self, capsys, out_dir):
        assert main(["verify", "--suite", "young", "--trials", "0", "--out", str(out_dir)]) == 2

    def test_deterministic(self, capsys, out_dir):
        args = ["--points", "512", "verify", "--suite", "saitoh", "--trials", "3",
                "--out", str(out_dir)]
        _, a = run(capsys, *args)
        first = (out_dir / "verify_saitoh.jsonl").read_bytes()
        _, b = run(capsys, *args)
        assert a == b
        assert (out_dir / "verify_saitoh.jsonl").read_bytes() == first


class TestExample:
    @pytest.mark.parametrize("which", [1, 2, 3])
    def test_examples_pass(self, capsys, out_dir, which):
        code, d = run(capsys, "example", str(which), "--out", str(out_dir))
        assert code == 0 and d["passed"]
        assert json.loads((out_dir / f"example{which}.json").read_text()) == d
        assert (out_dir / f"example{which}_solution.csv").exists()

    def test_example_two_reports_saitoh_at_two(self, capsys, out_dir):
        _, d = run(capsys, "example", "2", "--out", str(out_dir))
        (s2, _) = d["checks"]["saitoh"]
        assert s2["exponents"]["p"] == 2.0
        assert s2["closed_form_rhs"] == pytest.approx(
            math.sqrt(2) * (2 * math.sqrt(2 * math.pi) / 6) ** 0.5)
        assert s2["lhs"] == pytest.approx(s2["solution_norm"], rel=1e-4)

    def test_failed_check_exit_code(self, capsys, out_dir):
        # a coarse grid cannot meet a tight tolerance
        code, d = run(capsys, "--points", "64", "--tol", "1e-9", "example", "1",
                      "--out", str(out_dir))
        assert code == 1 and not d["passed"]
        assert (out_dir / "example1.json").exists()

    def test_bad_choice(self, capsys, out_dir):
        assert main(["example", "4", "--out", str(out_dir)]) == 2


class TestBench:
    def test_small_sizes(self, capsys, out_dir):
        code, d = run(capsys, "bench", "--sizes", "256,512", "--kinds", "HF,H2H2",
                      "--out", str(out_dir))
        assert code == 0
        assert len(d["results"]) == 4
        assert all(r["engine_disagreement"] <= 1e-3 for r in d["results"])
        assert set(d["timing"][0]) == {"kind", "N", "direct_s", "spectral_s", "speedup"}

    def test_results_deterministic_without_timing(self, capsys, out_dir):
        _, a = run(capsys, "bench", "--sizes", "256", "--out", str(out_dir))
        _, b = run(capsys, "bench", "--sizes", "256", "--out", str(out_dir))
        a.pop("timing"), b.pop("timing")
        assert a == b

    @pytest.mark.parametrize("sizes", ["", "300", "4"])
    def test_bad_sizes(self, capsys, out_dir, sizes):
        assert main(["bench", "--sizes", sizes, "--out", str(out_dir)]) == 2


@pytest.mark.skipif(shutil.which("hartley-conv") is None, reason="console script not installed")
def test_console_script(tmp_path):
    proc = subprocess.run(["hartley-conv", "--out", str(tmp_path), "--points", "128",
                           "transform", "--fn", "gaussian", "--kind", "H1"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0, proc.stderr
    assert json.loads(proc.stdout)["passed"]
