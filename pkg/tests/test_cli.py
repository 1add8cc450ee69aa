import io
import math

import numpy as np
import pytest

from wrightml.cli import EXIT_FAILS, EXIT_NUMERIC, EXIT_OK, EXIT_USAGE, run
from wrightml.critical import solve_alpha_star
from wrightml.reports import ScanReport, Verdict


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def keyvals(text):
    pairs = (line.split(" = ", 1) for line in text.splitlines() if " = " in line)
    return {k.strip(): v.strip() for k, v in pairs}


class TestBasics:
    def test_critical_alpha(self):
        code, out, _ = call("critical-alpha")
        assert code == EXIT_OK
        assert out.startswith("alpha_star = 0.771667")
        assert float(keyvals(out)["alpha_star"]) == solve_alpha_star().alpha_star

    def test_critical_alpha_beta(self):
        code, out, _ = call("critical-alpha", "--beta", "0.5")
        assert code == EXIT_OK
        assert float(keyvals(out)["alpha_star"]) == pytest.approx(0.79510392731729826539, abs=1e-12)

    def test_seventeen_digits(self):
        _, out, _ = call("eval-ml", "--alpha", "0.5", "--x=-1")
        text = keyvals(out)["value"]
        assert len(text.replace("0.", "", 1)) == 17
        assert float(text) == pytest.approx(0.42758357615580700441, rel=1e-14)

    def test_eval_ml_csv(self):
        code, out, _ = call("eval-ml", "--alpha", "1", "--x", "0,1", "--format", "csv")
        lines = out.splitlines()
        assert code == EXIT_OK and lines[0] == "x,value,abs_err,method"
        assert float(lines[2].split(",")[1]) == pytest.approx(math.e, rel=1e-15)

    def test_eval_wright(self):
        _, out, _ = call("eval-wright", "--rho", "1", "--beta", "1", "--z=-0.25")
        assert float(keyvals(out)["value"]) == pytest.approx(0.7651976865579666, rel=1e-14)

    def test_laplace_flag(self):
        _, out, _ = call("eval-wright", "--rho", "-0.5", "--beta", "0.5", "--t", "1", "--format", "csv")
        t, lhs, rhs = map(float, out.splitlines()[1].split(","))
        assert lhs == pytest.approx(rhs, rel=1e-9)

    def test_density_and_moments(self):
        _, out, _ = call("density", "--alpha", "0.5", "--beta", "0.5", "--x", "0", "--s", "1", "--format", "csv")
        lines = out.splitlines()
        assert lines[0] == "x,density,abs_err" and lines[2] == "s,moment"
        assert float(lines[1].split(",")[1]) == pytest.approx(1 / math.sqrt(math.pi), rel=1e-15)
        assert float(lines[3].split(",")[1]) == pytest.approx(2 / math.sqrt(math.pi), rel=1e-15)

    def test_cdf(self):
        _, out, _ = call("cdf", "--alpha", "0.5", "--beta", "0.5", "--x", "2")
        assert float(keyvals(out)["cdf"]) == pytest.approx(math.erf(1), abs=1e-13)

    def test_zeros(self):
        code, out, _ = call("zeros", "--rho", "-0.6", "--beta", "-0.5")
        kv = keyvals(out)
        assert code == EXIT_OK and kv["count"] == "1"
        assert float(kv["zero[0]"]) == pytest.approx(1.2817650250379433, rel=1e-8)

    def test_entropy_probs(self, tmp_path):
        path = tmp_path / "p.csv"
        path.write_text("p\n0.25\n0.25\n0.25\n0.25\n")
        _, out, _ = call("entropy", "--alpha", "1", "--probs", str(path))
        assert float(keyvals(out)["entropy"]) == pytest.approx(math.log(4), rel=1e-14)

    def test_entropy_points(self):
        _, out, _ = call("entropy", "--alpha", "1", "--x", "0.5", "--format", "csv")
        x, g, lg = map(float, out.splitlines()[1].split(","))
        assert g == pytest.approx(0.5 * math.log(2), rel=1e-14)
        assert lg == pytest.approx(-math.log(2), rel=1e-14)


class TestRhoCurve:
    def test_file_output(self, tmp_path):
        path = tmp_path / "rho.csv"
        code, out, _ = call("rho-curve", "--n", "1000", "--out", str(path))
        assert code == EXIT_OK and out == ""
        text = path.read_text()
        assert text.splitlines()[0] == "alpha,rho" and "\r" not in text
        data = np.loadtxt(path, delimiter=",", skiprows=1)
        assert data.shape == (1000, 2)
        flips = np.nonzero(np.diff(np.sign(data[:, 1])))[0]
        assert len(flips) == 1
        assert data[flips[0], 0] < solve_alpha_star().alpha_star < data[flips[0] + 1, 0]


class TestSample:
    def test_byte_identical(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        for path in (a, b):
            assert call("sample", "--alpha", "0.6", "--beta", "0.2", "--n", "200", "--seed", "9",
                        "--out", str(path))[0] == EXIT_OK
        assert a.read_bytes() == b.read_bytes()
        assert a.read_text().splitlines()[0] == "x"

    def test_seed_matters(self):
        one = call("sample", "--alpha", "0.7", "--beta", "0.3", "--n", "10", "--seed", "1")[1]
        two = call("sample", "--alpha", "0.7", "--beta", "0.3", "--n", "10", "--seed", "2")[1]
        assert one != two


class TestCheck:
    @pytest.mark.parametrize("argv, verdict, code", [
        (["--kind", "logconcavity", "--alpha", "0.75", "--beta", "0.25"], Verdict.HOLDS, EXIT_OK),
        (["--kind", "logconcavity", "--alpha", "0.8", "--beta", "0.2"], Verdict.FAILS, EXIT_FAILS),
        (["--kind", "turan", "--alpha", "0.5", "--beta", "1"], Verdict.HOLDS, EXIT_OK),
        (["--kind", "msu", "--alpha", "0.6", "--beta", "0"], Verdict.FAILS, EXIT_FAILS),
        (["--kind", "inflections", "--alpha", "0.75", "--beta", "0.2"], Verdict.HOLDS, EXIT_OK),
        (["--kind", "recip-convexity", "--alpha", "0.9", "--beta", "1", "--halfline", "negative"],
         Verdict.FAILS, EXIT_FAILS),
        (["--kind", "recip-convexity", "--alpha", "2", "--beta", "0.5", "--halfline", "sequence"],
         Verdict.HOLDS, EXIT_OK),
        (["--kind", "entropy-concavity", "--alpha", "0.7", "--beta", "0.3"], Verdict.HOLDS, EXIT_OK),
    ])
    def test_round_trip(self, argv, verdict, code):
        got, out, _ = call("check", *argv, "--format", "csv")
        assert got == code
        rep = ScanReport.from_csv(out)
        assert rep.verdict is verdict
        assert rep.to_csv() == out

    def test_text_format(self):
        code, out, _ = call("check", "--kind", "turan", "--alpha", "0.5", "--beta", "1")
        assert code == EXIT_OK and keyvals(out)["verdict"] == "holds"

    def test_explicit_grid(self):
        _, out, _ = call("check", "--kind", "logconcavity", "--alpha", "0.5", "--beta", "0.5",
                         "--grid-min", "0", "--grid-max", "5", "--grid-n", "50", "--format", "csv")
        rep = ScanReport.from_csv(out)
        assert (rep.grid_spec.xmin, rep.grid_spec.xmax, rep.grid_spec.n) == (0.0, 5.0, 50)


class TestScan:
    def test_per_point_csv(self):
        code, out, _ = call("scan", "--kind", "logconcavity", "--alpha", "0.8", "--beta", "0.2",
                            "--grid-min", "0", "--grid-max", "2", "--grid-n", "21")
        lines = out.splitlines()
        assert code == EXIT_OK and lines[0] == "x,statistic,abs_err" and len(lines) == 22
        assert float(lines[1].split(",")[1]) < 0

    def test_entropy_scan(self):
        code, out, _ = call("scan", "--kind", "entropy-concavity", "--alpha", "0.5", "--beta", "0.5", "--grid-n", "100")
        assert code == EXIT_OK and out.splitlines()[0] == "z,D,abs_err" and len(out.splitlines()) == 101


class TestConfig:
    def test_defaults_from_file(self, tmp_path):
        cfg = tmp_path / "w.ini"
        cfg.write_text("[wrightml]\nformat = csv\nseed = 4\nn = 5\n")
        _, via_cfg, _ = call("--config", str(cfg), "sample", "--alpha", "0.7", "--beta", "0.3")
        _, direct, _ = call("sample", "--alpha", "0.7", "--beta", "0.3", "--seed", "4", "--n", "5")
        assert via_cfg == direct and len(via_cfg.splitlines()) == 6

    def test_flags_override(self, tmp_path):
        cfg = tmp_path / "w.ini"
        cfg.write_text("[wrightml]\nformat = csv\n")
        _, out, _ = call("--config", str(cfg), "critical-alpha", "--format", "text")
        assert out.startswith("alpha_star = ")

    @pytest.mark.parametrize("body", ["[wrightml]\nbogus = 1\n", "[wrightml]\ngrid_n = -3\n", "[wrightml]\nformat = xml\n"])
    def test_bad_config(self, tmp_path, body):
        cfg = tmp_path / "w.ini"
        cfg.write_text(body)
        assert call("--config", str(cfg), "critical-alpha")[0] == EXIT_USAGE

    def test_missing_config(self, tmp_path):
        assert call("--config", str(tmp_path / "nope.ini"), "critical-alpha")[0] == EXIT_USAGE


class TestErrors:
    @pytest.mark.parametrize("argv", [
        [],
        ["frobnicate"],
        ["critical-alpha", "--bogus"],
        ["eval-ml", "--alpha", "abc", "--x", "1"],
        ["eval-ml", "--alpha", "nan", "--x", "1"],
        ["rho-curve", "--n", "0"],
        ["eval-ml", "--x", "1"],
        ["density", "--alpha", "1.5", "--beta", "0", "--x", "1"],
        ["eval-wright", "--rho", "-1.5", "--beta", "0", "--z", "1"],
        ["sample", "--alpha", "0.5", "--beta", "0.5", "--seed", "-1"],
        ["check", "--kind", "inflections", "--alpha", "0.3", "--beta", "0.1"],
    ])
    def test_usage(self, argv):
        assert call(*argv)[0] == EXIT_USAGE

    def test_entropy_at_zero(self):
        code, out, _ = call("entropy", "--alpha", "0.5", "--x", "0")
        kv = keyvals(out)
        assert code == EXIT_OK and float(kv["g"]) == 0.0 and kv["log"] == "-inf"

    def test_numeric_error(self):
        # the sign of phi cannot be certified this far into the underflow region
        code, _, err = call("zeros", "--rho", "-0.6", "--beta", "-0.5", "--grid-max", "1e6")
        assert code == EXIT_NUMERIC and "numerical error" in err
