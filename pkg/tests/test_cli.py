import json
import math
import subprocess
import sys

import numpy as np
import pytest

from legendre_paths import InvariantError, cli
from legendre_paths.cli import main


def run(argv):
    return main([str(a) for a in argv])


def read_csv(path):
    lines = path.read_text().splitlines()
    return lines[0].split(","), [list(map(float, ln.split(","))) for ln in lines[1:]]


def manifest(out):
    return json.loads((out.parent / (out.name + ".manifest.json")).read_text())


class TestPath:
    @pytest.mark.parametrize("p,sigma", [(991, 1), (997, -1)])
    def test_figure_paths(self, tmp_path, p, sigma):
        out = tmp_path / f"p{p}.csv"
        assert run(["path", "--p", p, "--out", out]) == 0
        header, rows = read_csv(out)
        assert header == ["j", "t", "value"]
        assert len(rows) == p + 1
        v = np.array([r[2] for r in rows])
        assert np.array_equal(v[:p][::-1], sigma * v[:p])
        m = manifest(out)
        assert m["summary"]["symmetry_defect"] == 0
        assert m["config"]["p"] == p and m["version"] and m["chunk_size"] > 0

    def test_not_prime(self, tmp_path, capsys):
        assert run(["path", "--p", 4, "--out", tmp_path / "x.csv"]) == 2
        assert "not an odd prime" in capsys.readouterr().err

    def test_capacity(self, tmp_path):
        assert run(["path", "--p", 2**26 + 15, "--out", tmp_path / "x.csv"]) == 3

    def test_json(self, tmp_path):
        out = tmp_path / "p7.json"
        assert run(["path", "--p", 7, "--out", out, "--format", "json"]) == 0
        data = json.loads(out.read_text())
        assert data["columns"]["j"] == list(range(8))
        assert data["p"] == 7


class TestSample:
    def test_replay_identical(self, tmp_path):
        out = tmp_path / "s.csv"
        args = ["sample", "--seed", 1, "--n-terms", 10**4, "--grid", 10**4, "--fix-sign", -1, "--out", out]
        assert run(args) == 0
        again = tmp_path / "s2.csv"
        assert run(["replay", str(out) + ".manifest.json", "--out", again]) == 0
        assert out.read_bytes() == again.read_bytes()
        side = json.loads((tmp_path / "s.csv.sidecar.json").read_text())
        assert side == {"seed": 1, "N": 10**4, "grid_size": 10**4, "sign_minus_one": -1}
        _, rows = read_csv(out)
        assert rows[0][1] == 0 and abs(rows[-1][1]) <= 1e-9

    def test_plus_endpoints(self, tmp_path):
        out = tmp_path / "s.csv"
        assert run(["sample", "--seed", 1, "--n-terms", 1000, "--grid", 5000, "--fix-sign", 1, "--out", out]) == 0
        _, rows = read_csv(out)
        assert rows[0][1] == 0 and abs(rows[-1][1]) <= 1e-9
        assert rows[-1][0] == 1.0

    def test_float_format(self, tmp_path):
        out = tmp_path / "s.csv"
        run(["sample", "--seed", 3, "--n-terms", 10, "--grid", 31, "--out", out])
        line = out.read_text().splitlines()[4]
        t, v = line.split(",")
        assert t == format(3 / 30, ".17g")
        assert v == format(float(v), ".17g")


class TestMoment:
    def test_theoretical_zero(self, tmp_path):
        out = tmp_path / "m.json"
        assert run(["moment", "theoretical", "--points", "0.5", "--exponents", "1",
                    "--variant", "plus", "--out", out]) == 0
        rec = json.loads(out.read_text())
        assert rec["value"] == 0 and rec["tail_bound"] == 0
        assert rec["request"] == {"points": [0.5], "exponents": [1], "variant": "plus"}

    def test_invalid_point(self, tmp_path):
        assert run(["moment", "theoretical", "--points", "1.5", "--exponents", "1",
                    "--out", tmp_path / "m.json"]) == 2

    def test_gap_sweep_small(self, tmp_path):
        out = tmp_path / "gap.csv"
        assert run(["moment", "gap", "--points", "0.3", "--exponents", "2", "--q", "1000,2000",
                    "--truncation", 10**5, "--out", out]) == 0
        header, rows = read_csv(out)
        assert header == ["Q", "empirical", "theoretical", "tail_bound", "gap"]
        assert [r[0] for r in rows] == [1000, 2000]
        assert all(abs(r[4] - abs(r[1] - r[2])) < 1e-15 for r in rows)

    def test_empirical_json(self, tmp_path):
        out = tmp_path / "e.json"
        assert run(["moment", "empirical", "--points", "0.3", "--exponents", "2", "--q", "500",
                    "--mode", "polya", "--z", "5000", "--format", "json", "--out", out]) == 0
        rec = json.loads(out.read_text())
        assert rec["Q"] == 500 and rec["mode"] == "polya" and rec["value"] > 0

    def test_mc_record(self, tmp_path):
        out = tmp_path / "mc.json"
        assert run(["moment", "mc", "--points", "0.25", "--exponents", "2", "--n-terms", 500,
                    "--trials", 400, "--seed", 9, "--out", out]) == 0
        rec = json.loads(out.read_text())
        assert rec["seed"] == 9 and rec["stderr"] > 0

    def test_missing_flag(self, tmp_path):
        assert run(["moment", "gap", "--points", "0.3", "--exponents", "2",
                    "--out", tmp_path / "g.csv"]) == 2


class TestDist:
    def test_supnorm_count(self, tmp_path):
        out = tmp_path / "sn.csv"
        assert run(["dist", "supnorm", "--q", 1000, "--out", out]) == 0
        header, rows = read_csv(out)
        assert header == ["value"] and len(rows) == 135
        side = json.loads((tmp_path / "sn.csv.sidecar.json").read_text())
        assert side["Q"] == 1000

    def test_ks_self(self, tmp_path):
        a = tmp_path / "a.csv"
        run(["dist", "supnorm", "--source", "model", "--n-terms", 100, "--count", 100,
             "--seed", 5, "--out", a])
        out = tmp_path / "ks.json"
        assert run(["dist", "ks", "--a", a, "--b", a, "--out", out]) == 0
        assert json.loads(out.read_text())["ks"] == 0

    def test_ks_generated(self, tmp_path):
        out = tmp_path / "ks.json"
        assert run(["dist", "ks", "--q", 500, "--n-terms", 200, "--count", 200, "--seed", 1,
                    "--out", out]) == 0
        rec = json.loads(out.read_text())
        assert 0 < rec["ks"] < 1 and rec["sizes"][1] == 200

    def test_increment_trivial_range(self, tmp_path):
        out = tmp_path / "inc.json"
        d = 1 / 2000
        assert run(["dist", "increment", "--q", 1000, "--s", 0.4, "--t", 0.4 + d, "--out", out]) == 0
        rec = json.loads(out.read_text())
        assert rec["value"] <= d**2

    def test_fdd(self, tmp_path):
        out = tmp_path / "f.csv"
        assert run(["dist", "fdd", "--q", 200, "--points", "0,0.3,1", "--out", out]) == 0
        header, rows = read_csv(out)
        assert header == ["t_1", "t_2", "t_3"]
        assert all(r[0] == 0 and r[2] == 0 for r in rows)


def test_invariant_exit_code(tmp_path, monkeypatch):
    def broken(cfg):
        raise InvariantError("forced")

    monkeypatch.setitem(cli.COMMANDS, "path", broken)
    assert run(["path", "--p", 7, "--out", tmp_path / "x.csv"]) == 4


def test_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["sample", "--seed", "1"])
    assert exc.value.code == 2


def test_replay_bad_manifest(tmp_path):
    bad = tmp_path / "m.json"
    bad.write_text(json.dumps({"config": {"subcommand": "path", "bogus": 1}}))
    assert run(["replay", bad]) == 2


def test_module_entry_point(tmp_path):
    out = tmp_path / "p5.csv"
    proc = subprocess.run([sys.executable, "-m", "legendre_paths", "path", "--p", "5", "--out", str(out)],
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert out.read_text().splitlines()[2] == f"1,0.20000000000000001,{format(1 / math.sqrt(5), '.17g')}"


def test_worker_count_does_not_change_output(tmp_path, monkeypatch):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    monkeypatch.setenv("LEGENDRE_THREADS", "1")
    run(["dist", "supnorm", "--q", 3000, "--out", a])
    monkeypatch.setenv("LEGENDRE_THREADS", "2")
    run(["dist", "supnorm", "--q", 3000, "--out", b])
    assert a.read_bytes() == b.read_bytes()
    assert manifest(b)["workers"] == 2
