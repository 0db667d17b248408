import csv
import io
import json
import math

import pytest

from infobounds import cli
from infobounds.errors import BoundsError


def _run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


class TestParse:
    def test_hamming_flags(self):
        cfg = cli.parse_args(["entropy", "hamming", "--n", "8", "--delta", "2", "--exact"])
        assert cfg.command == "entropy.hamming"
        assert cfg.parameters["n"] == 8 and cfg.parameters["delta"] == 2 and cfg.parameters["exact"] is True

    def test_gauss_mean_routing(self):
        cfg = cli.parse_args(["minimax", "gauss-mean", "--k", "30", "--n", "100"])
        assert cfg.command == "minimax.gauss-mean"
        assert cli.COMMANDS[cfg.command].handler is cli._mm_gauss

    def test_bogus(self, capsys):
        code, _, err = _run(["bogus"], capsys)
        assert code == 2 and "usage error" in err

    def test_unknown_flag(self, capsys):
        assert _run(["entropy", "hamming", "--nn", "3"], capsys)[0] == 2

    def test_seed_precedence(self, monkeypatch, tmp_path):
        monkeypatch.setenv("BOUNDS_SEED", "17")
        assert cli.parse_args(["minimax", "binary"]).seed == 17
        path = tmp_path / "c.json"
        path.write_text(json.dumps({"command": "minimax.binary", "seed": 5}))
        assert cli.parse_args(["--config", str(path)]).seed == 5
        assert cli.parse_args(["--config", str(path), "--seed", "9"]).seed == 9
        monkeypatch.delenv("BOUNDS_SEED")
        assert cli.parse_args(["minimax", "binary"]).seed == 0

    def test_seed_range(self):
        with pytest.raises(cli.UsageError):
            cli.parse_args(["minimax", "binary", "--seed", str(2**64)])


class TestConfig:
    def test_strict_top_level(self, tmp_path, capsys):
        path = tmp_path / "c.json"
        path.write_text(json.dumps({"command": "minimax.binary", "sed": 3}))
        assert _run(["--config", str(path)], capsys)[0] == 2

    def test_strict_parameters(self, tmp_path, capsys):
        path = tmp_path / "c.json"
        path.write_text(json.dumps({"command": "minimax.gauss-mean", "parameters": {"kk": 30}}))
        assert _run(["--config", str(path)], capsys)[0] == 2

    def test_flags_override_config(self, tmp_path):
        path = tmp_path / "c.json"
        path.write_text(json.dumps({"command": "minimax.gauss-mean", "parameters": {"k": 30, "n": 100}}))
        cfg = cli.parse_args(["--config", str(path), "--n", "10"])
        assert cfg.parameters["k"] == 30 and cfg.parameters["n"] == 10


class TestRun:
    def test_gauss_mean(self, capsys):
        code, out, _ = _run(["minimax", "gauss-mean", "--k", "30", "--n", "100"], capsys)
        assert code == 0 and out.endswith("\n")
        rep = json.loads(out)
        assert rep["schema_version"] == "1"
        assert rep["results"]["lower_bound"] == pytest.approx(5.4155e-4, rel=1e-4)
        assert rep["results"]["parameters"]["reference_sample_mean"] == pytest.approx(0.3)
        assert list(rep) == sorted(rep)

    def test_hamming_exact(self, capsys):
        code, out, _ = _run(["entropy", "hamming", "--n", "8", "--delta", "2", "--exact"], capsys)
        res = json.loads(out)["results"]
        assert code == 0
        assert (res["N"], res["M_delta"], res["M_2delta"]) == (12, 20, 4)
        assert res["sandwich"] is True

    def test_domain_error_exit(self, capsys):
        assert _run(["minimax", "gauss-mean", "--k", "2", "--n", "10"], capsys)[0] == 1

    def test_csv(self, tmp_path, capsys):
        path = tmp_path / "out.csv"
        code, _, _ = _run(["entropy", "hamming", "--n", "6", "--delta", "1", "--exact", "--csv", str(path)], capsys)
        assert code == 0
        rows = list(csv.reader(io.StringIO(path.read_text())))
        assert rows[0] == ["path", "value", "units", "base"]
        assert len(rows) > 3

    def test_information_rows_tagged(self):
        rows = cli.csv_rows({"mi": {"value": 0.5, "base": "nats"}, "x": 1})
        assert ("mi", 0.5, "information", "nats") in rows

    def test_determinism(self, tmp_path, capsys):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        argv = ["verify", "minimax", "--suite", "reduction", "--seed", "3"]
        assert _run(argv + ["--json", str(a)], capsys)[0] == 0
        assert _run(argv + ["--json", str(b)], capsys)[0] == 0
        ja, jb = json.loads(a.read_text()), json.loads(b.read_text())
        ja["provenance"].pop("timestamp")
        jb["provenance"].pop("timestamp")
        assert json.dumps(ja, sort_keys=True) == json.dumps(jb, sort_keys=True)

    def test_verify_unknown_suite(self, capsys):
        assert _run(["verify", "minimax", "--suite", "tails"], capsys)[0] == 2


class TestInfo:
    def test_conversion(self):
        q = cli.Info(1.0, "bits").to("nats")
        assert q.value == pytest.approx(math.log(2))
        assert q.to("bits").value == pytest.approx(1.0)

    def test_mismatched_sum(self):
        with pytest.raises(BoundsError):
            cli.Info(1.0, "bits") + cli.Info(1.0, "nats")
        assert (cli.Info(1.0, "bits") + cli.Info(2.0, "bits")).value == 3.0

    def test_plain_non_finite(self):
        assert cli._plain({"a": math.inf, "b": cli.Info(1.0, "bits")}, "nats")["a"] == "inf"
