import json

import pytest

from twinsieve import __version__
from twinsieve.cli import main

from reference_lists import C5, REMNANTS_61_BELOW_748


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, _ = run_cli(capsys, *argv)
    assert code == 0
    return json.loads(out)


class TestEnvelope:
    def test_classify_envelope(self, capsys):
        env = run_json(capsys, "classify", "28")
        assert env["command"] == "classify"
        assert env["engine_version"] == __version__
        assert env["results"]["verdict"] == "non_rank"
        assert env["results"]["parent"] == "13"
        assert env["results"]["m"] == "28"

    def test_integers_are_decimal_strings(self, capsys):
        env = run_json(capsys, "counts", "--level", "89")
        # The period at level 89 exceeds 2**53; a float round-trip would corrupt it.
        assert isinstance(env["results"]["L"], str)
        assert int(env["results"]["L"]) % 89 == 0

    def test_rationals_are_fraction_strings(self, capsys):
        env = run_json(capsys, "counts", "--level", "7")
        assert env["results"]["Q"] == "4/7"
        assert env["results"]["q"] == "6/35"

    def test_byte_identical_reruns(self, capsys):
        _, first, _ = run_cli(capsys, "legendre", "--level", "7")
        _, second, _ = run_cli(capsys, "legendre", "--level", "7")
        assert first == second


class TestCommands:
    def test_twins(self, capsys):
        env = run_json(capsys, "twins", "--limit", "18")
        assert env["results"]["ranks"] == ["1", "2", "3", "5", "7", "10", "12", "17", "18"]

    def test_nonranks(self, capsys):
        env = run_json(capsys, "nonranks", "--prime", "5", "--limit", "21")
        values = [t["value"] for t in env["results"]["terms"]]
        assert values == ["4", "6", "9", "11", "14", "16", "19", "21"]

    def test_constants(self, capsys):
        env = run_json(capsys, "constants", "--level", "5")
        assert env["results"]["constants"] == [str(c) for c in C5]
        assert env["results"]["modulus"] == "5"

    def test_remnants_level_61(self, capsys):
        env = run_json(capsys, "remnants", "--level", "61", "--bound", "748")
        assert env["results"]["remnants"] == [str(m) for m in REMNANTS_61_BELOW_748]
        assert env["results"]["intruders"] == []

    def test_family_with_nested(self, capsys):
        env = run_json(capsys, "family", "--primes", "5,11", "--nested", "5")
        members = {m["signs"]: m for m in env["results"]["members"]}
        assert members["--"]["residue"] == "9"
        assert members["--"]["nested"] == "5*(11*n + 2) - 1"

    def test_legendre(self, capsys):
        env = run_json(capsys, "legendre", "--level", "7")
        r = env["results"]
        assert (r["R0"], r["ie_sum"], r["estimate"]) == ("15", "-4", "11")
        assert (r["oracle_pi2"], r["oracle_window"]) == ("7", "14")

    def test_mainterm(self, capsys):
        env = run_json(capsys, "mainterm", "--level", "7")
        r = env["results"]
        assert r["R_M_sum"] == "1425/143"
        assert r["R_M_product"] == "215/13"
        assert r["R_E"] == "148/143"

    def test_c2(self, capsys):
        env = run_json(capsys, "c2", "--tol", "1e-6")
        assert abs(env["results"]["c2"] - 0.660162) < 1e-6
        assert abs(env["results"]["hardy_littlewood"] - 1.320320) < 1e-5

    def test_verify(self, capsys):
        code, out, err = run_cli(capsys, "verify", "--limit", "1000")
        env = json.loads(out)
        assert env["results"]["mismatch_count"] == "0"
        assert "verify:" in err  # throughput goes to stderr, not the envelope

    def test_bench(self, capsys):
        env = run_json(capsys, "bench", "--limit", "1000")
        assert env["results"]["pi2"] == str(json.loads(run_cli(capsys, "twins", "--limit", "166")[1])["results"]["count"])


class TestCsv:
    def test_counts_row_matches_json(self, capsys):
        code, out, _ = run_cli(capsys, "--emit", "csv", "counts", "--level", "7")
        assert code == 0
        header, row = out.strip().split("\n")
        assert header == "level,L,G,q,S,Q,R,x_frac"
        assert row == "7,35,6,6/35,20,4/7,15,3/7"

    def test_list_payload_one_row_per_element(self, capsys):
        code, out, _ = run_cli(capsys, "--emit", "csv", "constants", "--level", "5")
        lines = out.strip().split("\n")
        assert lines[0] == "constant"
        assert lines[1:] == ["0", "2", "3"]

    def test_remnants_kinds(self, capsys):
        code, out, _ = run_cli(capsys, "--emit", "csv", "remnants", "--level", "7", "--bound", "35")
        lines = out.strip().split("\n")
        assert lines[0] == "value,kind,parent"
        assert "28,intruder,13" in lines
        assert "1,front_twin_rank," in lines


class TestErrorsAndOutput:
    def test_usage_error_exits_2(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["no-such-command"])
        assert exc.value.code == 2

    def test_unknown_flag_exits_2(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["classify", "28", "--frobnicate"])
        assert exc.value.code == 2

    def test_computation_error_exits_1(self, capsys):
        code, out, err = run_cli(capsys, "nonranks", "--prime", "4", "--limit", "10")
        assert code == 1
        assert out == ""
        assert "prime" in err

    def test_capacity_error_exits_1(self, capsys):
        code, _, err = run_cli(capsys, "--ceiling", "100", "twins", "--limit", "1000")
        assert code == 1
        assert "ceiling" in err

    def test_global_flags_accepted_after_subcommand(self, tmp_path, capsys):
        target = tmp_path / "env.json"
        code, out, _ = run_cli(capsys, "classify", "5", "--out", str(target))
        assert code == 0 and out == ""
        assert json.loads(target.read_text())["results"]["verdict"] == "twin_rank"

    def test_out_file(self, tmp_path, capsys):
        target = tmp_path / "env.json"
        code, out, _ = run_cli(capsys, "--out", str(target), "classify", "5")
        assert code == 0 and out == ""
        env = json.loads(target.read_text())
        assert env["results"]["verdict"] == "twin_rank"

    def test_cache_roundtrip(self, tmp_path, capsys):
        cache = str(tmp_path / "cache")
        first = run_json(capsys, "--cache-dir", cache, "constants", "--level", "7")
        path = tmp_path / "cache" / "constants-7.txt"
        assert path.is_file()
        head = path.read_text().splitlines()[0]
        assert head == "# level=7 modulus=35"
        second = run_json(capsys, "--cache-dir", cache, "constants", "--level", "7")
        assert first["results"] == second["results"]
