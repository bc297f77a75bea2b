import json

from steinberg_ext.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_ext_profile_command(capsys):
    code, out, _ = run_cli(capsys, "--n", "3", "--deg", "1", "--no-cache",
                           "ext", "--i0", "1,2", "--i2", "")
    assert code == 0
    payload = json.loads(out)
    assert payload["h_min"] == 2
    assert payload["dims"]["2"] == 5
    assert payload["graded"]["2"] == [4, 1, 0]


def test_galois_command(capsys):
    code, out, _ = run_cli(capsys, "--n", "4", "--no-cache", "galois")
    assert code == 0
    payload = json.loads(out)
    assert payload["dim"] == 13
    assert payload["trace"][-1] == {"n": 4, "dim": 13}


def test_linv_roundtrip_command(capsys):
    code, out, _ = run_cli(capsys, "--n", "3", "--no-cache", "linv",
                           "roundtrip", "--samples", "10", "--seed", "7")
    assert code == 0
    assert json.loads(out)["ok"] == "10/10"


def test_linv_to_from_roundtrip(capsys):
    params = json.dumps([{"alpha": [1, 2], "iota": 0, "L": "3/2"}])
    code, out, _ = run_cli(capsys, "--n", "2", "--no-cache", "linv", "to-w",
                           "--params", params)
    assert code == 0
    hyperplane = json.dumps(json.loads(out)["hyperplane"])
    code, out, _ = run_cli(capsys, "--n", "2", "--no-cache", "linv", "from-w",
                           "--hyperplane", hyperplane)
    assert code == 0
    assert json.loads(out)["params"] == [{"alpha": [1, 2], "iota": 0, "L": "3/2"}]
    code, out, _ = run_cli(capsys, "--n", "2", "--no-cache", "linv", "check",
                           "--hyperplane", hyperplane)
    assert code == 0
    assert json.loads(out)["invariant"] is True


def test_cohomology_and_e2(capsys):
    code, out, _ = run_cli(capsys, "--n", "2", "--no-cache", "cohomology", "--i", "1")
    assert code == 0 and json.loads(out)["dims"] == [1, 0, 0, 1]
    code, out, _ = run_cli(capsys, "--n", "2", "--no-cache", "e2", "--i0", "", "--i1", "1")
    assert code == 0
    assert json.loads(out)["e2_dims"] == {"0,1": 2, "0,2": 1, "-1,3": 1}


def test_cup_command(capsys):
    code, out, _ = run_cli(capsys, "--n", "3", "--no-cache", "cup",
                           "--i0", "1,2", "--i2", "2", "--i4", "")
    assert code == 0
    payload = json.loads(out)
    assert len(payload["products"]) == 4
    assert all(p["result"]["sign"] in (1, -1) for p in payload["products"])


def test_usage_error_exit_code(capsys):
    code, _, err = run_cli(capsys, "--n", "3", "--no-cache", "ext", "--i0", "7")
    assert code == 2 and "error" in err


def test_bad_subcommand_exits_two(capsys):
    assert run_cli(capsys, "--n", "2", "nonsense")[0] == 2


def test_cache_determinism(tmp_path, capsys):
    argv = ["--n", "2", "--cache-dir", str(tmp_path), "page",
            "--i0", "", "--i1", "1", "--write-cache"]
    code, cold, _ = run_cli(capsys, *argv)
    assert code == 0
    files = sorted(f.read_text() for f in tmp_path.glob("pages/*.json"))
    assert files
    code, warm, _ = run_cli(capsys, *argv)
    assert code == 0 and warm == cold
    files2 = sorted(f.read_text() for f in tmp_path.glob("pages/*.json"))
    assert files == files2


def test_degeneration_and_table_format(capsys):
    code, out, _ = run_cli(capsys, "--n", "2", "--no-cache", "degeneration",
                           "--i0", "", "--i1", "1")
    assert code == 0 and json.loads(out)["collapses"] is True
    code, out, _ = run_cli(capsys, "--n", "2", "--no-cache", "--format", "table",
                           "galois")
    assert code == 0 and out.startswith("dim: 2")


def test_rank_one_queries(capsys):
    code, out, _ = run_cli(capsys, "--n", "1", "--no-cache", "cohomology", "--i", "")
    assert code == 0 and json.loads(out)["dims"] == [1]
    code, out, _ = run_cli(capsys, "--n", "1", "--no-cache", "ext", "--i0", "", "--i2", "")
    assert code == 0 and json.loads(out)["dims"] == {"0": 1}


def test_structural_violation_exits_three(capsys, monkeypatch):
    from steinberg_ext import cli as cli_mod
    from steinberg_ext.errors import ConsistencyError

    def broken(engine, i0, i2):
        raise ConsistencyError("forced", what="test")

    monkeypatch.setattr(cli_mod.cup, "basis_x_rank", broken)
    code, _, err = run_cli(capsys, "--n", "2", "--no-cache", "basis",
                           "--i0", "1", "--i2", "")
    assert code == 3 and "forced" in err


def test_verify_subset(capsys):
    code, out, err = run_cli(capsys, "--n", "2", "--no-cache", "verify",
                             "--criteria", "6")
    assert code == 0
    payload = json.loads(out)
    assert payload["ok"] is True
    assert "golden" in payload["criteria"][0]["name"]
    assert "PASS" in err
