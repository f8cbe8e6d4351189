import json
import subprocess
import sys

import pytest

from sumdiff.cli import EXIT_DOMAIN, EXIT_OK, EXIT_USAGE, UsageError, execute, main, parse_cli
from sumdiff.output import payload_bytes


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == EXIT_OK, err
    return json.loads(out)


def test_verify_counterexample(capsys):
    doc = run_json(capsys, "verify", "--set", "{0,2,3,4,7,11,12,14}")
    p = doc["payload"]
    assert (p["sum_card"], p["diff_card"], p["class"]) == (26, 25, "sum-dominant")
    assert doc["exhaustive"] is True and doc["format_version"]
    raw = json.dumps(p, sort_keys=True)
    assert '"class": "sum-dominant"' in raw and '"diff_card": 25' in raw and '"sum_card": 26' in raw


def test_parse_cli_verify():
    cfg = parse_cli(["verify", "--set", "{0,2,3,4,7,11,12,14}"])
    assert cfg.command == "verify" and cfg.flags["set"] == "{0,2,3,4,7,11,12,14}"


@pytest.mark.parametrize("argv, flag", [
    (["census", "--n", "0"], "--n"),
    (["census", "--n", "15", "--shards", "4", "--shard-index", "4"], "--shard-index"),
    (["verify", "--set", "{1,1}"], "--set"),
    (["verify", "--set", "1,2"], "--set"),
    (["verify", "--set", "{0}", "--bogus"], "--bogus"),
    (["census", "--n", "5", "--k", "6"], "--k"),
    (["frobnicate"], "frobnicate"),
    (["poly", "eval", "--f", "x +", "--set", "{1}"], "--f"),
])
def test_usage_errors(capsys, argv, flag):
    with pytest.raises(UsageError, match=flag.lstrip("-")):
        parse_cli(argv)
    code, _, err = run(capsys, *argv)
    assert code == EXIT_USAGE and "usage error" in err


@pytest.mark.parametrize("argv", [
    ["census", "--n", "29"],
    ["lift", "--set", "{0,2,3}", "--m", "5", "--t", "2"],
    ["forms", "normalize", "--u", "0", "--v", "1"],
    ["forms", "orosz", "--u", "4", "--v", "2"],
    ["forms", "triple", "--f", "1,1", "--g", "2,2", "--max-diam", "5", "--max-card", "3"],
    ["forms", "nary", "--coeffs", "1,1,1,1", "--set", "{0,1,2,3,4,5,6,7,8,9}", "--budget-tuples", "100"],
    ["poly", "mod", "--f", "C(x,2)", "--m", "7", "--set", "{1,2}"],
    ["repfn", "realize", "--target", "/nonexistent/t.json", "--bound", "2", "--h", "3"],
    ["verify", "--set", "{0}", "--format", "csv"],
])
def test_domain_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == EXIT_DOMAIN and err.startswith("error:")


def test_help_exits_zero(capsys):
    assert main(["--help"]) == EXIT_OK


def test_census_csv(capsys):
    code, out, _ = run(capsys, "census", "--n", "8", "--format", "csv")
    assert code == EXIT_OK
    lines = out.strip().splitlines()
    assert lines[0] == "k,total,sum_dominant,balanced,diff_dominant"
    rows = [list(map(int, l.split(","))) for l in lines[1:]]
    assert [r[0] for r in rows] == list(range(9))
    assert all(r[2] == 0 for r in rows)


def test_census_json_and_witness_file(capsys, tmp_path):
    wpath = tmp_path / "w.json"
    doc = run_json(capsys, "census", "--n", "15", "--witnesses", str(wpath))
    assert doc["payload"]["f_n"] == 4
    assert [0, 2, 3, 4, 7, 11, 12, 14] in json.loads(wpath.read_text())
    assert "elapsed_secs" in doc["run"]
    empty = run_json(capsys, "census", "--n", "6")
    assert empty["payload"]["witnesses"] == []


def test_identical_invocations_are_byte_identical(capsys):
    argv = ["census", "--n", "12", "--shards", "3"]
    a = execute(parse_cli(argv))[0]
    b = execute(parse_cli(argv))[0]
    assert payload_bytes(a) == payload_bytes(b)


def test_cli_resume(capsys, tmp_path):
    ckpt = tmp_path / "ck.json"
    first = run_json(capsys, "census", "--n", "14", "--checkpoint", str(ckpt), "--stop-after", "5000")
    assert first["exhaustive"] is False
    second = run_json(capsys, "census", "--n", "14", "--checkpoint", str(ckpt))
    assert second["exhaustive"] is True and second["run"]["resumed"] is True
    plain = run_json(capsys, "census", "--n", "14")
    assert second["payload"] == plain["payload"]
    bad = run(capsys, "census", "--n", "13", "--checkpoint", str(ckpt))
    assert bad[0] == EXIT_DOMAIN and "checkpoint" in bad[2]


def test_output_file_and_env_dir(capsys, tmp_path, monkeypatch):
    out = tmp_path / "sub" / "r.json"
    code, stdout, _ = run(capsys, "verify", "--set", "{0,1,5}", "--output", str(out))
    assert code == EXIT_OK and stdout == ""
    assert json.loads(out.read_text())["payload"]["class"] == "difference-dominant"
    monkeypatch.setenv("SUMDIFF_OUTPUT_DIR", str(tmp_path / "env"))
    assert main(["forms", "normalize", "--u", "-2", "--v", "4"]) == EXIT_OK
    doc = json.loads((tmp_path / "env" / "forms-normalize.json").read_text())
    assert doc["payload"]["normalized"] == {"u": 2, "v": -1}


def test_unwritable_output(capsys, tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    code, _, err = run(capsys, "verify", "--set", "{0,1}", "--output", str(blocker / "r.json"))
    assert code == EXIT_DOMAIN and str(blocker) in err


def test_search_and_lift(capsys):
    doc = run_json(capsys, "search", "--max-card", "8", "--max-diam", "14")
    assert [0, 2, 3, 4, 7, 11, 12, 14] in doc["payload"]["sets"]
    doc = run_json(capsys, "lift", "--set", "{0,2,3,4,7,11,12,14}", "--m", "29", "--t", "2")
    p = doc["payload"]
    assert (p["cardinality"], p["sum_card"], p["diff_card"]) == (64, 676, 625)


def test_forms_commands(capsys):
    p = run_json(capsys, "forms", "eval", "--u", "2", "--v", "1", "--set", "{0,3,4,6}")["payload"]
    assert p["cardinality"] == 13 and p["image"]["cardinality"] == 13
    p = run_json(capsys, "forms", "eval", "--u", "2", "--v", "1", "--set", "{0,3,4,6}", "--no-image")["payload"]
    assert "image" not in p
    p = run_json(capsys, "forms", "orosz", "--u", "3", "--v", "1")["payload"]
    assert p["A"] == {"set": [0, 8, 9, 12], "f_card": 14, "g_card": 13}
    p = run_json(capsys, "forms", "triple", "--f", "1,1", "--g", "1,-1", "--max-diam", "14", "--max-card", "8")["payload"]
    assert p["A"]["set"] == [0, 2, 3, 4, 7, 11, 12, 14]
    p = run_json(capsys, "forms", "nary", "--coeffs", "1,-1,2", "--set", "{0,1}")["payload"]
    assert p["image"]["elements"] == [-1, 0, 1, 2, 3]


def test_poly_commands(capsys):
    p = run_json(capsys, "poly", "eval", "--f", "C(x,2)", "--set", "{0,1,2,3}")["payload"]
    assert p["image"]["elements"] == [0, 1, 3] and p["regime"] == "binomial"
    doc = run_json(capsys, "poly", "mod", "--f", "x+y", "--g", "x-y", "--m", "29", "--probe")
    assert doc["payload"]["probe"]["status"] == "member"
    assert (doc["payload"]["probe"]["f_card"], doc["payload"]["probe"]["g_card"]) == (26, 25)
    doc = run_json(capsys, "poly", "mod", "--f", "x+y", "--g", "x-y", "--m", "12", "--triple")
    assert doc["payload"]["triple"]["A"] == [0, 1, 3, 4, 5, 8]
    doc = run_json(capsys, "poly", "mod", "--f", "x^2", "--m", "5", "--set", "{0,1,2,3,4}")
    assert doc["payload"]["f_image"] == [0, 1, 4]


def test_repfn_commands(capsys, tmp_path):
    p = run_json(capsys, "repfn", "profile", "--set", "{0,1,2}", "--h", "2", "--from", "0", "--to", "4")["payload"]
    assert p["values"] == [1, 1, 2, 1, 1]
    code, out, _ = run(capsys, "repfn", "profile", "--set", "{0,1,2}", "--format", "csv")
    assert out.splitlines()[0] == "n,r" and code == EXIT_OK
    t = tmp_path / "t.json"
    t.write_text(json.dumps({"0": 1, "1": 1, "2": 2, "3": 1, "4": 1}))
    p = run_json(capsys, "repfn", "verify", "--set", "{0,1,2}", "--target", str(t))["payload"]
    assert p["passed"] is True
    t.write_text(json.dumps({"-2": 0, "-1": 0, "0": 1, "1": 1, "2": 1, "3": 0, "4": 0}))
    p = run_json(capsys, "repfn", "realize", "--target", str(t), "--bound", "3")["payload"]
    assert p["set"] == [0, 1] and p["status"] == "found"
    p = run_json(capsys, "repfn", "realize", "--target", str(t), "--bound", "3", "--all")["payload"]
    assert [0, 1] in p["realizers"]
    p = run_json(capsys, "repfn", "count", "--set", "{-3,1,5}", "--x", "4")["payload"]
    assert p["count"] == 2
    p = run_json(capsys, "repfn", "density", "--set", "{1,2,3,4,5,6,7,8}", "--samples", "2,4,8")["payload"]
    assert p["alpha"] == pytest.approx(1.0)


def test_text_format(capsys):
    code, out, _ = run(capsys, "verify", "--set", "{0,2,3,4,7}", "--format", "text")
    assert code == EXIT_OK and "sum_card: 12" in out and "diff_card: 13" in out


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "sumdiff", "verify", "--set", "{4,6,7,9}"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["payload"]["class"] == "balanced"


def test_option_prefixes_are_not_expanded(capsys):
    # "--f" must not silently mean "--format"
    assert main(["forms", "normalize", "--f", "6", "--u", "6", "--v", "-4"]) == 2
