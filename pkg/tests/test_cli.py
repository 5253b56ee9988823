import io
import json

import pytest

from polyprod.cli import run, to_json


def cli(*args):
    buf = io.StringIO()
    rc = run(list(args), out=buf)
    return rc, buf.getvalue()


def doc(*args):
    rc, out = cli(*args)
    assert rc == 0, out
    return json.loads(out)


def test_analyze_example():
    d = doc("analyze", "--poly", "1,0,1", "--x", "3", "--format", "json")
    assert d["exponents"] == [[2, 2], [5, 2]] and d["perfect_power"] == 2
    assert d["schema"] == "polyprod.analyze/1"


def test_power_scan_example():
    assert doc("power-scan", "--poly", "1,0,1", "--xmax", "2000", "--power", "2")["hits"] == [3]


def test_criteria_example():
    d = doc("criteria", "--poly", "1,0,1", "--poly", "2,0,1")
    assert d["matched"] == "ThmStrong"
    assert all(set(t) == {"theorem", "applies", "reason"} for t in d["theorems"])


def test_unknown_flag_exits_2(capsys):
    rc, _ = cli("analyze", "--poly", "1,0,1", "--x", "3", "--bogus")
    assert rc == 2
    assert "usage" in capsys.readouterr().err


def test_validation_errors_exit_2():
    assert cli("analyze", "--poly", "1,0,1", "--x", "3", "--threads", "0")[0] == 2
    assert cli("analyze", "--poly", "1,x", "--x", "3")[0] == 2
    assert cli("dfit", "--poly", "1,0,1", "--x", "50", "--alpha", "0.6", "--beta", "0.5")[0] == 2


@pytest.mark.parametrize(
    "args",
    [
        ["squarefull-scan", "--poly", "1,0,0,1", "--xmax", "200", "--xmin", "2"],
        ["dfit", "--poly", "1,0,1", "--x", "100", "--alpha", "0", "--beta", "0.5"],
        ["exact-once", "--poly", "1,0,1", "--x", "1000", "--delta", "0.1"],
        ["window-prime", "--poly", "3,0,1", "--x", "100", "--a", "5", "--b", "6"],
        ["ap-sums", "--q", "4", "--a", "1", "--zmax", "1000"],
        ["estimate-c0", "--Q", "4", "--Z", "10000", "--D", "1"],
        ["charsum", "--poly", "1,0,1", "--p", "3", "--qmax", "100", "--k", "1"],
        ["turan", "--poly", "1,0,1", "--p", "2", "--X", "1000", "--z", "50"],
        ["primeseq", "--poly", "1,0,1", "--p", "5", "--q1", "101", "--count", "4"],
        ["gaplemma", "--X", "10", "--K", "2", "--set", "1,2,3,5,7,10"],
        ["census", "--poly", "1,0,1", "--p", "2", "--X", "100"],
    ],
    ids=lambda a: a[0],
)
def test_every_subcommand_has_schema(args):
    d = doc(*args)
    assert d["schema"] == f"polyprod.{args[0]}/1" and d["subcommand"] == args[0]


def test_specific_outputs():
    assert doc("dfit", "--poly", "1,0,1", "--x", "100", "--alpha", "0", "--beta", "0.5")["K"] == 11
    assert doc("window-prime", "--poly", "3,0,1", "--x", "100", "--a", "5", "--b", "6")["p"] == 547
    assert doc("primeseq", "--poly", "1,0,1", "--p", "5", "--q1", "101", "--count", "2")["primes"] == [101, 293]
    assert doc("gaplemma", "--X", "10", "--K", "2", "--set", "1,2,3,5,7,10")["holds"] is False


def test_csv_output():
    rc, out = cli("dfit", "--poly", "1,0,1", "--x", "10", "--format", "csv")
    assert rc == 0 and out.splitlines()[0].startswith("p,")


@pytest.mark.parametrize(
    "args",
    [
        ["analyze", "--poly", "7,0,1", "--x", "6000"],
        ["estimate-c0", "--Q", "6", "--Z", "20000"],
        ["turan", "--poly", "1,0,1", "--p", "2", "--X", "2000", "--z", "60"],
    ],
    ids=lambda a: a[0],
)
def test_thread_count_does_not_change_bytes(args, tmp_path):
    outs = [cli(*args, "--threads", t, "--no-cache")[1] for t in ("1", "2")]
    outs.append(cli(*args, "--threads", "2", "--cache-dir", str(tmp_path))[1])
    assert outs[0] == outs[1] == outs[2]


def test_float_serialization():
    s = to_json({"b": 1 / 3, "a": float("inf"), "c": float("nan")})
    assert s == '{"a": "inf", "b": 0.333333333333, "c": "nan"}'
