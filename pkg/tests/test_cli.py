"""End-to-end runs of the command line interface."""

import json
import re

import pytest

from skewlrc import cli

EXAMPLE = {
    "q": 5, "m": 3, "g": 3, "r": 3, "delta": 3, "k": 7,
    "failures": [[1, 0], [1, 2], [1, 3], [1, 4],
                 [2, 1], [2, 2], [3, 0], [3, 4]],
    "scheme": "direct", "l1": [[2, 0]], "l2": [1], "seed": 1,
}


def write_cfg(tmp_path, name="run.json", **over):
    data = dict(EXAMPLE)
    data.update(over)
    p = tmp_path / name
    p.write_text(json.dumps(data))
    return p


def test_simulate_report(tmp_path, capsys):
    p = write_cfg(tmp_path)
    rc = cli.main(["simulate", str(p)])
    out = capsys.readouterr().out
    assert rc == 0
    assert "code: q=5 m=3 g=3 r=3 delta=3 k=7 h=2 nodes=15" in out
    assert "formula: k_e = 6" in out and "k_s = 1" in out
    assert "oracle:  k_e = 6 ; k_s = 1" in out
    assert "oracle meets the formula value" in out
    assert "recovery: all 15 nodes intact" in out
    assert (tmp_path / "run.json.transcript").exists()


def test_simulate_then_analyze(tmp_path, capsys):
    p = write_cfg(tmp_path, scheme="forwarded", l2=[3], flist=[2, 3, 1])
    assert cli.main(["simulate", str(p)]) == 0
    capsys.readouterr()
    rc = cli.main(["analyze", str(p) + ".transcript", str(p)])
    out = capsys.readouterr().out
    assert rc == 0
    assert out.startswith("transcript verified:")


def test_analyze_flags_tampering(tmp_path, capsys):
    p = write_cfg(tmp_path)
    cli.main(["simulate", str(p)])
    tp = tmp_path / "run.json.transcript"
    lines = tp.read_text().split("\n")
    # flip one digit of the first message payload (last field of a data row)
    for i, line in enumerate(lines):
        if line and not line.startswith("#"):
            head, _, payload = line.rpartition(",")
            digit = (int(payload[0]) + 1) % 5
            lines[i] = f"{head},{digit}{payload[1:]}"
            break
    tp.write_text("\n".join(lines))
    capsys.readouterr()
    rc = cli.main(["analyze", str(tp), str(p)])
    err = capsys.readouterr().err
    assert rc == 1
    assert "does not match" in err


def test_unrecoverable_exit_code(tmp_path, capsys):
    p = write_cfg(tmp_path, failures=[[1, 0], [1, 1], [1, 2], [1, 3], [1, 4], [2, 0], [2, 1]],
                  l1=[[3, 0]])
    rc = cli.main(["simulate", str(p)])
    err = capsys.readouterr().err
    assert rc == 2
    assert "unrecoverable" in err


def test_bad_field_exit_code(tmp_path, capsys):
    p = write_cfg(tmp_path, q=6)
    rc = cli.main(["simulate", str(p)])
    err = capsys.readouterr().err
    assert rc == 1
    assert "prime" in err


def test_missing_file_exit_code(capsys):
    rc = cli.main(["simulate", "/nonexistent/nope.json"])
    assert rc == 1


def test_sweep_csv_matches_series(tmp_path, capsys):
    from skewlrc.acceptance import (SWEEP_DIRECT, SWEEP_FORWARDED, SWEEP_LRC,
                                    sweep_base_scenario)
    cfgp = tmp_path / "sweep.json"
    sc = sweep_base_scenario()
    cfgp.write_text(json.dumps({
        "q": sc.q, "m": sc.m, "g": sc.g, "r": sc.r, "delta": sc.delta,
        "k": sc.k, "failures": [], "scheme": "forwarded",
        "l1": 0, "l2": 1, "placement": "worst-case",
    }))
    out_csv = tmp_path / "out.csv"
    rc = cli.main(["sweep", str(cfgp), "--g-max", "15", "--out", str(out_csv)])
    assert rc == 0
    lines = out_csv.read_text().strip().split("\n")
    assert lines[0] == "g,k,ks_direct,ks_forwarded,ks_lrc_no_global"
    for idx, line in enumerate(lines[1:]):
        g, k, d, f, focal = (int(t) for t in line.split(","))
        assert g == idx + 1
        assert d == SWEEP_DIRECT[idx]
        assert f == SWEEP_FORWARDED[idx]
        assert focal == SWEEP_LRC[idx]


def test_selftest_subset(capsys):
    rc = cli.main(["selftest", "--only", "entropy-rank"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "PASS entropy-rank" in out
    assert "1/1 criteria passed" in out


def test_selftest_unknown_name(capsys):
    rc = cli.main(["selftest", "--only", "does-not-exist"])
    assert rc == 1
