"""Config parsing, worst-case placement, and the formula sweep."""

import json

import pytest

from skewlrc.errors import ConstraintError
from skewlrc.scenario import (SWEEP_HEADER, load_scenario, parse_scenario,
                              sweep_csv, sweep_rows, validate_failures,
                              worst_case_placement)

BASE = {
    "q": 5, "m": 3, "g": 3, "r": 3, "delta": 3, "k": 7,
    "failures": [[1, 0], [1, 2]], "scheme": "direct",
    "l1": [], "l2": [],
}


def cfg(**over):
    data = dict(BASE)
    data.update(over)
    return data


def test_defaults():
    sc = parse_scenario(cfg())
    assert sc.m == 3 and sc.k_e == 0 and sc.seed == 0
    assert sc.placement == "explicit" and sc.policy == "default"
    sc = parse_scenario({k: v for k, v in cfg().items() if k not in ("m", "l1", "l2")})
    assert sc.m == sc.r  # m defaults to r
    assert sc.l1 == () and sc.l2 == ()


@pytest.mark.parametrize("bad,match", [
    (dict(scheme="broadcast"), "scheme"),
    (dict(placement="best-case"), "placement"),
    (dict(policy="chaotic"), "policy"),
    (dict(k_e=9), "k_e"),
    (dict(m=2), "m >= r"),
    (dict(failures=[[1]]), "failures"),
    (dict(extra_key=1), "unknown"),
    (dict(l1=3), "l1"),
])
def test_rejects_bad_configs(bad, match):
    with pytest.raises(ConstraintError, match=match):
        parse_scenario(cfg(**bad))


def test_missing_required_key():
    data = cfg()
    del data["delta"]
    with pytest.raises(ConstraintError, match="delta"):
        parse_scenario(data)


def test_load_rejects_bad_json(tmp_path):
    p = tmp_path / "broken.json"
    p.write_text("{not json")
    with pytest.raises(ConstraintError, match="JSON"):
        load_scenario(str(p))


def test_load_roundtrip(tmp_path):
    p = tmp_path / "ok.json"
    p.write_text(json.dumps(cfg(seed=9)))
    sc = load_scenario(str(p))
    assert sc.seed == 9 and sc.failures == ((1, 0), (1, 2))


def test_validate_failures(params737):
    validate_failures(params737, [(1, 0), (3, 4)])
    with pytest.raises(ConstraintError, match="out of range"):
        validate_failures(params737, [(4, 0)])
    with pytest.raises(ConstraintError, match="repeated"):
        validate_failures(params737, [(1, 0), (1, 0)])


def test_worst_case_direct_keeps_target_observed(params737):
    l1, l2 = worst_case_placement(params737, 0, 1, "direct", target=2)
    assert l2 == (2,)
    l1, l2 = worst_case_placement(params737, 2, 1, "direct", target=1)
    assert l2 == (1,)
    assert len(l1) == 2 and all(pos[0] != 1 for pos in l1)


def test_worst_case_needs_admissible_budget(params737):
    with pytest.raises(ConstraintError, match="l1 \\+ l2\\*r < k"):
        worst_case_placement(params737, 1, 2, "direct", target=1)


def test_sweep_header_and_monotonic():
    from skewlrc.acceptance import sweep_base_scenario
    rows = sweep_rows(sweep_base_scenario(), 1, 15)
    text = sweep_csv(rows)
    lines = text.strip().split("\n")
    assert lines[0] == SWEEP_HEADER == "g,k,ks_direct,ks_forwarded,ks_lrc_no_global"
    assert len(lines) == 16
    for col in ("ks_direct", "ks_forwarded", "ks_lrc_no_global"):
        vals = [row[col] for row in rows]
        assert vals == sorted(vals), f"{col} must not decrease with g"
    # forwarding beats per-contributor downloads once windows saturate
    for row in rows:
        if row["g"] >= 4:
            assert row["ks_forwarded"] > row["ks_direct"]


def test_sweep_rejects_explicit_placement():
    sc = parse_scenario(cfg())
    with pytest.raises(ConstraintError, match="worst-case"):
        sweep_rows(sc, 1, 5)


def test_sweep_range_checks():
    from skewlrc.acceptance import sweep_base_scenario
    sc = sweep_base_scenario()
    with pytest.raises(ConstraintError, match="g-min"):
        sweep_rows(sc, 5, 3)
    with pytest.raises(ConstraintError, match="q"):
        sweep_rows(sc, 1, 17)
