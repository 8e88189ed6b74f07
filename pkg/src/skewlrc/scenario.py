"""Configuration files and scenario assembly.

A scenario is one JSON object with flat keys:

    q, m, modulus?     field (m defaults to r; modulus defaults to a
                       pinned table / deterministic search)
    g, r, delta, k     code shape
    k_e                random padding symbols (default 0)
    failures           list of [group, node] pairs
    scheme             "naive" | "direct" | "forwarded"
    flist?             forwarding order, must end at the repaired group
    policy?            repair-set policy: "default" | "adversarial"
    l1, l2             node list / group list ("explicit" placement) or
                       plain counts ("worst-case" placement)
    placement?         "explicit" (default) | "worst-case"
    seed               message generation seed (default 0)

Worst-case placement maximizes the formula's eavesdropped dimension:
l2 group choices are enumerated exhaustively for g <= 10 (direct always
keeps the repaired group observed, which is what makes repair traffic
visible at all); above that the canonical construction is used (observed
groups adjacent to the repaired group, upstream-rich for forwarding).
l1 nodes are placed greedily onto repair-set-overlapping positions:
round-robin over unobserved groups in ascending order, node indices
ascending below r, skipping failed nodes.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, replace
from itertools import combinations

from .errors import ConstraintError
from .galois import ExtField
from .mrlrc import MrLrcParams, mrlrc_setup
from .secrecy import (EavesdropperSpec, e_vector, eavesdropped_dim_direct,
                      eavesdropped_dim_forwarded, make_spec,
                      secrecy_dim_direct, secrecy_dim_forwarded,
                      secrecy_dim_local_only)

SCHEMES = ("naive", "direct", "forwarded")


@dataclass(frozen=True)
class Scenario:
    q: int
    m: int
    modulus: tuple[int, ...] | None
    g: int
    r: int
    delta: int
    k: int
    k_e: int
    failures: tuple[tuple[int, int], ...]
    scheme: str
    flist: tuple[int, ...] | None
    policy: str
    l1: tuple | int
    l2: tuple | int
    placement: str
    seed: int


def _require(cond, msg):
    if not cond:
        raise ConstraintError(msg)


def parse_scenario(data: dict) -> Scenario:
    _require(isinstance(data, dict), "config must be a JSON object")
    known = {"q", "m", "modulus", "g", "r", "delta", "k", "k_e", "failures",
             "scheme", "flist", "policy", "l1", "l2", "placement", "seed"}
    unknown = sorted(set(data) - known)
    _require(not unknown, f"unknown config keys: {unknown}")
    for key in ("q", "g", "r", "delta", "k"):
        _require(key in data, f"missing required config key {key!r}")
        _require(isinstance(data[key], int) and data[key] >= 1,
                 f"config key {key!r} must be a positive integer")
    r = data["r"]
    m = data.get("m", r)
    _require(isinstance(m, int) and m >= r, f"need m >= r: m = {m}, r = {r}")
    scheme = data.get("scheme", "direct")
    _require(scheme in SCHEMES, f"scheme must be one of {SCHEMES}, got {scheme!r}")
    placement = data.get("placement", "explicit")
    _require(placement in ("explicit", "worst-case"),
             f"placement must be 'explicit' or 'worst-case', got {placement!r}")
    policy = data.get("policy", "default")
    _require(policy in ("default", "adversarial"),
             f"policy must be 'default' or 'adversarial', got {policy!r}")
    k_e = data.get("k_e", 0)
    _require(isinstance(k_e, int) and 0 <= k_e <= data["k"],
             f"need 0 <= k_e <= k: k_e = {k_e}")
    failures = data.get("failures", [])
    _require(isinstance(failures, list) and
             all(isinstance(p, list) and len(p) == 2 and
                 all(isinstance(x, int) for x in p) for p in failures),
             "failures must be a list of [group, node] pairs")
    flist = data.get("flist")
    if flist is not None:
        _require(isinstance(flist, list) and all(isinstance(x, int) for x in flist),
                 "flist must be a list of group indices")
        flist = tuple(flist)
    modulus = data.get("modulus")
    if modulus is not None:
        _require(isinstance(modulus, list) and all(isinstance(c, int) for c in modulus),
                 "modulus must be a list of integer coefficients")
        modulus = tuple(modulus)
    l1 = data.get("l1", [])
    l2 = data.get("l2", [])
    if placement == "explicit":
        _require(isinstance(l1, list), "explicit placement needs l1 as a node list")
        _require(isinstance(l2, list), "explicit placement needs l2 as a group list")
        l1 = tuple(tuple(p) for p in l1)
        l2 = tuple(l2)
    else:
        _require(isinstance(l1, int) and l1 >= 0, "worst-case placement needs l1 as a count")
        _require(isinstance(l2, int) and l2 >= 0, "worst-case placement needs l2 as a count")
    seed = data.get("seed", 0)
    _require(isinstance(seed, int), "seed must be an integer")
    return Scenario(data["q"], m, modulus, data["g"], r, data["delta"], data["k"],
                    k_e, tuple(tuple(p) for p in failures), scheme, flist, policy,
                    l1, l2, placement, seed)


def load_scenario(path: str) -> Scenario:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConstraintError(f"config is not valid JSON: {exc}") from exc
    return parse_scenario(data)


def build_params(sc: Scenario) -> MrLrcParams:
    field = ExtField(sc.q, sc.m, sc.modulus)
    return mrlrc_setup(field, sc.g, sc.r, sc.delta, sc.k)


def validate_failures(params: MrLrcParams, failures) -> None:
    seen = set()
    for i, j in failures:
        _require(1 <= i <= params.g and 0 <= j < params.group_size,
                 f"failure position ({i}, {j}) out of range")
        _require((i, j) not in seen, f"failure position ({i}, {j}) repeated")
        seen.add((i, j))


# ---------------------------------------------------------------------------
# worst-case eavesdropper placement
# ---------------------------------------------------------------------------

def _greedy_l1(params: MrLrcParams, count: int, l2_groups, failures) -> tuple:
    failed = set(tuple(p) for p in failures)
    nodes = []
    j = 0
    while len(nodes) < count and j < params.group_size:
        for i in range(1, params.g + 1):
            if len(nodes) == count:
                break
            if i in l2_groups or j >= params.r:
                continue
            if (i, j) in failed or (i, j) in nodes:
                continue
            nodes.append((i, j))
        j += 1
    if len(nodes) < count:
        # fall back to any intact unobserved position
        for pos in params.positions():
            if len(nodes) == count:
                break
            if pos[0] in l2_groups or pos in failed or pos in nodes:
                continue
            nodes.append(pos)
    _require(len(nodes) == count, f"cannot place {count} eavesdropped nodes")
    return tuple(sorted(nodes))


def _formula_ke(params, scheme, l1_nodes, l2_groups, flist):
    spec = make_spec(params, l1_nodes, l2_groups)
    e = e_vector(spec, params)
    if scheme == "forwarded":
        return eavesdropped_dim_forwarded(params.g, params.r, params.h, params.k,
                                          spec.l1, spec.l2, flist or (), l2_groups, e)
    return eavesdropped_dim_direct(params.g, params.r, params.h, params.k,
                                   spec.l1, spec.l2, e)


def worst_case_placement(params: MrLrcParams, l1_count: int, l2_count: int,
                         scheme: str, target: int, flist=None):
    """(l1_nodes, l2_groups) maximizing the formula k_e; ties lexicographic."""
    _require(l1_count + l2_count * params.r < params.k,
             f"need l1 + l2*r < k: {l1_count} + {l2_count}*{params.r} >= {params.k}")
    failures = ()  # placement is chosen against the code, not one pattern
    if l2_count == 0:
        return _greedy_l1(params, l1_count, (), failures), ()
    others = [i for i in range(1, params.g + 1) if i != target]
    if params.g <= 10:
        if scheme == "direct":
            candidates = [tuple(sorted((target,) + c))
                          for c in combinations(others, l2_count - 1)]
        else:
            candidates = [tuple(sorted(c)) for c in combinations(range(1, params.g + 1),
                                                                 l2_count)]
    else:
        if scheme == "direct":
            candidates = [tuple(sorted([target] + others[: l2_count - 1]))]
        else:
            order = list(flist) if flist else others + [target]
            upstream = [i for i in order if i != target]
            candidates = [tuple(sorted(upstream[-l2_count:]))]
    best = None
    for l2_groups in candidates:
        l1_nodes = _greedy_l1(params, l1_count, l2_groups, failures)
        try:
            ke = _formula_ke(params, scheme, l1_nodes, l2_groups, flist)
        except ConstraintError:
            continue
        key = (-ke, l2_groups)
        if best is None or key < best[0]:
            best = (key, l1_nodes, l2_groups)
    _require(best is not None, "no admissible worst-case placement exists")
    return best[1], best[2]


def resolve_spec(sc: Scenario, params: MrLrcParams, target: int) -> EavesdropperSpec:
    if sc.placement == "explicit":
        return make_spec(params, sc.l1, sc.l2)
    l1_nodes, l2_groups = worst_case_placement(params, sc.l1, sc.l2, sc.scheme,
                                               target, sc.flist)
    return make_spec(params, l1_nodes, l2_groups)


# ---------------------------------------------------------------------------
# formula-layer sweep
# ---------------------------------------------------------------------------

SWEEP_HEADER = "g,k,ks_direct,ks_forwarded,ks_lrc_no_global"


def sweep_rows(sc: Scenario, g_min: int, g_max: int) -> list[dict]:
    """Worst-case secrecy dimensions per group count, pure formula layer.

    h is taken from the base config (h = r*g - k there) and held fixed;
    k grows as r*g - h.  l1/l2 are counts; the repaired group is group 1
    and the canonical forwarding order is (2, ..., g, 1).
    """
    _require(sc.placement == "worst-case" and isinstance(sc.l1, int),
             "sweep needs placement='worst-case' with l1/l2 as counts")
    _require(1 <= g_min <= g_max, f"need 1 <= g-min <= g-max: {g_min}, {g_max}")
    r, delta = sc.r, sc.delta
    h = r * sc.g - sc.k
    _require(1 <= h <= r, f"need 1 <= h <= r: h = {h}, r = {r}")
    _require(sc.q > max(g_max, r + delta - 2),
             f"need q > max(g, r + delta - 2) up to g-max: q = {sc.q}")
    _require(g_max <= sc.q - 1, f"need g <= q - 1 at g-max: {g_max} > {sc.q - 1}")
    l1, l2 = sc.l1, sc.l2
    rows = []
    for g in range(g_min, g_max + 1):
        k = r * g - h
        if k < 1:
            raise ConstraintError(f"swept k = {k} < 1 at g = {g}")
        n_l2 = min(l2, g)
        # direct worst case: repaired group observed, so observed groups sit
        # first; leftover l1 nodes round-robin over the unobserved groups
        e_direct = [r] * n_l2 + [0] * (g - n_l2)
        for t in range(l1):
            if g - n_l2 > 0:
                idx = n_l2 + t % (g - n_l2)
                if e_direct[idx] < r:
                    e_direct[idx] += 1
        with warnings.catch_warnings():
            # small g falls outside the guaranteed regime by construction;
            # the clamp is the documented sweep behaviour, not a surprise
            warnings.simplefilter("ignore")
            ks_d = secrecy_dim_direct(g, r, h, k, l1, n_l2, e_direct, clamp=True)
        # forwarded worst case: observed groups placed latest in the
        # forwarding order (2, ..., g, 1), giving them the deepest windows
        flist = tuple(range(2, g + 1)) + (1,)
        observed = tuple(sorted(flist[-(n_l2 + 1):-1])) if g >= 2 else (1,) * min(n_l2, 1)
        e_fw = [0] * g
        for i in observed:
            e_fw[i - 1] = r
        unob = [i for i in range(1, g + 1) if i not in observed]
        for t in range(l1):
            if unob:
                idx = unob[t % len(unob)] - 1
                if e_fw[idx] < r:
                    e_fw[idx] += 1
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            ks_f = secrecy_dim_forwarded(g, r, h, k, l1, len(observed), flist,
                                         observed, e_fw, clamp=True)
        ks_l = secrecy_dim_local_only(g, r, l1, n_l2)
        rows.append({"g": g, "k": k, "ks_direct": ks_d, "ks_forwarded": ks_f,
                     "ks_lrc_no_global": ks_l})
    return rows


def sweep_csv(rows) -> str:
    lines = [SWEEP_HEADER]
    for row in rows:
        lines.append(f"{row['g']},{row['k']},{row['ks_direct']},"
                     f"{row['ks_forwarded']},{row['ks_lrc_no_global']}")
    return "\n".join(lines) + "\n"
