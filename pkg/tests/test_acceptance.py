"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v`` (the lines are
repeated in the terminal summary) or as a script.
"""

import itertools
import math
import random
import sys
import time
from collections import Counter

import pytest

from cflrecog import cli
from cflrecog.bfvp import ALPHABET, recognize_bfvp
from cflrecog.errors import AmbiguityViolation
from cflrecog.general import c6_constant, recognize
from cflrecog.grammar import parse_grammar
from cflrecog.items import Truth3, and3, or3
from cflrecog.oracle import ParseTree, count_parses, cyk_recognize, jordan_separator
from cflrecog.path_system import c2_constant, c3_constant, recognize_linear, recognize_unambiguous
from cflrecog.pebble import PebbleTree, evaluate_all, pebble_budget
from cflrecog.sampler import (SPEC_NAMES, get_spec, length_table, make_dataset, sample_negative,
                              sample_positive)

from oracles import (earley_recognize, eval_all_iterative, eval_infix, eval_postfix,
                     random_gate_tree, random_postfix)

RESULTS: dict[int, str] = {}


def _lg(n):
    return math.ceil(math.log2(n)) if n > 1 else 0


def report(num, ok, detail):
    line = f"criterion {num:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS[num] = line
    print(line)
    assert ok, line


def _positives(spec, count, max_n, rng):
    lengths = [m for m in length_table(spec, max_n).feasible_lengths() if m <= max_n]
    return [spec.tokens(sample_positive(spec, rng.choice(lengths), rng)) for _ in range(count)]


def _negatives(spec, count, max_n, rng):
    out = []
    lengths = [m for m in length_table(spec, max_n).feasible_lengths() if m <= max_n]
    for k in range(count):
        if k % 2:
            n = rng.choice(lengths)
            out.append(spec.tokens(sample_negative(spec, n, "perturb", rng, max_n=max_n)))
        else:
            out.append(spec.tokens(sample_negative(spec, rng.randint(1, max_n), "random", rng)))
    return out


# ---------------------------------------------------------------- criteria 1-3

GENERAL_SUITE = ("dyck1", "dyck2", "anbn", "palindrome")


@pytest.fixture(scope="module")
def general_runs():
    rng = random.Random(2024)
    stats = {"runs": 0, "disagree": [], "round_violations": [], "ledger_violations": [],
             "accepted": 0, "max_ratio": 0.0}
    start = time.perf_counter()
    for name in GENERAL_SUITE:
        spec = get_spec(name)
        g = spec.cnf
        c6 = c6_constant(g)
        exhaustive = (w for n in range(1, 9) for w in itertools.product(spec.alphabet, repeat=n))
        sampled = _positives(spec, 500, 16, rng) + _negatives(spec, 500, 16, rng)
        for w in itertools.chain(exhaustive, sampled):
            n = len(w)
            expected = cyk_recognize(g, w)
            r = recognize(g, w)
            stats["runs"] += 1
            if r.accepted != expected:
                stats["disagree"].append((name, "".join(w)))
            if expected:
                stats["accepted"] += 1
                if not r.accepted or r.rounds_used > _lg(n) + 4:
                    stats["round_violations"].append((name, "".join(w), r.rounds_used))
            bound = c6 * n ** 6
            stats["max_ratio"] = max(stats["max_ratio"], r.decomposition_pairs / bound)
            if r.decomposition_pairs > bound:
                stats["ledger_violations"].append((name, n))
    stats["time"] = time.perf_counter() - start
    return stats


def test_criterion_01_general_oracle_equivalence(general_runs):
    s = general_runs
    report(1, not s["disagree"] and s["time"] <= 600,
           f"{s['runs']} strings, {len(s['disagree'])} disagreements, {s['time']:.0f}s "
           f"{s['disagree'][:3]}")


def test_criterion_02_round_bound(general_runs):
    s = general_runs
    report(2, not s["round_violations"],
           f"{s['accepted']} accepted strings, {len(s['round_violations'])} over ceil(log2 n)+4 "
           f"{s['round_violations'][:3]}")


def test_criterion_03_space_ledger(general_runs):
    s = general_runs
    report(3, not s["ledger_violations"],
           f"{s['runs']} runs, max decomposition_pairs / (C6 n^6) = {s['max_ratio']:.4f}")


# ---------------------------------------------------------------- criterion 4

def test_criterion_04_unambiguous_engine():
    rng = random.Random(4)
    bad, checked = [], 0
    worst_pebble = 0.0
    start = time.perf_counter()
    for name in ("marked_palindrome", "palindrome", "anbn", "dyck1", "dyck2"):
        spec = get_spec(name)
        g = spec.cnf
        c3 = c3_constant(g)
        for w in _positives(spec, 500, 200, rng) + _negatives(spec, 500, 200, rng):
            n = len(w)
            r = recognize_unambiguous(g, w)
            checked += 1
            if r.accepted != cyk_recognize(g, w):
                bad.append((name, "agree", "".join(w)))
            if r.rounds_used > _lg(n):
                bad.append((name, "iterations", n, r.rounds_used))
            if r.edge_cells > c3 * n ** 3:
                bad.append((name, "edges", n))
            if r.graph_nodes:
                bound = 4 * _lg(n) * (_lg(r.graph_nodes) * 4 + 2)
                worst_pebble = max(worst_pebble, r.pebble_rounds / bound)
                if r.pebble_rounds > bound:
                    bad.append((name, "pebble", n, r.pebble_rounds, bound))
    elapsed = time.perf_counter() - start
    report(4, not bad and elapsed <= 600,
           f"{checked} strings, {len(bad)} violations, max pebble/bound {worst_pebble:.3f}, "
           f"{elapsed:.0f}s {bad[:3]}")


# ---------------------------------------------------------------- criterion 5

def test_criterion_05_linear_engine():
    rng = random.Random(5)
    bad, checked = [], 0
    start = time.perf_counter()
    for name in ("palindrome", "marked_palindrome", "anbn"):
        spec = get_spec(name)
        c2 = c2_constant(spec.cfg)
        for w in _positives(spec, 100, 1000, rng) + _negatives(spec, 100, 1000, rng):
            n = len(w)
            r = recognize_linear(spec.cfg, w)
            checked += 1
            if r.accepted != cyk_recognize(spec.cnf, w):
                bad.append((name, "agree", n))
            if n > 1 and r.reach_calls != 1:
                bad.append((name, "reach calls", n, r.reach_calls))
            if r.item_cells > c2 * n * n:
                bad.append((name, "cells", n))
            if r.graph_nodes and r.pebble_rounds > 4 * _lg(r.graph_nodes) + 2:
                bad.append((name, "pebble", n, r.pebble_rounds))
    elapsed = time.perf_counter() - start
    report(5, not bad and elapsed <= 300,
           f"{checked} strings, {len(bad)} violations, {elapsed:.0f}s {bad[:3]}")


# ---------------------------------------------------------------- criterion 6

def _bfvp_budget(n):
    return 4 * _lg(n) + 2


def test_criterion_06_bfvp():
    bad = []
    start = time.perf_counter()
    exhaustive = 0
    for n in range(1, 10):
        for s in itertools.product(ALPHABET, repeat=n):
            exhaustive += 1
            r = recognize_bfvp(s)
            if r.accepted != (eval_postfix(s) is True) or r.extra_cells or r.rounds > _bfvp_budget(n):
                bad.append("".join(s))
    rng = random.Random(6)
    for k in range(10_000):
        m = rng.randint(1, 999)
        s = random_postfix(rng, m, ("random", "left", "right")[k % 3])
        r = recognize_bfvp(s)
        if r.accepted != eval_postfix(s) or r.extra_cells or r.rounds > _bfvp_budget(m):
            bad.append(("random", m))
    for k in range(1, 500):
        for s in (("1",) + ("0", "∧") * k, ("0",) + ("1", "∨") * k, ("1",) + ("¬",) * (2 * k)):
            r = recognize_bfvp(s)
            if r.accepted != eval_postfix(s) or r.rounds > _bfvp_budget(len(s)):
                bad.append(("chain", len(s)))
    elapsed = time.perf_counter() - start
    report(6, not bad and elapsed <= 600,
           f"{exhaustive} exhaustive + 10000 random + chains, {len(bad)} violations, "
           f"{elapsed:.0f}s {bad[:3]}")


# ---------------------------------------------------------------- criterion 7

def test_criterion_07_pebble():
    rng = random.Random(7)
    bad = []
    worst = 0.0
    for k in range(5000):
        m = rng.randint(1, 4095)
        kind, left, right, leaf = random_gate_tree(rng, m, ("random", "left", "right")[k % 3])
        value, rounds = evaluate_all(PebbleTree(kind, left, right, leaf), budget=10 ** 6)
        if list(value) != eval_all_iterative(kind, left, right, leaf):
            bad.append(("value", m))
        if rounds > _bfvp_budget(m):
            bad.append(("rounds", m, rounds))
        worst = max(worst, rounds / _bfvp_budget(m))
    report(7, not bad, f"5000 trees, {len(bad)} violations, max rounds/budget {worst:.3f} {bad[:3]}")


# ---------------------------------------------------------------- criterion 8

def _random_parse_tree(rng, m):
    parent = [-1] + [rng.randrange(v) if rng.random() < 0.5 else max(0, v - rng.randint(1, 3))
                     for v in range(1, m)]
    kids = [[] for _ in range(m)]
    for v in range(1, m):
        kids[parent[v]].append(v)
    built = {}
    for v in range(m - 1, -1, -1):
        built[v] = ParseTree(f"n{v}", (v, v), tuple(built[c] for c in kids[v]))
    return built[0], parent


def _components_without(parent, sep):
    m = len(parent)
    adj = [[] for _ in range(m)]
    for v in range(1, m):
        adj[v].append(parent[v])
        adj[parent[v]].append(v)
    seen = [False] * m
    seen[sep] = True
    sizes = []
    for s in range(m):
        if seen[s]:
            continue
        seen[s] = True
        stack, size = [s], 0
        while stack:
            v = stack.pop()
            size += 1
            for u in adj[v]:
                if not seen[u]:
                    seen[u] = True
                    stack.append(u)
        sizes.append(size)
    return sizes


def test_criterion_08_jordan():
    rng = random.Random(8)
    bad = []
    for _ in range(1000):
        m = rng.randint(1, 500)
        t, parent = _random_parse_tree(rng, m)
        sep = jordan_separator(t)
        # labels carry the node index
        sizes = _components_without(parent, int(sep.label[1:]))
        if max(sizes, default=0) > math.ceil(m / 2):
            bad.append((m, max(sizes)))
    report(8, not bad, f"1000 trees, {len(bad)} violations {bad[:3]}")


# ---------------------------------------------------------------- criterion 9

B = Truth3.BOT
AND_TABLE = {(1, 1): 1, (1, 0): 0, (0, 1): 0, (0, 0): 0, (1, B): B, (B, 1): B,
             (0, B): 0, (B, 0): 0, (B, B): B}
OR_TABLE = {(1, 1): 1, (1, 0): 1, (0, 1): 1, (0, 0): 0, (1, B): 1, (B, 1): 1,
            (0, B): B, (B, 0): B, (B, B): B}


def test_criterion_09_three_valued_logic():
    bad = []
    for (a, b), v in AND_TABLE.items():
        if and3(Truth3(a), Truth3(b)) != v:
            bad.append(("and", a, b))
    for (a, b), v in OR_TABLE.items():
        if or3(Truth3(a), Truth3(b)) != v:
            bad.append(("or", a, b))
    report(9, not bad and len(AND_TABLE) == len(OR_TABLE) == 9,
           f"18 entries checked, {len(bad)} mismatches {bad}")


# ---------------------------------------------------------------- criterion 10

def _independent_label(spec, s):
    if spec.name == "bfvp_postfix":
        return eval_postfix(spec.tokens(s)) is True
    if spec.name == "bfvp_infix":
        try:
            return eval_infix(s) is True
        except SyntaxError:
            return False
    return earley_recognize(spec.cfg, spec.tokens(s))


def test_criterion_10_sampler():
    mislabeled, total = [], 0
    for k, name in enumerate(SPEC_NAMES):
        spec = get_spec(name)
        for mode in ("random", "perturb", "mixed"):
            d = make_dataset(spec, 300, 20, 0.5, 100 + k, negative_mode=mode)
            total += len(d)
            mislabeled += [(name, r.string) for r in d.mislabeled(spec)]
            mislabeled += [(name, r.string) for r in d
                           if _independent_label(spec, r.string) != (r.label == "positive")]
    spec = get_spec("dyck1")
    rng = random.Random(10)
    draws = Counter(sample_positive(spec, 8, rng) for _ in range(50_000))
    p = 1 / 14
    sd = math.sqrt(50_000 * p * (1 - p))
    worst = max(abs(c - 50_000 * p) / sd for c in draws.values())
    ok = not mislabeled and len(draws) == 14 and worst <= 3
    report(10, ok, f"{total} records, {len(mislabeled)} mislabeled; Dyck-1 n=8: "
                   f"{len(draws)} members, max deviation {worst:.2f} sd")


# ---------------------------------------------------------------- criterion 11

def test_criterion_11_ambiguity(tmp_path):
    g = parse_grammar("S -> S S | a")
    parses = count_parses(g, "aaa")
    try:
        recognize_unambiguous(g, "aaa")
        raised = False
    except AmbiguityViolation:
        raised = True
    path = tmp_path / "ambiguous.cfg"
    path.write_text("S -> S S | a\n", encoding="utf-8")
    code = cli.main(["recognize", "-g", str(path), "-e", "unambiguous", "aaa"])
    report(11, parses == 2 and raised and code == 3,
           f"parses={parses}, AmbiguityViolation={raised}, exit code={code}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))
