import itertools
import math
import random

import pytest

from cflrecog.bfvp import (ALPHABET, PostfixFormula, arguments, bfvp_report, build_tree,
                           compute_facts, infix_to_postfix, parse_symbols, recognize_bfvp,
                           tree_to_postfix, well_formed)
from cflrecog.errors import FormulaSyntaxError, NotAnOperator, NotWellFormed
from cflrecog.pebble import AND, LEAF, pebble_budget

from oracles import eval_infix, eval_postfix, random_infix, random_postfix


def test_depths():
    assert compute_facts("1 0 ∧").depth == (1, 2, 1)
    assert compute_facts("1 0 ∧ 1 ∨").depth == (1, 2, 1, 2, 1)
    assert compute_facts("1 ¬").depth == (1, 1)


def test_dindex():
    f = compute_facts("1 0 ∧ 1 ∨")
    assert f.dindex == (1, 1, 2, 2, 3)
    assert f.is_binary_op == (False, False, True, False, True)


def test_well_formed_examples():
    assert well_formed("1 0 ∧")
    assert not well_formed("∧")
    assert not well_formed("1 0")
    assert not well_formed("")
    assert well_formed("0 ¬ ¬")


def test_arguments_examples():
    assert arguments("1 0 ∧", 3) == (1, 2)
    assert arguments("1 0 ∧ 1 ∨", 5) == (3, 4)
    assert arguments("1 ¬", 2) == (1,)


def test_arguments_errors():
    with pytest.raises(NotAnOperator):
        arguments("1 0 ∧", 1)
    with pytest.raises(NotWellFormed):
        arguments("1 ∧", 2)


def test_ascii_fallbacks():
    assert parse_symbols("1 0 & !") == ("1", "0", "∧", "¬")
    assert parse_symbols("10|") == ("1", "0", "∨")
    with pytest.raises(FormulaSyntaxError):
        parse_symbols("1 x")
    assert PostfixFormula.parse("1 0 |").n == 3


def test_build_tree_examples():
    t = build_tree("1 0 ∧")
    assert t.m == 3 and t.kind[t.root] == AND
    t = build_tree("1")
    assert t.m == 1 and t.kind[0] == LEAF
    with pytest.raises(NotWellFormed):
        build_tree("1 0")


def _brute_arguments(s):
    # operand roots by a stack scan, independent of the depth counts
    stack, out = [], {}
    for p, c in enumerate(s, start=1):
        if c in "01":
            stack.append(p)
        elif c == "¬":
            out[p] = (stack.pop(),)
            stack.append(p)
        else:
            b, a = stack.pop(), stack.pop()
            out[p] = (a, b)
            stack.append(p)
    return out


def test_round_trip_and_arguments_exhaustive():
    count = 0
    for n in range(1, 8):
        for s in itertools.product(ALPHABET, repeat=n):
            if not well_formed(s):
                continue
            count += 1
            assert tree_to_postfix(build_tree(s)) == s
            brute = _brute_arguments(s)
            for p, args in brute.items():
                assert arguments(s, p) == args
    assert count > 1000


def test_recognize_examples():
    assert recognize_bfvp("1 0 ∨").accepted
    assert not recognize_bfvp("1 0 ∧").accepted
    assert recognize_bfvp("1 0 ∧").extra_cells == 0
    assert recognize_bfvp("") == (False, 0, 0)


def test_recognize_exhaustive_up_to_seven():
    for n in range(1, 8):
        for s in itertools.product(ALPHABET, repeat=n):
            expect = eval_postfix(s) is True
            r = recognize_bfvp(s)
            assert r.accepted == expect, s
            assert r.extra_cells == 0


@pytest.mark.parametrize("shape", ["random", "left", "right"])
def test_recognize_random_formulas(shape):
    rng = random.Random({"random": 1, "left": 2, "right": 3}[shape])
    for _ in range(150):
        m = rng.randint(1, 999)
        s = random_postfix(rng, m, shape)
        r = recognize_bfvp(s)
        assert r.accepted == eval_postfix(s)
        assert r.rounds <= 4 * math.ceil(math.log2(m)) + 2 if m > 1 else r.rounds == 0


def test_left_chain_worst_case():
    for k in (10, 100, 499):
        s = ("1",) + ("0", "∧") * k
        r = recognize_bfvp(s)
        assert not r.accepted
        assert r.rounds <= pebble_budget(len(s))
        s = ("0",) + ("1", "∨") * k
        assert recognize_bfvp(s).accepted


def test_report_fields():
    r = bfvp_report("1 0 ∨")
    assert r.engine == "bfvp" and r.accepted and r.extra_cells == 0 and r.graph_nodes == 3


def test_infix_examples():
    assert infix_to_postfix("1 ∨ 0") == ("1", "0", "∨")
    assert infix_to_postfix("¬(1 ∧ 0)") == ("1", "0", "∧", "¬")
    assert infix_to_postfix("1 ∨ 0 ∧ 0") == ("1", "0", "0", "∧", "∨")
    assert infix_to_postfix("1 ∧ 0 ∧ 1") == ("1", "0", "∧", "1", "∧")
    assert infix_to_postfix("!1 | 0") == ("1", "¬", "0", "∨")


@pytest.mark.parametrize("text", ["1 ∨", "(1", "1)", "1 0", "∧ 1", "1 ¬", "x"])
def test_infix_syntax_errors(text):
    with pytest.raises(FormulaSyntaxError):
        infix_to_postfix(text)


def test_infix_random_preserves_value():
    rng = random.Random(21)
    for _ in range(500):
        text = random_infix(rng, rng.randint(1, 60))
        post = infix_to_postfix(text)
        assert eval_postfix(post) == eval_infix(text), text
