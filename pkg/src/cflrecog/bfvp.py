"""Boolean formula value problem in postfix notation.

The recognizer never builds a grammar table.  Operand positions come from
two prefix counts:

* ``depth(i)``: literals minus binary operators among positions ``<= i``;
* ``dindex(i)``: positions ``<= i`` that share ``depth(i)``.

A ``NOT`` at ``i`` takes ``i - 1``.  A binary operator at ``i`` takes
``i - 1`` as its second operand and, as its first, the position ``k`` with
the same depth and ``dindex(k) = dindex(i) - 1``.  The resulting tree (one
node per input position) is evaluated with the pebble game.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from . import pebble
from .errors import FormulaSyntaxError, NotAnOperator, NotWellFormed
from .report import ResourceReport

TRUE, FALSE, AND, OR, NOT = "1", "0", "∧", "∨", "¬"
ALPHABET = (TRUE, FALSE, AND, OR, NOT)
_ASCII = {"&": AND, "|": OR, "!": NOT, "~": NOT}
_CANON = {s: s for s in ALPHABET} | _ASCII


def parse_symbols(text) -> tuple[str, ...]:
    """Read a formula given as text (spaces optional) or as a symbol sequence."""
    if not isinstance(text, str):
        text = "".join(text)
    out = []
    for pos, ch in enumerate(text, start=1):
        if ch.isspace():
            continue
        if ch not in _CANON:
            raise FormulaSyntaxError(f"unexpected symbol {ch!r} at offset {pos}")
        out.append(_CANON[ch])
    return tuple(out)


def format_formula(f: Sequence[str]) -> str:
    return " ".join(f)


@dataclass(frozen=True)
class PostfixFormula:
    symbols: tuple[str, ...]

    @classmethod
    def parse(cls, text) -> "PostfixFormula":
        return cls(parse_symbols(text))

    @property
    def n(self) -> int:
        return len(self.symbols)

    def __str__(self):
        return format_formula(self.symbols)


def _symbols(f) -> tuple[str, ...]:
    if isinstance(f, PostfixFormula):
        return f.symbols
    return parse_symbols(f)


@dataclass(frozen=True)
class PositionFacts:
    """Per-position counts; entry ``p - 1`` describes position ``p``."""

    depth: tuple[int, ...]
    dindex: tuple[int, ...]
    is_binary_op: tuple[bool, ...]
    is_unary_op: tuple[bool, ...]


def compute_facts(f) -> PositionFacts:
    s = _symbols(f)
    depth, dindex, binary, unary = [], [], [], []
    d = 0
    seen: dict[int, int] = {}
    for c in s:
        if c in (TRUE, FALSE):
            d += 1
        elif c in (AND, OR):
            d -= 1
        seen[d] = seen.get(d, 0) + 1
        depth.append(d)
        dindex.append(seen[d])
        binary.append(c in (AND, OR))
        unary.append(c == NOT)
    return PositionFacts(tuple(depth), tuple(dindex), tuple(binary), tuple(unary))


def well_formed(f) -> bool:
    s = _symbols(f)
    d = 0
    for c in s:
        if c in (TRUE, FALSE):
            d += 1
        elif c in (AND, OR):
            d -= 1
        if d < 1:
            return False
    return d == 1


def _argument_table(s: Sequence[str], facts: PositionFacts) -> dict[int, tuple[int, ...]]:
    where = {}
    args = {}
    for p in range(1, len(s) + 1):
        dp, ip = facts.depth[p - 1], facts.dindex[p - 1]
        if facts.is_unary_op[p - 1]:
            args[p] = (p - 1,)
        elif facts.is_binary_op[p - 1]:
            args[p] = (where[(dp, ip - 1)], p - 1)
        where[(dp, ip)] = p
    return args


def arguments(f, i: int) -> tuple[int, ...]:
    """Operand positions (1-based) of the operator at position ``i``."""
    s = _symbols(f)
    if not 1 <= i <= len(s) or s[i - 1] in (TRUE, FALSE):
        raise NotAnOperator(f"position {i} does not hold an operator")
    if not well_formed(s):
        raise NotWellFormed("arguments are only defined for well-formed formulas")
    return _argument_table(s, compute_facts(s))[i]


def build_tree(f) -> pebble.PebbleTree:
    """Expression tree with node ``p - 1`` standing for position ``p``."""
    s = _symbols(f)
    if not well_formed(s):
        raise NotWellFormed(f"not a well-formed postfix formula: {format_formula(s)!r}")
    args = _argument_table(s, compute_facts(s))
    n = len(s)
    kind = np.zeros(n, dtype=np.int8)
    left = np.full(n, -1, dtype=np.int64)
    right = np.full(n, -1, dtype=np.int64)
    value = np.zeros(n, dtype=np.int8)
    for p, c in enumerate(s, start=1):
        v = p - 1
        if c == TRUE:
            value[v] = 1
        elif c == NOT:
            kind[v] = pebble.NOT
            left[v] = args[p][0] - 1
        elif c in (AND, OR):
            kind[v] = pebble.AND if c == AND else pebble.OR
            left[v] = args[p][0] - 1
            right[v] = args[p][1] - 1
    return pebble.PebbleTree(kind, left, right, value, root=n - 1)


def tree_to_postfix(t: pebble.PebbleTree) -> tuple[str, ...]:
    out = []
    stack = [(t.root, False)]
    while stack:
        v, done = stack.pop()
        k = t.kind[v]
        if k == pebble.LEAF:
            out.append(TRUE if t.leaf_value[v] else FALSE)
        elif done:
            out.append({pebble.AND: AND, pebble.OR: OR, pebble.NOT: NOT}[int(k)])
        else:
            stack.append((v, True))
            if k != pebble.NOT:
                stack.append((int(t.right[v]), False))
            stack.append((int(t.left[v]), False))
    return tuple(out)


class BfvpResult(NamedTuple):
    accepted: bool
    rounds: int
    extra_cells: int


def recognize_bfvp(f) -> BfvpResult:
    s = _symbols(f)
    if not s or not well_formed(s):
        return BfvpResult(False, 0, 0)
    t = build_tree(s)
    values, rounds = pebble.evaluate_all(t)
    return BfvpResult(bool(values[t.root]), rounds, 0)


def bfvp_report(f) -> ResourceReport:
    start = time.perf_counter()
    s = _symbols(f)
    res = recognize_bfvp(s)
    return ResourceReport("bfvp", res.accepted, len(s), rounds_used=res.rounds,
                          pebble_rounds=res.rounds, graph_nodes=len(s),
                          extra_cells=res.extra_cells, wall_time=time.perf_counter() - start)


# ---------------------------------------------------------------- infix

_PREC = {OR: 1, AND: 2, NOT: 3}


def infix_to_postfix(text) -> tuple[str, ...]:
    """Shunting-yard conversion; ``¬`` binds tightest, then ``∧``, then ``∨``."""
    out: list[str] = []
    ops: list[str] = []
    expect_operand = True
    for pos, ch in enumerate(text if isinstance(text, str) else "".join(text), start=1):
        if ch.isspace():
            continue
        c = _CANON.get(ch, ch)
        if c in (TRUE, FALSE):
            if not expect_operand:
                raise FormulaSyntaxError(f"missing operator before offset {pos}")
            out.append(c)
            expect_operand = False
        elif c == NOT:
            if not expect_operand:
                raise FormulaSyntaxError(f"unexpected ¬ at offset {pos}")
            ops.append(c)
        elif c in (AND, OR):
            if expect_operand:
                raise FormulaSyntaxError(f"missing operand before offset {pos}")
            while ops and ops[-1] != "(" and _PREC[ops[-1]] >= _PREC[c]:
                out.append(ops.pop())
            ops.append(c)
            expect_operand = True
        elif c == "(":
            if not expect_operand:
                raise FormulaSyntaxError(f"missing operator before offset {pos}")
            ops.append(c)
        elif c == ")":
            if expect_operand:
                raise FormulaSyntaxError(f"missing operand before offset {pos}")
            while ops and ops[-1] != "(":
                out.append(ops.pop())
            if not ops:
                raise FormulaSyntaxError(f"unbalanced ')' at offset {pos}")
            ops.pop()
        else:
            raise FormulaSyntaxError(f"unexpected symbol {ch!r} at offset {pos}")
    if expect_operand:
        raise FormulaSyntaxError("formula ends where an operand is expected")
    while ops:
        c = ops.pop()
        if c == "(":
            raise FormulaSyntaxError("unbalanced '('")
        out.append(c)
    return tuple(out)
