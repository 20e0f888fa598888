"""Round-synchronous pebble game for variable-free Boolean expression trees.

Each node carries a value (unknown until determined), a pointer (initially
itself) and a unary Boolean function ``condf`` such that
``value(v) = condf(value(ptr(v)))`` once the pointee is known.  One round is
three steps, each reading only the previous state:

``activate``
    an un-activated gate with a known child points at its other child and
    takes the function forced by the known child (a ``NOT`` gate points at
    its child with ``negation``);
``square``
    pointer jumping, ``ptr(v) <- ptr(ptr(v))`` with the functions composed;
``pebble``
    nodes with a constant function or a known pointee take their value.

The game works unchanged on DAGs, which the reachability engine relies on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum

import numba
import numpy as np

from .errors import BudgetExceeded

LEAF, AND, OR, NOT = 0, 1, 2, 3
F, T, UNKNOWN = 0, 1, 2
CONST_F, CONST_T, IDENTITY, NEGATION = 0, 1, 2, 3

OP_NAMES = {LEAF: "leaf", AND: "and", OR: "or", NOT: "not"}
PEBBLE_C, PEBBLE_C0 = 4, 2


class Condf(IntEnum):
    CONST_F = CONST_F
    CONST_T = CONST_T
    IDENTITY = IDENTITY
    NEGATION = NEGATION


# compose[f, g] is f after g; apply[f, v] is f(v) for known v
COMPOSE = np.array([
    [CONST_F, CONST_F, CONST_F, CONST_F],
    [CONST_T, CONST_T, CONST_T, CONST_T],
    [CONST_F, CONST_T, IDENTITY, NEGATION],
    [CONST_T, CONST_F, NEGATION, IDENTITY],
], dtype=np.int8)
APPLY = np.array([[F, F], [T, T], [F, T], [T, F]], dtype=np.int8)
# DISPATCH[op, known child value]
DISPATCH = np.array([
    [IDENTITY, IDENTITY],
    [CONST_F, IDENTITY],   # AND: known F forces F, known T passes the other child
    [IDENTITY, CONST_T],   # OR: known F passes the other child, known T forces T
    [NEGATION, NEGATION],
], dtype=np.int8)


def compose(f: int, g: int) -> Condf:
    return Condf(COMPOSE[f, g])


def apply_condf(f: int, v: int) -> int:
    return int(APPLY[f, v])


@dataclass(frozen=True, eq=False)
class PebbleTree:
    """Gate/leaf arrays.  ``left``/``right`` are child indices or -1.

    NOT gates use ``left`` only.  Several roots are allowed (a forest, or a
    DAG with shared children).
    """

    kind: np.ndarray
    left: np.ndarray
    right: np.ndarray
    leaf_value: np.ndarray
    root: int = 0

    def __post_init__(self):
        m = len(self.kind)
        if m == 0:
            raise ValueError("a pebble tree needs at least one node")
        for name in ("left", "right", "leaf_value"):
            if len(getattr(self, name)) != m:
                raise ValueError(f"{name} has the wrong length")
        k = self.kind
        binary = (k == AND) | (k == OR)
        if np.any(binary & ((self.left < 0) | (self.right < 0))):
            raise ValueError("binary gates need two children")
        if np.any((k == NOT) & ((self.left < 0) | (self.right >= 0))):
            raise ValueError("NOT gates need exactly one child")
        if np.any((k == LEAF) & ((self.left >= 0) | (self.right >= 0))):
            raise ValueError("leaves have no children")

    @property
    def m(self) -> int:
        return len(self.kind)

    @classmethod
    def from_nested(cls, expr) -> "PebbleTree":
        """Build from nested tuples: ``True``/``False``, ``("not", e)``, ``("and"|"or", a, b)``."""
        kind, left, right, val = [], [], [], []

        def add(k, lv=0):
            kind.append(k)
            left.append(-1)
            right.append(-1)
            val.append(lv)
            return len(kind) - 1

        root = add(LEAF)
        stack = [(expr, root)]
        while stack:
            e, v = stack.pop()
            if isinstance(e, (bool, np.bool_)) or e in (0, 1):
                kind[v], val[v] = LEAF, int(bool(e))
                continue
            op = e[0]
            if op == "not":
                kind[v] = NOT
                c = add(LEAF)
                left[v] = c
                stack.append((e[1], c))
            else:
                kind[v] = AND if op == "and" else OR
                a, b = add(LEAF), add(LEAF)
                left[v], right[v] = a, b
                stack.append((e[1], a))
                stack.append((e[2], b))
        return cls(np.array(kind, np.int8), np.array(left, np.int64), np.array(right, np.int64),
                   np.array(val, np.int8), root)


@dataclass(eq=False)
class PebbleState:
    value: np.ndarray
    ptr: np.ndarray
    condf: np.ndarray

    @classmethod
    def initial(cls, t: PebbleTree) -> "PebbleState":
        value = np.where(t.kind == LEAF, t.leaf_value, UNKNOWN).astype(np.int8)
        return cls(value, np.arange(t.m, dtype=np.int64), np.full(t.m, IDENTITY, dtype=np.int8))

    def copy(self) -> "PebbleState":
        return PebbleState(self.value.copy(), self.ptr.copy(), self.condf.copy())

    def all_known(self) -> bool:
        return not np.any(self.value == UNKNOWN)


def pebble_budget(m: int, c: int = PEBBLE_C, c0: int = PEBBLE_C0) -> int:
    return c * math.ceil(math.log2(m)) + c0 if m > 1 else c0


@numba.njit(cache=True)
def _activate(kind, left, right, value, ptr, condf, dispatch, out_ptr, out_condf):
    for v in range(kind.shape[0]):
        out_ptr[v] = ptr[v]
        out_condf[v] = condf[v]
        k = kind[v]
        if k == LEAF or value[v] != UNKNOWN or ptr[v] != v:
            continue
        if k == NOT:
            out_ptr[v] = left[v]
            out_condf[v] = NEGATION
            continue
        a, b = left[v], right[v]
        if value[a] != UNKNOWN:
            out_ptr[v] = b
            out_condf[v] = dispatch[k, value[a]]
        elif value[b] != UNKNOWN:
            out_ptr[v] = a
            out_condf[v] = dispatch[k, value[b]]


@numba.njit(cache=True)
def _square(ptr, condf, comp, out_ptr, out_condf):
    for v in range(ptr.shape[0]):
        p = ptr[v]
        out_ptr[v] = ptr[p]
        out_condf[v] = comp[condf[v], condf[p]]


@numba.njit(cache=True)
def _pebble(value, ptr, condf, app, out_value):
    changed = 0
    for v in range(value.shape[0]):
        out_value[v] = value[v]
        if value[v] != UNKNOWN:
            continue
        f = condf[v]
        if f == CONST_F or f == CONST_T:
            out_value[v] = app[f, 0]
            changed += 1
        elif value[ptr[v]] != UNKNOWN:
            out_value[v] = app[f, value[ptr[v]]]
            changed += 1
    return changed


def activate(s: PebbleState, t: PebbleTree) -> PebbleState:
    out = s.copy()
    _activate(t.kind, t.left, t.right, s.value, s.ptr, s.condf, DISPATCH, out.ptr, out.condf)
    return out


def square(s: PebbleState) -> PebbleState:
    out = s.copy()
    _square(s.ptr, s.condf, COMPOSE, out.ptr, out.condf)
    return out


def pebble_step(s: PebbleState) -> PebbleState:
    out = s.copy()
    _pebble(s.value, s.ptr, s.condf, APPLY, out.value)
    return out


@numba.njit(cache=True)
def _run(kind, left, right, leaf_value, budget, dispatch, comp, app):
    m = kind.shape[0]
    value = np.empty(m, dtype=np.int8)
    unknown = 0
    for v in range(m):
        if kind[v] == LEAF:
            value[v] = leaf_value[v]
        else:
            value[v] = UNKNOWN
            unknown += 1
    ptr = np.arange(m)
    condf = np.full(m, IDENTITY, dtype=np.int8)
    ptr2 = np.empty_like(ptr)
    condf2 = np.empty_like(condf)
    value2 = np.empty_like(value)
    rounds = 0
    while unknown > 0 and rounds < budget:
        _activate(kind, left, right, value, ptr, condf, dispatch, ptr2, condf2)
        _square(ptr2, condf2, comp, ptr, condf)
        unknown -= _pebble(value, ptr, condf, app, value2)
        value, value2 = value2, value
        rounds += 1
    return value, rounds, unknown


def evaluate_all(t: PebbleTree, budget: int | None = None) -> tuple[np.ndarray, int]:
    """Values of every node (0/1) and the number of rounds used."""
    if budget is None:
        budget = pebble_budget(t.m)
    value, rounds, unknown = _run(t.kind, t.left, t.right, t.leaf_value, budget,
                                  DISPATCH, COMPOSE, APPLY)
    if unknown:
        raise BudgetExceeded(f"{unknown} node values unknown after {rounds} rounds")
    return value, int(rounds)


def evaluate(t: PebbleTree, budget_c: int = PEBBLE_C, budget_c0: int = PEBBLE_C0) -> tuple[bool, int]:
    value, rounds = evaluate_all(t, pebble_budget(t.m, budget_c, budget_c0))
    return bool(value[t.root]), rounds


def evaluate_recursive(t: PebbleTree) -> np.ndarray:
    """Serial post-order evaluation of every node; the oracle for the game."""
    m = t.m
    value = np.full(m, -1, dtype=np.int8)
    for start in range(m):
        if value[start] >= 0:
            continue
        stack = [start]
        while stack:
            v = stack[-1]
            if value[v] >= 0:
                stack.pop()
                continue
            k = t.kind[v]
            if k == LEAF:
                value[v] = t.leaf_value[v]
                stack.pop()
                continue
            kids = (t.left[v],) if k == NOT else (t.left[v], t.right[v])
            pending = [c for c in kids if value[c] < 0]
            if pending:
                stack.extend(pending)
                continue
            if k == NOT:
                value[v] = 1 - value[kids[0]]
            elif k == AND:
                value[v] = value[kids[0]] & value[kids[1]]
            else:
                value[v] = value[kids[0]] | value[kids[1]]
            stack.pop()
    return value
