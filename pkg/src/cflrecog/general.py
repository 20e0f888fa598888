"""General recognizer: a synchronous three-valued fixed point over items and slashed items.

Every undetermined cell is re-evaluated each round as the disjunction,
over its decompositions, of the conjunction of the two sub-cells read from
the previous round.  Cells start at ``⊥`` except the base cases, and only
ever move from ``⊥`` to ``0`` or ``1``.

Two implementations of a round are provided.  ``solve_round_reference``
is a literal transcription (enumerate decompositions, fold with ``or3`` /
``and3``) meant for small inputs and tests.  ``solve_round`` computes the
same table with a compiled kernel: cells that become ``1`` are found by
joining known-true sub-cells, and cells that become ``0`` are the ones with
no decomposition whose two sub-cells are both still possibly true.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence, Union

import numba
import numpy as np

from . import _general_kernels as _k
from .errors import InputTooLong
from .grammar import Cfg, CompiledCnf, Production, as_input, compile_cnf
from .items import Item, SlashedItem, Truth3, and3, or3
from .report import ResourceReport

F, T, BOT, NA = 0, 1, 2, 3
DEFAULT_BUDGET_C = 4
DEFAULT_MAX_N = 16

Cell = Union[Item, SlashedItem]


# ---------------------------------------------------------------- decompositions

@dataclass(frozen=True)
class ItemSplit:
    rule: Production
    k: int

    def operands(self, cell: Item, g: Cfg):
        b, c = self.rule.rhs
        return Item(b.name, cell.i, self.k - 1), Item(c.name, self.k, cell.j)


@dataclass(frozen=True)
class ItemGuess:
    inner: Item

    def operands(self, cell: Item, g: Cfg):
        return SlashedItem(cell, self.inner), self.inner


@dataclass(frozen=True)
class SlashSplit:
    rule: Production
    p: int
    side: str  # "left": the hole sits under the rule's left child

    def operands(self, cell: SlashedItem, g: Cfg):
        o, hole = cell
        a, b = (s.name for s in self.rule.rhs)
        if self.side == "left":
            return _slashed_or_const(Item(a, o.i, self.p - 1), hole), Item(b, self.p, o.j)
        return Item(a, o.i, self.p - 1), _slashed_or_const(Item(b, self.p, o.j), hole)


@dataclass(frozen=True)
class SlashGuess:
    mid: Item

    def operands(self, cell: SlashedItem, g: Cfg):
        return SlashedItem(cell.outer, self.mid), SlashedItem(self.mid, cell.inner)


Decomposition = Union[ItemSplit, ItemGuess, SlashSplit, SlashGuess]


def _slashed_or_const(outer: Item, inner: Item):
    # a hole covering the whole span is realizable exactly when the labels agree
    if outer.span == inner.span:
        return Truth3.T if outer.nt == inner.nt else Truth3.F
    return SlashedItem(outer, inner)


def _is_base_slashed(sl: SlashedItem) -> bool:
    o, q = sl
    return (q.i == o.i and q.j == o.j - 1) or (q.i == o.i + 1 and q.j == o.j)


def enumerate_decompositions(cell: Cell, g: Cfg, n: int) -> list[Decomposition]:
    nts = compile_cnf(g).nts
    binary = [p for p in g.productions if len(p.rhs) == 2]
    out: list[Decomposition] = []
    if isinstance(cell, Item):
        x, i, j = cell
        if i == j:
            return out
        for rule in (r for r in binary if r.lhs == x):
            out.extend(ItemSplit(rule, k) for k in range(i + 1, j + 1))
        for y in nts:
            for k in range(i, j + 1):
                for l in range(k, j + 1):
                    if (k, l) != (i, j):
                        out.append(ItemGuess(Item(y, k, l)))
        return out
    if _is_base_slashed(cell):
        return out
    (x, i, j), (_, k, l) = cell
    for rule in (r for r in binary if r.lhs == x):
        out.extend(SlashSplit(rule, p, "left") for p in range(l + 1, j + 1))
        out.extend(SlashSplit(rule, p, "right") for p in range(i + 1, k + 1))
    for z in nts:
        for p in range(i, k + 1):
            for q in range(l, j + 1):
                if (p, q) != (i, j) and (p, q) != (k, l):
                    out.append(SlashGuess(Item(z, p, q)))
    return out


# ---------------------------------------------------------------- table

class SpanIndex:
    """Dense numbering of the spans ``1 <= i <= j <= n``."""

    def __init__(self, n: int):
        self.n = n
        self.sidx = np.full((n + 2, n + 2), -1, dtype=np.int64)
        spans = [(i, j) for i in range(1, n + 1) for j in range(i, n + 1)]
        for s, (i, j) in enumerate(spans):
            self.sidx[i, j] = s
        self.spans = spans
        self.spi = np.array([i for i, _ in spans], dtype=np.int64)
        self.spj = np.array([j for _, j in spans], dtype=np.int64)

    def __len__(self):
        return len(self.spans)

    def __getitem__(self, ij) -> int:
        return int(self.sidx[ij[0], ij[1]])


class RecognitionTable:
    """Item and slashed-item cells for one input string.

    ``items[A, i, j]`` holds item cells (1-based indices) and
    ``slashed[X, s, Y, t]`` the slashed cells, with ``s`` and ``t`` span
    numbers from :class:`SpanIndex`.  Non-nested span pairs hold ``NA``.
    """

    def __init__(self, cg: CompiledCnf, w: tuple[str, ...], items, slashed, round_: int = 0):
        self.cg = cg
        self.w = w
        self.n = len(w)
        self.index = _span_index(self.n)
        self.items = items
        self.slashed = slashed
        self.round = round_

    def _nt(self, name: str) -> int:
        return self.cg.nt_index(name)

    def value(self, cell) -> Truth3:
        if isinstance(cell, Truth3):
            return cell
        if isinstance(cell, Item):
            return Truth3(self.items[self._nt(cell.nt), cell.i, cell.j])
        o, q = cell
        v = self.slashed[self._nt(o.nt), self.index[o.span], self._nt(q.nt), self.index[q.span]]
        if v == NA:
            raise KeyError(f"{cell} is not a valid slashed item")
        return Truth3(v)

    __getitem__ = value

    def item_cells(self):
        for a, name in enumerate(self.cg.nts):
            for i, j in self.index.spans:
                yield Item(name, i, j)

    def slashed_cells(self):
        nts = self.cg.nts
        for x in nts:
            for (i, j) in self.index.spans:
                for y in nts:
                    for (k, l) in self.index.spans:
                        if i <= k <= l <= j and (k, l) != (i, j):
                            yield SlashedItem(Item(x, i, j), Item(y, k, l))

    def undetermined(self) -> int:
        return int(np.count_nonzero(self.items[:, 1:, 1:] == BOT)
                   + np.count_nonzero(self.slashed == BOT))

    def copy(self) -> "RecognitionTable":
        return RecognitionTable(self.cg, self.w, self.items.copy(), self.slashed.copy(), self.round)

    def same_cells(self, other: "RecognitionTable") -> bool:
        return (np.array_equal(self.items, other.items)
                and np.array_equal(self.slashed, other.slashed))

    def accepted(self) -> bool:
        return self.items[0, 1, self.n] == T


@lru_cache(maxsize=32)
def _span_index(n: int) -> SpanIndex:
    return SpanIndex(n)


def base_item_value(it: Item, w: Sequence[str], g: Cfg) -> Truth3:
    if it.i != it.j:
        return Truth3.BOT
    return Truth3.T if any(p.lhs == it.nt and p.names == (w[it.i - 1],) for p in g.productions) \
        else Truth3.F


def base_slashed_value(sl: SlashedItem, w: Sequence[str], g: Cfg) -> Truth3:
    (x, i, j), (y, k, l) = sl
    if not _is_base_slashed(sl):
        return Truth3.BOT
    unit = {(p.lhs, p.names[0]) for p in g.productions if len(p.rhs) == 1}
    for p in g.productions:
        if p.lhs != x or len(p.rhs) != 2:
            continue
        b, c = p.names
        if k == i and l == j - 1 and b == y and (c, w[j - 1]) in unit:
            return Truth3.T
        if k == i + 1 and l == j and c == y and (b, w[i - 1]) in unit:
            return Truth3.T
    return Truth3.F


@numba.njit(cache=True)
def _init_kernel(term, binary, sidx, n_nts, n):
    size = (n * (n + 1)) // 2
    items = np.full((n_nts, n + 2, n + 2), NA, dtype=np.int8)
    for a in range(n_nts):
        for i in range(1, n + 1):
            items[a, i, i] = T if term[a, i] else F
            for j in range(i + 1, n + 1):
                items[a, i, j] = BOT
    sl = np.full((n_nts, size, n_nts, size), NA, dtype=np.int8)
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            so = sidx[i, j]
            for x in range(n_nts):
                for y in range(n_nts):
                    for k in range(i, j + 1):
                        for l in range(k, j + 1):
                            if k == i and l == j:
                                continue
                            sl[x, so, y, sidx[k, l]] = BOT
                    sl[x, so, y, sidx[i, j - 1]] = F
                    sl[x, so, y, sidx[i + 1, j]] = F
            for r in range(binary.shape[0]):
                x, b, c = binary[r, 0], binary[r, 1], binary[r, 2]
                if term[c, j]:
                    sl[x, so, b, sidx[i, j - 1]] = T
                if term[b, i]:
                    sl[x, so, c, sidx[i + 1, j]] = T
    return items, sl


def initial_table(g: Cfg, w) -> RecognitionTable:
    cg = compile_cnf(g)
    w = as_input(w, g)
    idx = _span_index(len(w))
    items, sl = _init_kernel(cg.term_matrix(w), cg.binary, idx.sidx, cg.n_nts, len(w))
    return RecognitionTable(cg, w, items, sl)


# ---------------------------------------------------------------- one round

def solve_round_reference(t: RecognitionTable, g: Cfg, w=None) -> RecognitionTable:
    """One synchronous round, transcribed directly from the decomposition rules."""
    new = t.copy()
    new.round = t.round + 1
    cells = list(t.item_cells()) + list(t.slashed_cells())
    nxt = {}
    for cell in cells:
        if t.value(cell) != Truth3.BOT:
            continue
        acc = Truth3.F
        for d in enumerate_decompositions(cell, g, t.n):
            a, b = d.operands(cell, g)
            acc = or3(acc, and3(t.value(a), t.value(b)))
        nxt[cell] = acc
    nid = t.cg.nt_index
    for cell, v in nxt.items():
        if isinstance(cell, Item):
            new.items[nid(cell.nt), cell.i, cell.j] = int(v)
        else:
            o, q = cell
            new.slashed[nid(o.nt), t.index[o.span], nid(q.nt), t.index[q.span]] = int(v)
    return new


def solve_round(t: RecognitionTable, g: Cfg = None, w=None) -> RecognitionTable:
    """One synchronous round; bit-identical to :func:`solve_round_reference`."""
    cg = t.cg
    new = t.copy()
    new.round = t.round + 1
    _advance(new, 1, stop_when_decided=False)
    return new


def _advance(t: RecognitionTable, budget: int, stop_when_decided: bool) -> int:
    cg, idx = t.cg, t.index
    run = _k.run_rounds_packed if cg.n_nts <= 64 else _k.run_rounds
    return int(run(t.items, t.slashed, idx.sidx, idx.spi, idx.spj, cg.binary,
                   cg.lhs_start, cg.n_nts, t.n, budget, stop_when_decided))


# ---------------------------------------------------------------- ledger

def round_budget(n: int, c: int = DEFAULT_BUDGET_C) -> int:
    return math.ceil(math.log2(n)) + c if n >= 1 else c


def c6_constant(g: Cfg) -> int:
    cg = compile_cnf(g)
    nn, pp = cg.n_nts, cg.n_productions
    return nn ** 3 + 2 * nn * nn * pp + nn * nn + nn * pp


@lru_cache(maxsize=256)
def _ledger(n_nts: int, n_binary: int, n: int) -> tuple[int, int, int]:
    item_cells = n_nts * n * (n + 1) // 2
    slashed_cells = 0
    pairs = 0
    for m in range(1, n + 1):
        count = n - m + 1  # outer spans of length m
        inner = m * (m + 1) // 2 - 1
        slashed_cells += count * inner * n_nts * n_nts
        if m >= 2:
            pairs += count * n_nts * n_nts * inner  # item guesses
        per_outer = 0
        for k in range(m):  # inner span offsets (k..l) inside 0..m-1
            for l in range(k, m):
                if (k, l) == (0, m - 1):
                    continue
                if (k == 0 and l == m - 2) or (k == 1 and l == m - 1):
                    continue  # base shapes carry no decompositions
                split = (m - 1 - l) + k
                guess = (k + 1) * (m - l) - 2
                per_outer += n_binary * n_nts * split + n_nts * n_nts * n_nts * guess
        pairs += count * per_outer
    # item splits: one per (rule, split point) for every non-base item span
    for m in range(2, n + 1):
        pairs += (n - m + 1) * n_binary * (m - 1)
    return item_cells, slashed_cells, pairs


def ledger(g: Cfg, n: int) -> tuple[int, int, int]:
    """``(item_cells, slashed_cells, decomposition_pairs)`` for length ``n``."""
    cg = compile_cnf(g)
    return _ledger(cg.n_nts, int(cg.binary.shape[0]), n)


# ---------------------------------------------------------------- driver

def iterate_rounds(g: Cfg, w, rounds: int, reference: bool = False):
    """Yield the initial table and the next ``rounds`` tables."""
    t = initial_table(g, w)
    yield t
    step = solve_round_reference if reference else solve_round
    for _ in range(rounds):
        t = step(t, g)
        yield t


def recognize(g: Cfg, w, round_budget_constant: int = DEFAULT_BUDGET_C,
              max_n: int | None = DEFAULT_MAX_N) -> ResourceReport:
    start = time.perf_counter()
    cg = compile_cnf(g)
    w = as_input(w, g)
    n = len(w)
    if max_n is not None and n > max_n:
        raise InputTooLong(f"input length {n} exceeds the general engine cap {max_n}")
    if n == 0:
        return ResourceReport("general", cg.has_empty, 0, rounds_used=0, item_cells=0,
                              slashed_cells=0, decomposition_pairs=0, undetermined_cells=0,
                              wall_time=time.perf_counter() - start)
    t = initial_table(g, w)
    rounds = _advance(t, round_budget(n, round_budget_constant), stop_when_decided=True)
    t.round = rounds
    item_cells, slashed_cells, pairs = ledger(g, n)
    return ResourceReport(
        "general", bool(t.accepted()), n, rounds_used=rounds, item_cells=item_cells,
        slashed_cells=slashed_cells, decomposition_pairs=pairs,
        undetermined_cells=t.undetermined(), wall_time=time.perf_counter() - start)
