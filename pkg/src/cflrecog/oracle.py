"""Serial ground truth: CYK, parse counting, parse trees and tree separators."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

import numba
import numpy as np

from .errors import NotCnf
from .grammar import Cfg, compile_cnf
from .items import Item


def _require_cnf(g: Cfg):
    if not g.is_cnf:
        raise NotCnf("grammar is not in Chomsky normal form")
    return compile_cnf(g)


@numba.njit(cache=True)
def _cyk_kernel(binary, leaf, n_nts, n):
    # half-open spans [i, e); nxt[A, i] has bit e and prv[A, e] has bit i
    # whenever A derives w[i:e]
    words = (n >> 6) + 1
    nxt = np.zeros((n_nts, n + 1, words), dtype=np.uint64)
    prv = np.zeros((n_nts, n + 1, words), dtype=np.uint64)
    tab = np.zeros((n_nts, n + 1, n + 1), dtype=np.bool_)
    one = np.uint64(1)
    for i in range(n):
        for a in range(n_nts):
            if leaf[a, i]:
                tab[a, i, i + 1] = True
                nxt[a, i, (i + 1) >> 6] |= one << np.uint64((i + 1) & 63)
                prv[a, i + 1, i >> 6] |= one << np.uint64(i & 63)
    for length in range(2, n + 1):
        for i in range(n - length + 1):
            e = i + length
            lo = (i + 1) >> 6
            hi = (e - 1) >> 6
            for r in range(binary.shape[0]):
                a = binary[r, 0]
                if tab[a, i, e]:
                    continue
                b = binary[r, 1]
                c = binary[r, 2]
                for wd in range(lo, hi + 1):
                    if nxt[b, i, wd] & prv[c, e, wd]:
                        tab[a, i, e] = True
                        nxt[a, i, e >> 6] |= one << np.uint64(e & 63)
                        prv[a, e, i >> 6] |= one << np.uint64(i & 63)
                        break
    return tab


def cyk_table(g: Cfg, w: Sequence[str]) -> np.ndarray:
    """Boolean table ``t[A, i, e]``: nonterminal index A derives ``w[i:e]`` (0-based, half-open)."""
    cg = _require_cnf(g)
    leaf = cg.term_matrix(w)[:, 1:].copy()
    return _cyk_kernel(cg.binary, leaf, cg.n_nts, len(w))


def cyk_recognize(g: Cfg, w: Sequence[str]) -> bool:
    cg = _require_cnf(g)
    if len(w) == 0:
        return cg.has_empty
    return bool(cyk_table(g, w)[0, 0, len(w)])


def realizable_items(g: Cfg, w: Sequence[str]) -> frozenset[Item]:
    cg = _require_cnf(g)
    tab = cyk_table(g, w)
    a, i, e = np.nonzero(tab)
    return frozenset(Item(cg.nts[x], y + 1, z) for x, y, z in zip(a, i, e))


def count_parses(g: Cfg, w: Sequence[str]) -> int:
    cg = _require_cnf(g)
    n = len(w)
    if n == 0:
        return int(cg.has_empty)
    nn = cg.n_nts
    leaf = cg.term_matrix(w)
    # cnt[i][e][A] for half-open spans
    cnt = [[None] * (n + 1) for _ in range(n + 1)]
    for i in range(n):
        cnt[i][i + 1] = [int(leaf[a, i + 1]) for a in range(nn)]
    rules = [tuple(int(x) for x in r) for r in cg.binary]
    for length in range(2, n + 1):
        for i in range(n - length + 1):
            e = i + length
            row = [0] * nn
            for k in range(i + 1, e):
                left, right = cnt[i][k], cnt[k][e]
                for a, b, c in rules:
                    if left[b] and right[c]:
                        row[a] += left[b] * right[c]
            cnt[i][e] = row
    return cnt[0][n][0]


@dataclass(frozen=True, eq=False)
class ParseTree:
    """A parse tree node; ``span`` is 1-based and inclusive."""

    label: str
    span: tuple[int, int]
    children: tuple["ParseTree", ...] = ()

    def preorder(self) -> Iterator["ParseTree"]:
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))

    def leaves(self) -> list[str]:
        return [t.label for t in self.preorder() if not t.children]

    def size(self) -> int:
        return sum(1 for _ in self.preorder())

    def __str__(self):
        if not self.children:
            return self.label
        return "(" + self.label + " " + " ".join(str(c) for c in self.children) + ")"


def extract_parse(g: Cfg, w: Sequence[str]) -> ParseTree | None:
    """Leftmost parse: smallest split first, then earliest rule."""
    cg = _require_cnf(g)
    n = len(w)
    if n == 0:
        return None
    tab = cyk_table(g, w)
    if not tab[0, 0, n]:
        return None
    leaf = cg.term_matrix(w)
    by_lhs = [cg.binary[cg.lhs_start[a]:cg.lhs_start[a + 1]] for a in range(cg.n_nts)]

    def choose(a, i, e):
        for k in range(i + 1, e):
            for _, b, c in by_lhs[a]:
                if tab[b, i, k] and tab[c, k, e]:
                    return k, b, c
        raise AssertionError("inconsistent CYK table")

    # build bottom-up from an explicit stack to survive deep trees
    built: dict[tuple[int, int, int], ParseTree] = {}
    stack = [(0, 0, n, False)]
    while stack:
        a, i, e, expanded = stack.pop()
        if e - i == 1:
            assert leaf[a, i + 1]
            term = ParseTree(w[i], (i + 1, i + 1))
            built[(a, i, e)] = ParseTree(cg.nts[a], (i + 1, e), (term,))
            continue
        k, b, c = choose(a, i, e)
        if expanded:
            built[(a, i, e)] = ParseTree(cg.nts[a], (i + 1, e),
                                         (built[(b, i, k)], built[(c, k, e)]))
        else:
            stack.append((a, i, e, True))
            stack.append((c, k, e, False))
            stack.append((b, i, k, False))
    return built[(0, 0, n)]


def subtree_sizes(t: ParseTree) -> dict[int, int]:
    sizes: dict[int, int] = {}
    order = list(t.preorder())
    for node in reversed(order):
        sizes[id(node)] = 1 + sum(sizes[id(c)] for c in node.children)
    return sizes


def separator_components(t: ParseTree, node: ParseTree, sizes=None) -> list[int]:
    """Sizes of the components left after deleting ``node`` from ``t``."""
    sizes = sizes or subtree_sizes(t)
    m = sizes[id(t)]
    comps = [sizes[id(c)] for c in node.children]
    rest = m - sizes[id(node)]
    if rest:
        comps.append(rest)
    return comps


def jordan_separator(t: ParseTree) -> ParseTree:
    """First node in pre-order whose removal leaves components of at most m/2 nodes."""
    sizes = subtree_sizes(t)
    m = sizes[id(t)]
    for node in t.preorder():
        if max(separator_components(t, node, sizes), default=0) * 2 <= m:
            return node
    raise AssertionError("every tree has a centroid")
