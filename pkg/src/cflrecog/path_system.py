"""Recognition through dependency graphs and reachability.

Nodes are items ``[A, i, j]``.  Given a marked set ``X`` of items known to
be realizable, the dependency graph ``DG(X)`` has an edge ``z -> x`` when
``z`` is unmarked and some marked ``y`` completes a rule with ``x``:
``R(x, y, z)`` or ``R(y, x, z)``.  Every node that reaches a marked node is
realizable.  For unambiguous grammars the part of the graph that reaches
the marked set has unique paths, so reachability is the value of an
OR-formula and the pebble game evaluates it in logarithmically many rounds.

``recognize_unambiguous`` repeats ``X <- Reach(DG(X))`` at most
``ceil(log2 n)`` times.  ``recognize_linear`` needs one reach on the graph of
linear rules, where every node has at most two successors.

Dense item ids are ``(A * (n + 2) + i) * (n + 2) + j``.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable

import numba
import numpy as np

from . import pebble
from .errors import AmbiguityViolation, NotCnf, NotLinear
from .grammar import Cfg, as_input, check_linear, compile_cnf
from .items import Item
from .report import ResourceReport


# ---------------------------------------------------------------- relation and base set

def relation_r(x: Item, y: Item, z: Item, g: Cfg) -> bool:
    """True iff ``z = [A,i,j]``, ``x = [B,i,k]``, ``y = [C,k+1,j]`` and ``A -> B C``."""
    if not g.is_cnf:
        raise NotCnf("relation_r needs a CNF grammar")
    if not (x.i == z.i and y.j == z.j and y.i == x.j + 1 and x.i <= x.j and y.i <= y.j):
        return False
    return any(p.lhs == z.nt and len(p.rhs) == 2 and p.names == (x.nt, y.nt)
               for p in g.productions)


def initial_marked(g: Cfg, w) -> frozenset[Item]:
    w = as_input(w, g)
    out = set()
    for p in g.productions:
        if len(p.rhs) == 1 and p.rhs[0].terminal:
            for i, s in enumerate(w, start=1):
                if s == p.rhs[0].name:
                    out.add(Item(p.lhs, i, i))
    return frozenset(out)


# ---------------------------------------------------------------- graphs

@dataclass(frozen=True)
class GornAddress:
    bits: int = 0
    length: int = 0

    def child(self, b: int) -> "GornAddress":
        return GornAddress((self.bits << 1) + b, self.length + 1)

    def __str__(self):
        return format(self.bits, f"0{self.length}b") if self.length else "ε"


@dataclass(frozen=True, eq=False)
class NodeSpace:
    """Maps graph node numbers to items; ``ids`` holds dense item ids."""

    nts: tuple[str, ...]
    n: int
    ids: np.ndarray

    def item(self, v: int) -> Item:
        w = self.n + 2
        a, rest = divmod(int(self.ids[v]), w * w)
        i, j = divmod(rest, w)
        return Item(self.nts[a], i, j)


@dataclass(frozen=True, eq=False)
class DepGraph:
    """Directed graph with sorted, duplicate-free edge arrays.

    After :func:`binarize` the helper nodes follow the original ones;
    ``owner[h]`` is the original node a helper was split from and
    ``gorn_len[h]`` the length of its address below that node.
    """

    n_nodes: int
    src: np.ndarray
    dst: np.ndarray
    helper: np.ndarray = None
    owner: np.ndarray = None
    gorn_len: np.ndarray = None
    space: NodeSpace | None = None
    _csr: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.helper is None:
            object.__setattr__(self, "helper", np.zeros(self.n_nodes, dtype=np.bool_))
            object.__setattr__(self, "owner", np.full(self.n_nodes, -1, dtype=np.int64))
            object.__setattr__(self, "gorn_len", np.zeros(self.n_nodes, dtype=np.int64))

    @classmethod
    def from_edges(cls, n_nodes: int, edges: Iterable[tuple[int, int]], space=None) -> "DepGraph":
        e = np.array(sorted(set((int(a), int(b)) for a, b in edges)), dtype=np.int64).reshape(-1, 2)
        if e.size and (e.min() < 0 or e.max() >= n_nodes):
            raise ValueError("edge endpoint out of range")
        return cls(n_nodes, e[:, 0].copy(), e[:, 1].copy(), space=space)

    @property
    def n_edges(self) -> int:
        return len(self.src)

    @property
    def n_original(self) -> int:
        return int(self.n_nodes - np.count_nonzero(self.helper))

    def edge_set(self) -> set[tuple[int, int]]:
        return set(zip(self.src.tolist(), self.dst.tolist()))

    def out_degree(self) -> np.ndarray:
        return np.bincount(self.src, minlength=self.n_nodes)

    def csr(self):
        if "fwd" not in self._csr:
            indptr = np.zeros(self.n_nodes + 1, dtype=np.int64)
            np.cumsum(np.bincount(self.src, minlength=self.n_nodes), out=indptr[1:])
            self._csr["fwd"] = (indptr, self.dst)
        return self._csr["fwd"]

    def successors(self, v: int) -> np.ndarray:
        indptr, adj = self.csr()
        return adj[indptr[v]:indptr[v + 1]]

    def item(self, v: int) -> Item:
        if self.space is None or self.helper[v]:
            raise KeyError(f"node {v} has no item")
        return self.space.item(v)

    def gorn(self, v: int) -> GornAddress:
        """Address of a helper below its owner; original nodes are the root ``ε``."""
        a = GornAddress()
        for _ in range(int(self.gorn_len[v])):
            a = a.child(1)
        return a


@numba.njit(cache=True)
def _binarize_kernel(n, indptr, adj):
    """Edges come out sorted: original nodes first, then helpers in id order."""
    extra = 0
    n_edges = 0
    for v in range(n):
        d = indptr[v + 1] - indptr[v]
        if d > 2:
            extra += d - 2
            n_edges += 2 * (d - 1)
        else:
            n_edges += d
    src = np.empty(n_edges, dtype=np.int64)
    dst = np.empty(n_edges, dtype=np.int64)
    owner = np.full(n + extra, -1, dtype=np.int64)
    glen = np.zeros(n + extra, dtype=np.int64)
    slot = np.full(n, -1, dtype=np.int64)
    e = 0
    for v in range(n):
        a, b = indptr[v], indptr[v + 1]
        k = 2 if b - a > 2 else b - a
        for q in range(a, a + k):
            src[e] = v
            dst[e] = adj[q]
            e += 1
        if b - a > 2:
            slot[v] = e - 1
    h = n
    for v in range(n):
        a, b = indptr[v], indptr[v + 1]
        if b - a <= 2:
            continue
        # v keeps adj[a] and points at its first helper in place of adj[a + 1]
        dst[slot[v]] = h
        for q in range(a + 1, b - 2):
            owner[h] = v
            glen[h] = q - a
            src[e] = h
            dst[e] = adj[q]
            src[e + 1] = h
            dst[e + 1] = h + 1
            e += 2
            h += 1
        owner[h] = v
        glen[h] = b - 2 - a
        src[e] = h
        dst[e] = adj[b - 2]
        src[e + 1] = h
        dst[e + 1] = adj[b - 1]
        e += 2
        h += 1
    return src, dst, owner, glen


def binarize(d: DepGraph) -> DepGraph:
    """Split out-degree ``k > 2`` into a right-branching chain of ``k - 2`` helpers."""
    indptr, adj = d.csr()
    src, dst, owner, glen = _binarize_kernel(d.n_nodes, indptr, adj)
    m = len(owner)
    helper = np.zeros(m, dtype=np.bool_)
    helper[d.n_nodes:] = True
    helper[:d.n_nodes] = d.helper
    owner[:d.n_nodes] = d.owner
    glen[:d.n_nodes] = d.gorn_len
    return DepGraph(m, src, dst, helper, owner, glen, d.space)


# ---------------------------------------------------------------- reachability

@numba.njit(cache=True)
def _reverse_bfs(n, src, dst, seed):
    indeg = np.zeros(n + 1, dtype=np.int64)
    for e in range(src.shape[0]):
        indeg[dst[e] + 1] += 1
    for v in range(n):
        indeg[v + 1] += indeg[v]
    radj = np.empty(src.shape[0], dtype=np.int64)
    fill = indeg[:-1].copy()
    for e in range(src.shape[0]):
        radj[fill[dst[e]]] = src[e]
        fill[dst[e]] += 1
    out = seed.copy()
    queue = np.empty(n, dtype=np.int64)
    head = 0
    tail = 0
    for v in range(n):
        if out[v]:
            queue[tail] = v
            tail += 1
    while head < tail:
        v = queue[head]
        head += 1
        for q in range(indeg[v], indeg[v + 1]):
            u = radj[q]
            if not out[u]:
                out[u] = True
                queue[tail] = u
                tail += 1
    return out


@numba.njit(cache=True)
def _has_cycle(n, indptr, adj):
    indeg = np.zeros(n, dtype=np.int64)
    for q in range(adj.shape[0]):
        indeg[adj[q]] += 1
    stack = np.empty(n, dtype=np.int64)
    top = 0
    for v in range(n):
        if indeg[v] == 0:
            stack[top] = v
            top += 1
    seen = 0
    while top > 0:
        top -= 1
        v = stack[top]
        seen += 1
        for q in range(indptr[v], indptr[v + 1]):
            u = adj[q]
            indeg[u] -= 1
            if indeg[u] == 0:
                stack[top] = u
                top += 1
    return seen < n


@numba.njit(cache=True)
def _tree_check(n, indptr, adj, keep):
    """First ``(u, v)`` with two distinct ``u -> v`` paths inside ``keep``, else ``(-1, -1)``.

    Two such paths part ways at a node with two successors in ``keep``, so
    only those nodes start a search.
    """
    stamp = np.full(n, -1, dtype=np.int64)
    stack = np.empty(adj.shape[0] + 1, dtype=np.int64)
    for w in range(n):
        if not keep[w]:
            continue
        branching = 0
        for q in range(indptr[w], indptr[w + 1]):
            if keep[adj[q]]:
                branching += 1
        if branching < 2:
            continue
        stamp[w] = w
        top = 0
        stack[top] = w
        top += 1
        while top > 0:
            top -= 1
            v = stack[top]
            for q in range(indptr[v], indptr[v + 1]):
                u = adj[q]
                if not keep[u]:
                    continue
                if stamp[u] == w:
                    return w, u
                stamp[u] = w
                stack[top] = u
                top += 1
    return -1, -1


@numba.njit(cache=True)
def _or_tree(n, indptr, adj, marked):
    """Pebble arrays for the OR-formula of a graph with out-degree <= 2.

    Node ``n`` is a shared ``F`` leaf completing single-successor gates.
    """
    kind = np.zeros(n + 1, dtype=np.int8)
    left = np.full(n + 1, -1, dtype=np.int64)
    right = np.full(n + 1, -1, dtype=np.int64)
    value = np.zeros(n + 1, dtype=np.int8)
    for v in range(n):
        a, b = indptr[v], indptr[v + 1]
        if marked[v] or b == a:
            # a marked node is true whatever its successors are
            value[v] = 1 if marked[v] else 0
        else:
            kind[v] = 2
            left[v] = adj[a]
            right[v] = adj[a + 1] if b - a == 2 else n
    return kind, left, right, value


def _as_mask(marked, n: int) -> np.ndarray:
    if isinstance(marked, np.ndarray) and marked.dtype == np.bool_:
        if marked.shape != (n,):
            raise ValueError("marked mask has the wrong length")
        return marked
    mask = np.zeros(n, dtype=np.bool_)
    idx = np.fromiter((int(v) for v in marked), dtype=np.int64)
    if idx.size and (idx.min() < 0 or idx.max() >= n):
        raise ValueError("marked node out of range")
    mask[idx] = True
    return mask


def reach_serial_mask(d: DepGraph, marked) -> np.ndarray:
    return _reverse_bfs(d.n_nodes, d.src, d.dst, _as_mask(marked, d.n_nodes))


def reach_serial(d: DepGraph, marked) -> frozenset[int]:
    """Nodes with a path (possibly empty) to a marked node, by reverse BFS."""
    return frozenset(np.flatnonzero(reach_serial_mask(d, marked)).tolist())


@dataclass(frozen=True)
class ReachResult:
    mask: np.ndarray
    rounds: int
    pebble_nodes: int


def check_unique_paths(d: DepGraph, marked) -> None:
    """Raise :class:`AmbiguityViolation` unless the part of ``d`` that reaches
    ``marked`` is acyclic with at most one path between any two nodes."""
    mask = _as_mask(marked, d.n_nodes)
    indptr, adj = d.csr()
    if _has_cycle(d.n_nodes, indptr, adj):
        raise AmbiguityViolation("dependency graph has a cycle")
    keep = _reverse_bfs(d.n_nodes, d.src, d.dst, mask)
    u, v = _tree_check(d.n_nodes, indptr, adj, keep)
    if u >= 0:
        where = f"{d.item(u)} to {d.item(v)}" if d.space is not None else f"node {u} to node {v}"
        raise AmbiguityViolation(f"two distinct paths from {where}")


def reach_parallel_mask(d: DepGraph, marked) -> ReachResult:
    mask = _as_mask(marked, d.n_nodes)
    check_unique_paths(d, mask)
    b = binarize(d)
    indptr, adj = b.csr()
    bmarked = np.zeros(b.n_nodes, dtype=np.bool_)
    bmarked[:d.n_nodes] = mask
    kind, left, right, value = _or_tree(b.n_nodes, indptr, adj, bmarked)
    m = b.n_nodes + 1
    values, rounds = pebble.evaluate_all(pebble.PebbleTree(kind, left, right, value), pebble.pebble_budget(m))
    return ReachResult(values[:d.n_nodes].astype(np.bool_), rounds, m)


def reach_parallel(d: DepGraph, marked) -> tuple[frozenset[int], int]:
    """Reach via OR-formula evaluation on the binarized graph.

    Returns the reaching set and the pebble rounds used.
    """
    r = reach_parallel_mask(d, marked)
    return frozenset(np.flatnonzero(r.mask).tolist()), r.rounds


# ---------------------------------------------------------------- CNF dependency graphs

@numba.njit(cache=True)
def _cnf_edges(marked, binary, n_nts, n, fill, src, dst):
    w = n + 2
    e = 0
    for c in range(n_nts):
        for p in range(1, n + 1):
            for q in range(p, n + 1):
                if not marked[(c * w + p) * w + q]:
                    continue
                for r in range(binary.shape[0]):
                    a, lb, rc = binary[r, 0], binary[r, 1], binary[r, 2]
                    if rc == c:
                        # y = [C, p, q] on the right: z = [A, i, q], x = [B, i, p - 1]
                        for i in range(1, p):
                            z = (a * w + i) * w + q
                            if not marked[z]:
                                if fill:
                                    src[e] = z
                                    dst[e] = (lb * w + i) * w + p - 1
                                e += 1
                    if lb == c:
                        # y = [B, p, q] on the left: z = [A, p, j], x = [C, q + 1, j]
                        for j in range(q + 1, n + 1):
                            z = (a * w + p) * w + j
                            if not marked[z]:
                                if fill:
                                    src[e] = z
                                    dst[e] = (rc * w + q + 1) * w + j
                                e += 1
    return e


@numba.njit(cache=True)
def _compact_kernel(src, dst, size):
    """Relabel touched dense ids to ``0..m-1`` and sort and dedupe the edges."""
    remap = np.full(size, -1, dtype=np.int64)
    for e in range(src.shape[0]):
        remap[src[e]] = 0
        remap[dst[e]] = 0
    m = 0
    for v in range(size):
        if remap[v] == 0:
            remap[v] = m
            m += 1
    ids = np.empty(m, dtype=np.int64)
    for v in range(size):
        if remap[v] >= 0:
            ids[remap[v]] = v
    indptr = np.zeros(m + 1, dtype=np.int64)
    for e in range(src.shape[0]):
        indptr[remap[src[e]] + 1] += 1
    for v in range(m):
        indptr[v + 1] += indptr[v]
    fill = indptr[:-1].copy()
    adj = np.empty(src.shape[0], dtype=np.int64)
    for e in range(src.shape[0]):
        s = remap[src[e]]
        adj[fill[s]] = remap[dst[e]]
        fill[s] += 1
    out_src = np.empty(src.shape[0], dtype=np.int64)
    out_dst = np.empty(src.shape[0], dtype=np.int64)
    k = 0
    for v in range(m):
        a, b = indptr[v], indptr[v + 1]
        for q in range(a + 1, b):
            x = adj[q]
            r = q - 1
            while r >= a and adj[r] > x:
                adj[r + 1] = adj[r]
                r -= 1
            adj[r + 1] = x
        for q in range(a, b):
            if q == a or adj[q] != adj[q - 1]:
                out_src[k] = v
                out_dst[k] = adj[q]
                k += 1
    return ids, out_src[:k].copy(), out_dst[:k].copy()


def _compact(src, dst, size, space_nts, n, marked_dense):
    ids, s, t = _compact_kernel(src, dst, size)
    d = DepGraph(len(ids), s, t, space=NodeSpace(space_nts, n, ids))
    return d, marked_dense[ids]


def _dense_marked(items: Iterable[Item], nts, n) -> np.ndarray:
    w = n + 2
    out = np.zeros(len(nts) * w * w, dtype=np.bool_)
    ni = {a: k for k, a in enumerate(nts)}
    for it in items:
        out[(ni[it.nt] * w + it.i) * w + it.j] = True
    return out


def _cnf_graph(cg, n, marked_dense):
    empty = np.empty(0, dtype=np.int64)
    cnt = _cnf_edges(marked_dense, cg.binary, cg.n_nts, n, False, empty, empty)
    src = np.empty(cnt, dtype=np.int64)
    dst = np.empty(cnt, dtype=np.int64)
    _cnf_edges(marked_dense, cg.binary, cg.n_nts, n, True, src, dst)
    return _compact(src, dst, len(marked_dense), cg.nts, n, marked_dense)


def build_dep_graph(g: Cfg, w, x: Iterable[Item]) -> DepGraph:
    """``DG(X)`` over the items touched by at least one edge."""
    cg = compile_cnf(g)
    w = as_input(w, g)
    d, _ = _cnf_graph(cg, len(w), _dense_marked(x, cg.nts, len(w)))
    return d


def _base_dense(cg, w) -> np.ndarray:
    n = len(w)
    width = n + 2
    out = np.zeros(cg.n_nts * width * width, dtype=np.bool_)
    tm = cg.term_matrix(w)
    for a in range(cg.n_nts):
        for i in np.flatnonzero(tm[a]):
            out[(a * width + i) * width + i] = True
    return out


@lru_cache(maxsize=64)
def _edge_ledger_constant(g: Cfg) -> int:
    cg = compile_cnf(g)
    pairs = {(int(a), int(b)) for a, b, _ in cg.binary} | {(int(a), int(c)) for a, _, c in cg.binary}
    return len(pairs)


def edge_cell_count(g: Cfg, n: int) -> int:
    """(outer item, split, inner nonterminal) triples: ``D * sum over spans of (len - 1)``."""
    return _edge_ledger_constant(g) * n * (n * n - 1) // 6


def c3_constant(g: Cfg) -> int:
    return 2 * len(compile_cnf(g).binary)


def c2_constant(g: Cfg) -> int:
    return len(g.nonterminals)


def _ceil_log2(n: int) -> int:
    return math.ceil(math.log2(n)) if n > 1 else 0


def recognize_unambiguous(g: Cfg, w) -> ResourceReport:
    start = time.perf_counter()
    cg = compile_cnf(g)
    w = as_input(w, g)
    n = len(w)
    if n == 0:
        return ResourceReport("unambiguous", cg.has_empty, 0, rounds_used=0, item_cells=0,
                              edge_cells=0, pebble_rounds=0, reach_calls=0, graph_nodes=0,
                              wall_time=time.perf_counter() - start)
    width = n + 2
    goal = (0 * width + 1) * width + n
    marked = _base_dense(cg, w)
    iterations = rounds = largest = 0
    for _ in range(_ceil_log2(n)):
        if marked[goal]:
            break
        d, sub = _cnf_graph(cg, n, marked)
        if d.n_nodes == 0:
            break
        r = reach_parallel_mask(d, sub)
        iterations += 1
        rounds += r.rounds
        largest = max(largest, r.pebble_nodes)
        grown = d.space.ids[r.mask & ~sub]
        if grown.size == 0:
            break
        marked[grown] = True
    return ResourceReport(
        "unambiguous", bool(marked[goal]), n, rounds_used=iterations,
        item_cells=cg.n_nts * n * (n + 1) // 2, edge_cells=edge_cell_count(g, n),
        pebble_rounds=rounds, reach_calls=iterations, graph_nodes=largest,
        wall_time=time.perf_counter() - start)


# ---------------------------------------------------------------- linear grammars

@dataclass(frozen=True, eq=False)
class CompiledLinear:
    nts: tuple[str, ...]
    terms: tuple[str, ...]
    left: np.ndarray     # (L, 3) rows (A, a, B) for A -> a B
    right: np.ndarray    # (L, 3) rows (A, B, a) for A -> B a
    unary: np.ndarray    # (N, T) bool
    has_empty: bool

    @property
    def n_nts(self) -> int:
        return len(self.nts)

    def encode(self, w) -> np.ndarray:
        idx = {t: k for k, t in enumerate(self.terms)}
        return np.array([idx[s] for s in w], dtype=np.int64)


@lru_cache(maxsize=64)
def compile_linear(g: Cfg) -> CompiledLinear:
    if not check_linear(g, allow_empty_start=True):
        raise NotLinear("every rule must be A -> a B, A -> B a or A -> a")
    nts = tuple(g.ordered_nonterminals())
    terms = tuple(g.ordered_terminals())
    ni = {a: k for k, a in enumerate(nts)}
    ti = {t: k for k, t in enumerate(terms)}
    left, right = [], []
    unary = np.zeros((len(nts), len(terms)), dtype=np.bool_)
    for p in g.productions:
        r = p.rhs
        if len(r) == 1:
            unary[ni[p.lhs], ti[r[0].name]] = True
        elif len(r) == 2 and r[0].terminal:
            left.append((ni[p.lhs], ti[r[0].name], ni[r[1].name]))
        elif len(r) == 2:
            right.append((ni[p.lhs], ni[r[0].name], ti[r[1].name]))
    return CompiledLinear(nts, terms, np.array(left, np.int64).reshape(-1, 3),
                          np.array(right, np.int64).reshape(-1, 3), unary, g.has_empty_rule)


@numba.njit(cache=True)
def _linear_edges(code, left, right, n_nts, n, fill, src, dst):
    w = n + 2
    e = 0
    for a in range(n_nts):
        for i in range(1, n):
            for j in range(i + 1, n + 1):
                z = (a * w + i) * w + j
                for r in range(left.shape[0]):
                    if left[r, 0] == a and left[r, 1] == code[i - 1]:
                        if fill:
                            src[e] = z
                            dst[e] = (left[r, 2] * w + i + 1) * w + j
                        e += 1
                for r in range(right.shape[0]):
                    if right[r, 0] == a and right[r, 2] == code[j - 1]:
                        if fill:
                            src[e] = z
                            dst[e] = (right[r, 1] * w + i) * w + j - 1
                        e += 1
    return e


def build_linear_graph(g: Cfg, w) -> tuple[DepGraph, np.ndarray]:
    """``DG(T)`` from linear rules, and the marked mask over its nodes."""
    cl = compile_linear(g)
    w = as_input(w, g)
    n = len(w)
    code = cl.encode(w)
    width = n + 2
    marked = np.zeros(cl.n_nts * width * width, dtype=np.bool_)
    for a in range(cl.n_nts):
        for i in np.flatnonzero(cl.unary[a, code]) + 1:
            marked[(a * width + i) * width + i] = True
    empty = np.empty(0, dtype=np.int64)
    cnt = _linear_edges(code, cl.left, cl.right, cl.n_nts, n, False, empty, empty)
    src = np.empty(cnt, dtype=np.int64)
    dst = np.empty(cnt, dtype=np.int64)
    _linear_edges(code, cl.left, cl.right, cl.n_nts, n, True, src, dst)
    return _compact(src, dst, len(marked), cl.nts, n, marked)


def recognize_linear(g: Cfg, w) -> ResourceReport:
    start = time.perf_counter()
    cl = compile_linear(g)
    w = as_input(w, g)
    n = len(w)
    cells = cl.n_nts * n * (n + 1) // 2
    if n == 0:
        return ResourceReport("linear", cl.has_empty, 0, rounds_used=0, item_cells=0,
                              pebble_rounds=0, reach_calls=0, graph_nodes=0,
                              wall_time=time.perf_counter() - start)
    goal_item = Item(cl.nts[0], 1, n)
    if n == 1:
        accepted = bool(cl.unary[0, cl.encode(w)[0]])
        return ResourceReport("linear", accepted, 1, rounds_used=0, item_cells=cells,
                              pebble_rounds=0, reach_calls=0, graph_nodes=0,
                              wall_time=time.perf_counter() - start)
    d, sub = build_linear_graph(g, w)
    width = n + 2
    goal = (0 * width + goal_item.i) * width + goal_item.j
    r = reach_parallel_mask(d, sub)
    pos = np.searchsorted(d.space.ids, goal)
    accepted = bool(pos < d.n_nodes and d.space.ids[pos] == goal and r.mask[pos])
    return ResourceReport("linear", accepted, n, rounds_used=1, item_cells=cells,
                          pebble_rounds=r.rounds, reach_calls=1, graph_nodes=r.pebble_nodes,
                          wall_time=time.perf_counter() - start)
