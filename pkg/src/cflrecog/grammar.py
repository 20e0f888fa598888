"""Grammar representation, the text format reader, and CNF normalization.

A grammar file holds one rule per line::

    # balanced parentheses
    S -> ( S ) S | ε

The left-hand side of the first rule is the start symbol unless a
``@start NAME`` line says otherwise.  Every symbol that appears on some
left-hand side is a nonterminal; everything else is a terminal.  A token
wrapped in single or double quotes is always a terminal, which is how
``|`` or ``->`` can be used as terminals.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    EmptyLanguage,
    GrammarError,
    GrammarSyntaxError,
    SymbolCollision,
    UndefinedStartSymbol,
    UnknownSymbol,
)

EPSILON_TOKENS = frozenset({"ε", "eps"})
ARROWS = ("->", "→")
RESERVED_CHAR = "$"


@dataclass(frozen=True, order=True)
class Symbol:
    name: str
    terminal: bool

    def __post_init__(self):
        if not self.name:
            raise GrammarError("symbol names must be non-empty")

    @property
    def kind(self) -> str:
        return "terminal" if self.terminal else "nonterminal"

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Production:
    lhs: str
    rhs: tuple[Symbol, ...] = ()

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(s.name for s in self.rhs)

    def __str__(self):
        body = " ".join(_quote(s) for s in self.rhs) if self.rhs else "ε"
        return f"{self.lhs} -> {body}"


@dataclass(frozen=True, eq=False)
class Cfg:
    """An immutable context-free grammar.

    ``is_cnf`` and ``is_linear`` are derived from the productions on
    construction. Productions keep their insertion order (duplicates are
    dropped), which fixes rule order for tie-breaking elsewhere; equality
    ignores that order.
    """

    terminals: frozenset[str]
    nonterminals: frozenset[str]
    productions: tuple[Production, ...]
    start: str
    is_cnf: bool = field(init=False, compare=False)
    is_linear: bool = field(init=False, compare=False)

    def __post_init__(self):
        terminals = frozenset(self.terminals)
        nonterminals = frozenset(self.nonterminals)
        object.__setattr__(self, "terminals", terminals)
        object.__setattr__(self, "nonterminals", nonterminals)
        clash = terminals & nonterminals
        if clash:
            raise SymbolCollision(f"names used as both terminal and nonterminal: {sorted(clash)}")
        if self.start not in nonterminals:
            raise UndefinedStartSymbol(f"start symbol {self.start!r} is not a nonterminal")
        prods = tuple(dict.fromkeys(self.productions))
        for p in prods:
            if p.lhs not in nonterminals:
                raise GrammarError(f"left-hand side {p.lhs!r} is not a nonterminal")
            for s in p.rhs:
                pool = terminals if s.terminal else nonterminals
                if s.name not in pool:
                    raise GrammarError(f"undeclared {s.kind} {s.name!r} in {p}")
        object.__setattr__(self, "productions", prods)
        object.__setattr__(self, "is_cnf", _cnf_shape(self))
        object.__setattr__(self, "is_linear", check_linear(self))
        object.__setattr__(self, "_hash", hash((self.start, terminals, nonterminals,
                                                frozenset(prods))))

    def __eq__(self, other):
        if not isinstance(other, Cfg):
            return NotImplemented
        return (self.start == other.start and self.terminals == other.terminals
                and self.nonterminals == other.nonterminals
                and set(self.productions) == set(other.productions))

    def __hash__(self):
        return self._hash

    @classmethod
    def from_rules(cls, rules: Iterable[tuple[str, Sequence[str]]], start: str | None = None,
                   terminals: Iterable[str] = ()) -> "Cfg":
        """Build a grammar from ``(lhs, [names...])`` pairs.

        Names that occur on a left-hand side become nonterminals.
        """
        rules = [(lhs, tuple(rhs)) for lhs, rhs in rules]
        if start is None:
            if not rules:
                raise UndefinedStartSymbol("no rules and no start symbol")
            start = rules[0][0]
        nts = {lhs for lhs, _ in rules}
        terms = set(terminals)
        for _, rhs in rules:
            terms.update(x for x in rhs if x not in nts)
        prods = [Production(lhs, tuple(Symbol(x, x not in nts) for x in rhs)) for lhs, rhs in rules]
        return cls(frozenset(terms), frozenset(nts | {start}), tuple(prods), start)

    def rules_for(self, lhs: str) -> list[Production]:
        return [p for p in self.productions if p.lhs == lhs]

    @property
    def has_empty_rule(self) -> bool:
        return Production(self.start, ()) in self.productions

    def ordered_nonterminals(self) -> list[str]:
        """Start first, then by first appearance; unused ones last, sorted."""
        seen = {self.start: None}
        for p in self.productions:
            seen.setdefault(p.lhs)
            for s in p.rhs:
                if not s.terminal:
                    seen.setdefault(s.name)
        rest = sorted(self.nonterminals - seen.keys())
        return list(seen) + rest

    def ordered_terminals(self) -> list[str]:
        return sorted(self.terminals)

    def to_text(self) -> str:
        lines = [f"@start {self.start}"]
        by_lhs: dict[str, list[Production]] = {}
        for p in self.productions:
            by_lhs.setdefault(p.lhs, []).append(p)
        for lhs, prods in by_lhs.items():
            alts = [" ".join(_quote(s) for s in p.rhs) if p.rhs else "ε" for p in prods]
            lines.append(f"{lhs} -> " + " | ".join(alts))
        return "\n".join(lines) + "\n"

    def __str__(self):
        return self.to_text()


def _quote(s: Symbol) -> str:
    # terminals whose bare form would be read back differently need quotes
    if s.terminal and (s.name in EPSILON_TOKENS or s.name in ("|",) + ARROWS
                       or s.name.startswith(("#", "'", '"', "@"))):
        return "'" + s.name + "'"
    return s.name


def _cnf_shape(g: Cfg) -> bool:
    on_rhs = {s.name for p in g.productions for s in p.rhs if not s.terminal}
    for p in g.productions:
        r = p.rhs
        if len(r) == 2 and not r[0].terminal and not r[1].terminal:
            continue
        if len(r) == 1 and r[0].terminal:
            continue
        if not r and p.lhs == g.start and g.start not in on_rhs:
            continue
        return False
    return True


def check_linear(g: Cfg, allow_empty_start: bool = False) -> bool:
    """True iff every production is ``A -> a B``, ``A -> B a`` or ``A -> a``.

    With ``allow_empty_start`` a rule ``S -> ε`` is also tolerated as long as
    the start symbol never occurs on a right-hand side.
    """
    on_rhs = {s.name for p in g.productions for s in p.rhs if not s.terminal}
    for p in g.productions:
        r = p.rhs
        if len(r) == 1 and r[0].terminal:
            continue
        if len(r) == 2 and r[0].terminal != r[1].terminal:
            continue
        if not r and allow_empty_start and p.lhs == g.start and g.start not in on_rhs:
            continue
        return False
    return True


def is_linear_grammar(g: Cfg) -> bool:
    """Linear in the broad sense: at most one nonterminal on every right-hand side."""
    return all(sum(not s.terminal for s in p.rhs) <= 1 for p in g.productions)


# ---------------------------------------------------------------- text format

_TOKEN = re.compile(r"\S+")


def parse_grammar(text: str) -> Cfg:
    rules: list[tuple[str, list[tuple[str, bool | None]], int]] = []
    start = None
    forced_terminals: dict[str, tuple[int, int]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        toks = [(m.group(), m.start() + 1) for m in _TOKEN.finditer(raw)]
        if toks[0][0] == "@start":
            if len(toks) != 2:
                raise GrammarSyntaxError("expected '@start NAME'", lineno, toks[0][1])
            start = _check_name(toks[1][0], lineno, toks[1][1])
            continue
        if toks[0][0].startswith("@"):
            raise GrammarSyntaxError(f"unknown directive {toks[0][0]}", lineno, toks[0][1])
        if len(toks) < 2 or toks[1][0] not in ARROWS:
            col = toks[1][1] if len(toks) > 1 else len(raw) + 1
            raise GrammarSyntaxError("expected 'LHS -> ...'", lineno, col)
        lhs = _check_name(toks[0][0], lineno, toks[0][1])
        alts: list[list[tuple[str, int, bool]]] = [[]]
        for tok, col in toks[2:]:
            if tok == "|":
                alts.append([])
                continue
            if tok in ARROWS:
                raise GrammarSyntaxError("unexpected arrow", lineno, col)
            if len(tok) >= 3 and tok[0] == tok[-1] and tok[0] in "'\"":
                name = _check_name(tok[1:-1], lineno, col)
                forced_terminals.setdefault(name, (lineno, col))
                alts[-1].append((name, col, True))
            else:
                alts[-1].append((_check_name(tok, lineno, col), col, False))
        for alt in alts:
            if not alt:
                raise GrammarSyntaxError("empty alternative (write ε for the empty string)",
                                         lineno, len(raw) + 1)
            if len(alt) == 1 and not alt[0][2] and alt[0][0] in EPSILON_TOKENS:
                rules.append((lhs, [], lineno))
                continue
            for name, col, quoted in alt:
                if name in EPSILON_TOKENS and not quoted:
                    raise GrammarSyntaxError("ε must stand alone in an alternative", lineno, col)
            rules.append((lhs, [(name, True if quoted else None) for name, _, quoted in alt], lineno))
    if not rules:
        raise GrammarSyntaxError("grammar has no rules", 1, 1)
    nts = {lhs for lhs, _, _ in rules}
    for name, (ln, col) in forced_terminals.items():
        if name in nts:
            raise SymbolCollision(f"line {ln}, column {col}: quoted terminal {name!r} "
                                  "is also a nonterminal")
    if start is None:
        start = rules[0][0]
    elif start not in nts:
        raise UndefinedStartSymbol(f"start symbol {start!r} has no rules")
    terms = set()
    prods = []
    for lhs, rhs, _ in rules:
        syms = []
        for name, forced in rhs:
            is_term = forced or name not in nts
            if is_term:
                terms.add(name)
            syms.append(Symbol(name, is_term))
        prods.append(Production(lhs, tuple(syms)))
    return Cfg(frozenset(terms), frozenset(nts), tuple(prods), start)


def _check_name(name: str, line: int, col: int) -> str:
    if RESERVED_CHAR in name:
        raise GrammarSyntaxError(f"{RESERVED_CHAR!r} is reserved for generated names", line, col)
    return name


def load_grammar(path) -> Cfg:
    with open(path, encoding="utf-8") as fh:
        return parse_grammar(fh.read())


# ---------------------------------------------------------------- normal form

class _Fresh:
    def __init__(self, taken: Iterable[str]):
        self.taken = set(taken)
        self.k = 0

    def __call__(self) -> str:
        while True:
            self.k += 1
            name = f"{RESERVED_CHAR}X_{self.k}"
            if name not in self.taken:
                self.taken.add(name)
                return name


def nullable_set(g: Cfg) -> set[str]:
    nullable: set[str] = set()
    changed = True
    while changed:
        changed = False
        for p in g.productions:
            if p.lhs not in nullable and all(not s.terminal and s.name in nullable for s in p.rhs):
                nullable.add(p.lhs)
                changed = True
    return nullable


def accepts_empty(g: Cfg) -> bool:
    return g.start in nullable_set(g)


def remove_useless(g: Cfg) -> Cfg:
    productive: set[str] = set()
    changed = True
    while changed:
        changed = False
        for p in g.productions:
            if p.lhs not in productive and all(s.terminal or s.name in productive for s in p.rhs):
                productive.add(p.lhs)
                changed = True
    if g.start not in productive:
        raise EmptyLanguage(f"start symbol {g.start!r} derives no terminal string")
    prods = [p for p in g.productions
             if p.lhs in productive and all(s.terminal or s.name in productive for s in p.rhs)]
    reachable = {g.start}
    stack = [g.start]
    while stack:
        a = stack.pop()
        for p in prods:
            if p.lhs == a:
                for s in p.rhs:
                    if not s.terminal and s.name not in reachable:
                        reachable.add(s.name)
                        stack.append(s.name)
    prods = [p for p in prods if p.lhs in reachable]
    return Cfg(g.terminals, frozenset(reachable), tuple(prods), g.start)


def to_cnf(g: Cfg) -> Cfg:
    """Convert to Chomsky normal form via START, TERM, BIN, DEL, UNIT.

    Generated nonterminals are named ``$X_k``.  A new start symbol is only
    introduced when the old one occurs on some right-hand side.
    """
    fresh = _Fresh(g.nonterminals | g.terminals)
    nts = set(g.nonterminals)
    rules: list[tuple[str, tuple[str, ...]]] = [(p.lhs, p.names) for p in g.productions]
    is_nt = lambda x: x in nts  # noqa: E731
    start = g.start

    # START
    if any(start in rhs for _, rhs in rules):
        s0 = fresh()
        nts.add(s0)
        rules.insert(0, (s0, (start,)))
        start = s0

    # TERM
    wrap: dict[str, str] = {}
    out = []
    for lhs, rhs in rules:
        if len(rhs) >= 2:
            new = []
            for x in rhs:
                if not is_nt(x):
                    if x not in wrap:
                        wrap[x] = fresh()
                        nts.add(wrap[x])
                    x = wrap[x]
                new.append(x)
            rhs = tuple(new)
        out.append((lhs, rhs))
    out.extend((a, (t,)) for t, a in wrap.items())
    rules = out

    # BIN
    out = []
    for lhs, rhs in rules:
        while len(rhs) > 2:
            y = fresh()
            nts.add(y)
            out.append((lhs, (rhs[0], y)))
            lhs, rhs = y, rhs[1:]
        out.append((lhs, rhs))
    rules = out

    # DEL
    nullable: set[str] = set()
    changed = True
    while changed:
        changed = False
        for lhs, rhs in rules:
            if lhs not in nullable and all(x in nullable for x in rhs):
                nullable.add(lhs)
                changed = True
    out = []
    for lhs, rhs in rules:
        variants = [()]
        for x in rhs:
            variants = [v + (x,) for v in variants] + (variants if x in nullable else [])
        out.extend((lhs, v) for v in variants if v)
    rules = list(dict.fromkeys(out))

    # UNIT
    unit: dict[str, list[str]] = {}
    for lhs, rhs in rules:
        if len(rhs) == 1 and is_nt(rhs[0]):
            unit.setdefault(lhs, []).append(rhs[0])
    order = list(dict.fromkeys([start] + [lhs for lhs, _ in rules]))
    out = []
    for a in order:
        closure = [a]
        seen = {a}
        for b in closure:
            for c in unit.get(b, ()):
                if c not in seen:
                    seen.add(c)
                    closure.append(c)
        for b in closure:
            for lhs, rhs in rules:
                if lhs == b and not (len(rhs) == 1 and is_nt(rhs[0])):
                    out.append((a, rhs))
    if start in nullable:
        out.append((start, ()))
    rules = list(dict.fromkeys(out))

    prods = tuple(Production(lhs, tuple(Symbol(x, not is_nt(x)) for x in rhs)) for lhs, rhs in rules)
    result = Cfg(g.terminals, frozenset(nts), prods, start)
    try:
        return remove_useless(result)
    except EmptyLanguage:
        return Cfg(g.terminals, frozenset({start}), (), start)


def ensure_cnf(g: Cfg) -> Cfg:
    return g if g.is_cnf else to_cnf(g)


# ---------------------------------------------------------------- input strings

def tokenize(text: str, g: Cfg) -> tuple[str, ...]:
    """Split ``text`` into terminal symbols of ``g``.

    When every terminal is a single character the text is read character by
    character (whitespace ignored); otherwise it is split on whitespace.
    """
    if all(len(t) == 1 for t in g.terminals):
        return tuple(c for c in text if not c.isspace())
    return tuple(text.split())


def as_input(w, g: Cfg) -> tuple[str, ...]:
    """Coerce ``w`` (text or a symbol sequence) to a validated symbol tuple."""
    symbols = tokenize(w, g) if isinstance(w, str) else tuple(w)
    for pos, s in enumerate(symbols, start=1):
        if s not in g.terminals:
            raise UnknownSymbol(f"symbol {s!r} at position {pos} is not a terminal of the grammar")
    return symbols


# ---------------------------------------------------------------- compiled form

@dataclass(frozen=True, eq=False)
class CompiledCnf:
    """Integer-indexed view of a CNF grammar used by the numeric kernels."""

    grammar: Cfg
    nts: tuple[str, ...]
    terms: tuple[str, ...]
    binary: np.ndarray        # (R, 3) rows of (lhs, left, right), grouped by lhs
    lhs_start: np.ndarray     # (N + 1,) offsets into ``binary``
    unary: np.ndarray         # (N, T) bool, A -> a
    has_empty: bool

    @property
    def n_nts(self) -> int:
        return len(self.nts)

    @property
    def n_productions(self) -> int:
        return len(self.grammar.productions)

    def nt_index(self, name: str) -> int:
        return self.nts.index(name)

    def encode(self, w: Sequence[str]) -> np.ndarray:
        idx = {t: k for k, t in enumerate(self.terms)}
        return np.array([idx[s] for s in w], dtype=np.int64)

    def term_matrix(self, w: Sequence[str]) -> np.ndarray:
        """``out[A, i]`` (1-based ``i``) is true iff ``A -> w_i``."""
        n = len(w)
        out = np.zeros((self.n_nts, n + 1), dtype=np.bool_)
        if n:
            out[:, 1:] = self.unary[:, self.encode(w)]
        return out


@lru_cache(maxsize=64)
def compile_cnf(g: Cfg) -> CompiledCnf:
    from .errors import NotCnf
    if not g.is_cnf:
        raise NotCnf("grammar is not in Chomsky normal form")
    nts = tuple(g.ordered_nonterminals())
    terms = tuple(g.ordered_terminals())
    ni = {a: k for k, a in enumerate(nts)}
    ti = {t: k for k, t in enumerate(terms)}
    triples = []
    unary = np.zeros((len(nts), len(terms)), dtype=np.bool_)
    for p in g.productions:
        if len(p.rhs) == 2:
            triples.append((ni[p.lhs], ni[p.rhs[0].name], ni[p.rhs[1].name]))
        elif len(p.rhs) == 1:
            unary[ni[p.lhs], ti[p.rhs[0].name]] = True
    triples.sort(key=lambda t: t[0])  # stable: keeps rule order within a lhs
    binary = np.array(triples, dtype=np.int64).reshape(-1, 3)
    lhs_start = np.searchsorted(binary[:, 0], np.arange(len(nts) + 1)).astype(np.int64)
    return CompiledCnf(g, nts, terms, binary, lhs_start, unary, g.has_empty_rule)
