"""Built-in languages and length-exact string generation.

Positives are drawn uniformly over the length-``n`` derivations of the CNF
form of a grammar (uniform over strings when that CNF is unambiguous),
using exact derivation counts.  Negatives are either uniform strings that
the oracle rejects or perturbed positives; for the Boolean-formula
languages they are formulas that evaluate to false.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Sequence

from .errors import CannotFindNegative, NoStringOfThatLength, NotCnf
from .grammar import Cfg, check_linear, parse_grammar, to_cnf, tokenize
from .oracle import cyk_recognize

EDIT_P = 0.5
MAX_RETRIES = 100

_GRAMMARS = {
    "dyck1": """
        S -> ( S ) S | ε
    """,
    "dyck2": """
        S -> ( S ) S | [ S ] S | ε
    """,
    "palindrome": """
        # even-length w w^R over {a, b}
        P -> ε | a A | b B
        S -> a A | b B
        A -> S a | a
        B -> S b | b
    """,
    "marked_palindrome": """
        S -> '#' | a A | b B
        A -> S a
        B -> S b
    """,
    "anbn": """
        S0 -> ε | a B
        S -> a B
        B -> S b | b
    """,
    "bfvp_postfix": """
        # T and F derive the formulas with value 1 and 0
        T -> 1 | F ¬ | T T ∧ | T T ∨ | T F ∨ | F T ∨
        F -> 0 | T ¬ | F F ∨ | T F ∧ | F T ∧ | F F ∧
    """,
    "bfvp_infix": """
        OrT -> OrT ∨ AndT | OrT ∨ AndF | OrF ∨ AndT | AndT
        OrF -> OrF ∨ AndF | AndF
        AndT -> AndT ∧ NotT | NotT
        AndF -> AndF ∧ NotT | AndF ∧ NotF | AndT ∧ NotF | NotF
        NotT -> ¬ NotF | AtomT
        NotF -> ¬ NotT | AtomF
        AtomT -> 1 | ( OrT )
        AtomF -> 0 | ( OrF )
    """,
}
_FALSE_START = {"bfvp_postfix": "F", "bfvp_infix": "OrF"}
_DETERMINISTIC = {"dyck1", "dyck2", "marked_palindrome", "anbn", "bfvp_postfix", "bfvp_infix"}


def _with_start(g: Cfg, start: str) -> Cfg:
    return Cfg(g.terminals, g.nonterminals, g.productions, start)


@dataclass(frozen=True, eq=False)
class LanguageSpec:
    name: str
    cfg: Cfg
    linear: bool
    unambiguous_claimed: bool = True
    deterministic_claimed: bool = False
    negative_cfg: Cfg | None = None
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def properties(self) -> dict:
        return {"linear": self.linear, "unambiguous_claimed": self.unambiguous_claimed,
                "deterministic_claimed": self.deterministic_claimed}

    @property
    def cnf(self) -> Cfg:
        if "cnf" not in self._cache:
            self._cache["cnf"] = to_cnf(self.cfg)
        return self._cache["cnf"]

    @property
    def negative_cnf(self) -> Cfg | None:
        if self.negative_cfg is None:
            return None
        if "neg_cnf" not in self._cache:
            self._cache["neg_cnf"] = to_cnf(self.negative_cfg)
        return self._cache["neg_cnf"]

    @property
    def alphabet(self) -> tuple[str, ...]:
        return tuple(sorted(self.cfg.terminals))

    def tokens(self, s) -> tuple[str, ...]:
        return tokenize(s, self.cfg) if isinstance(s, str) else tuple(s)

    def render(self, tokens: Sequence[str]) -> str:
        sep = "" if all(len(t) == 1 for t in self.cfg.terminals) else " "
        return sep.join(tokens)

    def accepts(self, s) -> bool:
        return cyk_recognize(self.cnf, self.tokens(s))


def _make_spec(name: str) -> LanguageSpec:
    g = parse_grammar(_GRAMMARS[name])
    neg = _with_start(g, _FALSE_START[name]) if name in _FALSE_START else None
    return LanguageSpec(name, g, check_linear(g, allow_empty_start=True),
                        unambiguous_claimed=True,
                        deterministic_claimed=name in _DETERMINISTIC, negative_cfg=neg)


SPEC_NAMES = tuple(_GRAMMARS)
_SPECS: dict[str, LanguageSpec] = {}


def get_spec(name: str) -> LanguageSpec:
    if name not in _GRAMMARS:
        raise KeyError(f"unknown language {name!r}; choose from {', '.join(SPEC_NAMES)}")
    if name not in _SPECS:
        _SPECS[name] = _make_spec(name)
    return _SPECS[name]


def spec_from_grammar(g: Cfg, name: str = "custom") -> LanguageSpec:
    return LanguageSpec(name, g, check_linear(g, allow_empty_start=True), unambiguous_claimed=False)


# ---------------------------------------------------------------- length tables

class LengthTable:
    """Derivation counts ``count(A, l)`` for ``1 <= l <= max_n`` of a CNF grammar."""

    def __init__(self, g: Cfg, max_n: int):
        if not g.is_cnf:
            raise NotCnf("length tables need a CNF grammar")
        self.grammar = g
        self.max_n = max_n
        self.nts = tuple(g.ordered_nonterminals())
        ni = {a: k for k, a in enumerate(self.nts)}
        self.binary: list[list[tuple[int, int]]] = [[] for _ in self.nts]
        self.terminal: list[list[str]] = [[] for _ in self.nts]
        for p in g.productions:
            if len(p.rhs) == 2:
                self.binary[ni[p.lhs]].append((ni[p.rhs[0].name], ni[p.rhs[1].name]))
            elif len(p.rhs) == 1:
                self.terminal[ni[p.lhs]].append(p.rhs[0].name)
        self._ni = ni
        self.counts = [[0] * (max_n + 1) for _ in self.nts]
        self._nonzero: list[list[int]] = [[] for _ in self.nts]
        for a in range(len(self.nts)):
            if self.terminal[a] and max_n >= 1:
                self.counts[a][1] = len(self.terminal[a])
                self._nonzero[a].append(1)
        for ell in range(2, max_n + 1):
            for a in range(len(self.nts)):
                total = 0
                for b, c in self.binary[a]:
                    cb, cc = self.counts[b], self.counts[c]
                    for m in self._nonzero[b]:
                        if m >= ell:
                            break
                        total += cb[m] * cc[ell - m]
                if total:
                    self.counts[a][ell] = total
            for a in range(len(self.nts)):
                if self.counts[a][ell]:
                    self._nonzero[a].append(ell)

    def count(self, nt: str, ell: int) -> int:
        if ell < 1:
            raise ValueError("lengths start at 1; the empty string is handled separately")
        if ell > self.max_n:
            raise ValueError(f"length {ell} exceeds the table size {self.max_n}")
        return self.counts[self._ni[nt]][ell]

    def feasible_lengths(self, nt: str | None = None) -> list[int]:
        a = self._ni[nt or self.grammar.start]
        return list(self._nonzero[a])

    def _choose(self, a: int, ell: int, r: int) -> tuple[int, int, int]:
        """The (rule, split) holding position ``r`` of the derivations of ``(a, ell)``."""
        for b, c in self.binary[a]:
            cb, cc = self.counts[b], self.counts[c]
            for m in self._nonzero[b]:
                if m >= ell:
                    break
                k = cb[m] * cc[ell - m]
                if r < k:
                    return b, c, m
                r -= k
        raise AssertionError("derivation index out of range")

    def sample(self, n: int, rng: random.Random, nt: str | None = None) -> tuple[str, ...]:
        a0 = self._ni[nt or self.grammar.start]
        if n < 1 or n > self.max_n or not self.counts[a0][n]:
            raise NoStringOfThatLength(f"no string of length {n}",
                                       feasible=tuple(self.feasible_lengths(nt)))
        out: list[str] = []
        stack = [(a0, n)]
        while stack:
            a, ell = stack.pop()
            if ell == 1:
                out.append(rng.choice(self.terminal[a]))
                continue
            b, c, m = self._choose(a, ell, rng.randrange(self.counts[a][ell]))
            stack.append((c, ell - m))
            stack.append((b, m))
        return tuple(out)


def build_length_table(g: Cfg, max_n: int) -> LengthTable:
    return LengthTable(g, max_n)


def _table(spec: LanguageSpec, key: str, g: Cfg, n: int) -> LengthTable:
    t = spec._cache.get(key)
    if t is None or t.max_n < n:
        t = LengthTable(g, max(n, 2 * t.max_n if t else 32))
        spec._cache[key] = t
    return t


def length_table(spec: LanguageSpec, n: int, negative: bool = False) -> LengthTable:
    """Cached table covering at least lengths ``1..n`` for the spec's CNF."""
    if negative:
        return _table(spec, "neg", spec.negative_cnf, n)
    return _table(spec, "pos", spec.cnf, n)


def _rng(seed) -> random.Random:
    return seed if isinstance(seed, random.Random) else random.Random(seed)


def sample_positive(spec: LanguageSpec, n: int, seed=None) -> str:
    rng = _rng(seed)
    if n < 1:
        raise NoStringOfThatLength("positive samples have length at least 1")
    return spec.render(_table(spec, "pos", spec.cnf, n).sample(n, rng))


def _geometric(rng: random.Random, p: float = EDIT_P) -> int:
    k = 1
    while rng.random() >= p:
        k += 1
    return k


def perturb(tokens: Sequence[str], alphabet: Sequence[str], rng: random.Random,
            edits: int | None = None) -> tuple[str, ...]:
    """Apply ``edits`` (default geometric) uniform substitutions, insertions or deletions."""
    s = list(tokens)
    k = _geometric(rng) if edits is None else edits
    for _ in range(k):
        op = rng.randrange(3) if s else 1
        if op == 0:
            pos = rng.randrange(len(s))
            others = [a for a in alphabet if a != s[pos]]
            if others:
                s[pos] = rng.choice(others)
        elif op == 1:
            s.insert(rng.randrange(len(s) + 1), rng.choice(alphabet))
        else:
            del s[rng.randrange(len(s))]
    return tuple(s)


def sample_negative(spec: LanguageSpec, n: int, mode: str = "random", seed=None,
                    max_n: int | None = None) -> str:
    """A non-member; ``perturb`` results outside ``[1, max_n]`` are re-drawn."""
    rng = _rng(seed)
    if n < 1:
        raise ValueError("negative samples have length at least 1")
    if mode not in ("random", "perturb"):
        raise ValueError(f"unknown negative mode {mode!r}")
    if spec.negative_cfg is not None:
        return spec.render(_table(spec, "neg", spec.negative_cnf, n).sample(n, rng))
    sigma = spec.alphabet
    hi = max_n if max_n is not None else n + 64
    if mode == "perturb":
        base = _table(spec, "pos", spec.cnf, n).sample(n, rng)
    for _ in range(MAX_RETRIES):
        if mode == "random":
            cand = tuple(rng.choice(sigma) for _ in range(n))
        else:
            cand = perturb(base, sigma, rng)
            if not 1 <= len(cand) <= hi:
                continue
        if not cyk_recognize(spec.cnf, cand):
            return spec.render(cand)
    raise CannotFindNegative(f"no negative found for {spec.name} at length {n} "
                             f"after {MAX_RETRIES} tries")


# ---------------------------------------------------------------- datasets

POSITIVE, NEGATIVE = "positive", "negative"


@dataclass(frozen=True)
class Record:
    string: str
    label: str
    length: int


@dataclass
class Dataset:
    records: list[Record]
    meta: dict

    def __len__(self):
        return len(self.records)

    def __iter__(self) -> Iterator[Record]:
        return iter(self.records)

    def counts(self) -> dict[str, int]:
        out = {POSITIVE: 0, NEGATIVE: 0}
        for r in self.records:
            out[r.label] += 1
        return out

    def mislabeled(self, spec: LanguageSpec) -> list[Record]:
        return [r for r in self.records if spec.accepts(r.string) != (r.label == POSITIVE)]

    def to_text(self) -> str:
        return "".join(f"{r.label}\t{r.string}\n" for r in self.records)

    def write(self, path) -> Path:
        """Write ``label TAB string`` lines and a one-line ``.meta.json`` sidecar."""
        path = Path(path)
        path.write_text(self.to_text(), encoding="utf-8")
        meta_path(path).write_text(json.dumps(self.meta, sort_keys=True) + "\n", encoding="utf-8")
        return path

    @classmethod
    def read(cls, path, spec: LanguageSpec | None = None) -> "Dataset":
        path = Path(path)
        records = []
        for line in path.read_text(encoding="utf-8").splitlines():
            label, _, s = line.partition("\t")
            if label not in (POSITIVE, NEGATIVE):
                raise ValueError(f"bad label {label!r} in {path}")
            n = len(spec.tokens(s)) if spec is not None else len(s)
            records.append(Record(s, label, n))
        mp = meta_path(path)
        meta = json.loads(mp.read_text(encoding="utf-8")) if mp.exists() else {}
        return cls(records, meta)


def meta_path(path) -> Path:
    path = Path(path)
    return path.with_name(path.name + ".meta.json")


def make_dataset(spec: LanguageSpec, count: int, max_n: int, split: float = 0.5,
                 seed=0, negative_mode: str = "mixed", lengths=None) -> Dataset:
    """``round(count * split)`` positives then negatives, every label oracle-checked."""
    if count < 1:
        raise ValueError("count must be at least 1")
    if not 0 < split < 1:
        raise ValueError("split must lie strictly between 0 and 1")
    if negative_mode not in ("random", "perturb", "mixed"):
        raise ValueError(f"unknown negative mode {negative_mode!r}")
    rng = random.Random(seed)
    pos_table = _table(spec, "pos", spec.cnf, max_n)
    pos_lengths = [m for m in pos_table.feasible_lengths() if m <= max_n]
    if lengths is not None:
        wanted = set(lengths)
        feasible = pos_lengths
        pos_lengths = [m for m in pos_lengths if m in wanted]
        if not pos_lengths:
            raise NoStringOfThatLength(f"{spec.name} has no member of the requested lengths "
                                       f"{sorted(wanted)}", feasible=tuple(feasible))
    if not pos_lengths:
        raise NoStringOfThatLength(f"{spec.name} has no member of length 1..{max_n}",
                                   feasible=tuple(pos_table.feasible_lengths()[:10]))
    if spec.negative_cfg is not None:
        neg_table = _table(spec, "neg", spec.negative_cnf, max_n)
        neg_lengths = [m for m in neg_table.feasible_lengths() if m <= max_n]
    else:
        neg_lengths = list(range(1, max_n + 1))
    n_pos = round(count * split)
    records = []
    for _ in range(n_pos):
        n = rng.choice(pos_lengths)
        toks = pos_table.sample(n, rng)
        s = spec.render(toks)
        if not cyk_recognize(spec.cnf, toks):
            raise AssertionError(f"sampled positive {s!r} rejected by the oracle")
        records.append(Record(s, POSITIVE, n))
    for _ in range(count - n_pos):
        mode = negative_mode
        if mode == "mixed":
            mode = rng.choice(("random", "perturb"))
        pool = pos_lengths if mode == "perturb" and spec.negative_cfg is None else neg_lengths
        n = rng.choice(pool)
        s = sample_negative(spec, n, mode, rng, max_n=max_n)
        toks = spec.tokens(s)
        if cyk_recognize(spec.cnf, toks):
            raise AssertionError(f"sampled negative {s!r} accepted by the oracle")
        records.append(Record(s, NEGATIVE, len(toks)))
    meta = {"spec": spec.name, "seed": seed if not isinstance(seed, random.Random) else None,
            "count": count, "max_n": max_n, "split": split, "negative_mode": negative_mode,
            "lengths": sorted(set(lengths)) if lengths is not None else None}
    return Dataset(records, meta)
