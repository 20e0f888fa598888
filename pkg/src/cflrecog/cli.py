"""Command line: ``recognize``, ``verify``, ``bench`` and ``sample``.

Exit statuses: 0 accepted (or clean run), 1 rejected, 2 usage or grammar
error, 3 ambiguity violation, 4 disagreement with the oracle.
"""

from __future__ import annotations

import argparse
import itertools
import json
import os
import random
import statistics
import sys
from dataclasses import dataclass
from pathlib import Path

from . import bfvp, general, path_system
from .errors import (AmbiguityViolation, FormulaSyntaxError, GrammarError, InputTooLong,
                     NoStringOfThatLength, NotCnf)
from .grammar import Cfg, as_input, load_grammar
from .oracle import cyk_recognize
from .report import ENGINES, ResourceReport
from .sampler import (SPEC_NAMES, LanguageSpec, get_spec, length_table, make_dataset,
                      sample_negative, sample_positive, spec_from_grammar)

EXIT_ACCEPT, EXIT_REJECT, EXIT_USAGE, EXIT_AMBIGUOUS, EXIT_DISAGREE = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


@dataclass
class Target:
    """A resolved ``-g`` argument: the language spec and the grammar as given."""

    spec: LanguageSpec
    builtin: bool

    @property
    def cfg(self) -> Cfg:
        return self.spec.cfg


def resolve_grammar(arg: str, convert: bool = True, notice=None) -> Target:
    """Built-in names win unless ``arg`` contains a path separator or names a file."""
    looks_like_path = os.sep in arg or "/" in arg or Path(arg).is_file()
    if not looks_like_path:
        if arg in SPEC_NAMES:
            return Target(get_spec(arg), True)
        raise UsageError(f"unknown grammar {arg!r}: not a file and not one of {', '.join(SPEC_NAMES)}")
    try:
        g = load_grammar(arg)
    except OSError as exc:
        raise UsageError(f"cannot read grammar {arg!r}: {exc}") from exc
    if not g.is_cnf:
        if not convert:
            raise NotCnf(f"{arg} is not in Chomsky normal form (conversion disabled)")
        if notice:
            notice(f"note: {arg} converted to Chomsky normal form")
    return Target(spec_from_grammar(g, name=Path(arg).stem), False)


def run_engine(engine: str, target: Target, w, budget_c: int = general.DEFAULT_BUDGET_C,
               max_n: int | None = None) -> ResourceReport:
    spec = target.spec
    if engine == "general":
        cap = max_n if max_n is not None else general.DEFAULT_MAX_N
        return general.recognize(spec.cnf, as_input(w, spec.cfg), budget_c, max_n=cap)
    if engine == "unambiguous":
        return path_system.recognize_unambiguous(spec.cnf, as_input(w, spec.cfg))
    if engine == "linear":
        return path_system.recognize_linear(spec.cfg, w)
    if engine == "bfvp":
        return _bfvp_run(spec, w)
    if engine == "cyk":
        toks = as_input(w, spec.cfg)
        cnf = spec.cnf
        n = len(toks)
        return ResourceReport("cyk", cyk_recognize(cnf, toks), n,
                              item_cells=len(cnf.nonterminals) * n * (n + 1) // 2)
    raise UsageError(f"unknown engine {engine!r}")


def _bfvp_run(spec: LanguageSpec, w) -> ResourceReport:
    text = w if isinstance(w, str) else "".join(w)
    if spec.name == "bfvp_infix":
        try:
            text = bfvp.infix_to_postfix(text)
        except FormulaSyntaxError:
            return ResourceReport("bfvp", False, len(as_input(w, spec.cfg)), rounds_used=0,
                                  pebble_rounds=0, extra_cells=0)
    try:
        return bfvp.bfvp_report(text)
    except FormulaSyntaxError as exc:
        raise UsageError(str(exc)) from exc


def _emit(report: ResourceReport, as_json: bool, out=None):
    out = out or sys.stdout
    if as_json:
        print(json.dumps(report.schema_dict()), file=out)
    else:
        print(report.summary(), file=out)


def _read_input(args) -> str:
    if args.string is None or args.string == "-":
        return sys.stdin.read().rstrip("\n")
    return args.string


# ---------------------------------------------------------------- commands

def cmd_recognize(args) -> int:
    target = resolve_grammar(args.grammar, not args.no_convert, _notice)
    rep = run_engine(args.engine, target, _read_input(args), args.budget_c, args.max_n)
    _emit(rep, args.json)
    return EXIT_ACCEPT if rep.accepted else EXIT_REJECT


def _cells(rep: ResourceReport) -> int:
    for name in ("decomposition_pairs", "edge_cells", "item_cells", "extra_cells"):
        v = getattr(rep, name)
        if v is not None:
            return v
    return 0


def _verify_cases(target: Target, exhaustive: int, n_random: int, max_n: int, seed):
    spec = target.spec
    sigma = spec.alphabet
    for n in range(exhaustive + 1 if exhaustive is not None else 0):
        for w in itertools.product(sigma, repeat=n):
            yield w
    if n_random:
        rng = random.Random(seed)
        table = length_table(spec, max_n)
        lengths = [m for m in table.feasible_lengths() if m <= max_n]
        n_pos = (n_random + 1) // 2
        for _ in range(n_pos if lengths else 0):
            yield spec.tokens(sample_positive(spec, rng.choice(lengths), rng))
        for _ in range(n_random - (n_pos if lengths else 0)):
            n = rng.randint(1, max_n)
            try:
                yield spec.tokens(sample_negative(spec, n, rng.choice(("random", "perturb")), rng,
                                                  max_n=max_n))
            except NoStringOfThatLength:
                yield spec.tokens(sample_negative(spec, n, "random", rng, max_n=max_n))


def cmd_verify(args) -> int:
    target = resolve_grammar(args.grammar, not args.no_convert, _notice)
    cnf = target.spec.cnf
    max_n = args.max_n if args.max_n is not None else 16
    checked = agree = 0
    max_rounds = max_cells = 0
    first_bad = None
    for w in _verify_cases(target, args.exhaustive, args.random, max_n, args.seed):
        expected = cyk_recognize(cnf, w)
        rep = run_engine(args.engine, target, w, args.budget_c,
                         max(max_n, len(w)) if args.engine == "general" else None)
        checked += 1
        if rep.accepted == expected:
            agree += 1
        elif first_bad is None:
            first_bad = (target.spec.render(w), expected, rep.accepted)
        max_rounds = max(max_rounds, rep.rounds_used or 0)
        max_cells = max(max_cells, _cells(rep))
    summary = {"grammar": args.grammar, "engine": args.engine, "checked": checked,
               "agreements": agree, "disagreements": checked - agree,
               "max_rounds": max_rounds, "max_cells": max_cells}
    if args.json:
        print(json.dumps(summary))
    else:
        print(" ".join(f"{k}={v}" for k, v in summary.items()))
    if first_bad is not None:
        s, exp, got = first_bad
        print(f"counterexample: {s!r} oracle={str(exp).lower()} engine={str(got).lower()}",
              file=sys.stderr)
        return EXIT_DISAGREE
    return EXIT_ACCEPT


def _parse_lengths(text: str) -> list[int]:
    try:
        out = [int(t) for t in text.replace(",", " ").split()]
    except ValueError as exc:
        raise UsageError(f"bad length list {text!r}") from exc
    if not out or min(out) < 1:
        raise UsageError("lengths must be positive integers")
    return out


def cmd_bench(args) -> int:
    target = resolve_grammar(args.grammar, not args.no_convert, _notice)
    spec = target.spec
    rng = random.Random(args.seed)
    rows = []
    for n in _parse_lengths(args.lengths):
        reps = []
        for _ in range(args.samples):
            try:
                w = spec.tokens(sample_positive(spec, n, rng))
            except NoStringOfThatLength:
                break
            rep = run_engine(args.engine, target, w, args.budget_c, max(n, args.max_n or 0) or None)
            if rep.accepted:
                reps.append(rep)
        if not reps:
            rows.append({"n": n, "samples": 0})
            continue
        rows.append({
            "n": n, "samples": len(reps),
            "rounds": statistics.median(r.rounds_used or 0 for r in reps),
            "pebble_rounds": statistics.median(r.pebble_rounds or 0 for r in reps),
            "cells": statistics.median(_cells(r) for r in reps),
            "time": statistics.median(r.wall_time for r in reps),
        })
    doc = {"grammar": args.grammar, "engine": args.engine, "seed": args.seed, "rows": rows}
    if args.output:
        Path(args.output).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
    if args.json:
        print(json.dumps(doc))
        return EXIT_ACCEPT
    print(f"{'n':>6} {'samples':>7} {'rounds':>7} {'pebble':>7} {'cells':>14} {'time[s]':>9}")
    for r in rows:
        if not r["samples"]:
            print(f"{r['n']:>6} {0:>7}   (no member of this length)")
            continue
        print(f"{r['n']:>6} {r['samples']:>7} {r['rounds']:>7g} {r['pebble_rounds']:>7g} "
              f"{r['cells']:>14.0f} {r['time']:>9.4f}")
    return EXIT_ACCEPT


def cmd_sample(args) -> int:
    if args.language in SPEC_NAMES:
        spec = get_spec(args.language)
    else:
        spec = resolve_grammar(args.language, True, _notice).spec
    lengths = _parse_lengths(args.lengths) if args.lengths else None
    try:
        ds = make_dataset(spec, args.count, args.max_n, args.split, args.seed,
                          negative_mode=args.mode, lengths=lengths)
    except NoStringOfThatLength as exc:
        feasible = ", ".join(map(str, exc.feasible)) or "none"
        raise UsageError(f"{exc}; feasible lengths up to {args.max_n}: {feasible}") from exc
    if args.output:
        ds.write(args.output)
        where = args.output
    else:
        sys.stdout.write(ds.to_text())
        where = "stdout"
    c = ds.counts()
    print(f"wrote {len(ds)} records ({c['positive']} positive, {c['negative']} negative) "
          f"for {spec.name} to {where}", file=sys.stderr if not args.output else sys.stdout)
    return EXIT_ACCEPT


# ---------------------------------------------------------------- parser

def _notice(msg: str):
    print(msg, file=sys.stderr)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cflrecog", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, engine_default="general"):
        sp.add_argument("-g", "--grammar", required=True,
                        help=f"grammar file or built-in name ({', '.join(SPEC_NAMES)})")
        sp.add_argument("-e", "--engine", choices=ENGINES, default=engine_default)
        sp.add_argument("--budget-c", type=int, default=general.DEFAULT_BUDGET_C,
                        help="additive round budget constant of the general engine")
        sp.add_argument("--max-n", type=int, default=None)
        sp.add_argument("--json", action="store_true", help="one JSON document on stdout")
        sp.add_argument("--no-convert", action="store_true",
                        help="refuse grammars that are not already in CNF")

    r = sub.add_parser("recognize", help="run one engine on one string")
    common(r)
    r.add_argument("string", nargs="?", help="input string; '-' or nothing reads stdin")
    r.set_defaults(func=cmd_recognize)

    v = sub.add_parser("verify", help="compare an engine with the CYK oracle")
    common(v)
    v.add_argument("--exhaustive", type=int, default=None, metavar="N",
                   help="check every string of length 0..N")
    v.add_argument("--random", type=int, default=0, metavar="K")
    v.add_argument("--seed", type=int, default=0)
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bench", help="rounds and cells against input length")
    common(b)
    b.add_argument("--lengths", default="4,8,16")
    b.add_argument("--samples", type=int, default=5)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("-o", "--output")
    b.set_defaults(func=cmd_bench)

    s = sub.add_parser("sample", help="write a labelled dataset")
    s.add_argument("-l", "--language", required=True)
    s.add_argument("-c", "--count", type=int, default=100)
    s.add_argument("--max-n", type=int, default=20)
    s.add_argument("--split", type=float, default=0.5)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--mode", choices=("random", "perturb", "mixed"), default="mixed")
    s.add_argument("--lengths", help="restrict positive lengths, e.g. '1,3,5'")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_sample)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_ACCEPT
    try:
        return args.func(args)
    except AmbiguityViolation as exc:
        print(f"ambiguity violation: {exc}", file=sys.stderr)
        return EXIT_AMBIGUOUS
    except (UsageError, GrammarError, InputTooLong, KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
