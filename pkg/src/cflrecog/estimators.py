"""scikit-learn style wrapper around the recognition engines.

``CFGRecognizer`` is a binary classifier over strings: ``predict`` returns
membership, ``transform`` returns the per-string resource counters.
Nothing is learned; ``fit`` resolves and compiles the grammar so the
estimator composes with pipelines, ``clone`` and cross-validation.
"""

from __future__ import annotations

from typing import Iterable

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from . import general
from .grammar import Cfg, parse_grammar
from .report import ENGINES, ResourceReport
from .sampler import SPEC_NAMES, LanguageSpec, get_spec, spec_from_grammar

FEATURES = ("n", "rounds_used", "pebble_rounds", "item_cells", "slashed_cells",
            "decomposition_pairs", "edge_cells")


def check_strings(X) -> list:
    """Coerce ``X`` to a list of inputs; each is a string or a symbol sequence."""
    if isinstance(X, str):
        raise ValueError("expected a collection of strings, got a single string")
    if isinstance(X, np.ndarray):
        if X.ndim == 2 and X.shape[1] == 1:
            X = X[:, 0]
        elif X.ndim != 1:
            raise ValueError(f"expected a 1-d collection of strings, got shape {X.shape}")
    out = []
    for k, x in enumerate(X):
        if isinstance(x, (str, tuple, list)):
            out.append(x if isinstance(x, str) else tuple(x))
        else:
            raise ValueError(f"entry {k} is {type(x).__name__}, not a string")
    return out


_LABELS = {True: True, False: False, 1: True, 0: False, "positive": True, "negative": False}


def check_labels(y, n: int) -> np.ndarray:
    y = list(y)
    if len(y) != n:
        raise ValueError(f"{len(y)} labels for {n} inputs")
    try:
        return np.array([_LABELS[v.item() if isinstance(v, np.generic) else v] for v in y],
                        dtype=bool)
    except (KeyError, TypeError) as exc:
        raise ValueError(f"labels must be booleans, 0/1 or positive/negative: {exc}") from None


def check_engine(engine: str) -> str:
    if engine not in ENGINES:
        raise ValueError(f"engine must be one of {', '.join(ENGINES)}, got {engine!r}")
    return engine


def resolve_spec(grammar) -> LanguageSpec:
    if isinstance(grammar, LanguageSpec):
        return grammar
    if isinstance(grammar, Cfg):
        return spec_from_grammar(grammar)
    if isinstance(grammar, str):
        if grammar in SPEC_NAMES:
            return get_spec(grammar)
        if "->" in grammar or "→" in grammar:
            return spec_from_grammar(parse_grammar(grammar))
    raise ValueError(f"grammar must be a built-in name, grammar text or Cfg, got {grammar!r}")


class CFGRecognizer(ClassifierMixin, TransformerMixin, BaseEstimator):
    """Membership classifier backed by one recognition engine.

    Parameters
    ----------
    grammar : str, Cfg or LanguageSpec
        Built-in language name, grammar text, or a parsed grammar.
    engine : str
        One of ``general``, ``unambiguous``, ``linear``, ``bfvp``, ``cyk``.
    budget_c : int
        Additive round budget constant of the general engine.
    max_n : int or None
        Length cap of the general engine (``None`` keeps its default).
    """

    def __init__(self, grammar="dyck1", engine="general", budget_c=general.DEFAULT_BUDGET_C,
                 max_n=None):
        self.grammar = grammar
        self.engine = engine
        self.budget_c = budget_c
        self.max_n = max_n

    def fit(self, X=None, y=None):
        check_engine(self.engine)
        if not isinstance(self.budget_c, (int, np.integer)) or self.budget_c < 0:
            raise ValueError("budget_c must be a non-negative integer")
        self.spec_ = resolve_spec(self.grammar)
        self.cnf_ = self.spec_.cnf
        self.classes_ = np.array([False, True])
        if X is not None:
            X = check_strings(X)
            if y is not None:
                check_labels(y, len(X))
            self.n_features_in_ = 1
        return self

    def _target(self):
        from .cli import Target
        return Target(self.spec_, True)

    def reports(self, X) -> list[ResourceReport]:
        check_is_fitted(self, "spec_")
        from .cli import run_engine
        target = self._target()
        return [run_engine(self.engine, target, x, self.budget_c, self.max_n)
                for x in check_strings(X)]

    def predict(self, X) -> np.ndarray:
        return np.array([r.accepted for r in self.reports(X)], dtype=bool)

    def score(self, X, y, sample_weight=None):
        X = check_strings(X)
        return super().score(X, check_labels(y, len(X)), sample_weight)

    def transform(self, X) -> np.ndarray:
        """Rows of :data:`FEATURES`; counters an engine does not produce are 0."""
        rows = [[getattr(r, f) or 0 for f in FEATURES] for r in self.reports(X)]
        return np.array(rows, dtype=np.int64).reshape(-1, len(FEATURES))

    def get_feature_names_out(self, input_features=None):
        return np.array(FEATURES, dtype=object)


def recognize_many(strings: Iterable, grammar="dyck1", engine="general", **kw) -> np.ndarray:
    return CFGRecognizer(grammar, engine, **kw).fit().predict(list(strings))
