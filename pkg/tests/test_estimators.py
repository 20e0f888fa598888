import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.pipeline import make_pipeline
from sklearn.preprocessing import StandardScaler

from cflrecog import CFGRecognizer, parse_grammar
from cflrecog.estimators import FEATURES, check_labels, check_strings, recognize_many
from cflrecog.oracle import cyk_recognize
from cflrecog.sampler import get_spec, make_dataset


def test_params_and_clone():
    est = CFGRecognizer(grammar="dyck2", engine="unambiguous", budget_c=5)
    assert est.get_params() == {"grammar": "dyck2", "engine": "unambiguous", "budget_c": 5,
                                "max_n": None}
    c = clone(est.set_params(engine="cyk"))
    assert c.get_params()["engine"] == "cyk" and not hasattr(c, "spec_")


def test_predict_and_score():
    est = CFGRecognizer("dyck1", "general").fit()
    X = ["()", "(()", "(())()", ")("]
    assert list(est.predict(X)) == [True, False, True, False]
    assert est.score(X, [1, 0, 1, 0]) == 1.0
    assert est.score(X, ["positive", "positive", "positive", "negative"]) == 0.75


@pytest.mark.parametrize("engine", ["general", "unambiguous", "cyk"])
def test_predict_matches_oracle_on_dataset(engine):
    spec = get_spec("dyck2")
    d = make_dataset(spec, 40, 12, 0.5, 1)
    X = [r.string for r in d]
    y = [r.label for r in d]
    est = CFGRecognizer("dyck2", engine).fit(X, y)
    assert est.score(X, y) == 1.0
    assert list(est.predict(X)) == [cyk_recognize(spec.cnf, x) for x in X]


def test_transform_features():
    est = CFGRecognizer("palindrome", "linear").fit()
    F = est.transform(["abba", "ab"])
    assert F.shape == (2, len(FEATURES))
    assert list(est.get_feature_names_out()) == list(FEATURES)
    assert F[0, FEATURES.index("n")] == 4
    assert F[0, FEATURES.index("slashed_cells")] == 0


def test_pipeline_composition():
    pipe = make_pipeline(CFGRecognizer("dyck1", "unambiguous"), StandardScaler())
    out = pipe.fit_transform(["()", "(())", "()()()"])
    assert out.shape == (3, len(FEATURES))


def test_custom_grammars():
    assert list(recognize_many(["aabb", "abab"], "S -> a S b | a b", "unambiguous")) == [True, False]
    g = parse_grammar("S -> a S | b")
    assert list(CFGRecognizer(g, "linear").fit().predict(["aab", "ba"])) == [True, False]


def test_not_fitted():
    with pytest.raises(NotFittedError):
        CFGRecognizer().predict(["()"])


@pytest.mark.parametrize("kwargs", [{"engine": "neural"}, {"grammar": "nope"},
                                    {"budget_c": -1}, {"grammar": 3}])
def test_bad_params(kwargs):
    with pytest.raises(ValueError):
        CFGRecognizer(**kwargs).fit()


def test_input_validation():
    with pytest.raises(ValueError):
        check_strings("()")
    with pytest.raises(ValueError):
        check_strings([1, 2])
    with pytest.raises(ValueError):
        check_strings(np.array([["a", "b"]]))
    assert check_strings(np.array([["()"], ["(("]])) == ["()", "(("]
    assert list(check_labels(np.array([1, 0]), 2)) == [True, False]
    with pytest.raises(ValueError):
        check_labels([1], 2)
    with pytest.raises(ValueError):
        check_labels(["yes", "no"], 2)
