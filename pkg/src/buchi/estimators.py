"""scikit-learn style wrappers around the reduction and orbit classification.

Rows of X are integer triples. Entries are kept as Python ints, so object
arrays with very large values are accepted unchanged.
"""

from __future__ import annotations

from typing import List

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .core import Triple, as_triple, format_sequence
from .decompose import DELTA2, classify_orbit_mod8, decompose
from .reduction import InfiniteThetaError, check_gamma, enumerate_theta, reduce_word
from .words import Word


def check_triples(X, a=None) -> List[Triple]:
    """Validate a 2-D array-like of shape (n, 3) and return its rows as exact triples.

    With ``a`` given, every row must also solve x1^2 - 2 x2^2 + x3^2 = a.
    """
    if isinstance(X, np.ndarray):
        arr = X
    else:
        arr = np.empty((len(X), 3) if len(X) else (0, 3), dtype=object)
        for i, row in enumerate(X):
            row = tuple(row)
            if len(row) != 3:
                raise ValueError(f"row {i} has {len(row)} entries, expected 3")
            arr[i] = row
    if arr.ndim != 2 or arr.shape[1] != 3:
        raise ValueError(f"expected an array of shape (n_samples, 3), got {arr.shape}")
    if arr.dtype.kind == "f":
        raise ValueError("float input is ambiguous for exact arithmetic; pass integers")
    rows = [as_triple(r) for r in arr.tolist()]
    if a is not None:
        rows = [check_gamma(r, a) for r in rows]
    return rows


def _to_object_array(rows) -> np.ndarray:
    out = np.empty((len(rows), 3), dtype=object)
    for i, r in enumerate(rows):
        out[i] = tuple(r)
    return out


class ThetaReducer(TransformerMixin, BaseEstimator):
    """Map each solution of the form equation to its kernel representative."""

    def __init__(self, a: int = 2):
        self.a = a

    def fit(self, X=None, y=None):
        if X is not None:
            check_triples(X, self.a)
        try:
            self.theta_ = enumerate_theta(self.a)
        except InfiniteThetaError:
            self.theta_ = None
        self.n_features_in_ = 3
        return self

    def transform(self, X) -> np.ndarray:
        check_is_fitted(self, "n_features_in_")
        rows = check_triples(X, self.a)
        return _to_object_array([reduce_word(r, self.a)[0] for r in rows])

    def witness_words(self, X) -> List[Word]:
        check_is_fitted(self, "n_features_in_")
        return [reduce_word(r, self.a)[1] for r in check_triples(X, self.a)]


class OrbitClassifier(ClassifierMixin, BaseEstimator):
    """Label a = 2 triples by the generator of their orbit, e.g. ``"2,1,0"``.

    ``method="mod8"`` reads the answer off residues; ``"reduce"`` runs the
    full decomposition. Both give the same labels. Nothing is learned, so
    ``fit`` only validates and records the label set.
    """

    def __init__(self, method: str = "mod8"):
        self.method = method

    def fit(self, X=None, y=None):
        if self.method not in ("mod8", "reduce"):
            raise ValueError(f"method must be 'mod8' or 'reduce', got {self.method!r}")
        if X is not None:
            check_triples(X, 2)
        self.classes_ = np.array([format_sequence(d) for d in DELTA2])
        self.n_features_in_ = 3
        return self

    def predict(self, X) -> np.ndarray:
        check_is_fitted(self, "classes_")
        rows = check_triples(X, 2)
        if self.method == "mod8":
            deltas = [classify_orbit_mod8(r) for r in rows]
        else:
            deltas = [decompose(r).delta for r in rows]
        return np.array([format_sequence(d) for d in deltas], dtype=self.classes_.dtype)
