"""scikit-learn compatible wrapper around :func:`qperceptron.grover.train`."""

from __future__ import annotations

import warnings

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.exceptions import ConvergenceWarning
from sklearn.utils.multiclass import unique_labels
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y

from .dataset import Dataset
from .grover import train
from .qft_arith import FixedPointSpec


class GroverPerceptron(ClassifierMixin, BaseEstimator):
    """Perceptron trained by Grover search over sign-magnitude weight codes.

    Features must be integers representable with ``magnitude_bits`` bits
    (scale them yourself). The two classes found in ``y`` are mapped to -1
    and +1 in sorted order.

    Parameters
    ----------
    magnitude_bits : int, default=1
        Magnitude qubits per weight and feature entry.
    iterations : int or "auto", default="auto"
        Fixed Grover iteration count, or the unknown-count schedule.
    shots : int, default=1
        Shots for the first run when ``iterations`` is an integer.
    max_restarts : int, default=20
    mode : {"reuse", "per-sample"}, default="reuse"
    backend : {"circuit", "compiled"}, default="circuit"
    random_state : int or None, default=None

    Attributes
    ----------
    coef_ : ndarray of shape (n_features,)
    classes_ : ndarray of shape (2,)
    verified_ : bool
        Whether ``coef_`` separates the training data.
    result_ : TrainResult
    """

    def __init__(
        self,
        magnitude_bits=1,
        iterations="auto",
        shots=1,
        max_restarts=20,
        mode="reuse",
        backend="circuit",
        random_state=None,
    ):
        self.magnitude_bits = magnitude_bits
        self.iterations = iterations
        self.shots = shots
        self.max_restarts = max_restarts
        self.mode = mode
        self.backend = backend
        self.random_state = random_state

    def fit(self, X, y):
        X, y = check_X_y(X, y, dtype=None)
        X = _as_integer_features(X)
        self.classes_ = unique_labels(y)
        if self.classes_.size != 2:
            raise ValueError(f"expected exactly two classes, got {self.classes_.size}")
        self.n_features_in_ = X.shape[1]
        labels = np.where(y == self.classes_[1], 1, -1)
        spec = FixedPointSpec(self.magnitude_bits)
        result = train(
            Dataset(X, labels),
            spec,
            iterations=self.iterations,
            shots=self.shots,
            seed=self.random_state,
            max_restarts=self.max_restarts,
            mode=self.mode,
            backend=self.backend,
        )
        self.result_ = result
        self.verified_ = result.verified
        if result.verified:
            self.coef_ = np.asarray(result.weight, dtype=np.int64)
        else:
            warnings.warn(
                "no separating weight found; coef_ is the last sampled candidate",
                ConvergenceWarning,
                stacklevel=2,
            )
            last = result.rounds[-1]["code"] if result.rounds else "0" * (X.shape[1] * spec.entry_width)
            self.coef_ = np.asarray(spec.decode_vector(int(last, 2), X.shape[1]), dtype=np.int64)
        self.oracle_calls_ = result.oracle_calls
        return self

    def decision_function(self, X):
        check_is_fitted(self, "coef_")
        X = check_array(X)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"X has {X.shape[1]} features, expected {self.n_features_in_}")
        return X @ self.coef_

    def predict(self, X):
        scores = self.decision_function(X)
        return np.where(scores >= 0, self.classes_[1], self.classes_[0])


def _as_integer_features(X) -> np.ndarray:
    X = np.asarray(X)
    if X.dtype.kind in "iu":
        return X.astype(np.int64)
    Xf = X.astype(float)
    if not np.all(np.isfinite(Xf)) or not np.array_equal(Xf, np.round(Xf)):
        raise ValueError("features must be integer valued")
    return Xf.astype(np.int64)
