"""Labelled integer datasets and their JSON file format.

File layout::

    {"features": 2, "samples": [{"x": [1, 0], "y": -1}, ...]}
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from .exceptions import DatasetError


@dataclass(frozen=True)
class Dataset:
    X: np.ndarray  # (K, n) int64
    y: np.ndarray  # (K,) values in {+1, -1}

    def __post_init__(self):
        X = np.asarray(self.X, dtype=np.int64)
        y = np.asarray(self.y, dtype=np.int64)
        if X.ndim != 2:
            raise DatasetError(f"X must be 2-D, got shape {X.shape}")
        if y.shape != (X.shape[0],):
            raise DatasetError(f"y has shape {y.shape}, expected ({X.shape[0]},)")
        if not np.isin(y, (-1, 1)).all():
            raise DatasetError("labels must be +1 or -1")
        X.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)

    @classmethod
    def from_pairs(cls, pairs, n_features: int | None = None) -> Dataset:
        pairs = list(pairs)
        if n_features is None:
            if not pairs:
                raise DatasetError("cannot infer the dimension of an empty dataset")
            n_features = len(pairs[0][0])
        X = np.array([list(x) for x, _ in pairs], dtype=np.int64).reshape(len(pairs), n_features)
        return cls(X, np.array([y for _, y in pairs], dtype=np.int64))

    @property
    def K(self) -> int:
        return self.X.shape[0]

    @property
    def n(self) -> int:
        return self.X.shape[1]

    def merged(self) -> np.ndarray:
        """Label-merged vectors ``y_k * x_k``."""
        return self.X * self.y[:, None]

    def to_json(self) -> dict:
        return {
            "features": self.n,
            "samples": [{"x": [int(v) for v in x], "y": int(y)} for x, y in zip(self.X, self.y)],
        }


def parse_dataset(obj) -> Dataset:
    """Validate a decoded JSON object; errors name the offending field."""
    if not isinstance(obj, dict):
        raise DatasetError("top level: expected an object with 'features' and 'samples'")
    n = obj.get("features")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise DatasetError(f"features: expected a positive integer, got {n!r}")
    samples = obj.get("samples")
    if not isinstance(samples, list):
        raise DatasetError("samples: expected a list")
    if not samples:
        raise DatasetError("samples: at least one sample is required")
    pairs = []
    for i, s in enumerate(samples):
        where = f"samples[{i}]"
        if not isinstance(s, dict):
            raise DatasetError(f"{where}: expected an object")
        x, y = s.get("x"), s.get("y")
        if not isinstance(x, list) or len(x) != n:
            raise DatasetError(f"{where}.x: expected a list of {n} integers")
        for j, v in enumerate(x):
            if not isinstance(v, int) or isinstance(v, bool):
                raise DatasetError(f"{where}.x[{j}]: expected an integer, got {v!r}")
        if y not in (1, -1) or isinstance(y, bool):
            raise DatasetError(f"{where}.y: expected 1 or -1, got {y!r}")
        pairs.append((x, y))
    return Dataset.from_pairs(pairs, n)


def load_dataset(path) -> Dataset:
    """Read a dataset file. ``builtin:d4`` names the bundled 4-sample example."""
    if str(path).startswith("builtin:"):
        name = str(path).split(":", 1)[1]
        try:
            text = resources.files("qperceptron.data").joinpath(f"{name}.json").read_text()
        except FileNotFoundError as exc:
            raise DatasetError(f"no bundled dataset named {name!r}") from exc
    else:
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise DatasetError(f"{path}: {exc.strerror}") from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DatasetError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    return parse_dataset(obj)


def example_dataset() -> Dataset:
    """The bundled 4-sample, 2-feature example with a unique separator (-1, 1)."""
    return load_dataset("builtin:d4")
