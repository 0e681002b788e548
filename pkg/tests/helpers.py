import math

import numpy as np

from qperceptron.dataset import Dataset


def single(x, y) -> Dataset:
    return Dataset.from_pairs([(x, y)])


def sin2(j: int, N: int = 16, k: int = 1) -> float:
    return math.sin((2 * j + 1) * math.asin(math.sqrt(k / N))) ** 2


def random_dataset(rng: np.random.Generator, n: int = 2, max_k: int = 4, t: int = 1) -> Dataset:
    K = int(rng.integers(1, max_k + 1))
    lim = (1 << t) - 1
    X = rng.integers(-lim, lim + 1, size=(K, n))
    y = rng.choice([-1, 1], size=K)
    return Dataset(X, y)
