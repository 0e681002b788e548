"""Classical ground truth and sampling analytics for the perceptron search.

A weight vector ``w`` classifies ``x`` as +1 when ``w . x >= 0`` and -1
otherwise; it separates a dataset when every sample gets its own label. Note
that a sample with label -1 therefore needs ``w . x < 0`` strictly.

The band probabilities measure how likely a randomly drawn weight
perturbation ``w`` keeps ``|w . x| < gamma`` for a unit vector ``x``:

* uniform on the unit n-ball: the marginal of ``w . x`` has density
  proportional to ``(1 - z^2)^((n-1)/2)`` on [-1, 1];
* standard spherical Gaussian: ``w . x`` is N(0, 1), giving ``erf(gamma/sqrt 2)``.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import astuple, dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy import integrate

from .dataset import Dataset
from .exceptions import BudgetError, CapacityError, DatasetError, NoSolutionError
from .qft_arith import FixedPointSpec
from .statevector import index_to_bits

MAX_ENUMERATION_BITS = 24
CLASSICAL_QUERY_BUDGET = 10**6


def activation(w: Sequence[int], x: Sequence[int]) -> int:
    w, x = np.asarray(w), np.asarray(x)
    if w.shape != x.shape:
        raise DatasetError(f"dimension mismatch: {w.shape} vs {x.shape}")
    return 1 if int(np.dot(w, x)) >= 0 else -1


def separates(w: Sequence[int], d: Dataset) -> bool:
    """True iff ``activation(w, x_k) == y_k`` for every sample (vacuous if empty)."""
    if d.K == 0:
        return True
    w = np.asarray(w, dtype=np.int64)
    if w.shape != (d.n,):
        raise DatasetError(f"weight has shape {w.shape}, dataset dimension is {d.n}")
    predicted = np.where(d.X @ w >= 0, 1, -1)
    return bool(np.all(predicted == d.y))


def _separating_mask(d: Dataset, spec: FixedPointSpec) -> np.ndarray:
    """Boolean mask over all weight codes, vectorised enumeration."""
    bits = d.n * spec.entry_width
    if bits > MAX_ENUMERATION_BITS:
        raise CapacityError(f"{bits}-bit weight register exceeds the enumeration cap")
    codes = np.arange(1 << bits, dtype=np.int64)
    entry_mask = (1 << spec.entry_width) - 1
    W = np.empty((codes.size, d.n), dtype=np.int64)
    for j in range(d.n):
        entry = (codes >> (j * spec.entry_width)) & entry_mask
        mag = entry & spec.max_magnitude
        W[:, j] = np.where(entry >> spec.t, -mag, mag)
    if d.K == 0:
        return np.ones(codes.size, dtype=bool)
    predicted = np.where(W @ d.X.T >= 0, 1, -1)
    return np.all(predicted == d.y[None, :], axis=1)


def brute_force_separators(d: Dataset, spec: FixedPointSpec) -> list[str]:
    """Every weight code (+0/-0 duplicates included) whose weight separates ``d``.

    Codes are bitstrings of the weight register, most significant first.
    """
    mask = _separating_mask(d, spec)
    width = d.n * spec.entry_width
    return [index_to_bits(int(i), width) for i in np.flatnonzero(mask)]


def classical_search(d: Dataset, spec: FixedPointSpec, seed=None, budget: int = CLASSICAL_QUERY_BUDGET) -> int:
    """Number of uniformly drawn codes evaluated until one separates ``d``."""
    mask = _separating_mask(d, spec)
    if not mask.any():
        raise NoSolutionError("dataset has no separating weight code")
    rng = np.random.default_rng(seed)
    n_codes = mask.size
    queries = 0
    while queries < budget:
        batch = rng.integers(0, n_codes, size=min(1024, budget - queries))
        hits = np.flatnonzero(mask[batch])
        if hits.size:
            return queries + int(hits[0]) + 1
        queries += batch.size
    raise BudgetError(f"no separator found within {budget} queries")


# ------------------------------------------------------------ band probabilities


@dataclass(frozen=True)
class BandQuery:
    gamma: float
    n: int

    def __post_init__(self):
        if not 0.0 < self.gamma <= 1.0:
            raise ValueError(f"gamma must lie in (0, 1], got {self.gamma}")
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"dimension must be a positive integer, got {self.n}")


def _marginal_density(z: float, n: int) -> float:
    return (1.0 - z * z) ** ((n - 1) / 2.0)


def band_probability_uniform(q: BandQuery) -> float:
    """P(-gamma < w.x < gamma) for w uniform in the unit n-ball, by adaptive quadrature."""
    opts = dict(epsabs=1e-12, epsrel=1e-12, limit=200)
    num, _ = integrate.quad(_marginal_density, 0.0, q.gamma, args=(q.n,), **opts)
    den, _ = integrate.quad(_marginal_density, 0.0, 1.0, args=(q.n,), **opts)
    return min(1.0, num / den)


def band_probability_uniform_odd(gamma: float, k: int) -> float:
    """Closed form of the uniform band probability in dimension ``n = 2k + 1``.

    Binomial expansion of ``(1 - z^2)^k`` integrated term by term, normalised
    by the same sum at ``gamma = 1``.
    """
    if k < 0:
        raise ValueError("k must be non-negative")

    def series(g: float) -> float:
        return sum((-1) ** m * math.comb(k, m) * g ** (2 * m + 1) / (2 * m + 1) for m in range(k + 1))

    return series(gamma) / series(1.0)


def band_probability_gaussian(gamma: float) -> float:
    """P(|Z| < gamma) for Z ~ N(0, 1)."""
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    return math.erf(gamma / math.sqrt(2.0))


@dataclass(frozen=True)
class MonteCarloEstimate:
    estimate: float
    std_error: float


def sample_unit_ball(n: int, samples: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform points in the unit n-ball: Gaussian direction times U^(1/n) radius."""
    direction = rng.standard_normal((samples, n))
    direction /= np.linalg.norm(direction, axis=1, keepdims=True)
    radius = rng.random(samples) ** (1.0 / n)
    return direction * radius[:, None]


def monte_carlo_band(q: BandQuery, samples: int, seed=None) -> MonteCarloEstimate:
    if samples < 1000:
        raise ValueError("use at least 1000 samples")
    rng = np.random.default_rng(seed)
    x = np.zeros(q.n)
    x[0] = 1.0
    hits = 0
    done = 0
    chunk = 250_000
    while done < samples:
        m = min(chunk, samples - done)
        z = sample_unit_ball(q.n, m, rng) @ x
        hits += int(np.count_nonzero((z > -q.gamma) & (z < q.gamma)))
        done += m
    p = hits / samples
    return MonteCarloEstimate(p, math.sqrt(p * (1.0 - p) / samples))


@dataclass(frozen=True)
class ComparisonRow:
    gamma: float
    n: int
    p_uniform: float
    p_gaussian: float
    delta: float


COMPARISON_COLUMNS = ("gamma", "n", "p_uniform", "p_gaussian", "delta")


def comparison_table(gammas: Iterable[float], dims: Iterable[int]) -> list[ComparisonRow]:
    rows = []
    dims = list(dims)
    for gamma in gammas:
        pg = band_probability_gaussian(gamma)
        for n in dims:
            pu = band_probability_uniform(BandQuery(gamma, n))
            rows.append(ComparisonRow(float(gamma), int(n), pu, pg, pu - pg))
    return rows


def rows_to_csv(rows, columns=COMPARISON_COLUMNS) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        values = astuple(row) if hasattr(row, "__dataclass_fields__") else tuple(row)
        writer.writerow([repr(v) if isinstance(v, float) else v for v in values])
    return buf.getvalue()
