"""Amplitude amplification over the weight register and the training loop."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import gates as g
from .circuit import Circuit, RegisterLayout, run_on, sequence
from .dataset import Dataset
from .exceptions import NoSolutionError
from .oracle import OracleBundle, marked_codes, oracle_circuit
from .qft_arith import FixedPointSpec
from .statevector import CountTable, Statevector, basis_state_from_index, marginal, measure_counts
from .version_space import separates

SCHEDULE_GROWTH = 6 / 5


@dataclass
class GroverPlan:
    N: int
    k: int | None = None
    j: int | None = None

    def __post_init__(self):
        if self.k is not None and not 0 <= self.k <= self.N:
            raise ValueError(f"marked count {self.k} outside 0..{self.N}")
        if self.j is None and self.k:
            self.j = optimal_iterations(self.N, self.k)
        if self.j is not None and self.j < 0:
            raise ValueError("iteration count must be non-negative")

    @property
    def theta(self) -> float | None:
        return None if self.k is None else math.asin(math.sqrt(self.k / self.N))


def optimal_iterations(N: int, k: int) -> int:
    """floor(pi/4 * sqrt(N/k)), at least 1."""
    if k <= 0:
        raise NoSolutionError("no marked items; use the unknown-count schedule")
    if k > N:
        raise ValueError("more marked items than candidates")
    return max(1, math.floor(math.pi / 4 * math.sqrt(N / k)))


def analytic_success(N: int, k: int, j: int) -> float:
    """Probability of measuring a marked item after ``j`` Grover iterations."""
    if not 0 < k <= N:
        raise ValueError("need 0 < k <= N")
    return math.sin((2 * j + 1) * math.asin(math.sqrt(k / N))) ** 2


def uniform_superposition_circuit(layout: RegisterLayout, weight_register: Sequence[int]) -> Circuit:
    return Circuit(layout, tuple(g.h(q) for q in weight_register))


def diffusion_circuit(layout: RegisterLayout, weight_register: Sequence[int]) -> Circuit:
    """Reflection about the uniform state of the register, up to a global phase of -1."""
    reg = list(weight_register)
    hs = [g.h(q) for q in reg]
    xs = [g.x(q) for q in reg]
    return sequence(layout, [*hs, *xs, g.mcphase(math.pi, reg[:-1], reg[-1]), *xs, *hs])


def grover_circuit(bundle: OracleBundle, j: int) -> Circuit:
    """Uniform superposition followed by ``j`` rounds of oracle then diffusion."""
    if j < 0:
        raise ValueError("iteration count must be non-negative")
    layout, w = bundle.layout, bundle.weight_register
    step = sequence(layout, [bundle.circuit, diffusion_circuit(layout, w)])
    return sequence(layout, [uniform_superposition_circuit(layout, w), *([step] * j)])


def _marked_probability(state: Statevector, weight_register, marked: np.ndarray) -> float:
    if marked.size == 0:
        return 0.0
    return float(marginal(state, weight_register)[marked].sum())


class GroverRunner:
    """Simulates Grover runs for one oracle.

    ``backend="circuit"`` applies the full oracle circuit on every qubit.
    ``backend="compiled"`` simulates only the weight register and applies the
    oracle as its phase table, which is read off the oracle circuit itself
    (and rejected unless every scratch qubit comes back to |0>).
    """

    def __init__(self, bundle: OracleBundle, backend: str = "circuit", marked: set[str] | None = None):
        if backend not in ("circuit", "compiled"):
            raise ValueError(f"unknown backend {backend!r}")
        self.bundle = bundle
        self.backend = backend
        self._marked = marked
        width = len(bundle.weight_register)
        if backend == "compiled":
            self.layout = RegisterLayout({"w": range(width)})
            self.register = tuple(range(width))
        else:
            self.layout = bundle.layout
            self.register = bundle.weight_register
        self._diffusion = diffusion_circuit(self.layout, self.register)

    @property
    def marked(self) -> set[str]:
        if self._marked is None:
            self._marked = marked_codes(self.bundle)
        return self._marked

    def marked_indices(self) -> np.ndarray:
        return np.array(sorted(int(c, 2) for c in self.marked), dtype=np.int64)

    def _apply_oracle(self, state: Statevector) -> None:
        if self.backend == "circuit":
            run_on(self.bundle.circuit, state)
        else:
            idx = self.marked_indices()
            state.amplitudes[idx] *= -1.0

    def run(self, j: int, trace: bool = True) -> tuple[Statevector, list[float]]:
        """Final state after ``j`` iterations and the marked probability after each of 0..j."""
        layout = self.layout
        state = basis_state_from_index(layout.total_qubits, 0)
        run_on(uniform_superposition_circuit(layout, self.register), state)
        marked = self.marked_indices() if trace else None
        probs = [_marked_probability(state, self.register, marked)] if trace else []
        for _ in range(j):
            self._apply_oracle(state)
            run_on(self._diffusion, state)
            if trace:
                probs.append(_marked_probability(state, self.register, marked))
        return state, probs

    def sample(self, state: Statevector, shots: int, seed) -> CountTable:
        return measure_counts(state, self.register, shots, seed)


@dataclass
class TrainResult:
    weight: tuple[int, ...] | None
    weight_code: str | None
    oracle_calls: int
    shots_used: int
    verified: bool
    trace: list[float] = field(default_factory=list)
    rounds: list[dict] = field(default_factory=list)
    histogram: CountTable | None = None


def train(
    d: Dataset,
    spec: FixedPointSpec,
    iterations: int | str = "auto",
    shots: int = 1,
    seed=None,
    max_restarts: int = 20,
    mode: str = "reuse",
    backend: str = "circuit",
    bundle: OracleBundle | None = None,
    runner: GroverRunner | None = None,
) -> TrainResult:
    """Search for a separating weight with Grover runs and classical verification.

    With an explicit iteration count the first run uses ``shots`` shots and
    the most frequent code is checked. In ``"auto"`` mode, and after any
    failed check, rounds follow the unknown-count schedule: the bound ``m``
    starts at 1 and grows by 6/5 per round up to sqrt(N); each round draws
    ``j`` uniformly from ``0..ceil(m)-1`` and measures a single shot.

    Every shot is a separate circuit execution, so each one is charged ``j``
    oracle calls. ``histogram`` holds the counts of the first run and
    ``trace`` the marked probabilities of the last one.
    """
    if bundle is None:
        bundle = runner.bundle if runner is not None else oracle_circuit(d, spec, mode)
    if runner is None:
        runner = GroverRunner(bundle, backend=backend)
    rng = np.random.default_rng(seed)
    N = bundle.num_codes
    result = TrainResult(None, None, 0, 0, False)

    def attempt(j: int, n_shots: int) -> bool:
        state, trace = runner.run(j)
        counts = runner.sample(state, n_shots, rng)
        result.oracle_calls += j * n_shots
        result.shots_used += n_shots
        code = counts.most_common()[0][0]
        weight = bundle.decode(code)
        ok = separates(weight, d)
        result.rounds.append({"iterations": j, "shots": n_shots, "code": code, "verified": ok})
        result.trace = trace
        if result.histogram is None:
            result.histogram = counts
        if ok:
            result.weight, result.weight_code, result.verified = weight, code, True
        return ok

    if iterations != "auto":
        if attempt(int(iterations), shots):
            return result
    m = 1.0
    cap = math.sqrt(N)
    for _ in range(max_restarts):
        j = int(rng.integers(0, math.ceil(m)))
        if attempt(j, 1):
            return result
        m = min(SCHEDULE_GROWTH * m, cap)
    return result
