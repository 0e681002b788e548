"""Grover oracle for perceptron training.

For every basis state of the weight register (all other qubits |0>) the
oracle returns ``-|w>`` when the decoded weight classifies every sample with
its own label and ``+|w>`` otherwise.

Each training sample gets one classifier stage. A stage loads the
label-merged vector ``x~ = y x`` into a data register with X gates, forms the
signed partial products ``w_j x~_j`` (QFT multiplier on magnitudes, CNOT pair
on signs), turns each into a two's-complement code and accumulates them with
QFT adders. The classification bit is the negated sign bit of the
accumulator. Ties ``w.x = 0`` classify as +1, so a label -1 sample needs
``w.x~ >= 1``: its accumulator starts at the code of -1 instead of 0.

Register modes:

``reuse``
    one data entry, one product and one accumulator register shared by all
    stages; every stage uncomputes its scratch before the next one starts.
``per-sample``
    dedicated data, product and accumulator registers for every sample and
    feature; scratch is uncomputed once, after the phase flip.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import gates as g
from .circuit import (
    Circuit,
    GateStats,
    RegisterLayout,
    inverse,
    run_on,
    sequence,
    stats,
    touches_only_as_control,
)
from .dataset import Dataset
from .exceptions import CapacityError, DatasetError, EncodingError, InvariantViolation, StructuralError
from .qft_arith import (
    FixedPointSpec,
    adder_circuit,
    multiplier_circuit,
    sign_xor_circuit,
    to_complement_circuit,
)
from .statevector import Statevector, basis_state_from_index, index_to_bits

MODES = ("reuse", "per-sample")
MAX_PROBE_QUBITS = 24


@dataclass(frozen=True)
class EncodedDataset:
    """Label-merged sample vectors with their original labels.

    The label is kept because the tie convention makes label -1 samples need
    a strictly positive merged product.
    """

    merged: tuple[tuple[int, ...], ...]
    labels: tuple[int, ...]
    spec: FixedPointSpec

    @property
    def K(self) -> int:
        return len(self.merged)

    @property
    def n(self) -> int:
        return len(self.merged[0]) if self.merged else 0

    def codes(self) -> list[int]:
        return [self.spec.encode_vector(v) for v in self.merged]

    def to_dataset(self) -> Dataset:
        X = np.array(self.merged, dtype=np.int64) * np.array(self.labels)[:, None]
        return Dataset(X.reshape(self.K, self.n), np.array(self.labels))


def encode_dataset(d: Dataset, spec: FixedPointSpec) -> EncodedDataset:
    merged = []
    for k, (x, y) in enumerate(zip(d.X, d.y)):
        row = []
        for j, v in enumerate(x):
            try:
                spec.check(int(v))
            except EncodingError as exc:
                raise EncodingError(f"samples[{k}].x[{j}]: {exc}") from None
            row.append(int(y) * int(v))
        merged.append(tuple(row))
    return EncodedDataset(tuple(merged), tuple(int(y) for y in d.y), spec)


# ------------------------------------------------------------------ layout


def oracle_layout(n: int, K: int, spec: FixedPointSpec, mode: str = "reuse") -> RegisterLayout:
    if mode not in MODES:
        raise StructuralError(f"unknown register mode {mode!r}; choose from {MODES}")
    if n < 1 or K < 1:
        raise DatasetError("need at least one feature and one sample")
    t1, m = spec.entry_width, spec.accumulator_width(n)
    sizes = [("w", n * t1)]
    if mode == "reuse":
        sizes += [("x", t1), ("p", m), ("ps", 1), ("acc", m)]
    else:
        for k in range(K):
            sizes.append((f"x{k}", n * t1))
            for j in range(n):
                sizes += [(f"p{k}_{j}", m), (f"ps{k}_{j}", 1)]
            sizes.append((f"acc{k}", m))
    sizes.append(("c", K))
    return RegisterLayout.contiguous(sizes)


def _entry(reg: Sequence[int], j: int, spec: FixedPointSpec) -> tuple[list[int], int]:
    """Magnitude qubits and sign qubit of entry ``j`` in a vector register."""
    base = j * spec.entry_width
    return list(reg[base : base + spec.t]), reg[base + spec.t]


def _load(value: int, mag: Sequence[int], sign: int) -> list[g.Gate]:
    out = [g.x(q) for i, q in enumerate(mag) if (abs(value) >> i) & 1]
    if value < 0:
        out.append(g.x(sign))
    return out


def _stage_registers(layout: RegisterLayout, n: int, k: int, spec: FixedPointSpec, mode: str):
    """(data entries, product registers, accumulator) used by stage ``k``."""
    if mode == "reuse":
        x = layout["x"]
        data = [_entry(x, 0, spec)] * n
        prods = [(list(layout["p"]), layout["ps"][0])] * n
        acc = list(layout["acc"])
    else:
        data = [_entry(layout[f"x{k}"], j, spec) for j in range(n)]
        prods = [(list(layout[f"p{k}_{j}"]), layout[f"ps{k}_{j}"][0]) for j in range(n)]
        acc = list(layout[f"acc{k}"])
    return data, prods, acc


def inner_product_circuit(
    layout: RegisterLayout,
    merged: Sequence[int],
    label: int,
    stage_index: int,
    spec: FixedPointSpec,
    mode: str = "reuse",
) -> Circuit:
    """Leave ``w . x~`` (minus 1 when ``label == -1``) in the stage accumulator."""
    n = len(merged)
    w = layout["w"]
    data, prods, acc = _stage_registers(layout, n, stage_index, spec, mode)
    parts: list = []
    if label == -1:
        parts += [g.x(q) for q in acc]
    for j, value in enumerate(merged):
        w_mag, w_sign = _entry(w, j, spec)
        x_mag, x_sign = data[j]
        p, ps = prods[j]
        term = sequence(
            layout,
            [
                *_load(value, x_mag, x_sign),
                multiplier_circuit(layout, w_mag, x_mag, p[: 2 * spec.t]),
                sign_xor_circuit(layout, w_sign, x_sign, ps),
                to_complement_circuit(layout, ps, p),
            ],
        )
        parts.append(term)
        parts.append(adder_circuit(layout, p, acc))
        if mode == "reuse":
            parts.append(inverse(term))
    return sequence(layout, parts)


def _copy_classification(layout: RegisterLayout, acc: Sequence[int], c: int) -> list[g.Gate]:
    # c ^= NOT sign(acc)
    return [g.cnot(acc[-1], c), g.x(c)]


def classifier_stage_circuit(
    layout: RegisterLayout,
    encoded_sample: Sequence[int],
    stage_index: int,
    spec: FixedPointSpec,
    label: int = 1,
    mode: str = "reuse",
) -> Circuit:
    """Toggle ``c[stage_index]`` iff the weight classifies the sample correctly.

    In ``reuse`` mode all scratch is returned to |0>; in ``per-sample`` mode
    the stage's own scratch registers keep the inner product.
    """
    if len(encoded_sample) != len(layout["w"]) // spec.entry_width:
        raise StructuralError("sample dimension does not match the weight register")
    compute = inner_product_circuit(layout, encoded_sample, label, stage_index, spec, mode)
    _, _, acc = _stage_registers(layout, len(encoded_sample), stage_index, spec, mode)
    copy = _copy_classification(layout, acc, layout["c"][stage_index])
    parts = [compute, *copy]
    if mode == "reuse":
        parts.append(inverse(compute))
    return sequence(layout, parts)


@dataclass
class OracleBundle:
    circuit: Circuit
    layout: RegisterLayout
    encoded: EncodedDataset
    spec: FixedPointSpec
    mode: str
    gate_stats: GateStats = field(default=None)

    def __post_init__(self):
        if self.gate_stats is None:
            self.gate_stats = stats(self.circuit)

    @property
    def qubit_count(self) -> int:
        return self.layout.total_qubits

    @property
    def weight_register(self) -> tuple[int, ...]:
        return self.layout["w"]

    @property
    def n(self) -> int:
        return len(self.weight_register) // self.spec.entry_width

    @property
    def num_codes(self) -> int:
        return 1 << len(self.weight_register)

    def decode(self, code: int | str) -> tuple[int, ...]:
        if isinstance(code, str):
            code = int(code, 2)
        return self.spec.decode_vector(code, self.n)


def oracle_circuit(d: EncodedDataset | Dataset, spec: FixedPointSpec, mode: str = "reuse") -> OracleBundle:
    if isinstance(d, Dataset):
        d = encode_dataset(d, spec)
    if d.K == 0:
        raise DatasetError("the oracle needs at least one sample")
    layout = oracle_layout(d.n, d.K, spec, mode)
    stages = sequence(
        layout,
        [
            classifier_stage_circuit(layout, xt, k, spec, label=y, mode=mode)
            for k, (xt, y) in enumerate(zip(d.merged, d.labels))
        ],
    )
    c = layout["c"]
    flip = g.mcphase(math.pi, c[:-1], c[-1])
    circuit = sequence(layout, [stages, flip, inverse(stages)])
    return OracleBundle(circuit, layout, d, spec, mode)


# ------------------------------------------------------------------ probing


@dataclass
class OracleResponse:
    """Per weight code: the phase it picked up and the probability that every
    non-weight qubit came back to |0>."""

    phases: np.ndarray
    clean_probability: np.ndarray
    width: int

    def marked(self) -> set[str]:
        return {index_to_bits(int(i), self.width) for i in np.flatnonzero(self.phases.real < 0)}

    def max_phase_error(self) -> float:
        return float(np.max(np.abs(np.abs(self.phases) - 1.0)))

    def max_phase_impurity(self) -> float:
        """Distance of each phase from the nearest of +1 / -1."""
        return float(np.max(np.minimum(np.abs(self.phases - 1), np.abs(self.phases + 1))))


def oracle_response(bundle: OracleBundle, method: str = "batched") -> OracleResponse:
    """Simulate the oracle on every weight basis input.

    ``batched`` runs once on the uniform superposition of weight codes. It is
    exact because no gate ever changes a weight qubit (checked), so each code
    evolves independently. ``basis`` runs one simulation per code.
    """
    layout, circuit = bundle.layout, bundle.circuit
    total = layout.total_qubits
    if total > MAX_PROBE_QUBITS:
        raise CapacityError(f"oracle uses {total} qubits; probing is capped at {MAX_PROBE_QUBITS}")
    w = list(bundle.weight_register)
    if w != list(range(len(w))):
        raise StructuralError("weight register must occupy the lowest qubits")
    N = bundle.num_codes
    if method == "batched" and not touches_only_as_control(circuit, w):
        method = "basis"
    if method == "batched":
        amps = np.zeros(1 << total, dtype=np.complex128)
        amps[:N] = 1.0 / math.sqrt(N)
        state = run_on(circuit, Statevector(amps))
        out = state.amplitudes[:N] * math.sqrt(N)
        probs = np.abs(state.amplitudes.reshape(-1, N)) ** 2 * N
    elif method == "basis":
        out = np.empty(N, dtype=np.complex128)
        probs = np.empty((1, N))
        for code in range(N):
            state = run_on(circuit, basis_state_from_index(total, code))
            out[code] = state.amplitudes[code]
            probs[0, code] = abs(state.amplitudes[code]) ** 2
        return OracleResponse(out, probs[0], len(w))
    else:
        raise ValueError(f"unknown method {method!r}")
    return OracleResponse(out, probs[0], len(w))


def marked_codes(bundle: OracleBundle, method: str = "batched", tol: float = 1e-9) -> set[str]:
    """Weight codes whose phase the oracle flips; raises if scratch is left dirty."""
    resp = oracle_response(bundle, method)
    dirty = np.flatnonzero(resp.clean_probability < 1.0 - tol)
    if dirty.size:
        raise InvariantViolation(
            f"scratch not returned to |0> for codes {[index_to_bits(int(i), resp.width) for i in dirty[:5]]}"
        )
    if resp.max_phase_impurity() > tol:
        raise InvariantViolation(f"oracle phases deviate from +-1 by {resp.max_phase_impurity():.3g}")
    return resp.marked()
