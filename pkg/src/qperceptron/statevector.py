"""Dense statevector simulation.

Amplitude index ``i`` is read as a bitstring with qubit 0 as the least
significant bit. Gates are applied in place and only visit the amplitudes whose control bits
are all 1.

Sampling uses :func:`numpy.random.default_rng`, i.e. the PCG64 bit generator,
so counts are reproducible for a given seed and numpy release line.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from . import gates as g
from .exceptions import CapacityError, StructuralError

MAX_QUBITS = 26
_SQRT_HALF = 1.0 / math.sqrt(2.0)


class Statevector:
    """Mutable complex128 statevector over ``num_qubits`` qubits."""

    def __init__(self, amplitudes):
        amps = np.ascontiguousarray(amplitudes, dtype=np.complex128)
        if amps.ndim != 1:
            raise StructuralError("amplitudes must be one-dimensional")
        num_qubits = int(amps.size).bit_length() - 1
        if amps.size != 1 << num_qubits:
            raise StructuralError(f"length {amps.size} is not a power of two")
        _check_capacity(num_qubits)
        self.num_qubits = num_qubits
        self.amplitudes = amps

    @classmethod
    def zeros(cls, num_qubits: int) -> Statevector:
        return init_basis_state(num_qubits, "0" * num_qubits)

    def copy(self) -> Statevector:
        return Statevector(self.amplitudes.copy())

    def norm(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def apply(self, gate: g.Gate) -> Statevector:
        apply_gate(self, gate)
        return self

    def _tensor(self) -> np.ndarray:
        return self.amplitudes.reshape((2,) * self.num_qubits)

    def __len__(self) -> int:
        return self.amplitudes.size

    def __repr__(self) -> str:
        return f"Statevector(num_qubits={self.num_qubits})"


@dataclass
class CountTable:
    """Measurement histogram of one register.

    Keys are bitstrings written most-significant first, i.e. the last qubit
    of the measured register is the leftmost character.
    """

    entries: dict[str, int] = field(default_factory=dict)
    total_shots: int = 0

    def most_common(self) -> list[tuple[str, int]]:
        return sorted(self.entries.items(), key=lambda kv: (-kv[1], kv[0]))

    def frequency(self, bits: str) -> float:
        return self.entries.get(bits, 0) / self.total_shots if self.total_shots else 0.0


def _check_capacity(num_qubits: int) -> None:
    if not 1 <= num_qubits <= MAX_QUBITS:
        raise CapacityError(
            f"{num_qubits} qubits requested; supported range is 1..{MAX_QUBITS}"
        )


def bits_to_index(bits: str) -> int:
    """Bitstring (most significant character first) to integer."""
    if bits and set(bits) - {"0", "1"}:
        raise StructuralError(f"not a bitstring: {bits!r}")
    return int(bits, 2) if bits else 0


def index_to_bits(index: int, width: int) -> str:
    return format(index, f"0{width}b") if width else ""


def init_basis_state(num_qubits: int, bits: str) -> Statevector:
    """Computational basis state ``|bits>``; ``bits[-1]`` is qubit 0."""
    _check_capacity(num_qubits)
    if len(bits) != num_qubits:
        raise StructuralError(f"bitstring length {len(bits)} != {num_qubits} qubits")
    amps = np.zeros(1 << num_qubits, dtype=np.complex128)
    amps[bits_to_index(bits)] = 1.0
    return Statevector(amps)


def basis_state_from_index(num_qubits: int, index: int) -> Statevector:
    _check_capacity(num_qubits)
    amps = np.zeros(1 << num_qubits, dtype=np.complex128)
    amps[index] = 1.0
    return Statevector(amps)


def _slicer(n: int, fixed: dict[int, int]) -> tuple:
    idx = [slice(None)] * n
    for q, v in fixed.items():
        idx[n - 1 - q] = v
    return tuple(idx)


def _compact_view(amps: np.ndarray, n: int, qubits) -> tuple[np.ndarray, dict[int, int]]:
    """Reshape so each qubit in ``qubits`` gets its own length-2 axis.

    The untouched qubits between them are folded into single axes, which
    keeps the view low-dimensional however many qubits the state has.
    Returns the view and a map qubit -> axis.
    """
    shape, axes = [], {}
    hi = n
    for q in sorted(qubits, reverse=True):
        shape.append(1 << (hi - q - 1))
        axes[q] = len(shape)
        shape.append(2)
        hi = q
    shape.append(1 << hi)
    return amps.reshape(shape), axes


def _index(ndim: int, axes: dict[int, int], fixed: dict[int, int]) -> tuple:
    idx = [slice(None)] * ndim
    for q, v in fixed.items():
        idx[axes[q]] = v
    return tuple(idx)


def apply_gate(state: Statevector, gate: g.Gate, kernel: str = "compiled") -> None:
    """Apply ``gate`` to ``state`` in place.

    ``kernel="compiled"`` uses the numba loops in :mod:`._kernels`;
    ``kernel="numpy"`` uses slice arithmetic on a reshaped view and serves as
    an independent reference.
    """
    n = state.num_qubits
    qubits = gate.qubits
    if any(q >= n for q in qubits):
        raise StructuralError(f"{gate} addresses a qubit outside 0..{n - 1}")
    if kernel == "compiled":
        _apply_compiled(state.amplitudes, n, gate)
    elif kernel == "numpy":
        _apply_numpy(state.amplitudes, n, gate)
    else:
        raise ValueError(f"unknown kernel {kernel!r}")


def _apply_compiled(amps: np.ndarray, n: int, gate: g.Gate) -> None:
    phase, flip, hadamard, swap = _kernels.kernels_for(n)
    positions = _kernels.positions_array(gate.qubits)
    kind = gate.kind
    if kind in g.PHASE_KINDS:
        mask = 0
        for q in gate.qubits:
            mask |= 1 << q
        phase(amps, positions, mask, complex(math.cos(gate.angle), math.sin(gate.angle)))
    elif kind == g.H:
        hadamard(amps, positions, 1 << gate.targets[0], _SQRT_HALF)
    elif kind in (g.X, g.CNOT, g.MCX):
        ctl = 0
        for q in gate.controls:
            ctl |= 1 << q
        flip(amps, positions, ctl, 1 << gate.targets[0])
    elif kind == g.SWAP:
        a, b = gate.targets
        swap(amps, positions, 1 << a, 1 << b)
    else:  # pragma: no cover
        raise StructuralError(f"unsupported gate kind {kind}")


def _apply_numpy(amps: np.ndarray, n: int, gate: g.Gate) -> None:
    qubits = gate.qubits
    view, axes = _compact_view(amps, n, qubits)
    nd = view.ndim
    ctl = {q: 1 for q in gate.controls}
    kind = gate.kind

    if kind in g.PHASE_KINDS:
        # diagonal: only the all-ones slice picks up the phase
        ctl[gate.targets[0]] = 1
        view[_index(nd, axes, ctl)] *= complex(math.cos(gate.angle), math.sin(gate.angle))
        return

    if kind == g.SWAP:
        a, b = gate.targets
        i01 = _index(nd, axes, {a: 0, b: 1})
        i10 = _index(nd, axes, {a: 1, b: 0})
        tmp = view[i01].copy()
        view[i01] = view[i10]
        view[i10] = tmp
        return

    t = gate.targets[0]
    i0 = _index(nd, axes, {**ctl, t: 0})
    i1 = _index(nd, axes, {**ctl, t: 1})
    if kind == g.H:
        a = view[i0].copy()
        b = view[i1]
        view[i0] += b
        a -= b
        view[i1] = a
        view[i0] *= _SQRT_HALF
        view[i1] *= _SQRT_HALF
    elif kind in (g.X, g.CNOT, g.MCX):
        tmp = view[i0].copy()
        view[i0] = view[i1]
        view[i1] = tmp
    else:  # pragma: no cover - Gate.validate rejects unknown kinds
        raise StructuralError(f"unsupported gate kind {kind}")


def _register_indices(state: Statevector, register) -> list[int]:
    reg = [int(q) for q in register]
    if len(set(reg)) != len(reg):
        raise StructuralError(f"register has repeated qubits: {reg}")
    if any(not 0 <= q < state.num_qubits for q in reg):
        raise StructuralError(f"register {reg} out of range for {state.num_qubits} qubits")
    return reg


def marginal(state: Statevector, register) -> np.ndarray:
    """Distribution of the register value (register[0] = least significant bit)."""
    reg = _register_indices(state, register)
    n = state.num_qubits
    probs = state.probabilities().reshape((2,) * n)
    keep = [n - 1 - q for q in reg]
    drop = tuple(ax for ax in range(n) if ax not in keep)
    reduced = probs.sum(axis=drop) if drop else probs
    # remaining axes are in increasing-axis order; reorder so register[-1]
    # is the slowest (most significant) axis
    remaining = sorted(keep)
    order = [remaining.index(ax) for ax in reversed(keep)]
    return np.transpose(reduced, order).reshape(-1)


def probability(state: Statevector, register, value: str) -> float:
    """Probability that ``register`` reads ``value`` (most significant first)."""
    reg = _register_indices(state, register)
    if len(value) != len(reg):
        raise StructuralError(f"value {value!r} does not match register width {len(reg)}")
    fixed = {q: int(value[len(reg) - 1 - i]) for i, q in enumerate(reg)}
    sub = state._tensor()[_slicer(state.num_qubits, fixed)]
    return float(min(1.0, np.sum(np.abs(sub) ** 2)))


def measure_counts(state: Statevector, register, shots: int, seed) -> CountTable:
    """Draw ``shots`` i.i.d. register outcomes; deterministic for a given seed."""
    if shots < 1:
        raise StructuralError("shots must be at least 1")
    reg = _register_indices(state, register)
    p = marginal(state, reg)
    p = np.clip(p, 0.0, None)
    p /= p.sum()
    rng = np.random.default_rng(seed)
    draws = rng.multinomial(shots, p)
    width = len(reg)
    entries = {index_to_bits(int(i), width): int(c) for i, c in enumerate(draws) if c}
    return CountTable(entries, shots)
