"""Gate-sequence circuits over named qubit registers."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .decompose import elementary_cost
from .exceptions import StructuralError
from .gates import Gate
from .statevector import (
    Statevector,
    apply_gate,
    basis_state_from_index,
    init_basis_state,
)


class RegisterLayout:
    """Named, pairwise disjoint qubit registers.

    Register qubits are listed least significant first.
    """

    def __init__(self, registers: Mapping[str, Sequence[int]], total_qubits: int | None = None):
        regs = {name: tuple(int(q) for q in qs) for name, qs in registers.items()}
        seen: dict[int, str] = {}
        for name, qs in regs.items():
            for q in qs:
                if q in seen:
                    raise StructuralError(f"qubit {q} is in both {seen[q]!r} and {name!r}")
                seen[q] = name
        needed = max(seen) + 1 if seen else 0
        if total_qubits is None:
            total_qubits = needed
        if total_qubits < needed:
            raise StructuralError(f"registers use qubit {needed - 1} but total is {total_qubits}")
        self._registers = regs
        self.total_qubits = int(total_qubits)

    @classmethod
    def contiguous(cls, sizes: Iterable[tuple[str, int]]) -> RegisterLayout:
        """Allocate registers back to back in the order given."""
        regs, start = {}, 0
        for name, size in sizes:
            if size < 0:
                raise StructuralError(f"register {name!r} has negative size")
            if name in regs:
                raise StructuralError(f"duplicate register name {name!r}")
            regs[name] = tuple(range(start, start + size))
            start += size
        return cls(regs, start)

    def __getitem__(self, name: str) -> tuple[int, ...]:
        return self._registers[name]

    def __contains__(self, name: str) -> bool:
        return name in self._registers

    def __iter__(self):
        return iter(self._registers)

    def items(self):
        return self._registers.items()

    @property
    def names(self) -> list[str]:
        return list(self._registers)

    def owner(self, qubit: int) -> str | None:
        for name, qs in self._registers.items():
            if qubit in qs:
                return name
        return None

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, RegisterLayout)
            and self.total_qubits == other.total_qubits
            and self._registers == other._registers
        )

    def __hash__(self) -> int:
        return hash((self.total_qubits, tuple(self._registers.items())))

    def __repr__(self) -> str:
        body = ", ".join(f"{k}={len(v)}" for k, v in self._registers.items())
        return f"RegisterLayout({body}; total={self.total_qubits})"


@dataclass(frozen=True)
class Circuit:
    layout: RegisterLayout
    gates: tuple[Gate, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        n = self.layout.total_qubits
        for gate in self.gates:
            if any(q >= n for q in gate.qubits):
                raise StructuralError(f"{gate} exceeds the {n}-qubit layout")

    @property
    def num_qubits(self) -> int:
        return self.layout.total_qubits

    def __len__(self) -> int:
        return len(self.gates)

    def __add__(self, other: Circuit) -> Circuit:
        return compose(self, other)


def compose(a: Circuit, b: Circuit) -> Circuit:
    """Gates of ``a`` followed by gates of ``b``; layouts must match."""
    if a.layout != b.layout:
        raise StructuralError(f"layout mismatch: {a.layout!r} vs {b.layout!r}")
    return Circuit(a.layout, a.gates + b.gates)


def sequence(layout: RegisterLayout, parts: Iterable) -> Circuit:
    """Concatenate circuits and/or bare gates on a shared layout."""
    out: list[Gate] = []
    for part in parts:
        if isinstance(part, Gate):
            out.append(part)
        else:
            if part.layout != layout:
                raise StructuralError("layout mismatch in sequence")
            out.extend(part.gates)
    return Circuit(layout, tuple(out))


def inverse(c: Circuit) -> Circuit:
    return Circuit(c.layout, tuple(gate.inverse() for gate in reversed(c.gates)))


def run_on(c: Circuit, state: Statevector) -> Statevector:
    """Apply every gate of ``c`` to ``state`` in place and return it."""
    if state.num_qubits != c.num_qubits:
        raise StructuralError(f"state has {state.num_qubits} qubits, circuit {c.num_qubits}")
    for gate in c.gates:
        apply_gate(state, gate)
    return state


def simulate(c: Circuit, initial: str | int | None = None) -> Statevector:
    """Run ``c`` from a basis state given as a bitstring (qubit 0 last) or index."""
    n = c.num_qubits
    if initial is None:
        state = basis_state_from_index(n, 0)
    elif isinstance(initial, str):
        state = init_basis_state(n, initial)
    else:
        state = basis_state_from_index(n, int(initial))
    return run_on(c, state)


@dataclass
class GateStats:
    counts: dict[str, int] = field(default_factory=dict)
    total: int = 0
    depth: int = 0
    num_qubits: int = 0
    # gate count after rewriting multi-controlled gates into 1-2 qubit gates
    elementary_total: int = 0

    def as_dict(self) -> dict:
        return {
            "counts": dict(sorted(self.counts.items())),
            "total": self.total,
            "depth": self.depth,
            "num_qubits": self.num_qubits,
            "elementary_total": self.elementary_total,
        }


def stats(c: Circuit) -> GateStats:
    counts: Counter[str] = Counter()
    elementary = 0
    depth = 0
    layer: set[int] = set()
    for gate in c.gates:
        counts[gate.kind] += 1
        elementary += elementary_cost(gate.kind, len(gate.controls))
        qs = set(gate.qubits)
        if not layer or layer & qs:
            depth += 1
            layer = set(qs)
        else:
            layer |= qs
    return GateStats(
        counts=dict(counts),
        total=sum(counts.values()),
        depth=depth,
        num_qubits=c.num_qubits,
        elementary_total=elementary,
    )


def touches_only_as_control(c: Circuit, qubits: Iterable[int]) -> bool:
    """True when no non-diagonal gate changes any of ``qubits``.

    Such qubits keep their computational-basis value through the circuit, so
    the circuit is block diagonal with respect to them.
    """
    qs = set(qubits)
    for gate in c.gates:
        if gate.is_diagonal:
            continue
        if qs.intersection(gate.targets):
            return False
    return True


def empty(layout: RegisterLayout) -> Circuit:
    return Circuit(layout, ())


__all__ = [
    "Circuit",
    "Gate",
    "GateStats",
    "RegisterLayout",
    "compose",
    "empty",
    "inverse",
    "run_on",
    "sequence",
    "simulate",
    "stats",
    "touches_only_as_control",
]
