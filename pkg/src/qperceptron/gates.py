"""Gate records and small constructors.

Qubit indices are plain integers. ``controls`` is always a tuple, possibly
empty; ``targets`` holds one index except for ``SWAP`` which holds two.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .exceptions import StructuralError

H = "H"
X = "X"
CNOT = "CNOT"
SWAP = "SWAP"
CPHASE = "CPHASE"
MCPHASE = "MCPHASE"
MCX = "MCX"

KINDS = (H, X, CNOT, SWAP, CPHASE, MCPHASE, MCX)
PHASE_KINDS = (CPHASE, MCPHASE)
# kinds whose matrix is diagonal in the computational basis
DIAGONAL_KINDS = PHASE_KINDS


@dataclass(frozen=True)
class Gate:
    kind: str
    targets: tuple[int, ...]
    controls: tuple[int, ...] = ()
    angle: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "targets", tuple(int(q) for q in self.targets))
        object.__setattr__(self, "controls", tuple(int(q) for q in self.controls))
        self.validate()

    def validate(self) -> None:
        kind, t, c = self.kind, self.targets, self.controls
        if kind not in KINDS:
            raise StructuralError(f"unknown gate kind {kind!r}")
        n_targets = 2 if kind == SWAP else 1
        if len(t) != n_targets:
            raise StructuralError(f"{kind} needs {n_targets} target(s), got {t}")
        if kind in (H, X, SWAP) and c:
            raise StructuralError(f"{kind} takes no controls")
        if kind in (CNOT, CPHASE) and len(c) != 1:
            raise StructuralError(f"{kind} needs exactly one control, got {c}")
        qubits = t + c
        if len(set(qubits)) != len(qubits):
            raise StructuralError(f"{kind}: targets {t} and controls {c} overlap")
        if any(q < 0 for q in qubits):
            raise StructuralError(f"{kind}: negative qubit index in {qubits}")
        if kind in PHASE_KINDS:
            if self.angle is None or not math.isfinite(self.angle):
                raise StructuralError(f"{kind} needs a finite angle, got {self.angle}")
        elif self.angle is not None:
            raise StructuralError(f"{kind} takes no angle")

    @property
    def qubits(self) -> tuple[int, ...]:
        return self.controls + self.targets

    @property
    def is_diagonal(self) -> bool:
        return self.kind in DIAGONAL_KINDS

    def inverse(self) -> Gate:
        if self.kind in PHASE_KINDS:
            return Gate(self.kind, self.targets, self.controls, -self.angle)
        return self

    def remap(self, mapping) -> Gate:
        """Return the same gate acting on ``mapping[q]`` for each qubit ``q``."""
        return Gate(
            self.kind,
            tuple(mapping[q] for q in self.targets),
            tuple(mapping[q] for q in self.controls),
            self.angle,
        )

    def __str__(self) -> str:
        arg = f"({self.angle:.6g})" if self.angle is not None else ""
        ctl = f" ctrl={list(self.controls)}" if self.controls else ""
        return f"{self.kind}{arg} tgt={list(self.targets)}{ctl}"


def h(q: int) -> Gate:
    return Gate(H, (q,))


def x(q: int) -> Gate:
    return Gate(X, (q,))


def cnot(control: int, target: int) -> Gate:
    return Gate(CNOT, (target,), (control,))


def swap(a: int, b: int) -> Gate:
    return Gate(SWAP, (a, b))


def cphase(angle: float, control: int, target: int) -> Gate:
    return Gate(CPHASE, (target,), (control,), float(angle))


def mcphase(angle: float, controls, target: int) -> Gate:
    return Gate(MCPHASE, (target,), tuple(controls), float(angle))


def phase(angle: float, target: int) -> Gate:
    """Uncontrolled phase diag(1, e^{i angle}), stored as a zero-control MCPHASE."""
    return Gate(MCPHASE, (target,), (), float(angle))


def mcx(controls, target: int) -> Gate:
    return Gate(MCX, (target,), tuple(controls))
