"""Ancilla-free rewriting of multi-controlled gates into 1- and 2-qubit gates.

The target gate set is {H, X, CNOT, SWAP, CPHASE, single-qubit phase}. A
multi-controlled phase on controls ``c_1..c_m`` and target ``t`` uses the
square-root recursion::

    C^m P(a) = CP(a/2; c_m, t) . C^{m-1}X(c_m) . CP(-a/2; c_m, t)
               . C^{m-1}X(c_m) . C^{m-1}P(a/2; c_1..c_{m-1}, t)

and ``C^m X = H(t) . C^m P(pi) . H(t)``. Every step is exact (no global
phase), so the rewritten circuit reproduces amplitudes, not just
probabilities. Gate count grows as 3^m, which is fine for the handful of
controls used here.
"""

from __future__ import annotations

import math
from functools import lru_cache

from . import gates as g


def decompose_gate(gate: g.Gate) -> list[g.Gate]:
    if gate.kind == g.MCPHASE:
        return list(_mcphase(gate.angle, gate.controls, gate.targets[0]))
    if gate.kind == g.MCX:
        return list(_mcx(gate.controls, gate.targets[0]))
    return [gate]


def _mcphase(angle: float, controls: tuple[int, ...], target: int) -> list[g.Gate]:
    m = len(controls)
    if m == 0:
        return [g.phase(angle, target)]
    if m == 1:
        return [g.cphase(angle, controls[0], target)]
    last, rest = controls[-1], controls[:-1]
    half = angle / 2.0
    out = [g.cphase(half, last, target)]
    out += _mcx(rest, last)
    out.append(g.cphase(-half, last, target))
    out += _mcx(rest, last)
    out += _mcphase(half, rest, target)
    return out


def _mcx(controls: tuple[int, ...], target: int) -> list[g.Gate]:
    m = len(controls)
    if m == 0:
        return [g.x(target)]
    if m == 1:
        return [g.cnot(controls[0], target)]
    return [g.h(target), *_mcphase(math.pi, controls, target), g.h(target)]


@lru_cache(maxsize=None)
def elementary_cost(kind: str, num_controls: int) -> int:
    """Number of elementary gates a gate of this shape expands to."""
    if kind == g.MCPHASE:
        return len(_mcphase(1.0, tuple(range(1, num_controls + 1)), 0))
    if kind == g.MCX:
        return len(_mcx(tuple(range(1, num_controls + 1)), 0))
    return 1


def decompose_circuit(circuit):
    """Circuit with every MCPHASE/MCX (two or more controls) expanded."""
    from .circuit import Circuit

    out = []
    for gate in circuit.gates:
        out.extend(decompose_gate(gate))
    return Circuit(circuit.layout, tuple(out))
