"""QFT-based arithmetic circuits and the sign-magnitude number format.

Registers are sequences of qubit indices, least significant bit first. The
adder and multiplier work in the swap-free Fourier basis: after
``qft(reg, swaps=False)`` the Fourier component of weight ``2**j`` sits on
``reg[-1 - j]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from . import gates as g
from .circuit import Circuit, RegisterLayout, inverse, sequence
from .exceptions import EncodingError, StructuralError

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class FixedPointSpec:
    """Sign-magnitude integers: ``magnitude_bits`` magnitude qubits plus one sign qubit.

    Within an entry the magnitude occupies the low bits and the sign
    (1 = negative) the top bit. Both +0 and -0 are valid codes.
    """

    magnitude_bits: int

    def __post_init__(self):
        if int(self.magnitude_bits) < 1:
            raise EncodingError("magnitude_bits must be >= 1")

    @property
    def t(self) -> int:
        return self.magnitude_bits

    @property
    def entry_width(self) -> int:
        return self.magnitude_bits + 1

    @property
    def max_magnitude(self) -> int:
        return (1 << self.magnitude_bits) - 1

    def check(self, value: int) -> int:
        v = int(value)
        if v != value or abs(v) > self.max_magnitude:
            raise EncodingError(
                f"{value!r} is not representable with {self.magnitude_bits} magnitude bits "
                f"(range +-{self.max_magnitude})"
            )
        return v

    def encode(self, value: int) -> int:
        """Entry code ``magnitude | sign << t``; zero encodes as +0."""
        v = self.check(value)
        return abs(v) | ((1 if v < 0 else 0) << self.magnitude_bits)

    def decode(self, code: int) -> int:
        if not 0 <= code < (1 << self.entry_width):
            raise EncodingError(f"entry code {code} out of range")
        mag = code & self.max_magnitude
        return -mag if code >> self.magnitude_bits else mag

    def encode_vector(self, values: Sequence[int]) -> int:
        code = 0
        for j, v in enumerate(values):
            code |= self.encode(v) << (j * self.entry_width)
        return code

    def decode_vector(self, code: int, n: int) -> tuple[int, ...]:
        mask = (1 << self.entry_width) - 1
        return tuple(self.decode((code >> (j * self.entry_width)) & mask) for j in range(n))

    def num_codes(self, n: int) -> int:
        return 1 << (n * self.entry_width)

    def accumulator_width(self, n: int) -> int:
        """Two's-complement width that holds any sum of ``n`` products."""
        if n < 1:
            raise EncodingError("need at least one feature")
        return 2 * self.magnitude_bits + math.ceil(math.log2(n)) + 1


def complement_code(value: int, width: int) -> int:
    """Classical two's-complement code of ``value`` in ``width`` bits."""
    limit = 1 << (width - 1)
    if not -limit < value < limit:
        raise EncodingError(f"{value} exceeds the headroom of a {width}-bit complement code")
    return value % (1 << width)


def decode_complement(code: int, width: int) -> int:
    return code - (1 << width) if code >> (width - 1) else code


def _check_disjoint(*registers) -> None:
    seen: set[int] = set()
    for reg in registers:
        for q in reg:
            if q in seen:
                raise StructuralError(f"registers overlap on qubit {q}")
            seen.add(q)


def qft(layout: RegisterLayout, register: Sequence[int], swaps: bool = True) -> Circuit:
    """Quantum Fourier transform |x> -> 2^{-t/2} sum_y e^{2 pi i x y / 2^t} |y>.

    The most significant qubit is processed first. With ``swaps=False`` the
    closing bit reversal is omitted and the output is left bit-reversed.
    """
    reg = list(register)
    if not reg:
        raise StructuralError("qft needs at least one qubit")
    _check_disjoint(reg)
    t = len(reg)
    out: list[g.Gate] = []
    for j in range(t - 1, -1, -1):
        out.append(g.h(reg[j]))
        for k in range(j - 1, -1, -1):
            out.append(g.cphase(math.pi / (1 << (j - k)), reg[k], reg[j]))
    if swaps:
        for i in range(t // 2):
            out.append(g.swap(reg[i], reg[t - 1 - i]))
    return Circuit(layout, tuple(out))


def iqft(layout: RegisterLayout, register: Sequence[int], swaps: bool = True) -> Circuit:
    return inverse(qft(layout, register, swaps))


def _fourier_add_phases(src: Sequence[int], acc: Sequence[int], extra_controls=()) -> list[g.Gate]:
    """Phases adding the value of ``src`` to the swap-free Fourier image of ``acc``."""
    m = len(acc)
    out = []
    for i, s in enumerate(src):
        for j in range(m - i):
            angle = TWO_PI * (1 << (i + j)) / (1 << m)
            controls = (*extra_controls, s)
            target = acc[m - 1 - j]
            if len(controls) == 1:
                out.append(g.cphase(angle, controls[0], target))
            else:
                out.append(g.mcphase(angle, controls, target))
    return out


def adder_circuit(layout: RegisterLayout, src_register: Sequence[int], acc_register: Sequence[int]) -> Circuit:
    """In-place ``acc <- (acc + src) mod 2^len(acc)``; ``src`` is left unchanged.

    ``src`` may be narrower than ``acc`` (it is zero-extended) but not wider.
    """
    src, acc = list(src_register), list(acc_register)
    _check_disjoint(src, acc)
    if not acc or len(src) > len(acc):
        raise StructuralError("accumulator must be at least as wide as the source")
    body = Circuit(layout, tuple(_fourier_add_phases(src, acc)))
    return sequence(layout, [qft(layout, acc, swaps=False), body, iqft(layout, acc, swaps=False)])


def constant_adder_circuit(
    layout: RegisterLayout, register: Sequence[int], value: int, control: int | None = None
) -> Circuit:
    """``reg <- (reg + value) mod 2^len(reg)``, optionally controlled by one qubit."""
    reg = list(register)
    m = len(reg)
    value %= 1 << m
    phases = []
    for j in range(m):
        angle = TWO_PI * ((value << j) % (1 << m)) / (1 << m)
        if angle == 0.0:
            continue
        target = reg[m - 1 - j]
        phases.append(g.phase(angle, target) if control is None else g.cphase(angle, control, target))
    return sequence(layout, [qft(layout, reg, swaps=False), *phases, iqft(layout, reg, swaps=False)])


def multiplier_circuit(
    layout: RegisterLayout,
    a_register: Sequence[int],
    b_register: Sequence[int],
    product_register: Sequence[int],
) -> Circuit:
    """``product <- (product + a*b) mod 2^len(product)`` for magnitude registers.

    With the product register zero-initialised this writes ``a*b`` exactly.
    Each partial product bit pair ``(a_i, b_j)`` drives doubly-controlled
    rotations on the Fourier image of the product, followed by the inverse QFT.
    """
    a, b, p = list(a_register), list(b_register), list(product_register)
    _check_disjoint(a, b, p)
    if not a or not b:
        raise StructuralError("multiplier factors need at least one qubit")
    if len(p) != len(a) + len(b):
        raise StructuralError(
            f"product register must be {len(a) + len(b)} qubits wide, got {len(p)}"
        )
    w = len(p)
    phases = []
    for i, ai in enumerate(a):
        for j, bj in enumerate(b):
            for k in range(w - i - j):
                angle = TWO_PI * (1 << (i + j + k)) / (1 << w)
                phases.append(g.mcphase(angle, (ai, bj), p[w - 1 - k]))
    return sequence(layout, [qft(layout, p, swaps=False), *phases, iqft(layout, p, swaps=False)])


def sign_xor_circuit(layout: RegisterLayout, s_a: int, s_b: int, s_out: int) -> Circuit:
    """``s_out ^= s_a ^ s_b``; the product-sign rule."""
    _check_disjoint([s_a], [s_b], [s_out])
    return Circuit(layout, (g.cnot(s_a, s_out), g.cnot(s_b, s_out)))


def to_complement_circuit(layout: RegisterLayout, sign_qubit: int, number_register: Sequence[int]) -> Circuit:
    """Replace a magnitude by its two's-complement code when ``sign_qubit`` is 1.

    Sign-controlled bit flips followed by a sign-controlled +1, so
    ``v -> (2^m - v) mod 2^m``. Minus zero maps to code 0.
    """
    reg = list(number_register)
    _check_disjoint([sign_qubit], reg)
    if not reg:
        raise StructuralError("empty number register")
    flips = [g.cnot(sign_qubit, q) for q in reg]
    return sequence(layout, [*flips, constant_adder_circuit(layout, reg, 1, control=sign_qubit)])


def from_complement_circuit(layout: RegisterLayout, sign_qubit: int, number_register: Sequence[int]) -> Circuit:
    """Split a two's-complement code into sign qubit and magnitude.

    ``sign_qubit`` must start in |0>. It receives the code's top bit, and the
    register is negated back to a magnitude when that bit is set.
    """
    reg = list(number_register)
    _check_disjoint([sign_qubit], reg)
    return sequence(
        layout, [g.cnot(reg[-1], sign_qubit), to_complement_circuit(layout, sign_qubit, reg)]
    )
