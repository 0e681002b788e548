import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qperceptron.circuit import RegisterLayout, compose, simulate
from qperceptron.exceptions import EncodingError, StructuralError
from qperceptron.qft_arith import (
    FixedPointSpec,
    adder_circuit,
    complement_code,
    constant_adder_circuit,
    decode_complement,
    from_complement_circuit,
    iqft,
    multiplier_circuit,
    qft,
    sign_xor_circuit,
    to_complement_circuit,
)


def basis_out(circuit, index):
    amps = simulate(circuit, index).amplitudes
    out = int(np.argmax(np.abs(amps)))
    assert abs(abs(amps[out]) - 1) < 1e-9, "output is not a basis state"
    return out


def reg_layout(*sizes):
    return RegisterLayout.contiguous(sizes)


class TestFixedPoint:
    def test_range(self):
        spec = FixedPointSpec(2)
        assert spec.max_magnitude == 3 and spec.entry_width == 3

    @given(st.integers(1, 6), st.data())
    def test_round_trip(self, t, data):
        spec = FixedPointSpec(t)
        v = data.draw(st.integers(-spec.max_magnitude, spec.max_magnitude))
        assert spec.decode(spec.encode(v)) == v

    def test_minus_zero(self):
        spec = FixedPointSpec(1)
        assert spec.decode(0b10) == 0 and spec.decode(0b00) == 0

    def test_sign_bit_is_top(self):
        assert FixedPointSpec(2).encode(-3) == 0b111
        assert FixedPointSpec(2).encode(2) == 0b010

    def test_out_of_range(self):
        with pytest.raises(EncodingError):
            FixedPointSpec(1).encode(2)

    def test_vector_layout(self):
        spec = FixedPointSpec(1)
        code = spec.encode_vector((-1, 1))
        assert code == 0b01_11 and spec.decode_vector(code, 2) == (-1, 1)

    def test_invalid_bits(self):
        with pytest.raises(ValueError):
            FixedPointSpec(0)


class TestQFT:
    def test_one_qubit_is_hadamard(self):
        L = reg_layout(("r", 1))
        assert [gt.kind for gt in qft(L, L["r"]).gates] == ["H"]

    def test_qft_of_zero_is_uniform(self):
        L = reg_layout(("r", 2))
        assert np.allclose(simulate(qft(L, L["r"])).amplitudes, 0.5)

    @pytest.mark.parametrize("t", [1, 2, 3, 4])
    def test_matches_dft(self, t):
        L = reg_layout(("r", t))
        N = 1 << t
        c = qft(L, L["r"])
        F = np.exp(2j * np.pi * np.outer(np.arange(N), np.arange(N)) / N) / math.sqrt(N)
        for x in range(N):
            assert np.allclose(simulate(c, x).amplitudes, F[:, x], atol=1e-12)

    def test_inverse_identity_t4(self):
        L = reg_layout(("r", 4))
        c = compose(qft(L, L["r"]), iqft(L, L["r"]))
        for x in range(16):
            assert basis_out(c, x) == x

    def test_empty_register(self):
        with pytest.raises(StructuralError):
            qft(reg_layout(("r", 1)), [])


class TestAdder:
    @pytest.mark.parametrize("acc,src,expect", [(2, 3, 5), (6, 5, 3)])
    def test_examples(self, acc, src, expect):
        L = reg_layout(("src", 3), ("acc", 3))
        out = basis_out(adder_circuit(L, L["src"], L["acc"]), src | acc << 3)
        assert out == src | expect << 3

    @pytest.mark.parametrize("t", [1, 2, 3])
    def test_exhaustive(self, t):
        L = reg_layout(("src", t), ("acc", t))
        c = adder_circuit(L, L["src"], L["acc"])
        for s, a in itertools.product(range(1 << t), repeat=2):
            assert basis_out(c, s | a << t) == s | ((a + s) % (1 << t)) << t

    def test_narrow_source_zero_extended(self):
        L = reg_layout(("src", 2), ("acc", 4))
        c = adder_circuit(L, L["src"], L["acc"])
        for s, a in itertools.product(range(4), range(16)):
            assert basis_out(c, s | a << 2) == s | ((a + s) % 16) << 2

    def test_wide_source_rejected(self):
        L = reg_layout(("src", 3), ("acc", 2))
        with pytest.raises(StructuralError):
            adder_circuit(L, L["src"], L["acc"])

    def test_overlap_rejected(self):
        L = reg_layout(("r", 3))
        with pytest.raises(StructuralError):
            adder_circuit(L, L["r"][:2], L["r"][1:])

    @pytest.mark.parametrize("ctl", [None, 0, 1])
    def test_constant_adder(self, ctl):
        L = reg_layout(("c", 1), ("r", 4))
        for value in (1, 7, -1):
            c = constant_adder_circuit(L, L["r"], value, control=None if ctl is None else 0)
            for r in range(16):
                for cbit in (0, 1):
                    fire = ctl is None or cbit == 1
                    expect = (r + value) % 16 if fire else r
                    assert basis_out(c, cbit | r << 1) == cbit | expect << 1


class TestMultiplier:
    def test_example(self):
        L = reg_layout(("a", 2), ("b", 2), ("p", 4))
        out = basis_out(multiplier_circuit(L, L["a"], L["b"], L["p"]), 2 | 3 << 2)
        assert out >> 4 == 6

    @pytest.mark.parametrize("t", [1, 2])
    def test_exhaustive(self, t):
        L = reg_layout(("a", t), ("b", t), ("p", 2 * t))
        c = multiplier_circuit(L, L["a"], L["b"], L["p"])
        for a, b in itertools.product(range(1 << t), repeat=2):
            assert basis_out(c, a | b << t) == a | b << t | (a * b) << 2 * t

    def test_accumulates_into_nonzero_product(self):
        L = reg_layout(("a", 2), ("b", 2), ("p", 4))
        c = multiplier_circuit(L, L["a"], L["b"], L["p"])
        for a, b, p in itertools.product(range(4), range(4), range(16)):
            out = basis_out(c, a | b << 2 | p << 4)
            assert out >> 4 == (p + a * b) % 16

    def test_product_width_enforced(self):
        L = reg_layout(("a", 2), ("b", 2), ("p", 3))
        with pytest.raises(StructuralError):
            multiplier_circuit(L, L["a"], L["b"], L["p"])


class TestSigns:
    @pytest.mark.parametrize("sa,sb,expect", [(1, 1, 0), (0, 0, 0), (1, 0, 1), (0, 1, 1)])
    def test_xor(self, sa, sb, expect):
        L = reg_layout(("s", 3))
        assert basis_out(sign_xor_circuit(L, 0, 1, 2), sa | sb << 1) >> 2 == expect

    def test_complement_code_examples(self):
        assert complement_code(-3, 4) == 13
        assert complement_code(5, 4) == 5
        assert (complement_code(-3, 4) + complement_code(5, 4)) % 16 == complement_code(2, 4) == 2
        assert decode_complement(13, 4) == -3 and decode_complement(0, 4) == 0

    def test_complement_headroom(self):
        with pytest.raises(EncodingError):
            complement_code(8, 4)

    def test_to_complement_circuit(self):
        L = reg_layout(("s", 1), ("r", 4))
        c = to_complement_circuit(L, 0, L["r"])
        assert basis_out(c, 1 | 3 << 1) == 1 | 13 << 1
        assert basis_out(c, 0 | 5 << 1) == 5 << 1
        assert basis_out(c, 1) == 1  # minus zero -> code 0

    def test_from_complement_examples(self):
        L = reg_layout(("s", 1), ("r", 4))
        c = from_complement_circuit(L, 0, L["r"])
        assert basis_out(c, 13 << 1) == 1 | 3 << 1
        assert basis_out(c, 0) == 0

    def test_round_trip_all_codes(self):
        L = reg_layout(("s", 1), ("r", 4))
        round_trip = compose(from_complement_circuit(L, 0, L["r"]), to_complement_circuit(L, 0, L["r"]))
        for code in range(16):
            assert basis_out(round_trip, code << 1) == (code << 1) | (code >> 3) & 1

    def test_homomorphism_m4(self):
        m = 4
        L = reg_layout(("s", 1), ("r", m))
        c = to_complement_circuit(L, 0, L["r"])

        def enc(v):
            return basis_out(c, int(v < 0) | abs(v) << 1) >> 1

        lim = (1 << (m - 1)) - 1
        for x, y in itertools.product(range(-lim, lim + 1), repeat=2):
            if abs(x + y) <= lim:
                assert (enc(x) + enc(y)) % (1 << m) == enc(x + y)
