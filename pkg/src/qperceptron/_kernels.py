"""Compiled gate kernels.

Each kernel enumerates only the amplitudes a gate can touch. With ``k``
involved qubits (``positions``, sorted ascending) there are ``2^(n-k)`` base
indices; zero bits are inserted at the involved positions and the control
mask is OR-ed in. Bits below the lowest involved qubit are untouched, so the
innermost loop runs over a contiguous chunk of ``2^positions[0]`` amplitudes.
Distinct base indices address disjoint amplitude sets, so the outer loops are
data-parallel.
"""

from __future__ import annotations

import numba as nb
import numpy as np

_PARALLEL_MIN_QUBITS = 20


@nb.njit(cache=True, inline="always")
def _spread(i, positions):
    for p in positions:
        low = i & ((np.int64(1) << p) - 1)
        i = ((i >> p) << (p + 1)) | low
    return i


def _make(parallel: bool):
    rng = nb.prange if parallel else range

    @nb.njit(cache=True, parallel=parallel)
    def phase(amps, positions, mask, factor):
        chunk = np.int64(1) << positions[0]
        outer = (amps.size >> positions.size) // chunk
        for i in rng(outer):
            j = _spread(np.int64(i) * chunk, positions) | mask
            for r in range(chunk):
                amps[j + r] *= factor

    @nb.njit(cache=True, parallel=parallel)
    def flip(amps, positions, ctl_mask, tbit):
        chunk = np.int64(1) << positions[0]
        outer = (amps.size >> positions.size) // chunk
        for i in rng(outer):
            j0 = _spread(np.int64(i) * chunk, positions) | ctl_mask
            j1 = j0 | tbit
            for r in range(chunk):
                tmp = amps[j0 + r]
                amps[j0 + r] = amps[j1 + r]
                amps[j1 + r] = tmp

    @nb.njit(cache=True, parallel=parallel)
    def hadamard(amps, positions, tbit, scale):
        chunk = np.int64(1) << positions[0]
        outer = (amps.size >> positions.size) // chunk
        for i in rng(outer):
            j0 = _spread(np.int64(i) * chunk, positions)
            j1 = j0 | tbit
            for r in range(chunk):
                a = amps[j0 + r]
                b = amps[j1 + r]
                amps[j0 + r] = (a + b) * scale
                amps[j1 + r] = (a - b) * scale

    @nb.njit(cache=True, parallel=parallel)
    def swap(amps, positions, abit, bbit):
        chunk = np.int64(1) << positions[0]
        outer = (amps.size >> positions.size) // chunk
        for i in rng(outer):
            j = _spread(np.int64(i) * chunk, positions)
            ja = j | abit
            jb = j | bbit
            for r in range(chunk):
                tmp = amps[ja + r]
                amps[ja + r] = amps[jb + r]
                amps[jb + r] = tmp

    return phase, flip, hadamard, swap


SERIAL = _make(False)
PARALLEL = _make(True)


def kernels_for(num_qubits: int):
    return PARALLEL if num_qubits >= _PARALLEL_MIN_QUBITS else SERIAL


def positions_array(qubits) -> np.ndarray:
    return np.array(sorted(qubits), dtype=np.int64)
