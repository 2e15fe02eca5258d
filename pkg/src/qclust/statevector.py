"""Dense statevector simulation of the distance register plus ancillae.

Basis index convention: index = (code << m) | label, so the distance
register occupies the high n bits and the ancilla label the low m bits.
Qubit n-1 of the distance register and ancilla m-1 are the most significant
bits of their registers. States are immutable by convention; every
operation returns a new StateVector.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from ._kernels import xor_fold_permutation
from .encoding import max_qubits

if TYPE_CHECKING:
    from .unsharp import EffectOperator

NORM_TOL = 1e-10
PROB_FLOOR = 1e-12


@dataclass(frozen=True)
class RegisterLayout:
    """Widths of the distance register (n) and the ancilla register (m)."""

    n: int
    m: int

    def __post_init__(self) -> None:
        if self.n < 1 or self.m < 0:
            raise ValueError(f"invalid register widths n={self.n}, m={self.m}")
        cap = max_qubits()
        if self.n + self.m > cap:
            raise ValueError(f"register width {self.n}+{self.m} exceeds the {cap}-qubit cap")

    @property
    def size(self) -> int:
        return 1 << (self.n + self.m)

    def split_index(self, index: int) -> tuple[int, int]:
        """Flat basis index -> (distance code, ancilla label)."""
        return index >> self.m, index & ((1 << self.m) - 1)


@dataclass(frozen=True)
class StateVector:
    layout: RegisterLayout
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        if self.amplitudes.shape != (self.layout.size,):
            raise ValueError("amplitude count does not match register width")

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def check_normalized(self) -> None:
        if abs(self.norm() - 1.0) > NORM_TOL:
            raise ValueError(f"state is not normalized (norm {self.norm()})")


def prepare_superposition(codes, layout: RegisterLayout,
                          weighting: str = "uniform-distinct") -> StateVector:
    """Superpose the basis states of the given codes, ancillae at label 0.

    "uniform-distinct" weights each distinct code equally; "multiplicity"
    weights each code by sqrt(its count), so repeated distances dominate.
    """
    code_list = [int(c) for c in codes]
    if not code_list:
        raise ValueError("cannot superpose an empty code set")
    for c in code_list:
        if not 0 <= c < (1 << layout.n):
            raise ValueError(f"code {c} does not fit a {layout.n}-qubit register")

    amps = np.zeros(layout.size, dtype=np.complex128)
    if weighting == "uniform-distinct":
        distinct = sorted(set(code_list))
        amp = 1.0 / np.sqrt(len(distinct))
        for c in distinct:
            amps[c << layout.m] = amp
    elif weighting == "multiplicity":
        counts = Counter(code_list)
        total = len(code_list)
        for c, cnt in sorted(counts.items()):
            amps[c << layout.m] = np.sqrt(cnt / total)
    else:
        raise ValueError(f"unknown weighting {weighting!r}")
    return StateVector(layout=layout, amplitudes=amps)


def apply_label_unitary(state: StateVector) -> StateVector:
    """CNOT cascade copying the top m distance bits onto the ancillae.

    For each j in 0..m-1, ancilla bit m-1-j is XOR-ed with distance bit
    n-1-j. A pure basis-state permutation: the norm is preserved exactly and
    applying it twice restores the input bit for bit.
    """
    layout = state.layout
    if layout.m < 1:
        raise ValueError("label unitary needs at least one ancilla")
    if layout.m > layout.n:
        raise ValueError(f"cannot copy {layout.m} label bits from {layout.n} distance bits")
    permuted = xor_fold_permutation(state.amplitudes, layout.n, layout.m)
    return StateVector(layout=layout, amplitudes=permuted)


def enumerate_outcomes(state: StateVector) -> dict[tuple[int, int], float]:
    """Exact Born-rule outcome distribution over (code, label) pairs.

    Deterministic stand-in for repeated projective readout; entries with
    probability below 1e-12 are omitted.
    """
    state.check_normalized()
    probs = np.abs(state.amplitudes) ** 2
    hits = np.nonzero(probs > PROB_FLOOR)[0]
    return {state.layout.split_index(int(i)): float(probs[i]) for i in hits}


def sample_outcomes(state: StateVector, shots: int, seed: int) -> Counter:
    """Finite-shot i.i.d. sampling from enumerate_outcomes; seeded, reproducible."""
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    outcomes = enumerate_outcomes(state)
    keys = sorted(outcomes)
    probs = np.array([outcomes[k] for k in keys])
    probs = probs / probs.sum()
    rng = np.random.default_rng(seed)
    draws = rng.choice(len(keys), size=shots, p=probs)
    return Counter(keys[i] for i in draws)


def apply_effect(state: StateVector, effect: "EffectOperator") -> tuple[StateVector, float]:
    """Generalized (unsharp) measurement update for one effect outcome.

    The effect is diagonal over distance codes and acts as identity on the
    ancillae: amplitude_j -> sqrt(w_code(j)) * amplitude_j, then renormalize.
    Returns the post-measurement state and the outcome probability
    sum_j w_j |amplitude_j|^2.
    """
    layout = state.layout
    if effect.n != layout.n:
        raise ValueError(
            f"effect is over a {effect.n}-qubit register, state has {layout.n} distance qubits"
        )
    codes = np.arange(layout.size, dtype=np.int64) >> layout.m
    weights = effect.weights[codes]
    probability = float(np.sum(weights * np.abs(state.amplitudes) ** 2))
    if probability == 0.0:
        raise ValueError("effect annihilates state")
    amps = np.sqrt(weights) * state.amplitudes / np.sqrt(probability)
    return StateVector(layout=layout, amplitudes=amps), probability
