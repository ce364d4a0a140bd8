"""Execution backends for the search circuits.

Two backends with different fidelity/cost trade-offs:

* ``StateVector`` + ``apply``: exact unitary simulation of a CircuitSpec.
  The basis index is key * 2^m + value, i.e. key qubits occupy the high
  bits (key qubit 0 most significant) and the value register the low bits
  (value qubit 0 = sign bit at position m-1).  Capped at 24 qubits to keep
  a run inside ~1 GB.

* ``IdealSampler``: statistically exact amplification outcomes assuming a
  perfect integer value encoding.  With t of N keys marked, one preparation
  followed by L Grover operators yields a marked key with probability
  sin^2((2L+1) asin(sqrt(t/N))), uniform within the marked set.  This needs
  only the classical value table, never a 2^(n+m) state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .circuits import CircuitSpec
from .poly import BinaryPolynomial, BitVector, int_to_bits

DEFAULT_QUBIT_CAP = 24


@dataclass
class StateVector:
    n_qubits: int
    amplitudes: np.ndarray

    @classmethod
    def zero(cls, n_qubits: int) -> "StateVector":
        amps = np.zeros(1 << n_qubits, dtype=np.complex128)
        amps[0] = 1.0
        return cls(n_qubits=n_qubits, amplitudes=amps)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2


def _bit_weight(qubit: int, n_qubits: int) -> int:
    # qubit 0 is the most significant position of the basis index
    return 1 << (n_qubits - 1 - qubit)


def _apply_h(amps: np.ndarray, qubit: int, n_qubits: int) -> np.ndarray:
    before = 1 << qubit
    after = 1 << (n_qubits - 1 - qubit)
    a = amps.reshape(before, 2, after)
    top = a[:, 0, :].copy()
    bot = a[:, 1, :].copy()
    inv = 1.0 / math.sqrt(2.0)
    a[:, 0, :] = (top + bot) * inv
    a[:, 1, :] = (top - bot) * inv
    return a.reshape(-1)


def _iqft_matrix(m: int, inverse: bool) -> np.ndarray:
    size = 1 << m
    grid = np.outer(np.arange(size), np.arange(size))
    sign = -1.0 if inverse else 1.0
    return np.exp(sign * 2j * np.pi * grid / size) / math.sqrt(size)


def apply(c: CircuitSpec, s: StateVector, cap: int = DEFAULT_QUBIT_CAP) -> StateVector:
    """Apply a circuit gate by gate; returns a new state."""
    n_total = c.n_qubits
    if s.n_qubits != n_total:
        raise ValueError(f"state has {s.n_qubits} qubits, circuit needs {n_total}")
    if n_total > cap:
        raise ValueError(f"{n_total} qubits above the simulation cap of {cap}")
    amps = s.amplitudes.copy()
    size = amps.size
    idx = np.arange(size, dtype=np.uint64)
    m = c.m_val

    for g in c.gates:
        if g.kind == "h":
            amps = _apply_h(amps, g.target, n_total)
        elif g.kind in ("r", "cr"):
            mask = np.uint64(sum(_bit_weight(q, n_total) for q in (g.target, *g.controls)))
            sel = (idx & mask) == mask
            amps[sel] *= np.exp(1j * g.theta)
        elif g.kind == "z":
            w = np.uint64(_bit_weight(g.target, n_total))
            amps[(idx & w) != 0] *= -1.0
        elif g.kind in ("iqft", "qft"):
            mat = _iqft_matrix(m, inverse=(g.kind == "iqft"))
            amps = (amps.reshape(-1, 1 << m) @ mat.T).reshape(-1)
        elif g.kind == "diffusion":
            first = amps[0]
            amps = -amps
            amps[0] = first
        else:
            raise ValueError(f"unknown gate kind {g.kind!r}")

    out = StateVector(n_qubits=n_total, amplitudes=amps)
    if not math.isclose(out.norm(), 1.0, rel_tol=0, abs_tol=1e-9):
        raise AssertionError(f"norm drifted to {out.norm()}")
    return out


@dataclass(frozen=True)
class SampleOutcome:
    key_bits: BitVector
    value_bits: BitVector
    decoded_value: int  # two's-complement read of the value register

    @classmethod
    def from_index(cls, index: int, n_key: int, m_val: int) -> "SampleOutcome":
        value = index & ((1 << m_val) - 1)
        key = index >> m_val
        decoded = value - (1 << m_val) if value >= (1 << (m_val - 1)) else value
        return cls(
            key_bits=int_to_bits(key, n_key),
            value_bits=int_to_bits(value, m_val),
            decoded_value=decoded,
        )


def sample(
    s: StateVector, rng: np.random.Generator, n_key: int, m_val: int
) -> SampleOutcome:
    """Draw one computational-basis outcome and split it into registers."""
    probs = s.probabilities()
    probs = probs / probs.sum()
    index = int(rng.choice(probs.size, p=probs))
    return SampleOutcome.from_index(index, n_key, m_val)


def marked_probability(s: StateVector, marked_keys: np.ndarray, m_val: int) -> float:
    """Total probability that the measured key falls in ``marked_keys``."""
    probs = s.probabilities().reshape(-1, 1 << m_val).sum(axis=1)
    return float(probs[marked_keys].sum())


# -- analytic backend -----------------------------------------------------


def amplified_probability(t: int, n_states: int, l_ops: int) -> float:
    """Probability of landing in a t-element marked set after one preparation
    and l Grover operators."""
    if not 0 <= t <= n_states:
        raise ValueError("marked count out of range")
    if t == 0:
        return 0.0
    theta = math.asin(math.sqrt(t / n_states))
    return math.sin((2 * l_ops + 1) * theta) ** 2


class IdealSampler:
    """Amplification outcomes for a polynomial from its classical value table.

    The value table over all 2^n keys is computed once; each threshold then
    costs a binary search plus an O(1) draw.
    """

    def __init__(self, p: BinaryPolynomial, cap: int = DEFAULT_QUBIT_CAP):
        if p.n_vars > cap:
            raise ValueError(f"n_vars={p.n_vars} above the ideal-backend cap {cap}")
        self.n_vars = p.n_vars
        self.values = p.evaluate_all()
        self.order = np.argsort(self.values, kind="stable")
        self.sorted_values = self.values[self.order]

    @property
    def n_states(self) -> int:
        return 1 << self.n_vars

    def marked_count(self, y: float) -> int:
        return int(np.searchsorted(self.sorted_values, y, side="left"))

    def sample(self, y: float, l_ops: int, rng: np.random.Generator) -> BitVector:
        t = self.marked_count(y)
        n = self.n_states
        p_marked = amplified_probability(t, n, l_ops)
        if t == n or rng.random() < p_marked:
            pick = self.order[int(rng.integers(t))]
        else:
            pick = self.order[t + int(rng.integers(n - t))]
        return int_to_bits(int(pick), self.n_vars)


def ideal_gas_sample(
    p: BinaryPolynomial, y: float, l_ops: int, rng: np.random.Generator
) -> BitVector:
    """One-shot convenience wrapper; for repeated thresholds on the same
    polynomial build an IdealSampler once instead."""
    return IdealSampler(p).sample(y, l_ops, rng)


def dump_amplitudes(s: StateVector, path) -> None:
    """Debug dump: little-endian float64 (real, imag) pairs in basis order."""
    arr = np.empty(2 * s.amplitudes.size, dtype="<f8")
    arr[0::2] = s.amplitudes.real
    arr[1::2] = s.amplitudes.imag
    arr.tofile(path)


def load_amplitudes(path) -> StateVector:
    arr = np.fromfile(path, dtype="<f8")
    amps = arr[0::2] + 1j * arr[1::2]
    n = int(math.log2(amps.size))
    if 1 << n != amps.size:
        raise ValueError("amplitude dump length is not a power of two")
    return StateVector(n_qubits=n, amplitudes=amps)
