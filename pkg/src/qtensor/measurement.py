"""Computational-basis measurement on tensor states.

Measuring qubit k keeps the half of the tensor where axis k equals the
outcome, so an order-n state collapses to an order-(n-1) state.  Random
draws come only from an explicit :class:`SplitMix64` generator.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

from .state import TensorState, _check_qubit

MIN_BRANCH_PROB = 1e-15
_MASK64 = (1 << 64) - 1


class SplitMix64:
    """64-bit SplitMix generator (Steele, Lea and Flood 2014).

    state += 0x9E3779B97F4A7C15, then the output is mixed with two
    xor-shift-multiply rounds.  Floats take the top 53 bits, giving
    uniform values in [0, 1).
    """

    def __init__(self, seed: int = 0):
        self.state = int(seed) & _MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def random(self) -> float:
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def split(self) -> SplitMix64:
        """Independent child generator, for distributing shots."""
        return SplitMix64(self.next_u64())


@dataclass(frozen=True)
class MeasureOutcome:
    bit: int
    probability: float
    # None when the measured qubit was the last one left
    post_state: TensorState | None

    @property
    def terminal(self) -> bool:
        return self.post_state is None


def _half(s: TensorState, qubit: int, bit: int) -> np.ndarray:
    axis = _check_qubit(s.n, qubit)
    if bit not in (0, 1):
        raise ValueError(f"bit must be 0 or 1, got {bit}")
    return np.take(s.data, bit, axis=axis)


def probability(s: TensorState, qubit: int, bit: int) -> float:
    """Squared norm of the half-tensor with ``qubit`` fixed to ``bit``."""
    half = _half(s, qubit, bit)
    return float(np.vdot(half, half).real)


def _collapse(s: TensorState, qubit: int, bit: int, prob: float) -> MeasureOutcome:
    if s.n == 1:
        return MeasureOutcome(bit, prob, None)
    half = _half(s, qubit, bit)
    return MeasureOutcome(bit, prob, TensorState(half / np.sqrt(prob), copy=False))


def measure(s: TensorState, qubit: int, u: float) -> MeasureOutcome:
    """Collapse ``qubit`` using the uniform draw u: outcome 0 iff u < P(0)."""
    if not 0.0 <= u < 1.0:
        raise ValueError(f"draw must lie in [0, 1), got {u}")
    p0 = probability(s, qubit, 0)
    p1 = probability(s, qubit, 1)
    total = p0 + p1
    bit = 0 if u < p0 / total else 1
    return _collapse(s, qubit, bit, (p0 if bit == 0 else p1) / total)


def measure_forced(s: TensorState, qubit: int, bit: int) -> MeasureOutcome:
    """Collapse ``qubit`` onto a chosen outcome, which must be reachable."""
    prob = probability(s, qubit, bit) / (s.norm() ** 2)
    if prob < MIN_BRANCH_PROB:
        raise ValueError(f"outcome {bit} on qubit {qubit} has probability {prob:.3g}; branch unreachable")
    return _collapse(s, qubit, bit, prob)


def branch_probabilities(s: TensorState) -> dict[str, float]:
    """Probability of every full measurement outcome, bitstrings q1..qn."""
    probs = np.abs(s.to_kron_vector()) ** 2
    return {format(i, f"0{s.n}b"): float(p) for i, p in enumerate(probs)}


def sample_counts(s: TensorState, shots: int, seed: int | SplitMix64 = 0) -> dict[str, int]:
    """Histogram of repeated full measurements, qubit 1 first in each shot.

    Each shot walks the qubits in order, drawing one uniform per qubit and
    comparing it with the conditional probability of reading 0, exactly as
    successive :func:`measure` calls would.
    """
    if shots < 1:
        raise ValueError("shots must be >= 1")
    rng = seed if isinstance(seed, SplitMix64) else SplitMix64(seed)
    n = s.n
    probs = np.abs(s.data) ** 2
    # prefix[k][bits of q1..qk] = probability of that prefix
    prefix = [probs.sum(axis=tuple(range(k, n))) if k < n else probs for k in range(n + 1)]
    prefix = [np.asarray(p) for p in prefix]
    counts: Counter[str] = Counter()
    for _ in range(shots):
        bits: list[int] = []
        for k in range(n):
            here = float(prefix[k][tuple(bits)])
            p0 = float(prefix[k + 1][tuple(bits) + (0,)])
            bits.append(0 if rng.random() < p0 / here else 1)
        counts["".join(map(str, bits))] += 1
    return dict(sorted(counts.items()))


def histogram_json(counts: dict[str, int], shots: int | None = None) -> dict:
    return {"shots": int(shots if shots is not None else sum(counts.values())), "counts": dict(counts)}
