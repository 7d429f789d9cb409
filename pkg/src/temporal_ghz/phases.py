"""Exact arithmetic on d-th roots of unity.

A root of unity ``exp(2*pi*i*k/d)`` is stored as the integer residue ``k``
modulo ``d``.  Multiplication is addition of residues, so the timeline
product constraint is an exact integer test.  Conversion to ``complex``
happens only when a numeric value is needed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

__all__ = [
    "PhaseExponent",
    "phase_mul",
    "phase_to_complex",
    "weighted_phase_sum",
    "roots_of_unity",
]


@dataclass(frozen=True, order=True)
class PhaseExponent:
    """The root of unity ``exp(2*pi*i*k/d)``, with ``k`` kept in ``[0, d)``."""

    k: int
    d: int

    def __post_init__(self):
        if isinstance(self.d, bool) or int(self.d) != self.d or self.d < 1:
            raise ValueError(f"dimension must be a positive integer, got {self.d!r}")
        object.__setattr__(self, "d", int(self.d))
        object.__setattr__(self, "k", int(self.k) % self.d)

    def __mul__(self, other: "PhaseExponent") -> "PhaseExponent":
        return phase_mul(self, other)

    def __complex__(self) -> complex:
        return phase_to_complex(self)

    def inverse(self) -> "PhaseExponent":
        return PhaseExponent(-self.k, self.d)


def phase_mul(a: PhaseExponent, b: PhaseExponent) -> PhaseExponent:
    if a.d != b.d:
        raise ValueError(
            f"cannot combine phases of different dimensions: d={a.d} and d={b.d}"
        )
    return PhaseExponent(a.k + b.k, a.d)


def _root(k: int, d: int) -> complex:
    # Quarter turns are returned exactly so that real products stay real.
    k %= d
    if (4 * k) % d == 0:
        return (1 + 0j, 1j, -1 + 0j, -1j)[(4 * k) // d]
    theta = 2.0 * math.pi * k / d
    return complex(math.cos(theta), math.sin(theta))


def phase_to_complex(a: PhaseExponent) -> complex:
    return _root(a.k, a.d)


def roots_of_unity(d: int) -> np.ndarray:
    """Array ``r`` with ``r[k] == phase_to_complex(PhaseExponent(k, d))``."""
    if d < 1:
        raise ValueError(f"dimension must be positive, got {d}")
    return np.array([_root(k, d) for k in range(d)], dtype=np.complex128)


def weighted_phase_sum(
    phases: Sequence[PhaseExponent], weights: Sequence[float]
) -> complex:
    """Convex-style combination ``sum_j w_j * phases[j]``.

    This is one slot average of the classical expectation: the mean outcome
    of a single witness under a distribution over timelines.
    """
    if len(phases) != len(weights):
        raise ValueError(
            f"length mismatch: {len(phases)} phases vs {len(weights)} weights"
        )
    total = 0j
    for phase, w in zip(phases, weights):
        if w < 0:
            raise ValueError(f"weights must be non-negative, got {w}")
        total += w * phase_to_complex(phase)
    return total
