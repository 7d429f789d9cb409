"""Classical timelines and probability distributions over them.

A timeline assigns one outcome (a d-th root of unity) to each of ``n``
witnesses.  Because the witnesses multiply to the identity, only timelines
whose outcomes multiply to 1 are admissible, i.e. the exponents sum to
0 mod d.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .phases import PhaseExponent

__all__ = [
    "DEFAULT_ENUMERATION_CAP",
    "EnumerationTooLarge",
    "Timeline",
    "Distribution",
    "validate_timeline",
    "enumerate_timelines",
    "timeline_array",
    "appendix_b_distribution",
    "appendix_c_distribution",
]

DEFAULT_ENUMERATION_CAP = 10**7

PROB_SUM_TOL = 1e-12


class EnumerationTooLarge(ValueError):
    """Raised when the requested timeline set exceeds the enumeration cap."""

    def __init__(self, count: int, cap: int):
        self.count = count
        self.cap = cap
        super().__init__(
            f"too large to enumerate: {count} timelines exceeds cap {cap}"
        )


@dataclass(frozen=True)
class Timeline:
    outcomes: tuple[PhaseExponent, ...]

    def __post_init__(self):
        outcomes = tuple(self.outcomes)
        if len(outcomes) < 2:
            raise ValueError(f"a timeline needs at least 2 outcomes, got {len(outcomes)}")
        dims = {o.d for o in outcomes}
        if len(dims) != 1:
            raise ValueError(f"mixed dimensions inside one timeline: {sorted(dims)}")
        object.__setattr__(self, "outcomes", outcomes)

    @classmethod
    def from_exponents(cls, exponents: Iterable[int], d: int) -> "Timeline":
        return cls(tuple(PhaseExponent(k, d) for k in exponents))

    @property
    def n(self) -> int:
        return len(self.outcomes)

    @property
    def d(self) -> int:
        return self.outcomes[0].d

    @property
    def exponents(self) -> tuple[int, ...]:
        return tuple(o.k for o in self.outcomes)

    def is_valid(self) -> bool:
        return sum(self.exponents) % self.d == 0


def validate_timeline(t: Timeline) -> bool:
    """True iff the outcomes of ``t`` multiply to 1."""
    return t.is_valid()


def _check_enumeration(n: int, d: int, cap: int) -> int:
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if d < 2:
        raise ValueError(f"d must be >= 2, got {d}")
    count = d ** (n - 1)
    if count > cap:
        raise EnumerationTooLarge(count, cap)
    return count


def timeline_array(n: int, d: int, cap: int = DEFAULT_ENUMERATION_CAP) -> np.ndarray:
    """All valid timelines as an ``(d**(n-1), n)`` integer array.

    The first ``n - 1`` exponents run over every tuple in lexicographic order
    and the last one is fixed by the product constraint.
    """
    count = _check_enumeration(n, d, cap)
    head = np.indices((d,) * (n - 1)).reshape(n - 1, count).T
    last = (-head.sum(axis=1)) % d
    return np.column_stack([head, last]).astype(np.int64)


def enumerate_timelines(
    n: int, d: int, cap: int = DEFAULT_ENUMERATION_CAP
) -> list[Timeline]:
    return [Timeline.from_exponents(row, d) for row in timeline_array(n, d, cap)]


@dataclass(frozen=True)
class Distribution:
    """A probability vector over a finite set of valid timelines.

    The support is stored sorted and free of duplicates; repeated timelines
    passed to the constructor have their probabilities merged.
    """

    n: int
    d: int
    support: tuple[tuple[int, ...], ...]
    probs: tuple[float, ...]

    def __post_init__(self):
        n, d = int(self.n), int(self.d)
        if n < 2 or d < 2:
            raise ValueError(f"need n >= 2 and d >= 2, got n={n}, d={d}")
        if len(self.support) != len(self.probs):
            raise ValueError(
                f"support has {len(self.support)} timelines but {len(self.probs)} probabilities"
            )
        if not self.support:
            raise ValueError("empty support")
        merged: dict[tuple[int, ...], float] = {}
        for row, p in zip(self.support, self.probs):
            key = tuple(int(k) % d for k in row)
            if len(key) != n:
                raise ValueError(f"timeline {tuple(row)} has length {len(key)}, expected {n}")
            if sum(key) % d:
                raise ValueError(f"timeline {key} violates the product constraint for d={d}")
            p = float(p)
            if not np.isfinite(p) or p < 0:
                raise ValueError(f"probabilities must be finite and non-negative, got {p}")
            merged[key] = merged.get(key, 0.0) + p
        total = sum(merged.values())
        if abs(total - 1.0) > PROB_SUM_TOL:
            raise ValueError(f"probabilities sum to {total!r}, expected 1")
        keys = sorted(merged)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "support", tuple(keys))
        object.__setattr__(self, "probs", tuple(merged[k] for k in keys))

    @classmethod
    def from_timelines(
        cls, timelines: Sequence[Timeline], probs: Sequence[float]
    ) -> "Distribution":
        if not timelines:
            raise ValueError("empty support")
        n, d = timelines[0].n, timelines[0].d
        for t in timelines:
            if t.n != n or t.d != d:
                raise ValueError("all timelines must share n and d")
        return cls(n, d, tuple(t.exponents for t in timelines), tuple(probs))

    @classmethod
    def point_mass(cls, exponents: Sequence[int], d: int) -> "Distribution":
        return cls(len(exponents), d, (tuple(exponents),), (1.0,))

    @cached_property
    def exponent_array(self) -> np.ndarray:
        return np.array(self.support, dtype=np.int64)

    @cached_property
    def prob_array(self) -> np.ndarray:
        return np.array(self.probs, dtype=np.float64)

    @property
    def timelines(self) -> list[Timeline]:
        return [Timeline.from_exponents(row, self.d) for row in self.support]

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "d": self.d,
            "support": [list(row) for row in self.support],
            "probs": list(self.probs),
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "Distribution":
        return cls(
            doc["n"],
            doc["d"],
            tuple(tuple(row) for row in doc["support"]),
            tuple(doc["probs"]),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "Distribution":
        return cls.from_dict(json.loads(text))


def appendix_b_distribution(n: int) -> Distribution:
    """Uniform mixture of the all-ones timeline and the ``n - 1`` timelines
    that flip the first outcome together with one other.

    This attains ``-((n-2)/n)**n`` for qubits.  The optimality argument
    relies on ``n`` being even, so odd ``n`` is refused.
    """
    if n < 4 or n % 2:
        raise ValueError(
            f"qubit extremal construction needs even n >= 4 (the optimality "
            f"argument uses parity of n), got n={n}"
        )
    rows = [(0,) * n]
    for i in range(1, n):
        row = [0] * n
        row[0] = row[i] = 1
        rows.append(tuple(row))
    return Distribution(n, 2, tuple(rows), (1.0 / n,) * n)


def appendix_c_distribution(n: int, d: int) -> Distribution:
    """Equal mixture of the all-zeros timeline and the timeline with every
    exponent equal to ``d // n``; requires ``n | d``."""
    if d < 2 or n < 3:
        raise ValueError(f"need n >= 3 and d >= 2, got n={n}, d={d}")
    if d % n:
        raise ValueError(
            f"continuous-phase extremal construction needs n to divide d, "
            f"got n={n}, d={d}"
        )
    step = d // n
    return Distribution(n, d, ((0,) * n, (step,) * n), (0.5, 0.5))
