"""Quantum side of the temporal GHZ test.

Generalised Pauli operators on a qudit, GHZ history states over ``m`` time
nodes, witness words acting one letter per node, and checks that a family
of witnesses forms a GHZ-type paradox.  History-state expectations are
ordinary inner products ``<psi|W|psi>``; slot 1 is the leftmost tensor
factor (most significant digit of the basis index).
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import reduce
from typing import Sequence

import numpy as np

from .phases import PhaseExponent, phase_to_complex

__all__ = [
    "LETTERS",
    "GeneralizedPauli",
    "WitnessWord",
    "HistoryState",
    "ParadoxReport",
    "NoGoReport",
    "generalized_pauli",
    "ghz_history_state",
    "history_amplitude",
    "apply_word",
    "witness_expectation",
    "temporal_witness_family",
    "verify_ghz_paradox",
    "nearest_root_distance",
    "odd_dimension_nogo_check",
]

LETTERS = ("I", "X", "Y", "Z")

EIGEN_TOL = 1e-9
ROOT_TOL = 1e-8
MAX_HISTORY_DIM = 10**4
# Above this the spectrum of a tensor word is assembled from its factors.
DENSE_EIG_LIMIT = 128


@dataclass(frozen=True)
class GeneralizedPauli:
    kind: str
    d: int
    matrix: np.ndarray

    def __repr__(self):
        return f"GeneralizedPauli({self.kind!r}, d={self.d})"


def generalized_pauli(kind: str, d: int, *, literal: bool = False) -> GeneralizedPauli:
    """Shift ``X``, clock ``Z`` and the phased shift ``Y`` in dimension ``d``.

    ``X|k> = |k+1>``, ``Z|k> = w^k |k>`` and ``Y|k> = c w^k |k-1>`` with
    ``w = exp(2 pi i / d)``, all indices mod ``d``.  Without the prefactor
    ``Y**d = (-1)**(d-1)``, so for even ``d`` the default uses
    ``c = exp(i pi / d)``, which restores order ``d`` and makes ``Y`` the
    usual Pauli ``Y`` at ``d = 2``.  ``literal=True`` keeps ``c = 1``.
    """
    if d < 2:
        raise ValueError(f"dimension must be >= 2, got {d}")
    if kind not in LETTERS:
        raise ValueError(f"unknown operator kind {kind!r}; expected one of {LETTERS}")
    m = np.zeros((d, d), dtype=np.complex128)
    if kind == "I":
        m[:] = np.eye(d)
    elif kind == "X":
        for k in range(d):
            m[(k + 1) % d, k] = 1
    elif kind == "Z":
        for k in range(d):
            m[k, k] = phase_to_complex(PhaseExponent(k, d))
    else:
        # exp(i pi/d) is the primitive 2d-th root of unity
        c = 1 if literal or d % 2 else phase_to_complex(PhaseExponent(1, 2 * d))
        for k in range(d):
            m[(k - 1) % d, k] = c * phase_to_complex(PhaseExponent(k, d))
    m.setflags(write=False)
    return GeneralizedPauli(kind, d, m)


@dataclass(frozen=True)
class WitnessWord:
    letters: tuple[str, ...]
    d: int

    def __post_init__(self):
        letters = tuple(self.letters)
        if len(letters) < 1:
            raise ValueError("empty witness word")
        bad = [c for c in letters if c not in LETTERS]
        if bad:
            raise ValueError(f"unknown letters {bad}; expected one of {LETTERS}")
        if self.d < 2:
            raise ValueError(f"dimension must be >= 2, got {self.d}")
        object.__setattr__(self, "letters", letters)

    @classmethod
    def parse(cls, text: str, d: int) -> "WitnessWord":
        return cls(tuple(text.strip().upper()), d)

    @property
    def m(self) -> int:
        return len(self.letters)

    def __str__(self):
        return "".join(self.letters)


@dataclass(frozen=True)
class HistoryState:
    m: int
    d: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=np.complex128).copy()
        if amps.shape != (self.d**self.m,):
            raise ValueError(f"expected {self.d ** self.m} amplitudes, got shape {amps.shape}")
        norm = np.linalg.norm(amps)
        if abs(norm - 1) > 1e-12:
            raise ValueError(f"history state must have unit norm, got {norm}")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)


def ghz_history_state(m: int) -> HistoryState:
    """``(|0...0> - |1...1>) / sqrt(2)`` on ``m`` qubit time nodes."""
    if m < 2:
        raise ValueError(f"need at least 2 time nodes, got {m}")
    amps = np.zeros(2**m, dtype=np.complex128)
    amps[0] = 1 / np.sqrt(2)
    amps[-1] = -1 / np.sqrt(2)
    return HistoryState(m, 2, amps)


def history_amplitude(state: HistoryState, basis_outcomes: Sequence[int]) -> complex:
    """Amplitude of the basis history ``|i_1 ... i_m>``; its squared
    modulus is the probability of that outcome sequence."""
    if len(basis_outcomes) != state.m:
        raise ValueError(f"expected {state.m} outcomes, got {len(basis_outcomes)}")
    idx = 0
    for i in basis_outcomes:
        if not 0 <= i < state.d:
            raise ValueError(f"basis index {i} out of range [0, {state.d})")
        idx = idx * state.d + int(i)
    return complex(state.amplitudes[idx])


def _check_shapes(state: HistoryState, word: WitnessWord) -> None:
    if word.d != state.d or word.m != state.m:
        raise ValueError(
            f"word {word} (m={word.m}, d={word.d}) does not match state (m={state.m}, d={state.d})"
        )


def apply_word(state: HistoryState, word: WitnessWord, *, literal: bool = False) -> np.ndarray:
    """``W |psi>`` computed slot by slot, without forming the full operator."""
    _check_shapes(state, word)
    psi = state.amplitudes.reshape((state.d,) * state.m)
    for slot, letter in enumerate(word.letters):
        if letter == "I":
            continue
        op = generalized_pauli(letter, state.d, literal=literal).matrix
        psi = np.moveaxis(np.tensordot(op, psi, axes=([1], [slot])), 0, slot)
    return psi.reshape(-1)


def witness_expectation(state: HistoryState, w: WitnessWord, *, literal: bool = False) -> complex:
    return complex(np.vdot(state.amplitudes, apply_word(state, w, literal=literal)))


def temporal_witness_family(m: int) -> list[WitnessWord]:
    """``m + 1`` qubit witnesses for an ``m``-node GHZ history, ``m`` odd.

    Word 0 is ``X`` on every node; word ``i`` puts ``Y`` on nodes ``i`` and
    ``i + 1`` (cyclically) and ``X`` elsewhere.  Every node then carries
    ``X`` an even number ``m - 1`` of times and ``Y`` twice, so classical
    outcomes multiply to +1, while the GHZ history is an eigenvector with
    eigenvalues ``-1, +1, ..., +1``.  For ``m = 3`` this is the original
    GHZ set ``XXX, YYX, XYY, YXY``.
    """
    if m < 3 or m % 2 == 0:
        raise ValueError(
            f"witness family is only constructed for odd m >= 3 "
            f"(needs an even number of witnesses n = m + 1), got m={m}"
        )
    words = [WitnessWord(("X",) * m, 2)]
    for i in range(m):
        letters = ["X"] * m
        letters[i] = letters[(i + 1) % m] = "Y"
        words.append(WitnessWord(tuple(letters), 2))
    return words


def _json_complex(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


@dataclass(frozen=True)
class ParadoxReport:
    is_common_eigenvector: bool
    eigenvalues: tuple[complex, ...]
    quantum_product: complex
    classical_product_constraint_holds: bool
    is_paradox: bool

    def to_dict(self) -> dict:
        return {
            "is_common_eigenvector": self.is_common_eigenvector,
            "eigenvalues": [_json_complex(z) for z in self.eigenvalues],
            "quantum_product": _json_complex(self.quantum_product),
            "classical_product_constraint_holds": self.classical_product_constraint_holds,
            "is_paradox": self.is_paradox,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _classical_constraint(words: Sequence[WitnessWord]) -> bool:
    # Classical outcomes are d-th roots of unity, so a letter's values
    # multiply to 1 for every assignment iff it occurs a multiple of d times.
    d = words[0].d
    for slot in range(words[0].m):
        column = [w.letters[slot] for w in words]
        for letter in ("X", "Y", "Z"):
            if column.count(letter) % d:
                return False
    return True


def verify_ghz_paradox(
    state: HistoryState, words: Sequence[WitnessWord], *, literal: bool = False
) -> ParadoxReport:
    """Check that ``words`` and ``state`` form a GHZ-type paradox.

    Requires ``state`` to be an eigenvector of every word, the eigenvalues to
    multiply to -1, and each node's letters to force a classical product of
    +1.
    """
    if not words:
        raise ValueError("no witness words given")
    for w in words:
        _check_shapes(state, w)
    psi = state.amplitudes
    eigs = []
    common = True
    for w in words:
        image = apply_word(state, w, literal=literal)
        lam = complex(np.vdot(psi, image))
        eigs.append(lam)
        if np.linalg.norm(image - lam * psi) >= EIGEN_TOL:
            common = False
    product = complex(np.prod(eigs))
    classical = _classical_constraint(words)
    paradox = common and classical and abs(product + 1) < EIGEN_TOL
    return ParadoxReport(common, tuple(eigs), product, classical, paradox)


# ---------------------------------------------------------------------------
# odd-dimension no-go


@dataclass(frozen=True)
class NoGoReport:
    all_eigenvalues_in_S: bool
    minus_one_found: bool
    d: int
    m: int
    words_checked: int
    max_root_distance: float
    min_distance_to_minus_one: float

    def to_dict(self) -> dict:
        return {
            "all_eigenvalues_in_S": self.all_eigenvalues_in_S,
            "minus_one_found": self.minus_one_found,
            "d": self.d,
            "m": self.m,
            "words_checked": self.words_checked,
            "max_root_distance": self.max_root_distance,
            "min_distance_to_minus_one": self.min_distance_to_minus_one,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def nearest_root_distance(values: np.ndarray, d: int) -> np.ndarray:
    """Distance from each value to the closest d-th root of unity."""
    values = np.asarray(values, dtype=np.complex128)
    k = np.round(np.angle(values) * d / (2 * np.pi))
    return np.abs(values - np.exp(2j * np.pi * k / d))


def _slot_operators(d: int, m: int, pool: int, seed: int) -> list[list[np.ndarray]]:
    mats = {c: generalized_pauli(c, d).matrix for c in LETTERS}
    slots = [[mats[c] for c in letters] for letters in itertools.product(LETTERS, repeat=m)]
    rng = np.random.default_rng(seed)
    for _ in range(pool):
        word = []
        for _slot in range(m):
            length = int(rng.integers(1, 5))
            picks = rng.choice(np.array(["X", "Y", "Z"]), size=length)
            word.append(reduce(np.matmul, [mats[c] for c in picks]))
        slots.append(word)
    return slots


def _word_spectrum(factors: list[np.ndarray]) -> np.ndarray:
    size = int(np.prod([f.shape[0] for f in factors]))
    if size <= DENSE_EIG_LIMIT:
        return np.linalg.eigvals(reduce(np.kron, factors))
    # spectrum of a Kronecker product is the set of products of factor eigenvalues
    out = np.ones(1, dtype=np.complex128)
    for f in factors:
        out = np.multiply.outer(out, np.linalg.eigvals(f)).reshape(-1)
    return out


def odd_dimension_nogo_check(
    d: int, m: int, max_word_pool: int, *, seed: int = 0
) -> NoGoReport:
    """Search tensor words for an eigenvalue -1 in odd dimension ``d``.

    The pool holds every word in ``{I, X, Y, Z}**m`` plus ``max_word_pool``
    random words whose per-node operator is a product of one to four
    letters.  Every eigenvalue should be a d-th root of unity, and since
    ``d`` is odd none of them can be -1.
    """
    if d < 3 or d % 2 == 0:
        raise ValueError(f"the no-go check applies to odd d >= 3, got d={d}")
    if m < 1:
        raise ValueError(f"need m >= 1, got {m}")
    if d**m > MAX_HISTORY_DIM:
        raise ValueError(f"d**m = {d ** m} exceeds limit {MAX_HISTORY_DIM}")
    if 4**m > 4096:
        raise ValueError(f"4**m = {4 ** m} exhaustive words is too many; use m <= 6")
    if max_word_pool < 0:
        raise ValueError(f"max_word_pool must be >= 0, got {max_word_pool}")
    words = _slot_operators(d, m, max_word_pool, seed)
    max_root = 0.0
    min_minus = np.inf
    for factors in words:
        eig = _word_spectrum(factors)
        max_root = max(max_root, float(nearest_root_distance(eig, d).max()))
        min_minus = min(min_minus, float(np.abs(eig + 1).min()))
    return NoGoReport(
        all_eigenvalues_in_S=max_root < ROOT_TOL,
        minus_one_found=min_minus < ROOT_TOL,
        d=d,
        m=m,
        words_checked=len(words),
        max_root_distance=max_root,
        min_distance_to_minus_one=min_minus,
    )

