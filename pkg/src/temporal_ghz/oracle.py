"""Grid brute-force oracle for the classical minimum.

Deliberately shares no code with the optimizer: timelines are enumerated by
filtering all ``d**n`` outcome tuples, roots of unity come straight from
``numpy.exp`` and there is no gradient or projection step.  Only plain
exhaustive search over a probability grid.
"""
from __future__ import annotations

import itertools
import math

import numpy as np

MAX_TIMELINES = 10**4
SUPPORT_SIZE = 4
# Slot permutations are only folded in while n! stays small.
MAX_PERMUTED_N = 6
# Real entries per evaluation block; keeps peak memory near 100 MB.
_BLOCK_ELEMENTS = 2_000_000


def _compositions(total: int, parts: int) -> np.ndarray:
    """All non-negative integer vectors of length ``parts`` summing to ``total``."""
    out = []
    for bars in itertools.combinations(range(total + parts - 1), parts - 1):
        prev = -1
        row = []
        for b in bars:
            row.append(b - prev - 1)
            prev = b
        row.append(total + parts - 2 - prev)
        out.append(row)
    return np.array(out, dtype=np.float64)


def _orbit_representatives(supports: np.ndarray, d: int) -> np.ndarray:
    """Indices of one support per symmetry orbit.

    ``supports`` has shape ``(B, s, n)``.  Three operations leave
    ``Re prod_i sum_j p_j Q_ij`` unchanged for matching probabilities:
    subtracting one member timeline from all of them (mod d), permuting the
    slots, and negating every exponent (complex conjugation).  Each support
    is mapped to the smallest encoding over all such images.
    """
    b, s, n = supports.shape
    if (d**n) ** s >= 2**62:
        return np.arange(b)
    weights = d ** np.arange(n - 1, -1, -1, dtype=np.int64)
    perms = (
        list(itertools.permutations(range(n)))
        if n <= MAX_PERMUTED_N
        else [tuple(range(n))]
    )
    best = None
    for anchor in range(s):
        shifted = (supports - supports[:, anchor : anchor + 1, :]) % d
        for sign in (1, -1):
            signed = (sign * shifted) % d
            for perm in perms:
                codes = np.sort(signed[:, :, perm] @ weights, axis=1)
                key = np.zeros(b, dtype=np.int64)
                for col in range(s):
                    key = key * (d**n) + codes[:, col]
                best = key if best is None else np.minimum(best, key)
    _, first = np.unique(best, return_index=True)
    return np.sort(first)


def brute_force_min(n: int, d: int, grid_steps: int, *, reduce: bool = True) -> float:
    """Smallest ``Re prod_i sum_j p_j Q_ij`` over grid distributions.

    Searches every support of at most four valid timelines with probabilities
    in multiples of ``1 / grid_steps``.  Grid points with zero entries cover
    the smaller supports.  Only supports containing the all-zeros timeline
    are visited: shifting all timelines by a valid timeline maps the valid
    set onto itself and multiplies the product by 1.  With ``reduce`` the
    supports are further folded by slot permutation and conjugation.

    The result is an upper bound on the true minimum and tightens as
    ``grid_steps`` grows.
    """
    if n < 2 or d < 2:
        raise ValueError(f"need n >= 2 and d >= 2, got n={n}, d={d}")
    if d ** (n - 1) > MAX_TIMELINES:
        raise ValueError(f"d**(n-1) = {d ** (n - 1)} exceeds oracle limit {MAX_TIMELINES}")
    if grid_steps < 10:
        raise ValueError(f"grid_steps must be >= 10, got {grid_steps}")

    valid = np.array([t for t in itertools.product(range(d), repeat=n) if sum(t) % d == 0])
    size = min(SUPPORT_SIZE, len(valid))
    # valid[0] is the all-zeros tuple
    combos = np.array(list(itertools.combinations(range(1, len(valid)), size - 1)), dtype=np.int64)
    supports = np.concatenate(
        [np.zeros((len(combos), 1), dtype=np.int64), combos], axis=1
    )
    if reduce:
        supports = supports[_orbit_representatives(valid[supports], d)]

    angles = 2 * np.pi * valid / d
    re, im = np.cos(angles), np.sin(angles)
    grid = _compositions(grid_steps, size) / grid_steps  # (G, size)
    chunk = max(1, _BLOCK_ELEMENTS // (len(grid) * n))
    best = math.inf
    for start in range(0, len(supports), chunk):
        idx = supports[start : start + chunk]
        mean_re = grid @ re[idx]  # (B, G, n)
        mean_im = grid @ im[idx]
        pr, pi = mean_re[..., 0], mean_im[..., 0]
        for i in range(1, n):
            pr, pi = pr * mean_re[..., i] - pi * mean_im[..., i], pr * mean_im[..., i] + pi * mean_re[..., i]
        best = min(best, float(pr.min()))
    return best
