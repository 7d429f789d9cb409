import cmath
import math
from functools import lru_cache

from temporal_ghz.classical import minimize


@lru_cache(maxsize=None)
def cached_minimize(n, d):
    """Default-config minimize, shared across test modules."""
    return minimize(n, d)


def direct_value(dist, probs=None):
    """Complex product of slot averages by explicit loops; test oracle."""
    probs = dist.probs if probs is None else probs
    z = 1 + 0j
    for i in range(dist.n):
        a = sum(p * cmath.exp(2j * math.pi * row[i] / dist.d) for row, p in zip(dist.support, probs))
        z *= a
    return z


def fd_gradient(dist, h=1e-6):
    out = []
    for j in range(len(dist.probs)):
        up = list(dist.probs)
        dn = list(dist.probs)
        up[j] += h
        dn[j] -= h
        out.append((direct_value(dist, up).real - direct_value(dist, dn).real) / (2 * h))
    return out
