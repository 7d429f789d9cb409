"""Classical temporal expectation and its minimisation.

For a distribution ``p`` over timelines ``Q_j = (Q_1j, ..., Q_nj)`` the
classical expectation is the product of slot averages

    E_t = prod_i a_i,     a_i = sum_j p_j Q_ij.

Each ``a_i`` lies in the unit disc, so ``Re E_t`` lies in ``[-1, 1]``.  The
lower end of the achievable range is the classical boundary that a quantum
GHZ history (which reaches -1) has to beat.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, fields
from enum import Enum
from itertools import combinations
from typing import Iterable

import numpy as np

from .phases import roots_of_unity
from .timelines import (
    DEFAULT_ENUMERATION_CAP,
    Distribution,
    appendix_b_distribution,
    appendix_c_distribution,
    timeline_array,
)

__all__ = [
    "ObjectiveValue",
    "BoundsConfig",
    "OptResult",
    "Verdict",
    "SweepRow",
    "slot_averages",
    "evaluate",
    "gradient",
    "project_simplex",
    "minimize",
    "closed_form_qubit_min",
    "closed_form_continuous_min",
    "certification",
    "sweep",
    "parse_mode",
    "write_sweep_csv",
    "sweep_json",
    "classify",
]

# Probabilities below this are dropped from optimizer output.
_PRUNE = 1e-13
_MAX_HALVINGS = 30
# Minima closer than this are treated as ties.
_TIE_TOL = 1e-12
# Column generation runs a d x d dynamic programme per slot.
_MAX_COLUMN_D = 256
_POLISH_TOP = 16


@dataclass(frozen=True)
class ObjectiveValue:
    value: float
    imag_residual: float


def slot_averages(dist: Distribution) -> np.ndarray:
    """The ``n`` complex averages ``a_i`` (mean outcome of witness ``i``)."""
    roots = roots_of_unity(dist.d)
    return dist.prob_array @ roots[dist.exponent_array]


def evaluate(dist: Distribution) -> ObjectiveValue:
    z = complex(np.prod(slot_averages(dist)))
    return ObjectiveValue(z.real, abs(z.imag))


def _loo_products(a: np.ndarray) -> np.ndarray:
    """``out[..., i] = prod_{k != i} a[..., k]`` without division."""
    ones = np.ones(a.shape[:-1] + (1,), dtype=a.dtype)
    prefix = np.cumprod(np.concatenate([ones, a[..., :-1]], axis=-1), axis=-1)
    suffix = np.cumprod(np.concatenate([ones, a[..., :0:-1]], axis=-1), axis=-1)[..., ::-1]
    return prefix * suffix


def gradient(dist: Distribution) -> np.ndarray:
    """Partial derivatives of ``Re E_t`` with respect to each support probability.

    ``d Re E_t / d p_j = Re sum_i Q_ij prod_{k != i} a_k``.
    """
    q = roots_of_unity(dist.d)[dist.exponent_array]
    a = dist.prob_array @ q
    return (q @ _loo_products(a)).real


def project_simplex(v: np.ndarray) -> np.ndarray:
    """Euclidean projection of each row of ``v`` onto the probability simplex.

    Sort-and-threshold; works on a single vector or a batch of rows.
    """
    v = np.asarray(v, dtype=np.float64)
    single = v.ndim == 1
    rows = np.atleast_2d(v)
    s = rows.shape[1]
    u = -np.sort(-rows, axis=1)
    css = np.cumsum(u, axis=1) - 1.0
    idx = np.arange(1, s + 1)
    cond = u - css / idx > 0
    rho = s - 1 - np.argmax(cond[:, ::-1], axis=1)
    theta = css[np.arange(rows.shape[0]), rho] / (rho + 1)
    out = np.maximum(rows - theta[:, None], 0.0)
    return out[0] if single else out


@dataclass(frozen=True)
class BoundsConfig:
    restarts: int = 64
    max_iters: int = 2000
    step_init: float = 0.1
    grad_tol: float = 1e-10
    imag_tol: float = 1e-9
    support_cap: int | None = None  # None means 2n
    seed: int = 0
    enumeration_cap: int = DEFAULT_ENUMERATION_CAP
    # Upper limit on the number of fixed supports tried by the exhaustive phase.
    support_budget: int = 20_000

    def __post_init__(self):
        for f in fields(self):
            val = getattr(self, f.name)
            if f.name == "seed":
                if not isinstance(val, (int, np.integer)) or val < 0:
                    raise ValueError(f"seed must be a non-negative integer, got {val!r}")
                continue
            if val is None:
                continue
            if not val > 0:
                raise ValueError(f"{f.name} must be positive, got {val!r}")

    def cap_for(self, n: int) -> int:
        return self.support_cap if self.support_cap is not None else 2 * n


class Termination(str, Enum):
    gradient_norm = "gradient_norm"
    max_iters = "max_iters"
    support_exhausted = "support_exhausted"


@dataclass(frozen=True)
class OptResult:
    best_value: float
    best_distribution: Distribution
    restarts_run: int
    converged_restarts: int
    seed: int
    termination: str
    imag_residual: float = 0.0
    warnings: tuple[str, ...] = field(default=())

    def to_dict(self) -> dict:
        return {
            "best_value": self.best_value,
            "imag_residual": self.imag_residual,
            "best_distribution": self.best_distribution.to_dict(),
            "restarts_run": self.restarts_run,
            "converged_restarts": self.converged_restarts,
            "seed": self.seed,
            "termination": self.termination,
            "warnings": list(self.warnings),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


# ---------------------------------------------------------------------------
# batched projected gradient descent


def _batch_eval(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    a = np.einsum("bs,bsn->bn", p, q)
    return np.prod(a, axis=1).real


def _batch_value_grad(p: np.ndarray, q: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    a = np.einsum("bs,bsn->bn", p, q)
    val = np.prod(a, axis=1).real
    grad = np.einsum("bsn,bn->bs", q, _loo_products(a)).real
    return val, grad


def _descend(q: np.ndarray, p0: np.ndarray, cfg: BoundsConfig) -> tuple[np.ndarray, np.ndarray]:
    """Run projected gradient descent independently on every row.

    ``q`` has shape ``(B, s, n)`` (outcomes of each supported timeline) and
    ``p0`` shape ``(B, s)``.  Each iteration tries step ``step_init`` and
    halves it until the objective strictly decreases.  Returns the final
    probabilities and the per-row ``Termination`` value.
    """
    codes = list(Termination)
    p = project_simplex(p0)
    status = np.full(p.shape[0], codes.index(Termination.max_iters))
    active = np.arange(p.shape[0])
    for _ in range(cfg.max_iters):
        if active.size == 0:
            break
        pa, qa = p[active], q[active]
        val, grad = _batch_value_grad(pa, qa)
        pg = np.linalg.norm(project_simplex(pa - grad) - pa, axis=1)
        done = pg < cfg.grad_tol
        status[active[done]] = codes.index(Termination.gradient_norm)

        todo = np.flatnonzero(~done)
        new_p = pa.copy()
        step = cfg.step_init
        for _h in range(_MAX_HALVINGS + 1):
            if todo.size == 0:
                break
            cand = project_simplex(pa[todo] - step * grad[todo])
            ok = _batch_eval(cand, qa[todo]) < val[todo]
            new_p[todo[ok]] = cand[ok]
            todo = todo[~ok]
            step *= 0.5
        status[active[todo]] = codes.index(Termination.support_exhausted)
        p[active] = new_p
        stalled = np.zeros(active.size, dtype=bool)
        stalled[todo] = True
        active = active[~(done | stalled)]
    return p, np.array([codes[c].value for c in status])


def _to_distribution(rows: np.ndarray, probs: np.ndarray, n: int, d: int) -> Distribution:
    keep = probs > _PRUNE
    probs = probs[keep] / probs[keep].sum()
    return Distribution(n, d, tuple(map(tuple, rows[keep].tolist())), tuple(probs.tolist()))


@dataclass
class _Candidate:
    value: float
    residual: float
    dist: Distribution
    termination: str

    @property
    def key(self) -> str:
        return json.dumps(self.dist.support)


def _collect(
    rows: np.ndarray, probs: np.ndarray, status: np.ndarray, n: int, d: int
) -> list[_Candidate]:
    out = []
    for r, pr, st in zip(rows, probs, status):
        dist = _to_distribution(r, pr, n, d)
        ov = evaluate(dist)
        out.append(_Candidate(ov.value, ov.imag_residual, dist, str(st)))
    return out


def _best_columns(loo: np.ndarray, roots: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Valid timeline minimising the linearised objective, for each row.

    The derivative of ``Re E_t`` along timeline ``t`` is
    ``Re sum_i L_i w**t_i`` with ``L = loo``.  Minimising it subject to
    ``sum_i t_i = 0 (mod d)`` is a shortest path over slots whose state is the
    running exponent sum, solved exactly in ``O(n d**2)``.
    """
    b, n = loo.shape
    d = roots.size
    cost = (loo[:, :, None] * roots[None, None, :]).real  # (B, n, d)
    prev = (np.arange(d)[:, None] - np.arange(d)[None, :]) % d  # [s, k] -> s - k
    f = cost[:, 0, :]
    choice = np.zeros((n, b, d), dtype=np.int64)
    for i in range(1, n):
        total = f[:, prev] + cost[:, i, None, :]  # (B, s, k)
        choice[i] = np.argmin(total, axis=2)
        f = np.take_along_axis(total, choice[i][:, :, None], axis=2)[:, :, 0]
    cols = np.zeros((b, n), dtype=np.int64)
    state = np.zeros(b, dtype=np.int64)
    rows = np.arange(b)
    for i in range(n - 1, 0, -1):
        k = choice[i][rows, state]
        cols[:, i] = k
        state = (state - k) % d
    cols[:, 0] = state
    return cols, f[:, 0]


def _refine(
    rows: np.ndarray, probs: np.ndarray, cfg: BoundsConfig, roots: np.ndarray, rounds: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Alternate descent on the current supports with column generation.

    After each descent the best timeline over the whole valid set is found;
    rows where it would lower the objective get it appended with zero mass.
    Rows that cannot improve get a zero-mass copy of an existing timeline so
    the batch stays rectangular.  Ends when no row can improve.
    """
    probs, status = _descend(roots[rows], probs, cfg)
    if roots.size > _MAX_COLUMN_D:
        return rows, probs, status
    for _ in range(rounds):
        q = roots[rows]
        loo = _loo_products(np.einsum("bs,bsn->bn", probs, q))
        current = (probs * np.einsum("bsn,bn->bs", q, loo).real).sum(axis=1)
        cols, best = _best_columns(loo, roots)
        better = best < current - 1e-12 * np.maximum(1.0, np.abs(current))
        if not better.any():
            break
        new = np.where(better[:, None], cols, rows[:, 0, :])
        rows = np.concatenate([rows, new[:, None, :]], axis=1)
        probs = np.concatenate([probs, np.zeros((len(probs), 1))], axis=1)
        probs, status = _descend(roots[rows], probs, cfg)
    return rows, probs, status


def _support_search(
    n: int, d: int, cfg: BoundsConfig, roots: np.ndarray, notes: list[str]
) -> list[_Candidate]:
    """Optimise probabilities on every small support containing the all-zeros
    timeline.

    Multiplying slot ``i`` of every timeline by ``c_i`` with ``prod c_i = 1``
    leaves ``E_t`` unchanged and maps valid timelines onto valid timelines,
    so any support can be translated to one containing the all-zeros
    timeline.
    """
    count = d ** (n - 1)
    if count > cfg.enumeration_cap:
        notes.append(
            f"exhaustive support search skipped: {count} timelines exceeds "
            f"enumeration cap {cfg.enumeration_cap}"
        )
        return []
    table = timeline_array(n, d, cfg.enumeration_cap)
    others = table[1:]  # row 0 is all zeros
    max_size = min(cfg.cap_for(n), 4, count)
    out: list[_Candidate] = []
    used = 0
    for size in range(2, max_size + 1):
        n_sets = math.comb(len(others), size - 1)
        if used + n_sets > cfg.support_budget:
            notes.append(
                f"exhaustive support search stopped before size {size}: "
                f"{n_sets} supports exceeds remaining budget"
            )
            break
        used += n_sets
        combos = np.array(list(combinations(range(len(others)), size - 1)), dtype=np.int64)
        rows = np.concatenate(
            [np.zeros((len(combos), 1, n), dtype=np.int64), others[combos]], axis=1
        )
        p0 = np.full((len(combos), size), 1.0 / size)
        probs, status = _descend(roots[rows], p0, cfg)
        out.extend(_collect(rows, probs, status, n, d))
    return out


def _sample_timelines(rng: np.random.Generator, size: int, n: int, d: int) -> np.ndarray:
    head = rng.integers(0, d, size=(size, n - 1))
    return np.column_stack([head, (-head.sum(axis=1)) % d])


def _restarts(
    n: int, d: int, cfg: BoundsConfig, roots: np.ndarray
) -> list[_Candidate]:
    size = cfg.cap_for(n)
    children = np.random.SeedSequence(cfg.seed).spawn(cfg.restarts)
    rows, p0 = [], []
    for child in children:
        rng = np.random.default_rng(child)
        rows.append(_sample_timelines(rng, size, n, d))
        p0.append(rng.dirichlet(np.ones(size)))
    rows_a, probs, status = _refine(np.array(rows), np.array(p0), cfg, roots, 2 * n)
    return _collect(rows_a, probs, status, n, d)


def _polish(
    cands: list[_Candidate], n: int, d: int, cfg: BoundsConfig, roots: np.ndarray
) -> list[_Candidate]:
    """Column-generation refinement of the best few distinct candidates."""
    seen, top = set(), []
    for c in sorted(cands, key=lambda c: (c.value, c.key)):
        if c.key in seen:
            continue
        seen.add(c.key)
        top.append(c)
        if len(top) == _POLISH_TOP:
            break
    width = max(len(c.dist.support) for c in top)
    rows = np.zeros((len(top), width, n), dtype=np.int64)
    probs = np.zeros((len(top), width))
    for i, c in enumerate(top):
        s = len(c.dist.support)
        rows[i, :s] = c.dist.exponent_array
        rows[i, s:] = c.dist.exponent_array[0]
        probs[i, :s] = c.dist.prob_array
    rows, probs, status = _refine(rows, probs, cfg, roots, 2 * n)
    return _collect(rows, probs, status, n, d)


def _pick(cands: Iterable[_Candidate]) -> _Candidate:
    cands = list(cands)
    best = min(c.value for c in cands)
    return min((c for c in cands if c.value <= best + _TIE_TOL), key=lambda c: c.key)


def minimize(n: int, d: int, cfg: BoundsConfig | None = None) -> OptResult:
    """Numerically minimise ``Re E_t`` over distributions of ``(n, d)`` timelines.

    Three sources of candidates are pooled:

    1. the two known extremal constructions, when they apply;
    2. every support of size <= min(support_cap, 4) containing the all-zeros
       timeline, while the enumeration cap and ``support_budget`` allow;
    3. ``cfg.restarts`` random sparse supports seeded from ``cfg.seed``.

    Each candidate is refined by projected gradient descent on its support.
    The restarts and the best few other candidates are then grown by column
    generation until no valid timeline outside the support can lower the
    objective.  Candidates whose product has an imaginary part above
    ``cfg.imag_tol`` are not physical expectations and are discarded.  The
    result is a deterministic function of ``(n, d, cfg)``.
    """
    cfg = cfg or BoundsConfig()
    if n < 3 or d < 2:
        raise ValueError(f"minimize needs n >= 3 and d >= 2, got n={n}, d={d}")
    roots = roots_of_unity(d)
    notes: list[str] = []

    seeds = [Distribution.point_mass((0,) * n, d)]
    if d == 2 and n % 2 == 0 and n >= 4:
        seeds.append(appendix_b_distribution(n))
    if d % n == 0:
        seeds.append(appendix_c_distribution(n, d))
    cands: list[_Candidate] = []
    for dist in seeds:
        rows = dist.exponent_array[None]
        probs, status = _descend(roots[rows], dist.prob_array[None], cfg)
        cands.extend(_collect(rows, probs, status, n, d))
        ov = evaluate(dist)
        cands.append(_Candidate(ov.value, ov.imag_residual, dist, Termination.gradient_norm.value))

    cands.extend(_support_search(n, d, cfg, roots, notes))
    cands.extend(_polish(cands, n, d, cfg, roots))
    if d > _MAX_COLUMN_D:
        notes.append(f"column generation skipped for d > {_MAX_COLUMN_D}")
    restart_cands = _restarts(n, d, cfg, roots)
    cands.extend(restart_cands)
    converged = sum(c.termination != Termination.max_iters.value for c in restart_cands)

    physical = [c for c in cands if c.residual <= cfg.imag_tol]
    rejected = len(cands) - len(physical)
    if rejected:
        notes.append(f"{rejected} candidates rejected for imaginary residual > {cfg.imag_tol:g}")
    best = _pick(physical)
    return OptResult(
        best_value=best.value,
        best_distribution=best.dist,
        restarts_run=cfg.restarts,
        converged_restarts=converged,
        seed=int(cfg.seed),
        termination=best.termination,
        imag_residual=best.residual,
        warnings=tuple(notes),
    )


# ---------------------------------------------------------------------------
# closed forms


def closed_form_qubit_min(n: int) -> float:
    """``-((n - 2) / n) ** n``, the proven qubit minimum for even ``n >= 4``."""
    if n < 4 or n % 2:
        raise ValueError(f"qubit closed form is only established for even n >= 4, got n={n}")
    return -(((n - 2) / n) ** n)


def closed_form_continuous_min(n: int) -> float:
    """``-cos(pi / n) ** n``, the minimum when outcome phases are continuous."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    return -(math.cos(math.pi / n) ** n)


def certification(n: int, d: int) -> tuple[float | None, str]:
    """Closed-form minimum for ``(n, d)`` if one is established, with a label."""
    if d == 2:
        if n % 2 == 0 and n >= 4:
            return closed_form_qubit_min(n), "closed_form"
        return None, "uncertified (odd n)"
    if d % n == 0:
        return closed_form_continuous_min(n), "closed_form (d=kn)"
    return None, "uncertified (n does not divide d)"


# ---------------------------------------------------------------------------
# sweeps and classification


@dataclass(frozen=True)
class SweepRow:
    n: int
    mode: str
    min_value: float
    certified: str


def parse_mode(text: str) -> str:
    """Normalise a mode name: ``qubit``, ``continuous`` or ``numeric(D)``.

    ``numeric:D`` is accepted as a shell-friendly spelling.
    """
    t = text.strip().lower()
    if t in ("qubit", "continuous"):
        return t
    d = None
    if t.startswith("numeric(") and t.endswith(")"):
        d = t[len("numeric(") : -1]
    elif t.startswith("numeric:"):
        d = t[len("numeric:") :]
    if d is None or not d.isdigit() or int(d) < 2:
        raise ValueError(f"unknown mode {text!r}; expected qubit, continuous or numeric(D) with D >= 2")
    return f"numeric({int(d)})"


def sweep(
    n_min: int, n_max: int, modes: Iterable[str], cfg: BoundsConfig | None = None
) -> list[SweepRow]:
    if not 3 <= n_min <= n_max:
        raise ValueError(f"need 3 <= n_min <= n_max, got {n_min}..{n_max}")
    modes = sorted({parse_mode(m) for m in modes})
    if not modes:
        raise ValueError("no modes given")
    rows = []
    for n in range(n_min, n_max + 1):
        for mode in modes:
            if mode == "qubit":
                if n % 2 == 0:
                    rows.append(SweepRow(n, mode, closed_form_qubit_min(n), "closed_form"))
            elif mode == "continuous":
                rows.append(SweepRow(n, mode, closed_form_continuous_min(n), "closed_form"))
            else:
                d = int(mode[len("numeric(") : -1])
                rows.append(SweepRow(n, mode, minimize(n, d, cfg).best_value, "numeric"))
    return rows


SWEEP_HEADER = ("n", "mode", "min_value", "certified")


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def write_sweep_csv(rows: Iterable[SweepRow], fh) -> None:
    import csv

    w = csv.writer(fh, lineterminator="\n")
    w.writerow(SWEEP_HEADER)
    for r in rows:
        w.writerow([r.n, r.mode, _fmt(r.min_value), r.certified])


def sweep_json(rows: Iterable[SweepRow]) -> str:
    doc = [
        {"n": r.n, "mode": r.mode, "min_value": float(_fmt(r.min_value)), "certified": r.certified}
        for r in rows
    ]
    return json.dumps(doc, indent=2) + "\n"


class Verdict(str, Enum):
    quantum_certified = "quantum_certified"
    classically_explainable = "classically_explainable"


def classify(measured: float, n: int, mode: str) -> Verdict:
    """Compare a measured witness value against the classical boundary."""
    if not -1.0 <= measured <= 1.0:
        raise ValueError(f"measured value must lie in [-1, 1], got {measured}")
    if mode == "qubit":
        bound = closed_form_qubit_min(n)
    elif mode == "continuous":
        if n < 3:
            raise ValueError(f"n must be >= 3, got {n}")
        bound = closed_form_continuous_min(n)
    else:
        raise ValueError(f"mode must be 'qubit' or 'continuous', got {mode!r}")
    if measured < bound:
        return Verdict.quantum_certified
    return Verdict.classically_explainable
