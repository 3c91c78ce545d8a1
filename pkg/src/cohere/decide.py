"""Exact decision procedure for vanishing genuine distributed coherence.

A bipartite pure state can be fully decorrelated by a basis-permuting unitary
exactly when some rearrangement of its coefficient moduli forms a rank-one
matrix, equivalently when the largest singular value over all rearrangements
reaches 1.  This module enumerates rearrangements (deduplicated by repeated
moduli), evaluates that maximum, and implements the two shortcuts that decide
many cases outright: the prime support count and the two-qubit determinant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .states import CoefficientMatrix, ZERO_TOL

DECISION_TOL = 1e-9
DEFAULT_BUDGET = 500_000
_SVD_CHUNK = 65536


@dataclass(frozen=True)
class GdcDecision:
    """Outcome of the vanishing-GDC decision for one pure bipartite state.

    ``max_overlap`` is the best achievable overlap with a product state over
    all basis-permuting unitaries; ``is_zero`` says whether it reaches 1.
    ``exhaustive`` is False when the search was budget-limited, in which case
    ``max_overlap`` is only a lower bound.
    """

    is_zero: bool
    max_overlap: float
    witness_permutation: tuple[int, ...] | None
    shortcut_used: str
    exhaustive: bool = True


def _as_moduli(psi) -> np.ndarray:
    if isinstance(psi, CoefficientMatrix):
        return psi.moduli
    mat = np.asarray(psi)
    if mat.ndim != 2:
        raise ValueError(f"expected a 2-d coefficient matrix, got shape {mat.shape}")
    return np.abs(mat).astype(float)


def abs_rearranged(psi, pi) -> np.ndarray:
    """Moduli matrix with entry slot s holding |psi| of slot pi[s]."""
    moduli = _as_moduli(psi)
    pi = np.asarray(pi, dtype=np.intp).reshape(-1)
    n = moduli.size
    if pi.size != n or not np.array_equal(np.sort(pi), np.arange(n)):
        raise ValueError("invalid bijection on entry slots")
    return moduli.reshape(-1)[pi].reshape(moduli.shape)


def two_qubit_det_criterion(psi, tol: float = DECISION_TOL) -> bool:
    """True iff |m_max * m_min - m_1 * m_2| vanishes for the four moduli."""
    moduli = _as_moduli(psi)
    if moduli.shape != (2, 2):
        raise ValueError(f"expected 2x2, got shape {moduli.shape}")
    m = np.sort(moduli.reshape(-1))[::-1]
    return abs(m[0] * m[3] - m[1] * m[2]) <= tol


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in range(2, int(math.isqrt(n)) + 1):
        if n % p == 0:
            return False
    return True


def prime_support_shortcut(psi) -> bool | None:
    """False (nonzero GDC) when the nonzero-entry count is a prime exceeding
    both local dimensions; None when inconclusive."""
    moduli = _as_moduli(psi)
    support = int((moduli > ZERO_TOL).sum())
    if _is_prime(support) and support > max(moduli.shape):
        return False
    return None


# ---------------------------------------------------------------------------
# arrangement enumeration


def _value_ids(moduli_flat: np.ndarray, tol: float = 1e-12):
    """Group moduli equal within tol.  Returns (descending unique values,
    id per slot, per-id slot queues in ascending slot order)."""
    order = np.argsort(-moduli_flat, kind="stable")
    values: list[float] = []
    ids = np.empty(moduli_flat.size, dtype=np.intp)
    queues: list[list[int]] = []
    for slot in order:
        v = float(moduli_flat[slot])
        if values and abs(values[-1] - v) <= tol:
            ids[slot] = len(values) - 1
            queues[-1].append(int(slot))
        else:
            values.append(v)
            ids[slot] = len(values) - 1
            queues.append([int(slot)])
    return np.array(values), ids, queues


def arrangement_total(moduli_flat: np.ndarray) -> int:
    """Distinct rearrangements of the moduli multiset."""
    _, ids, queues = _value_ids(np.asarray(moduli_flat, dtype=float).reshape(-1))
    total = math.factorial(ids.size)
    for q in queues:
        total //= math.factorial(len(q))
    return total


def _distinct_id_tuples(ids_sorted: list[int]):
    """All distinct permutations of a sorted id multiset, lexicographically."""
    seq = list(ids_sorted)
    n = len(seq)
    while True:
        yield tuple(seq)
        i = n - 2
        while i >= 0 and seq[i] >= seq[i + 1]:
            i -= 1
        if i < 0:
            return
        j = n - 1
        while seq[j] <= seq[i]:
            j -= 1
        seq[i], seq[j] = seq[j], seq[i]
        seq[i + 1 :] = seq[:i:-1]


def _permutation_for(id_tuple, queues) -> tuple[int, ...]:
    """Slot permutation realizing an id arrangement, smallest lexicographically."""
    cursors = [0] * len(queues)
    pi = []
    for vid in id_tuple:
        pi.append(queues[vid][cursors[vid]])
        cursors[vid] += 1
    return tuple(pi)


def _sigma_max_batch(mats: np.ndarray) -> np.ndarray:
    """Largest singular value of a stack of real matrices."""
    if mats.shape[1:] == (2, 2):
        g00 = mats[:, 0, 0] ** 2 + mats[:, 1, 0] ** 2
        g11 = mats[:, 0, 1] ** 2 + mats[:, 1, 1] ** 2
        g01 = mats[:, 0, 0] * mats[:, 0, 1] + mats[:, 1, 0] * mats[:, 1, 1]
        lam = 0.5 * (g00 + g11) + np.hypot(0.5 * (g00 - g11), g01)
        return np.sqrt(lam)
    out = np.empty(mats.shape[0])
    for start in range(0, mats.shape[0], _SVD_CHUNK):
        chunk = mats[start : start + _SVD_CHUNK]
        out[start : start + chunk.shape[0]] = np.linalg.svd(chunk, compute_uv=False)[:, 0]
    return out


def _exhaustive_max(moduli: np.ndarray):
    flat = moduli.reshape(-1)
    values, ids, queues = _value_ids(flat)
    id_tuples = list(_distinct_id_tuples(sorted(ids.tolist())))
    mats = values[np.array(id_tuples, dtype=np.intp)].reshape(-1, *moduli.shape)
    sig = _sigma_max_batch(mats)
    best = float(sig.max())
    witnesses = [
        _permutation_for(id_tuples[k], queues) for k in np.flatnonzero(sig == best)
    ]
    return best, min(witnesses), len(id_tuples)


def _stochastic_max(moduli: np.ndarray, budget: int, seed: int):
    """Transposition hill climbing over arrangements; returns a lower bound."""
    rng = np.random.default_rng(seed)
    flat = moduli.reshape(-1)
    values, ids, queues = _value_ids(flat)
    n = flat.size

    def sigma_of(id_arr):
        mat = values[np.asarray(id_arr, dtype=np.intp)].reshape(moduli.shape)
        return float(_sigma_max_batch(mat[None])[0])

    best_sigma = -1.0
    best_ids = None
    evals = 0
    current = np.sort(ids)  # descending moduli, row-major
    while evals < budget:
        cur_sigma = sigma_of(current)
        evals += 1
        if cur_sigma > best_sigma:
            best_sigma, best_ids = cur_sigma, current.copy()
        stall = 0
        while evals < budget and stall < 20 * n:
            i, j = rng.integers(0, n, size=2)
            if current[i] == current[j]:
                stall += 1
                continue
            current[i], current[j] = current[j], current[i]
            cand = sigma_of(current)
            evals += 1
            if cand > cur_sigma:
                cur_sigma = cand
                stall = 0
                if cand > best_sigma:
                    best_sigma, best_ids = cand, current.copy()
            else:
                current[i], current[j] = current[j], current[i]
                stall += 1
        current = rng.permutation(ids)
    return best_sigma, _permutation_for(tuple(best_ids), queues), evals


def max_localizable_overlap(
    psi,
    budget: int = DEFAULT_BUDGET,
    tol: float = DECISION_TOL,
    seed: int = 0,
) -> GdcDecision:
    """Maximize the largest singular value over moduli rearrangements.

    Exhaustive whenever the entry count is at most 12 slots and the number of
    distinct arrangements fits in ``budget``; otherwise a seeded transposition
    search runs and the result is flagged as a lower bound
    (``exhaustive=False``).
    """
    moduli = _as_moduli(psi)
    norm = float(np.linalg.norm(moduli))
    if abs(norm - 1.0) > 1e-9:
        raise ValueError(f"norm violation: moduli norm {norm!r} != 1")

    shortcut = "none"
    if moduli.shape == (2, 2):
        two_qubit_det_criterion(moduli, tol)
        shortcut = "two_qubit_determinant"
    elif prime_support_shortcut(moduli) is False:
        shortcut = "prime_support"

    n_slots = moduli.size
    total = arrangement_total(moduli.reshape(-1))
    if n_slots <= 12 and total <= budget:
        overlap, witness, _ = _exhaustive_max(moduli)
        exhaustive = True
    else:
        overlap, witness, _ = _stochastic_max(moduli, budget, seed)
        exhaustive = False
    return GdcDecision(
        is_zero=bool(overlap >= 1.0 - tol),
        max_overlap=overlap,
        witness_permutation=witness,
        shortcut_used=shortcut,
        exhaustive=exhaustive,
    )


# ---------------------------------------------------------------------------
# rank-one staircase test


def _header_patterns(n_rows: int, n_cols: int):
    """Interleavings of first-column and first-row header placements, one per
    monotone lattice path; their count is the rank-one test bound."""
    from itertools import combinations

    steps = (n_rows - 1) + (n_cols - 1)
    for row_positions in combinations(range(steps), n_cols - 1):
        pattern = ["C"] * steps
        for k in row_positions:
            pattern[k] = "R"
        yield pattern


def rank_one_arrangement_exists(psi, tol: float = DECISION_TOL) -> tuple[int, ...] | None:
    """Search the sorted staircase placements for a rank-one rearrangement.

    Returns a witness slot permutation (as accepted by :func:`abs_rearranged`)
    or None.  Rank one is certified by all 2x2 minors of the candidate moduli
    matrix vanishing within ``tol``.
    """
    moduli = _as_moduli(psi)
    d_a, d_b = moduli.shape
    flat = moduli.reshape(-1)
    order = sorted(range(flat.size), key=lambda s: (-flat[s], s))
    values = [float(flat[s]) for s in order]

    for pattern in _header_patterns(d_a, d_b):
        placement = _try_staircase(values, pattern, d_a, d_b, tol)
        if placement is None:
            continue
        candidate = np.empty((d_a, d_b))
        pi = np.empty(flat.size, dtype=np.intp)
        for rank, (i, j) in enumerate(placement):
            candidate[i, j] = values[rank]
            pi[i * d_b + j] = order[rank]
        if _all_minors_vanish(candidate, tol):
            return tuple(int(p) for p in pi)
    return None


def _try_staircase(values, pattern, d_a, d_b, tol):
    """Greedy placement of descending values for one header interleaving.

    Headers fill the first row/column in pattern order; every other value must
    match, in descending order, an inner entry predicted by the rank-one
    relation m[i,j] = m[i,0] * m[0,j] / m[0,0].
    """
    corner = values[0]
    placement = [(0, 0)]
    if corner <= tol:
        return None
    row_headers: list[tuple[int, float]] = []  # (column j, value)
    col_headers: list[tuple[int, float]] = []  # (row i, value)
    predictions: list[tuple[float, tuple[int, int]]] = []
    step = 0
    for v in values[1:]:
        hit = None
        for k, (pred, _) in enumerate(predictions):
            if abs(pred - v) <= tol and (hit is None or abs(pred - v) < abs(predictions[hit][0] - v)):
                hit = k
        if hit is not None:
            placement.append(predictions.pop(hit)[1])
            continue
        if step >= len(pattern):
            return None
        kind = pattern[step]
        step += 1
        if kind == "R":
            j = len(row_headers) + 1
            placement.append((0, j))
            predictions.extend(
                ((cv * v / corner), (ci, j)) for ci, cv in col_headers
            )
            row_headers.append((j, v))
        else:
            i = len(col_headers) + 1
            placement.append((i, 0))
            predictions.extend(
                ((rv * v / corner), (i, rj)) for rj, rv in row_headers
            )
            col_headers.append((i, v))
        predictions.sort(key=lambda t: -t[0])
    if predictions:
        return None
    return placement


def _all_minors_vanish(mat: np.ndarray, tol: float) -> bool:
    d_a, d_b = mat.shape
    for i in range(d_a):
        for k in range(i + 1, d_a):
            for j in range(d_b):
                for l in range(j + 1, d_b):
                    if abs(mat[i, j] * mat[k, l] - mat[i, l] * mat[k, j]) > tol:
                        return False
    return True
