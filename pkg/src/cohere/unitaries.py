"""Unitaries that permute the product reference basis up to per-label phases.

These are the most general unitaries that map diagonal states to diagonal
states, so they preserve the relative entropy of coherence.  They are stored
structurally (a permutation of basis labels plus one phase per label) and
applied in O(dim); a dense matrix form exists for test oracles.

Convention: the amplitude at label ``k`` moves to label ``perm[k]`` and picks
up the phase attached to its destination,
``out[perm[k]] = exp(1j * phases[perm[k]]) * in[k]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .states import DensityMatrix, PureState, _product

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class IncoherentUnitary:
    dims: tuple[int, ...]
    permutation: np.ndarray
    phases: np.ndarray

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        size = _product(dims)
        perm = np.asarray(self.permutation, dtype=np.intp).reshape(-1)
        phases = np.mod(np.asarray(self.phases, dtype=float).reshape(-1), TWO_PI)
        if perm.size != size or phases.size != size:
            raise ValueError(f"shape violation: expected {size} labels")
        if not np.array_equal(np.sort(perm), np.arange(size)):
            raise ValueError("permutation violation: label map is not a bijection")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "permutation", perm)
        object.__setattr__(self, "phases", phases)

    @property
    def dim(self) -> int:
        return self.permutation.size

    def to_matrix(self) -> np.ndarray:
        """Dense matrix form, for oracle comparisons only."""
        size = self.dim
        mat = np.zeros((size, size), dtype=complex)
        mat[self.permutation, np.arange(size)] = np.exp(1j * self.phases[self.permutation])
        return mat


def identity_unitary(dims) -> IncoherentUnitary:
    size = _product(dims)
    return IncoherentUnitary(tuple(dims), np.arange(size), np.zeros(size))


def apply(u: IncoherentUnitary, state):
    """Apply an incoherent unitary to a PureState or DensityMatrix."""
    if isinstance(state, PureState):
        if state.dims != u.dims:
            raise ValueError(f"dimension mismatch: {state.dims} vs {u.dims}")
        out = np.empty_like(state.amplitudes)
        out[u.permutation] = state.amplitudes
        out *= np.exp(1j * u.phases)
        return PureState(state.dims, out)
    if isinstance(state, DensityMatrix):
        if state.dims != u.dims:
            raise ValueError(f"dimension mismatch: {state.dims} vs {u.dims}")
        out = np.empty_like(state.matrix)
        out[np.ix_(u.permutation, u.permutation)] = state.matrix
        phase = np.exp(1j * u.phases)
        out = out * phase[:, None] * phase.conj()[None, :]
        return DensityMatrix(state.dims, out)
    raise TypeError(f"expected PureState or DensityMatrix, got {type(state).__name__}")


def compose(u1: IncoherentUnitary, u2: IncoherentUnitary) -> IncoherentUnitary:
    """The unitary acting as u2 first, then u1."""
    if u1.dims != u2.dims:
        raise ValueError(f"dimension mismatch: {u1.dims} vs {u2.dims}")
    inv1 = np.argsort(u1.permutation)
    return IncoherentUnitary(
        u1.dims,
        u1.permutation[u2.permutation],
        u1.phases + u2.phases[inv1],
    )


def invert(u: IncoherentUnitary) -> IncoherentUnitary:
    inv = np.argsort(u.permutation)
    return IncoherentUnitary(u.dims, inv, -u.phases[u.permutation])


def generalized_cnot(d_a: int, d_b: int) -> IncoherentUnitary:
    """Controlled shift |i>|j> -> |i>|j + i mod d_b>, with no phases."""
    if d_a < 2 or d_b < 2:
        raise ValueError("dimensions must be >= 2")
    perm = np.empty(d_a * d_b, dtype=np.intp)
    for i in range(d_a):
        for j in range(d_b):
            perm[i * d_b + j] = i * d_b + (j + i) % d_b
    return IncoherentUnitary((d_a, d_b), perm, np.zeros(d_a * d_b))


def controlled_phase(angle: float = math.pi) -> IncoherentUnitary:
    """Two-qubit gate adding ``angle`` to the |11> label (identity permutation)."""
    phases = np.zeros(4)
    phases[3] = angle
    return IncoherentUnitary((2, 2), np.arange(4), phases)


def arrangement_count_n(d_a: int, d_b: int) -> int:
    """Arrangements of a d_a x d_b coefficient grid that can differ in their
    largest singular value: (d_a*d_b)! over the hook-length product."""
    if d_a < 1 or d_b < 1:
        raise ValueError("dimensions must be >= 1")
    denom = 1
    for i in range(1, d_a + 1):
        for j in range(1, d_b + 1):
            denom *= i + j - 1
    numer = math.factorial(d_a * d_b)
    if numer % denom:
        raise ArithmeticError("hook-length product does not divide the factorial")
    return numer // denom


def arrangement_count_nprime(d_a: int, d_b: int) -> int:
    """Placements to test when only a rank-one arrangement is sought."""
    if d_a < 1 or d_b < 1:
        raise ValueError("dimensions must be >= 1")
    return math.comb(d_a + d_b - 2, d_a - 1)


def two_qubit_canonical_arrangements(psi_abs) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """The three 2x2 arrangements that can differ in distributed coherence.

    Given moduli ``[[a, b], [c, d]]`` returns it unchanged, with the second
    column swapped (``[[a, d], [c, b]]``), and with the second row swapped
    (``[[a, b], [d, c]]``).
    """
    mat = np.asarray(getattr(psi_abs, "moduli", psi_abs), dtype=float)
    if mat.shape != (2, 2):
        raise ValueError(f"expected a 2x2 moduli matrix, got shape {mat.shape}")
    column_swapped = mat.copy()
    column_swapped[0, 1], column_swapped[1, 1] = mat[1, 1], mat[0, 1]
    row_swapped = mat.copy()
    row_swapped[1, 0], row_swapped[1, 1] = mat[1, 1], mat[1, 0]
    return mat.copy(), column_swapped, row_swapped


def four_qubit_embedding_check(perturbation: float = 0.0) -> bool:
    """Verify that two transversal CNOTs turn the maximal-GDC two-qubit state
    (padded with |00>) into the two-qutrit maximally entangled state.

    A nonzero ``perturbation`` nudges one input amplitude, which must break
    the check.
    """
    amps_a = np.array([1.0, 1.0, 1.0, 0.0], dtype=complex) / math.sqrt(3)
    amps_a[0] += perturbation
    amps_a /= np.linalg.norm(amps_a)
    source = PureState(
        (2, 2, 2, 2), np.kron(amps_a, np.array([1.0, 0.0, 0.0, 0.0], dtype=complex))
    )

    # qubit order (A1, A2, B1, B2); CNOTs act on the (A1,B1) and (A2,B2) pairs
    size = 16
    perm = np.empty(size, dtype=np.intp)
    for label in range(size):
        a1, a2, b1, b2 = (label >> 3) & 1, (label >> 2) & 1, (label >> 1) & 1, label & 1
        perm[label] = (a1 << 3) | (a2 << 2) | ((b1 ^ a1) << 1) | (b2 ^ a2)
    gate = IncoherentUnitary((2, 2, 2, 2), perm, np.zeros(size))
    produced = apply(gate, source)

    expected = np.zeros(size, dtype=complex)
    expected[0b0000] = expected[0b0101] = expected[0b1010] = 1.0 / math.sqrt(3)
    if float(np.abs(produced.amplitudes - expected).max()) > 1e-12:
        return False

    # regrouping (A1A2)(B1B2) into 4-level systems keeps the linear index,
    # so the relabeled state is just the same vector on dims (4, 4)
    relabeled = PureState((4, 4), produced.amplitudes)
    target = np.zeros(size, dtype=complex)
    for level in range(3):
        target[level * 4 + level] = 1.0 / math.sqrt(3)
    return float(np.abs(relabeled.amplitudes - target).max()) <= 1e-12
