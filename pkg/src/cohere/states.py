"""State representations and small dense linear algebra.

Pure states and density matrices live on a composite Hilbert space with a
fixed product reference basis.  Basis labels are row-major: for subsystem
dimensions ``(d_0, ..., d_{n-1})`` the joint label of local indices
``(i_0, ..., i_{n-1})`` is ``i_0*d_1*...*d_{n-1} + ... + i_{n-1}``, i.e. the
last subsystem runs fastest.  All entropies are in bits (log base 2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

NORM_TOL = 1e-9
#: Moduli / singular values below this are treated as zero by rank counts.
ZERO_TOL = 1e-9
#: Eigenvalues of a density matrix may undershoot zero by at most this much.
EIG_CLAMP = 1e-12

_LOG2 = math.log(2.0)


def _product(dims) -> int:
    out = 1
    for d in dims:
        out *= int(d)
    return out


@dataclass(frozen=True)
class PureState:
    """A normalized complex amplitude vector over the product reference basis.

    Parameters
    ----------
    dims : tuple of int
        Subsystem dimensions, each at least 2.
    amplitudes : ndarray
        Complex vector of length ``prod(dims)``, row-major (last subsystem
        index fastest), Euclidean norm 1 within 1e-9.
    """

    dims: tuple[int, ...]
    amplitudes: np.ndarray

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if not dims or any(d < 2 for d in dims):
            raise ValueError(f"dimension violation: dims must each be >= 2, got {dims}")
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size != _product(dims):
            raise ValueError(
                f"shape violation: expected {_product(dims)} amplitudes, got {amps.size}"
            )
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"norm violation: amplitude norm {norm!r} != 1")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def to_density(self) -> "DensityMatrix":
        """Projector |psi><psi| as a DensityMatrix."""
        return DensityMatrix(self.dims, np.outer(self.amplitudes, self.amplitudes.conj()))


@dataclass(frozen=True)
class DensityMatrix:
    """A Hermitian, positive semidefinite, unit-trace matrix on the product basis."""

    dims: tuple[int, ...]
    matrix: np.ndarray

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if not dims or any(d < 2 for d in dims):
            raise ValueError(f"dimension violation: dims must each be >= 2, got {dims}")
        mat = np.asarray(self.matrix, dtype=complex)
        side = _product(dims)
        if mat.shape != (side, side):
            raise ValueError(
                f"shape violation: expected {side}x{side} matrix, got {mat.shape}"
            )
        herm_err = float(np.abs(mat - mat.conj().T).max())
        if herm_err > NORM_TOL:
            raise ValueError(f"hermiticity violation: max |rho - rho^dag| = {herm_err!r}")
        tr = complex(np.trace(mat))
        if abs(tr - 1.0) > NORM_TOL:
            raise ValueError(f"trace violation: trace {tr!r} != 1")
        min_eig = float(np.linalg.eigvalsh(mat).min())
        if min_eig < -NORM_TOL:
            raise ValueError(f"positivity violation: minimum eigenvalue {min_eig!r}")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "matrix", mat)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class CoefficientMatrix:
    """The d_A x d_B matrix of amplitudes of a bipartite pure state."""

    entries: np.ndarray

    def __post_init__(self):
        mat = np.asarray(self.entries, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] < 1 or mat.shape[1] < 1:
            raise ValueError(f"shape violation: expected a 2-d matrix, got shape {mat.shape}")
        norm = float(np.linalg.norm(mat))
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"norm violation: Frobenius norm {norm!r} != 1")
        object.__setattr__(self, "entries", mat)

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape

    @property
    def moduli(self) -> np.ndarray:
        return np.abs(self.entries)

    @property
    def phases(self) -> np.ndarray:
        return np.angle(self.entries)

    def to_state(self) -> PureState:
        """Inverse of :func:`coefficient_matrix` (lossless reshape)."""
        return PureState(self.entries.shape, self.entries.reshape(-1))


def tensor_product(a, b):
    """Kronecker product of two states of the same kind.

    Dims concatenate; amplitudes (or matrices) combine by ``np.kron``.
    """
    if isinstance(a, PureState) and isinstance(b, PureState):
        return PureState(a.dims + b.dims, np.kron(a.amplitudes, b.amplitudes))
    if isinstance(a, DensityMatrix) and isinstance(b, DensityMatrix):
        return DensityMatrix(a.dims + b.dims, np.kron(a.matrix, b.matrix))
    raise TypeError(
        f"kind mismatch: cannot tensor {type(a).__name__} with {type(b).__name__}"
    )


def as_density(state) -> DensityMatrix:
    """Coerce a PureState or DensityMatrix to a DensityMatrix."""
    if isinstance(state, DensityMatrix):
        return state
    if isinstance(state, PureState):
        return state.to_density()
    raise TypeError(f"expected PureState or DensityMatrix, got {type(state).__name__}")


def partial_trace(rho: DensityMatrix, keep) -> DensityMatrix:
    """Trace out all subsystems not listed in ``keep``.

    Parameters
    ----------
    keep : iterable of int
        Subsystem indices to retain (order preserved ascending).
    """
    keep = sorted(set(int(k) for k in keep))
    n = len(rho.dims)
    if not keep:
        raise ValueError("invalid index: keep set must be nonempty")
    if keep[0] < 0 or keep[-1] >= n:
        raise ValueError(f"invalid index: keep {keep} out of range for {n} subsystems")
    if len(keep) == n:
        return rho
    dims = list(rho.dims)
    tensor = rho.matrix.reshape(dims + dims)
    traced = [i for i in range(n) if i not in keep]
    for idx in sorted(traced, reverse=True):
        tensor = np.trace(tensor, axis1=idx, axis2=idx + len(dims))
        dims.pop(idx)
    side = _product(dims)
    return DensityMatrix(tuple(dims), tensor.reshape(side, side))


def dephase(rho: DensityMatrix) -> DensityMatrix:
    """Remove all off-diagonal entries in the reference basis."""
    diag = np.real(np.diag(rho.matrix))
    return DensityMatrix(rho.dims, np.diag(diag.astype(complex)))


def _entropy_from_probs(probs: np.ndarray) -> float:
    p = np.asarray(probs, dtype=float)
    p = p[p > 0.0]
    if p.size == 0:
        return 0.0
    return float(-(p * np.log2(p)).sum())


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """Shannon entropy of the spectrum, in bits; 0*log0 counts as 0."""
    eigs = np.linalg.eigvalsh(rho.matrix)
    if float(eigs.min()) < -NORM_TOL:
        raise ValueError(f"positivity violation: eigenvalue {float(eigs.min())!r}")
    # eigensolvers routinely return -1e-16-ish values on pure states
    eigs = np.clip(eigs, 0.0, 1.0)
    return _entropy_from_probs(eigs)


def binary_entropy(p: float) -> float:
    """h(p) = -p log2 p - (1-p) log2 (1-p), with h(0) = h(1) = 0."""
    p = float(p)
    if p < -EIG_CLAMP or p > 1.0 + EIG_CLAMP:
        raise ValueError(f"probability out of range: {p!r}")
    p = min(max(p, 0.0), 1.0)
    if p == 0.0 or p == 1.0:
        return 0.0
    return -(p * math.log(p) + (1.0 - p) * math.log(1.0 - p)) / _LOG2


def largest_singular_value(m) -> float:
    """Spectral norm of a real or complex matrix.

    2x2 inputs use a cancellation-free closed form on the Gram matrix; larger
    matrices fall back to a full SVD.
    """
    mat = np.asarray(m, dtype=complex)
    if mat.ndim != 2 or mat.size == 0:
        raise ValueError(f"expected a nonempty matrix, got shape {mat.shape}")
    if mat.shape == (2, 2):
        a, b = mat[0, 0], mat[0, 1]
        c, d = mat[1, 0], mat[1, 1]
        g00 = abs(a) ** 2 + abs(c) ** 2
        g11 = abs(b) ** 2 + abs(d) ** 2
        g01 = a.conjugate() * b + c.conjugate() * d
        half_gap = 0.5 * (g00 - g11)
        lam = 0.5 * (g00 + g11) + math.hypot(half_gap, abs(g01))
        return math.sqrt(lam)
    return float(np.linalg.svd(mat, compute_uv=False)[0])


def coefficient_matrix(psi: PureState) -> CoefficientMatrix:
    """Reshape a bipartite pure state into its d_A x d_B coefficient matrix."""
    if len(psi.dims) != 2:
        raise ValueError(f"not bipartite: state has {len(psi.dims)} subsystems")
    d_a, d_b = psi.dims
    return CoefficientMatrix(psi.amplitudes.reshape(d_a, d_b))


def schmidt_rank(psi: PureState) -> int:
    """Number of singular values of the coefficient matrix above 1e-9."""
    mat = coefficient_matrix(psi).entries
    svals = np.linalg.svd(mat, compute_uv=False)
    return int((svals > ZERO_TOL).sum())


def coherence_rank(psi: PureState) -> int:
    """Number of amplitudes with modulus above 1e-9."""
    return int((np.abs(psi.amplitudes) > ZERO_TOL).sum())
