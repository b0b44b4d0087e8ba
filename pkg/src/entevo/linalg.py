"""Dense complex linear algebra primitives.

Matrices are plain ``numpy`` arrays of dtype ``complex128``.  Every public
function here is a pure function of its inputs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# singular values at or below ZERO_TOL * sigma_max count as zero
ZERO_TOL = 1e-12


class DimensionError(ValueError):
    """Raised when array shapes are incompatible with an operation."""


class ConvergenceError(RuntimeError):
    """Raised when a LAPACK routine fails to converge."""


def as_matrix(m, name: str = "matrix") -> np.ndarray:
    """Coerce to a finite 2-D complex128 array."""
    arr = np.asarray(m, dtype=np.complex128)
    if arr.ndim != 2:
        raise DimensionError(f"{name} must be 2-D, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains NaN or Inf entries")
    return arr


def make_rng(seed=None) -> np.random.Generator:
    """Return a Generator from an int, SeedSequence or an existing Generator."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def split_seed(seed, n: int) -> list[np.random.SeedSequence]:
    """Derive ``n`` independent child seeds.

    Child ``i`` depends only on ``seed`` and ``i``, not on ``n``.
    """
    if isinstance(seed, np.random.Generator):
        seed = int(seed.integers(2**63))
    ss = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    return [np.random.SeedSequence(ss.entropy, spawn_key=ss.spawn_key + (i,)) for i in range(n)]


@dataclass(frozen=True)
class SvdResult:
    left_vectors: np.ndarray
    singular_values: np.ndarray
    right_vectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        u, s, v = self.left_vectors, self.singular_values, self.right_vectors
        k = len(s)
        return (u[:, :k] * s) @ v[:, :k].conj().T

    def rank(self, tol: float = ZERO_TOL) -> int:
        s = self.singular_values
        if len(s) == 0 or s[0] == 0.0:
            return 0
        return int(np.count_nonzero(s > tol * s[0]))


def kron(a, b) -> np.ndarray:
    return np.kron(as_matrix(a, "a"), as_matrix(b, "b"))


def svd(m) -> SvdResult:
    """Full SVD ``m = U diag(s) V^dagger`` with descending singular values."""
    arr = as_matrix(m)
    try:
        u, s, vh = np.linalg.svd(arr, full_matrices=True)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"SVD did not converge for {arr.shape} input") from exc
    return SvdResult(u, s, vh.conj().T)


def singular_values(m) -> np.ndarray:
    arr = as_matrix(m)
    try:
        return np.linalg.svd(arr, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"SVD did not converge for {arr.shape} input") from exc


def det(m) -> complex:
    """Determinant via LU factorization."""
    arr = as_matrix(m)
    if arr.shape[0] != arr.shape[1]:
        raise DimensionError(f"determinant needs a square matrix, got {arr.shape}")
    return complex(np.linalg.det(arr))


def partial_trace(rho, dims: tuple[int, int], side: str = "second") -> np.ndarray:
    """Trace out subsystem ``side`` ("first" or "second") of a d*f operator."""
    d, f = dims
    arr = as_matrix(rho, "rho")
    if arr.shape != (d * f, d * f):
        raise DimensionError(f"rho has shape {arr.shape}, expected {(d * f, d * f)}")
    t = arr.reshape(d, f, d, f)
    if side == "second":
        return np.einsum("ijkj->ik", t)
    if side == "first":
        return np.einsum("ijil->jl", t)
    raise ValueError(f"side must be 'first' or 'second', got {side!r}")


def haar_unitary(n: int, seed=None) -> np.ndarray:
    """Haar-distributed n x n unitary.

    QR of a complex Ginibre matrix with the phases of diag(R) absorbed into Q.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = make_rng(seed)
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    diag = np.diag(r)
    return q * (diag / np.abs(diag))


def haar_isometry(rows: int, cols: int, seed=None) -> np.ndarray:
    """First ``cols`` columns of a Haar unitary of size ``rows``."""
    if cols > rows:
        raise DimensionError("an isometry needs cols <= rows")
    return haar_unitary(rows, seed)[:, :cols]


def is_hermitian(m: np.ndarray, tol: float = 1e-12) -> bool:
    return bool(np.max(np.abs(m - m.conj().T), initial=0.0) <= tol)


def min_eigenvalue(m: np.ndarray) -> float:
    h = 0.5 * (m + m.conj().T)
    return float(np.linalg.eigvalsh(h)[0])
