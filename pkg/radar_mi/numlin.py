"""Small dense complex linear algebra: Hermitian eigendecomposition, PSD log-determinant,
Kronecker product and column-wise vectorization.

Matrices are ``numpy.complex128`` arrays in numpy's row-major layout. ``vec`` always
stacks columns. Arrays returned by the constructors here are read-only.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Literal

import numpy as np
import numpy.typing as npt

from .errors import ConfigError, ConvergenceError, DimensionError, SingularMatrixError

logger = logging.getLogger(__name__)

ComplexMatrix = npt.NDArray[np.complex128]
RealVector = npt.NDArray[np.float64]

HERMITIAN_RTOL = 1e-12
PSD_RTOL = 1e-10
MAX_DIMENSION = 1024


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


def complex_matrix(data: npt.ArrayLike) -> ComplexMatrix:
    """Copy ``data`` into a finite, read-only 2-D complex matrix."""
    matrix = np.array(data, dtype=np.complex128)
    if matrix.ndim != 2:
        raise DimensionError(f"Expected a 2-D matrix, got an array with shape {matrix.shape}")
    if not np.all(np.isfinite(matrix)):
        raise ConfigError("Matrix entries must be finite")
    return _frozen(matrix)


@dataclass(frozen=True)
class HermitianMatrix:
    entries: ComplexMatrix

    def __post_init__(self) -> None:
        matrix = complex_matrix(self.entries)
        rows, cols = matrix.shape
        if rows != cols:
            raise DimensionError(f"Hermitian matrix must be square, got {rows}x{cols}")
        scale = float(np.max(np.abs(matrix))) if matrix.size else 0.0
        skew = float(np.max(np.abs(matrix - matrix.conj().T))) if matrix.size else 0.0
        if skew > HERMITIAN_RTOL * max(scale, np.finfo(float).tiny):
            raise ConfigError(f"Matrix is not Hermitian (max |A - A^H| = {skew:.3e}, max |A| = {scale:.3e})")
        object.__setattr__(self, "entries", matrix)

    @classmethod
    def from_array(cls, data: npt.ArrayLike, symmetrize: bool = False) -> HermitianMatrix:
        """Build from an array; ``symmetrize`` replaces A by (A + A^H)/2 to absorb rounding."""
        matrix = np.array(data, dtype=np.complex128)
        if symmetrize:
            matrix = 0.5 * (matrix + matrix.conj().T)
        return cls(matrix)

    @classmethod
    def diag(cls, values: npt.ArrayLike) -> HermitianMatrix:
        return cls(np.diag(np.asarray(values, dtype=np.float64)).astype(np.complex128))

    @property
    def dimension(self) -> int:
        return self.entries.shape[0]

    def is_psd(self, rtol: float = PSD_RTOL) -> bool:
        eigenvalues = np.linalg.eigvalsh(self.entries)
        if eigenvalues.size == 0:
            return True
        return bool(eigenvalues[0] >= -rtol * max(float(eigenvalues[-1]), 0.0))


@dataclass(frozen=True)
class EigDecomposition:
    """Eigenvalues in descending order; column k of ``eigenvectors`` pairs with eigenvalue k."""

    eigenvalues: RealVector
    eigenvectors: ComplexMatrix

    def reconstruct(self) -> ComplexMatrix:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def hermitian_eig(a: HermitianMatrix) -> EigDecomposition:
    try:
        eigenvalues, eigenvectors = np.linalg.eigh(a.entries)
    except np.linalg.LinAlgError as e:
        raise ConvergenceError(f"Hermitian eigensolver did not converge: {e}") from e
    # eigh returns ascending order
    return EigDecomposition(
        eigenvalues=_frozen(np.ascontiguousarray(eigenvalues[::-1])),
        eigenvectors=_frozen(np.ascontiguousarray(eigenvectors[:, ::-1])),
    )


def log_det_psd(a: HermitianMatrix, ridge: float = 0.0, method: Literal["eig", "cholesky"] = "eig") -> float:
    """Natural log-determinant of ``a + ridge*I`` for positive semidefinite ``a``."""
    if ridge < 0:
        raise ConfigError(f"ridge must be >= 0, got {ridge}")
    matrix = a.entries + ridge * np.eye(a.dimension)
    if method == "eig":
        eigenvalues = np.linalg.eigvalsh(matrix)
        if eigenvalues.size and eigenvalues[0] <= 0.0:
            raise SingularMatrixError(f"Matrix is singular: smallest eigenvalue {eigenvalues[0]:.3e} with ridge {ridge}")
        return float(np.sum(np.log(eigenvalues)))
    if method == "cholesky":
        try:
            factor = np.linalg.cholesky(matrix)
        except np.linalg.LinAlgError as e:
            raise SingularMatrixError(f"Cholesky factorization failed (ridge {ridge}): {e}") from e
        return float(2.0 * np.sum(np.log(np.real(np.diag(factor)))))
    raise ConfigError(f"Unknown log-det method {method!r}")


def kron(a: npt.ArrayLike, b: npt.ArrayLike) -> ComplexMatrix:
    a = complex_matrix(a)
    b = complex_matrix(b)
    rows = a.shape[0] * b.shape[0]
    cols = a.shape[1] * b.shape[1]
    if rows > MAX_DIMENSION or cols > MAX_DIMENSION:
        raise DimensionError(f"Kronecker product of {a.shape} and {b.shape} exceeds {MAX_DIMENSION} per axis")
    return _frozen(np.kron(a, b))


def vec(m: npt.ArrayLike) -> npt.NDArray[np.complex128]:
    """Column-wise stacking."""
    matrix = np.asarray(m, dtype=np.complex128)
    if matrix.ndim == 1:
        return _frozen(matrix.copy())
    return _frozen(matrix.reshape(-1, order="F").copy())


def anti_diagonal(n: int) -> npt.NDArray[np.float64]:
    """Permutation matrix with ones on the anti-diagonal."""
    return _frozen(np.fliplr(np.eye(n)))
