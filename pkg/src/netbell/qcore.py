"""Dense complex linear algebra for finite-dimensional quantum operators.

All matrices are plain ``numpy.ndarray`` of dtype complex128, row-major.
Scenario dimensions stay small (at most a few thousand), so everything is
dense and double precision throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import TYPE_CHECKING, Iterable

import numpy as np

from . import tolerances as tol
from .errors import DensityInput, DimensionMismatch, NonHermitianInput

if TYPE_CHECKING:  # pragma: no cover
    from .states import QuantumState


def as_matrix(m: np.ndarray | Iterable) -> np.ndarray:
    """Coerce to a square complex matrix."""
    arr = np.asarray(m, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {arr.shape}")
    return arr


def is_hermitian(m: np.ndarray, atol: float = tol.HERMITIAN_CLAIM) -> bool:
    """True when max |M - M^dag| entry is at most ``atol``."""
    arr = np.asarray(m, dtype=complex)
    return bool(np.max(np.abs(arr - arr.conj().T)) <= atol)


def tensor_product(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product; dimensions multiply."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def tensor_all(mats: Iterable[np.ndarray]) -> np.ndarray:
    """Kronecker product of a sequence of matrices, left to right."""
    mats = list(mats)
    if not mats:
        raise ValueError("tensor_all needs at least one matrix")
    return reduce(tensor_product, mats)


@dataclass(frozen=True)
class HermitianEig:
    """Eigendecomposition of a Hermitian matrix.

    ``eigenvalues`` are real and ascending; ``eigenvectors`` holds the
    matching orthonormal eigenvectors as columns.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def hermitian_eig(m: np.ndarray) -> HermitianEig:
    """Eigendecomposition with ascending real eigenvalues.

    Raises NonHermitianInput when the input fails the Hermiticity check.
    """
    arr = as_matrix(m)
    if not is_hermitian(arr, tol.HERMITIAN_INPUT):
        raise NonHermitianInput("matrix is not Hermitian within tolerance")
    vals, vecs = np.linalg.eigh(arr)
    return HermitianEig(eigenvalues=vals, eigenvectors=vecs)


def min_eigenvalue(m: np.ndarray) -> float:
    """Smallest eigenvalue of a Hermitian matrix.

    The matrix is declared PSD iff the result is at least the PSD floor.
    """
    arr = as_matrix(m)
    if not is_hermitian(arr, tol.HERMITIAN_INPUT):
        raise NonHermitianInput("matrix is not Hermitian within tolerance")
    return float(np.linalg.eigvalsh(arr)[0])


def _real_part(value: complex) -> float:
    if abs(value.imag) > tol.IMAG_DISCARD:
        raise NonHermitianInput(
            f"expectation has imaginary residue {value.imag:.3e}; "
            "operator is not Hermitian on this state"
        )
    return float(value.real)


def expectation(state: "QuantumState", op: np.ndarray) -> float:
    """Expectation value: Tr(rho op) for density input, <psi|op|psi> for pure.

    The imaginary residue must be negligible and is discarded.
    """
    arr = as_matrix(op)
    if arr.shape[0] != state.dim:
        raise DimensionMismatch(
            f"operator dimension {arr.shape[0]} != state dimension {state.dim}"
        )
    if state.kind == "pure":
        value = complex(np.vdot(state.data, arr @ state.data))
    else:
        value = complex(np.einsum("ij,ji->", state.data, arr))
    return _real_part(value)


def vector_norm_applied(state: "QuantumState", op: np.ndarray) -> float:
    """Euclidean norm of op|psi>; defined on pure states only."""
    if state.kind != "pure":
        raise DensityInput("this norm is defined on pure states only")
    arr = as_matrix(op)
    if arr.shape[0] != state.dim:
        raise DimensionMismatch(
            f"operator dimension {arr.shape[0]} != state dimension {state.dim}"
        )
    return float(np.linalg.norm(arr @ state.data))
