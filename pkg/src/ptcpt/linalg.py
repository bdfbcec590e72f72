"""Small dense complex linear algebra for one and two qubits.

Vectors and matrices are plain complex ``numpy.ndarray`` objects. Every public
function validates its inputs (shape, finiteness) and never mutates them.

Tensor products follow ``numpy.kron``: the first factor is subsystem A and
its index runs slowest, so the two-qubit basis is ``|00>, |01>, |10>, |11>``.
"""

from __future__ import annotations

import cmath
from typing import Literal, Sequence

import numpy as np

from .exceptions import NonDiagonalizableError

# algebraic identities / chained computations
ATOL = 1e-12
CHAIN_ATOL = 1e-10

_ALLOWED_DIMS = (2, 4)


def as_vector(v, dim: int | None = None) -> np.ndarray:
    """Return ``v`` as a finite complex vector of dimension 2 or 4."""
    arr = np.asarray(v, dtype=complex)
    if arr.ndim != 1:
        raise ValueError(f"expected a 1-d state vector, got shape {arr.shape}")
    if arr.shape[0] not in _ALLOWED_DIMS:
        raise ValueError(f"vector dimension must be 2 or 4, got {arr.shape[0]}")
    if dim is not None and arr.shape[0] != dim:
        raise ValueError(f"expected dimension {dim}, got {arr.shape[0]}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("vector contains NaN or Inf")
    return arr


def as_matrix(m, shape: tuple[int, int] | None = None, square: bool = False) -> np.ndarray:
    """Return ``m`` as a finite complex 2-d array."""
    arr = np.asarray(m, dtype=complex)
    if arr.ndim != 2:
        raise ValueError(f"expected a matrix, got shape {arr.shape}")
    if square and arr.shape[0] != arr.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {arr.shape}")
    if shape is not None and arr.shape != shape:
        raise ValueError(f"expected shape {shape}, got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("matrix contains NaN or Inf")
    return arr


def matmul(a, b) -> np.ndarray:
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"dimension mismatch: {a.shape} @ {b.shape}")
    return a @ b


def apply(m, v) -> np.ndarray:
    """Matrix-vector product with dimension checking."""
    m = as_matrix(m, square=True)
    v = as_vector(v)
    if m.shape[1] != v.shape[0]:
        raise ValueError(f"dimension mismatch: {m.shape} acting on {v.shape}")
    return m @ v


def tensor(a, b) -> np.ndarray:
    """Kronecker product of two square matrices or two vectors."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.ndim != b.ndim or a.ndim not in (1, 2):
        raise ValueError("tensor() takes two vectors or two matrices")
    if a.ndim == 2:
        as_matrix(a, square=True)
        as_matrix(b, square=True)
    return np.kron(a, b)


def dagger(m) -> np.ndarray:
    return as_matrix(m).conj().T


def outer(ket, bra_source) -> np.ndarray:
    """``|ket><bra_source|`` (the bra is conjugated)."""
    return np.outer(np.asarray(ket, dtype=complex), np.conj(np.asarray(bra_source, dtype=complex)))


def commutator(a, b) -> np.ndarray:
    return matmul(a, b) - matmul(b, a)


def _fix_phase(v: np.ndarray) -> np.ndarray:
    """Normalize and rotate so the first non-negligible entry is real positive."""
    v = v / np.linalg.norm(v)
    for x in v:
        if abs(x) > 1e-14:
            return v * (abs(x) / x)
    return v


def _eig_sort_key(pair):
    lam = pair[0]
    return (-round(lam.real, 12), -round(lam.imag, 12))


def eig_2x2(m) -> list[tuple[complex, np.ndarray]]:
    """Closed-form eigendecomposition of a general complex 2x2 matrix.

    Returns both eigenpairs ordered by descending real part, then descending
    imaginary part. Eigenvectors have unit Euclidean length and their first
    nonzero component is real and positive.

    Raises
    ------
    NonDiagonalizableError
        If the matrix is defective (a repeated eigenvalue with a single
        eigenvector), e.g. a PT Hamiltonian at its exceptional point.
    """
    m = as_matrix(m, shape=(2, 2))
    (a, b), (c, d) = m
    scale = max(np.abs(m).max(), 1.0)
    half_tr = (a + d) / 2
    disc = cmath.sqrt(((a - d) / 2) ** 2 + b * c)
    lams = (half_tr + disc, half_tr - disc)

    if abs(disc) <= 1e-9 * scale:
        # repeated eigenvalue: only a scalar matrix is diagonalizable
        if abs(b) <= ATOL * scale and abs(c) <= ATOL * scale and abs(a - d) <= ATOL * scale:
            e0 = np.array([1, 0], dtype=complex)
            e1 = np.array([0, 1], dtype=complex)
            return [(complex(half_tr), e0), (complex(half_tr), e1)]
        raise NonDiagonalizableError("matrix is defective (non-diagonalizable)")

    pairs = []
    for lam in lams:
        # pick the better-conditioned of the two null-space formulas
        v1 = np.array([b, lam - a], dtype=complex)
        v2 = np.array([lam - d, c], dtype=complex)
        v = v1 if np.linalg.norm(v1) >= np.linalg.norm(v2) else v2
        if np.linalg.norm(v) <= 1e-14 * scale:
            # diagonal matrix with distinct entries
            v = np.array([1, 0], dtype=complex) if abs(lam - a) <= abs(lam - d) else np.array([0, 1], dtype=complex)
        pairs.append((complex(lam), _fix_phase(v)))
    pairs.sort(key=_eig_sort_key)
    return pairs


def kron_factor(m, atol: float = ATOL) -> tuple[np.ndarray, np.ndarray] | None:
    """Split a 4x4 matrix into ``a (x) b`` if it is an exact Kronecker product.

    Uses the nearest-Kronecker-product rearrangement (rank-1 SVD). Returns
    ``None`` when the best rank-1 approximation misses by more than ``atol``.
    """
    m = as_matrix(m, shape=(4, 4))
    r = m.reshape(2, 2, 2, 2).transpose(0, 2, 1, 3).reshape(4, 4)
    u, s, vh = np.linalg.svd(r)
    a = (np.sqrt(s[0]) * u[:, 0]).reshape(2, 2)
    b = (np.sqrt(s[0]) * vh[0, :]).reshape(2, 2)
    if np.abs(np.kron(a, b) - m).max() > atol * max(1.0, np.abs(m).max()):
        return None
    return a, b


def kron_eigensystem(a, b) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues and eigenvector columns of ``a (x) b`` from the 2x2 factors."""
    vals, vecs = [], []
    for la, va in eig_2x2(a):
        for lb, vb in eig_2x2(b):
            vals.append(la * lb)
            vecs.append(np.kron(va, vb))
    return np.array(vals), np.column_stack(vecs)


def eigensystem_matrix(m) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues and eigenvector columns for a 2x2 or factorizable 4x4 matrix."""
    m = as_matrix(m, square=True)
    if m.shape == (2, 2):
        pairs = eig_2x2(m)
        return np.array([p[0] for p in pairs]), np.column_stack([p[1] for p in pairs])
    if m.shape == (4, 4):
        factors = kron_factor(m)
        if factors is None:
            raise NonDiagonalizableError(
                "4x4 matrix is not a Kronecker product; pass its eigensystem explicitly"
            )
        return kron_eigensystem(*factors)
    raise ValueError(f"unsupported dimension {m.shape}")


def spectral_exp(m, scale: complex = 1.0, eigensystem: tuple[np.ndarray, np.ndarray] | None = None) -> np.ndarray:
    """``exp(scale * m)`` as ``V diag(exp(scale * lambda)) V^-1``.

    ``eigensystem`` may supply ``(eigenvalues, eigenvector_columns)``; otherwise
    it is computed by :func:`eigensystem_matrix`. Raises
    :class:`NonDiagonalizableError` for defective input or a numerically
    singular eigenvector matrix.
    """
    m = as_matrix(m, square=True)
    if not np.any(m):
        return np.eye(m.shape[0], dtype=complex)
    vals, vecs = eigensystem if eigensystem is not None else eigensystem_matrix(m)
    vecs = np.asarray(vecs, dtype=complex)
    if vecs.shape != m.shape:
        raise ValueError("eigensystem does not match the matrix dimension")
    if np.linalg.cond(vecs) > 1e12:
        raise NonDiagonalizableError("eigenvector matrix is singular")
    return vecs @ np.diag(np.exp(complex(scale) * np.asarray(vals))) @ np.linalg.inv(vecs)


def partial_trace(rho, keep: Literal["first", "second"]) -> np.ndarray:
    """Reduce a two-qubit operator to one qubit.

    ``keep="first"`` sums over the second factor's paired indices,
    ``keep="second"`` sums over the first factor's.
    """
    rho = as_matrix(rho, shape=(4, 4))
    r = rho.reshape(2, 2, 2, 2)
    if keep == "first":
        return np.einsum("ajbj->ab", r)
    if keep == "second":
        return np.einsum("jajb->ab", r)
    raise ValueError(f"keep must be 'first' or 'second', got {keep!r}")


def align_global_phase(x, reference) -> tuple[np.ndarray, complex]:
    """Rotate ``x`` by the unit phase that best matches ``reference``.

    The phase is read off the reference's largest-modulus entry. Returns the
    rotated vector and the phase that was applied.
    """
    x = np.asarray(x, dtype=complex)
    reference = np.asarray(reference, dtype=complex)
    k = int(np.argmax(np.abs(reference)))
    if abs(x[k]) == 0:
        return x, 1.0 + 0j
    phase = (reference[k] / x[k]) / abs(reference[k] / x[k])
    return x * phase, complex(phase)


def equal_up_to_phase(x, reference, atol: float = CHAIN_ATOL) -> bool:
    aligned, _ = align_global_phase(x, reference)
    return bool(np.abs(aligned - np.asarray(reference, dtype=complex)).max() <= atol)


def shannon_entropy_bits(probs: Sequence[float]) -> float:
    """``-sum p log2 p`` with ``0 log 0 = 0``."""
    return float(-sum(p * np.log2(p) for p in probs if p > 0))
