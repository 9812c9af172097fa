"""Dense complex linear algebra helpers.

Everything here operates on plain ``numpy`` arrays of dtype complex128.
The one nontrivial algorithm is :func:`takagi`, the Autonne-Takagi
factorization of a complex symmetric matrix ``S = U^H diag(sigma) conj(U)``,
returned in the normal form ``U S U^T = diag(sigma)`` with ``sigma >= 0``
sorted descending.  It is needed to rotate a unitary frame so that the
symmetric part of a structure-constant block becomes diagonal.
"""

from __future__ import annotations

import numpy as np

DEFAULT_TOL = 1.0e-9


def max_abs(a: np.ndarray) -> float:
    """Max-norm of an array (0.0 for empty input)."""
    if a.size == 0:
        return 0.0
    return float(np.max(np.abs(a)))


def frob(a: np.ndarray) -> float:
    """Frobenius norm."""
    return float(np.linalg.norm(a))


def adjoint(a: np.ndarray) -> np.ndarray:
    """Conjugate transpose ``a*``."""
    return a.conj().T


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Matrix commutator ``[a, b] = ab - ba``."""
    if a.shape != b.shape or a.shape[0] != a.shape[1]:
        raise ValueError(f"commutator needs equal square shapes, got {a.shape} and {b.shape}")
    return a @ b - b @ a


def unitary_check(u: np.ndarray) -> float:
    """Frobenius norm of ``u u* - I``."""
    n = u.shape[0]
    if u.shape != (n, n):
        raise ValueError(f"expected a square matrix, got shape {u.shape}")
    return frob(u @ u.conj().T - np.eye(n))


def is_unitary(u: np.ndarray, tol: float = DEFAULT_TOL) -> bool:
    return unitary_check(u) <= tol * (1.0 + frob(u))


def random_complex(rng: np.random.Generator, shape) -> np.ndarray:
    """Standard complex Gaussian entries (unit variance per complex entry)."""
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via QR of a complex Ginibre matrix."""
    q, r = np.linalg.qr(random_complex(rng, (n, n)))
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def _clusters(values: np.ndarray, gap: float) -> list[slice]:
    """Slices of consecutive entries of a sorted 1-d array with gaps <= gap."""
    bounds = [0]
    for i in range(1, len(values)):
        if abs(values[i] - values[i - 1]) > gap:
            bounds.append(i)
    bounds.append(len(values))
    return [slice(a, b) for a, b in zip(bounds[:-1], bounds[1:])]


def sym_unitary_sqrt(k: np.ndarray) -> np.ndarray:
    """Symmetric unitary square root of a symmetric unitary matrix.

    Re(k) and Im(k) are commuting real symmetric matrices, so they are
    simultaneously diagonalized by a real orthogonal matrix E, giving
    ``k = E diag(exp(i theta)) E^T``; the root is ``E diag(exp(i theta/2)) E^T``.
    Repeated Re-eigenvalues are resolved by re-diagonalizing Im(k) inside
    each eigenspace.
    """
    a = (k.real + k.real.T) / 2.0
    b = (k.imag + k.imag.T) / 2.0
    w, e = np.linalg.eigh(a)
    for block in _clusters(w, 1.0e-8):
        if block.stop - block.start > 1:
            eb = e[:, block]
            _, rot = np.linalg.eigh(eb.T @ b @ eb)
            e[:, block] = eb @ rot
    vals = np.einsum("ij,ij->j", e, (a + 1j * b) @ e)
    vals = vals / np.abs(vals)
    return (e * np.exp(0.5j * np.angle(vals))) @ e.T


def takagi(s: np.ndarray, tol: float = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Takagi factorization of a complex symmetric matrix.

    Returns ``(u, sigma)`` with ``u`` unitary and ``sigma >= 0`` sorted
    descending such that ``u @ s @ u.T = diag(sigma)``.

    The factor is built from the SVD ``s = w diag(sigma) v*``: the matrix
    ``k = conj(v^T w)`` is block-diagonal along clusters of equal singular
    values and symmetric unitary on each block with ``sigma > 0``, so a
    blockwise symmetric square root of ``k`` absorbs the phase mismatch
    between the left and right singular frames.  No iteration on ``s``.

    Raises ``ValueError`` if ``s`` is not square or not symmetric within
    ``tol * (1 + max|s|)``.
    """
    n = s.shape[0]
    if s.shape != (n, n):
        raise ValueError(f"expected a square matrix, got shape {s.shape}")
    scale = 1.0 + max_abs(s)
    if max_abs(s - s.T) > tol * scale:
        raise ValueError("takagi: input is not symmetric within tolerance")

    w, sigma, vh = np.linalg.svd(s)
    k = (vh.conj() @ w).conj()  # conj(v^T w), with v = vh^H

    phi = np.zeros((n, n), dtype=complex)
    zero_cut = 1.0e-11 * (1.0 + (sigma[0] if n else 0.0))
    for block in _clusters(sigma, 1.0e-8 * (1.0 + (sigma[0] if n else 0.0))):
        if sigma[block.start] <= zero_cut:
            # a null block carries no phase information
            phi[block, block] = np.eye(block.stop - block.start)
        else:
            kb = k[block, block]
            phi[block, block] = sym_unitary_sqrt((kb + kb.T) / 2.0)

    u = (w @ phi).conj().T
    return u, sigma
