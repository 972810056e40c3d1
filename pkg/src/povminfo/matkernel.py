"""Dense complex matrix helpers: Kronecker products, partial traces and
Hermitian spectral decomposition.

Matrices are plain ``numpy.ndarray`` objects of dtype ``complex128``.
"""

from typing import NamedTuple

import numpy as np

from .exceptions import DimensionError, ValidationError

HERMITIAN_TOL = 1e-10


class Spectrum(NamedTuple):
    """Eigen-decomposition of a Hermitian matrix.

    ``eigenvalues`` are real and sorted in descending order; column ``i`` of
    ``eigenvectors`` belongs to ``eigenvalues[i]``.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self):
        u = self.eigenvectors
        return (u * self.eigenvalues) @ u.conj().T


def as_matrix(m):
    """Return ``m`` as a square complex128 array; refuse anything else."""
    arr = np.asarray(m, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {arr.shape}")
    return arr


def dagger(m):
    return np.conj(np.swapaxes(m, -1, -2))


def identity(dim):
    return np.eye(dim, dtype=complex)


def tensor_product(x, y):
    """Kronecker product ``x ⊗ y`` (x-major block order)."""
    return np.kron(as_matrix(x), as_matrix(y))


def partial_trace(m, d_a, d_b, keep="A"):
    """Trace out one factor of a matrix on ``C^d_a ⊗ C^d_b``.

    Parameters
    ----------
    m : array_like, shape (d_a*d_b, d_a*d_b)
    d_a, d_b : int
        Subsystem dimensions, A first.
    keep : {"A", "B"}
        The subsystem that survives.
    """
    m = as_matrix(m)
    if m.shape[0] != d_a * d_b:
        raise DimensionError(
            f"partial_trace: expected dimension {d_a}*{d_b}={d_a * d_b}, got {m.shape[0]}"
        )
    t = m.reshape(d_a, d_b, d_a, d_b)
    if keep == "A":
        return np.einsum("ikjk->ij", t)
    if keep == "B":
        return np.einsum("kikj->ij", t)
    raise ValueError(f"keep must be 'A' or 'B', not {keep!r}")


def hermitian_asymmetry(m):
    return float(np.max(np.abs(m - dagger(m)))) if m.size else 0.0


def hermitize(m, tol=HERMITIAN_TOL):
    """Check Hermiticity within ``tol`` (max entry) and return ``(m + m†)/2``."""
    m = as_matrix(m)
    asym = hermitian_asymmetry(m)
    if asym > tol:
        raise ValidationError(f"matrix is not Hermitian: max |m - m^dagger| = {asym:.3e}")
    return 0.5 * (m + m.conj().T)


def hermitian_spectrum(m):
    """Spectral decomposition of a Hermitian matrix, eigenvalues descending."""
    h = hermitize(m)
    w, v = np.linalg.eigh(h)
    return Spectrum(w[::-1].copy(), v[:, ::-1].copy())


def psd_sqrt(m):
    """Principal square root of a PSD matrix; tiny negative eigenvalues are clamped."""
    w, v = np.linalg.eigh(hermitize(m))
    return (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T


def is_unitary(u, tol=1e-10):
    u = as_matrix(u)
    return bool(np.max(np.abs(u.conj().T @ u - identity(u.shape[0]))) <= tol)


def random_unitary(dim, rng):
    """Haar-random unitary via QR of a complex Ginibre matrix with phase fix."""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))
