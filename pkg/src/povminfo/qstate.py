"""Density matrices, entropies, relative entropy, entropy defect, dephasing and
random state generation.

All entropies are reported in bits unless ``base`` says otherwise.
"""

from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from . import matkernel as mk
from .exceptions import DimensionError, ValidationError

PSD_TOL = 1e-10
TRACE_TOL = 1e-10
SUPPORT_CUTOFF = 1e-12


def _log(x, base):
    return np.log(x) / np.log(base)


def entropy_from_eigenvalues(w, base=2):
    """``-Σ λ log λ`` over eigenvalues above the support cutoff (0 log 0 = 0)."""
    w = np.asarray(w, dtype=float)
    w = w[w > SUPPORT_CUTOFF]
    return max(float(-np.sum(w * _log(w, base))), 0.0)


@dataclass(frozen=True)
class DensityMatrix:
    """A validated quantum state, optionally split as ``C^d_A ⊗ C^d_B``.

    Construction checks Hermiticity, positivity and unit trace. Eigenvalues in
    ``[-1e-10, 0)`` are clamped to zero and the matrix is renormalized.
    """

    mat: np.ndarray
    split: Optional[Tuple[int, int]] = None

    def __post_init__(self):
        m = mk.hermitize(mk.as_matrix(self.mat))
        dim = m.shape[0]
        if self.split is not None:
            d_a, d_b = (int(d) for d in self.split)
            if d_a < 1 or d_b < 1 or d_a * d_b != dim:
                raise DimensionError(
                    f"split {self.split} does not factor dimension {dim}"
                )
            object.__setattr__(self, "split", (d_a, d_b))
        tr = np.trace(m).real
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValidationError(f"trace is {tr!r}, expected 1 within {TRACE_TOL}")
        w, v = np.linalg.eigh(m)
        if w[0] < -PSD_TOL:
            raise ValidationError(f"matrix is not PSD: min eigenvalue {w[0]:.3e}")
        if w[0] < 0:
            w = np.clip(w, 0.0, None)
            w = w / w.sum()
            m = (v * w) @ v.conj().T
        m.setflags(write=False)
        object.__setattr__(self, "mat", m)

    @property
    def dim(self):
        return self.mat.shape[0]

    def eigenvalues(self):
        return np.clip(np.linalg.eigvalsh(self.mat), 0.0, None)

    def require_split(self):
        if self.split is None:
            raise DimensionError("state has no bipartite split (d_A, d_B)")
        return self.split


@dataclass(frozen=True)
class Ensemble:
    """Weighted collection of states ``{(p_k, ρ_k)}`` with a common dimension."""

    weights: np.ndarray
    states: tuple = field(default=())

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        states = tuple(self.states)
        if w.ndim != 1 or len(w) != len(states) or len(w) == 0:
            raise ValidationError("ensemble needs one weight per state and at least one state")
        if np.any(w < 0) or abs(w.sum() - 1.0) > 1e-10:
            raise ValidationError(f"weights must be a probability vector, got sum {w.sum()!r}")
        if len({s.dim for s in states}) != 1:
            raise DimensionError("ensemble states have differing dimensions")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "states", states)

    def average(self):
        mat = sum(p * s.mat for p, s in zip(self.weights, self.states))
        return DensityMatrix(mat)


def von_neumann_entropy(rho, base=2):
    """Entropy ``-Tr ρ log ρ`` of a :class:`DensityMatrix`."""
    return entropy_from_eigenvalues(rho.eigenvalues(), base)


def marginals(rho_ab):
    """Reduced states ``(ρ_A, ρ_B)`` of a split state."""
    d_a, d_b = rho_ab.require_split()
    return (
        DensityMatrix(mk.partial_trace(rho_ab.mat, d_a, d_b, keep="A")),
        DensityMatrix(mk.partial_trace(rho_ab.mat, d_a, d_b, keep="B")),
    )


def relative_entropy(rho, sigma, base=2):
    """Quantum relative entropy ``Tr ρ (log ρ - log σ)``.

    Returns ``inf`` when the support of ``rho`` is not contained in the support
    of ``sigma`` (support = eigenvalues above 1e-12).
    """
    if rho.dim != sigma.dim:
        raise DimensionError(f"relative_entropy: dimensions {rho.dim} and {sigma.dim} differ")
    lr, vr = np.linalg.eigh(rho.mat)
    ls, vs = np.linalg.eigh(sigma.mat)
    keep_r = lr > SUPPORT_CUTOFF
    lr, vr = lr[keep_r], vr[:, keep_r]
    # overlap[i, j] = |<r_i|s_j>|^2
    overlap = np.abs(vr.conj().T @ vs) ** 2
    weight_on_s = lr @ overlap
    in_support = ls > SUPPORT_CUTOFF
    if np.sum(weight_on_s[~in_support]) > 1e-10:
        return float("inf")
    cross = float(np.sum(weight_on_s[in_support] * _log(ls[in_support], base)))
    return float(np.sum(lr * _log(lr, base))) - cross


def entropy_defect(ens, base=2):
    """``H(Σ p_k ρ_k) - Σ p_k H(ρ_k)`` for an :class:`Ensemble`."""
    avg = von_neumann_entropy(ens.average(), base)
    return avg - float(sum(p * von_neumann_entropy(s, base) for p, s in zip(ens.weights, ens.states)))


def _basis_matrix(basis, dim):
    e = np.asarray(basis, dtype=complex)
    if e.ndim == 2 and isinstance(basis, (list, tuple)):
        # a list of vectors: stack them as columns
        e = e.T
    if e.shape != (dim, dim):
        raise ValidationError(f"basis must hold {dim} vectors of length {dim}, got shape {e.shape}")
    err = np.max(np.abs(e.conj().T @ e - np.eye(dim)))
    if err > 1e-10:
        raise ValidationError(f"basis is not orthonormal: max |E^dagger E - I| = {err:.3e}")
    return e


def dephase(rho_ab, basis):
    """Delete the off-diagonal elements of ``rho_ab`` in an orthonormal basis.

    ``basis`` is either a square matrix whose columns are the basis vectors or
    a list of vectors. Returns ``Σ_k |e_k><e_k| ρ |e_k><e_k|`` with the split of
    the input preserved.
    """
    e = _basis_matrix(basis, rho_ab.dim)
    diag = np.einsum("ik,ij,jk->k", e.conj(), rho_ab.mat, e).real
    return DensityMatrix((e * diag) @ e.conj().T, rho_ab.split)


def random_density(dim, rank=None, seed=None, split=None):
    """Ginibre-ensemble state ``G G† / Tr(G G†)`` with ``G`` of shape dim×rank."""
    rank = dim if rank is None else rank
    if not 1 <= rank <= dim:
        raise ValueError(f"rank must lie in [1, {dim}], got {rank}")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    m = g @ g.conj().T
    return DensityMatrix(m / np.trace(m).real, split)


# Structured states used by tests, demos and the verification suite.

def pure_state(psi, split=None):
    psi = np.asarray(psi, dtype=complex)
    psi = psi / np.linalg.norm(psi)
    return DensityMatrix(np.outer(psi, psi.conj()), split)


def bell_state():
    """``(|00> + |11>)/√2`` on two qubits."""
    return pure_state([1, 0, 0, 1], (2, 2))


def product_state(rho_a, rho_b):
    return DensityMatrix(mk.tensor_product(rho_a.mat, rho_b.mat), (rho_a.dim, rho_b.dim))


def classical_state(p):
    """Embed a joint distribution ``p[a, b]`` as a diagonal bipartite state."""
    p = np.asarray(p, dtype=float)
    if p.ndim != 2:
        raise DimensionError("joint distribution must be a 2-D table")
    return DensityMatrix(np.diag(p.ravel()).astype(complex), p.shape)
