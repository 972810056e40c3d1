"""POVMs, outcome statistics, conditional states and the entropies built on them.

Outcome distributions are 1-D ``numpy`` arrays; joint outcome tables are 2-D
arrays indexed ``[a, b]`` (outcome on A first).
"""

from dataclasses import dataclass

import numpy as np

from . import matkernel as mk
from .exceptions import DimensionError, ValidationError, ZeroProbabilityError
from .qstate import (
    SUPPORT_CUTOFF,
    DensityMatrix,
    Ensemble,
    _log,
    entropy_from_eigenvalues,
)

IDENTITY_TOL = 1e-9
PROB_TOL = 1e-10


@dataclass(frozen=True)
class Povm:
    """Finite resolution of the identity by Hermitian PSD operators.

    ``elements`` is stored as an array of shape ``(K, dim, dim)``.
    """

    elements: np.ndarray

    def __post_init__(self):
        e = np.asarray(self.elements, dtype=complex)
        if e.ndim != 3 or e.shape[1] != e.shape[2] or e.shape[0] < 1:
            raise DimensionError(f"POVM elements must have shape (K, d, d) with K >= 1, got {e.shape}")
        asym = float(np.max(np.abs(e - mk.dagger(e))))
        if asym > mk.HERMITIAN_TOL:
            raise ValidationError(f"POVM element not Hermitian: max asymmetry {asym:.3e}")
        e = 0.5 * (e + mk.dagger(e))
        min_eig = float(np.min(np.linalg.eigvalsh(e)))
        if min_eig < -1e-10:
            raise ValidationError(f"POVM element not PSD: min eigenvalue {min_eig:.3e}")
        err = float(np.max(np.abs(e.sum(axis=0) - np.eye(e.shape[1]))))
        if err > IDENTITY_TOL:
            raise ValidationError(f"POVM elements do not sum to the identity: max deviation {err:.3e}")
        e.setflags(write=False)
        object.__setattr__(self, "elements", e)

    @property
    def dim(self):
        return self.elements.shape[1]

    @property
    def n_outcomes(self):
        return self.elements.shape[0]

    def __len__(self):
        return self.n_outcomes

    def __iter__(self):
        return iter(self.elements)

    def is_projective(self, tol=1e-9):
        """True when the elements are mutually orthogonal projectors."""
        e = self.elements
        prods = np.einsum("aij,bjk->abik", e, e)
        target = np.zeros_like(prods)
        idx = np.arange(len(e))
        target[idx, idx] = e
        return bool(np.max(np.abs(prods - target)) <= tol)

    def is_rank_one_projective(self, tol=1e-9):
        return self.n_outcomes == self.dim and self.is_projective(tol)


def basis_povm(u):
    """Projective POVM onto the columns of a unitary ``u``."""
    u = mk.as_matrix(u)
    return Povm(np.einsum("ik,jk->kij", u, u.conj()))


def computational_povm(dim):
    return basis_povm(np.eye(dim))


def trine_povm():
    """Three-outcome qubit POVM ``{(2/3)|φ_k><φ_k|}`` with real Bloch vectors 120° apart."""
    angles = [0.0, 2 * np.pi / 3, 4 * np.pi / 3]
    vecs = [np.array([np.cos(t / 2), np.sin(t / 2)]) for t in angles]
    return Povm(np.array([2 / 3 * np.outer(v, v) for v in vecs]))


def _check_dim(what, expected, got):
    if expected != got:
        raise DimensionError(f"{what}: expected dimension {expected}, got {got}")


def _clean_probs(p):
    p = np.asarray(p, dtype=float)
    if np.any(p < -PROB_TOL):
        raise ValidationError(f"negative outcome probability {p.min():.3e}")
    return np.clip(p, 0.0, None)


def outcome_distribution(rho, povm):
    """``Pr{α=a} = Tr(ρ M_a)`` for every element."""
    _check_dim("outcome_distribution", rho.dim, povm.dim)
    return _clean_probs(np.einsum("ij,aji->a", rho.mat, povm.elements).real)


def _rho4(rho_ab):
    d_a, d_b = rho_ab.require_split()
    return np.asarray(rho_ab.mat).reshape(d_a, d_b, d_a, d_b)


def _paired(rho4):
    # R[(i, j), (b, c)] = ρ[i b, j c]
    d_a, d_b = rho4.shape[0], rho4.shape[1]
    return rho4.transpose(0, 2, 1, 3).reshape(d_a * d_a, d_b * d_b)


def _flat_transposed(elems):
    k, d, _ = elems.shape
    return elems.transpose(0, 2, 1).reshape(k, d * d)


def joint_table_arrays(rho4, elems_a, elems_b):
    """Unvalidated joint table ``Tr ρ (M_a ⊗ M_b)`` on raw arrays."""
    return (_flat_transposed(elems_a) @ _paired(rho4) @ _flat_transposed(elems_b).T).real


def joint_distribution(rho_ab, povm_a, povm_b):
    """Joint outcome table ``Pr{α=a, β=b} = Tr ρ(A,B) (M_a ⊗ M_b)``."""
    d_a, d_b = rho_ab.require_split()
    _check_dim("joint_distribution (A side)", d_a, povm_a.dim)
    _check_dim("joint_distribution (B side)", d_b, povm_b.dim)
    return _clean_probs(joint_table_arrays(_rho4(rho_ab), povm_a.elements, povm_b.elements))


def unnormalized_conditionals(rho4, elems_b):
    """``Tr_B ρ (I ⊗ M_b)`` for every element, stacked along axis 0."""
    d_a = rho4.shape[0]
    return (_flat_transposed(elems_b) @ _paired(rho4).T).reshape(-1, d_a, d_a)


def conditional_state(rho_ab, element_b):
    """Post-measurement state of A given outcome ``element_b`` on B.

    Returns ``(ρ(A|β=b), Pr{β=b})``. Raises :class:`ZeroProbabilityError` when
    the probability is at most 1e-12.
    """
    d_a, d_b = rho_ab.require_split()
    m = mk.as_matrix(element_b)
    _check_dim("conditional_state", d_b, m.shape[0])
    sigma = unnormalized_conditionals(_rho4(rho_ab), m[None])[0]
    p = float(np.trace(sigma).real)
    if p <= SUPPORT_CUTOFF:
        raise ZeroProbabilityError(p)
    return DensityMatrix(sigma / p), p


def conditional_ensemble(rho_ab, povm_b):
    """Ensemble ``{(Pr{β=b}, ρ(A|β=b))}`` over the outcomes that occur.

    Zero-probability outcomes are dropped and the weights renormalized by
    their (at most 1e-12 per outcome) missing mass.
    """
    d_a, d_b = rho_ab.require_split()
    _check_dim("conditional_ensemble", d_b, povm_b.dim)
    sigmas = unnormalized_conditionals(_rho4(rho_ab), povm_b.elements)
    probs = np.trace(sigmas, axis1=1, axis2=2).real
    keep = probs > SUPPORT_CUTOFF
    states = tuple(DensityMatrix(s / p) for s, p in zip(sigmas[keep], probs[keep]))
    return Ensemble(probs[keep] / probs[keep].sum(), states)


def conditional_entropy_arrays(rho4, elems_b, base=2):
    """Unvalidated ``H(A|β)`` on raw arrays.

    Uses ``p H(σ/p) = -Σ λ log λ + p log p`` over the eigenvalues λ of the
    unnormalized conditional state σ, so no division by tiny p happens.
    """
    sigmas = unnormalized_conditionals(rho4, elems_b)
    sigmas = 0.5 * (sigmas + mk.dagger(sigmas))
    lam = np.linalg.eigvalsh(sigmas)
    probs = lam.sum(axis=1)
    lam = np.where(lam > SUPPORT_CUTOFF, lam, 1.0)
    total = -np.sum(lam * _log(lam, base), axis=1)
    occurs = probs > SUPPORT_CUTOFF
    total = total + np.where(occurs, probs * _log(np.where(occurs, probs, 1.0), base), 0.0)
    return float(np.sum(np.where(occurs, total, 0.0)))


def conditional_entropy_given(rho_ab, povm_b, base=2):
    """``H(A|β) = Σ_b Pr{β=b} H(ρ(A|β=b))`` for a fixed POVM on B."""
    d_a, d_b = rho_ab.require_split()
    _check_dim("conditional_entropy_given", d_b, povm_b.dim)
    return conditional_entropy_arrays(_rho4(rho_ab), povm_b.elements, base)


def shannon_entropy(probs, base=2):
    """Shannon entropy of a probability vector or table (0 log 0 = 0)."""
    p = np.asarray(probs, dtype=float).ravel()
    p = p[p > 0]
    return float(-np.sum(p * _log(p, base)))


def classical_conditional_entropy(table, base=2):
    """``H(α|β) = H(α,β) - H(β)`` for a table indexed ``[a, b]``."""
    t = np.asarray(table, dtype=float)
    return shannon_entropy(t, base) - shannon_entropy(t.sum(axis=0), base)


def classical_mutual_information(table, base=2):
    """``H(α) + H(β) - H(α,β)`` for a table indexed ``[a, b]``."""
    t = np.asarray(table, dtype=float)
    return (
        shannon_entropy(t.sum(axis=1), base)
        + shannon_entropy(t.sum(axis=0), base)
        - shannon_entropy(t, base)
    )


def naimark_dilate(povm):
    """Dilate a POVM to a projective measurement on ``C^K ⊗ C^d``.

    Returns ``(V, P)`` where ``V`` is the ``(K*d) × d`` isometry stacking the
    blocks ``√M_k`` and ``P`` is the projective POVM ``{|k><k| ⊗ I_d}``, so that
    ``Tr(ρ M_k) = Tr(V ρ V† P_k)``.
    """
    k, d = povm.n_outcomes, povm.dim
    v = np.concatenate([mk.psd_sqrt(m) for m in povm.elements], axis=0)
    err = float(np.max(np.abs(v.conj().T @ v - np.eye(d))))
    if err > 1e-9:
        raise ValidationError(f"dilation is not an isometry: max |V^dagger V - I| = {err:.3e}")
    projectors = np.zeros((k, k * d, k * d), dtype=complex)
    for i in range(k):
        projectors[i, i * d:(i + 1) * d, i * d:(i + 1) * d] = np.eye(d)
    return v, Povm(projectors)


def dilate_state(rho_ab, isometry):
    """Push B of a split state through an isometry: ``(I ⊗ V) ρ (I ⊗ V)†``."""
    d_a, d_b = rho_ab.require_split()
    v = np.asarray(isometry, dtype=complex)
    _check_dim("dilate_state", d_b, v.shape[1])
    w = np.kron(np.eye(d_a), v)
    return DensityMatrix(w @ rho_ab.mat @ w.conj().T, (d_a, v.shape[0]))
