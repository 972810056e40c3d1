"""Numerical infimum of H(A|β) over POVMs on B and supremum of I(α;β) over
POVM pairs.

Both searches run a multi-start Nelder-Mead over an unconstrained
parametrization of K-outcome POVMs. The returned numbers are one-sided
bounds: an upper bound on the infimum, a lower bound on the supremum.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.optimize import minimize

from . import matkernel as mk
from .exceptions import ConfigError, DimensionError
from .measure import (
    Povm,
    basis_povm,
    classical_mutual_information,
    conditional_entropy_arrays,
    conditional_entropy_given,
    conditional_ensemble,
    joint_distribution,
    joint_table_arrays,
)
from .qstate import marginals

UPPER_FOR_INFIMUM = "upper-for-infimum"
LOWER_FOR_SUPREMUM = "lower-for-supremum"


@dataclass(frozen=True)
class OptimizerConfig:
    """Search settings. ``outcomes_a``/``outcomes_b`` default to ``d**2``."""

    restarts: int = 20
    outcomes_a: Optional[int] = None
    outcomes_b: Optional[int] = None
    max_evals: int = 5000
    tol: float = 1e-9
    base_seed: int = 42
    random_bases: int = 4
    # search only rank-1 projective measurements (unitary parametrization)
    projective: bool = False

    def __post_init__(self):
        if self.restarts < 1:
            raise ConfigError(f"restarts must be >= 1, got {self.restarts}")
        if not self.tol > 0:
            raise ConfigError(f"tol must be > 0, got {self.tol}")
        if self.max_evals < 1:
            raise ConfigError(f"max_evals must be >= 1, got {self.max_evals}")
        for name in ("outcomes_a", "outcomes_b"):
            k = getattr(self, name)
            if k is not None and k < 1:
                raise ConfigError(f"{name} must be >= 1, got {k}")
        if self.random_bases < 0:
            raise ConfigError(f"random_bases must be >= 0, got {self.random_bases}")


@dataclass(frozen=True)
class PovmParams:
    """Flat real coordinates for a ``n_outcomes``-element POVM on ``C^dim``."""

    dim: int
    n_outcomes: int
    raw: np.ndarray

    def __post_init__(self):
        raw = np.asarray(self.raw, dtype=float).ravel()
        if raw.size != 2 * self.dim * self.dim * self.n_outcomes:
            raise DimensionError(
                f"raw vector has {raw.size} entries, expected 2*{self.dim}^2*{self.n_outcomes}"
            )
        object.__setattr__(self, "raw", raw)


@dataclass
class OptimizationResult:
    value: float
    bound_kind: str
    best_povm_b: Povm
    best_povm_a: Optional[Povm] = None
    restarts_run: int = 0
    per_restart_values: np.ndarray = field(default_factory=lambda: np.empty(0))
    converged_tolerance: float = 0.0
    warm_start_value: float = float("nan")


def _decode_elements(raw, dim, k):
    raw = np.asarray(raw, dtype=float).reshape(2, k, dim, dim)
    a = raw[0] + 1j * raw[1]
    ata = mk.dagger(a) @ a
    s = ata.sum(axis=0)
    w, v = np.linalg.eigh(0.5 * (s + s.conj().T))
    if w[0] < 1e-12:
        w = w + 1e-10
    s_inv_sqrt = (v / np.sqrt(w)) @ v.conj().T
    m = s_inv_sqrt @ ata @ s_inv_sqrt
    m = 0.5 * (m + mk.dagger(m))
    deficit = np.eye(dim) - m.sum(axis=0)
    if np.max(np.abs(deficit)) > 1e-12:
        # regularized S leaves a PSD gap on its near-kernel; share it out
        m = m + deficit / k
    return m


def decode_povm(p):
    """Map unconstrained coordinates to a valid POVM.

    With ``A_k`` the complex matrices held in ``p.raw`` and
    ``S = Σ A_k† A_k``, the elements are ``S^{-1/2} A_k† A_k S^{-1/2}``.
    """
    return Povm(_decode_elements(p.raw, p.dim, p.n_outcomes))


def encode_povm(povm, n_outcomes=None):
    """Coordinates that decode back to ``povm`` (zero-padded to ``n_outcomes``)."""
    k = povm.n_outcomes if n_outcomes is None else n_outcomes
    if k < povm.n_outcomes:
        raise DimensionError(f"cannot encode {povm.n_outcomes} elements into {k} outcomes")
    a = np.zeros((k, povm.dim, povm.dim), dtype=complex)
    a[: povm.n_outcomes] = [mk.psd_sqrt(m) for m in povm.elements]
    return PovmParams(povm.dim, k, np.concatenate([a.real.ravel(), a.imag.ravel()]))


def _decode_unitary(raw, dim):
    raw = np.asarray(raw, dtype=float).reshape(2, dim, dim)
    q, r = np.linalg.qr(raw[0] + 1j * raw[1])
    d = np.diagonal(r)
    return q * np.where(np.abs(d) > 0, d / np.abs(np.where(d == 0, 1, d)), 1)


def _projectors(u):
    return np.einsum("ik,jk->kij", u, u.conj())


def _refining_unitary(povm):
    """Orthonormal basis refining the projectors of a projective POVM."""
    cols = []
    for m in povm.elements:
        w, v = np.linalg.eigh(m)
        cols.append(v[:, w > 0.5])
    return np.concatenate(cols, axis=1)


def eigenbasis_warm_start(rho_ab, povm_b):
    """Projective measurement on A in the eigenbasis of ``Σ_b p_b ρ(A|β=b)``.

    Degenerate eigenspaces of that average are split by diagonalizing a
    generic weighted sum of the conditional states inside them, so that a
    common eigenbasis is found whenever the conditional states commute.
    """
    ens = conditional_ensemble(rho_ab, povm_b)
    avg = sum(p * s.mat for p, s in zip(ens.weights, ens.states))
    w, v = np.linalg.eigh(0.5 * (avg + avg.conj().T))
    generic = sum(
        (1.0 + np.sqrt(2.0) * (b + 1) % 1.0 + 0.1 * b) * p * s.mat
        for b, (p, s) in enumerate(zip(ens.weights, ens.states))
    )
    start = 0
    while start < len(w):
        stop = start + 1
        while stop < len(w) and w[stop] - w[stop - 1] < 1e-9:
            stop += 1
        if stop - start > 1:
            sub = v[:, start:stop]
            block = sub.conj().T @ generic @ sub
            _, rot = np.linalg.eigh(0.5 * (block + block.conj().T))
            v[:, start:stop] = sub @ rot
        start = stop
    return basis_povm(v)


def _resolve_outcomes(k, dim):
    return dim * dim if k is None else k


def _local_search(fun, x0, cfg, step=None):
    options = {
        "maxfev": cfg.max_evals,
        "maxiter": cfg.max_evals,
        "fatol": cfg.tol,
        "xatol": np.inf,
        "adaptive": True,
    }
    x0 = np.asarray(x0, dtype=float)
    if step is not None:
        # simplex anchored at x0 itself, so the result is never worse than x0
        options["initial_simplex"] = np.vstack([x0, x0 + step * np.eye(x0.size)])
    res = minimize(fun, x0, method="Nelder-Mead", options=options)
    x = res.x
    f = float(fun(x))
    f0 = float(fun(x0))
    return (x0, f0) if f0 < f else (x, f)


def _unitary_coords(u):
    u = np.asarray(u, dtype=complex)
    return np.concatenate([u.real.ravel(), u.imag.ravel()])


def _basis_candidates(rho, cfg, rng):
    """Candidate unitaries: eigenbasis of ``rho``, computational, Haar-random."""
    out = [mk.hermitian_spectrum(rho.mat).eigenvectors, np.eye(rho.dim, dtype=complex)]
    out += [mk.random_unitary(rho.dim, rng) for _ in range(cfg.random_bases)]
    return out


@dataclass
class _Problem:
    """An objective to minimize, in full POVM coordinates and (optionally) in
    the smaller rank-1 projective coordinates."""

    full_fun: object
    n_full: int
    proj_fun: object = None
    n_proj: int = 0
    proj_to_full: object = None
    proj_candidates: list = field(default_factory=list)
    full_candidates: list = field(default_factory=list)


def _run_search(problem, cfg):
    """Warm stage (projective candidates, projective local search, full local
    search from the best point so far), then ``cfg.restarts`` seeded local
    searches, each from a Ginibre-random unitary (projective search, then
    full search) or, without projective coordinates, from Ginibre-random
    full coordinates. Returns ``(x, per_restart, warm)``."""
    best_x, best_f = None, np.inf

    def offer(x, f):
        nonlocal best_x, best_f
        if f < best_f:
            best_x, best_f = x, f

    if problem.proj_fun is not None and problem.proj_candidates:
        scored = [(float(problem.proj_fun(y)), i) for i, y in enumerate(problem.proj_candidates)]
        _, i0 = min(scored)
        y, fy = _local_search(problem.proj_fun, problem.proj_candidates[i0], cfg, step=0.1)
        x = problem.proj_to_full(y)
        if x is not None:
            offer(x, float(problem.full_fun(x)))
    for x in problem.full_candidates:
        offer(x, float(problem.full_fun(x)))
    if best_x is not None:
        offer(*_local_search(problem.full_fun, best_x, cfg, step=0.1))
    warm_f = best_f

    per_restart = []
    for r in range(cfg.restarts):
        rng = np.random.default_rng(cfg.base_seed + r)
        x = None
        if problem.proj_fun is not None:
            y0 = rng.standard_normal(problem.n_proj)
            y, _ = _local_search(problem.proj_fun, y0, cfg, step=0.1)
            x = problem.proj_to_full(y)
        if x is None:
            x, f = _local_search(problem.full_fun, rng.standard_normal(problem.n_full), cfg)
        else:
            x, f = _local_search(problem.full_fun, x, cfg, step=0.1)
        per_restart.append(f)
        offer(x, f)
    return best_x, np.array(per_restart), warm_f


def _full_coords(unitary_raws, dims, ks):
    """Concatenated full coordinates for projective measurements, or None if
    some side has fewer outcomes than its dimension."""
    parts = []
    offset = 0
    for d, k in zip(dims, ks):
        if k < d:
            return None
        u = _decode_unitary(unitary_raws[offset:offset + 2 * d * d], d)
        offset += 2 * d * d
        parts.append(encode_povm(Povm(_projectors(u)), k).raw)
    return np.concatenate(parts)


def minimize_conditional_entropy(rho_ab, cfg=None, extra_candidates=()):
    """Upper bound on ``H(A|B) = inf_{M_B} H(A|β)`` in bits.

    ``extra_candidates`` are POVMs on B evaluated alongside the built-in
    projective warm starts (eigenbasis of ρ(B), computational basis and
    Haar-random bases).
    """
    cfg = OptimizerConfig() if cfg is None else cfg
    d_a, d_b = rho_ab.require_split()
    rho4 = np.asarray(rho_ab.mat).reshape(d_a, d_b, d_a, d_b)
    _, rho_b = marginals(rho_ab)
    rng = np.random.default_rng((cfg.base_seed, 1))
    bases = [_unitary_coords(u) for u in _basis_candidates(rho_b, cfg, rng)]

    def proj_fun(y):
        return conditional_entropy_arrays(rho4, _projectors(_decode_unitary(y, d_b)))

    if cfg.projective:
        bases += [_unitary_coords(_refining_unitary(p)) for p in extra_candidates if p.is_projective()]
        problem = _Problem(proj_fun, 2 * d_b * d_b, full_candidates=bases)

        def decode(x):
            return _projectors(_decode_unitary(x, d_b))
    else:
        k = _resolve_outcomes(cfg.outcomes_b, d_b)

        def decode(x):
            return _decode_elements(x, d_b, k)

        problem = _Problem(
            lambda x: conditional_entropy_arrays(rho4, decode(x)),
            2 * d_b * d_b * k,
            proj_fun=proj_fun,
            n_proj=2 * d_b * d_b,
            proj_to_full=lambda y: _full_coords(y, [d_b], [k]),
            proj_candidates=bases,
            full_candidates=[encode_povm(p, k).raw for p in extra_candidates if p.n_outcomes <= k],
        )

    best_x, per_restart, warm_f = _run_search(problem, cfg)
    best = Povm(decode(best_x))
    return OptimizationResult(
        value=conditional_entropy_given(rho_ab, best),
        bound_kind=UPPER_FOR_INFIMUM,
        best_povm_b=best,
        restarts_run=cfg.restarts,
        per_restart_values=per_restart,
        converged_tolerance=cfg.tol,
        warm_start_value=warm_f,
    )


def _negative_mi(rho4, elems_a, elems_b):
    t = joint_table_arrays(rho4, elems_a, elems_b)
    return -classical_mutual_information(np.clip(t, 0.0, None))


def maximize_mutual_information(rho_ab, cfg=None):
    """Lower bound on ``I(A;B) = sup_{M_A, M_B} I(α;β)`` in bits."""
    cfg = OptimizerConfig() if cfg is None else cfg
    d_a, d_b = rho_ab.require_split()
    k_a = _resolve_outcomes(cfg.outcomes_a, d_a)
    k_b = _resolve_outcomes(cfg.outcomes_b, d_b)
    n_a = 2 * d_a * d_a * k_a
    n_b = 2 * d_b * d_b * k_b
    u_a = 2 * d_a * d_a
    rho4 = np.asarray(rho_ab.mat).reshape(d_a, d_b, d_a, d_b)

    def full_fun(x):
        return _negative_mi(
            rho4, _decode_elements(x[:n_a], d_a, k_a), _decode_elements(x[n_a:], d_b, k_b)
        )

    def proj_fun(y):
        return _negative_mi(
            rho4,
            _projectors(_decode_unitary(y[:u_a], d_a)),
            _projectors(_decode_unitary(y[u_a:], d_b)),
        )

    rho_a, rho_b = marginals(rho_ab)
    rng = np.random.default_rng((cfg.base_seed, 2))
    b_bases = _basis_candidates(rho_b, cfg, rng)
    a_bases = _basis_candidates(rho_a, cfg, rng)
    pairs = []
    for ub in b_bases:
        a_side = [_refining_unitary(eigenbasis_warm_start(rho_ab, basis_povm(ub)))] + a_bases
        pairs += [np.concatenate([_unitary_coords(ua), _unitary_coords(ub)]) for ua in a_side]

    problem = _Problem(
        full_fun,
        n_a + n_b,
        proj_fun=proj_fun,
        n_proj=u_a + 2 * d_b * d_b,
        proj_to_full=lambda y: _full_coords(y, [d_a, d_b], [k_a, k_b]),
        proj_candidates=pairs,
    )
    best_x, per_restart, warm_f = _run_search(problem, cfg)
    best_a = Povm(_decode_elements(best_x[:n_a], d_a, k_a))
    best_b = Povm(_decode_elements(best_x[n_a:], d_b, k_b))
    return OptimizationResult(
        value=classical_mutual_information(joint_distribution(rho_ab, best_a, best_b)),
        bound_kind=LOWER_FOR_SUPREMUM,
        best_povm_b=best_b,
        best_povm_a=best_a,
        restarts_run=cfg.restarts,
        per_restart_values=-per_restart,
        converged_tolerance=cfg.tol,
        warm_start_value=-warm_f,
    )


def maximize_mutual_information_given(rho_ab, povm_b, cfg=None):
    """Lower bound on ``I(A;β) = sup_{M_A} I(α;β)`` for a fixed POVM on B."""
    cfg = OptimizerConfig() if cfg is None else cfg
    d_a, d_b = rho_ab.require_split()
    if povm_b.dim != d_b:
        raise DimensionError(f"POVM on B has dimension {povm_b.dim}, expected {d_b}")
    k_a = _resolve_outcomes(cfg.outcomes_a, d_a)
    rho4 = np.asarray(rho_ab.mat).reshape(d_a, d_b, d_a, d_b)
    elems_b = povm_b.elements

    rho_a, _ = marginals(rho_ab)
    rng = np.random.default_rng((cfg.base_seed, 3))
    a_bases = [_refining_unitary(eigenbasis_warm_start(rho_ab, povm_b))]
    a_bases += _basis_candidates(rho_a, cfg, rng)

    problem = _Problem(
        lambda x: _negative_mi(rho4, _decode_elements(x, d_a, k_a), elems_b),
        2 * d_a * d_a * k_a,
        proj_fun=lambda y: _negative_mi(rho4, _projectors(_decode_unitary(y, d_a)), elems_b),
        n_proj=2 * d_a * d_a,
        proj_to_full=lambda y: _full_coords(y, [d_a], [k_a]),
        proj_candidates=[_unitary_coords(u) for u in a_bases],
    )
    best_x, per_restart, warm_f = _run_search(problem, cfg)
    best_a = Povm(_decode_elements(best_x, d_a, k_a))
    return OptimizationResult(
        value=classical_mutual_information(joint_distribution(rho_ab, best_a, povm_b)),
        bound_kind=LOWER_FOR_SUPREMUM,
        best_povm_b=povm_b,
        best_povm_a=best_a,
        restarts_run=cfg.restarts,
        per_restart_values=-per_restart,
        converged_tolerance=cfg.tol,
        warm_start_value=-warm_f,
    )


def evaluate_result(rho_ab, result):
    """Re-evaluate the objective on the POVM(s) stored in ``result``."""
    if result.bound_kind == UPPER_FOR_INFIMUM:
        return conditional_entropy_given(rho_ab, result.best_povm_b)
    return classical_mutual_information(
        joint_distribution(rho_ab, result.best_povm_a, result.best_povm_b)
    )
