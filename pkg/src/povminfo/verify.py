"""Numerical checks of the inequalities relating quantum entropies to the
statistics of measurements on a bipartite system, and sweeps that run them
over random and structured states.

Every check produces :class:`CheckReport` records with ``passed`` true iff
``rhs - lhs >= -tolerance``. Equalities are reported as ``lhs = |x - y|``
against ``rhs = 0``.
"""

from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from . import matkernel as mk
from .exceptions import ConfigError, ValidationError, ZeroProbabilityError
from .measure import (
    Povm,
    basis_povm,
    classical_conditional_entropy,
    computational_povm,
    conditional_ensemble,
    conditional_entropy_given,
    conditional_state,
    dilate_state,
    joint_distribution,
    naimark_dilate,
    outcome_distribution,
    shannon_entropy,
)
from .optimize import (
    OptimizerConfig,
    _decode_elements,
    maximize_mutual_information_given,
    minimize_conditional_entropy,
)
from .qstate import (
    SUPPORT_CUTOFF,
    DensityMatrix,
    bell_state,
    classical_state,
    dephase,
    entropy_defect,
    marginals,
    product_state,
    random_density,
    relative_entropy,
    von_neumann_entropy,
)

KLEIN_TOL = 1e-9
OPTIMIZER_TOL = 1e-6
STATS_TOL = 1e-10


def format_value(x):
    """Fixed 9-decimal text; never prints a negative zero."""
    text = f"{x:.9f}"
    return text[1:] if text.startswith("-") and float(text) == 0 else text


@dataclass(frozen=True)
class CheckReport:
    check_name: str
    state_descriptor: str
    lhs: float
    rhs: float
    margin: float
    passed: bool
    tolerance: float

    def line(self):
        """Tab-separated record: name, descriptor, lhs, rhs, margin, PASS/FAIL."""
        status = "PASS" if self.passed else "FAIL"
        return (
            f"{self.check_name}\t{self.state_descriptor}\t{format_value(self.lhs)}\t"
            f"{format_value(self.rhs)}\t{format_value(self.margin)}\t{status}"
        )


def make_report(name, descriptor, lhs, rhs, tolerance):
    """Report for the inequality ``lhs <= rhs`` at the given tolerance."""
    lhs, rhs = float(lhs), float(rhs)
    margin = rhs - lhs
    return CheckReport(name, descriptor, lhs, rhs, margin, bool(margin >= -tolerance), tolerance)


def equality_report(name, descriptor, x, y, tolerance):
    return make_report(name, descriptor, abs(float(x) - float(y)), 0.0, tolerance)


def check_lemma1(rho_ab, povm_a, povm_b, descriptor="", tolerance=KLEIN_TOL):
    """Entropies never exceed the Shannon entropies of measurement outcomes:
    joint, A side and B side.

    The inequalities hold for POVMs whose elements have rank one (complete
    sets of one-dimensional projectors after dilation); coarser POVMs such as
    ``{I}`` can have outcome entropy below the state entropy.
    """
    rho_a, rho_b = marginals(rho_ab)
    table = joint_distribution(rho_ab, povm_a, povm_b)
    return [
        make_report("lemma1.joint", descriptor, von_neumann_entropy(rho_ab), shannon_entropy(table), tolerance),
        make_report("lemma1.A", descriptor, von_neumann_entropy(rho_a),
                    shannon_entropy(outcome_distribution(rho_a, povm_a)), tolerance),
        make_report("lemma1.B", descriptor, von_neumann_entropy(rho_b),
                    shannon_entropy(outcome_distribution(rho_b, povm_b)), tolerance),
    ]


def check_conditional_klein(rho_ab, povm_a, povm_b, descriptor="", tolerance=KLEIN_TOL):
    """``H(A|β) <= H(α|β)``; as in :func:`check_lemma1`, ``povm_a`` must have
    rank-one elements."""
    lhs = conditional_entropy_given(rho_ab, povm_b)
    rhs = classical_conditional_entropy(joint_distribution(rho_ab, povm_a, povm_b))
    return make_report("conditional_klein", descriptor, lhs, rhs, tolerance)


def check_theorem1(rho_ab, cfg=None, descriptor="", tolerance=OPTIMIZER_TOL):
    """``H(A|B) <= H(A)``.

    The left side is the optimizer's upper bound on ``H(A|B)``, so a pass is a
    conservative confirmation.
    """
    res = minimize_conditional_entropy(rho_ab, cfg)
    rho_a, _ = marginals(rho_ab)
    return make_report("theorem1", descriptor, res.value, von_neumann_entropy(rho_a), tolerance)


def check_theorem2(rho_ab, povm_b, descriptor="", tolerance=KLEIN_TOL):
    """``H(A,B) <= H(B) + H(A|β)`` for the given POVM on B."""
    _, rho_b = marginals(rho_ab)
    rhs = von_neumann_entropy(rho_b) + conditional_entropy_given(rho_ab, povm_b)
    return make_report("theorem2", descriptor, von_neumann_entropy(rho_ab), rhs, tolerance)


def _cross_entropy(rho, sigma):
    """``-Tr ρ log2 σ`` over the support of σ."""
    mu, v = np.linalg.eigh(sigma.mat)
    weights = np.einsum("ij,ik,kj->j", v.conj(), rho.mat, v).real
    keep = mu > SUPPORT_CUTOFF
    return float(-np.sum(weights[keep] * np.log2(mu[keep])))


def product_eigenbasis(rho_ab, povm_b):
    """Columns ``u_{ib} ⊗ v_b``: ``v_b`` spans projector ``b`` on B and ``u_{ib}``
    are eigenvectors of ``ρ(A|β=b)`` (computational basis if ``b`` never occurs)."""
    d_a, d_b = rho_ab.require_split()
    cols = []
    for m in povm_b.elements:
        w, vecs = np.linalg.eigh(m)
        v = vecs[:, np.argmax(w)]
        try:
            cond, _ = conditional_state(rho_ab, m)
            u = mk.hermitian_spectrum(cond.mat).eigenvectors
        except ZeroProbabilityError:
            u = np.eye(d_a)
        cols += [np.kron(u[:, i], v) for i in range(d_a)]
    return np.array(cols).T


def check_theorem2_proof_steps(rho_ab, projective_povm_b, descriptor="", tolerance=KLEIN_TOL):
    """Intermediate identities and the monotonicity step behind theorem 2.

    Requires a rank-1 projective POVM on B. Builds the dephased state ρ′ in the
    basis ``u_{ib} ⊗ v_b`` and checks

    * ``H(A|β) = H(ρ′) - H(ρ′_B)``,
    * ``H(A|β) = -Tr ρ log ρ′ + Tr ρ_B log ρ′_B``,
    * ``D(ρ_B || ρ′_B) <= D(ρ || ρ′)``,
    * ``H(A,B) = H(B) + H(A|β) - [D(ρ || ρ′) - D(ρ_B || ρ′_B)]``.
    """
    if not projective_povm_b.is_rank_one_projective():
        raise ValidationError("theorem 2 proof steps need a rank-1 projective POVM on B")
    d_a, d_b = rho_ab.require_split()
    cond = conditional_entropy_given(rho_ab, projective_povm_b)
    dephased = dephase(rho_ab, product_eigenbasis(rho_ab, projective_povm_b))
    _, rho_b = marginals(rho_ab)
    _, dephased_b = marginals(dephased)

    two_term = von_neumann_entropy(dephased) - von_neumann_entropy(dephased_b)
    cross = _cross_entropy(rho_ab, dephased) - _cross_entropy(rho_b, dephased_b)
    d_joint = relative_entropy(rho_ab, dephased)
    d_b_only = relative_entropy(rho_b, dephased_b)
    rearranged = von_neumann_entropy(rho_b) + cond - (d_joint - d_b_only)
    return [
        equality_report("theorem2.proof.dephased_entropies", descriptor, cond, two_term, tolerance),
        equality_report("theorem2.proof.cross_entropies", descriptor, cond, cross, tolerance),
        make_report("theorem2.proof.monotonicity", descriptor, d_b_only, d_joint, tolerance),
        equality_report("theorem2.proof.rearrangement", descriptor,
                        von_neumann_entropy(rho_ab), rearranged, tolerance),
    ]


def check_theorem3(rho_ab, povm_b, cfg=None, descriptor="", tolerance=OPTIMIZER_TOL):
    """``sup_{M_A} I(α;β) <= H(A) - H(A|β)`` for a fixed POVM on B.

    The left side is the optimizer's lower bound on the supremum, so a pass is
    never produced by the optimizer falling short in the wrong direction.
    """
    res = maximize_mutual_information_given(rho_ab, povm_b, cfg)
    rho_a, _ = marginals(rho_ab)
    rhs = von_neumann_entropy(rho_a) - conditional_entropy_given(rho_ab, povm_b)
    return make_report("theorem3", descriptor, res.value, rhs, tolerance)


def check_mixture_reconstruction(rho_ab, povm_b, descriptor="", tolerance=KLEIN_TOL):
    """``Σ_b Pr{β=b} ρ(A|β=b) = ρ(A)`` (max-entry deviation)."""
    rho_a, _ = marginals(rho_ab)
    mix = np.zeros_like(rho_a.mat)
    for m in povm_b.elements:
        try:
            cond, p = conditional_state(rho_ab, m)
        except ZeroProbabilityError:
            continue
        mix += p * cond.mat
    err = float(np.max(np.abs(mix - rho_a.mat)))
    return make_report("mixture_reconstruction", descriptor, err, 0.0, tolerance)


def check_entropy_defect(rho_ab, povm_b, descriptor="", tolerance=KLEIN_TOL):
    """Entropy defect of the conditional ensemble on A is nonnegative."""
    return make_report("entropy_defect", descriptor, 0.0, entropy_defect(conditional_ensemble(rho_ab, povm_b)), tolerance)


def check_relative_entropy_monotonicity(rho_ab, sigma_ab, descriptor="", tolerance=KLEIN_TOL):
    """``D(Tr_A ρ || Tr_A σ) <= D(ρ || σ)``."""
    _, rho_b = marginals(rho_ab)
    _, sigma_b = marginals(sigma_ab)
    return make_report("relative_entropy_monotonicity", descriptor,
                       relative_entropy(rho_b, sigma_b), relative_entropy(rho_ab, sigma_ab), tolerance)


def check_naimark(rho_ab, povm_b, descriptor="", stats_tol=STATS_TOL, entropy_tol=KLEIN_TOL):
    """Dilated projective statistics and ``H(A|β)`` agree with the POVM's."""
    v, proj = naimark_dilate(povm_b)
    _, rho_b = marginals(rho_ab)
    direct = outcome_distribution(rho_b, povm_b)
    dilated_b = DensityMatrix(v @ rho_b.mat @ v.conj().T)
    stats_err = float(np.max(np.abs(outcome_distribution(dilated_b, proj) - direct)))
    big = dilate_state(rho_ab, v)
    return [
        make_report("naimark.statistics", descriptor, stats_err, 0.0, stats_tol),
        equality_report("naimark.conditional_entropy", descriptor,
                        conditional_entropy_given(big, proj), conditional_entropy_given(rho_ab, povm_b),
                        entropy_tol),
    ]


def random_povm(dim, rng, n_outcomes=None):
    """POVM decoded from Ginibre-random coordinates; ``n_outcomes`` is drawn
    from ``1..dim**2`` when not given."""
    k = int(rng.integers(1, dim * dim + 1)) if n_outcomes is None else n_outcomes
    return Povm(_decode_elements(rng.standard_normal(2 * dim * dim * k), dim, k))


def random_rank_one_povm(dim, rng, n_outcomes=None):
    """POVM with rank-1 elements ``S^{-1/2}|w_k><w_k|S^{-1/2}`` from Ginibre
    vectors ``w_k``; ``n_outcomes`` is drawn from ``dim..dim**2`` when not given."""
    k = int(rng.integers(dim, dim * dim + 1)) if n_outcomes is None else n_outcomes
    w = rng.standard_normal((k, dim)) + 1j * rng.standard_normal((k, dim))
    s = w.T @ w.conj()
    evals, evecs = np.linalg.eigh(s)
    s_inv_sqrt = (evecs / np.sqrt(evals)) @ evecs.conj().T
    v = w @ s_inv_sqrt.T
    return Povm(np.einsum("ki,kj->kij", v, v.conj()))


def random_basis_povm(dim, rng):
    return basis_povm(mk.random_unitary(dim, rng))


def sweep_optimizer_config(seed=42):
    """Cheap optimizer settings for per-state checks inside sweeps."""
    return OptimizerConfig(restarts=1, max_evals=300, random_bases=1, base_seed=seed)


@dataclass(frozen=True)
class SweepConfig:
    count: int = 200
    dims: Tuple[Tuple[int, int], ...] = ((2, 2), (2, 3))
    seed: int = 42
    # when set, replaces every per-check tolerance
    tolerance: Optional[float] = None
    optimizer: Optional[OptimizerConfig] = None

    def __post_init__(self):
        if self.count < 0:
            raise ConfigError(f"count must be >= 0, got {self.count}")
        if not self.dims or any(len(d) != 2 or min(d) < 1 for d in self.dims):
            raise ConfigError(f"dims must be a non-empty list of (d_A, d_B) pairs, got {self.dims}")


@dataclass
class SweepSummary:
    reports: List[CheckReport] = field(default_factory=list)

    @property
    def n_passed(self):
        return sum(r.passed for r in self.reports)

    @property
    def n_failed(self):
        return len(self.reports) - self.n_passed

    def max_margin(self, check_name):
        """Largest observed ``rhs - lhs`` for a check (0 if it never ran)."""
        margins = [r.margin for r in self.reports if r.check_name == check_name]
        return max(margins) if margins else 0.0

    def lines(self):
        return [r.line() for r in self.reports]

    def table(self):
        """Human-readable per-check summary."""
        names = sorted({r.check_name for r in self.reports})
        rows = [f"{'check':<36}{'runs':>6}{'failed':>8}{'min margin':>16}{'max margin':>16}"]
        for name in names:
            rs = [r for r in self.reports if r.check_name == name]
            ms = [r.margin for r in rs]
            rows.append(
                f"{name:<36}{len(rs):>6}{sum(not r.passed for r in rs):>8}"
                f"{format_value(min(ms)):>16}{format_value(max(ms)):>16}"
            )
        rows.append(f"total: {len(self.reports)} checks, {self.n_failed} failed")
        rows.append(f"max theorem2 gap: {format_value(self.max_margin('theorem2'))}")
        rows.append(f"max theorem3 gap: {format_value(self.max_margin('theorem3'))}")
        return "\n".join(rows)


def _tol(cfg, default):
    return default if cfg.tolerance is None else cfg.tolerance


def check_random_state(rho_ab, rng, descriptor, cfg):
    """All per-state checks with freshly drawn POVMs and a comparison state."""
    d_a, d_b = rho_ab.require_split()
    opt = cfg.optimizer or sweep_optimizer_config(cfg.seed)
    povm_a = random_povm(d_a, rng)
    povm_b = random_povm(d_b, rng)
    fine_a = random_rank_one_povm(d_a, rng)
    fine_b = random_rank_one_povm(d_b, rng)
    basis_b = random_basis_povm(d_b, rng)
    sigma = random_density(d_a * d_b, seed=rng, split=(d_a, d_b))
    klein = _tol(cfg, KLEIN_TOL)
    opt_tol = _tol(cfg, OPTIMIZER_TOL)
    out = []
    out += check_lemma1(rho_ab, fine_a, fine_b, descriptor, klein)
    out.append(check_conditional_klein(rho_ab, fine_a, povm_b, descriptor, klein))
    out.append(check_conditional_klein(rho_ab, fine_a, fine_b, descriptor, klein))
    out.append(check_theorem1(rho_ab, opt, descriptor, opt_tol))
    out.append(check_theorem2(rho_ab, povm_b, descriptor, klein))
    out += check_theorem2_proof_steps(rho_ab, basis_b, descriptor, klein)
    out.append(check_theorem3(rho_ab, povm_b, opt, descriptor, opt_tol))
    out.append(check_mixture_reconstruction(rho_ab, povm_b, descriptor, klein))
    out.append(check_entropy_defect(rho_ab, povm_b, descriptor, klein))
    out.append(check_relative_entropy_monotonicity(rho_ab, sigma, descriptor, klein))
    out += check_naimark(rho_ab, povm_b, descriptor, _tol(cfg, STATS_TOL), klein)
    return out


def run_sweep(cfg=None):
    """Random Ginibre states (rank drawn uniformly) cycling through ``cfg.dims``.

    State ``i`` and everything drawn for it come from the generator seeded
    with ``(cfg.seed, i)``, so a sweep is reproducible state by state.
    """
    cfg = SweepConfig() if cfg is None else cfg
    summary = SweepSummary()
    for i in range(cfg.count):
        d_a, d_b = cfg.dims[i % len(cfg.dims)]
        rng = np.random.default_rng((cfg.seed, i))
        rank = int(rng.integers(1, d_a * d_b + 1))
        rho = random_density(d_a * d_b, rank, seed=rng, split=(d_a, d_b))
        descriptor = f"ginibre#{i}:{d_a}x{d_b}:rank{rank}"
        summary.reports += check_random_state(rho, rng, descriptor, cfg)
    return summary


def structured_states(seed=42):
    """Fixed suite: Bell, product, classical-classical and rank-deficient states."""
    rng = np.random.default_rng((seed, 10_000))
    return [
        ("bell", bell_state()),
        ("product:2x2", product_state(random_density(2, seed=rng), random_density(2, seed=rng))),
        ("product:2x3", product_state(random_density(2, seed=rng), random_density(3, seed=rng))),
        ("classical:2x2", classical_state([[0.4, 0.1], [0.1, 0.4]])),
        ("classical:2x3", classical_state([[0.3, 0.1, 0.05], [0.05, 0.2, 0.3]])),
        ("rank1:2x3", random_density(6, 1, seed=rng, split=(2, 3))),
        ("rank2:3x3", random_density(9, 2, seed=rng, split=(3, 3))),
    ]


def run_structured_suite(cfg=None):
    """Checks at computational-basis and eigenbasis measurements on the fixed suite."""
    cfg = SweepConfig() if cfg is None else cfg
    opt = cfg.optimizer or OptimizerConfig(restarts=2, max_evals=2000, base_seed=cfg.seed)
    klein = _tol(cfg, KLEIN_TOL)
    opt_tol = _tol(cfg, OPTIMIZER_TOL)
    summary = SweepSummary()
    for name, rho in structured_states(cfg.seed):
        d_a, d_b = rho.split
        rho_a, rho_b = marginals(rho)
        comp_a, comp_b = computational_povm(d_a), computational_povm(d_b)
        eig_a = basis_povm(mk.hermitian_spectrum(rho_a.mat).eigenvectors)
        eig_b = basis_povm(mk.hermitian_spectrum(rho_b.mat).eigenvectors)
        r = summary.reports
        r += check_lemma1(rho, eig_a, eig_b, name, klein)
        r.append(check_conditional_klein(rho, comp_a, comp_b, name, klein))
        r.append(check_theorem1(rho, opt, name, opt_tol))
        r.append(check_theorem2(rho, comp_b, name, klein))
        r += check_theorem2_proof_steps(rho, comp_b, name, klein)
        r.append(check_theorem3(rho, comp_b, opt, name, opt_tol))
        r.append(check_mixture_reconstruction(rho, comp_b, name, klein))
        r.append(check_entropy_defect(rho, comp_b, name, klein))
    return summary
