import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.testing import assert_allclose

from povminfo import (
    DensityMatrix,
    DimensionError,
    Povm,
    ValidationError,
    ZeroProbabilityError,
    bell_state,
    classical_conditional_entropy,
    classical_mutual_information,
    classical_state,
    computational_povm,
    conditional_ensemble,
    conditional_entropy_given,
    conditional_state,
    joint_distribution,
    marginals,
    naimark_dilate,
    outcome_distribution,
    product_state,
    random_density,
    shannon_entropy,
    trine_povm,
    von_neumann_entropy,
)
from povminfo.matkernel import random_unitary
from povminfo.measure import basis_povm, dilate_state
from povminfo.verify import random_povm, random_rank_one_povm

seeds = st.integers(0, 2**32 - 1)
dims = st.sampled_from([(2, 2), (2, 3), (3, 2)])


def shannon_oracle(p):
    return -sum(x * math.log2(x) for x in np.ravel(p) if x > 0)


def random_pair(seed, d_a, d_b):
    rng = np.random.default_rng(seed)
    rho = random_density(d_a * d_b, int(rng.integers(1, d_a * d_b + 1)), seed=rng, split=(d_a, d_b))
    return rho, rng


class TestPovm:
    def test_rejects_incomplete(self):
        with pytest.raises(ValidationError, match="identity"):
            Povm([np.diag([1, 0])])

    def test_rejects_negative_element(self):
        with pytest.raises(ValidationError, match="PSD"):
            Povm([np.diag([1.5, 1]), np.diag([-0.5, 0])])

    def test_rejects_non_hermitian(self):
        with pytest.raises(ValidationError, match="Hermitian"):
            Povm([np.array([[1, 0.5], [0, 1]]), np.array([[0, -0.5], [0, 0]])])

    def test_projective_flags(self):
        assert computational_povm(3).is_rank_one_projective()
        assert not trine_povm().is_projective()
        assert Povm([np.eye(2)]).is_projective()
        assert not Povm([np.eye(2)]).is_rank_one_projective()


class TestOutcomeDistribution:
    def test_trivial(self):
        assert_allclose(outcome_distribution(random_density(3, seed=0), Povm([np.eye(3)])), [1.0])

    def test_maximally_mixed(self):
        assert_allclose(outcome_distribution(DensityMatrix(np.eye(2) / 2), computational_povm(2)), [0.5, 0.5])

    def test_trine_matches_trace_oracle(self):
        rho = DensityMatrix(np.diag([0.7, 0.3]))
        trine = trine_povm()
        expected = [np.trace(rho.mat @ m).real for m in trine]
        assert_allclose(outcome_distribution(rho, trine), expected, atol=1e-15)
        # (2/3)(0.7 cos^2(t/2) + 0.3 sin^2(t/2)) at t = 0, 120, 240 degrees
        assert_allclose(outcome_distribution(rho, trine), [0.7 * 2 / 3, 0.8 / 3, 0.8 / 3], atol=1e-15)

    def test_dim_mismatch(self):
        with pytest.raises(DimensionError):
            outcome_distribution(DensityMatrix(np.eye(3) / 3), computational_povm(2))

    @settings(max_examples=40, deadline=None)
    @given(st.integers(1, 4), seeds)
    def test_is_distribution(self, dim, seed):
        rng = np.random.default_rng(seed)
        p = outcome_distribution(random_density(dim, seed=rng), random_povm(dim, rng))
        assert p.min() >= 0
        assert abs(p.sum() - 1) <= 1e-9


class TestJointDistribution:
    def test_product_factorizes(self, rng):
        ra, rb = random_density(2, seed=rng), random_density(3, seed=rng)
        pa, pb = random_povm(2, rng), random_povm(3, rng)
        table = joint_distribution(product_state(ra, rb), pa, pb)
        assert_allclose(table, np.outer(outcome_distribution(ra, pa), outcome_distribution(rb, pb)), atol=1e-10)

    def test_bell_computational(self):
        table = joint_distribution(bell_state(), computational_povm(2), computational_povm(2))
        assert_allclose(table, [[0.5, 0], [0, 0.5]], atol=1e-15)

    def test_matches_trace_oracle(self, rng):
        rho = random_density(4, seed=rng, split=(2, 2))
        pa, pb = random_povm(2, rng, 3), random_povm(2, rng, 4)
        oracle = [[np.trace(rho.mat @ np.kron(ma, mb)).real for mb in pb] for ma in pa]
        assert_allclose(joint_distribution(rho, pa, pb), oracle, atol=1e-14)

    def test_rejects_wrong_side(self):
        with pytest.raises(DimensionError, match="B side"):
            joint_distribution(random_density(6, seed=0, split=(2, 3)), computational_povm(2), computational_povm(2))

    @settings(max_examples=40, deadline=None)
    @given(dims, seeds)
    def test_marginal_consistency(self, dims, seed):
        rho, rng = random_pair(seed, *dims)
        pa, pb = random_povm(dims[0], rng), random_povm(dims[1], rng)
        table = joint_distribution(rho, pa, pb)
        ra, rb = marginals(rho)
        assert_allclose(table.sum(axis=1), outcome_distribution(ra, pa), atol=1e-10)
        assert_allclose(table.sum(axis=0), outcome_distribution(rb, pb), atol=1e-10)


class TestConditionalState:
    def test_product_is_vacuous(self, rng):
        ra, rb = random_density(2, seed=rng), random_density(2, seed=rng)
        m = random_povm(2, rng).elements[0]
        state, p = conditional_state(product_state(ra, rb), m)
        assert_allclose(state.mat, ra.mat, atol=1e-12)
        assert p == pytest.approx(np.trace(rb.mat @ m).real, abs=1e-14)

    def test_bell_steering(self):
        state, p = conditional_state(bell_state(), np.diag([1, 0]))
        assert_allclose(state.mat, np.diag([1, 0]), atol=1e-15)
        assert p == pytest.approx(0.5, abs=1e-15)

    def test_zero_probability(self):
        rho = product_state(DensityMatrix(np.eye(2) / 2), DensityMatrix(np.diag([1.0, 0.0])))
        with pytest.raises(ZeroProbabilityError) as info:
            conditional_state(rho, np.diag([0, 1]))
        assert info.value.probability == 0.0

    def test_ensemble_skips_zero_probability(self):
        rho = classical_state([[0.5, 0.0], [0.5, 0.0]])
        ens = conditional_ensemble(rho, computational_povm(2))
        assert len(ens.states) == 1
        assert_allclose(ens.weights, [1.0])

    def test_mixture_reconstruction_2x3(self, rng):
        rho = random_density(6, seed=rng, split=(2, 3))
        povm = random_povm(3, rng, 4)
        total = 0
        for m in povm:
            state, p = conditional_state(rho, m)
            total = total + p * state.mat
        assert_allclose(total, marginals(rho)[0].mat, atol=1e-9)

    @settings(max_examples=40, deadline=None)
    @given(dims, seeds)
    def test_mixture_reconstruction(self, dims, seed):
        rho, rng = random_pair(seed, *dims)
        ens = conditional_ensemble(rho, random_povm(dims[1], rng))
        assert_allclose(ens.average().mat, marginals(rho)[0].mat, atol=1e-9)


class TestConditionalEntropy:
    def test_product_equals_marginal_entropy(self, rng):
        ra, rb = random_density(2, seed=rng), random_density(3, seed=rng)
        h = conditional_entropy_given(product_state(ra, rb), random_povm(3, rng))
        assert h == pytest.approx(von_neumann_entropy(ra), abs=1e-9)

    def test_bell_rank_one_basis(self, rng):
        assert conditional_entropy_given(bell_state(), basis_povm(random_unitary(2, rng))) == pytest.approx(0, abs=1e-9)

    def test_classical_matches_shannon(self):
        p = np.array([[0.3, 0.1, 0.05], [0.05, 0.2, 0.3]])
        h = conditional_entropy_given(classical_state(p), computational_povm(3))
        oracle = shannon_oracle(p) - shannon_oracle(p.sum(axis=0))
        assert h == pytest.approx(oracle, abs=1e-9)

    def test_zero_probability_contributes_nothing(self):
        rho = product_state(DensityMatrix(np.eye(2) / 2), DensityMatrix(np.diag([1.0, 0.0])))
        assert conditional_entropy_given(rho, computational_povm(2)) == pytest.approx(1.0, abs=1e-12)

    def test_nats(self, classical22):
        h = conditional_entropy_given(classical22, computational_povm(2), base=math.e)
        assert h == pytest.approx(math.log(2) * conditional_entropy_given(classical22, computational_povm(2)))

    @settings(max_examples=40, deadline=None)
    @given(dims, seeds)
    def test_matches_ensemble_sum_and_range(self, dims, seed):
        rho, rng = random_pair(seed, *dims)
        povm = random_povm(dims[1], rng)
        h = conditional_entropy_given(rho, povm)
        ens = conditional_ensemble(rho, povm)
        direct = sum(p * von_neumann_entropy(s) for p, s in zip(ens.weights, ens.states))
        assert h == pytest.approx(direct, abs=1e-9)
        assert -1e-9 <= h <= math.log2(dims[0]) + 1e-9

    @settings(max_examples=40, deadline=None)
    @given(dims, seeds)
    def test_bounded_by_classical_for_rank_one(self, dims, seed):
        rho, rng = random_pair(seed, *dims)
        pa, pb = random_rank_one_povm(dims[0], rng), random_povm(dims[1], rng)
        table = joint_distribution(rho, pa, pb)
        assert conditional_entropy_given(rho, pb) <= classical_conditional_entropy(table) + 1e-9

    def test_commuting_eigenbasis_equality(self):
        p = np.array([[0.3, 0.1, 0.05], [0.05, 0.2, 0.3]])
        rho = classical_state(p)
        pb = computational_povm(3)
        table = joint_distribution(rho, computational_povm(2), pb)
        assert classical_conditional_entropy(table) == pytest.approx(conditional_entropy_given(rho, pb), abs=1e-9)


class TestShannon:
    @pytest.mark.parametrize("p,h", [([1], 0), ([0.5, 0.5], 1), ([0.5, 0.25, 0.25], 1.5), ([0.5, 0, 0.5], 1)])
    def test_values(self, p, h):
        assert shannon_entropy(p) == pytest.approx(h, abs=1e-12)


class TestMutualInformation:
    def test_product(self):
        assert classical_mutual_information(np.outer([0.3, 0.7], [0.2, 0.5, 0.3])) == pytest.approx(0, abs=1e-12)

    def test_perfect_correlation(self):
        assert classical_mutual_information([[0.5, 0], [0, 0.5]]) == pytest.approx(1, abs=1e-12)

    def test_formula_oracle(self):
        t = np.array([[0.4, 0.1], [0.1, 0.4]])
        oracle = sum(t[a, b] * math.log2(t[a, b] / (0.5 * 0.5)) for a in range(2) for b in range(2))
        assert classical_mutual_information(t) == pytest.approx(oracle, abs=1e-12)
        assert oracle == pytest.approx(0.2781, abs=1e-4)

    @settings(max_examples=60, deadline=None)
    @given(st.integers(1, 4), st.integers(1, 4), seeds)
    def test_bounds_and_symmetry(self, n, m, seed):
        t = np.random.default_rng(seed).dirichlet(np.ones(n * m)).reshape(n, m)
        mi = classical_mutual_information(t)
        assert mi >= -1e-9
        assert mi <= min(shannon_entropy(t.sum(axis=1)), shannon_entropy(t.sum(axis=0))) + 1e-9
        assert mi == pytest.approx(classical_mutual_information(t.T), abs=1e-12)


class TestNaimark:
    def test_isometry_and_projectors(self):
        v, proj = naimark_dilate(trine_povm())
        assert v.shape == (6, 2)
        assert_allclose(v.conj().T @ v, np.eye(2), atol=1e-9)
        assert proj.is_projective()

    def test_trine_statistics_on_100_states(self):
        v, proj = naimark_dilate(trine_povm())
        for seed in range(100):
            rho = random_density(2, seed=seed)
            dilated = DensityMatrix(v @ rho.mat @ v.conj().T)
            assert_allclose(outcome_distribution(dilated, proj), outcome_distribution(rho, trine_povm()), atol=1e-10)

    def test_projective_input(self, rng):
        povm = computational_povm(3)
        v, proj = naimark_dilate(povm)
        rho = random_density(3, seed=rng)
        assert_allclose(outcome_distribution(DensityMatrix(v @ rho.mat @ v.conj().T), proj),
                        np.diag(rho.mat).real, atol=1e-12)

    def test_uninformative(self, rng):
        v, proj = naimark_dilate(Povm([np.eye(2) / 2, np.eye(2) / 2]))
        for _ in range(5):
            rho = random_density(2, seed=rng)
            assert_allclose(outcome_distribution(DensityMatrix(v @ rho.mat @ v.conj().T), proj), [0.5, 0.5], atol=1e-12)

    @settings(max_examples=40, deadline=None)
    @given(dims, seeds)
    def test_joint_statistics_preserved(self, dims, seed):
        rho, rng = random_pair(seed, *dims)
        pa, pb = random_povm(dims[0], rng), random_povm(dims[1], rng)
        v, proj = naimark_dilate(pb)
        ext = dilate_state(rho, v)
        assert_allclose(joint_distribution(ext, pa, proj), joint_distribution(rho, pa, pb), atol=1e-10)
        assert conditional_entropy_given(ext, proj) == pytest.approx(conditional_entropy_given(rho, pb), abs=1e-9)
