"""Acceptance gate: one test and one printed PASS/FAIL line per criterion.

Run alone with ``pytest tests/test_acceptance.py -v`` (lines appear in the
terminal summary) or ``python tests/test_acceptance.py``.
"""

import functools
import io

import numpy as np
import pytest

from povminfo import (
    OptimizerConfig,
    bell_state,
    classical_conditional_entropy,
    classical_mutual_information,
    classical_state,
    computational_povm,
    conditional_entropy_given,
    marginals,
    maximize_mutual_information,
    minimize_conditional_entropy,
    naimark_dilate,
    outcome_distribution,
    product_state,
    random_density,
    von_neumann_entropy,
)
from povminfo.cli import main
from povminfo.measure import dilate_state
from povminfo.optimize import evaluate_result
from povminfo.verify import (
    SweepConfig,
    check_theorem2,
    check_theorem3,
    random_povm,
    run_sweep,
)

from golden.regenerate import CASES, HERE as GOLDEN, render

# reduced search for the many-state suites; the full default runs in criterion 1
SUITE_CFG = OptimizerConfig(restarts=2, max_evals=1500)

RESULTS = {}


def record(n, ok, detail):
    RESULTS[n] = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}"
    return ok


@functools.lru_cache(maxsize=None)
def bell_results():
    rho = bell_state()
    return rho, [minimize_conditional_entropy(rho), maximize_mutual_information(rho)]


@functools.lru_cache(maxsize=None)
def product_results():
    out = []
    for seed in range(20):
        rng = np.random.default_rng((2, seed))
        d_b = 2 + seed % 2
        rho = product_state(random_density(2, seed=rng), random_density(d_b, seed=rng))
        cfg = OptimizerConfig(restarts=SUITE_CFG.restarts, max_evals=SUITE_CFG.max_evals, base_seed=seed)
        out.append((rho, minimize_conditional_entropy(rho, cfg), maximize_mutual_information(rho, cfg)))
    return out


@functools.lru_cache(maxsize=None)
def classical_results():
    out = []
    for d_b in (2, 3):
        for seed in range(10):
            p = np.random.default_rng((3, d_b, seed)).dirichlet(np.ones(2 * d_b)).reshape(2, d_b)
            rho = classical_state(p)
            cfg = OptimizerConfig(restarts=SUITE_CFG.restarts, max_evals=SUITE_CFG.max_evals, base_seed=seed)
            out.append((p, rho, minimize_conditional_entropy(rho, cfg), maximize_mutual_information(rho, cfg)))
    return out


def test_criterion_1_bell():
    rho, (cmin, cmax) = bell_results()
    h = [von_neumann_entropy(rho), *(von_neumann_entropy(m) for m in marginals(rho))]
    t2 = check_theorem2(rho, computational_povm(2))
    ok = (
        abs(h[0]) <= 1e-9 and abs(h[1] - 1) <= 1e-9 and abs(h[2] - 1) <= 1e-9
        and cmin.value <= 1e-6
        and 0.999 <= cmax.value <= 1 + 1e-9
        and abs(t2.margin - 1) <= 1e-6
    )
    assert record(1, ok, f"H(A,B)={h[0]:.3e} H(A)={h[1]:.12f} H(B)={h[2]:.12f} "
                         f"min={cmin.value:.3e} max={cmax.value:.12f} thm2 margin={t2.margin:.12f}")


def test_criterion_2_product():
    worst_c = worst_i = 0.0
    for rho, cmin, cmax in product_results():
        worst_c = max(worst_c, abs(cmin.value - von_neumann_entropy(marginals(rho)[0])))
        worst_i = max(worst_i, cmax.value)
    ok = worst_c <= 1e-6 and worst_i <= 1e-6
    assert record(2, ok, f"20 seeds, max |H(A|B)-H(A)|={worst_c:.3e}, max I={worst_i:.3e}")


def test_criterion_3_classical():
    worst = np.zeros(4)
    for p, rho, cmin, cmax in classical_results():
        comp_b = computational_povm(p.shape[1])
        t2 = check_theorem2(rho, comp_b)
        t3 = check_theorem3(rho, comp_b, SUITE_CFG)
        worst = np.maximum(worst, [
            abs(cmin.value - classical_conditional_entropy(p)),
            abs(cmax.value - classical_mutual_information(p)),
            abs(t2.margin),
            abs(t3.margin),
        ])
    ok = worst[0] <= 1e-4 and worst[1] <= 1e-3 and worst[2] <= 1e-6 and worst[3] <= 1e-6
    assert record(3, ok, f"20 tables, max errors H={worst[0]:.3e} I={worst[1]:.3e} "
                         f"thm2={worst[2]:.3e} thm3={worst[3]:.3e}")


def test_criterion_4_random_sweep():
    summary = run_sweep(SweepConfig())
    checks = len({r.check_name for r in summary.reports})
    ok = summary.n_failed == 0 and len(summary.reports) > 0
    assert record(4, ok, f"200 states, {len(summary.reports)} checks across {checks} kinds, "
                         f"{summary.n_failed} failed")


def test_criterion_5_naimark():
    worst_stats = worst_h = 0.0
    for i in range(100):
        rng = np.random.default_rng((5, i))
        d_a, d_b = ((2, 2), (2, 3))[i % 2]
        rho = random_density(d_a * d_b, int(rng.integers(1, d_a * d_b + 1)), seed=rng, split=(d_a, d_b))
        povm = random_povm(d_b, rng)
        v, proj = naimark_dilate(povm)
        rho_b = marginals(rho)[1]
        dilated_b = v @ rho_b.mat @ v.conj().T
        direct = outcome_distribution(rho_b, povm)
        via = np.array([np.trace(dilated_b @ m).real for m in proj])
        worst_stats = max(worst_stats, float(np.max(np.abs(via - direct))))
        worst_h = max(worst_h, abs(conditional_entropy_given(dilate_state(rho, v), proj)
                                   - conditional_entropy_given(rho, povm)))
    ok = worst_stats <= 1e-10 and worst_h <= 1e-9
    assert record(5, ok, f"100 pairs, max stats error={worst_stats:.3e}, max H(A|beta) error={worst_h:.3e}")


def test_criterion_6_optimizer_sanity():
    monotone = True
    for seed in range(10):
        rho = random_density(4, seed=600 + seed, split=(2, 2))
        vals = [minimize_conditional_entropy(
            rho, OptimizerConfig(restarts=r, max_evals=300, random_bases=1, base_seed=seed)).value
            for r in (1, 2, 3)]
        monotone &= vals[0] >= vals[1] >= vals[2]
    produced = [(bell_results()[0], r) for r in bell_results()[1]]
    produced += [(rho, r) for rho, *rs in product_results() for r in rs]
    produced += [(rho, r) for _, rho, *rs in classical_results() for r in rs]
    worst = max(abs(evaluate_result(rho, r) - r.value) for rho, r in produced)
    ok = monotone and worst <= 1e-9
    assert record(6, ok, f"monotone restarts on 10 runs: {monotone}; "
                         f"{len(produced)} results, max re-evaluation error={worst:.3e}")


def test_criterion_7_cli_determinism(tmp_path):
    reports = []
    for k in range(2):
        path = tmp_path / f"report{k}.txt"
        code = main(["verify", "--count", "20", "--report", str(path)], out=io.StringIO())
        reports.append((code, path.read_bytes()))
    same = reports[0] == reports[1] and reports[0][0] == 0 and len(reports[0][1]) > 0
    mismatched = [name for name in sorted(CASES) if render(CASES[name]) != (GOLDEN / f"{name}.txt").read_text()]
    ok = same and not mismatched
    assert record(7, ok, f"verify reports identical: {same}; golden files {len(CASES) - len(mismatched)}"
                         f"/{len(CASES)} match")


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q"]))
