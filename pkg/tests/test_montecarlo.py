import math

import numpy as np
import pytest

from tailratio import distributions as d
from tailratio.errors import DomainError, EmptySample
from tailratio.estimators import q_estimator
from tailratio.exact_law import ExactLaw, exact_moments
from tailratio.montecarlo import (
    CHUNK_SIZE,
    ExperimentPlan,
    compare,
    coverage_experiment,
    figure_grid,
    ks_gof,
    run_plan,
    summarize,
    tail_index,
)


def test_single_replicate_identity():
    model = d.pareto(1.3, 2.0)
    plan = ExperimentPlan(model, (2, 3), k_max=7, replicates=1, master_seed=11,
                          estimators=("Q", "QStar", "LogRatio"), keep_raw=True)
    res = run_plan(plan)
    for s in (2, 3):
        x = d.sample(model, plan.sample_size(s), d.SeedSpec(11, 0))
        est = q_estimator(x, 7, s)
        assert res.values(s, 7, "Q")[0] == est.q
        assert res.values(s, 7, "LogRatio")[0] == est.log_ratio
        assert res.values(s, 7, "QStar")[0] == pytest.approx(est.alpha_hat, rel=1e-15)
        # smaller k uses the prefix of the same replicate
        est3 = q_estimator(x[: (s + 1) * 3 - 1], 3, s)
        assert res.values(s, 3, "Q")[0] == est3.q


def test_thread_count_does_not_change_output():
    plan = dict(model=d.frechet(1.0), s_list=(2, 3), k_max=12,
                replicates=2 * CHUNK_SIZE + 37, master_seed=5,
                estimators=("Q", "QStar", "Hill", "Pickands"))
    one = run_plan(ExperimentPlan(**plan, threads=1))
    many = run_plan(ExperimentPlan(**plan, threads=8))
    assert one.to_csv() == many.to_csv()


def test_rmse_identity():
    plan = ExperimentPlan(d.pareto(1.0), (2, 5), k_max=30, replicates=300,
                          estimators=("Q", "QStar", "Hill", "THill", "Moment"))
    for c in run_plan(plan).cells:
        if c.count:
            assert c.rmse**2 == pytest.approx(c.bias**2 + c.variance, rel=1e-9, abs=1e-15)
            assert 0.0 <= c.variance


def test_summarize():
    m, missing, mean, bias, var, rmse = summarize([1.0, 3.0, math.nan], 1.0)
    assert (m, missing, mean, bias, var) == (2, 1, 2.0, 1.0, 1.0)
    assert rmse == pytest.approx(math.sqrt(2))
    assert summarize([math.nan], 0.0)[0:2] == (0, 1)


def test_missing_cells_are_counted():
    # alpha so small that most draws overflow to inf, giving inf/inf ratios
    plan = ExperimentPlan(d.pareto(0.001), (2,), k_max=3, replicates=50,
                          estimators=("Q",))
    res = run_plan(plan)
    assert any(c.missing > 0 for c in res.cells)
    for c in res.cells:
        assert c.count + c.missing == 50


def test_q_mean_unbiased_small():
    law = ExactLaw.q(10, 2, 1.0)
    _, var = exact_moments(law)
    reps = 20_000
    plan = ExperimentPlan(d.pareto(1.0), (2,), k_max=10, replicates=reps,
                          estimators=("Q",), k_values=(10,))
    c = run_plan(plan).cell(2, 10, "Q")
    assert abs(c.mean - 1.0) <= 4 * math.sqrt(var / reps)


def test_targets():
    plan = ExperimentPlan(d.pareto(2.0), (3,), k_max=2, replicates=1,
                          estimators=("LogRatio", "Q", "QStar", "Hill"))
    assert plan.target("Q", 3) == 0.5
    assert plan.target("QStar", 3) == 2.0
    assert plan.target("Hill", 3) == 2.0
    assert plan.target("LogRatio", 3) == pytest.approx(math.log(3) / 2)
    assert math.isnan(tail_index(d.exponential(1.0)))


def test_plan_validation():
    with pytest.raises(DomainError):
        ExperimentPlan(d.pareto(1.0), (1,), k_max=3, replicates=1)
    with pytest.raises(DomainError):
        ExperimentPlan(d.pareto(1.0), (2,), k_max=3, replicates=0)
    with pytest.raises(DomainError):
        ExperimentPlan(d.pareto(1.0), (2,), k_max=3, replicates=1, estimators=("Nope",))


class TestKS:
    def test_point_mass_at_median(self):
        D, _ = ks_gof(np.full(1000, 0.5), lambda x: np.clip(x, 0, 1))
        assert D == pytest.approx(0.5, abs=1e-12)

    def test_single_point(self):
        D, _ = ks_gof([0.5], lambda x: x)
        assert D == 0.5

    def test_scalar_cdf_fallback(self):
        D, _ = ks_gof([0.5], lambda x: min(max(x, 0.0), 1.0))
        assert D == 0.5

    def test_empty(self):
        with pytest.raises(EmptySample):
            ks_gof([], lambda x: x)

    def test_calibrated_under_null(self):
        passes = 0
        for seed in range(100):
            u = d.open_uniforms(d.SeedSpec(777, seed), 10_000)
            passes += ks_gof(u, lambda x: x)[1] >= 0.01
        assert passes >= 98


def test_coverage_at_half_level():
    plan = ExperimentPlan(d.pareto(1.0), (2,), k_max=500, replicates=2000, level=0.5,
                          estimators=("QStar",))
    assert abs(coverage_experiment(plan) - 0.5) <= 0.03


def test_coverage_needs_single_s():
    with pytest.raises(DomainError):
        coverage_experiment(ExperimentPlan(d.pareto(1.0), (2, 3), k_max=5, replicates=2))


def test_figure_grid_shape_and_interval():
    rows = figure_grid((0.5, 1.0), (2, 3), k_max=10, replicates=5)
    assert len(rows) == 2 * 2 * 10
    for r in rows:
        assert r.ci_lower < r.avg_inv_qstar < r.ci_upper
        assert r.half_width == pytest.approx(r.ci_upper - r.avg_inv_qstar)
    assert rows == figure_grid((0.5, 1.0), (2, 3), k_max=10, replicates=5)


def test_weak_consistency_of_log_ratio():
    ks = (50, 200, 800)
    plan = ExperimentPlan(d.pareto(1.0), (2,), k_max=800, replicates=10_000,
                          estimators=("LogRatio",), k_values=ks, keep_raw=True)
    res = run_plan(plan)
    freq = [np.mean(np.abs(res.values(2, k, "LogRatio") - math.log(2)) > 0.05) for k in ks]
    assert freq[0] > freq[1] > freq[2]
    assert freq[2] < 0.05


def test_compare_is_deterministic():
    a = compare(1.0, 29, replicates=20)
    b = compare(1.0, 29, replicates=20)
    assert a == b
    best = {(r["estimator"], r["s"]) for r in a if r["kind"] == "best_k"}
    assert {("QStar", 2), ("QStar", 4), ("QStar", 5)} <= best
    assert {"Hill", "THill", "Pickands", "Moment"} <= {e for e, _ in best}
    with pytest.raises(DomainError):
        compare(1.0, 30, replicates=2, estimators=("QStar",))
