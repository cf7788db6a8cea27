"""End-to-end acceptance checks, one test per criterion.

Run with ``pytest tests/test_acceptance.py -s`` to see each line as it
completes; a summary is printed at the end of any run.
"""

import csv
import itertools
import math
import time

import numpy as np
import pytest

from tailratio import distributions as d
from tailratio.asymptotics import pareto_limit_variances, theorem1_variance
from tailratio.cli import main
from tailratio.exact_law import ExactLaw, chebyshev_bound, exact_moments
from tailratio.montecarlo import ExperimentPlan, compare, coverage_experiment, ks_gof, run_plan
from tailratio.special import reg_incomplete_beta, std_normal_cdf, std_normal_quantile

import oracles

pytestmark = pytest.mark.slow


@pytest.fixture(scope="module")
def unbiasedness_runs():
    """Q at k = 10 for every (alpha, s), 10^5 replicates each."""
    out = {}
    t0 = time.perf_counter()
    for alpha in (0.3, 1.0, 1.5):
        plan = ExperimentPlan(d.pareto(alpha), (2, 3, 5), k_max=10, replicates=10**5,
                              estimators=("Q",), k_values=(10,), keep_raw=True)
        res = run_plan(plan)
        for s in plan.s_list:
            out[(alpha, s)] = res.values(s, 10, "Q")
    return out, time.perf_counter() - t0


def test_c01_exact_unbiasedness(unbiasedness_runs, criterion):
    runs, elapsed = unbiasedness_runs
    worst = 0.0
    for (alpha, s), q in runs.items():
        _, var = exact_moments(ExactLaw.q(10, s, alpha))
        z = abs(q.mean() - 1 / alpha) / math.sqrt(var / q.size)
        worst = max(worst, z)
    criterion(1, worst <= 4 and elapsed <= 120,
              f"max |mean(Q) - 1/alpha| = {worst:.2f} SE (limit 4), {elapsed:.0f}s")


def test_c02_exact_variance(unbiasedness_runs, criterion):
    runs, _ = unbiasedness_runs
    worst = 0.0
    for (alpha, s), q in runs.items():
        _, var = exact_moments(ExactLaw.q(10, s, alpha))
        worst = max(worst, abs(q.var(ddof=1) / var - 1))
    criterion(2, worst <= 0.02, f"max relative variance error {worst:.4f} (limit 0.02)")


def test_c03_law_identity(criterion):
    t0 = time.perf_counter()
    pvals = []
    for k, s, alpha in ((2, 2, 1.0), (5, 3, 0.5), (20, 5, 1.5)):
        plan = ExperimentPlan(d.pareto(alpha), (s,), k_max=k, replicates=10**4,
                              estimators=("LogRatio",), k_values=(k,), keep_raw=True)
        q_star = run_plan(plan).values(s, k, "LogRatio") / math.log(s)
        law = ExactLaw.q_star(k, s, alpha)
        pvals.append(ks_gof(q_star, law.cdf)[1])
    quad_err = 0.0
    for k, s, alpha in ((2, 2, 1.0), (5, 3, 0.5), (20, 5, 1.5)):
        law = ExactLaw.q_star(k, s, alpha)
        mean, var = exact_moments(law)
        for x in np.linspace(0, mean + 8 * math.sqrt(var), 51)[1:]:
            ref = oracles.quad_on(law.pdf, 0, x, mean)
            quad_err = max(quad_err, abs(law.cdf(x) - ref))
    elapsed = time.perf_counter() - t0
    ok = min(pvals) >= 0.01 and quad_err <= 1e-7 and elapsed <= 60
    criterion(3, ok, f"KS p-values {[round(p, 3) for p in pvals]}, "
                     f"cdf vs quadrature {quad_err:.1e}, {elapsed:.0f}s")


def test_c04_asymptotic_variance(criterion):
    t0 = time.perf_counter()
    k, s = 2000, 2
    n = (s + 1) * k - 1
    plan = ExperimentPlan(d.pareto(1.0), (s,), k_max=k, replicates=10**4,
                          estimators=("LogRatio",), k_values=(k,), keep_raw=True)
    lr = run_plan(plan).values(s, k, "LogRatio")
    t = math.sqrt(n) * (lr - math.log(s))
    v_limit = pareto_limit_variances(s, 1.0)[0]
    rel = abs(t.var(ddof=1) / v_limit - 1)
    _, p = ks_gof(t / math.sqrt(v_limit), std_normal_cdf)
    elapsed = time.perf_counter() - t0
    criterion(4, rel <= 0.10 and p >= 0.01 and elapsed <= 120,
              f"variance {t.var(ddof=1):.4f} vs 1.5 (rel {rel:.3f}), "
              f"normality p = {p:.3f}, {elapsed:.0f}s")


def test_c05_ci_coverage(criterion):
    t0 = time.perf_counter()
    plan = ExperimentPlan(d.pareto(1.0), (2,), k_max=500, replicates=5000, level=0.95)
    cov = coverage_experiment(plan)
    elapsed = time.perf_counter() - t0
    criterion(5, 0.93 <= cov <= 0.97 and elapsed <= 60,
              f"coverage {cov:.4f} in [0.93, 0.97], {elapsed:.0f}s")


def test_c06_general_variance(criterion):
    k, s = 2000, 2
    n = (s + 1) * k - 1
    details, ok = [], True
    for model in (d.frechet(1.0), d.loglogistic(1.0)):
        av = theorem1_variance(model, s)
        plan = ExperimentPlan(model, (s,), k_max=k, replicates=10**4,
                              estimators=("LogRatio",), k_values=(k,), keep_raw=True)
        t = math.sqrt(n) * (run_plan(plan).values(s, k, "LogRatio") - av.center)
        rel = abs(t.var(ddof=1) / av.v - 1)
        ok &= rel <= 0.15
        details.append(f"{model}: {t.var(ddof=1):.4f} vs V={av.v:.4f}")
    gap = max(
        abs(theorem1_variance(d.pareto(a, delta), s).v - pareto_limit_variances(s, a)[0])
        for a, s, delta in itertools.product((0.3, 0.5, 1.0, 1.5), (2, 3, 4, 5), (0.5, 1, 9))
    )
    ok &= gap <= 1e-12
    criterion(6, ok, "; ".join(details) + f"; Pareto path gap {gap:.1e}")


def test_c07_figure_replication(tmp_path, criterion):
    t0 = time.perf_counter()
    assert main(["figures", "--defaults", "--out-dir", str(tmp_path)]) == 0
    elapsed = time.perf_counter() - t0
    worst_bias, worst_ratio, ok = 0.0, 0.0, elapsed <= 300
    files = sorted(tmp_path.glob("figure_alpha_*.csv"))
    ok &= len(files) == 4
    for alpha in (0.3, 0.5, 1.0, 1.5):
        with open(tmp_path / f"figure_alpha_{alpha:g}.csv", encoding="utf-8") as fh:
            rows = list(csv.DictReader(fh))
        ok &= len(rows) == 4 * 500
        by = {(int(r["s"]), int(r["k"])): r for r in rows}
        for s in (2, 3, 4, 5):
            rel = abs(float(by[(s, 500)]["avg_inv_qstar"]) / alpha - 1)
            worst_bias = max(worst_bias, rel)

            def hw(k):
                r = by[(s, k)]
                return 0.5 * (float(r["ci_upper"]) - float(r["ci_lower"]))

            worst_ratio = max(worst_ratio, abs(hw(125) / hw(500) / 2 - 1))
    ok &= worst_bias <= 0.05 and worst_ratio <= 0.15
    criterion(7, ok, f"max |avg 1/Q* / alpha - 1| at k=500: {worst_bias:.4f}; "
                     f"half-width ratio 125:500 off 2 by {worst_ratio:.3f}; {elapsed:.0f}s")


def test_c08_chebyshev(criterion):
    plan = ExperimentPlan(d.pareto(1.0), (2, 3), k_max=20, replicates=10**5,
                          estimators=("LogRatio",), k_values=(2, 20), keep_raw=True)
    res = run_plan(plan)
    worst_margin = -math.inf
    for k, s in itertools.product((2, 20), (2, 3)):
        lr = res.values(s, k, "LogRatio")
        q_law, q_star_law = ExactLaw.q(k, s, 1.0), ExactLaw.q_star(k, s, 1.0)
        for law, values in ((q_law, lr / q_law.scale), (q_star_law, lr / q_star_law.scale)):
            for eps in (0.1, 0.5, 1.0):
                freq = float(np.mean(np.abs(values - 1.0) > eps))
                bound = min(1.0, chebyshev_bound(law, eps))
                worst_margin = max(worst_margin, freq - bound)
    criterion(8, worst_margin <= 0,
              f"max (exceedance - bound) over 24 cases: {worst_margin:.4f} (must be <= 0)")


def test_c09_baseline_comparison(criterion):
    est = ("QStar", "Hill", "THill", "Pickands", "Moment")
    a = compare(1.0, 1499, replicates=100, estimators=est)
    b = compare(1.0, 1499, replicates=100, estimators=est)
    best = [r for r in a if r["kind"] == "best_k"]
    have = {r["estimator"] for r in best}
    finite = all(math.isfinite(r["rmse"]) for r in best)
    for r in best:
        print(f"    best-k {r['estimator']:8s} s={str(r['s']):2s} k={r['k']:5d} "
              f"rmse={r['rmse']:.4f}")
    criterion(9, a == b and have == set(est) and finite,
              f"deterministic table, {len(a)} rows, best-k rows for {sorted(have)}")


def test_c10_special_function_oracles(criterion):
    rng = np.random.default_rng(20170823)
    beta_err = 0.0
    for _ in range(100):
        x = rng.uniform(0.001, 0.999)
        a, b = rng.uniform(0.5, 30.0, size=2)
        beta_err = max(beta_err, abs(reg_incomplete_beta(x, a, b)
                                     - oracles.incomplete_beta_quad(x, a, b)))
    q_err = 0.0
    for p in np.linspace(0.0015, 0.9985, 200):
        q_err = max(q_err, abs(oracles.normal_cdf_series(std_normal_quantile(p)) - p))
    criterion(10, beta_err <= 1e-8 and q_err <= 1e-9,
              f"incomplete beta {beta_err:.1e} (limit 1e-8), "
              f"normal quantile round trip {q_err:.1e} (limit 1e-9)")
