"""Estimate a tail index from one heavy-tailed sample.

Draws a Pareto sample, sizes it for several s, and prints Q, Q*, the
estimate 1/Q* and its confidence interval. Run: python3 demos/01_estimate_from_data.py
"""

import numpy as np

import tailratio as tr
from tailratio.order_stats import truncate_to_design

ALPHA = 1.5
N = 2000

x = tr.sample(tr.pareto(ALPHA, 3.0), N, tr.SeedSpec(2024, 0))
print(f"{N} draws from Pareto(alpha={ALPHA}, delta=3)\n")
print(f"{'s':>2} {'n':>5} {'k':>4} {'Q':>8} {'1/Q*':>8} {'95% interval':>20}")
for s in (2, 3, 4, 5):
    # the design needs n = (s+1)k - 1, so drop a few points at random
    sample, dropped = truncate_to_design(x, s, tr.SeedSpec(2024, s))
    est = tr.q_estimator(sample, s=s)
    ci = tr.confidence_interval(sample, est.k, s)
    print(f"{s:>2} {sample.n:>5} {est.k:>4} {est.q:8.4f} {est.alpha_hat:8.4f} "
          f"  [{ci.lower:.4f}, {ci.upper:.4f}]")

# Q estimates 1/alpha, and is exactly unbiased under Pareto
print(f"\ntrue 1/alpha = {1 / ALPHA:.4f}")

# scale does not matter: multiplying the data leaves every estimate unchanged
est = tr.q_estimator(truncate_to_design(x, 2, tr.SeedSpec(2024, 2))[0], s=2)
est_scaled = tr.q_estimator(truncate_to_design(x * 1e6, 2, tr.SeedSpec(2024, 2))[0], s=2)
print(f"alpha_hat, raw vs scaled data: {est.alpha_hat:.12f} {est_scaled.alpha_hat:.12f}")
assert np.isclose(est.alpha_hat, est_scaled.alpha_hat)
