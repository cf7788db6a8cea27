"""The exact finite-sample law of Q* under Pareto data.

Compares simulated Q* values with the closed-form CDF and shows how the
mean and variance behave as k grows. Run: python3 demos/02_exact_law.py
"""

import math

import numpy as np

import tailratio as tr
from tailratio.estimators import batch_log_ratio
from tailratio.exact_law import chebyshev_bound, exact_moments
from tailratio.montecarlo import ks_gof

K, S, ALPHA, REPS = 5, 3, 0.8, 20_000
law = tr.ExactLaw.q_star(K, S, ALPHA)
n = (S + 1) * K - 1

draws = np.array([tr.sample(tr.pareto(ALPHA), n, tr.SeedSpec(7, r)) for r in range(REPS)])
q_star = batch_log_ratio(draws, K, S) / math.log(S)

mean, var = exact_moments(law)
print(f"Q* with k={K}, s={S}, alpha={ALPHA} (n={n})")
print(f"  exact mean {mean:.5f}   simulated {q_star.mean():.5f}")
print(f"  exact var  {var:.5f}   simulated {q_star.var():.5f}")
D, p = ks_gof(q_star, law.cdf)
print(f"  KS distance {D:.4f}, p-value {p:.3f}")

print("\n  x     exact CDF   empirical")
for x in (0.5, 1.0, 1.25, 2.0, 3.0):
    print(f"  {x:<5} {law.cdf(x):.5f}     {np.mean(q_star <= x):.5f}")

# bias of Q* is (H_{ks-1} - H_{k-1})/log s - 1, vanishing like 1/k
print("\n   k   mean(Q*) - 1/alpha   var(Q*)    P(|Q* - 1/alpha| > 0.1) <=")
for k in (1, 10, 100, 1000, 10_000):
    m, v = exact_moments(tr.ExactLaw.q_star(k, 2, 1.0))
    b = min(1.0, chebyshev_bound(tr.ExactLaw.q_star(k, 2, 1.0), 0.1))
    print(f"{k:>6} {m - 1:18.2e} {v:10.2e} {b:12.4f}")
