"""Large-sample variance of the log-ratio beyond the Pareto case.

For any distribution with a positive density at its 1/(s+1) and s/(s+1)
quantiles, sqrt(n) times the centred log-ratio is asymptotically normal
with a variance V that depends on the density there. This script checks
V by simulation for three models. Run: python3 demos/03_asymptotic_variance.py
"""

import math

import tailratio as tr
from tailratio.asymptotics import delta_method_variance
from tailratio.montecarlo import ExperimentPlan, run_plan

K, S, REPS = 1000, 2, 4000
n = (S + 1) * K - 1

print(f"k={K}, s={S}, n={n}, {REPS} replicates\n")
print(f"{'model':<28} {'V (formula)':>12} {'V (delta)':>12} {'simulated':>10}")
for model in (tr.pareto(1.0), tr.frechet(1.0), tr.loglogistic(1.0), tr.exponential(1.0)):
    av = tr.theorem1_variance(model, S)
    plan = ExperimentPlan(model, (S,), k_max=K, replicates=REPS,
                          estimators=("LogRatio",), k_values=(K,), keep_raw=True)
    t = math.sqrt(n) * (run_plan(plan).values(S, K, "LogRatio") - av.center)
    print(f"{str(model):<28} {av.v:12.4f} {delta_method_variance(model, S):12.4f} "
          f"{t.var():10.4f}")

print("\nPareto limit variances (log-ratio, alpha*Q, alpha*Q*) for alpha=1:")
for s in (2, 3, 4, 5):
    v = tr.pareto_limit_variances(s, 1.0)
    print(f"  s={s}: " + "  ".join(f"{x:.4f}" for x in v))
