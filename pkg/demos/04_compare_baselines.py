"""Q* against Hill, t-Hill, Pickands and the moment estimator.

All estimators see the same Pareto(1) samples of size n. For each one we
report the RMSE at its best k (chosen with knowledge of the truth, so this
favours every method equally) and at a few fixed k.
Run: python3 demos/04_compare_baselines.py [n]
"""

import sys

from tailratio.montecarlo import compare

n = int(sys.argv[1]) if len(sys.argv) > 1 else 299
rows = compare(1.0, n, replicates=200)

print(f"Pareto(alpha=1), n={n}, 200 replicates: best-k RMSE for alpha\n")
for r in sorted((r for r in rows if r["kind"] == "best_k"), key=lambda r: r["rmse"]):
    label = r["estimator"] + (f" s={r['s']}" if r["s"] != "" else "")
    print(f"  {label:<12} k={r['k']:<5} bias={r['bias']:+.4f}  rmse={r['rmse']:.4f}")

print("\nRMSE along k for Hill and Q* (s=2):")
traj = {(r["estimator"], r["s"], r["k"]): r["rmse"] for r in rows if r["kind"] == "trajectory"}
k_q = (n + 1) // 3
for k in sorted({max(1, k_q // 8), k_q // 4, k_q // 2, k_q}):
    hill = traj.get(("Hill", "", k), float("nan"))
    qs = traj.get(("QStar", 2, k), float("nan"))
    print(f"  k={k:<5} Hill {hill:.4f}   Q* {qs:.4f}")
