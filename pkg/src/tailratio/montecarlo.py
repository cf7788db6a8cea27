"""Replication engine for simulation studies.

Replicate ``r`` of a plan always draws from the random stream
``SeedSpec(master_seed, r)``. Replicates are processed in fixed-size chunks
whose results are merged in replicate order, so the output does not depend
on the number of worker threads.
"""

from __future__ import annotations

import csv
import io
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields

import numpy as np

from . import baselines
from .distributions import Family, SeedSpec, TailModel, open_uniforms, pareto
from .asymptotics import limit_center
from .errors import DomainError, EmptySample
from .estimators import batch_log_ratio, ci_half_width_factor, q_denominator
from .special import kolmogorov_sf

DEFAULT_SEED = 20170823
CHUNK_SIZE = 256
THREADS_ENV = "TAILRATIO_THREADS"

RATIO_ESTIMATORS = ("LogRatio", "Q", "QStar")
BASELINE_ESTIMATORS = tuple(m.value for m in baselines.Method)
ESTIMATORS = RATIO_ESTIMATORS + BASELINE_ESTIMATORS

# What each estimator's reported value estimates:
#   LogRatio -> log(F^{<-}(s/(s+1)) / F^{<-}(1/(s+1)))   (raw log-ratio)
#   Q        -> 1/alpha                                   (Q itself)
#   QStar    -> alpha                                     (reported as 1/Q*)
#   baselines-> alpha                                     (1/gamma_hat)
_COVER = "QStar:covers"


def default_threads() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def tail_index(model: TailModel) -> float:
    """Index of regular variation of the model's right tail, NaN if light-tailed."""
    if model.family in (Family.PARETO, Family.FRECHET, Family.LOGLOGISTIC):
        return model.params[0]
    return math.nan


@dataclass(frozen=True)
class ExperimentPlan:
    """Configuration of one simulation grid.

    For each ``s`` every replicate is a sample of size ``(s+1) * k_max - 1``.
    Ratio estimators at a given ``k`` use the first ``(s+1)k - 1`` draws of
    the replicate. Baselines use the whole sample, with ``k`` the number of
    upper order statistics; their k-grid is `baseline_k_values` (default: all
    feasible k).
    """

    model: TailModel
    s_list: tuple = (2,)
    k_max: int = 500
    replicates: int = 100
    level: float = 0.95
    master_seed: int = DEFAULT_SEED
    estimators: tuple = ("QStar",)
    k_values: tuple | None = None
    baseline_k_values: tuple | None = None
    keep_raw: bool = False
    threads: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "s_list", tuple(int(s) for s in self.s_list))
        object.__setattr__(self, "estimators", tuple(self.estimators))
        if not self.s_list or any(s < 2 for s in self.s_list):
            raise DomainError("s_list must contain integers >= 2")
        if self.k_max < 1 or self.replicates < 1:
            raise DomainError("k_max and replicates must be positive")
        if not 0 < self.level < 1:
            raise DomainError("level must lie in (0, 1)")
        unknown = set(self.estimators) - set(ESTIMATORS)
        if unknown:
            raise DomainError(f"unknown estimators: {sorted(unknown)}")
        if self.k_values is not None:
            ks = tuple(sorted(set(int(k) for k in self.k_values)))
            if not ks or ks[0] < 1 or ks[-1] > self.k_max:
                raise DomainError("k_values must lie in 1..k_max")
            object.__setattr__(self, "k_values", ks)
        if self.baseline_k_values is not None:
            object.__setattr__(
                self, "baseline_k_values",
                tuple(sorted(set(int(k) for k in self.baseline_k_values))),
            )

    def sample_size(self, s: int) -> int:
        return (s + 1) * self.k_max - 1

    @property
    def ratio_k_values(self) -> tuple:
        return self.k_values or tuple(range(1, self.k_max + 1))

    def baseline_ks(self, method: str, s: int) -> tuple:
        top = baselines.max_k(method, self.sample_size(s))
        ks = self.baseline_k_values or range(1, top + 1)
        return tuple(k for k in ks if 1 <= k <= top)

    def target(self, estimator: str, s: int) -> float:
        alpha = tail_index(self.model)
        if estimator == "LogRatio":
            return limit_center(self.model, s)
        if estimator == "Q":
            return 1.0 / alpha
        return alpha


@dataclass(frozen=True)
class CellSummary:
    s: int
    k: int
    estimator: str
    n: int
    target: float
    count: int
    missing: int
    mean: float
    bias: float
    variance: float
    rmse: float
    coverage: float = math.nan

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def summarize(values: np.ndarray, target: float) -> tuple:
    """``(count, missing, mean, bias, variance, rmse)`` ignoring NaNs.

    The variance is the plain mean of squared deviations, so that
    ``rmse**2 == bias**2 + variance`` up to rounding.
    """
    values = np.asarray(values, dtype=np.float64)
    ok = values[np.isfinite(values)]
    m = ok.size
    missing = values.size - m
    if m == 0:
        return 0, missing, math.nan, math.nan, math.nan, math.nan
    mean = math.fsum(ok) / m
    variance = math.fsum((ok - mean) ** 2) / m
    bias = mean - target
    rmse = math.sqrt(math.fsum((ok - target) ** 2) / m)
    return m, missing, mean, bias, variance, rmse


@dataclass
class ExperimentResult:
    plan: ExperimentPlan
    cells: list
    raw: dict | None = field(default=None, repr=False)

    def cell(self, s: int, k: int, estimator: str) -> CellSummary:
        for c in self.cells:
            if c.s == s and c.k == k and c.estimator == estimator:
                return c
        raise KeyError((s, k, estimator))

    def values(self, s: int, k: int, estimator: str) -> np.ndarray:
        if self.raw is None:
            raise ValueError("raw estimates were not kept (set keep_raw=True)")
        return self.raw[(s, k, estimator)]

    def best_k(self, estimator: str, s: int | None = None) -> CellSummary:
        """Cell with the smallest RMSE (the oracle choice of k)."""
        pool = [
            c for c in self.cells
            if c.estimator == estimator and (s is None or c.s == s)
            and math.isfinite(c.rmse)
        ]
        if not pool:
            raise KeyError(estimator)
        return min(pool, key=lambda c: (c.rmse, c.k))

    def to_csv(self, path=None) -> str:
        return write_csv([c.as_dict() for c in self.cells], path)


def write_csv(rows: list, path=None) -> str:
    """Serialize dicts with a fixed header order; returns the text."""
    buf = io.StringIO()
    if rows:
        writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: _fmt(v) for k, v in row.items()})
    text = buf.getvalue()
    if path is not None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return text


def _fmt(v):
    if isinstance(v, float):
        return "" if math.isnan(v) else repr(v)
    return v


def _draw_chunk(plan: ExperimentPlan, start: int, stop: int) -> np.ndarray:
    width = max(plan.sample_size(s) for s in plan.s_list)
    u = np.empty((stop - start, width))
    for row, r in enumerate(range(start, stop)):
        u[row] = open_uniforms(SeedSpec(plan.master_seed, r), width)
    return np.asarray(plan.model.quantile(u))


def _run_chunk(plan: ExperimentPlan, start: int, stop: int) -> dict:
    # overflowing draws and 0/0 ratios end up as NaN cells, counted as missing
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        return _evaluate_chunk(plan, _draw_chunk(plan, start, stop))


def _evaluate_chunk(plan: ExperimentPlan, draws: np.ndarray) -> dict:
    est = set(plan.estimators)
    out = {}
    for s in plan.s_list:
        xs = draws[:, : plan.sample_size(s)]
        if est & set(RATIO_ESTIMATORS):
            log_s = math.log(s)
            for k in plan.ratio_k_values:
                lr = batch_log_ratio(xs[:, : (s + 1) * k - 1], k, s)
                lr = np.where(lr > 0, lr, np.nan)
                if "LogRatio" in est:
                    out[(s, k, "LogRatio")] = lr
                if "Q" in est:
                    out[(s, k, "Q")] = lr / q_denominator(k, s)
                if "QStar" in est:
                    inv = log_s / lr
                    out[(s, k, "QStar")] = inv
                    hw = ci_half_width_factor(s, (s + 1) * k - 1, plan.level) / lr
                    alpha = tail_index(plan.model)
                    cover = (inv - hw <= alpha) & (alpha <= inv + hw)
                    out[(s, k, _COVER)] = np.where(np.isnan(lr), np.nan, cover)
        wanted = [m for m in BASELINE_ESTIMATORS if m in est]
        if wanted:
            srt = np.sort(xs, axis=1)
            for method in wanted:
                for k in plan.baseline_ks(method, s):
                    g = baselines.batch_gamma(srt, method, k)
                    with np.errstate(divide="ignore"):
                        out[(s, k, method)] = np.where(g > 0, 1.0 / g, np.nan)
    return out


def _raw_estimates(plan: ExperimentPlan) -> dict:
    bounds = [
        (lo, min(lo + CHUNK_SIZE, plan.replicates))
        for lo in range(0, plan.replicates, CHUNK_SIZE)
    ]
    threads = plan.threads or default_threads()
    if threads > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda b: _run_chunk(plan, *b), bounds))
    else:
        parts = [_run_chunk(plan, *b) for b in bounds]
    return {key: np.concatenate([p[key] for p in parts]) for key in parts[0]}


def run_plan(plan: ExperimentPlan) -> ExperimentResult:
    """Simulate every replicate and aggregate each (s, k, estimator) cell.

    Failed evaluations (e.g. tied order statistics) are NaN in the raw
    arrays and counted in ``missing``; they never abort the grid.
    """
    raw = _raw_estimates(plan)
    cells = []
    for (s, k, name), vals in raw.items():
        if name == _COVER:
            continue
        target = plan.target(name, s)
        count, missing, mean, bias, var, rmse = summarize(vals, target)
        coverage = math.nan
        if name == "QStar":
            cov = raw[(s, k, _COVER)]
            cov = cov[np.isfinite(cov)]
            coverage = float(cov.mean()) if cov.size else math.nan
        n = (s + 1) * k - 1 if name in RATIO_ESTIMATORS else plan.sample_size(s)
        cells.append(
            CellSummary(s, k, name, n, target, count, missing, mean, bias, var, rmse,
                        coverage)
        )
    cells.sort(key=lambda c: (c.s, ESTIMATORS.index(c.estimator), c.k))
    kept = None
    if plan.keep_raw:
        kept = {key: v for key, v in raw.items() if key[2] != _COVER}
    return ExperimentResult(plan, cells, kept)


def ks_gof(estimates, cdf) -> tuple[float, float]:
    """One-sample Kolmogorov-Smirnov statistic and asymptotic p-value."""
    x = np.sort(np.asarray(estimates, dtype=np.float64).ravel())
    n = x.size
    if n == 0:
        raise EmptySample("no estimates to test")
    try:
        f = np.asarray(cdf(x), dtype=np.float64)
        if f.shape != x.shape:
            raise TypeError
    except (TypeError, ValueError):
        f = np.array([cdf(float(v)) for v in x])
    i = np.arange(1, n + 1)
    d = max(float(np.max(i / n - f)), float(np.max(f - (i - 1) / n)))
    return d, kolmogorov_sf(math.sqrt(n) * d)


def coverage_experiment(plan: ExperimentPlan) -> float:
    """Fraction of replicates whose interval at ``k = k_max`` covers alpha."""
    if len(plan.s_list) != 1:
        raise DomainError("coverage_experiment expects a single s")
    run = ExperimentPlan(
        model=plan.model,
        s_list=plan.s_list,
        k_max=plan.k_max,
        replicates=plan.replicates,
        level=plan.level,
        master_seed=plan.master_seed,
        estimators=("QStar",),
        k_values=(plan.k_max,),
        threads=plan.threads,
    )
    return run_plan(run).cell(plan.s_list[0], plan.k_max, "QStar").coverage


@dataclass(frozen=True)
class FigureRow:
    alpha: float
    s: int
    k: int
    avg_inv_qstar: float
    ci_lower: float
    ci_upper: float

    @property
    def half_width(self) -> float:
        return 0.5 * (self.ci_upper - self.ci_lower)


FIGURE_ALPHAS = (0.3, 0.5, 1.0, 1.5)
FIGURE_S = (2, 3, 4, 5)


def figure_grid(
    alpha_list=FIGURE_ALPHAS,
    s_list=FIGURE_S,
    k_max: int = 500,
    replicates: int = 100,
    seed: int = DEFAULT_SEED,
    level: float = 0.95,
    threads: int | None = None,
) -> list:
    """Replicate-averaged ``1/Q*`` per (alpha, s, k) with its interval.

    The interval is centered at the averaged ``1/Q*`` and uses it in place
    of a single-sample estimate: half-width
    ``z * avg * sqrt((s^2-1)/(s n)) / log(s)``.
    """
    rows = []
    for alpha in alpha_list:
        plan = ExperimentPlan(
            model=pareto(alpha, 1.0),
            s_list=tuple(s_list),
            k_max=k_max,
            replicates=replicates,
            level=level,
            master_seed=seed,
            estimators=("QStar",),
            threads=threads,
        )
        res = run_plan(plan)
        for c in res.cells:
            hw = ci_half_width_factor(c.s, c.n, level) * c.mean / math.log(c.s)
            rows.append(FigureRow(float(alpha), c.s, c.k, c.mean, c.mean - hw, c.mean + hw))
    return rows


def compare(
    alpha: float,
    n: int,
    replicates: int = 100,
    estimators=("QStar",) + BASELINE_ESTIMATORS,
    s_list=(2, 3, 4, 5),
    seed: int = DEFAULT_SEED,
    threads: int | None = None,
) -> list:
    """RMSE table of alpha estimators on common Pareto(alpha, 1) samples of size n.

    ``QStar`` is evaluated for each ``s`` with ``(s+1) | (n+1)``, over its
    nested designs ``k = 1 .. (n+1)/(s+1)``; baselines over every feasible
    number of upper order statistics. Each estimator (and each s for QStar)
    gets one extra row ``kind = "best_k"`` holding its smallest-RMSE cell.
    Returns a list of dicts.
    """
    model = pareto(alpha, 1.0)
    ratio = [e for e in estimators if e in RATIO_ESTIMATORS]
    base = [e for e in estimators if e in BASELINE_ESTIMATORS]
    unknown = set(estimators) - set(ESTIMATORS)
    if unknown:
        raise DomainError(f"unknown estimators: {sorted(unknown)}")
    results = []
    usable = [s for s in s_list if (n + 1) % (s + 1) == 0]
    if ratio:
        if not usable:
            raise DomainError(f"no s in {tuple(s_list)} fits n = {n}")
        for s in usable:
            plan = ExperimentPlan(model, (s,), (n + 1) // (s + 1), replicates,
                                  master_seed=seed, estimators=tuple(ratio),
                                  threads=threads)
            results.append(run_plan(plan))
    if base:
        # any s whose design size equals n gives the same samples; s = n fits
        # trivially with k_max = 1
        s0 = usable[0] if usable else n
        plan = ExperimentPlan(model, (s0,), (n + 1) // (s0 + 1), replicates,
                              master_seed=seed, estimators=tuple(base),
                              threads=threads)
        results.append(run_plan(plan))
    rows = []
    for res in results:
        for c in res.cells:
            rows.append(_compare_row("trajectory", c))
    for res in results:
        for name in res.plan.estimators:
            s = res.plan.s_list[0] if name in RATIO_ESTIMATORS else None
            try:
                rows.append(_compare_row("best_k", res.best_k(name, s)))
            except KeyError:
                pass
    return rows


def _compare_row(kind, c: CellSummary):
    ratio = c.estimator in RATIO_ESTIMATORS
    return {
        "kind": kind,
        "estimator": c.estimator,
        "s": c.s if ratio else "",
        "k": c.k,
        "n": c.n,
        "target": c.target,
        "count": c.count,
        "missing": c.missing,
        "mean": c.mean,
        "bias": c.bias,
        "variance": c.variance,
        "rmse": c.rmse,
    }
