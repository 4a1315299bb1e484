"""Cross-realization agreement of learned measurements.

Stability is a property of a *set* of realizations: every pair must agree on
the same underlying test rows, each seen through its own feature selection
and standardizer.  Agreement is judged on two statistics of the pairwise
difference ``d = pred_a - pred_b``: its mean relative to the spread of the
target (systematic offset) and its correlation with the target
(state-dependent structure).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .errors import DimensionMismatch, FewerThanTwoRealizations, StabilityError, TooFewPoints
from .metrics import DEFAULT_NOISE_LEVELS, RobustnessCurve, robustness_sweep
from .modeling import TrainedRealization, select_columns
from .rng import RngStream
from .split import SplitDataset

# |d| spread below this fraction of the larger of |mean d| and std(y) is treated as zero
DEGENERATE_RTOL = 1e-12


@dataclass(frozen=True)
class DisagreementReport:
    pair: tuple[str, str]
    mean_disagreement: float
    std_disagreement: float
    relative_mean_disagreement: float
    slope: float
    pearson_r: float
    r_squared: float
    n: int

    def to_dict(self) -> dict:
        return {
            "pair": list(self.pair),
            "mean_disagreement": self.mean_disagreement,
            "std_disagreement": self.std_disagreement,
            "relative_mean_disagreement": self.relative_mean_disagreement,
            "slope": self.slope,
            "pearson_r": self.pearson_r,
            "r_squared": self.r_squared,
            "n": self.n,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "DisagreementReport":
        return cls(tuple(d["pair"]), d["mean_disagreement"], d["std_disagreement"],
                   d["relative_mean_disagreement"], d["slope"], d["pearson_r"], d["r_squared"], d["n"])


def disagreement_stats(pred_a, pred_b, y_true, pair=("a", "b")) -> DisagreementReport:
    pred_a = np.asarray(pred_a, dtype=float)
    pred_b = np.asarray(pred_b, dtype=float)
    y = np.asarray(y_true, dtype=float)
    if not (pred_a.shape == pred_b.shape == y.shape) or y.ndim != 1:
        raise DimensionMismatch(f"shapes {pred_a.shape}, {pred_b.shape}, {y.shape} differ")
    if y.size < 2:
        raise TooFewPoints(f"need at least 2 points, got {y.size}")
    d = pred_a - pred_b
    mean_d = float(np.mean(d))
    std_d = float(np.std(d))
    std_y = float(np.std(y))
    if std_y == 0.0:
        raise StabilityError("true target is constant on the evaluation rows")
    if std_d <= DEGENERATE_RTOL * max(abs(mean_d), std_y):
        slope = r = 0.0
    else:
        cov = float(np.mean((d - mean_d) * (y - np.mean(y))))
        slope = cov / (std_y * std_y)
        r = min(1.0, max(-1.0, cov / (std_d * std_y)))
    return DisagreementReport(tuple(pair), mean_d, std_d, mean_d / std_y, slope, r, r * r, int(y.size))


@dataclass(frozen=True)
class StabilityThresholds:
    max_abs_relative_mean: float = 0.05
    max_abs_pearson_r: float = 0.2
    equivalence_scale: str = "identity"

    def __post_init__(self):
        if self.max_abs_relative_mean < 0 or self.max_abs_pearson_r < 0:
            raise ValueError("thresholds must be non-negative")
        if self.equivalence_scale != "identity":
            raise NotImplementedError(f"equivalence scale {self.equivalence_scale!r} not supported")

    def judge(self, rep: DisagreementReport) -> "Verdict":
        reasons = []
        if abs(rep.relative_mean_disagreement) > self.max_abs_relative_mean:
            reasons.append("relative_mean_disagreement")
        if abs(rep.pearson_r) > self.max_abs_pearson_r:
            reasons.append("pearson_r")
        return Verdict(not reasons, tuple(reasons))


@dataclass(frozen=True)
class Verdict:
    stable: bool
    reasons: tuple[str, ...] = ()

    def __str__(self):
        return "stable" if self.stable else f"unstable({', '.join(self.reasons)})"


@dataclass
class PairAudit:
    stats: DisagreementReport
    verdict: Verdict
    row_indices: list[int]
    y_true: list[float]
    disagreement: list[float]


@dataclass
class StabilityReport:
    thresholds: StabilityThresholds
    pairs: list[PairAudit] = field(default_factory=list)

    @property
    def stable(self) -> bool:
        return all(p.verdict.stable for p in self.pairs)

    @property
    def verdicts(self) -> dict[tuple[str, str], Verdict]:
        return {p.stats.pair: p.verdict for p in self.pairs}


def _order(realizations):
    if len(realizations) < 2:
        raise FewerThanTwoRealizations(f"stability needs >= 2 realizations, got {len(realizations)}")
    return sorted(realizations, key=lambda r: r.id)


def stability_audit(realizations, split: SplitDataset,
                    thresholds: StabilityThresholds = StabilityThresholds()) -> StabilityReport:
    ordered = _order(realizations)
    test = split.test
    measured = {r.id: r.measure(test) for r in ordered}
    report = StabilityReport(thresholds)
    rows = list(split.test_row_indices)
    for a, b in combinations(ordered, 2):
        if a.spec.target_column != b.spec.target_column:
            raise StabilityError(f"{a.id} and {b.id} measure different targets")
        y = select_columns(test, [a.spec.target_column])[:, 0]
        stats = disagreement_stats(measured[a.id], measured[b.id], y, (a.id, b.id))
        d = measured[a.id] - measured[b.id]
        report.pairs.append(PairAudit(stats, thresholds.judge(stats), rows,
                                      [float(v) for v in y], [float(v) for v in d]))
    return report


@dataclass(frozen=True)
class RobustnessCriteria:
    """When a single realization counts as robust to input noise.

    ``monotone_tolerance`` allows each step of the MSE curve to dip by that
    fraction; ``degradation_tolerance`` bounds every point by
    ``(1 + tol) * (mse0 + s^2 * |beta|^2)``, the expected MSE when Gaussian
    input noise passes through the linear map.  ``comparable_ratio`` caps
    max/min MSE across realizations.
    """

    monotone_tolerance: float = 0.02
    degradation_tolerance: float = 0.5
    comparable_ratio: float = 1.5


def is_monotone(curve: RobustnessCurve, tol: float) -> bool:
    m = curve.mse
    return all(m[i + 1] >= m[i] * (1.0 - tol) for i in range(len(m) - 1))


def is_bounded(curve: RobustnessCurve, r: TrainedRealization, tol: float) -> bool:
    gain = float(np.sum(np.square(r.model.coefficients)))
    base = curve.mse[0]
    return all(np.isfinite(m) and m <= (1.0 + tol) * (base + s * s * gain)
               for s, m in zip(curve.noise_levels, curve.mse))


def mse_ratio(values) -> float:
    lo, hi = min(values), max(values)
    if lo == 0.0:
        return 1.0 if hi == 0.0 else float("inf")
    return hi / lo


@dataclass
class ContrastSummary:
    curves: dict[str, RobustnessCurve]
    robust: dict[str, bool]
    verdicts: dict[tuple[str, str], Verdict]
    all_robust: bool
    stable: bool
    robust_but_unstable: bool

    def to_dict(self) -> dict:
        return {
            "robust": dict(self.robust),
            "pairs": [{"pair": list(k), "verdict": str(v)} for k, v in self.verdicts.items()],
            "all_robust": self.all_robust,
            "stable": self.stable,
            "robust_but_unstable": self.robust_but_unstable,
        }


def robustness_vs_stability_contrast(realizations, split: SplitDataset, noise_levels=DEFAULT_NOISE_LEVELS,
                                     thresholds: StabilityThresholds = StabilityThresholds(),
                                     rng: RngStream | None = None,
                                     criteria: RobustnessCriteria = RobustnessCriteria(),
                                     curves: dict | None = None,
                                     stability: StabilityReport | None = None) -> ContrastSummary:
    """Fixed-model robustness next to cross-realization stability.

    Precomputed ``curves`` and ``stability`` are reused when given.
    """
    ordered = _order(realizations)
    rng = rng if rng is not None else RngStream(0)
    if curves is None:
        curves = {}
        for r in ordered:
            y = select_columns(split.test, [r.spec.target_column])[:, 0]
            curves[r.id] = robustness_sweep(r, r.representation(split.test), y, noise_levels, rng)
    if stability is None:
        stability = stability_audit(ordered, split, thresholds)
    robust = {
        r.id: is_monotone(curves[r.id], criteria.monotone_tolerance)
        and is_bounded(curves[r.id], r, criteria.degradation_tolerance)
        for r in ordered
    }
    all_robust = all(robust.values())
    return ContrastSummary(
        {r.id: curves[r.id] for r in ordered}, robust, stability.verdicts,
        all_robust, stability.stable, all_robust and not stability.stable,
    )
