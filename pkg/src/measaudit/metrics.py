"""Standard evaluation criteria: generalization, calibration, robustness."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, EmptyMetricInput, NegativeNoiseLevel, NonPositiveSigma
from .modeling import TrainedRealization, predict, select_columns
from .rng import RngStream
from .special import inv_norm_cdf
from .split import SplitDataset

DEFAULT_LEVELS = tuple(float(v) for v in np.linspace(0.1, 0.9, 9))
DEFAULT_NOISE_LEVELS = tuple(float(v) for v in np.linspace(0.0, 1.0, 8))

# residual sigma below this fraction of the target std counts as an exact fit
EXACT_FIT_RTOL = 1e-12
POINT_HIT_RTOL = 1e-9


def _pair(y, yhat):
    y = np.asarray(y, dtype=float)
    yhat = np.asarray(yhat, dtype=float)
    if y.shape != yhat.shape or y.ndim != 1:
        raise DimensionMismatch(f"shapes {y.shape} and {yhat.shape} differ")
    if y.size == 0:
        raise EmptyMetricInput("no samples")
    return y, yhat


def mse(y, yhat) -> float:
    y, yhat = _pair(y, yhat)
    return float(np.mean((y - yhat) ** 2))


@dataclass(frozen=True)
class CoverageCurve:
    levels: tuple[float, ...]
    coverage: tuple[float, ...]

    def __post_init__(self):
        if len(self.levels) != len(self.coverage):
            raise DimensionMismatch("levels and coverage differ in length")
        if any(b <= a for a, b in zip(self.levels, self.levels[1:])):
            raise ValueError("levels must be strictly increasing")


@dataclass(frozen=True)
class RobustnessCurve:
    noise_levels: tuple[float, ...]
    mse: tuple[float, ...]


def calibration_curve(y, yhat, sigma: float, levels=DEFAULT_LEVELS) -> CoverageCurve:
    """Empirical coverage of symmetric Gaussian intervals ``yhat +- z*sigma``.

    Bounds are inclusive on both ends.
    """
    y, yhat = _pair(y, yhat)
    if not sigma > 0:
        raise NonPositiveSigma(f"sigma must be positive, got {sigma}")
    coverage = []
    for level in levels:
        z = inv_norm_cdf(1.0 - (1.0 - level) / 2.0)
        lower = yhat - z * sigma
        upper = yhat + z * sigma
        coverage.append(float(np.mean((y >= lower) & (y <= upper))))
    return CoverageCurve(tuple(float(v) for v in levels), tuple(coverage))


def robustness_sweep(r: TrainedRealization, X_test_std, y_test, noise_levels=DEFAULT_NOISE_LEVELS,
                     rng: RngStream | None = None) -> RobustnessCurve:
    """MSE under additive Gaussian noise on already-standardized inputs.

    Level ``i`` draws from substream ``rng.child(r.id, i)``, so curves do not
    depend on evaluation order.
    """
    rng = rng if rng is not None else RngStream(0)
    X = np.asarray(X_test_std, dtype=float)
    if any(s < 0 for s in noise_levels):
        raise NegativeNoiseLevel(f"noise levels must be >= 0: {list(noise_levels)}")
    curve = []
    for i, s in enumerate(noise_levels):
        if s == 0:
            noisy = X
        else:
            noisy = X + rng.child(r.id, i).normal(0.0, s, X.shape)
        curve.append(mse(y_test, predict(r.model, noisy)))
    return RobustnessCurve(tuple(float(s) for s in noise_levels), tuple(curve))


@dataclass(frozen=True)
class EvaluationReport:
    realization_id: str
    mse_train: float
    mse_test: float
    calibration: CoverageCurve
    robustness: RobustnessCurve

    def to_dict(self) -> dict:
        return {
            "realization_id": self.realization_id,
            "mse_train": self.mse_train,
            "mse_test": self.mse_test,
            "calibration": {"levels": list(self.calibration.levels),
                            "coverage": list(self.calibration.coverage)},
            "robustness": {"noise_levels": list(self.robustness.noise_levels),
                           "mse": list(self.robustness.mse)},
        }

    @classmethod
    def from_dict(cls, d: dict) -> "EvaluationReport":
        return cls(
            d["realization_id"], d["mse_train"], d["mse_test"],
            CoverageCurve(tuple(d["calibration"]["levels"]), tuple(d["calibration"]["coverage"])),
            RobustnessCurve(tuple(d["robustness"]["noise_levels"]), tuple(d["robustness"]["mse"])),
        )


def evaluate_realization(r: TrainedRealization, split: SplitDataset, levels=DEFAULT_LEVELS,
                         noise_levels=DEFAULT_NOISE_LEVELS, rng: RngStream | None = None) -> EvaluationReport:
    target = [r.spec.target_column]
    y_train = select_columns(split.train, target)[:, 0]
    y_test = select_columns(split.test, target)[:, 0]
    X_test = r.representation(split.test)
    pred_test = predict(r.model, X_test)
    mse_test = mse(y_test, pred_test)
    scale = float(np.std(y_train)) or 1.0
    if r.residual_sigma > EXACT_FIT_RTOL * scale:
        calibration = calibration_curve(y_test, pred_test, r.residual_sigma, levels)
    else:
        # interpolating fit: intervals collapse to the point prediction, up to rounding
        hits = float(np.mean(np.abs(y_test - pred_test) <= POINT_HIT_RTOL * scale))
        calibration = CoverageCurve(tuple(map(float, levels)), tuple(hits for _ in levels))
    return EvaluationReport(
        r.id,
        mse(y_train, r.measure(split.train)),
        mse_test,
        calibration,
        robustness_sweep(r, X_test, y_test, noise_levels, rng),
    )
