"""Standardization and least-squares fitting of linear measurement functions.

A realization maps an observation row to a measurement in two steps: select
its feature columns and standardize them with train statistics (the
observation-to-representation map), then apply a linear model.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, InvalidRealization, RankDeficient, TooFewRows, UnknownColumn
from .split import SplitDataset

RANK_TOLERANCE = 1e-10
_EPS = np.finfo(float).eps


def _as_matrix(X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    if X.ndim != 2:
        raise DimensionMismatch(f"expected a 2-d matrix, got shape {X.shape}")
    return X


@dataclass(frozen=True)
class Standardizer:
    means: tuple[float, ...]
    scales: tuple[float, ...]

    def __post_init__(self):
        if len(self.means) != len(self.scales):
            raise DimensionMismatch("means and scales differ in length")
        if any(not s > 0 for s in self.scales):
            raise ValueError("scales must be positive")


def fit_standardizer(X) -> Standardizer:
    X = _as_matrix(X)
    n = X.shape[0]
    if n < 2:
        raise TooFewRows(f"need at least 2 rows to standardize, got {n}")
    means = X.mean(axis=0)
    var = X.var(axis=0)
    # constant-column test tolerant of rounding in the mean, as in common scalers
    bound = n * _EPS * var + (n * means * _EPS) ** 2
    scales = np.where(var <= bound, 1.0, np.sqrt(var))
    return Standardizer(tuple(map(float, means)), tuple(map(float, scales)))


def apply_standardizer(s: Standardizer, X) -> np.ndarray:
    X = _as_matrix(X)
    if X.shape[1] != len(s.means):
        raise DimensionMismatch(f"standardizer has {len(s.means)} columns, input has {X.shape[1]}")
    return (X - np.asarray(s.means)) / np.asarray(s.scales)


@dataclass(frozen=True)
class LinearModel:
    coefficients: tuple[float, ...]
    intercept: float
    feature_names: tuple[str, ...] = ()

    def __post_init__(self):
        if self.feature_names and len(self.feature_names) != len(self.coefficients):
            raise DimensionMismatch("one coefficient per feature name required")
        if not all(np.isfinite(self.coefficients)) or not np.isfinite(self.intercept):
            raise ValueError("model parameters must be finite")


def householder_qr(A: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Factor ``A`` (m x p, m >= p) in place of a copy.

    Returns ``(R, V)`` where ``R`` is the p x p upper triangle and ``V`` holds
    the Householder vectors column by column (zero-padded above the diagonal).
    """
    R = np.array(A, dtype=float)
    m, p = R.shape
    V = np.zeros((m, p))
    for k in range(p):
        x = R[k:, k]
        norm = np.sqrt(x @ x)
        if norm == 0.0:
            continue
        alpha = -norm if x[0] >= 0 else norm
        v = x.copy()
        v[0] -= alpha
        v /= np.sqrt(v @ v)
        R[k:, k:] -= 2.0 * np.outer(v, v @ R[k:, k:])
        V[k:, k] = v
    return np.triu(R[:p]), V


def _apply_qt(V: np.ndarray, b: np.ndarray) -> np.ndarray:
    b = np.array(b, dtype=float)
    for k in range(V.shape[1]):
        v = V[k:, k]
        b[k:] -= 2.0 * v * (v @ b[k:])
    return b


def _back_substitute(R: np.ndarray, c: np.ndarray) -> np.ndarray:
    p = R.shape[0]
    x = np.zeros(p)
    for i in range(p - 1, -1, -1):
        x[i] = (c[i] - R[i, i + 1:] @ x[i + 1:]) / R[i, i]
    return x


def lstsq_qr(A, y, rank_tol: float = RANK_TOLERANCE) -> np.ndarray:
    """Least-squares solution of ``A x ~ y`` via Householder QR."""
    A = _as_matrix(A)
    y = np.asarray(y, dtype=float)
    m, p = A.shape
    if y.shape != (m,):
        raise DimensionMismatch(f"design has {m} rows, target has shape {y.shape}")
    if m < p:
        raise TooFewRows(f"{m} rows cannot determine {p} parameters")
    R, V = householder_qr(A)
    diag = np.abs(np.diag(R))
    if diag.max() == 0.0 or diag.min() < rank_tol * diag.max():
        raise RankDeficient(
            f"design matrix rank-deficient: |R_kk| min {diag.min():.3g} vs max {diag.max():.3g}"
        )
    return _back_substitute(R, _apply_qt(V, y)[:p])


def fit_ols(X, y, feature_names=(), rank_tol: float = RANK_TOLERANCE) -> LinearModel:
    """Intercept-augmented OLS; the intercept column is placed first."""
    X = _as_matrix(X)
    y = np.asarray(y, dtype=float)
    if y.shape != (X.shape[0],):
        raise DimensionMismatch(f"X has {X.shape[0]} rows, y has shape {y.shape}")
    if X.shape[0] < X.shape[1] + 1:
        raise TooFewRows(f"{X.shape[0]} rows for {X.shape[1]} features plus intercept")
    A = np.column_stack([np.ones(X.shape[0]), X])
    beta = lstsq_qr(A, y, rank_tol)
    return LinearModel(tuple(map(float, beta[1:])), float(beta[0]), tuple(feature_names))


def predict(model: LinearModel, X) -> np.ndarray:
    X = _as_matrix(X)
    if X.shape[1] != len(model.coefficients):
        raise DimensionMismatch(f"model has {len(model.coefficients)} coefficients, input has {X.shape[1]} columns")
    return X @ np.asarray(model.coefficients) + model.intercept


@dataclass(frozen=True)
class RealizationSpec:
    id: str
    feature_columns: tuple[str, ...]
    target_column: str

    def __post_init__(self):
        object.__setattr__(self, "feature_columns", tuple(self.feature_columns))
        if not self.feature_columns:
            raise InvalidRealization(f"realization {self.id!r} has no features")
        if len(set(self.feature_columns)) != len(self.feature_columns):
            raise InvalidRealization(f"realization {self.id!r} repeats a feature")
        if self.target_column in self.feature_columns:
            raise InvalidRealization(f"realization {self.id!r} uses its target as a feature")


@dataclass(frozen=True)
class TrainedRealization:
    spec: RealizationSpec
    standardizer: Standardizer
    model: LinearModel
    residual_sigma: float

    @property
    def id(self) -> str:
        return self.spec.id

    def representation(self, data) -> np.ndarray:
        """Column selection followed by the train-fitted standardizer."""
        return apply_standardizer(self.standardizer, select_columns(data, self.spec.feature_columns))

    def measure(self, data) -> np.ndarray:
        return predict(self.model, self.representation(data))

    def to_dict(self) -> dict:
        return {
            "id": self.spec.id,
            "target_column": self.spec.target_column,
            "feature_names": list(self.spec.feature_columns),
            "means": list(self.standardizer.means),
            "scales": list(self.standardizer.scales),
            "coefficients": list(self.model.coefficients),
            "intercept": self.model.intercept,
            "residual_sigma": self.residual_sigma,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TrainedRealization":
        spec = RealizationSpec(d["id"], tuple(d["feature_names"]), d["target_column"])
        return cls(
            spec,
            Standardizer(tuple(d["means"]), tuple(d["scales"])),
            LinearModel(tuple(d["coefficients"]), d["intercept"], tuple(d["feature_names"])),
            d["residual_sigma"],
        )


def select_columns(data, names) -> np.ndarray:
    missing = [n for n in names if n not in data.column_names]
    if missing:
        raise UnknownColumn(f"columns not in dataset: {missing}")
    return data.select(names)


def train_realization(split: SplitDataset, spec: RealizationSpec) -> TrainedRealization:
    X = select_columns(split.train, spec.feature_columns)
    y = select_columns(split.train, [spec.target_column])[:, 0]
    standardizer = fit_standardizer(X)
    Xs = apply_standardizer(standardizer, X)
    model = fit_ols(Xs, y, spec.feature_columns)
    residual_sigma = float(np.std(y - predict(model, Xs)))
    return TrainedRealization(spec, standardizer, model, residual_sigma)
