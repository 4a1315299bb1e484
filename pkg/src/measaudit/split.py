"""Temporal train/gap/test partitioning."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import EmptyTest, EmptyTrain, InvalidSplit
from .ingest import Dataset

IN_DISTRIBUTION = "in-distribution"
SHIFTED = "temporally-shifted"


@dataclass(frozen=True)
class SplitSpec:
    train_frac: float = 0.6
    gap_frac: float = 0.2

    def __post_init__(self):
        if not 0.0 < self.train_frac < 1.0:
            raise InvalidSplit(f"train_frac must lie in (0, 1), got {self.train_frac}")
        if not 0.0 <= self.gap_frac < 1.0:
            raise InvalidSplit(f"gap_frac must lie in [0, 1), got {self.gap_frac}")
        if self.train_frac + self.gap_frac >= 1.0:
            raise InvalidSplit("train_frac + gap_frac must be < 1")

    def bounds(self, n: int) -> tuple[int, int]:
        """Return ``(train_end, gap_end)``; int() truncation is deliberate."""
        return int(self.train_frac * n), int((self.train_frac + self.gap_frac) * n)


@dataclass
class SplitDataset:
    train: Dataset
    test: Dataset
    train_end: int
    gap_end: int
    n_total: int

    @property
    def context_labels(self) -> dict[str, str]:
        return {"train": IN_DISTRIBUTION, "test": SHIFTED}

    @property
    def test_row_indices(self) -> range:
        return range(self.gap_end, self.n_total)


def temporal_split(data: Dataset, spec: SplitSpec = SplitSpec()) -> SplitDataset:
    n = data.n_rows
    train_end, gap_end = spec.bounds(n)
    if train_end <= 0:
        raise EmptyTrain(f"train split empty for n={n}, train_frac={spec.train_frac}")
    if gap_end >= n:
        raise EmptyTest(f"test split empty for n={n}")
    return SplitDataset(data.take(0, train_end), data.take(gap_end, n), train_end, gap_end, n)
