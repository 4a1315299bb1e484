import numpy as np
import pytest
from hypothesis import given, strategies as st

from measaudit.errors import EmptyTrain, InvalidSplit
from measaudit.ingest import Dataset
from measaudit.split import SplitSpec, temporal_split


def _data(n):
    return Dataset(["i"], np.arange(n, dtype=float)[:, None])


@pytest.mark.parametrize("n, train, gap, train_rows, test_rows", [
    (10, 0.6, 0.2, range(0, 6), range(8, 10)),
    (10, 0.5, 0.0, range(0, 5), range(5, 10)),
    (3, 0.9, 0.09, range(0, 2), range(2, 3)),
])
def test_split_examples(n, train, gap, train_rows, test_rows):
    s = temporal_split(_data(n), SplitSpec(train, gap))
    assert s.train.column("i").tolist() == list(train_rows)
    assert s.test.column("i").tolist() == list(test_rows)
    assert s.context_labels["test"] == "temporally-shifted"


def test_invalid_specs():
    with pytest.raises(InvalidSplit):
        SplitSpec(0.0, 0.1)
    with pytest.raises(InvalidSplit):
        SplitSpec(0.7, 0.3)
    with pytest.raises(EmptyTrain):
        temporal_split(_data(1), SplitSpec(0.5, 0.0))
    with pytest.raises(EmptyTrain):
        temporal_split(_data(3), SplitSpec(0.3, 0.0))


fracs = st.floats(0.01, 0.98)


@given(st.integers(1, 500), fracs, st.floats(0.0, 0.98))
def test_partition(n, train, gap):
    if train + gap >= 1:
        return
    spec = SplitSpec(train, gap)
    train_end, gap_end = spec.bounds(n)
    assert train_end + (gap_end - train_end) + (n - gap_end) == n
    assert 0 <= train_end <= gap_end <= n


@given(st.integers(3, 500), fracs, fracs, st.floats(0.0, 0.5))
def test_monotone_in_train_frac(n, f1, f2, gap):
    lo, hi = sorted((f1, f2))
    if hi + gap >= 1:
        return
    assert SplitSpec(lo, gap).bounds(n)[0] <= SplitSpec(hi, gap).bounds(n)[0]
