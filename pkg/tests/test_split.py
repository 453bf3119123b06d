import numpy as np
import pytest

from models.base import GENUINE, IMPOSTOR
from models.data import LabeledSet, StratificationError, impostor_cap, sample_impostors, train_test_split
from utils.rng import Xoshiro256StarStar


def _samples(n_genuine: int, n_impostor: int) -> LabeledSet:
    n = n_genuine + n_impostor
    return LabeledSet(
        features=np.arange(n, dtype=float).reshape(-1, 1),
        labels=np.array([GENUINE] * n_genuine + [IMPOSTOR] * n_impostor),
        provenance=tuple(("u", "s", i) for i in range(n)),
    )


def test_stratified_split_sizes():
    train, test = train_test_split(_samples(6, 4), 0.7, seed=42)
    assert (train.n_genuine, train.n_impostor) == (4, 2)
    assert (test.n_genuine, test.n_impostor) == (2, 2)


def test_split_partitions_rows():
    samples = _samples(23, 17)
    train, test = train_test_split(samples, 0.7, seed=3)
    rows = sorted(p[2] for p in train.provenance + test.provenance)
    assert rows == list(range(40))
    # features follow their provenance
    assert all(train.features[i, 0] == train.provenance[i][2] for i in range(len(train)))


def test_split_is_seeded():
    a = train_test_split(_samples(20, 20), 0.7, seed=1)
    b = train_test_split(_samples(20, 20), 0.7, seed=1)
    c = train_test_split(_samples(20, 20), 0.7, seed=2)
    assert a[0].provenance == b[0].provenance and a[1].provenance == b[1].provenance
    assert a[0].provenance != c[0].provenance


def test_single_class_needs_opt_in():
    with pytest.raises(StratificationError, match="single-class"):
        train_test_split(_samples(10, 0), 0.7, seed=1)
    train, test = train_test_split(_samples(10, 0), 0.7, seed=1, single_class_ok=True)
    assert (len(train), len(test)) == (7, 3)


def test_label_with_one_sample_cannot_stratify():
    with pytest.raises(StratificationError, match="label 0 has 1 sample"):
        train_test_split(_samples(10, 1), 0.7, seed=1)


def test_split_arguments():
    with pytest.raises(ValueError, match="ratio"):
        train_test_split(_samples(4, 4), 1.0, seed=1)
    with pytest.raises(ValueError, match="empty"):
        train_test_split(_samples(0, 0), 0.7, seed=1)


def test_impostor_sampling_respects_cap():
    assert impostor_cap(10, 1.0) == 10
    assert impostor_cap(10, 0.55) == 5
    picked = sample_impostors(100, 30, 1.0, Xoshiro256StarStar(4))
    assert picked.size == 30
    assert np.all(np.diff(picked) > 0)
    assert picked.max() < 100
    assert sample_impostors(12, 30, 1.0, Xoshiro256StarStar(4)).tolist() == list(range(12))
    with pytest.raises(ValueError, match="ratio"):
        sample_impostors(10, 5, 0.0, Xoshiro256StarStar(4))
