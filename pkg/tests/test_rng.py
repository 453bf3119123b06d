import numpy as np
import pytest

from utils.rng import SplitMix64, Xoshiro256StarStar, derive_seed


def test_splitmix64_reference_outputs():
    sm = SplitMix64(0)
    assert [sm.next_u64() for _ in range(4)] == [
        0xE220A8397B1DCDAF,
        0x6E789E6AA1B965F4,
        0x06C45D188009454F,
        0xF88BB8A8724C81EC,
    ]


def test_xoshiro_state_is_seeded_through_splitmix64():
    assert Xoshiro256StarStar(0).state == (
        0xE220A8397B1DCDAF,
        0x6E789E6AA1B965F4,
        0x06C45D188009454F,
        0xF88BB8A8724C81EC,
    )
    assert Xoshiro256StarStar(42).state == (
        0xBDD732262FEB6E95,
        0x28EFE333B266F103,
        0x47526757130F9F52,
        0x581CE1FF0E4AE394,
    )


def test_xoshiro_pinned_draws():
    rng = Xoshiro256StarStar(0)
    assert [rng.next_u64() for _ in range(5)] == [
        11091344671253066420,
        13793997310169335082,
        1900383378846508768,
        7684712102626143532,
        13521403990117723737,
    ]
    rng = Xoshiro256StarStar(42)
    assert [rng.next_u64() for _ in range(5)] == [
        1546998764402558742,
        6990951692964543102,
        12544586762248559009,
        17057574109182124193,
        18295552978065317476,
    ]


def test_random_and_randbelow_ranges():
    rng = Xoshiro256StarStar(3)
    floats = [rng.random() for _ in range(1000)]
    assert min(floats) >= 0.0 and max(floats) < 1.0
    ints = [rng.randbelow(7) for _ in range(1000)]
    assert set(ints) == set(range(7))
    with pytest.raises(ValueError, match="positive"):
        rng.randbelow(0)


def test_permutation_and_sample_are_valid_and_repeatable():
    a = Xoshiro256StarStar(11).permutation(50)
    b = Xoshiro256StarStar(11).permutation(50)
    assert np.array_equal(a, b)
    assert sorted(a.tolist()) == list(range(50))

    picked = Xoshiro256StarStar(5).sample(30, 10)
    assert len(set(picked.tolist())) == 10
    assert all(0 <= i < 30 for i in picked)
    assert Xoshiro256StarStar(5).sample(30, 0).size == 0
    with pytest.raises(ValueError):
        Xoshiro256StarStar(5).sample(3, 4)


def test_integers_draw_with_replacement():
    draws = Xoshiro256StarStar(9).integers(5, 200)
    assert draws.shape == (200,)
    assert draws.min() >= 0 and draws.max() < 5


def test_derive_seed_is_deterministic_and_spreads_streams():
    seeds = [derive_seed(42, i) for i in range(100)]
    assert seeds == [derive_seed(42, i) for i in range(100)]
    assert len(set(seeds)) == 100
    assert derive_seed(42, 0) != derive_seed(43, 0)
