import math

import numpy as np
import pytest

from actions.base import Action, ActionKind
from features.extraction import (
    FEATURE_INDEX,
    FEATURE_NAMES,
    N_FEATURES,
    FeatureConfig,
    a_beg_time,
    extract_all,
    extract_features,
    largest_deviation,
    num_critical_points,
)
from features.kinematics import kinematics, wrap_angle
from io_layer.events import Dataset


def _action(points, kind: ActionKind = ActionKind.MM) -> Action:
    return Action.from_points(points, kind=kind)


def _random_action(rng: np.random.Generator, n: int | None = None) -> Action:
    n = n or int(rng.integers(4, 60))
    t = np.cumsum(rng.uniform(0.005, 0.1, n))
    xy = np.cumsum(rng.normal(0.0, 8.0, (n, 2)), axis=0) + rng.uniform(0.0, 1000.0, 2)
    kind = ActionKind(rng.choice(["MM", "PC", "DD"]))
    return _action(np.column_stack([t, xy]), kind)


def _pixel_action(rng: np.random.Generator) -> Action:
    """Integer pixels on a 1/1024 s clock, as logged; speed and curvature ties are common."""
    n = int(rng.integers(4, 60))
    t = np.cumsum(rng.integers(5, 100, n)) / 1024.0
    xy = np.cumsum(rng.integers(-12, 13, (n, 2)), axis=0) + rng.integers(0, 1000, 2)
    return _action(np.column_stack([t, xy.astype(float)]))


def test_feature_layout():
    assert N_FEATURES == 39
    assert FEATURE_NAMES[0] == "type_of_action"
    assert FEATURE_NAMES[-1] == "a_beg_time"
    assert len(set(FEATURE_NAMES)) == 39


def test_constant_velocity_kinematics():
    ks = kinematics(_action([(0.0, 0, 0), (0.1, 1, 0), (0.2, 2, 0), (0.3, 3, 0)]))
    assert ks.vx == pytest.approx([10.0, 10.0, 10.0])
    assert ks.a == pytest.approx([0.0, 0.0])
    assert ks.jerk == pytest.approx([0.0])


def test_right_angle_turn():
    ks = kinematics(_action([(0.0, 0, 0), (0.1, 1, 0), (0.2, 1, 1)]))
    assert ks.dtheta == pytest.approx([math.pi / 2])
    assert ks.omega == pytest.approx([math.pi / 2 / 0.1])
    assert ks.curv == pytest.approx([math.pi / 2])


def test_zero_length_steps_carry_direction():
    ks = kinematics(_action([(0.0, 0, 0), (0.1, 0, 0), (0.2, 1, 0), (0.3, 1, 0), (0.4, 1, 1)]))
    assert ks.theta == pytest.approx([0.0, 0.0, 0.0, math.pi / 2])
    assert ks.dtheta == pytest.approx([0.0, 0.0, math.pi / 2])
    assert ks.curv == pytest.approx([0.0, 0.0, math.pi / 2])


def test_wrap_angle_range():
    assert wrap_angle(math.pi) == pytest.approx(math.pi)
    assert wrap_angle(-math.pi) == pytest.approx(math.pi)
    assert wrap_angle(1.5 * math.pi) == pytest.approx(-0.5 * math.pi)


def test_straight_line_features():
    fv = extract_features(_action([(0.0, 0, 0), (0.1, 1, 0), (0.2, 2, 0), (0.3, 3, 0)], ActionKind.PC))
    assert fv["type_of_action"] == 1.0
    assert fv["travelled_distance_in_pixels"] == pytest.approx(3.0)
    assert fv["dist_end_to_end_line"] == pytest.approx(3.0)
    assert fv["straightness"] == pytest.approx(1.0)
    assert fv["elapsed_time"] == pytest.approx(0.3)
    assert fv["direction_of_movement"] == 0.0
    assert fv["num_points"] == 4.0
    assert fv["mean_vx"] == pytest.approx(10.0)
    assert fv["sd_vx"] == pytest.approx(0.0)
    assert fv["sum_of_angles"] == 0.0
    assert fv["largest_deviation"] == 0.0
    assert fv["num_critical_points"] == 0.0


def test_l_shaped_path_straightness():
    pts = [(0.1 * i, float(i), 0.0) for i in range(4)] + [(0.4 + 0.1 * j, 3.0, float(j + 1)) for j in range(4)]
    fv = extract_features(_action(pts))
    assert fv["travelled_distance_in_pixels"] == pytest.approx(7.0)
    assert fv["dist_end_to_end_line"] == pytest.approx(5.0)
    assert fv["straightness"] == pytest.approx(5.0 / 7.0)


def test_closed_loop_has_no_direction():
    fv = extract_features(_action([(0.0, 0, 0), (0.1, 1, 0), (0.2, 1, 1), (0.3, 0, 1), (0.4, 0, 0)]))
    assert fv["straightness"] == 0.0
    assert fv["direction_of_movement"] == 0.0
    assert fv["dist_end_to_end_line"] == 0.0
    assert fv["largest_deviation"] == pytest.approx(math.sqrt(2.0))


def test_largest_deviation_examples():
    assert largest_deviation(np.array([[0, 0], [1, 1], [2, 0]])) == pytest.approx(1.0)
    assert largest_deviation(np.array([[0, 0], [1, 0], [2, 0]])) == 0.0
    assert largest_deviation(np.array([[0, 0], [2, 3], [4, 0]])) == pytest.approx(3.0)
    with pytest.raises(ValueError):
        largest_deviation(np.array([[0, 0]]))


def test_num_critical_points_examples():
    cfg = FeatureConfig(curvature_threshold=0.5)
    assert num_critical_points(np.array([0.1, 0.2, 0.1]), cfg) == 0
    assert num_critical_points(np.array([0.1, 0.9, 0.1]), cfg) == 1
    assert num_critical_points(np.array([0.9, 0.1, -0.8, 0.2]), cfg) == 2
    assert num_critical_points(np.array([]), cfg) == 0


def test_a_beg_time_examples():
    dt = np.array([0.1, 0.1, 0.1])
    assert a_beg_time(np.array([10.0, 10.0, 10.0]), dt) == pytest.approx(0.3)
    assert a_beg_time(np.array([5.0, 10.0, 7.0]), dt) == pytest.approx(0.2)
    assert a_beg_time(np.array([10.0, 5.0, 3.0]), dt) == pytest.approx(0.1)


def test_feature_config_bounds():
    with pytest.raises(ValueError, match="curvature_threshold"):
        FeatureConfig(curvature_threshold=-1.0)


STAT_FAMILIES = ("curv", "omega", "vx", "vy", "v", "a", "jerk")
COUNT_FEATURES = ("type_of_action", "num_points", "num_critical_points")


def _stat_names(*families: str) -> list[str]:
    return [f"{p}_{f}" for f in families for p in ("mean", "sd", "max", "min")]


# Unchanged by rotation, translation and time shift alike.
ROTATION_INVARIANT = (
    *_stat_names("v", "a", "jerk", "curv", "omega"),
    "straightness",
    "travelled_distance_in_pixels",
    "largest_deviation",
    "dist_end_to_end_line",
    "sum_of_angles",
    "elapsed_time",
    "a_beg_time",
)
SCALED_BY_S = (
    "travelled_distance_in_pixels",
    "dist_end_to_end_line",
    "largest_deviation",
    *_stat_names("vx", "vy", "v", "a", "jerk"),
)
SCALE_INVARIANT = ("straightness", "sum_of_angles", "num_points", "elapsed_time", "a_beg_time", *_stat_names("omega"))


def _scale_of(fv, name: str) -> float:
    """Magnitude a feature is compared against: its whole stat family, or itself."""
    prefix, _, family = name.partition("_")
    if prefix in ("mean", "sd", "max", "min") and family in STAT_FAMILIES:
        return max(1.0, abs(fv[f"max_{family}"]), abs(fv[f"min_{family}"]))
    return max(1.0, abs(fv[name]))


def _assert_matches(got, want, names, factor: float = 1.0, tol: float = 1e-9) -> None:
    for name in names:
        expected = factor * want[name]
        assert got[name] == pytest.approx(expected, abs=tol * abs(factor) * _scale_of(want, name)), name


def _rotated(action: Action, phi: float) -> Action:
    c, s = math.cos(phi), math.sin(phi)
    xy = action.points[:, 1:] @ np.array([[c, s], [-s, c]])
    return _action(np.column_stack([action.t, xy]), action.kind)


def _trajectories(seed: int, count: int = 150):
    """Alternating float-valued and pixel-grid actions, with the rng and a pixel flag."""
    rng = np.random.default_rng(seed)
    for i in range(count):
        pixel = i % 2 == 1
        yield rng, (_pixel_action(rng) if pixel else _random_action(rng)), pixel


def test_translation_and_time_shift_leave_features_unchanged():
    for rng, action, _ in _trajectories(10):
        base = extract_features(action)
        shift = np.array([rng.uniform(0.0, 100.0), rng.uniform(-1000.0, 1000.0), rng.uniform(-1000.0, 1000.0)])
        moved = extract_features(_action(action.points + shift, action.kind))
        _assert_matches(moved, base, FEATURE_NAMES)


def test_rotation_turns_direction_and_keeps_shape_features():
    for rng, action, _ in _trajectories(11):
        phi = rng.uniform(-math.pi, math.pi)
        base = extract_features(action)
        turned = extract_features(_rotated(action, phi))
        _assert_matches(turned, base, ROTATION_INVARIANT)
        for name in COUNT_FEATURES:
            assert turned[name] == base[name], name
        if base["dist_end_to_end_line"] > 0.0:
            shift = wrap_angle(turned["direction_of_movement"] - base["direction_of_movement"] - phi)
            assert float(shift) == pytest.approx(0.0, abs=1e-9)


def test_speed_tie_on_pixel_grid_survives_rotation():
    action = _action([(0.0, 0, 0), (0.1, 1, 0), (0.2, 1, 1), (0.3, 1, 1.5)])
    assert extract_features(action)["a_beg_time"] == pytest.approx(0.2)
    for phi in np.linspace(0.01, 3.1, 60):
        turned = extract_features(_rotated(action, float(phi)))
        assert turned["a_beg_time"] == pytest.approx(0.2, abs=1e-9)
        assert turned["num_critical_points"] == extract_features(action)["num_critical_points"]


def test_curvature_plateau_has_no_critical_point_after_rotation():
    # Two equal right-angle turns on unit steps: a tie in |curv|, not a peak.
    action = _action([(0.0, 0, 0), (0.1, 1, 0), (0.2, 1, 1), (0.3, 0, 1), (0.4, 0, 3)])
    assert num_critical_points(kinematics(action).curv) == 0
    for phi in np.linspace(0.01, 3.1, 60):
        assert num_critical_points(kinematics(_rotated(action, float(phi))).curv) == 0


def test_reversal_turns_count_as_plus_pi_at_any_angle():
    action = _action([(0.0, 0, 0), (0.1, 2, 1), (0.2, 0, 0), (0.3, 2, 1)])
    assert kinematics(action).dtheta == pytest.approx([math.pi, math.pi])
    for phi in np.linspace(0.01, 3.1, 60):
        assert kinematics(_rotated(action, float(phi))).dtheta == pytest.approx([math.pi, math.pi], abs=1e-9)


def test_scaling_multiplies_lengths_and_divides_curvature():
    for rng, action, pixel in _trajectories(12):
        k = float(rng.integers(2, 6)) if pixel else rng.uniform(0.2, 5.0)
        base = extract_features(action)
        scaled = extract_features(_action(np.column_stack([action.t, k * action.points[:, 1:]]), action.kind))
        _assert_matches(scaled, base, SCALED_BY_S, factor=k)
        _assert_matches(scaled, base, _stat_names("curv"), factor=1.0 / k)
        _assert_matches(scaled, base, SCALE_INVARIANT)
        assert scaled["type_of_action"] == base["type_of_action"]
        if base["dist_end_to_end_line"] > 0.0:
            assert scaled["direction_of_movement"] == pytest.approx(base["direction_of_movement"], abs=1e-9)


def test_feature_bounds_hold():
    rng = np.random.default_rng(13)
    for _ in range(200):
        fv = extract_features(_random_action(rng))
        assert np.all(np.isfinite(fv.values))
        assert 0.0 <= fv["straightness"] <= 1.0
        assert fv["num_points"] >= 4
        for family in ("curv", "omega", "vx", "vy", "v", "a", "jerk"):
            assert fv[f"sd_{family}"] >= 0.0
            assert fv[f"min_{family}"] <= fv[f"mean_{family}"] <= fv[f"max_{family}"]


def _stats(values: list[float]) -> list[float]:
    mean = sum(values) / len(values)
    sd = math.sqrt(sum((v - mean) ** 2 for v in values) / len(values))
    return [mean, sd, max(values), min(values)]


def _reference_features(points: np.ndarray, kind_code: int, threshold: float) -> list[float]:
    """Point-by-point restatement of every feature with plain floats."""
    t, x, y = (list(map(float, points[:, i])) for i in range(3))
    n = len(t)
    dt = [t[i + 1] - t[i] for i in range(n - 1)]
    dx = [x[i + 1] - x[i] for i in range(n - 1)]
    dy = [y[i + 1] - y[i] for i in range(n - 1)]
    ds = [math.hypot(a, b) for a, b in zip(dx, dy)]
    vx = [a / b for a, b in zip(dx, dt)]
    vy = [a / b for a, b in zip(dy, dt)]
    v = [math.hypot(a, b) for a, b in zip(vx, vy)]
    theta = [math.atan2(b, a) for a, b in zip(dx, dy)]
    dtheta = []
    for i in range(n - 2):
        d = theta[i + 1] - theta[i]
        while d <= -math.pi:
            d += 2 * math.pi
        while d > math.pi:
            d -= 2 * math.pi
        dtheta.append(d)
    omega = [dtheta[i] / dt[i + 1] for i in range(n - 2)]
    curv = [dtheta[i] / ds[i + 1] for i in range(n - 2)]
    acc = [(v[i + 1] - v[i]) / dt[i + 1] for i in range(n - 2)]
    jerk = [(acc[i + 1] - acc[i]) / dt[i + 2] for i in range(n - 3)]

    travelled = sum(ds)
    ex, ey = x[-1] - x[0], y[-1] - y[0]
    chord = math.hypot(ex, ey)
    deviation = max((abs(ex * (y[i] - y[0]) - ey * (x[i] - x[0])) / chord for i in range(1, n - 1)), default=0.0)
    peaks = 0
    for i, c in enumerate(curv):
        left = abs(curv[i - 1]) if i > 0 else -math.inf
        right = abs(curv[i + 1]) if i < len(curv) - 1 else -math.inf
        if abs(c) > left and abs(c) > right and abs(c) >= threshold:
            peaks += 1
    rise = 0
    while rise + 1 < len(v) and v[rise + 1] >= v[rise]:
        rise += 1

    def family(values: list[float]) -> list[float]:
        return _stats(values) if values else [0.0] * 4

    return [
        float(kind_code),
        travelled,
        t[-1] - t[0],
        math.atan2(ey, ex),
        min(1.0, chord / travelled),
        float(n),
        sum(abs(d) for d in dtheta),
        *family(curv),
        *family(omega),
        deviation,
        chord,
        float(peaks),
        *family(vx),
        *family(vy),
        *family(v),
        *family(acc),
        *family(jerk),
        sum(dt[: rise + 1]),
    ]


def test_features_match_reference_definitions():
    rng = np.random.default_rng(14)
    cfg = FeatureConfig(curvature_threshold=0.05)
    for _ in range(100):
        action = _random_action(rng, n=int(rng.integers(4, 50)))
        got = extract_features(action, cfg).values
        want = _reference_features(action.points, action.kind.code, cfg.curvature_threshold)
        assert got == pytest.approx(want, rel=1e-9, abs=1e-9)


def test_extract_all_keeps_dataset_order(sample_table):
    assert len(sample_table) == 60
    assert sample_table.users() == ["7", "9"]
    assert sample_table.matrix.shape == (60, N_FEATURES)
    first = sample_table.for_user("7")
    assert list(first.session_ids[:15]) == ["0041905381"] * 15
    assert list(first.action_ids[:3]) == [0, 1, 2]
    assert set(sample_table.matrix[:, FEATURE_INDEX["type_of_action"]]) == {0.0, 1.0, 2.0}


def test_extract_all_on_empty_dataset():
    table = extract_all(Dataset(users={}))
    assert len(table) == 0
    assert table.matrix.shape == (0, N_FEATURES)
