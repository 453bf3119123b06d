from pathlib import Path

import numpy as np
import pytest

from features.extraction import FeatureTable, extract_all
from io_layer.loaders import load_dataset

ROOT = Path(__file__).resolve().parents[1]
SAMPLE_ROOT = ROOT / "data" / "sample"

HEADER = "record timestamp,client timestamp,button,state,x,y"
GAP = 12.0


def _stroke(rng: np.random.Generator, fast: bool) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Relative (t, x, y) samples of one movement.

    Fast users make long straight strokes at a fixed 10 ms rate; slow users
    make short curvy strokes with irregular sampling.
    """
    n = int(rng.integers(8, 15))
    if fast:
        dt = np.full(n - 1, 0.01)
        turns = rng.normal(0.0, 0.01, n - 1)
        step = rng.normal(15.0, 1.0, n - 1)
    else:
        dt = rng.uniform(0.03, 0.05, n - 1)
        turns = 0.5 * np.sin(1.1 * np.arange(n - 1) + rng.uniform(0.0, 2.0 * np.pi))
        step = np.clip(rng.normal(6.0, 1.0, n - 1), 2.0, None)
    heading = rng.uniform(-np.pi, np.pi) + np.cumsum(turns)
    t = np.concatenate(([0.0], np.cumsum(dt)))
    x = np.concatenate(([0.0], np.cumsum(step * np.cos(heading))))
    y = np.concatenate(([0.0], np.cumsum(step * np.sin(heading))))
    return t, x, y


def write_synthetic_dataset(
    root: Path,
    n_actions: int = 500,
    sessions: int = 5,
    seed: int = 7,
) -> Path:
    """Two behaviorally distinct users in Balabit session layout.

    user1 is fast and straight, user2 slow and curvy. Every fourth action ends
    in a click (PC); actions are separated by a 12 s pause so each stroke is
    one action.
    """
    rng = np.random.default_rng(seed)
    per_session = n_actions // sessions
    for user, fast in (("user1", True), ("user2", False)):
        for s in range(sessions):
            lines = [HEADER]
            clock = 0.0
            for i in range(per_session):
                t, x, y = _stroke(rng, fast)
                x0, y0 = rng.uniform(200.0, 1000.0, 2)
                for tk, xk, yk in zip(t, x, y):
                    stamp = clock + tk
                    lines.append(f"{stamp:.3f},{stamp:.3f},NoButton,Move,{x0 + xk:.1f},{y0 + yk:.1f}")
                if i % 4 == 3:
                    end = clock + t[-1]
                    cx, cy = x0 + x[-1], y0 + y[-1]
                    lines.append(f"{end + 0.05:.3f},{end + 0.05:.3f},Left,Pressed,{cx:.1f},{cy:.1f}")
                    lines.append(f"{end + 0.1:.3f},{end + 0.1:.3f},Left,Released,{cx:.1f},{cy:.1f}")
                clock += t[-1] + GAP
            path = root / user / f"session_{s:04d}"
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return root


@pytest.fixture(scope="session")
def synthetic_root(tmp_path_factory: pytest.TempPathFactory) -> Path:
    return write_synthetic_dataset(tmp_path_factory.mktemp("synthetic"))


@pytest.fixture(scope="session")
def synthetic_table(synthetic_root: Path) -> FeatureTable:
    return extract_all(load_dataset(synthetic_root))


@pytest.fixture(scope="session")
def sample_table() -> FeatureTable:
    return extract_all(load_dataset(SAMPLE_ROOT))
