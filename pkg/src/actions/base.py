from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np


class ActionKind(str, Enum):
    MM = "MM"
    PC = "PC"
    DD = "DD"

    @property
    def code(self) -> int:
        """Categorical encoding used as the first feature (0=MM, 1=PC, 2=DD)."""
        return _CODES[self]

    @classmethod
    def parse(cls, token: str) -> "ActionKind":
        try:
            return cls(token.strip().upper())
        except ValueError:
            raise ValueError(f"unknown action kind: {token!r}") from None


_CODES = {ActionKind.MM: 0, ActionKind.PC: 1, ActionKind.DD: 2}


@dataclass(frozen=True)
class Action:
    """A contiguous trajectory of one session; the unit of classification.

    `points` is an (n, 3) array of (t, x, y) with t on the client clock.
    """

    user_id: str
    session_id: str
    action_id: int
    kind: ActionKind
    points: np.ndarray

    def __post_init__(self) -> None:
        if self.points.ndim != 2 or self.points.shape[1] != 3:
            raise ValueError("points must be an (n, 3) array of (t, x, y)")
        if self.points.shape[0] < 2:
            raise ValueError("an action needs at least two points")
        if np.any(np.diff(self.points[:, 0]) <= 0.0):
            raise ValueError("point times must be strictly increasing")

    @property
    def t(self) -> np.ndarray:
        return self.points[:, 0]

    @property
    def x(self) -> np.ndarray:
        return self.points[:, 1]

    @property
    def y(self) -> np.ndarray:
        return self.points[:, 2]

    def __len__(self) -> int:
        return int(self.points.shape[0])

    @classmethod
    def from_points(
        cls,
        points: list[tuple[float, float, float]] | np.ndarray,
        kind: ActionKind = ActionKind.MM,
        user_id: str = "0",
        session_id: str = "0",
        action_id: int = 0,
    ) -> "Action":
        return cls(
            user_id=user_id,
            session_id=session_id,
            action_id=action_id,
            kind=kind,
            points=np.asarray(points, dtype=float).reshape(-1, 3),
        )
