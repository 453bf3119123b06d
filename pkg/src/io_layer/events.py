from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
import math


class Button(str, Enum):
    NO_BUTTON = "NoButton"
    LEFT = "Left"
    RIGHT = "Right"
    SCROLL = "Scroll"
    OTHER = "Other"


class State(str, Enum):
    MOVE = "Move"
    PRESSED = "Pressed"
    RELEASED = "Released"
    DRAG = "Drag"
    DOWN = "Down"
    UP = "Up"
    OTHER = "Other"


_BUTTONS = {b.value: b for b in Button if b is not Button.OTHER}
_STATES = {s.value: s for s in State if s is not State.OTHER}


@dataclass(frozen=True)
class RawEvent:
    """One row of a session log.

    `button` and `state` keep the token exactly as logged; vendor variants
    outside the known vocabulary classify as OTHER but are never rejected.
    """

    rtime: float
    ctime: float
    button: str
    state: str
    x: float
    y: float

    def __post_init__(self) -> None:
        for name in ("rtime", "ctime", "x", "y"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.rtime < 0.0 or self.ctime < 0.0:
            raise ValueError("timestamps must be non-negative")

    @property
    def button_kind(self) -> Button:
        return _BUTTONS.get(self.button, Button.OTHER)

    @property
    def state_kind(self) -> State:
        return _STATES.get(self.state, State.OTHER)

    @property
    def is_scroll(self) -> bool:
        return self.button_kind is Button.SCROLL or self.state_kind in (State.DOWN, State.UP)


@dataclass(frozen=True)
class Session:
    user_id: str
    session_id: str
    events: tuple[RawEvent, ...]

    def __post_init__(self) -> None:
        if not self.events:
            raise ValueError("session must contain at least one event")
        for prev, cur in zip(self.events, self.events[1:]):
            if cur.ctime <= prev.ctime:
                raise ValueError("session events must have strictly increasing ctime")

    def __len__(self) -> int:
        return len(self.events)


@dataclass(frozen=True)
class Dataset:
    """Sessions per user, keyed and ordered by user id."""

    users: dict[str, list[Session]] = field(default_factory=dict)

    def user_ids(self) -> list[str]:
        return list(self.users)

    def sessions(self) -> list[Session]:
        return [s for sessions in self.users.values() for s in sessions]

    def session_count(self) -> int:
        return sum(len(v) for v in self.users.values())

    def event_count(self) -> int:
        return sum(len(s) for s in self.sessions())
