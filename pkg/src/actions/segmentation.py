from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass, field
import logging

import numpy as np

from actions.base import Action, ActionKind
from io_layer.events import Dataset, RawEvent, Session, State

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SegmentConfig:
    gap_threshold: float = 10.0
    min_points: int = 4

    def __post_init__(self) -> None:
        self.validate()

    def validate(self) -> None:
        if not self.gap_threshold > 0.0:
            raise ValueError("gap_threshold must be > 0")
        if self.min_points < 4:
            raise ValueError("min_points must be >= 4")


@dataclass
class SegmentationResult:
    """Retained segments (kind, events) plus every event that went unused."""

    segments: list[tuple[ActionKind, tuple[RawEvent, ...]]] = field(default_factory=list)
    discarded: list[RawEvent] = field(default_factory=list)


class _Segmenter:
    def __init__(self, cfg: SegmentConfig):
        self.cfg = cfg
        self.result = SegmentationResult()
        self.pending: list[RawEvent] = []
        self.folded: list[RawEvent] = []
        self.scope: list[RawEvent] | None = None
        self.dragged = False
        self.last_ctime: float | None = None

    def feed(self, event: RawEvent) -> None:
        state = event.state_kind
        if event.is_scroll or state is State.OTHER:
            self.result.discarded.append(event)
            return
        if self.last_ctime is not None and event.ctime - self.last_ctime > self.cfg.gap_threshold:
            self.close()
        self.last_ctime = event.ctime

        if state is State.MOVE:
            (self.scope if self.scope is not None else self.pending).append(event)
        elif state is State.PRESSED:
            self._drop_scope()
            self.folded, self.pending = self.pending, []
            self.scope = [event]
            self.dragged = False
        elif state is State.DRAG:
            if self.scope is None:
                self.result.discarded.append(event)
            else:
                self.scope.append(event)
                self.dragged = True
        elif state is State.RELEASED:
            if self.scope is None:
                self.result.discarded.append(event)
            else:
                self.scope.append(event)
                kind = ActionKind.DD if self.dragged else ActionKind.PC
                self._emit(kind, self.folded + self.scope)
                self.folded, self.scope = [], None

    def close(self) -> None:
        """End the current action: flush movement, drop an unmatched click."""
        if self.pending:
            self._emit(ActionKind.MM, self.pending)
            self.pending = []
        self._drop_scope()

    def _drop_scope(self) -> None:
        if self.scope is not None:
            self.result.discarded.extend(self.folded + self.scope)
            self.folded, self.scope = [], None

    def _emit(self, kind: ActionKind, events: list[RawEvent]) -> None:
        if len(events) < self.cfg.min_points:
            self.result.discarded.extend(events)
        else:
            self.result.segments.append((kind, tuple(events)))


def split_session(session: Session, cfg: SegmentConfig | None = None) -> SegmentationResult:
    """Partition a session's events into MM/PC/DD segments and discarded events.

    Boundaries, in order: a Pressed..Released scope is one click action (DD
    when a Drag occurs inside it, else PC) and absorbs the movement just
    before it; an inter-event gap above `gap_threshold` ends the current
    action; a movement run that ends without a click is MM. Segments shorter
    than `min_points` are discarded.
    """
    segmenter = _Segmenter(cfg or SegmentConfig())
    for event in session.events:
        segmenter.feed(event)
    segmenter.close()
    return segmenter.result


def segment_actions(session: Session, cfg: SegmentConfig | None = None) -> list[Action]:
    result = split_session(session, cfg)
    actions: list[Action] = []
    for idx, (kind, events) in enumerate(result.segments):
        points = np.array([(e.ctime, e.x, e.y) for e in events], dtype=float)
        actions.append(
            Action(user_id=session.user_id, session_id=session.session_id, action_id=idx, kind=kind, points=points)
        )
    return actions


def action_counts(actions: Iterable[Action]) -> dict[ActionKind, int]:
    counts = {kind: 0 for kind in ActionKind}
    for action in actions:
        counts[action.kind] += 1
    return counts


def segment_dataset(dataset: Dataset, cfg: SegmentConfig | None = None) -> dict[str, list[Action]]:
    cfg = cfg or SegmentConfig()
    out: dict[str, list[Action]] = {}
    for user_id, sessions in dataset.users.items():
        actions: list[Action] = []
        for session in sessions:
            actions.extend(segment_actions(session, cfg))
        out[user_id] = actions
        logger.debug("user %s: %d actions", user_id, len(actions))
    return out
