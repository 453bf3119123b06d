from __future__ import annotations

from collections.abc import Iterable
from concurrent.futures import ThreadPoolExecutor
import logging
import math
from pathlib import Path
import re
from typing import IO

from io_layer.events import Dataset, RawEvent, Session, State

logger = logging.getLogger(__name__)

FIELD_COUNT = 6
HEADER_TOKENS = {"record timestamp", "record_timestamp", "rtime"}

_USER_DIR = re.compile(r"^user(\d+)$", re.IGNORECASE)
_SESSION_PREFIX = "session_"


class EventParseError(ValueError):
    def __init__(self, line_number: int | None, reason: str):
        where = f"line {line_number}" if line_number is not None else "input"
        super().__init__(f"{where}: {reason}")
        self.line_number = line_number
        self.reason = reason


class EmptySessionError(ValueError):
    """Raised when a session source holds no valid data rows."""


class DatasetError(ValueError):
    """Raised when a dataset root is missing or holds no users."""


def parse_event_line(line: str, line_number: int | None = None) -> RawEvent | None:
    """Parse one session row; returns None for a header or blank row."""
    text = line.strip()
    if not text:
        return None
    fields = [f.strip() for f in text.split(",")]
    if fields[0].lower() in HEADER_TOKENS and not _is_number(fields[0]):
        return None
    if len(fields) != FIELD_COUNT:
        raise EventParseError(line_number, f"expected {FIELD_COUNT} fields, got {len(fields)}")
    rtime = _to_float(fields[0], "rtime", line_number)
    ctime = _to_float(fields[1], "ctime", line_number)
    x = _to_float(fields[4], "x", line_number)
    y = _to_float(fields[5], "y", line_number)
    if rtime < 0.0 or ctime < 0.0:
        raise EventParseError(line_number, "bad timestamp: negative value")
    return RawEvent(rtime=rtime, ctime=ctime, button=fields[2], state=fields[3], x=x, y=y)


def serialize_event(event: RawEvent) -> str:
    """Canonical `rtime,ctime,button,state,x,y` text that parses back to `event`."""
    return ",".join(
        [
            _format_number(event.rtime),
            _format_number(event.ctime),
            event.button,
            event.state,
            _format_number(event.x),
            _format_number(event.y),
        ]
    )


def load_session(source: IO[bytes] | IO[str] | Iterable[str], user_id: str, session_id: str) -> Session:
    events: list[RawEvent] = []
    for line_number, raw in enumerate(_iter_lines(source), start=1):
        event = parse_event_line(raw, line_number)
        if event is not None:
            events.append(event)
    if not events:
        raise EmptySessionError(f"session {user_id}/{session_id} has no valid rows")
    return Session(user_id=user_id, session_id=session_id, events=merge_duplicate_ctimes(events))


def load_session_file(path: str | Path, user_id: str, session_id: str) -> Session:
    with Path(path).open("rb") as f:
        return load_session(f, user_id, session_id)


def merge_duplicate_ctimes(events: list[RawEvent]) -> tuple[RawEvent, ...]:
    """Sort by ctime and collapse rows sharing a ctime into one event.

    The merged event keeps the last row's coordinates and rtime; button and
    state come from the last non-Move row of the group, if there is one.
    """
    ordered = sorted(events, key=lambda e: e.ctime)
    merged: list[RawEvent] = []
    i = 0
    while i < len(ordered):
        j = i + 1
        while j < len(ordered) and ordered[j].ctime == ordered[i].ctime:
            j += 1
        group = ordered[i:j]
        last = group[-1]
        marker = next((e for e in reversed(group) if e.state_kind is not State.MOVE), last)
        merged.append(
            RawEvent(rtime=last.rtime, ctime=last.ctime, button=marker.button, state=marker.state, x=last.x, y=last.y)
        )
        i = j
    return tuple(merged)


def load_dataset(root: str | Path, workers: int = 1) -> Dataset:
    """Load `<root>/<user>/<session>` files into a Dataset.

    Unparseable sessions are dropped with a warning; a user left without
    sessions is kept with an empty list. Files whose names give the same
    session id (`s1.csv`, `s1.txt`) keep only the first by file name.
    """
    root_path = Path(root)
    if not root_path.is_dir():
        raise DatasetError(f"dataset root not found: {root_path}")

    user_dirs = sorted(
        (p for p in root_path.iterdir() if p.is_dir() and not p.name.startswith(".")),
        key=lambda p: user_id_from_name(p.name),
    )
    if not user_dirs:
        raise DatasetError(f"no users found under {root_path}")

    jobs: list[tuple[str, str, Path]] = []
    for user_dir in user_dirs:
        uid = user_id_from_name(user_dir.name)
        files = [p for p in user_dir.iterdir() if p.is_file() and not p.name.startswith(".")]
        seen: dict[str, Path] = {}
        for path in sorted(files, key=lambda p: (session_id_from_name(p.name), p.name)):
            sid = session_id_from_name(path.name)
            if sid in seen:
                logger.warning("user %s: %s repeats session id %s of %s; skipped", uid, path.name, sid, seen[sid].name)
                continue
            seen[sid] = path
            jobs.append((uid, sid, path))

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parsed = list(pool.map(_try_load, jobs))
    else:
        parsed = [_try_load(job) for job in jobs]

    users: dict[str, list[Session]] = {user_id_from_name(d.name): [] for d in user_dirs}
    for session in parsed:
        if session is not None:
            users[session.user_id].append(session)
    for uid, sessions in users.items():
        if not sessions:
            logger.warning("user %s has no parseable sessions", uid)
    logger.info("loaded %d sessions for %d users from %s", sum(len(v) for v in users.values()), len(users), root_path)
    return Dataset(users=users)


def user_id_from_name(name: str) -> str:
    match = _USER_DIR.match(name)
    return match.group(1) if match else name


def session_id_from_name(name: str) -> str:
    stem = Path(name).stem
    return stem[len(_SESSION_PREFIX):] if stem.lower().startswith(_SESSION_PREFIX) else stem


def _try_load(job: tuple[str, str, Path]) -> Session | None:
    uid, sid, path = job
    try:
        return load_session_file(path, uid, sid)
    except (ValueError, UnicodeDecodeError) as exc:
        logger.warning("dropping session %s/%s (%s): %s", uid, sid, path, exc)
        return None


def _iter_lines(source: IO[bytes] | IO[str] | Iterable[str]) -> Iterable[str]:
    for line in source:
        yield line.decode("utf-8") if isinstance(line, bytes) else line


def _to_float(value: str, name: str, line_number: int | None) -> float:
    try:
        out = float(value)
    except ValueError:
        raise EventParseError(line_number, f"bad {_kind(name)} {name}: {value!r}") from None
    if not math.isfinite(out):
        raise EventParseError(line_number, f"bad {_kind(name)} {name}: {value!r}")
    return out


def _kind(name: str) -> str:
    return "timestamp" if name in ("rtime", "ctime") else "coordinate"


def _is_number(token: str) -> bool:
    try:
        float(token)
    except ValueError:
        return False
    return True


def _format_number(value: float) -> str:
    if value.is_integer() and abs(value) < 1e15:
        text = str(int(value))
        return "-0" if text == "0" and math.copysign(1.0, value) < 0.0 else text
    return repr(value)
