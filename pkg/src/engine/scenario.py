from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
import logging
import re

import numpy as np

from actions.base import ActionKind
from features.extraction import FEATURE_INDEX, FeatureTable
from models.base import GENUINE, IMPOSTOR
from models.data import LabeledSet, StratificationError, sample_impostors, train_test_split
from utils.rng import Xoshiro256StarStar, derive_seed

logger = logging.getLogger(__name__)

# Row order of the published Balabit result tables.
REFERENCE_USER_ORDER = ("35", "7", "9", "12", "15", "16", "20", "21", "23", "29")


def _natural_key(user_id: str) -> list[tuple[int, int | str]]:
    return [(0, int(t)) if t.isdigit() else (1, t) for t in re.split(r"(\d+)", user_id) if t]


def ordered_users(user_ids: list[str] | tuple[str, ...]) -> list[str]:
    """Reference-table users first, then the rest in numeric-aware order."""
    present = set(user_ids)
    head = [u for u in REFERENCE_USER_ORDER if u in present]
    rest = sorted(present.difference(head), key=_natural_key)
    return head + rest


@dataclass(frozen=True)
class ProtocolConfig:
    split_ratio: float = 0.7
    impostor_ratio: float = 1.0
    min_user_actions: int = 10

    def __post_init__(self) -> None:
        self.validate()

    def validate(self) -> None:
        if not (0.0 < self.split_ratio < 1.0):
            raise ValueError("split_ratio must be in (0, 1)")
        if self.impostor_ratio <= 0.0:
            raise ValueError("impostor_ratio must be > 0")
        if self.min_user_actions < 2:
            raise ValueError("min_user_actions must be >= 2")


@dataclass(frozen=True)
class UserTask:
    """One target user's train/test material plus the seed its model is fit with."""

    user_id: str
    train: LabeledSet
    test: LabeledSet
    seed: int


def _labeled(table: FeatureTable, rows: np.ndarray, labels: np.ndarray, first_column: int = 0) -> LabeledSet:
    return LabeledSet(
        features=table.matrix[rows, first_column:],
        labels=labels.astype(np.int64),
        provenance=tuple((table.user_ids[i], table.session_ids[i], table.action_ids[i]) for i in rows),
    )


class TaskGenerator(ABC):
    """Builds per-user tasks for one experiment."""

    seed: int

    @property
    @abstractmethod
    def scenario(self) -> str:
        """Report tag: verify, a or b."""

    @property
    def action(self) -> str:
        return "all"

    @abstractmethod
    def generate(self) -> list[UserTask]:
        """Return tasks in report row order."""


@dataclass(frozen=True)
class VerificationTaskGenerator(TaskGenerator):
    """Genuine-only tasks: each user's own actions split into train and test."""

    table: FeatureTable
    seed: int = 42
    protocol: ProtocolConfig = field(default_factory=ProtocolConfig)

    @property
    def scenario(self) -> str:
        return "verify"

    def generate(self) -> list[UserTask]:
        tasks: list[UserTask] = []
        for position, user_id in enumerate(ordered_users(self.table.users())):
            rows = np.flatnonzero(np.asarray(self.table.user_ids) == user_id)
            if rows.size < self.protocol.min_user_actions:
                logger.warning(
                    "user %s skipped: %d actions, need %d", user_id, rows.size, self.protocol.min_user_actions
                )
                continue
            user_seed = derive_seed(self.seed, position)
            samples = _labeled(self.table, rows, np.full(rows.size, GENUINE))
            train, test = train_test_split(samples, self.protocol.split_ratio, user_seed, single_class_ok=True)
            if len(train) == 0 or len(test) == 0:
                logger.warning("user %s skipped: split leaves an empty side", user_id)
                continue
            tasks.append(UserTask(user_id, train, test, seed=derive_seed(user_seed, 1)))
        return tasks


@dataclass(frozen=True)
class AuthenticationTaskGenerator(TaskGenerator):
    """Genuine-versus-impostor tasks.

    With `kind` unset every action kind takes part (scenario A); otherwise
    the table is restricted to that kind (scenario B) and type_of_action,
    constant there, is left out of the features. For every target user the
    impostor rows are drawn uniformly without replacement from all other
    users, at most `impostor_ratio` times the genuine count.
    """

    table: FeatureTable
    kind: ActionKind | None = None
    seed: int = 42
    protocol: ProtocolConfig = field(default_factory=ProtocolConfig)

    @property
    def scenario(self) -> str:
        return "a" if self.kind is None else "b"

    @property
    def action(self) -> str:
        return "all" if self.kind is None else self.kind.value.lower()

    @property
    def first_column(self) -> int:
        return 0 if self.kind is None else FEATURE_INDEX["type_of_action"] + 1

    def generate(self) -> list[UserTask]:
        table = self.table if self.kind is None else self.table.filter_kind(self.kind)
        if self.kind is not None:
            if len(table) == 0:
                logger.warning("no %s actions for any user; nothing to evaluate", self.kind.value)
                return []
            present = set(table.user_ids)
            for user_id in ordered_users(self.table.users()):
                if user_id not in present:
                    logger.warning("user %s skipped: no %s actions", user_id, self.kind.value)
        users = ordered_users(table.users())
        if len(users) < 2:
            raise ValueError(f"authentication needs at least 2 users, found {len(users)}")

        owners = np.asarray(table.user_ids)
        tasks: list[UserTask] = []
        for position, user_id in enumerate(users):
            genuine = np.flatnonzero(owners == user_id)
            if genuine.size < self.protocol.min_user_actions:
                logger.warning(
                    "user %s skipped: %d actions, need %d", user_id, genuine.size, self.protocol.min_user_actions
                )
                continue
            user_seed = derive_seed(self.seed, position)
            pool = np.flatnonzero(owners != user_id)
            picked = pool[
                sample_impostors(
                    pool.size, genuine.size, self.protocol.impostor_ratio, Xoshiro256StarStar(derive_seed(user_seed, 0))
                )
            ]
            rows = np.concatenate([genuine, picked])
            labels = np.concatenate([np.full(genuine.size, GENUINE), np.full(picked.size, IMPOSTOR)])
            try:
                train, test = train_test_split(
                    _labeled(table, rows, labels, first_column=self.first_column), self.protocol.split_ratio, user_seed
                )
            except StratificationError as exc:
                logger.warning("user %s skipped: %s", user_id, exc)
                continue
            if len(train) == 0 or len(test) == 0:
                logger.warning("user %s skipped: split leaves an empty side", user_id)
                continue
            logger.debug("user %s: %d genuine, %d impostor rows", user_id, genuine.size, picked.size)
            tasks.append(UserTask(user_id, train, test, seed=derive_seed(user_seed, 1)))
        return tasks
