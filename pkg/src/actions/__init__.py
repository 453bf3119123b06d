from actions.base import Action, ActionKind
from actions.segmentation import SegmentConfig, SegmentationResult, action_counts, segment_actions, segment_dataset, split_session

__all__ = [
    "Action",
    "ActionKind",
    "SegmentConfig",
    "SegmentationResult",
    "action_counts",
    "segment_actions",
    "segment_dataset",
    "split_session",
]
