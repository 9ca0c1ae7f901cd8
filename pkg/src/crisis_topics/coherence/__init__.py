"""Sliding-window NPMI topic coherence (C_v)."""

from .cv import CoherenceConfig, CoherenceReport, TopicScore, cv_coherence, npmi
from .windows import WindowStats, sliding_windows

__all__ = [
    "CoherenceConfig",
    "CoherenceReport",
    "TopicScore",
    "WindowStats",
    "cv_coherence",
    "npmi",
    "sliding_windows",
]
