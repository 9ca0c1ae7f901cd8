"""Pipeline orchestration: manifest, stages, CLI, review service."""

from .config import PipelineConfig
from .manifest import STAGE_DEPENDENCIES, STAGES, PipelineManifest, StageRecord
from .stages import run_all, run_stage

__all__ = [
    "PipelineConfig",
    "PipelineManifest",
    "STAGES",
    "STAGE_DEPENDENCIES",
    "StageRecord",
    "run_all",
    "run_stage",
]
