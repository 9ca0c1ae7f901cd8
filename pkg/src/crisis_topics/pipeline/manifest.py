"""Stage manifest: content hashes gate every downstream stage.

Each completed stage records the SHA-256 of its outputs and of the upstream
artifacts it consumed. A downstream stage refuses to run when a recorded
upstream hash no longer matches the file on disk; timestamps are recorded
for humans but never trusted for staleness.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import StaleInputError
from ..ioutil import atomic_write_json, read_json, sha256_file

MANIFEST_NAME = "manifest.json"

STAGES = ("ingest", "lda", "embed", "cluster", "represent", "coherence",
          "map", "analyze")

STAGE_DEPENDENCIES: dict[str, tuple[str, ...]] = {
    "ingest": (),
    "lda": ("ingest",),
    "embed": ("ingest",),
    "cluster": ("embed",),
    "represent": ("cluster", "ingest"),
    "coherence": ("lda", "represent", "ingest"),
    "map": ("ingest", "lda", "cluster", "represent"),
    "analyze": ("map", "ingest"),
}


@dataclass
class StageRecord:
    completed_utc: int
    config_hash: str
    seed: int
    inputs: dict[str, str] = field(default_factory=dict)
    outputs: dict[str, str] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "completed_utc": self.completed_utc,
            "config_hash": self.config_hash,
            "seed": self.seed,
            "inputs": dict(sorted(self.inputs.items())),
            "outputs": dict(sorted(self.outputs.items())),
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "StageRecord":
        return cls(
            completed_utc=obj["completed_utc"],
            config_hash=obj["config_hash"],
            seed=obj["seed"],
            inputs=dict(obj.get("inputs", {})),
            outputs=dict(obj.get("outputs", {})),
        )


@dataclass
class PipelineManifest:
    out_dir: Path
    stages: dict[str, StageRecord] = field(default_factory=dict)

    @property
    def path(self) -> Path:
        return self.out_dir / MANIFEST_NAME

    @classmethod
    def load(cls, out_dir: str | Path) -> "PipelineManifest":
        out_dir = Path(out_dir)
        manifest = cls(out_dir=out_dir)
        if manifest.path.is_file():
            obj = read_json(manifest.path)
            manifest.stages = {
                name: StageRecord.from_dict(body)
                for name, body in obj.get("stages", {}).items()
            }
        return manifest

    def save(self) -> None:
        atomic_write_json(self.path, {
            "stages": {name: record.to_dict()
                       for name, record in sorted(self.stages.items())},
        })

    def verify_upstream(self, stage: str) -> dict[str, str]:
        """Check every dependency's recorded outputs against the disk.

        Returns the consumed upstream hashes, keyed ``stage/artifact``, to
        be recorded as this stage's inputs.
        """
        consumed: dict[str, str] = {}
        for dep in STAGE_DEPENDENCIES[stage]:
            record = self.stages.get(dep)
            if record is None:
                raise StaleInputError(
                    f"stage {stage!r} needs {dep!r}, which has not run; "
                    f"run `crisis-topics {dep}` first", stage=dep)
            for name, recorded_hash in record.outputs.items():
                path = self.out_dir / name
                if not path.is_file():
                    raise StaleInputError(
                        f"stage {stage!r} needs {dep!r} output {name} which is "
                        f"missing; re-run `crisis-topics {dep}`", stage=dep)
                actual = sha256_file(path)
                if actual != recorded_hash:
                    raise StaleInputError(
                        f"stage {stage!r} found {name} changed since {dep!r} "
                        f"recorded it; re-run `crisis-topics {dep}` (and any "
                        f"stages after it)", stage=dep)
                consumed[f"{dep}/{name}"] = recorded_hash
        return consumed

    def record_stage(
        self,
        stage: str,
        config_hash: str,
        seed: int,
        inputs: dict[str, str],
        output_paths: list[Path],
    ) -> StageRecord:
        record = StageRecord(
            completed_utc=int(time.time()),
            config_hash=config_hash,
            seed=seed,
            inputs=inputs,
            outputs={
                str(path.relative_to(self.out_dir)): sha256_file(path)
                for path in output_paths
            },
        )
        self.stages[stage] = record
        self.save()
        return record
