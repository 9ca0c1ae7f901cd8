"""Pipeline configuration: one JSON file, sections per stage.

Relative paths resolve against the config file's directory. The CLI's
global ``--seed`` and ``--tz`` flags override the file's values.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from ..errors import ConfigError
from ..ioutil import sha256_text


@dataclass
class PipelineConfig:
    seed: int = 0
    timezone: str = "America/Los_Angeles"
    corpus: str | None = None
    base_dir: Path = field(default_factory=Path)
    sections: dict[str, dict] = field(default_factory=dict)

    @classmethod
    def load(cls, path: str | Path) -> "PipelineConfig":
        path = Path(path)
        if not path.is_file():
            raise ConfigError(f"config file not found: {path}")
        try:
            obj = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from exc
        if not isinstance(obj, dict):
            raise ConfigError("config must be a JSON object")
        known = {"seed", "timezone", "corpus"}
        sections = {k: v for k, v in obj.items() if k not in known}
        for name, body in sections.items():
            if not isinstance(body, dict):
                raise ConfigError(f"config section {name!r} must be an object")
        return cls(
            seed=int(obj.get("seed", 0)),
            timezone=str(obj.get("timezone", "America/Los_Angeles")),
            corpus=obj.get("corpus"),
            base_dir=path.parent.resolve(),
            sections=sections,
        )

    def section(self, name: str) -> dict[str, Any]:
        return dict(self.sections.get(name, {}))

    def resolve_path(self, value: str | None) -> Path | None:
        if value is None:
            return None
        candidate = Path(value)
        return candidate if candidate.is_absolute() else self.base_dir / candidate

    def corpus_path(self) -> Path:
        if not self.corpus:
            raise ConfigError("config must set `corpus` (path to the JSONL archive)")
        resolved = self.resolve_path(self.corpus)
        if not resolved.is_file():
            raise ConfigError(f"corpus file not found: {resolved}")
        return resolved

    def content_hash(self) -> str:
        payload = {
            "seed": self.seed,
            "timezone": self.timezone,
            "corpus": self.corpus,
            "sections": self.sections,
        }
        return sha256_text(json.dumps(payload, sort_keys=True))
