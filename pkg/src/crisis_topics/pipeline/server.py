"""HTTP review service for human-in-the-loop topic labeling.

Serves topic representations with their automatic label sets, accepts
per-topic overrides (whole-set replacement), and persists every acknowledged
write atomically to the overrides file consumed by the map stage. The
console's static assets are served from the same process when present.
"""

from __future__ import annotations

import logging
import threading
from pathlib import Path

from fastapi import FastAPI
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from ..ioutil import atomic_write_json, read_json
from ..schema import CN_CATEGORIES, SA_CATEGORIES, load_schema

logger = logging.getLogger(__name__)

OVERRIDES_NAME = "overrides.json"


class LabelsBody(BaseModel):
    sa: list[str] = Field(default_factory=list)
    cn: list[str] = Field(default_factory=list)
    grief: bool = False
    mental_health: bool = False


class ReviewSessionState:
    """Artifacts plus pending overrides; writes go through one lock."""

    def __init__(self, artifacts_dir: str | Path):
        self.artifacts_dir = Path(artifacts_dir)
        topics_payload = read_json(self.artifacts_dir / "topics.json")
        self.topics = {int(t["topic_id"]): t for t in topics_payload}

        auto_path = self.artifacts_dir / "topic_labels_auto.json"
        self.auto_labels = {}
        if auto_path.is_file():
            self.auto_labels = {
                int(k): v for k, v in read_json(auto_path)["comments"].items()
            }

        coherence_path = self.artifacts_dir / "coherence_comments.json"
        self.coherence = {}
        if coherence_path.is_file():
            for row in read_json(coherence_path)["per_topic"]:
                self.coherence[int(row["topic_id"])] = row["score"]

        self.overrides_path = self.artifacts_dir / OVERRIDES_NAME
        self.overrides: dict[int, dict] = {}
        if self.overrides_path.is_file():
            self.overrides = {
                int(k): v for k, v in read_json(self.overrides_path).items()
            }

        self.versions: dict[int, int] = {
            topic_id: 1 if topic_id in self.overrides else 0
            for topic_id in self.topics
        }
        self.lock = threading.Lock()

    def persist(self) -> None:
        atomic_write_json(
            self.overrides_path,
            {str(k): self.overrides[k] for k in sorted(self.overrides)})

    def topic_summary(self, topic_id: int, include_docs: bool = False) -> dict:
        topic = self.topics[topic_id]
        body = {
            "topic_id": topic_id,
            "label": topic["label"],
            "size": topic["size"],
            "keywords": topic["keywords"],
            "coherence": self.coherence.get(topic_id),
            "auto_labels": self.auto_labels.get(topic_id),
            "human_labels": self.overrides.get(topic_id),
            "version": self.versions.get(topic_id, 0),
        }
        if include_docs:
            body["summary"] = topic.get("summary", "")
            body["representative_docs"] = self._representative_docs(topic)
        return body

    def _representative_docs(self, topic: dict) -> list[dict]:
        wanted = set(topic.get("representative_doc_ids", ()))
        if not wanted:
            return []
        docs = []
        clean_path = self.artifacts_dir / "clean_docs.jsonl"
        if clean_path.is_file():
            import json as json_mod

            with open(clean_path, "r", encoding="utf-8") as handle:
                for line in handle:
                    if not line.strip():
                        continue
                    obj = json_mod.loads(line)
                    if obj["id"] in wanted:
                        docs.append({"id": obj["id"], "text": obj["text"]})
        order = {doc_id: i for i, doc_id in
                 enumerate(topic["representative_doc_ids"])}
        return sorted(docs, key=lambda d: order[d["id"]])


def create_app(artifacts_dir: str | Path, console_dir: str | Path | None = None) -> FastAPI:
    state = ReviewSessionState(artifacts_dir)
    schema = load_schema()
    app = FastAPI(title="crisis-topics review service")
    app.state.review = state

    @app.get("/api/health")
    def health():
        return {"status": "ok"}

    @app.get("/api/schema")
    def get_schema():
        return schema.to_dict()

    @app.get("/api/topics")
    def list_topics():
        order = sorted(state.topics,
                       key=lambda t: (-state.topics[t]["size"], t))
        return [state.topic_summary(topic_id) for topic_id in order]

    @app.get("/api/topics/{topic_id}")
    def get_topic(topic_id: int):
        if topic_id not in state.topics:
            return JSONResponse(status_code=404,
                                content={"unknown_ids": [topic_id]})
        return state.topic_summary(topic_id, include_docs=True)

    @app.put("/api/topics/{topic_id}/labels")
    def put_labels(topic_id: int, body: LabelsBody):
        if topic_id not in state.topics:
            return JSONResponse(status_code=404,
                                content={"unknown_ids": [topic_id]})
        bad = sorted(set(body.sa) - set(SA_CATEGORIES)) + \
            sorted(set(body.cn) - set(CN_CATEGORIES))
        if bad:
            return JSONResponse(status_code=422,
                                content={"unknown_categories": bad})
        if not body.sa:
            return JSONResponse(
                status_code=422,
                content={"error": "sa must be non-empty (coverage is total)"})

        record = {
            "sa": sorted(set(body.sa)),
            "cn": sorted(set(body.cn)),
            "grief": body.grief,
            "mental_health": body.mental_health,
        }
        with state.lock:
            current = state.overrides.get(topic_id)
            if current != record:
                # Last write wins; identical rewrites do not bump the version.
                state.overrides[topic_id] = record
                state.versions[topic_id] = state.versions.get(topic_id, 0) + 1
                state.persist()
            version = state.versions[topic_id]
        return {"status": "ok", "topic_id": topic_id, "version": version,
                "human_labels": record}

    if console_dir is not None and Path(console_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=str(console_dir), html=True),
                  name="console")
    return app


def serve(artifacts_dir: str | Path, port: int = 8787,
          console_dir: str | Path | None = None, host: str = "127.0.0.1") -> None:
    import uvicorn

    app = create_app(artifacts_dir, console_dir)
    uvicorn.run(app, host=host, port=port, log_level="info")
