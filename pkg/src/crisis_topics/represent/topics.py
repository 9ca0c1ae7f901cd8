"""Topic representations: keywords, representative documents, labels.

Labeling calls an external chat endpoint when configured and always falls
back to a deterministic label built from the topic id and its top keywords,
so every topic ends up with a non-empty label no matter what the network
does.
"""

from __future__ import annotations

import json
import logging
import os
from dataclasses import dataclass, field
from importlib import resources
from typing import Sequence

import numpy as np

from ..errors import ConfigError
from .ctfidf import CTfIdfModel

logger = logging.getLogger(__name__)

DEFAULT_LLM_MODEL = "gpt-4o-mini"


@dataclass
class TopicRepresentation:
    topic_id: int
    keywords: list[str]
    raw_ctfidf_terms: list[tuple[str, float]]
    label: str
    summary: str
    representative_doc_ids: list[str]
    size: int
    label_source: str = "fallback"  # fallback | llm | human

    def to_dict(self) -> dict:
        return {
            "topic_id": self.topic_id,
            "keywords": self.keywords,
            "raw_ctfidf_terms": [[t, w] for t, w in self.raw_ctfidf_terms],
            "label": self.label,
            "summary": self.summary,
            "representative_doc_ids": self.representative_doc_ids,
            "size": self.size,
            "label_source": self.label_source,
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "TopicRepresentation":
        return cls(
            topic_id=obj["topic_id"],
            keywords=list(obj["keywords"]),
            raw_ctfidf_terms=[(t, float(w)) for t, w in obj["raw_ctfidf_terms"]],
            label=obj["label"],
            summary=obj["summary"],
            representative_doc_ids=list(obj["representative_doc_ids"]),
            size=obj["size"],
            label_source=obj.get("label_source", "fallback"),
        )


def representative_docs(
    cluster_docs: Sequence[tuple[str, Sequence[str]]],
    model: CTfIdfModel,
    class_id: int,
    n: int = 3,
    ngram_range: tuple[int, int] = (1, 2),
) -> list[str]:
    """Doc ids ranked by cosine between doc term vector and the class
    keyword vector; ties break by doc id."""
    if not cluster_docs:
        raise ConfigError("cluster has no documents")
    class_vec = model.class_vector(class_id)
    class_norm = float(np.linalg.norm(class_vec))

    scored = []
    for doc_id, tokens in cluster_docs:
        doc_vec = model.encode(tokens, ngram_range)
        norm = float(np.linalg.norm(doc_vec))
        if norm == 0.0 or class_norm == 0.0:
            similarity = 0.0
        else:
            similarity = float(doc_vec @ class_vec / (norm * class_norm))
        scored.append((-similarity, doc_id))
    scored.sort()
    return [doc_id for _, doc_id in scored[:n]]


def fallback_label(topic_id: int, keywords: Sequence[str]) -> str:
    """Deterministic label: topic id plus its top four keywords."""
    parts = [str(topic_id)] + [kw.replace(" ", "_") for kw in keywords[:4]]
    return "_".join(parts)


def load_prompt_template() -> str:
    ref = resources.files("crisis_topics.represent") / "data" / "label_prompt.txt"
    return ref.read_text(encoding="utf-8")


@dataclass
class LlmClient:
    """Chat-endpoint client for topic naming; optional in every deployment."""

    url: str | None = None
    api_key: str | None = None
    model: str | None = None
    timeout: float = 60.0
    session: object | None = None
    enabled: bool = True
    template: str = field(default_factory=load_prompt_template)

    def resolved(self) -> tuple[str, str] | None:
        if not self.enabled:
            return None
        url = self.url or os.environ.get("LLM_API_URL")
        if not url:
            return None
        model = self.model or os.environ.get("LLM_MODEL") or DEFAULT_LLM_MODEL
        return url, model

    def _session(self):
        if self.session is None:
            import requests

            self.session = requests.Session()
        return self.session

    def complete(self, keywords: Sequence[str], documents: Sequence[str]) -> dict:
        resolved = self.resolved()
        if resolved is None:
            raise ConfigError("labeling endpoint not configured")
        url, model = resolved
        prompt = self.template.format(
            keywords=", ".join(keywords),
            documents="\n---\n".join(documents),
        )
        headers = {"Content-Type": "application/json"}
        key = self.api_key or os.environ.get("LLM_API_KEY")
        if key:
            headers["Authorization"] = f"Bearer {key}"
        response = self._session().post(
            url,
            json={
                "model": model,
                "messages": [{"role": "user", "content": prompt}],
                "response_format": "json",
            },
            headers=headers,
            timeout=self.timeout,
        )
        status = getattr(response, "status_code", 200)
        if status >= 400:
            raise RuntimeError(f"labeling endpoint returned {status}")
        return response.json()


def llm_label(
    topic_id: int,
    keywords: Sequence[str],
    documents: Sequence[str],
    client: LlmClient | None = None,
) -> tuple[str, str, str]:
    """(label, summary, source); failures always downgrade to the fallback."""
    fallback = (fallback_label(topic_id, keywords), "", "fallback")
    if client is None or client.resolved() is None:
        return fallback
    try:
        payload = client.complete(keywords, documents)
        label = str(payload["label"]).strip()
        summary = str(payload.get("summary", "")).strip()
        if not label:
            raise ValueError("endpoint returned an empty label")
        return label, summary, "llm"
    except Exception as exc:  # noqa: BLE001 - labeling must never sink the run
        logger.warning("topic %d labeling failed, using fallback: %s", topic_id, exc)
        return fallback


def parse_structured_response(text: str) -> dict:
    """Best-effort parse of a JSON object embedded in a chat response."""
    text = text.strip()
    if text.startswith("{"):
        return json.loads(text)
    start, stop = text.find("{"), text.rfind("}")
    if start == -1 or stop <= start:
        raise ValueError("no JSON object in response")
    return json.loads(text[start:stop + 1])
