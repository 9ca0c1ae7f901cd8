"""Propagate topic-level labels down to individual posts and comments.

Posts take their dominant-topic label set; comments take their cluster's.
Noise comments and comments under unlabeled clusters inherit their root
post's labels. Every retained instance ends with at least one
situational-awareness label.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from ..errors import SchemaError
from .model import InstanceLabels, TopicLabelSet

logger = logging.getLogger(__name__)


def default_label_set() -> TopicLabelSet:
    """Corpus-level default for unresolvable inheritance: the generic
    loss_damage bucket, flagged for review."""
    return TopicLabelSet(
        topic_id=-1,
        sa_labels=frozenset({"loss_damage"}),
        cn_labels=frozenset(),
        grief=False,
        mental_health=False,
        provenance="auto",
        matched_rules=("fallback:corpus_default",),
        needs_review=True,
    )


@dataclass
class PropagationResult:
    instances: list[InstanceLabels]
    unresolved_parents: int = 0
    unlabeled_posts: int = 0
    stats: dict = field(default_factory=dict)


def propagate_labels(
    instances: Sequence[tuple[str, str, str | None]],
    post_topic_assignments: Mapping[str, int],
    comment_cluster_assignments: Mapping[str, int],
    post_topic_labels: Mapping[int, TopicLabelSet],
    cluster_labels: Mapping[int, TopicLabelSet],
    default_labels: TopicLabelSet | None = None,
) -> PropagationResult:
    """Assign labels to every (id, kind, link_id) instance.

    Posts must appear before their comments is not required; posts are
    resolved in a first pass so comment inheritance sees final post labels.
    """
    if default_labels is None:
        default_labels = default_label_set()
    if not default_labels.sa_labels:
        raise SchemaError("default label set must carry at least one SA label")

    post_final: dict[str, InstanceLabels] = {}
    out: list[InstanceLabels] = []
    unresolved = 0
    unlabeled_posts = 0

    for instance_id, kind, _ in instances:
        if kind != "post":
            continue
        topic_id = post_topic_assignments.get(instance_id, -1)
        labels = post_topic_labels.get(topic_id)
        inherited = False
        if labels is None:
            unlabeled_posts += 1
            labels = default_labels
            inherited = True
            topic_id = -1
        post_final[instance_id] = InstanceLabels(
            instance_id=instance_id,
            kind="post",
            topic_id=topic_id,
            sa_labels=labels.sa_labels,
            cn_labels=labels.cn_labels,
            grief=labels.grief,
            mental_health=labels.mental_health,
            inherited=inherited,
        )

    for instance_id, kind, link_id in instances:
        if kind == "post":
            out.append(post_final[instance_id])
            continue
        cluster_id = comment_cluster_assignments.get(instance_id, -1)
        labels = cluster_labels.get(cluster_id) if cluster_id != -1 else None
        if labels is not None:
            out.append(InstanceLabels(
                instance_id=instance_id,
                kind="comment",
                topic_id=cluster_id,
                sa_labels=labels.sa_labels,
                cn_labels=labels.cn_labels,
                grief=labels.grief,
                mental_health=labels.mental_health,
                inherited=False,
            ))
            continue
        parent = post_final.get(link_id) if link_id else None
        if parent is None:
            unresolved += 1
            source: InstanceLabels | TopicLabelSet = default_labels
            sa, cn = source.sa_labels, source.cn_labels
            grief, mental_health = source.grief, source.mental_health
        else:
            sa, cn = parent.sa_labels, parent.cn_labels
            grief, mental_health = parent.grief, parent.mental_health
        out.append(InstanceLabels(
            instance_id=instance_id,
            kind="comment",
            topic_id=cluster_id if cluster_id is not None else -1,
            sa_labels=sa,
            cn_labels=cn,
            grief=grief,
            mental_health=mental_health,
            inherited=True,
        ))

    if unresolved:
        logger.warning("%d comments had unresolvable parents; used corpus default",
                       unresolved)
    for labeled in out:
        if not labeled.sa_labels:
            raise AssertionError(
                f"instance {labeled.instance_id} ended without SA labels")

    return PropagationResult(
        instances=out,
        unresolved_parents=unresolved,
        unlabeled_posts=unlabeled_posts,
        stats={
            "total": len(out),
            "inherited": sum(1 for x in out if x.inherited),
            "cn_labeled": sum(1 for x in out if x.cn_labels),
        },
    )
