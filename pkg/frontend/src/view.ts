/** DOM builders. Every displayed value traces to an API field; the view
 * computes nothing beyond status/diff derivation from model.ts. */

import { GUIDELINE } from "./guideline.js";
import {
  LabelDiff,
  LabelDraft,
  ReviewStatus,
  Schema,
  TopicDetail,
  TopicSummary,
  labelDiff,
  reviewStatus,
} from "./model.js";

export function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

const STATUS_LABELS: Record<ReviewStatus, string> = {
  unreviewed: "unreviewed",
  accepted: "accepted",
  overridden: "overridden",
  needs_review: "needs review",
};

export function renderBanner(message: string | null, onRetry: () => void): HTMLElement {
  const banner = el("div", "banner");
  if (!message) {
    banner.classList.add("hidden");
    return banner;
  }
  banner.appendChild(el("span", "banner-text", message));
  const retry = el("button", "retry", "Retry");
  retry.addEventListener("click", onRetry);
  banner.appendChild(retry);
  return banner;
}

export function renderTopicCard(
  topic: TopicSummary,
  selected: boolean,
  onSelect: (topicId: number) => void,
): HTMLElement {
  const status = reviewStatus(topic);
  const card = el("article", `topic-card status-${status}`);
  card.dataset.topicId = String(topic.topic_id);
  if (selected) card.classList.add("selected");
  if (status === "needs_review") card.classList.add("priority");

  const head = el("header", "card-head");
  head.appendChild(el("h3", "card-label", topic.label));
  head.appendChild(el("span", `status-pill status-${status}`, STATUS_LABELS[status]));
  card.appendChild(head);

  const meta = el("div", "card-meta");
  meta.appendChild(el("span", "size", `${topic.size} docs`));
  meta.appendChild(el(
    "span", "coherence",
    topic.coherence === null || topic.coherence === undefined
      ? "coherence –"
      : `coherence ${topic.coherence.toFixed(3)}`,
  ));
  card.appendChild(meta);

  const chips = el("div", "keyword-chips");
  for (const keyword of topic.keywords) {
    chips.appendChild(el("span", "chip", keyword));
  }
  card.appendChild(chips);

  card.addEventListener("click", () => onSelect(topic.topic_id));
  return card;
}

export interface EditorHandlers {
  onToggleCategory(family: "sa" | "cn", category: string): void;
  onToggleFlag(flag: "grief" | "mental_health"): void;
  onSave(): void;
}

function checkboxRow(
  family: "sa" | "cn",
  category: string,
  display: string,
  checked: boolean,
  handlers: EditorHandlers,
): HTMLElement {
  const row = el("label", "checkbox-row");
  const box = document.createElement("input");
  box.type = "checkbox";
  box.checked = checked;
  box.dataset.family = family;
  box.dataset.category = category;
  box.addEventListener("change", () => handlers.onToggleCategory(family, category));
  row.appendChild(box);
  row.appendChild(el("span", "checkbox-text", display));
  return row;
}

export function renderEditor(
  topic: TopicDetail,
  draft: LabelDraft,
  schema: Schema,
  error: string | null,
  handlers: EditorHandlers,
): HTMLElement {
  const panel = el("section", "editor");
  panel.appendChild(el("h2", "editor-title",
    `Topic ${topic.topic_id}: ${topic.label}`));
  if (topic.summary) panel.appendChild(el("p", "topic-summary", topic.summary));

  const saGroup = el("fieldset", "label-group sa-group");
  saGroup.appendChild(el("legend", undefined, "Situational awareness"));
  for (const [category, body] of Object.entries(schema.situational_awareness)) {
    saGroup.appendChild(checkboxRow("sa", category, body.display,
      draft.sa.has(category), handlers));
  }
  panel.appendChild(saGroup);

  const cnGroup = el("fieldset", "label-group cn-group");
  cnGroup.appendChild(el("legend", undefined, "Crisis narrative"));
  for (const [category, body] of Object.entries(schema.crisis_narrative)) {
    cnGroup.appendChild(checkboxRow("cn", category, body.display,
      draft.cn.has(category), handlers));
  }
  panel.appendChild(cnGroup);

  const flags = el("fieldset", "label-group flag-group");
  flags.appendChild(el("legend", undefined, "Flags"));
  for (const flag of ["grief", "mental_health"] as const) {
    const row = el("label", "checkbox-row");
    const box = document.createElement("input");
    box.type = "checkbox";
    box.checked = flag === "grief" ? draft.grief : draft.mental_health;
    box.dataset.flag = flag;
    box.addEventListener("change", () => handlers.onToggleFlag(flag));
    row.appendChild(box);
    row.appendChild(el("span", "checkbox-text",
      flag === "grief" ? "Grief signal" : "Mental-health risk"));
    flags.appendChild(row);
  }
  panel.appendChild(flags);

  if (error) {
    panel.appendChild(el("p", "editor-error", error));
  }

  const save = el("button", "save", draft.dirty ? "Save labels" : "Saved");
  save.addEventListener("click", handlers.onSave);
  panel.appendChild(save);

  panel.appendChild(renderDiff(
    topic.auto_labels
      ? labelDiff(topic.auto_labels, {
          sa: [...draft.sa].sort(),
          cn: [...draft.cn].sort(),
          grief: draft.grief,
          mental_health: draft.mental_health,
        })
      : null,
  ));

  const docs = el("section", "representative-docs");
  docs.appendChild(el("h3", undefined, "Representative documents"));
  for (const doc of topic.representative_docs) {
    const quote = el("blockquote", "rep-doc", doc.text);
    quote.dataset.docId = doc.id;
    docs.appendChild(quote);
  }
  panel.appendChild(docs);
  return panel;
}

export function renderDiff(diff: LabelDiff | null): HTMLElement {
  const box = el("section", "diff");
  box.appendChild(el("h3", undefined, "Changes vs automatic labels"));
  if (!diff) {
    box.appendChild(el("p", "diff-empty", "No automatic labels recorded."));
    return box;
  }
  if (diff.empty) {
    box.appendChild(el("p", "diff-empty", "Matches the automatic labels."));
    return box;
  }
  const list = el("ul", "diff-list");
  for (const category of diff.addedSa) list.appendChild(el("li", "diff-added", `+ SA ${category}`));
  for (const category of diff.removedSa) list.appendChild(el("li", "diff-removed", `- SA ${category}`));
  for (const category of diff.addedCn) list.appendChild(el("li", "diff-added", `+ CN ${category}`));
  for (const category of diff.removedCn) list.appendChild(el("li", "diff-removed", `- CN ${category}`));
  for (const change of diff.flagChanges) list.appendChild(el("li", "diff-flag", change));
  box.appendChild(list);
  return box;
}

export function renderGuideline(): HTMLElement {
  const aside = el("aside", "guideline");
  aside.appendChild(el("h3", undefined, "Annotation walkthrough"));
  const list = el("ol", "guideline-steps");
  for (const step of GUIDELINE) {
    const item = el("li", "guideline-step");
    item.appendChild(el("p", "guideline-q", step.question));
    item.appendChild(el("p", "guideline-yes", `Yes: ${step.yes}`));
    item.appendChild(el("p", "guideline-no", `No: ${step.no}`));
    list.appendChild(item);
  }
  aside.appendChild(list);
  return aside;
}
