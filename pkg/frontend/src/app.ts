/** Controller: holds no authoritative state. Every render reflects the
 * last server responses, so a hard refresh reproduces the persisted view. */

import { ApiClient, ApiError } from "./api.js";
import {
  LabelDraft,
  Schema,
  StatusFilter,
  TopicDetail,
  TopicSummary,
  draftFromTopic,
  draftToLabels,
  filterTopics,
  reviewStatus,
  sortTopicsBySize,
  validateDraft,
} from "./model.js";
import {
  el,
  renderBanner,
  renderEditor,
  renderGuideline,
  renderTopicCard,
} from "./view.js";

const FILTERS: StatusFilter[] = [
  "all", "unreviewed", "needs_review", "overridden", "accepted",
];

export class App {
  topics: TopicSummary[] = [];
  schema: Schema | null = null;
  selected: TopicDetail | null = null;
  draft: LabelDraft | null = null;
  filter: StatusFilter = "all";
  banner: string | null = null;
  editorError: string | null = null;

  constructor(
    private readonly root: HTMLElement,
    private readonly api: ApiClient,
  ) {}

  async init(): Promise<void> {
    try {
      const [schema, topics] = await Promise.all([
        this.api.schema(),
        this.api.listTopics(),
      ]);
      this.schema = schema;
      this.topics = sortTopicsBySize(topics);
      this.banner = null;
    } catch (error) {
      // Keep whatever is already on screen; just surface the failure.
      this.banner = `Could not reach the review service (${describe(error)}).`;
    }
    this.render();
  }

  async select(topicId: number): Promise<void> {
    try {
      this.selected = await this.api.getTopic(topicId);
      this.draft = draftFromTopic(this.selected);
      this.editorError = null;
      this.banner = null;
    } catch (error) {
      this.banner = `Could not load topic ${topicId} (${describe(error)}).`;
    }
    this.render();
  }

  toggleCategory(family: "sa" | "cn", category: string): void {
    if (!this.draft) return;
    const target = family === "sa" ? this.draft.sa : this.draft.cn;
    if (target.has(category)) {
      target.delete(category);
    } else {
      target.add(category);
    }
    this.draft.dirty = true;
    this.editorError = null;
    this.render();
  }

  toggleFlag(flag: "grief" | "mental_health"): void {
    if (!this.draft) return;
    if (flag === "grief") {
      this.draft.grief = !this.draft.grief;
    } else {
      this.draft.mental_health = !this.draft.mental_health;
    }
    this.draft.dirty = true;
    this.editorError = null;
    this.render();
  }

  setFilter(filter: StatusFilter): void {
    this.filter = filter;
    this.render();
  }

  async save(): Promise<void> {
    if (!this.selected || !this.draft) return;
    const problem = validateDraft(this.draft);
    if (problem) {
      // Blocked client-side; the draft stays editable.
      this.editorError = problem;
      this.render();
      return;
    }
    const topicId = this.selected.topic_id;
    try {
      await this.api.saveLabels(topicId, draftToLabels(this.draft));
      // Re-read from the server so the card reflects persisted state.
      this.topics = sortTopicsBySize(await this.api.listTopics());
      this.selected = await this.api.getTopic(topicId);
      this.draft = draftFromTopic(this.selected);
      this.editorError = null;
      this.banner = null;
    } catch (error) {
      if (error instanceof ApiError && error.status === 404) {
        this.editorError = `Topic ${topicId} no longer exists on the server.`;
      } else if (error instanceof ApiError && error.status === 422) {
        this.editorError = `The server rejected the labels (${JSON.stringify(error.body)}).`;
      } else {
        this.editorError = `Save failed (${describe(error)}); draft kept.`;
      }
    }
    this.render();
  }

  render(): void {
    this.root.textContent = "";
    this.root.appendChild(renderBanner(this.banner, () => void this.init()));

    const layout = el("div", "layout");

    const listPane = el("section", "topic-list");
    const filterBar = el("nav", "filter-bar");
    for (const filter of FILTERS) {
      const button = el(
        "button",
        `filter-button${filter === this.filter ? " active" : ""}`,
        filter.replace("_", " "),
      );
      button.dataset.filter = filter;
      button.addEventListener("click", () => this.setFilter(filter));
      filterBar.appendChild(button);
    }
    listPane.appendChild(filterBar);

    const visible = filterTopics(this.topics, this.filter);
    if (visible.length === 0) {
      listPane.appendChild(el("p", "empty-state",
        this.topics.length === 0
          ? "No topics loaded."
          : `No ${this.filter.replace("_", " ")} topics.`));
    }
    for (const topic of visible) {
      listPane.appendChild(renderTopicCard(
        topic,
        this.selected?.topic_id === topic.topic_id,
        (topicId) => void this.select(topicId),
      ));
    }
    layout.appendChild(listPane);

    if (this.selected && this.draft && this.schema) {
      layout.appendChild(renderEditor(
        this.selected, this.draft, this.schema, this.editorError, {
          onToggleCategory: (family, category) => this.toggleCategory(family, category),
          onToggleFlag: (flag) => this.toggleFlag(flag),
          onSave: () => void this.save(),
        },
      ));
    } else {
      const placeholder = el("section", "editor editor-empty");
      placeholder.appendChild(el("p", undefined,
        "Select a topic to review its labels."));
      layout.appendChild(placeholder);
    }

    layout.appendChild(renderGuideline());
    this.root.appendChild(layout);
  }

  statusOf(topicId: number): string | null {
    const topic = this.topics.find((t) => t.topic_id === topicId);
    return topic ? reviewStatus(topic) : null;
  }
}

function describe(error: unknown): string {
  if (error instanceof ApiError) {
    return error.status === 0 ? "network unreachable" : `HTTP ${error.status}`;
  }
  return String(error);
}
