/** Domain types mirroring the review API, plus the pure view logic:
 * review-status derivation, draft validation, and auto-vs-human diffs.
 * Nothing here touches the DOM or the network. */

export interface LabelSet {
  sa: string[];
  cn: string[];
  grief: boolean;
  mental_health: boolean;
}

export interface AutoLabels extends LabelSet {
  provenance?: string;
  matched_rules?: string[];
  needs_review?: boolean;
  topic_id?: number;
}

export interface TopicSummary {
  topic_id: number;
  label: string;
  size: number;
  keywords: string[];
  coherence: number | null;
  auto_labels: AutoLabels | null;
  human_labels: LabelSet | null;
  version: number;
}

export interface TopicDetail extends TopicSummary {
  summary?: string;
  representative_docs: { id: string; text: string }[];
}

export interface Schema {
  situational_awareness: Record<string, { display: string; seeds: string[] }>;
  crisis_narrative: Record<string, { display: string; seeds: string[] }>;
}

export type ReviewStatus = "unreviewed" | "accepted" | "overridden" | "needs_review";

function sortedEqual(a: string[], b: string[]): boolean {
  if (a.length !== b.length) return false;
  const left = [...a].sort();
  const right = [...b].sort();
  return left.every((value, index) => value === right[index]);
}

export function labelSetsEqual(a: LabelSet, b: LabelSet): boolean {
  return (
    sortedEqual(a.sa, b.sa) &&
    sortedEqual(a.cn, b.cn) &&
    a.grief === b.grief &&
    a.mental_health === b.mental_health
  );
}

/** Status is a pure function of the presence/equality of human vs auto sets. */
export function reviewStatus(topic: TopicSummary): ReviewStatus {
  if (topic.human_labels === null || topic.human_labels === undefined) {
    return topic.auto_labels?.needs_review ? "needs_review" : "unreviewed";
  }
  if (topic.auto_labels && labelSetsEqual(topic.human_labels, topic.auto_labels)) {
    return "accepted";
  }
  return "overridden";
}

/** Largest first; ties by topic id so rendering is stable. */
export function sortTopicsBySize(topics: TopicSummary[]): TopicSummary[] {
  return [...topics].sort(
    (a, b) => b.size - a.size || a.topic_id - b.topic_id,
  );
}

export interface LabelDraft {
  sa: Set<string>;
  cn: Set<string>;
  grief: boolean;
  mental_health: boolean;
  dirty: boolean;
}

/** Start editing from the human set when present, else from the auto set. */
export function draftFromTopic(topic: TopicSummary): LabelDraft {
  const source: LabelSet = topic.human_labels ??
    topic.auto_labels ?? { sa: [], cn: [], grief: false, mental_health: false };
  return {
    sa: new Set(source.sa),
    cn: new Set(source.cn),
    grief: source.grief,
    mental_health: source.mental_health,
    dirty: false,
  };
}

export function draftToLabels(draft: LabelDraft): LabelSet {
  return {
    sa: [...draft.sa].sort(),
    cn: [...draft.cn].sort(),
    grief: draft.grief,
    mental_health: draft.mental_health,
  };
}

/** Saving with an empty SA set is never allowed (coverage stays total). */
export function validateDraft(draft: LabelDraft): string | null {
  if (draft.sa.size === 0) {
    return "Select at least one situational-awareness category before saving.";
  }
  return null;
}

export interface LabelDiff {
  addedSa: string[];
  removedSa: string[];
  addedCn: string[];
  removedCn: string[];
  flagChanges: string[];
  empty: boolean;
}

/** What the human decision changed relative to the automatic mapping. */
export function labelDiff(auto: LabelSet | null, human: LabelSet): LabelDiff {
  const base: LabelSet = auto ?? { sa: [], cn: [], grief: false, mental_health: false };
  const addedSa = human.sa.filter((c) => !base.sa.includes(c)).sort();
  const removedSa = base.sa.filter((c) => !human.sa.includes(c)).sort();
  const addedCn = human.cn.filter((c) => !base.cn.includes(c)).sort();
  const removedCn = base.cn.filter((c) => !human.cn.includes(c)).sort();
  const flagChanges: string[] = [];
  if (base.grief !== human.grief) {
    flagChanges.push(`grief: ${base.grief} -> ${human.grief}`);
  }
  if (base.mental_health !== human.mental_health) {
    flagChanges.push(`mental_health: ${base.mental_health} -> ${human.mental_health}`);
  }
  return {
    addedSa,
    removedSa,
    addedCn,
    removedCn,
    flagChanges,
    empty:
      addedSa.length + removedSa.length + addedCn.length + removedCn.length +
        flagChanges.length === 0,
  };
}

export type StatusFilter = "all" | ReviewStatus;

export function filterTopics(
  topics: TopicSummary[],
  filter: StatusFilter,
): TopicSummary[] {
  if (filter === "all") return topics;
  return topics.filter((topic) => reviewStatus(topic) === filter);
}
