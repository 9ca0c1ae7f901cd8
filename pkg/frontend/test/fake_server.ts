/** In-memory double of the review service, with the same semantics the
 * Python service implements: whole-set override replacement, per-topic
 * version counters that do not bump on identical rewrites, 404 payloads
 * with unknown_ids, and 422 on empty SA sets. */

import type { FetchLike } from "../src/api.js";
import type { LabelSet, Schema, TopicSummary } from "../src/model.js";

export const TEST_SCHEMA: Schema = {
  situational_awareness: {
    fire_operations: { display: "Fire operations", seeds: ["watchduty"] },
    public_health_safety: { display: "Public health and safety", seeds: ["smoke"] },
    emergency_resources: { display: "Emergency resources", seeds: ["hydrant"] },
    recovery: { display: "Recovery", seeds: ["insurance"] },
    loss_damage: { display: "Loss and damage", seeds: ["cars"] },
    influential_figures: { display: "Influential figures", seeds: ["celebrity"] },
  },
  crisis_narrative: {
    blame: { display: "Blame", seeds: ["mayor"] },
    renewal: { display: "Renewal", seeds: ["clean"] },
    victim: { display: "Victim", seeds: ["lost"] },
    hero: { display: "Hero", seeds: ["volunteer"] },
  },
};

const SA_CATEGORIES = Object.keys(TEST_SCHEMA.situational_awareness);
const CN_CATEGORIES = Object.keys(TEST_SCHEMA.crisis_narrative);

export interface ServerTopic {
  topic_id: number;
  label: string;
  size: number;
  keywords: string[];
  coherence: number | null;
  auto_labels: LabelSet & { needs_review?: boolean };
  representative_docs: { id: string; text: string }[];
}

export function makeTopicFixture(count: number): ServerTopic[] {
  const topics: ServerTopic[] = [];
  for (let i = 0; i < count; i += 1) {
    topics.push({
      topic_id: i,
      label: `${i}_topic_label`,
      size: 40 + ((i * 37) % 900),
      keywords: [`kw${i}a`, `kw${i}b`, `kw${i}c`],
      coherence: Math.round((0.3 + 0.01 * i) * 1000) / 1000,
      auto_labels: {
        sa: [SA_CATEGORIES[i % SA_CATEGORIES.length]],
        cn: i % 3 === 0 ? [CN_CATEGORIES[i % CN_CATEGORIES.length]] : [],
        grief: i % 4 === 0,
        mental_health: i % 5 === 0,
        needs_review: i % 7 === 0,
      },
      representative_docs: [
        { id: `doc${i}a`, text: `representative text ${i}a` },
        { id: `doc${i}b`, text: `representative text ${i}b` },
      ],
    });
  }
  return topics;
}

function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

export class FakeServer {
  overrides = new Map<number, LabelSet>();
  versions = new Map<number, number>();
  putCount = 0;
  failAll = false;

  constructor(public topics: ServerTopic[]) {}

  private summary(topic: ServerTopic): TopicSummary {
    return {
      topic_id: topic.topic_id,
      label: topic.label,
      size: topic.size,
      keywords: topic.keywords,
      coherence: topic.coherence,
      auto_labels: topic.auto_labels,
      human_labels: this.overrides.get(topic.topic_id) ?? null,
      version: this.versions.get(topic.topic_id) ?? 0,
    };
  }

  fetch: FetchLike = async (input, init) => {
    if (this.failAll) {
      return jsonResponse({ error: "boom" }, 500);
    }
    const method = init?.method ?? "GET";
    const url = input.replace(/^https?:\/\/[^/]+/, "");

    if (url === "/api/schema") return jsonResponse(TEST_SCHEMA);
    if (url === "/api/health") return jsonResponse({ status: "ok" });
    if (url === "/api/topics" && method === "GET") {
      const ordered = [...this.topics].sort(
        (a, b) => b.size - a.size || a.topic_id - b.topic_id,
      );
      return jsonResponse(ordered.map((topic) => this.summary(topic)));
    }

    const detail = url.match(/^\/api\/topics\/(\d+)$/);
    if (detail && method === "GET") {
      const topic = this.topics.find((t) => t.topic_id === Number(detail[1]));
      if (!topic) return jsonResponse({ unknown_ids: [Number(detail[1])] }, 404);
      return jsonResponse({
        ...this.summary(topic),
        summary: "",
        representative_docs: topic.representative_docs,
      });
    }

    const put = url.match(/^\/api\/topics\/(\d+)\/labels$/);
    if (put && method === "PUT") {
      this.putCount += 1;
      const topicId = Number(put[1]);
      const topic = this.topics.find((t) => t.topic_id === topicId);
      if (!topic) return jsonResponse({ unknown_ids: [topicId] }, 404);
      const body = JSON.parse(String(init?.body)) as LabelSet;
      const badSa = body.sa.filter((c) => !SA_CATEGORIES.includes(c));
      const badCn = body.cn.filter((c) => !CN_CATEGORIES.includes(c));
      if (badSa.length || badCn.length) {
        return jsonResponse({ unknown_categories: [...badSa, ...badCn] }, 422);
      }
      if (body.sa.length === 0) {
        return jsonResponse({ error: "sa must be non-empty" }, 422);
      }
      const record: LabelSet = {
        sa: [...body.sa].sort(),
        cn: [...body.cn].sort(),
        grief: body.grief,
        mental_health: body.mental_health,
      };
      const current = this.overrides.get(topicId);
      if (!current || JSON.stringify(current) !== JSON.stringify(record)) {
        this.overrides.set(topicId, record);
        this.versions.set(topicId, (this.versions.get(topicId) ?? 0) + 1);
      }
      return jsonResponse({
        status: "ok",
        topic_id: topicId,
        version: this.versions.get(topicId),
        human_labels: record,
      });
    }

    return jsonResponse({ error: `no route ${method} ${url}` }, 404);
  };
}
