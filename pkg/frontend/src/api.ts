/** Typed client for the review service. All console data comes from these
 * endpoints; the client never recomputes analytics. */

import type { LabelSet, Schema, TopicDetail, TopicSummary } from "./model.js";

export class ApiError extends Error {
  constructor(
    message: string,
    public readonly status: number,
    public readonly body: unknown = null,
  ) {
    super(message);
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export interface SaveResult {
  status: string;
  topic_id: number;
  version: number;
  human_labels: LabelSet;
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    let response: Response;
    try {
      response = await this.fetchImpl(this.baseUrl + path, init);
    } catch (error) {
      throw new ApiError(`network failure: ${String(error)}`, 0);
    }
    let body: unknown = null;
    try {
      body = await response.json();
    } catch {
      body = null;
    }
    if (!response.ok) {
      throw new ApiError(`${path} -> ${response.status}`, response.status, body);
    }
    return body as T;
  }

  health(): Promise<{ status: string }> {
    return this.request("/api/health");
  }

  schema(): Promise<Schema> {
    return this.request("/api/schema");
  }

  listTopics(): Promise<TopicSummary[]> {
    return this.request("/api/topics");
  }

  getTopic(topicId: number): Promise<TopicDetail> {
    return this.request(`/api/topics/${topicId}`);
  }

  saveLabels(topicId: number, labels: LabelSet): Promise<SaveResult> {
    return this.request(`/api/topics/${topicId}/labels`, {
      method: "PUT",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(labels),
    });
  }
}
