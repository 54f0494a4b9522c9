import {
  AnalysisJson,
  HistoryEntry,
  MutationKind,
  ServiceRejection,
  SessionView,
  StateJson,
} from "./types.js";

type FetchLike = typeof fetch;

/** Thin typed wrapper over the session endpoints.  All calls are funneled
 * through a promise chain so one tab never issues concurrent mutations. */
export class ServiceClient {
  private queue: Promise<unknown> = Promise.resolve();

  constructor(
    private readonly base: string,
    private readonly fetchImpl: FetchLike = fetch,
  ) {}

  private enqueue<T>(task: () => Promise<T>): Promise<T> {
    const next = this.queue.then(task, task);
    this.queue = next.catch(() => undefined);
    return next;
  }

  private async call<T>(method: string, path: string, body?: unknown): Promise<T> {
    const resp = await this.fetchImpl(this.base + path, {
      method,
      headers: body === undefined ? {} : { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const parsed = await resp.json();
    if (!resp.ok) {
      throw new ServiceRejection(resp.status, parsed);
    }
    return parsed as T;
  }

  createSession(state: StateJson): Promise<SessionView> {
    return this.enqueue(() => this.call("POST", "/sessions", state));
  }

  getSession(id: string): Promise<SessionView> {
    return this.enqueue(() => this.call("GET", `/sessions/${id}`));
  }

  mutate(id: string, kind: MutationKind, target: number | string): Promise<SessionView> {
    const body =
      kind === "flip" ? { kind, arc: String(target) } : { kind, vertex: target };
    return this.enqueue(() => this.call("POST", `/sessions/${id}/mutate`, body));
  }

  undo(id: string): Promise<SessionView> {
    return this.enqueue(() => this.call("POST", `/sessions/${id}/undo`));
  }

  history(id: string): Promise<{ id: string; history: HistoryEntry[]; hash: string }> {
    return this.enqueue(() => this.call("GET", `/sessions/${id}/history`));
  }

  analysis(id: string, bound: number): Promise<AnalysisJson> {
    return this.enqueue(() =>
      this.call("GET", `/sessions/${id}/analysis?bound=${bound}`),
    );
  }
}
