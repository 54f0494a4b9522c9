import { ServiceClient } from "./client.js";
import { MutationKind, SessionView, StateJson } from "./types.js";
import { buildView, canonicalJson, TimelineEntry, ViewState } from "./view.js";

export type Hasher = (bytes: string) => string;

/** One explorer per tab.  The service is the single source of truth: every
 * displayed state comes straight off the wire and, when a hasher is
 * supplied, is checked against the hash the service claims for it. */
export class Explorer {
  private timeline: TimelineEntry[] = [];
  private initialState: StateJson | null = null;
  view: ViewState | null = null;

  constructor(
    private readonly client: ServiceClient,
    private readonly hasher?: Hasher,
  ) {}

  private verify(view: SessionView): SessionView {
    if (this.hasher) {
      const local = this.hasher(canonicalJson(view.state));
      if (local !== view.hash) {
        throw new Error(
          `state hash mismatch: service says ${view.hash}, render sees ${local}`,
        );
      }
    }
    return view;
  }

  private refresh(view: SessionView): ViewState {
    this.view = buildView(this.verify(view), [...this.timeline]);
    return this.view;
  }

  async load(state: StateJson): Promise<ViewState> {
    const view = await this.client.createSession(state);
    this.initialState = state;
    this.timeline = [];
    return this.refresh(view);
  }

  async clickVertex(target: number | string, kind: MutationKind): Promise<ViewState> {
    if (!this.view) throw new Error("nothing loaded");
    const prior = this.view.hash;
    const out = await this.client.mutate(this.view.sessionId, kind, target);
    this.timeline.push({ kind, target, priorHash: prior });
    return this.refresh(out);
  }

  async undo(): Promise<ViewState> {
    if (!this.view) throw new Error("nothing loaded");
    const out = await this.client.undo(this.view.sessionId);
    this.timeline.pop();
    return this.refresh(out);
  }

  async analyze(bound: number): Promise<ViewState> {
    if (!this.view) throw new Error("nothing loaded");
    const analysis = await this.client.analysis(this.view.sessionId, bound);
    this.view = { ...this.view, analysis };
    return this.view;
  }

  /** Replays the timeline through a fresh session and reports whether the
   * service ends up at the hash currently displayed. */
  async replayMatches(): Promise<boolean> {
    if (!this.view || this.initialState === null) throw new Error("nothing loaded");
    let replayed = await this.client.createSession(this.initialState);
    for (const step of this.timeline) {
      replayed = await this.client.mutate(replayed.id, step.kind, step.target);
    }
    return replayed.hash === this.view.hash;
  }
}
