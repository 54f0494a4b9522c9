import { forceLayout, LaidOutVertex } from "./layout.js";
import { potentialText } from "./potential.js";
import {
  AnalysisJson,
  MutationKind,
  QuiverStateJson,
  SessionView,
  StateJson,
  TriangulationStateJson,
} from "./types.js";

export interface ArrowBundle {
  source: number;
  target: number;
  count: number;
  ids: string[];
  degrees: (number | undefined)[];
}

export interface RenderedGraph {
  vertices: LaidOutVertex[];
  bundles: ArrowBundle[];
}

export interface TimelineEntry {
  kind: MutationKind;
  target: number | string;
  priorHash: string;
}

export interface ViewState {
  sessionId: string;
  kind: SessionView["kind"];
  state: StateJson;
  hash: string;
  legal: (number | string)[];
  graph: RenderedGraph | null;
  triangleRows: string[][] | null;
  potential: string;
  timeline: TimelineEntry[];
  analysis: AnalysisJson | null;
}

export function isTriangulation(state: StateJson): state is TriangulationStateJson {
  return (state as TriangulationStateJson).sides !== undefined;
}

export function bundleArrows(state: QuiverStateJson): ArrowBundle[] {
  const groups = new Map<string, ArrowBundle>();
  for (const a of state.arrows) {
    const key = `${a.source}>${a.target}`;
    let bundle = groups.get(key);
    if (!bundle) {
      bundle = { source: a.source, target: a.target, count: 0, ids: [], degrees: [] };
      groups.set(key, bundle);
    }
    bundle.count += 1;
    bundle.ids.push(a.id);
    bundle.degrees.push(a.degree);
  }
  for (const b of groups.values()) {
    const order = b.ids
      .map((id, k) => k)
      .sort((x, y) => (b.ids[x]! < b.ids[y]! ? -1 : 1));
    b.ids = order.map((k) => b.ids[k]!);
    b.degrees = order.map((k) => b.degrees[k]);
  }
  return [...groups.values()].sort((p, q) =>
    p.source - q.source || p.target - q.target,
  );
}

export function buildView(
  view: SessionView,
  timeline: TimelineEntry[],
  analysis: AnalysisJson | null = null,
): ViewState {
  let graph: RenderedGraph | null = null;
  let triangleRows: string[][] | null = null;
  let potential = "";
  if (isTriangulation(view.state)) {
    triangleRows = view.state.triangles;
  } else {
    const bundles = bundleArrows(view.state);
    const vertices = forceLayout(
      view.state.vertices,
      bundles.map((b) => [b.source, b.target]),
    );
    graph = { vertices, bundles };
    potential = potentialText(view.state.potential);
  }
  return {
    sessionId: view.id,
    kind: view.kind,
    state: view.state,
    hash: view.hash,
    legal: view.legal,
    graph,
    triangleRows,
    potential,
    timeline,
    analysis,
  };
}

/** Byte-identical twin of the service's normalized serialization (sorted
 * keys, compact separators); used to check displayed state against the
 * hash the service claims. */
export function canonicalJson(value: unknown): string {
  if (value === null || typeof value !== "object") {
    return JSON.stringify(value);
  }
  if (Array.isArray(value)) {
    return "[" + value.map(canonicalJson).join(",") + "]";
  }
  const obj = value as Record<string, unknown>;
  const keys = Object.keys(obj).sort();
  return (
    "{" + keys.map((k) => JSON.stringify(k) + ":" + canonicalJson(obj[k])).join(",") + "}"
  );
}

export function renderSvg(graph: RenderedGraph, width = 480, height = 360): string {
  const pos = new Map(graph.vertices.map((v) => [v.id, v]));
  const parts: string[] = [
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${width} ${height}">`,
    `<defs><marker id="tip" markerWidth="8" markerHeight="8" refX="7" refY="3" orient="auto">` +
      `<path d="M0,0 L7,3 L0,6 z" fill="#445"/></marker></defs>`,
  ];
  for (const b of graph.bundles) {
    const s = pos.get(b.source)!;
    const t = pos.get(b.target)!;
    const mx = (s.x + t.x) / 2;
    const my = (s.y + t.y) / 2;
    const nx = -(t.y - s.y);
    const ny = t.x - s.x;
    const len = Math.hypot(nx, ny) || 1;
    const bow = b.source === b.target ? 40 : 14;
    const cx = mx + (nx / len) * bow;
    const cy = my + (ny / len) * bow;
    parts.push(
      `<path d="M${s.x},${s.y} Q${cx},${cy} ${t.x},${t.y}" fill="none" ` +
        `stroke="#445" marker-end="url(#tip)"/>`,
    );
    const labels: string[] = [];
    if (b.count > 1) labels.push(`×${b.count}`);
    const degs = b.degrees.filter((d) => d !== undefined);
    if (degs.length > 0) labels.push(`d=${degs.join(",")}`);
    if (labels.length) {
      parts.push(
        `<text x="${cx}" y="${cy}" font-size="11" fill="#933" ` +
          `text-anchor="middle">${labels.join(" ")}</text>`,
      );
    }
  }
  for (const v of graph.vertices) {
    parts.push(
      `<circle cx="${v.x}" cy="${v.y}" r="14" fill="#eef" stroke="#447"/>`,
      `<text x="${v.x}" y="${v.y + 4}" font-size="12" text-anchor="middle">${v.id}</text>`,
    );
  }
  parts.push("</svg>");
  return parts.join("");
}
