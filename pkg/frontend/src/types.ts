// Wire formats of the session service.  The client renders these verbatim;
// nothing is recomputed on this side.

export interface ArrowJson {
  id: string;
  source: number;
  target: number;
  degree?: number;
}

export interface PotentialTermJson {
  coeff: string;
  cycle: string[];
}

export interface QuiverStateJson {
  vertices: number[];
  arrows: ArrowJson[];
  potential?: PotentialTermJson[];
  truncation?: number;
}

export interface SideJson {
  id: string;
  kind: "arc" | "boundary";
}

export interface TriangulationStateJson {
  sides: SideJson[];
  triangles: string[][];
}

export type StateJson = QuiverStateJson | TriangulationStateJson;

export type SessionKind = "quiver" | "qp" | "graded" | "triangulation";

export interface SessionView {
  id: string;
  kind: SessionKind;
  state: StateJson;
  hash: string;
  legal: (number | string)[];
}

export interface HistoryEntry {
  op: string;
  params: Record<string, unknown>;
  prior_hash: string;
}

export interface AnalysisJson {
  acyclic?: boolean;
  jacobian?: Record<string, unknown>;
  rigidity?: Record<string, unknown>;
  hash: string;
}

export type MutationKind = "fz" | "dwz" | "left" | "right" | "flip";

export interface ServiceError {
  error: string;
  detail: string;
}

export class ServiceRejection extends Error {
  constructor(
    public readonly status: number,
    public readonly body: ServiceError,
  ) {
    super(`${body.error}: ${body.detail}`);
  }
}
