// Typed client for the qpcalc session service. Every number the UI shows
// comes out of these response payloads; nothing is computed client-side.

export interface ArrowInfo {
  name: string;
  src: string;
  dst: string;
  deg?: number;
}

export interface VertexFlags {
  loop: boolean;
  two_cycle: boolean;
  mutable: boolean;
}

export interface PotentialTerm {
  coeff: string;
  word: string[];
  length: number;
}

export interface HomologyCell {
  degree: number;
  order: number;
  dim: number;
}

export interface HomologyPanel {
  degrees: number[];
  orders: number[];
  dims: HomologyCell[];
}

export interface PhiPanel {
  vertex: string;
  intervals: Record<string, [number, number]>;
}

export interface InvolutionPanel {
  available: boolean;
  vertex?: string;
  passed?: boolean;
  orders?: number[];
}

export interface SessionState {
  id: string;
  vertices: string[];
  arrows: ArrowInfo[];
  potential: PotentialTerm[];
  truncation: number;
  accuracy: number;
  validation: {
    in_m2: boolean;
    vertices: Record<string, VertexFlags>;
  };
  jacobian: { orders: number[]; dims: number[] };
  history_length: number;
  trail: (string | null)[];
  panels?: {
    homology?: HomologyPanel;
    phi?: PhiPanel;
    involution?: InvolutionPanel;
    [k: string]: unknown;
  };
}

export interface MutateDelta {
  added: string[];
  removed: string[];
  cancelled_pairs: string[][];
}

export interface Diagnostic {
  line: number;
  col: number;
  message: string;
  token: string;
}

export class ApiError extends Error {
  status: number;
  diagnostics: Diagnostic[];

  constructor(status: number, message: string, diagnostics: Diagnostic[] = []) {
    super(message);
    this.status = status;
    this.diagnostics = diagnostics;
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

async function parseError(r: Response): Promise<ApiError> {
  let message = `HTTP ${r.status}`;
  let diagnostics: Diagnostic[] = [];
  try {
    const body = await r.json();
    if (body.error) message = body.error;
    if (body.diagnostics) diagnostics = body.diagnostics;
  } catch {
    // non-JSON error body: keep the status text
  }
  return new ApiError(r.status, message, diagnostics);
}

export class ApiClient {
  base: string;
  fetchFn: FetchLike;

  constructor(base = "", fetchFn?: FetchLike) {
    this.base = base.replace(/\/$/, "");
    this.fetchFn = fetchFn ?? ((input, init) => fetch(input, init));
  }

  private async json<T>(path: string, init?: RequestInit): Promise<T> {
    const r = await this.fetchFn(this.base + path, init);
    if (!r.ok) throw await parseError(r);
    return (await r.json()) as T;
  }

  listExamples(): Promise<Record<string, string>> {
    return this.json("/examples");
  }

  createFromExample(name: string): Promise<{ id: string; state: SessionState }> {
    return this.json("/sessions", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ example: name }),
    });
  }

  createFromText(text: string): Promise<{ id: string; state: SessionState }> {
    return this.json("/sessions", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ text }),
    });
  }

  getState(id: string, panels: string[] = [], vertex?: string): Promise<SessionState> {
    const params = new URLSearchParams();
    for (const p of panels) params.append("panel", p);
    if (vertex !== undefined) params.set("vertex", vertex);
    const qs = params.toString();
    return this.json(`/sessions/${id}${qs ? "?" + qs : ""}`);
  }

  mutate(id: string, vertex: string): Promise<{ state: SessionState; delta: MutateDelta }> {
    return this.json(`/sessions/${id}/mutate`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ vertex }),
    });
  }

  undo(id: string): Promise<{ state: SessionState }> {
    return this.json(`/sessions/${id}/undo`, { method: "POST" });
  }
}
