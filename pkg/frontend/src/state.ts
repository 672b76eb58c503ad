// View-state plumbing: one in-flight request per session (clicks queue),
// stale responses discarded by sequence number, and the invariant that
// everything rendered mirrors the latest accepted server state.

import type { SessionState } from "./api.js";

export interface PanelSelection {
  jacobian: boolean;
  homology: boolean;
  phi: boolean;
}

export class SequenceGate {
  private issued = 0;
  private applied = 0;

  next(): number {
    return ++this.issued;
  }

  // a response may only be applied if nothing newer has been applied
  accept(seq: number): boolean {
    if (seq <= this.applied) return false;
    this.applied = seq;
    return true;
  }
}

export class RequestQueue {
  private chain: Promise<void> = Promise.resolve();
  private pending = 0;

  get depth(): number {
    return this.pending;
  }

  enqueue<T>(task: () => Promise<T>): Promise<T> {
    this.pending += 1;
    const run = this.chain.then(task);
    this.chain = run.then(
      () => {
        this.pending -= 1;
      },
      () => {
        this.pending -= 1;
      },
    );
    return run;
  }
}

export interface ViewState {
  sessionId: string | null;
  server: SessionState | null;
  panels: PanelSelection;
  lastError: string | null;
  involution: "pass" | "fail" | null;
}

export type Listener = (s: ViewState) => void;

export class Store {
  state: ViewState = {
    sessionId: null,
    server: null,
    panels: { jacobian: false, homology: false, phi: false },
    lastError: null,
    involution: null,
  };
  readonly gate = new SequenceGate();
  readonly queue = new RequestQueue();
  private listeners: Listener[] = [];

  subscribe(fn: Listener): void {
    this.listeners.push(fn);
  }

  private emit(): void {
    for (const fn of this.listeners) fn(this.state);
  }

  applyServerState(state: SessionState, seq: number): boolean {
    if (!this.gate.accept(seq)) return false;
    this.state.server = state;
    this.state.sessionId = state.id;
    this.state.lastError = null;
    const inv = state.panels?.involution;
    if (inv && inv.available && inv.passed !== undefined) {
      this.state.involution = inv.passed ? "pass" : "fail";
    }
    this.emit();
    return true;
  }

  setError(message: string): void {
    this.state.lastError = message;
    this.emit();
  }

  setPanels(panels: Partial<PanelSelection>): void {
    this.state.panels = { ...this.state.panels, ...panels };
    this.emit();
  }

  clearInvolution(): void {
    this.state.involution = null;
  }

  activePanelNames(): string[] {
    const names: string[] = [];
    if (this.state.panels.homology) names.push("homology");
    if (this.state.panels.phi) names.push("phi");
    return names;
  }

  // the last two moves were the same vertex: worth asking for the
  // involution panel on the next refresh
  doubleMutationVertex(): string | null {
    const trail = this.state.server?.trail ?? [];
    if (trail.length < 3) return null;
    const a = trail[trail.length - 1];
    const b = trail[trail.length - 2];
    return a !== null && a === b ? a : null;
  }
}

export function arrowMultiset(state: SessionState): Map<string, number> {
  const counts = new Map<string, number>();
  for (const a of state.arrows) {
    const key = `${a.src}->${a.dst}`;
    counts.set(key, (counts.get(key) ?? 0) + 1);
  }
  return counts;
}

export function sameMultiset(a: Map<string, number>, b: Map<string, number>): boolean {
  if (a.size !== b.size) return false;
  for (const [k, v] of a) if (b.get(k) !== v) return false;
  return true;
}
