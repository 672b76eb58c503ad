// Wiring: example picker, text loader with inline diagnostics, the click-
// to-mutate graph, undo, breadcrumb, and the invariant panels.

import { ApiClient, ApiError, SessionState } from "./api.js";
import { renderHomologyGrid, renderJacobianSparkline, renderPhiList } from "./panels.js";
import {
  renderBreadcrumb,
  renderDiagnostics,
  renderGraph,
  renderInvolutionBadge,
  renderPotential,
} from "./render.js";
import { Store } from "./state.js";

export interface Explorer {
  store: Store;
  api: ApiClient;
  loadExample(name: string): Promise<void>;
  loadText(text: string): Promise<void>;
  clickVertex(vertex: string): Promise<void>;
  undo(): Promise<void>;
  refresh(): Promise<void>;
  setPanel(name: "jacobian" | "homology" | "phi", on: boolean): Promise<void>;
}

function el<T extends HTMLElement>(root: Document, id: string): T {
  const found = root.getElementById(id);
  if (!found) throw new Error(`missing #${id}`);
  return found as T;
}

export function boot(root: Document, api: ApiClient): Explorer {
  const store = new Store();
  const graph = el<HTMLElement>(root, "graph") as unknown as SVGSVGElement;
  const breadcrumb = el<HTMLElement>(root, "breadcrumb");
  const potential = el<HTMLElement>(root, "potential");
  const diagnostics = el<HTMLElement>(root, "diagnostics");
  const errorBox = el<HTMLElement>(root, "error-box");
  const involutionBadge = el<HTMLElement>(root, "involution-badge");
  const undoBtn = el<HTMLButtonElement>(root, "undo-btn");
  const panelJacobian = el<HTMLElement>(root, "panel-jacobian");
  const panelHomology = el<HTMLElement>(root, "panel-homology");
  const panelPhi = el<HTMLElement>(root, "panel-phi");

  let lastDelta: { added: string[]; cancelled: string[] } = { added: [], cancelled: [] };

  function redraw(state: SessionState): void {
    renderGraph(graph, state, {
      onVertexClick: (v) => void explorer.clickVertex(v),
      highlightAdded: new Set(lastDelta.added),
      flashCancelled: new Set(lastDelta.cancelled),
    });
    renderBreadcrumb(breadcrumb, state);
    renderPotential(potential, state);
    renderInvolutionBadge(involutionBadge, store.state.involution);
    undoBtn.disabled = state.history_length < 2;
    errorBox.textContent = "";
    panelJacobian.innerHTML = "";
    panelHomology.innerHTML = "";
    panelPhi.innerHTML = "";
    if (store.state.panels.jacobian) {
      renderJacobianSparkline(panelJacobian, state);
    }
    if (state.panels?.homology && store.state.panels.homology) {
      renderHomologyGrid(panelHomology, state.panels.homology);
    }
    if (state.panels?.phi && store.state.panels.phi) {
      renderPhiList(panelPhi, state.panels.phi);
    }
  }

  store.subscribe((s) => {
    if (s.server) redraw(s.server);
    if (s.lastError) errorBox.textContent = s.lastError;
  });

  async function fetchState(extraPanels: string[] = []): Promise<void> {
    const id = store.state.sessionId;
    if (!id) return;
    const seq = store.gate.next();
    const panels = [...store.activePanelNames(), ...extraPanels];
    const vertex = store.doubleMutationVertex();
    if (vertex !== null) panels.push("involution");
    const state = await api.getState(id, panels, vertex ?? undefined);
    store.applyServerState(state, seq);
  }

  // refetch only when a panel or the involution badge actually needs data
  async function fetchStateIfNeeded(): Promise<void> {
    if (store.activePanelNames().length || store.doubleMutationVertex() !== null) {
      await fetchState();
    }
  }

  const explorer: Explorer = {
    store,
    api,

    async loadExample(name: string): Promise<void> {
      return store.queue.enqueue(async () => {
        diagnostics.innerHTML = "";
        store.clearInvolution();
        const seq = store.gate.next();
        const { state } = await api.createFromExample(name);
        lastDelta = { added: [], cancelled: [] };
        store.applyServerState(state, seq);
      });
    },

    async loadText(text: string): Promise<void> {
      return store.queue.enqueue(async () => {
        diagnostics.innerHTML = "";
        store.clearInvolution();
        try {
          const seq = store.gate.next();
          const { state } = await api.createFromText(text);
          lastDelta = { added: [], cancelled: [] };
          store.applyServerState(state, seq);
        } catch (err) {
          if (err instanceof ApiError) {
            renderDiagnostics(diagnostics, err.diagnostics);
            store.setError(err.message);
            return;
          }
          throw err;
        }
      });
    },

    async clickVertex(vertex: string): Promise<void> {
      return store.queue.enqueue(async () => {
        const id = store.state.sessionId;
        if (!id) return;
        const flags = store.state.server?.validation.vertices[vertex];
        if (flags && !flags.mutable) {
          store.setError(flags.loop ? "loop at vertex" : "two-cycle at vertex");
          return;
        }
        graph.querySelector(`[data-vertex="${vertex}"]`)
          ?.classList.add("clicked");
        try {
          const seq = store.gate.next();
          const { state, delta } = await api.mutate(id, vertex);
          lastDelta = {
            added: delta.added,
            cancelled: delta.cancelled_pairs.flat(),
          };
          store.applyServerState(state, seq);
          await fetchStateIfNeeded();
        } catch (err) {
          if (err instanceof ApiError) {
            store.setError(err.message);
            return;
          }
          throw err;
        }
      });
    },

    async undo(): Promise<void> {
      return store.queue.enqueue(async () => {
        const id = store.state.sessionId;
        if (!id) return;
        store.clearInvolution();
        try {
          const seq = store.gate.next();
          const { state } = await api.undo(id);
          lastDelta = { added: [], cancelled: [] };
          store.applyServerState(state, seq);
          await fetchStateIfNeeded();
        } catch (err) {
          if (err instanceof ApiError) {
            store.setError(err.message);
            return;
          }
          throw err;
        }
      });
    },

    async refresh(): Promise<void> {
      return store.queue.enqueue(() => fetchState());
    },

    async setPanel(name, on): Promise<void> {
      store.setPanels({ [name]: on });
      if (on && store.state.sessionId) {
        // jacobian data rides along with every state; the other panels
        // need a refetch that actually asks for them
        if (name === "jacobian") {
          if (store.state.server) redraw(store.state.server);
          return;
        }
        return explorer.refresh();
      }
      if (store.state.server) redraw(store.state.server);
    },
  };

  // static chrome wiring, when the full page is present
  const picker = root.getElementById("example-picker") as HTMLSelectElement | null;
  const loadBtn = root.getElementById("load-btn");
  const textArea = root.getElementById("qp-text") as HTMLTextAreaElement | null;
  const loadTextBtn = root.getElementById("load-text-btn");
  if (picker) {
    void api.listExamples().then((examples) => {
      picker.innerHTML = "";
      for (const name of Object.keys(examples).sort()) {
        const opt = root.createElement("option");
        opt.value = name;
        opt.textContent = name;
        picker.appendChild(opt);
      }
      if (textArea) {
        picker.addEventListener("change", () => {
          textArea.value = examples[picker.value] ?? "";
        });
      }
    });
  }
  loadBtn?.addEventListener("click", () => {
    if (picker) void explorer.loadExample(picker.value);
  });
  loadTextBtn?.addEventListener("click", () => {
    if (textArea) void explorer.loadText(textArea.value);
  });
  undoBtn.addEventListener("click", () => void explorer.undo());
  for (const name of ["jacobian", "homology", "phi"] as const) {
    const box = root.getElementById(`toggle-${name}`) as HTMLInputElement | null;
    box?.addEventListener("change", () => void explorer.setPanel(name, box.checked));
  }
  return explorer;
}
