// End-to-end: a real qpcalc server process, the real UI wiring in jsdom.
// Flow under test: load the 3-cycle example, click vertex 1 twice, check
// the rendered arrow multiset returns to the initial one and the
// involution badge reads "pass"; homology panel cells equal the server's
// JSON; with panels off no panel API calls are issued.

import { spawn, type ChildProcess } from "node:child_process";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { boot, type Explorer } from "../src/main.js";

const PORT = 8470 + Math.floor(Math.random() * 400);
const BASE = `http://127.0.0.1:${PORT}`;

let server: ChildProcess;

async function waitForServer(timeoutMs = 30000): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  while (Date.now() < deadline) {
    try {
      const r = await fetch(`${BASE}/examples`);
      if (r.ok) return;
    } catch {
      // not up yet
    }
    await new Promise((r) => setTimeout(r, 250));
  }
  throw new Error("qpcalc server did not come up");
}

function buildDom(): void {
  document.body.innerHTML = `
    <div id="error-box"></div>
    <select id="example-picker"></select>
    <button id="load-btn"></button>
    <textarea id="qp-text"></textarea>
    <button id="load-text-btn"></button>
    <ul id="diagnostics"></ul>
    <svg id="graph" width="520" height="420"></svg>
    <button id="undo-btn"></button>
    <span id="involution-badge"></span>
    <div id="breadcrumb"></div>
    <ul id="potential"></ul>
    <input type="checkbox" id="toggle-jacobian">
    <input type="checkbox" id="toggle-homology">
    <input type="checkbox" id="toggle-phi">
    <div id="panel-jacobian"></div>
    <div id="panel-homology"></div>
    <div id="panel-phi"></div>
  `;
}

function renderedArrowMultiset(): Map<string, number> {
  const counts = new Map<string, number>();
  for (const el of document.querySelectorAll("#graph path[data-arrow]")) {
    const key = `${el.getAttribute("data-src")}->${el.getAttribute("data-dst")}`;
    counts.set(key, (counts.get(key) ?? 0) + 1);
  }
  return counts;
}

function clickVertex(v: string): void {
  const el = document.querySelector(`#graph g[data-vertex="${v}"]`);
  if (!el) throw new Error(`vertex ${v} not rendered`);
  el.dispatchEvent(new MouseEvent("click", { bubbles: true }));
}

async function drain(explorer: Explorer): Promise<void> {
  // wait until the click queue has fully run
  while (explorer.store.queue.depth > 0) {
    await new Promise((r) => setTimeout(r, 20));
  }
}

async function settle(explorer: Explorer): Promise<void> {
  await drain(explorer);
  await explorer.refresh();
}

describe("explorer end to end", () => {
  const apiCalls: string[] = [];
  let explorer: Explorer;

  beforeAll(async () => {
    server = spawn(
      "python3",
      ["-m", "qpcalc.server", "--port", String(PORT)],
      { stdio: "ignore" },
    );
    await waitForServer();
    buildDom();
    const countingFetch = (url: string, init?: RequestInit) => {
      apiCalls.push(url);
      return fetch(url, init);
    };
    explorer = boot(document, new ApiClient(BASE, countingFetch));
  }, 60000);

  afterAll(() => {
    server?.kill();
  });

  it("loads the 3-cycle example and renders it", async () => {
    await explorer.loadExample("c3");
    const arrows = renderedArrowMultiset();
    expect([...arrows.entries()].sort()).toEqual([
      ["1->2", 1],
      ["2->3", 1],
      ["3->1", 1],
    ]);
    // all three vertices badged mutable
    expect(document.querySelectorAll("#graph g.vertex.mutable")).toHaveLength(3);
    // view/server coherence: rendered arrows equal GET state's arrows
    const state = await explorer.api.getState(explorer.store.state.sessionId!);
    expect(document.querySelectorAll("#graph path[data-arrow]")).toHaveLength(
      state.arrows.length,
    );
  });

  it("click vertex 1 twice returns to the initial arrow multiset with a pass badge", async () => {
    const initial = renderedArrowMultiset();
    clickVertex("1");
    await settle(explorer);
    const afterOne = renderedArrowMultiset();
    expect(afterOne.size).toBe(2); // a*: 2->1 and c*: 1->3
    expect(document.getElementById("potential")!.textContent).toBe("0");

    clickVertex("1");
    await settle(explorer);
    const afterTwo = renderedArrowMultiset();
    expect([...afterTwo.entries()].sort()).toEqual([...initial.entries()].sort());
    expect(document.getElementById("involution-badge")!.textContent).toBe("pass");
    // breadcrumb length equals the server history length
    const state = await explorer.api.getState(explorer.store.state.sessionId!);
    expect(document.querySelectorAll("#breadcrumb .crumb")).toHaveLength(
      state.history_length,
    );
  });

  it("homology panel cells equal the server's JSON values", async () => {
    await explorer.setPanel("homology", true);
    await settle(explorer);
    const sid = explorer.store.state.sessionId!;
    const state = await explorer.api.getState(sid, ["homology"]);
    const cells = document.querySelectorAll("#panel-homology td.cell");
    expect(cells.length).toBeGreaterThan(0);
    const byKey = new Map(
      state.panels!.homology!.dims.map((c) => [`${c.degree}|${c.order}`, c.dim]),
    );
    for (const cell of cells) {
      const key = `${cell.getAttribute("data-degree")}|${cell.getAttribute("data-order")}`;
      expect(Number(cell.textContent)).toBe(byKey.get(key));
    }
    await explorer.setPanel("homology", false);
  });

  it("undo rewinds the breadcrumb and the graph", async () => {
    clickVertex("1");
    await settle(explorer);
    const before = document.querySelectorAll("#breadcrumb .crumb").length;
    await explorer.undo();
    await settle(explorer);
    expect(document.querySelectorAll("#breadcrumb .crumb")).toHaveLength(before - 1);
  });

  it("issues no display-panel API calls while panels are off", async () => {
    apiCalls.length = 0;
    clickVertex("1");
    await drain(explorer);
    await explorer.undo();
    await drain(explorer);
    // the involution badge may ride along after a double mutation, but the
    // display panels must stay silent and empty
    const panelCalls = apiCalls.filter(
      (u) => u.includes("panel=homology") || u.includes("panel=phi"),
    );
    expect(panelCalls).toEqual([]);
    expect(document.getElementById("panel-homology")!.innerHTML).toBe("");
    expect(document.getElementById("panel-phi")!.innerHTML).toBe("");
  });

  it("shows inline diagnostics for malformed text", async () => {
    await explorer.loadText("vertices 1 2\narrow a 1 2\npotential 1 a\n");
    const items = document.querySelectorAll("#diagnostics .diagnostic");
    expect(items.length).toBeGreaterThan(0);
    expect(items[0].textContent).toContain("not a cycle");
    expect((items[0] as HTMLElement).dataset.line).toBe("3");
  });

  it("rejects clicks on unmutable vertices with a named condition", async () => {
    await explorer.loadExample("k2");
    clickVertex("1");
    await drain(explorer);
    expect(document.getElementById("error-box")!.textContent).toContain("two-cycle");
    // state unchanged: still 4 arrows
    expect(document.querySelectorAll("#graph path[data-arrow]")).toHaveLength(4);
  });
});
