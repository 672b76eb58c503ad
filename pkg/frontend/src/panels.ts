// Invariant panels. Each renderer consumes one server response field and
// writes DOM; dimensions and intervals are never recomputed client-side.

import type { HomologyPanel, PhiPanel, SessionState } from "./api.js";

const SVG = "http://www.w3.org/2000/svg";

export function renderJacobianSparkline(el: HTMLElement, state: SessionState): void {
  el.innerHTML = "";
  const { orders, dims } = state.jacobian;
  const caption = document.createElement("div");
  caption.className = "panel-caption";
  caption.textContent = `Jacobian dims, orders ${orders[0]}..${orders[orders.length - 1]}: ` +
    dims.join(", ");
  el.appendChild(caption);
  const w = 180;
  const h = 44;
  const svg = document.createElementNS(SVG, "svg");
  svg.setAttribute("width", String(w));
  svg.setAttribute("height", String(h));
  const maxDim = Math.max(...dims, 1);
  const pts = dims
    .map((d, k) => {
      const x = dims.length > 1 ? (k * (w - 10)) / (dims.length - 1) + 5 : w / 2;
      const y = h - 6 - (d / maxDim) * (h - 12);
      return `${x},${y}`;
    })
    .join(" ");
  const line = document.createElementNS(SVG, "polyline");
  line.setAttribute("points", pts);
  line.setAttribute("fill", "none");
  line.setAttribute("stroke", "#2c7a2c");
  line.setAttribute("stroke-width", "2");
  svg.appendChild(line);
  el.appendChild(svg);
}

export function renderHomologyGrid(el: HTMLElement, panel: HomologyPanel): void {
  el.innerHTML = "";
  const table = document.createElement("table");
  table.className = "homology-grid";
  const head = document.createElement("tr");
  head.appendChild(document.createElement("th"));
  for (const n of panel.orders) {
    const th = document.createElement("th");
    th.textContent = `m^${n}`;
    head.appendChild(th);
  }
  table.appendChild(head);
  const byKey = new Map(panel.dims.map((c) => [`${c.degree}|${c.order}`, c.dim]));
  const maxDim = Math.max(...panel.dims.map((c) => c.dim), 1);
  for (const p of [...panel.degrees].sort((a, b) => b - a)) {
    const tr = document.createElement("tr");
    const th = document.createElement("th");
    th.textContent = `H^${p}`;
    tr.appendChild(th);
    for (const n of panel.orders) {
      const td = document.createElement("td");
      const dim = byKey.get(`${p}|${n}`) ?? 0;
      td.textContent = String(dim);
      td.dataset.degree = String(p);
      td.dataset.order = String(n);
      const heat = Math.min(9, Math.round((dim / maxDim) * 9));
      td.className = `cell heat-${heat}`;
      tr.appendChild(td);
    }
    table.appendChild(tr);
  }
  el.appendChild(table);
}

export function renderPhiList(el: HTMLElement, panel: PhiPanel): void {
  el.innerHTML = "";
  const caption = document.createElement("div");
  caption.className = "panel-caption";
  caption.textContent = `Phi intervals after mutation at ${panel.vertex}`;
  el.appendChild(caption);
  const ul = document.createElement("ul");
  for (const [j, [lo, hi]] of Object.entries(panel.intervals)) {
    const li = document.createElement("li");
    li.dataset.simple = j;
    li.textContent = lo === hi
      ? `Phi(S'_${j}) = ${lo}`
      : `Phi(S'_${j}) in [${lo}, ${hi}]`;
    ul.appendChild(li);
  }
  el.appendChild(ul);
}
