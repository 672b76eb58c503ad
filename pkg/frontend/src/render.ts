// SVG rendering of the quiver and the chrome around it. Pure DOM: the
// data always comes straight from the last server state.

import type { SessionState } from "./api.js";
import { circularLayout, degreeColor, edgeGeometries } from "./layout.js";

const SVG = "http://www.w3.org/2000/svg";

export interface RenderOptions {
  onVertexClick?: (vertex: string) => void;
  highlightAdded?: Set<string>;
  flashCancelled?: Set<string>;
}

function svgEl<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
): SVGElementTagNameMap[K] {
  const el = document.createElementNS(SVG, tag);
  for (const [k, v] of Object.entries(attrs)) el.setAttribute(k, v);
  return el;
}

export function renderGraph(
  svg: SVGSVGElement,
  state: SessionState,
  opts: RenderOptions = {},
): void {
  svg.innerHTML = "";
  const width = Number(svg.getAttribute("width") || 520);
  const height = Number(svg.getAttribute("height") || 420);
  const defs = svgEl("defs");
  const marker = svgEl("marker", {
    id: "arrowhead",
    viewBox: "0 0 10 10",
    refX: "9",
    refY: "5",
    markerWidth: "7",
    markerHeight: "7",
    orient: "auto-start-reverse",
  });
  marker.appendChild(svgEl("path", { d: "M 0 0 L 10 5 L 0 10 z", fill: "#334" }));
  defs.appendChild(marker);
  svg.appendChild(defs);

  const pos = circularLayout(
    state.vertices, width / 2, height / 2, Math.min(width, height) / 2 - 50);
  const edges = edgeGeometries(state.arrows, pos);
  for (const e of edges) {
    const cls = ["edge"];
    if (opts.highlightAdded?.has(e.name)) cls.push("edge-new");
    if (opts.flashCancelled?.has(e.name)) cls.push("edge-cancelled");
    const path = svgEl("path", {
      d: e.path,
      class: cls.join(" "),
      fill: "none",
      stroke: degreeColor(e.degree),
      "stroke-width": "1.6",
      "marker-end": "url(#arrowhead)",
      "data-arrow": e.name,
      "data-src": e.src,
      "data-dst": e.dst,
    });
    svg.appendChild(path);
    const label = svgEl("text", {
      x: String(e.labelX),
      y: String(e.labelY),
      class: "edge-label",
      "text-anchor": "middle",
    });
    label.textContent = e.name;
    svg.appendChild(label);
  }

  for (const v of state.vertices) {
    const p = pos.get(v)!;
    const flags = state.validation.vertices[v];
    const group = svgEl("g", {
      class: "vertex" + (flags?.mutable ? " mutable" : " frozen"),
      "data-vertex": v,
    });
    const circle = svgEl("circle", {
      cx: String(p.x),
      cy: String(p.y),
      r: "18",
      class: "vertex-circle",
      fill: flags?.mutable ? "#e8f4e8" : "#f6e0e0",
      stroke: flags?.mutable ? "#2c7a2c" : "#a33",
      "stroke-width": "2",
    });
    const label = svgEl("text", {
      x: String(p.x),
      y: String(p.y + 5),
      "text-anchor": "middle",
      class: "vertex-label",
    });
    label.textContent = v;
    const badge = svgEl("title");
    badge.textContent = flags?.loop
      ? "loop at vertex (c1)"
      : flags?.two_cycle
        ? "two-cycle at vertex (c2)"
        : "mutable";
    group.appendChild(circle);
    group.appendChild(label);
    group.appendChild(badge);
    if (opts.onVertexClick) {
      group.addEventListener("click", () => opts.onVertexClick!(v));
    }
    svg.appendChild(group);
  }
}

export function renderBreadcrumb(el: HTMLElement, state: SessionState): void {
  el.innerHTML = "";
  state.trail.forEach((step, k) => {
    const span = document.createElement("span");
    span.className = "crumb";
    span.textContent = k === 0 ? "initial" : `mu_${step}`;
    el.appendChild(span);
  });
}

export function renderPotential(el: HTMLElement, state: SessionState): void {
  el.innerHTML = "";
  if (!state.potential.length) {
    const li = document.createElement("li");
    li.textContent = "0";
    el.appendChild(li);
    return;
  }
  for (const term of state.potential) {
    const li = document.createElement("li");
    const sign = term.coeff.startsWith("-") ? "" : "+";
    li.textContent = `${sign}${term.coeff} ${term.word.join(".")}`;
    el.appendChild(li);
  }
}

export function renderDiagnostics(
  el: HTMLElement,
  diagnostics: { line: number; col: number; message: string; token?: string }[],
): void {
  el.innerHTML = "";
  for (const d of diagnostics) {
    const li = document.createElement("li");
    li.className = "diagnostic";
    li.dataset.line = String(d.line);
    li.textContent = `line ${d.line}, col ${d.col}: ${d.message}` +
      (d.token ? ` near '${d.token}'` : "");
    el.appendChild(li);
  }
}

export function renderInvolutionBadge(
  el: HTMLElement,
  verdict: "pass" | "fail" | null,
): void {
  el.textContent = verdict ?? "";
  el.className = "involution-badge" + (verdict ? ` involution-${verdict}` : "");
}
