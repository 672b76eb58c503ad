// Deterministic graph layout: vertices on a circle in declaration order,
// multi-edges separated by arc offsets, loops drawn as small circles.
// An optional force refinement nudges vertices apart without randomness,
// so screenshots stay reproducible.

import type { ArrowInfo } from "./api.js";

export interface Point {
  x: number;
  y: number;
}

export function circularLayout(
  vertices: string[],
  cx: number,
  cy: number,
  radius: number,
): Map<string, Point> {
  const pos = new Map<string, Point>();
  const n = Math.max(vertices.length, 1);
  vertices.forEach((v, k) => {
    const angle = -Math.PI / 2 + (2 * Math.PI * k) / n;
    pos.set(v, {
      x: cx + radius * Math.cos(angle),
      y: cy + radius * Math.sin(angle),
    });
  });
  return pos;
}

export function forceRefine(
  pos: Map<string, Point>,
  arrows: ArrowInfo[],
  iterations = 20,
  idealLength = 160,
): Map<string, Point> {
  const out = new Map([...pos.entries()].map(([k, p]) => [k, { ...p }]));
  const names = [...out.keys()];
  for (let it = 0; it < iterations; it++) {
    const force = new Map(names.map((v) => [v, { x: 0, y: 0 }]));
    for (let i = 0; i < names.length; i++) {
      for (let j = i + 1; j < names.length; j++) {
        const a = out.get(names[i])!;
        const b = out.get(names[j])!;
        const dx = a.x - b.x;
        const dy = a.y - b.y;
        const d2 = Math.max(dx * dx + dy * dy, 1);
        const f = (idealLength * idealLength) / d2 / 10;
        force.get(names[i])!.x += dx * f;
        force.get(names[i])!.y += dy * f;
        force.get(names[j])!.x -= dx * f;
        force.get(names[j])!.y -= dy * f;
      }
    }
    for (const e of arrows) {
      if (e.src === e.dst) continue;
      const a = out.get(e.src)!;
      const b = out.get(e.dst)!;
      const dx = b.x - a.x;
      const dy = b.y - a.y;
      const d = Math.max(Math.hypot(dx, dy), 1);
      const f = (d - idealLength) / d / 20;
      force.get(e.src)!.x += dx * f;
      force.get(e.src)!.y += dy * f;
      force.get(e.dst)!.x -= dx * f;
      force.get(e.dst)!.y -= dy * f;
    }
    for (const v of names) {
      const p = out.get(v)!;
      const f = force.get(v)!;
      p.x += Math.max(-12, Math.min(12, f.x));
      p.y += Math.max(-12, Math.min(12, f.y));
    }
  }
  return out;
}

export interface EdgeGeom {
  name: string;
  src: string;
  dst: string;
  degree?: number;
  path: string;
  labelX: number;
  labelY: number;
}

// Arc offset for the k-th of n parallel edges (same unordered pair).
function arcOffset(k: number, n: number): number {
  if (n === 1) return 0;
  return (k - (n - 1) / 2) * 36;
}

export function edgeGeometries(
  arrows: ArrowInfo[],
  pos: Map<string, Point>,
  nodeRadius = 18,
): EdgeGeom[] {
  const groups = new Map<string, ArrowInfo[]>();
  for (const a of arrows) {
    const key = [a.src, a.dst].sort().join("|");
    const g = groups.get(key) ?? [];
    g.push(a);
    groups.set(key, g);
  }
  const out: EdgeGeom[] = [];
  for (const group of groups.values()) {
    group.forEach((a, k) => {
      const p = pos.get(a.src);
      const q = pos.get(a.dst);
      if (!p || !q) return;
      if (a.src === a.dst) {
        const r = 16 + 10 * k;
        const top = { x: p.x, y: p.y - nodeRadius };
        out.push({
          name: a.name,
          src: a.src,
          dst: a.dst,
          degree: a.deg,
          path:
            `M ${top.x - 6} ${top.y} ` +
            `C ${top.x - r} ${top.y - r}, ${top.x + r} ${top.y - r}, ${top.x + 6} ${top.y}`,
          labelX: p.x,
          labelY: top.y - r - 4,
        });
        return;
      }
      const dx = q.x - p.x;
      const dy = q.y - p.y;
      const d = Math.max(Math.hypot(dx, dy), 1);
      const ux = dx / d;
      const uy = dy / d;
      // normal points consistently for the sorted pair, so opposite arrows
      // of a 2-cycle bend to opposite sides
      const flip = a.src < a.dst ? 1 : -1;
      const off = arcOffset(k, group.length) * flip + (group.length > 1 ? 0 : 0);
      const nx = -uy * off;
      const ny = ux * off;
      const sx = p.x + ux * nodeRadius;
      const sy = p.y + uy * nodeRadius;
      const ex = q.x - ux * nodeRadius;
      const ey = q.y - uy * nodeRadius;
      const mx = (sx + ex) / 2 + nx;
      const my = (sy + ey) / 2 + ny;
      out.push({
        name: a.name,
        src: a.src,
        dst: a.dst,
        degree: a.deg,
        path: `M ${sx} ${sy} Q ${mx} ${my} ${ex} ${ey}`,
        labelX: (sx + ex) / 2 + nx * 0.75,
        labelY: (sy + ey) / 2 + ny * 0.75 - 4,
      });
    });
  }
  return out;
}

// Degree coloring for graded quivers (plain QPs are all degree 0 = default).
export function degreeColor(degree: number | undefined): string {
  switch (degree ?? 0) {
    case 0:
      return "#334";
    case -1:
      return "#c2571a";
    case -2:
      return "#7b2d8b";
    default:
      return "#888";
  }
}
