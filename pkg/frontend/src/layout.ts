import type { GraphJson } from "./types.js";

export interface Point {
  x: number;
  y: number;
}

/** True when the edge set is a single cycle through every vertex. */
export function isCycleGraph(g: GraphJson): boolean {
  if (g.m < 3 || g.edges.length !== g.m) return false;
  const degree = new Array(g.m).fill(0);
  const adj: number[][] = Array.from({ length: g.m }, () => []);
  for (const [u, v] of g.edges) {
    degree[u]++;
    degree[v]++;
    adj[u].push(v);
    adj[v].push(u);
  }
  if (degree.some((d) => d !== 2)) return false;
  // follow the walk; a single cycle visits everything
  let prev = -1;
  let cur = 0;
  for (let step = 0; step < g.m; step++) {
    const next = adj[cur][0] === prev ? adj[cur][1] : adj[cur][0];
    prev = cur;
    cur = next;
  }
  return cur === 0;
}

/** Vertex order around the cycle starting at 0. */
export function cycleOrder(g: GraphJson): number[] {
  const adj: number[][] = Array.from({ length: g.m }, () => []);
  for (const [u, v] of g.edges) {
    adj[u].push(v);
    adj[v].push(u);
  }
  const walk = [0];
  let prev = -1;
  let cur = 0;
  for (let step = 0; step < g.m - 1; step++) {
    const next = adj[cur][0] === prev ? adj[cur][1] : adj[cur][0];
    prev = cur;
    cur = next;
    walk.push(cur);
  }
  return walk;
}

export function circularLayout(g: GraphJson, cx: number, cy: number, radius: number): Point[] {
  const order = isCycleGraph(g) ? cycleOrder(g) : Array.from({ length: g.m }, (_, i) => i);
  const points: Point[] = new Array(g.m);
  order.forEach((v, idx) => {
    const angle = (2 * Math.PI * idx) / g.m - Math.PI / 2;
    points[v] = { x: cx + radius * Math.cos(angle), y: cy + radius * Math.sin(angle) };
  });
  return points;
}

/** Deterministic spring relaxation for graphs that are not cycles. */
export function forceLayout(g: GraphJson, cx: number, cy: number, radius: number): Point[] {
  const pts = circularLayout(g, cx, cy, radius);
  if (g.m <= 2) return pts;
  const adjacent = new Set(g.edges.map(([u, v]) => `${u},${v}`));
  const isAdj = (u: number, v: number) => adjacent.has(`${Math.min(u, v)},${Math.max(u, v)}`);
  const ideal = radius * 0.9;
  for (let iter = 0; iter < 150; iter++) {
    const fx = new Array(g.m).fill(0);
    const fy = new Array(g.m).fill(0);
    for (let u = 0; u < g.m; u++) {
      for (let v = u + 1; v < g.m; v++) {
        const dx = pts[v].x - pts[u].x;
        const dy = pts[v].y - pts[u].y;
        const dist = Math.max(1e-3, Math.hypot(dx, dy));
        let f = 0;
        if (isAdj(u, v)) f = (dist - ideal) * 0.02;
        f += -(radius * radius * 0.25) / (dist * dist) * 0.08;
        fx[u] += (f * dx) / dist;
        fy[u] += (f * dy) / dist;
        fx[v] -= (f * dx) / dist;
        fy[v] -= (f * dy) / dist;
      }
    }
    for (let u = 0; u < g.m; u++) {
      pts[u].x += Math.max(-4, Math.min(4, fx[u]));
      pts[u].y += Math.max(-4, Math.min(4, fy[u]));
      // keep inside the panel
      pts[u].x = Math.max(cx - radius * 1.25, Math.min(cx + radius * 1.25, pts[u].x));
      pts[u].y = Math.max(cy - radius * 1.25, Math.min(cy + radius * 1.25, pts[u].y));
    }
  }
  return pts;
}

/** Arc distance (either way around) between two cycle positions. */
export function cycleDistance(m: number, posA: number, posB: number): number {
  const d = Math.abs(posA - posB);
  return Math.min(d, m - d);
}
