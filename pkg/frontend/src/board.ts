import { circularLayout, cycleOrder, forceLayout, isCycleGraph } from "./layout.js";
import type { DiscretePayoff, GraphJson, Move, PayoffReportJson, SessionState } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const PANEL = 260;
const RADIUS = 100;

function svgEl<K extends keyof SVGElementTagNameMap>(tag: K): SVGElementTagNameMap[K] {
  return document.createElementNS(SVG_NS, tag);
}

export interface BoardCallbacks {
  onVertexClick: (move: Move) => void;
}

/** Render one graph panel: vertices (clickable when legal), edges, pick
 * markers with inning labels, and arc-distance annotations on cycles. */
function renderGraphPanel(
  g: GraphJson,
  graphIndex: 1 | 2,
  state: SessionState,
  highlighted: Move[],
  callbacks: BoardCallbacks,
): SVGSVGElement {
  const svg = svgEl("svg");
  svg.setAttribute("viewBox", `0 0 ${PANEL} ${PANEL}`);
  svg.setAttribute("class", "graph-panel");
  const cycle = isCycleGraph(g);
  const pts = cycle
    ? circularLayout(g, PANEL / 2, PANEL / 2, RADIUS)
    : forceLayout(g, PANEL / 2, PANEL / 2, RADIUS * 0.8);

  for (const [u, v] of g.edges) {
    const line = svgEl("line");
    line.setAttribute("x1", String(pts[u].x));
    line.setAttribute("y1", String(pts[u].y));
    line.setAttribute("x2", String(pts[v].x));
    line.setAttribute("y2", String(pts[v].y));
    line.setAttribute("class", "edge");
    svg.appendChild(line);
  }

  const picks = state.picks ?? [];
  const marker = new Map<number, string>();
  picks.forEach(([a, b], i) => {
    const v = graphIndex === 1 ? a : b;
    marker.set(v, `${graphIndex === 1 ? "a" : "b"}${i + 1}`);
  });
  if (state.pending && state.pending.graph === graphIndex) {
    marker.set(state.pending.v, `${graphIndex === 1 ? "a" : "b"}${picks.length + 1}?`);
  }

  if (cycle && marker.size >= 2) {
    annotateArcs(svg, g, pts, [...marker.keys()]);
  }

  const legalHere = new Set(highlighted.filter(([gi]) => gi === graphIndex).map(([, v]) => v));
  const mismatchVerts = mismatchVertices(state, graphIndex);
  for (let v = 0; v < g.m; v++) {
    const grp = svgEl("g");
    const circle = svgEl("circle");
    circle.setAttribute("cx", String(pts[v].x));
    circle.setAttribute("cy", String(pts[v].y));
    circle.setAttribute("r", "11");
    const classes = ["vertex"];
    if (marker.has(v)) classes.push("picked");
    if (legalHere.has(v)) classes.push("legal");
    if (mismatchVerts.has(v)) classes.push("violated");
    circle.setAttribute("class", classes.join(" "));
    if (legalHere.has(v)) {
      circle.addEventListener("click", () => callbacks.onVertexClick([graphIndex, v]));
    }
    grp.appendChild(circle);
    const label = svgEl("text");
    label.setAttribute("x", String(pts[v].x));
    label.setAttribute("y", String(pts[v].y + 4));
    label.setAttribute("class", "vertex-label");
    label.textContent = marker.get(v) ?? String(v);
    grp.appendChild(label);
    svg.appendChild(grp);
  }
  return svg;
}

/** Distances along the cycle between consecutive picked vertices. */
function annotateArcs(svg: SVGSVGElement, g: GraphJson, pts: { x: number; y: number }[], picked: number[]): void {
  const order = cycleOrder(g);
  const pos = new Map(order.map((v, i) => [v, i]));
  const sorted = [...picked].sort((a, b) => (pos.get(a) ?? 0) - (pos.get(b) ?? 0));
  for (let i = 0; i < sorted.length; i++) {
    const u = sorted[i];
    const w = sorted[(i + 1) % sorted.length];
    const gap = (((pos.get(w) ?? 0) - (pos.get(u) ?? 0)) % g.m + g.m) % g.m;
    if (gap === 0) continue;
    const mx = (pts[u].x + pts[w].x) / 2;
    const my = (pts[u].y + pts[w].y) / 2;
    // push the label outward from the centre
    const dx = mx - PANEL / 2;
    const dy = my - PANEL / 2;
    const norm = Math.max(1, Math.hypot(dx, dy));
    const text = svgEl("text");
    text.setAttribute("x", String(PANEL / 2 + (dx / norm) * (RADIUS + 26)));
    text.setAttribute("y", String(PANEL / 2 + (dy / norm) * (RADIUS + 26)));
    text.setAttribute("class", "arc-label");
    text.textContent = String(gap);
    svg.appendChild(text);
  }
}

function mismatchVertices(state: SessionState, graphIndex: 1 | 2): Set<number> {
  const out = new Set<number>();
  const payoff = state.payoff as DiscretePayoff | null | undefined;
  if (!payoff || !("mismatches" in payoff) || !state.picks) return out;
  for (const [i, j] of payoff.mismatches) {
    out.add(state.picks[i][graphIndex - 1]);
    out.add(state.picks[j][graphIndex - 1]);
  }
  return out;
}

function payoffPanel(state: SessionState): HTMLElement {
  const div = document.createElement("div");
  div.className = "payoff-panel";
  const payoff = state.payoff;
  const title = document.createElement("h3");
  title.textContent = "Payoff";
  div.appendChild(title);
  const body = document.createElement("div");
  if (!payoff) {
    body.textContent = state.kind === "discrete" ? "no picks yet" : "no completed innings yet";
  } else if ("partial_isomorphism" in (payoff as DiscretePayoff)) {
    const p = payoff as DiscretePayoff;
    body.textContent = p.partial_isomorphism
      ? "picks form a partial isomorphism"
      : `adjacency broken on pick pairs: ${p.mismatches.map(([i, j]) => `(${i + 1},${j + 1})`).join(" ")}`;
    body.className = p.partial_isomorphism ? "payoff-ok" : "payoff-bad";
  } else {
    const r = payoff as PayoffReportJson;
    const w = r.witness;
    body.innerHTML = "";
    const line1 = document.createElement("div");
    line1.textContent = `max violation ${r.max_violation.toFixed(4)} (grid slack ${r.grid_slack.toFixed(2)}) — ${r.verdict}`;
    const line2 = document.createElement("div");
    line2.className = "witness";
    line2.textContent = `worst clause: ${w.clause}${w.i !== null ? ` at (${w.i}, ${w.j}, ${w.k})` : ""}`;
    body.appendChild(line1);
    body.appendChild(line2);
  }
  div.appendChild(body);
  if (state.status === "finished") {
    const verdict = document.createElement("div");
    verdict.className = "verdict";
    verdict.textContent = `${state.winner === "D" ? "Duplicator" : "Challenger"} wins (${state.reason ?? ""})`;
    div.appendChild(verdict);
  }
  return div;
}

/** Full board: both graphs side by side plus the payoff panel. */
export function renderBoard(
  root: HTMLElement,
  state: SessionState,
  highlighted: Move[],
  callbacks: BoardCallbacks,
): void {
  root.innerHTML = "";
  if (state.kind !== "discrete" || !state.g1 || !state.g2) {
    const note = document.createElement("div");
    note.textContent = "matrix and permutation games use the palette panel";
    root.appendChild(note);
    root.appendChild(payoffPanel(state));
    return;
  }
  const panels = document.createElement("div");
  panels.className = "panels";
  const left = document.createElement("div");
  const leftTitle = document.createElement("h3");
  leftTitle.textContent = `graph 1 (m=${state.g1.m})`;
  left.appendChild(leftTitle);
  left.appendChild(renderGraphPanel(state.g1, 1, state, highlighted, callbacks));
  const right = document.createElement("div");
  const rightTitle = document.createElement("h3");
  rightTitle.textContent = `graph 2 (m=${state.g2.m})`;
  right.appendChild(rightTitle);
  right.appendChild(renderGraphPanel(state.g2, 2, state, highlighted, callbacks));
  panels.appendChild(left);
  panels.appendChild(right);
  root.appendChild(panels);
  root.appendChild(payoffPanel(state));
}
