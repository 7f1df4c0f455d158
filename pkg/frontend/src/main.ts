import { ApiClient } from "./api.js";
import { renderBoard } from "./board.js";
import { SessionController } from "./controller.js";
import { palette, rotationPermutation } from "./palettes.js";
import type { CreateGameRequest, Move, Side } from "./types.js";

const api = new ApiClient("");
const controller = new SessionController(api);

function el<T extends HTMLElement>(id: string): T {
  const found = document.getElementById(id);
  if (!found) throw new Error(`missing element #${id}`);
  return found as T;
}

function readCreateRequest(): CreateGameRequest {
  const kind = el<HTMLSelectElement>("kind").value;
  const engineSide = el<HTMLSelectElement>("engine-side").value as Side;
  const strategy = el<HTMLSelectElement>("engine-strategy").value;
  const n = Number(el<HTMLInputElement>("innings").value);
  const body: CreateGameRequest = { kind, engine_side: engineSide, engine_strategy: strategy, n };
  if (kind === "discrete") {
    body.g1 = el<HTMLInputElement>("g1").value;
    body.g2 = el<HTMLInputElement>("g2").value;
    const sentence = el<HTMLInputElement>("sentence").value.trim();
    if (sentence) body.sentence = sentence;
  } else if (kind === "permutation") {
    body.degrees = [Number(el<HTMLInputElement>("dim1").value), Number(el<HTMLInputElement>("dim2").value)];
    body.epsilon = Number(el<HTMLInputElement>("epsilon").value);
  } else {
    body.dims = [Number(el<HTMLInputElement>("dim1").value), Number(el<HTMLInputElement>("dim2").value)];
    body.epsilon = Number(el<HTMLInputElement>("epsilon").value);
  }
  return body;
}

function renderError(): void {
  const banner = el<HTMLDivElement>("error-banner");
  if (controller.lastError) {
    banner.textContent = `${controller.lastError.code}: ${controller.lastError.detail}`;
    banner.style.display = "block";
  } else {
    banner.style.display = "none";
  }
}

function renderPalette(): void {
  const host = el<HTMLDivElement>("palette");
  host.innerHTML = "";
  const state = controller.state;
  if (!state || state.status !== "in-progress" || !controller.humanToMove) return;
  if (state.kind.startsWith("continuous")) {
    const constraint = state.move_constraint;
    const sides: number[] = constraint?.side ? [constraint.side] : [1, 2];
    for (const side of sides) {
      const dim = state.dims![side - 1];
      for (const entry of palette(dim)) {
        const btn = document.createElement("button");
        btn.textContent = `${entry.name} → side ${side}`;
        btn.addEventListener("click", () => {
          void controller.humanMove({ side, matrix: entry.matrix });
        });
        host.appendChild(btn);
      }
    }
  } else if (state.kind === "permutation") {
    const pendingSide = state.moves1 && state.to_move === "D" ? 1 : null;
    const sides = pendingSide ? [pendingSide] : [1, 2];
    for (const side of sides) {
      const degree = state.degrees![side - 1];
      for (let shift = 0; shift < degree; shift++) {
        const btn = document.createElement("button");
        btn.textContent = `rotation +${shift} → side ${side}`;
        btn.addEventListener("click", () => {
          void controller.humanMove({ side, images: rotationPermutation(degree, shift) });
        });
        host.appendChild(btn);
      }
    }
  }
}

function render(): void {
  renderError();
  const state = controller.state;
  const status = el<HTMLDivElement>("status-line");
  const engineBtn = el<HTMLButtonElement>("engine-move");
  if (!state) {
    status.textContent = "no game yet";
    engineBtn.disabled = true;
    return;
  }
  const who =
    state.status === "finished"
      ? `finished: ${state.winner === "D" ? "Duplicator" : "Challenger"} wins`
      : state.to_move === controller.humanSide
        ? `your move (${state.to_move})`
        : `engine to move (${state.to_move})`;
  status.textContent = `session ${state.id} — inning ${state.picks?.length ?? state.moves1?.length ?? 0} of ${state.n} — ${who}`;
  engineBtn.disabled = !controller.engineToMove;
  renderBoard(el("board"), state, controller.highlightedMoves(), {
    onVertexClick: (move: Move) => {
      void controller.humanMove({ graph: move[0], v: move[1] });
    },
  });
  renderPalette();
}

export function start(): void {
  controller.onChange(render);
  el<HTMLButtonElement>("create").addEventListener("click", () => {
    void controller.create(readCreateRequest()).catch((err) => {
      controller.lastError = { code: "create-failed", detail: String(err) };
      renderError();
    });
  });
  el<HTMLButtonElement>("engine-move").addEventListener("click", () => {
    void controller.engineMove();
  });
  el<HTMLSelectElement>("kind").addEventListener("change", () => {
    const kind = el<HTMLSelectElement>("kind").value;
    el<HTMLDivElement>("discrete-options").style.display = kind === "discrete" ? "" : "none";
    el<HTMLDivElement>("metric-options").style.display = kind === "discrete" ? "none" : "";
  });
  render();
}

if (typeof document !== "undefined" && document.getElementById("create")) {
  start();
}
