import { ApiClient, ApiError } from "./api.js";
import type { CreateGameRequest, Move, SessionState, Side } from "./types.js";

/** Holds the latest state served by the referee and derives everything the
 * board renders from it.  There is no rules engine on this side: moves are
 * only ever displayed after the service confirms them, and the highlighted
 * move set is exactly the service's `legal_moves` list. */
export class SessionController {
  state: SessionState | null = null;
  lastError: { code: string; detail: string } | null = null;
  private listeners: (() => void)[] = [];

  constructor(private api: ApiClient) {}

  onChange(fn: () => void): void {
    this.listeners.push(fn);
  }

  private update(state: SessionState): void {
    this.state = state;
    this.lastError = null;
    for (const fn of this.listeners) fn();
  }

  get humanSide(): Side | null {
    if (!this.state) return null;
    return this.state.engine.side === "C" ? "D" : "C";
  }

  get humanToMove(): boolean {
    return this.state !== null && this.state.status === "in-progress" && this.state.to_move === this.humanSide;
  }

  get engineToMove(): boolean {
    return (
      this.state !== null && this.state.status === "in-progress" && this.state.to_move === this.state.engine.side
    );
  }

  /** The moves to highlight as clickable: the service's legal-move list,
   * verbatim, whenever it is the human's turn; nothing otherwise. */
  highlightedMoves(state: SessionState | null = this.state): Move[] {
    if (!state || state.status !== "in-progress") return [];
    const humanSide = state.engine.side === "C" ? "D" : "C";
    if (state.to_move !== humanSide) return [];
    return state.legal_moves ?? [];
  }

  async create(body: CreateGameRequest): Promise<SessionState> {
    const state = await this.api.createGame(body);
    this.update(state);
    return state;
  }

  async refresh(): Promise<void> {
    if (!this.state) return;
    this.update(await this.api.getGame(this.state.id));
  }

  /** Submit the human's move; on a conflict the server state is refetched so
   * the board never drifts from the referee. */
  async humanMove(move: Record<string, unknown>): Promise<void> {
    if (!this.state) throw new Error("no active session");
    try {
      this.update(await this.api.submitMove(this.state.id, move));
    } catch (err) {
      await this.noteErrorAndResync(err);
    }
  }

  async engineMove(): Promise<void> {
    if (!this.state) throw new Error("no active session");
    try {
      this.update(await this.api.engineMove(this.state.id));
    } catch (err) {
      await this.noteErrorAndResync(err);
    }
  }

  private async noteErrorAndResync(err: unknown): Promise<void> {
    if (err instanceof ApiError) {
      this.lastError = { code: err.code, detail: err.detail };
      if (err.status === 409 && this.state) {
        this.state = await this.api.getGame(this.state.id);
      }
      for (const fn of this.listeners) fn();
      return;
    }
    throw err;
  }
}
