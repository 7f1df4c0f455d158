// Wire types mirroring the session service's JSON payloads.

export interface GraphJson {
  m: number;
  edges: [number, number][];
}

export interface MatrixJson {
  m: number;
  re: number[][];
  im: number[][];
}

export type Side = "C" | "D";

/** A discrete move: [graph index (1|2), vertex]. */
export type Move = [number, number];

export interface PayoffWitness {
  clause: string;
  i: number | null;
  j: number | null;
  k: number | null;
  y?: [number, number];
  z?: [number, number];
}

export interface PayoffReportJson {
  max_violation: number;
  witness: PayoffWitness;
  grid_slack: number;
  verdict: string;
}

export interface DiscretePayoff {
  partial_isomorphism: boolean;
  mismatches: [number, number][];
}

export interface SessionState {
  id: string;
  kind: string;
  engine: { side: Side; strategy: string };
  moves: Record<string, unknown>[];
  winner: Side | null;
  reason: string | null;
  status: "in-progress" | "finished";
  to_move: Side | null;
  n: number;
  // discrete games
  g1?: GraphJson;
  g2?: GraphJson;
  picks?: [number, number][];
  pending?: { graph: number; v: number } | null;
  legal_moves?: Move[];
  payoff?: DiscretePayoff | PayoffReportJson | null;
  // continuous games
  dims?: [number, number];
  norm?: string;
  delta?: number;
  epsilon?: number;
  moves1?: unknown[];
  moves2?: unknown[];
  move_constraint?: { op_norm_max: number; side?: number; dim?: number; dims?: number[] };
  // permutation games
  degrees?: [number, number];
  variant?: string;
}

export interface ApiErrorBody {
  error: string;
  detail: string;
}

export interface CreateGameRequest {
  kind: string;
  engine_side: Side;
  engine_strategy: string;
  g1?: string | GraphJson;
  g2?: string | GraphJson;
  n?: number;
  dims?: number[];
  degrees?: number[];
  epsilon?: number;
  delta?: number;
  variant?: string;
  sentence?: string;
  engine_seed?: number;
}
