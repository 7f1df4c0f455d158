"""Discrete vertex-picking comparison games on a pair of graphs.

The game runs for a fixed number of innings.  Each inning the challenger
picks an unused vertex in either graph and the duplicator answers with an
unused vertex in the other graph.  The duplicator wins when the chosen
pairs form a partial isomorphism; repeating a vertex is an illegal move.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .graphs import Graph, PartialMap, graph_from_json, graph_to_json, is_partial_isomorphism

__all__ = [
    "CHALLENGER",
    "DUPLICATOR",
    "GameState",
    "Transcript",
    "Strategy",
    "IllegalMoveError",
    "GameNotOverError",
    "BudgetExceededError",
    "InvariantViolation",
    "new_game",
    "legal_moves",
    "apply_move",
    "winner",
    "play",
    "replay",
    "solve",
    "GameSolver",
    "random_strategy",
    "cycle_duplicator_strategy",
    "formula_challenger_strategy",
    "transcript_to_json",
    "transcript_from_json",
]

CHALLENGER = "C"
DUPLICATOR = "D"


class IllegalMoveError(ValueError):
    pass


class GameNotOverError(RuntimeError):
    pass


class BudgetExceededError(RuntimeError):
    pass


class InvariantViolation(AssertionError):
    """The scripted duplicator's distance bookkeeping broke down."""


@dataclass(frozen=True)
class GameState:
    """Immutable position: completed pairs plus an optional half-finished inning."""

    g1: Graph
    g2: Graph
    n: int
    pairs: tuple = ()
    pending: tuple | None = None  # (graph index 1|2, vertex) awaiting the reply

    @property
    def inning(self):
        return len(self.pairs)

    @property
    def used1(self):
        used = {a for a, _ in self.pairs}
        if self.pending and self.pending[0] == 1:
            used.add(self.pending[1])
        return used

    @property
    def used2(self):
        used = {b for _, b in self.pairs}
        if self.pending and self.pending[0] == 2:
            used.add(self.pending[1])
        return used

    @property
    def to_move(self):
        if self.pending is not None:
            return DUPLICATOR
        if len(self.pairs) < self.n:
            return CHALLENGER
        return None

    @property
    def is_over(self):
        return self.to_move is None

    def partial_map(self):
        return PartialMap(self.pairs)


@dataclass(frozen=True)
class Transcript:
    g1: Graph
    g2: Graph
    n: int
    moves: tuple  # of (side, graph index, vertex)
    winner: str
    reason: str


class Strategy:
    """Deterministic choice of a legal move at the owner's turn."""

    name = "strategy"

    def choose(self, state: GameState):
        raise NotImplementedError


def new_game(g1, g2, n):
    if n < 0:
        raise ValueError("inning count must be nonnegative")
    return GameState(g1, g2, n)


def legal_moves(state):
    """Moves as (graph index, vertex) pairs for the player to move."""
    if state.is_over:
        raise GameNotOverError("game is already finished")
    if state.pending is None:
        moves = [(1, v) for v in range(state.g1.m) if v not in state.used1]
        moves += [(2, v) for v in range(state.g2.m) if v not in state.used2]
        return moves
    side = 2 if state.pending[0] == 1 else 1
    used = state.used1 if side == 1 else state.used2
    size = state.g1.m if side == 1 else state.g2.m
    return [(side, v) for v in range(size) if v not in used]


def apply_move(state, move):
    if state.is_over:
        raise GameNotOverError("game is already finished")
    if move not in legal_moves(state):
        side, v = move
        used = state.used1 if side == 1 else state.used2
        if v in used:
            raise IllegalMoveError(f"vertex {v} in graph {side} was already chosen (repeat)")
        raise IllegalMoveError(f"move {move} is not legal here")
    side, v = move
    if state.pending is None:
        return GameState(state.g1, state.g2, state.n, state.pairs, (side, v))
    pside, pv = state.pending
    pair = (pv, v) if pside == 1 else (v, pv)
    return GameState(state.g1, state.g2, state.n, state.pairs + (pair,), None)


def winner(state):
    """Winner of a finished position (all innings done, or the mover is stuck)."""
    if state.is_over:
        ok = is_partial_isomorphism(state.g1, state.g2, state.pairs)
        return DUPLICATOR if ok else CHALLENGER
    if not legal_moves(state):
        return DUPLICATOR if state.to_move == CHALLENGER else CHALLENGER
    raise GameNotOverError("game is not finished")


def play(g1, g2, n, strat_c, strat_d):
    """Referee a full game; an illegal move forfeits for the side that made it."""
    state = new_game(g1, g2, n)
    moves = []
    while not state.is_over:
        mover = state.to_move
        legal = legal_moves(state)
        if not legal:
            final = DUPLICATOR if mover == CHALLENGER else CHALLENGER
            return Transcript(g1, g2, n, tuple(moves), final, "no-move")
        strat = strat_c if mover == CHALLENGER else strat_d
        move = strat.choose(state)
        if move not in legal:
            final = DUPLICATOR if mover == CHALLENGER else CHALLENGER
            moves.append((mover,) + tuple(move))
            return Transcript(g1, g2, n, tuple(moves), final, "forfeit-illegal-move")
        moves.append((mover,) + tuple(move))
        state = apply_move(state, move)
    return Transcript(g1, g2, n, tuple(moves), winner(state), "win-condition")


def replay(transcript):
    """Re-run a transcript's moves through the rules; returns the resulting winner."""
    state = new_game(transcript.g1, transcript.g2, transcript.n)
    for mover, side, v in transcript.moves:
        if state.is_over:
            raise IllegalMoveError("transcript continues past the end of the game")
        if transcript.reason == "forfeit-illegal-move" and (side, v) not in legal_moves(state):
            loser = mover
            return DUPLICATOR if loser == CHALLENGER else CHALLENGER
        state = apply_move(state, (side, v))
    if state.is_over:
        return winner(state)
    if not legal_moves(state):
        return winner(state)
    raise GameNotOverError("transcript stops before the game is decided")


def transcript_to_json(t):
    return {
        "g1": graph_to_json(t.g1),
        "g2": graph_to_json(t.g2),
        "n": t.n,
        "moves": [{"by": m[0], "graph": m[1], "v": m[2]} for m in t.moves],
        "winner": t.winner,
        "reason": t.reason,
    }


def transcript_from_json(obj):
    if isinstance(obj, str):
        obj = json.loads(obj)
    moves = tuple((m["by"], m["graph"], m["v"]) for m in obj["moves"])
    return Transcript(
        graph_from_json(obj["g1"]), graph_from_json(obj["g2"]), obj["n"], moves, obj["winner"], obj["reason"]
    )


# ---------------------------------------------------------------------------
# Exact solving
# ---------------------------------------------------------------------------


def _cycle_order(g):
    """Cyclic vertex order when g is a cycle, else None."""
    if g.m < 3 or len(g.edges) != g.m:
        return None
    if any(g.degree(v) != 2 for v in range(g.m)):
        return None
    walk = [0]
    prev, cur = None, 0
    for _ in range(g.m - 1):
        nbrs = g.neighbors(cur)
        nxt = nbrs[0] if nbrs[0] != prev else nbrs[1]
        prev, cur = cur, nxt
        walk.append(cur)
    if not g.adjacent(walk[-1], walk[0]) or len(set(walk)) != g.m:
        return None
    return walk


class GameSolver:
    """Backward induction with memoization on canonical position signatures.

    Positions are keyed on the set of completed pairs (play order is
    irrelevant) plus the pending half-move.  When both graphs are cycles the
    key is additionally reduced modulo rotations and reflections of either
    cycle, which collapses the tree by the full symmetry group.
    """

    def __init__(self, g1, g2, n, budget=10**8):
        self.g1, self.g2, self.n = g1, g2, n
        self.budget = budget
        self.nodes = 0
        self._memo = {}
        self.m1, self.m2 = g1.m, g2.m
        self._adj1 = [sum(1 << u for u in g1.neighbors(v)) for v in range(self.m1)]
        self._adj2 = [sum(1 << u for u in g2.neighbors(v)) for v in range(self.m2)]
        # The pruned search assumes neither player can run out of vertices.
        self._pruned = n <= min(self.m1, self.m2)
        w1 = _cycle_order(g1)
        w2 = _cycle_order(g2)
        self._cyclic = w1 is not None and w2 is not None
        if self._cyclic:
            self._pos1 = {v: i for i, v in enumerate(w1)}
            self._pos2 = {v: i for i, v in enumerate(w2)}

    # -- canonical keys ----------------------------------------------------

    def _canonical(self, pairs, pending):
        if not self._cyclic:
            return (tuple(sorted(pairs)), pending)
        m1, m2 = self.m1, self.m2
        pos1, pos2 = self._pos1, self._pos2
        ppairs = [(pos1[a], pos2[b]) for a, b in pairs]
        if pending is not None:
            pside, pv = pending
            ppv = pos1[pv] if pside == 1 else pos2[pv]
        if not ppairs:
            if pending is None:
                return ((), None)
            return ((), (pside, 0))
        best = None
        for pa, pb in ppairs:
            for s1 in (1, -1):
                for s2 in (1, -1):
                    moved = tuple(
                        sorted(((s1 * (a - pa)) % m1, (s2 * (b - pb)) % m2) for a, b in ppairs)
                    )
                    if pending is None:
                        cand = (moved, None)
                    elif pside == 1:
                        cand = (moved, (1, (s1 * (ppv - pa)) % m1))
                    else:
                        cand = (moved, (2, (s2 * (ppv - pb)) % m2))
                    if best is None or cand < best:
                        best = cand
        return best

    # -- search ------------------------------------------------------------

    def duplicator_wins(self, pairs=(), pending=None):
        key = self._canonical(pairs, pending)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        self.nodes += 1
        if self.nodes > self.budget:
            raise BudgetExceededError(f"search exceeded the node budget ({self.budget})")
        result = self._solve_pruned(pairs, pending) if self._pruned else self._solve_full(pairs, pending)
        self._memo[key] = result
        return result

    def _used_masks(self, pairs):
        u1 = u2 = 0
        for a, b in pairs:
            u1 |= 1 << a
            u2 |= 1 << b
        return u1, u2

    def _consistent_replies(self, pairs, side, v):
        """Unused vertices in the other graph matching v's adjacency to all pairs."""
        if side == 1:
            size, adj_own, adj_other = self.m2, self._adj1, self._adj2
            own = [a for a, _ in pairs]
            other = [b for _, b in pairs]
            used = {b for _, b in pairs}
        else:
            size, adj_own, adj_other = self.m1, self._adj2, self._adj1
            own = [b for _, b in pairs]
            other = [a for a, _ in pairs]
            used = {a for a, _ in pairs}
        mask_own = adj_own[v]
        out = []
        for u in range(size):
            if u in used:
                continue
            mask_u = adj_other[u]
            if all(((mask_own >> a) & 1) == ((mask_u >> b) & 1) for a, b in zip(own, other)):
                out.append(u)
        return out

    def _solve_pruned(self, pairs, pending):
        if pending is None:
            if len(pairs) == self.n:
                return True  # every inning was answered consistently
            u1, u2 = self._used_masks(pairs)
            for v in range(self.m1):
                if not (u1 >> v) & 1 and not self.duplicator_wins(pairs, (1, v)):
                    return False
            for v in range(self.m2):
                if not (u2 >> v) & 1 and not self.duplicator_wins(pairs, (2, v)):
                    return False
            return True
        side, v = pending
        for u in self._consistent_replies(pairs, side, v):
            new_pair = (v, u) if side == 1 else (u, v)
            if self.duplicator_wins(pairs + (new_pair,), None):
                return True
        return False

    def _solve_full(self, pairs, pending):
        # No consistency pruning: with very long games a player can run out of
        # vertices, which ends the game regardless of earlier mismatches.
        if pending is None:
            if len(pairs) == self.n:
                return is_partial_isomorphism(self.g1, self.g2, pairs)
            u1, u2 = self._used_masks(pairs)
            moves = [(1, v) for v in range(self.m1) if not (u1 >> v) & 1]
            moves += [(2, v) for v in range(self.m2) if not (u2 >> v) & 1]
            if not moves:
                return True  # challenger is stuck
            return all(self.duplicator_wins(pairs, mv) for mv in moves)
        side, v = pending
        u1, u2 = self._used_masks(pairs)
        used = u2 if side == 1 else u1
        size = self.m2 if side == 1 else self.m1
        replies = [u for u in range(size) if not (used >> u) & 1]
        if not replies:
            return False  # duplicator is stuck
        for u in replies:
            new_pair = (v, u) if side == 1 else (u, v)
            if self.duplicator_wins(pairs + (new_pair,), None):
                return True
        return False

    def pairs_consistent(self, pairs):
        return is_partial_isomorphism(self.g1, self.g2, pairs)

    def value(self, state):
        """Winner with optimal play from a (compatible) position."""
        if self._pruned and not self.pairs_consistent(state.pairs):
            return CHALLENGER  # mismatch can no longer be repaired
        return DUPLICATOR if self.duplicator_wins(state.pairs, state.pending) else CHALLENGER

    def strategy(self, side):
        return _SolverStrategy(self, side)


class _SolverStrategy(Strategy):
    """Plays the lowest (graph index, vertex) move that preserves the best outcome."""

    def __init__(self, solver, side):
        self.solver = solver
        self.side = side
        self.name = f"solver-optimal-{side}"

    def choose(self, state):
        moves = legal_moves(state)
        if self.solver._pruned and not self.solver.pairs_consistent(state.pairs):
            return moves[0]  # position already decided; the pruned search assumes consistency
        want = self.side == DUPLICATOR
        for move in moves:
            if state.pending is None:
                child = (state.pairs, move)
            else:
                pside, pv = state.pending
                pair = (pv, move[1]) if pside == 1 else (move[1], pv)
                if self.solver._pruned and not self.solver.pairs_consistent(state.pairs + (pair,)):
                    if not want:
                        return move  # completing a mismatched pair wins for the challenger side
                    continue
                child = (state.pairs + (pair,), None)
            if self.solver.duplicator_wins(*child) == want:
                return move
        return moves[0]


def solve(g1, g2, n, budget=10**8):
    """Winner with optimal play and an optimal strategy for that winner."""
    solver = GameSolver(g1, g2, n, budget=budget)
    win = DUPLICATOR if solver.duplicator_wins() else CHALLENGER
    return win, solver.strategy(win)


# ---------------------------------------------------------------------------
# Scripted strategies
# ---------------------------------------------------------------------------


class _RandomStrategy(Strategy):
    def __init__(self, seed):
        self.rng = np.random.default_rng(seed)
        self.name = "random"

    def choose(self, state):
        moves = legal_moves(state)
        return moves[int(self.rng.integers(len(moves)))]


def random_strategy(seed=0):
    """Uniform choice among legal moves, reproducible per seed."""
    return _RandomStrategy(seed)


class _CycleDuplicatorStrategy(Strategy):
    """Distance-matching duplicator for a pair of long cycles.

    Keeps, after inning t, every pair of picked vertices at exactly equal
    cycle distances on both sides or at distance >= 2^(n-t+1) on both sides.
    With min(m, k) > 2^(n+1) this survives all n innings, and at the end
    "distance 1 on one side iff distance 1 on the other" is adjacency
    preservation.  The invariant is checked after every move; a violation
    raises InvariantViolation.
    """

    def __init__(self, m, k, n):
        if min(m, k) <= 2 ** (n + 1):
            raise ValueError(
                f"cycle duplicator needs min(m, k) > 2^(n+1); got min({m}, {k}) <= {2 ** (n + 1)}"
            )
        self.m, self.k, self.n = m, k, n
        self.name = "cycle-duplicator"

    # cycle helpers in position space (vertices of cycle_graph are positions)

    @staticmethod
    def _dist(length, a, b):
        d = abs(a - b)
        return min(d, length - d)

    def _check_invariant(self, pairs, innings_done):
        theta = 2 ** (self.n - innings_done + 1)
        for i in range(len(pairs)):
            for j in range(i + 1, len(pairs)):
                d1 = self._dist(self.m, pairs[i][0], pairs[j][0])
                d2 = self._dist(self.k, pairs[i][1], pairs[j][1])
                if d1 != d2 and not (d1 >= theta and d2 >= theta):
                    raise InvariantViolation(
                        f"after inning {innings_done}: distances {d1} vs {d2} "
                        f"not equal and not both >= {theta}"
                    )

    def choose(self, state):
        if state.pending is None:
            raise IllegalMoveError("cycle duplicator only answers pending challenger moves")
        side, x = state.pending
        if side == 1:
            length_a, length_b = state.g1.m, state.g2.m
            picks_a = [a for a, _ in state.pairs]
            picks_b = [b for _, b in state.pairs]
        else:
            length_a, length_b = state.g2.m, state.g1.m
            picks_a = [b for _, b in state.pairs]
            picks_b = [a for a, _ in state.pairs]
        reply = self._respond(length_a, length_b, picks_a, picks_b, x, len(state.pairs))
        move = (2 if side == 1 else 1, reply)
        # instrumented invariant check on the position this move creates
        new_pair = (x, reply) if side == 1 else (reply, x)
        self._check_invariant(state.pairs + (new_pair,), len(state.pairs) + 1)
        return move

    def _respond(self, la, lb, picks_a, picks_b, x, t):
        theta_new = 2 ** (self.n - (t + 1) + 1)
        if t == 0:
            return 0
        if t == 1:
            alpha, beta = picks_a[0], picks_b[0]
            p = (x - alpha) % la
            g, h = la, lb
            q = self._arc_offset(p, g, h, theta_new)
            return (beta + q) % lb
        # locate x's arc between consecutive picked vertices on the a-cycle
        order = sorted(range(t), key=lambda i: picks_a[i])
        xpos = x
        apos = [picks_a[i] for i in order]
        arc = 0
        for r in range(t):
            lo = apos[r]
            hi = apos[(r + 1) % t]
            span = (hi - lo) % la
            if (xpos - lo) % la < span or span == 0:
                arc = r
                break
        i_idx = order[arc]
        j_idx = order[(arc + 1) % t]
        u = picks_a[i_idx]
        w = picks_a[j_idx]
        g = (w - u) % la
        p = (x - u) % la
        for sigma in (1, -1):
            bpos = [(sigma * picks_b[i]) % lb for i in range(t)]
            if self._cyclic_orders_match(picks_a, bpos, la, lb):
                h = (bpos[j_idx] - bpos[i_idx]) % lb
                if not self._gaps_ok(picks_a, bpos, la, lb, t):
                    continue
                q = self._arc_offset(p, g, h, theta_new)
                resp = (bpos[i_idx] + q) % lb
                return (sigma * resp) % lb
        # off-script position: fall back to any unused vertex
        used = set(picks_b)
        return next(v for v in range(lb) if v not in used)

    @staticmethod
    def _cyclic_orders_match(apos, bpos, la, lb):
        t = len(apos)
        if t <= 2:
            return True
        order_a = sorted(range(t), key=lambda i: apos[i])
        order_b = sorted(range(t), key=lambda i: bpos[i])
        doubled = order_b + order_b
        for start in range(t):
            if doubled[start : start + t] == order_a:
                return True
        return False

    def _gaps_ok(self, apos, bpos, la, lb, t):
        theta = 2 ** (self.n - t + 1)
        order = sorted(range(t), key=lambda i: apos[i])
        for r in range(t):
            i, j = order[r], order[(r + 1) % t]
            ga = (apos[j] - apos[i]) % la
            hb = (bpos[j] - bpos[i]) % lb
            if ga != hb and not (ga >= theta and hb >= theta):
                return False
        return True

    @staticmethod
    def _arc_offset(p, g, h, theta):
        if g == h:
            return p
        if p <= theta:
            return p
        if g - p <= theta:
            return h - (g - p)
        return h // 2


def cycle_duplicator_strategy(m, k, n):
    """Scripted duplicator for cycle-vs-cycle games above the 2^(n+1) threshold."""
    return _CycleDuplicatorStrategy(m, k, n)


class _FormulaChallengerStrategy(Strategy):
    """Turns a sentence the graphs disagree on into a winning challenger plan.

    The plan walks the sentence in negation normal form, keeping a subformula
    that is true in g1 (under bindings made so far) and false in g2.  At an
    existential it plays the witness in g1; at a universal it plays the
    counterexample in g2; the opponent's reply extends the other binding.
    Once a mismatched literal is reached the chosen pairs already fail to be
    a partial isomorphism, and any legal filler moves finish the game.
    """

    def __init__(self, g1, g2, f):
        from . import logic

        if logic.evaluate(g1, f) == logic.evaluate(g2, f):
            raise ValueError("graphs agree on the sentence; there is nothing to attack")
        self.g1, self.g2 = g1, g2
        base = f if logic.evaluate(g1, f) else logic.Not(f)
        self.plan = logic.canonicalize_variables(logic.negation_normal_form(base))
        self.logic = logic
        self.name = "formula-challenger"

    def choose(self, state):
        logic = self.logic
        cur = self.plan
        env1, env2 = {}, {}
        consumed = 0
        pairs = state.pairs
        if state.pending is not None:
            raise IllegalMoveError("formula challenger plays the first half of each inning")
        # partner maps are rebuilt move by move so a replayed walk sees only
        # the pairs that existed when each past decision was made
        seen1, seen2 = {}, {}
        while True:
            if isinstance(cur, logic.And):
                cur = cur.left if not logic.evaluate(self.g2, cur.left, env2) else cur.right
            elif isinstance(cur, logic.Or):
                cur = cur.left if logic.evaluate(self.g1, cur.left, env1) else cur.right
            elif isinstance(cur, (logic.Exists, logic.Forall)):
                existential = isinstance(cur, logic.Exists)
                if existential:
                    v = self._witness(self.g1, cur, env1, True)
                    reuse = seen1
                else:
                    v = self._witness(self.g2, cur, env2, False)
                    reuse = seen2
                if v in reuse:
                    a, b = (v, reuse[v]) if existential else (reuse[v], v)
                elif consumed < len(pairs):
                    a, b = pairs[consumed]
                    consumed += 1
                    seen1[a], seen2[b] = b, a
                else:
                    return (1, v) if existential else (2, v)
                env1[cur.var], env2[cur.var] = a, b
                cur = cur.body
            else:
                # literal mismatch already on the board: play any legal filler
                return legal_moves(state)[0]

    def _witness(self, g, node, env, want):
        body, var = node.body, node.var
        local = dict(env)
        for v in range(g.m):
            local[var] = v
            if self.logic.evaluate(g, body, local) == want:
                return v
        raise RuntimeError("plan invariant broken: no witness where one was promised")


def formula_challenger_strategy(g1, g2, f):
    """Challenger strategy from a sentence with different truth values in g1 and g2."""
    return _FormulaChallengerStrategy(g1, g2, f)
