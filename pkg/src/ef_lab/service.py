"""Session-oriented referee service: create games, submit moves, ask the
engine to move, and fetch JSON state the browser client renders directly.

Sessions live in memory (optionally snapshotted to a directory as JSON).
The engine never moves on its own; clients request each engine move.
"""

from __future__ import annotations

import json
import threading
import uuid
from dataclasses import asdict, dataclass, field
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse

from . import games, logic, metric_games
from .graphs import Graph, cycle_graph, graph_from_json, graph_to_json, is_partial_isomorphism
from .matrices import ComplexMatrix, Permutation, matrix_from_json, matrix_to_json

DISCRETE_STRATEGIES = ["solver-optimal", "cycle-duplicator", "formula-challenger", "random"]
CONTINUOUS_STRATEGIES = ["padding-duplicator", "evenodd-challenger", "random"]
PERMUTATION_STRATEGIES = ["random"]

KINDS = ("discrete", "continuous-HS", "continuous-OP", "permutation")


class ApiError(Exception):
    def __init__(self, status, code, detail):
        self.status = status
        self.code = code
        self.detail = detail


def parse_graph_spec(spec):
    """Accept graph JSON objects or shorthand strings like "cycle:9"."""
    if isinstance(spec, dict):
        return graph_from_json(spec)
    if isinstance(spec, str):
        if spec.startswith("cycle:"):
            return cycle_graph(int(spec.split(":", 1)[1]))
        if spec.startswith("complete:"):
            from .graphs import complete_graph

            return complete_graph(int(spec.split(":", 1)[1]))
        if spec.startswith("empty:"):
            from .graphs import empty_graph

            return empty_graph(int(spec.split(":", 1)[1]))
        if spec.startswith("random:"):
            parts = spec.split(":")
            seed = int(parts[3]) if len(parts) > 3 else 0
            from .graphs import random_graph

            return random_graph(int(parts[1]), float(parts[2]), seed)
    raise ApiError(422, "bad-graph", f"cannot interpret graph spec {spec!r}")


@dataclass
class Session:
    id: str
    kind: str
    config: dict
    engine_side: str
    engine_strategy_name: str
    engine_strategy: object
    state: object
    moves: list = field(default_factory=list)
    winner: str | None = None
    reason: str | None = None
    payoff: dict | None = None
    lock: threading.Lock = field(default_factory=threading.Lock)


class SessionStore:
    def __init__(self, snapshot_dir=None):
        self._sessions = {}
        self._lock = threading.Lock()
        self.snapshot_dir = Path(snapshot_dir) if snapshot_dir else None
        if self.snapshot_dir:
            self.snapshot_dir.mkdir(parents=True, exist_ok=True)

    def add(self, session):
        with self._lock:
            self._sessions[session.id] = session
        self.snapshot(session)

    def get(self, sid):
        with self._lock:
            session = self._sessions.get(sid)
        if session is None:
            raise ApiError(404, "unknown-session", f"no session with id {sid!r}")
        return session

    def snapshot(self, session):
        if self.snapshot_dir:
            path = self.snapshot_dir / f"{session.id}.json"
            path.write_text(json.dumps(session_state_json(session), indent=2))


# ---------------------------------------------------------------------------
# Session construction
# ---------------------------------------------------------------------------


def _make_discrete_strategy(name, g1, g2, n, config):
    if name == "random":
        return games.random_strategy(int(config.get("engine_seed", 0)))
    if name == "solver-optimal":
        budget = int(config.get("budget", 10**7))
        solver = games.GameSolver(g1, g2, n, budget=budget)
        side = config["engine_side"]
        return solver.strategy(side)
    if name == "cycle-duplicator":
        w1 = [g1.degree(v) == 2 for v in range(g1.m)]
        if not (all(w1) and all(g2.degree(v) == 2 for v in range(g2.m))):
            raise ApiError(422, "bad-strategy", "cycle-duplicator needs two cycle graphs")
        try:
            return games.cycle_duplicator_strategy(g1.m, g2.m, n)
        except ValueError as exc:
            raise ApiError(422, "bad-strategy", str(exc))
    if name == "formula-challenger":
        sentence = config.get("sentence")
        if not sentence:
            raise ApiError(422, "bad-strategy", "formula-challenger needs a 'sentence' in the config")
        try:
            f = logic.parse_sentence(sentence)
            return games.formula_challenger_strategy(g1, g2, f)
        except (logic.ParseError, logic.FreeVariableError, ValueError) as exc:
            raise ApiError(422, "bad-strategy", str(exc))
    raise ApiError(422, "bad-strategy", f"unknown discrete strategy {name!r}")


def _make_continuous_strategy(name, cfg, config):
    if name == "random":
        return metric_games.random_matrix_strategy(int(config.get("engine_seed", 0)))
    if name == "padding-duplicator":
        lo, hi = sorted(cfg.dims)
        if hi != lo + 1:
            raise ApiError(422, "bad-strategy", "padding-duplicator needs dimensions m and m+1")
        return metric_games.padding_duplicator_strategy(lo)
    if name == "evenodd-challenger":
        if cfg.dims[0] % 2 != 0 and cfg.dims[1] % 2 != 0:
            raise ApiError(422, "bad-strategy", "evenodd-challenger needs one even dimension")
        return metric_games.evenodd_strategy()
    raise ApiError(422, "bad-strategy", f"unknown continuous strategy {name!r}")


def create_session(body):
    kind = body.get("kind")
    if kind not in KINDS:
        raise ApiError(422, "bad-kind", f"kind must be one of {KINDS}, got {kind!r}")
    engine_side = body.get("engine_side", "D")
    if engine_side not in ("C", "D"):
        raise ApiError(422, "bad-side", "engine_side must be 'C' or 'D'")
    strategy_name = body.get("engine_strategy", "random")
    sid = uuid.uuid4().hex[:12]
    config = dict(body)
    config["engine_side"] = engine_side
    if kind == "discrete":
        try:
            g1 = parse_graph_spec(body.get("g1"))
            g2 = parse_graph_spec(body.get("g2"))
            n = int(body.get("n"))
        except (TypeError, ValueError) as exc:
            raise ApiError(422, "bad-config", f"invalid discrete game config: {exc}")
        if strategy_name not in DISCRETE_STRATEGIES:
            raise ApiError(422, "bad-strategy", f"unknown discrete strategy {strategy_name!r}")
        strategy = _make_discrete_strategy(strategy_name, g1, g2, n, config)
        state = games.new_game(g1, g2, n)
    elif kind.startswith("continuous"):
        try:
            dims = tuple(int(d) for d in body["dims"])
            cfg = metric_games.ContinuousGameConfig(
                dims=dims,
                n=int(body["n"]),
                epsilon=float(body["epsilon"]),
                norm="HS" if kind == "continuous-HS" else "OP",
                delta=float(body.get("delta", 0.05)),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ApiError(422, "bad-config", f"invalid continuous game config: {exc}")
        if strategy_name not in CONTINUOUS_STRATEGIES:
            raise ApiError(422, "bad-strategy", f"unknown continuous strategy {strategy_name!r}")
        strategy = _make_continuous_strategy(strategy_name, cfg, config)
        state = metric_games.ContinuousGameState(cfg)
    else:
        try:
            cfg = metric_games.PermGameConfig(
                degrees=tuple(int(d) for d in body["degrees"]),
                n=int(body["n"]),
                epsilon=float(body["epsilon"]),
                variant=body.get("variant", "N2"),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ApiError(422, "bad-config", f"invalid permutation game config: {exc}")
        if strategy_name not in PERMUTATION_STRATEGIES:
            raise ApiError(422, "bad-strategy", f"unknown permutation strategy {strategy_name!r}")
        import numpy as np

        rng = np.random.default_rng(int(config.get("engine_seed", 0)))

        class _RandomPermStrategy:
            name = "random"

            def choose(self, state):
                if state.pending is not None:
                    side = 2 if state.pending[0] == 1 else 1
                else:
                    side = 1 + int(rng.integers(2))
                return side, Permutation.random(state.cfg.degrees[side - 1], rng)

        strategy = _RandomPermStrategy()
        state = metric_games.PermGameState(cfg)
    return Session(
        id=sid,
        kind=kind,
        config={k: v for k, v in config.items() if k != "kind"},
        engine_side=engine_side,
        engine_strategy_name=strategy_name,
        engine_strategy=strategy,
        state=state,
    )


# ---------------------------------------------------------------------------
# State serialization
# ---------------------------------------------------------------------------


def _discrete_payoff(state):
    mismatches = []
    pairs = state.pairs
    for i in range(len(pairs)):
        for j in range(i + 1, len(pairs)):
            if state.g1.adjacent(pairs[i][0], pairs[j][0]) != state.g2.adjacent(pairs[i][1], pairs[j][1]):
                mismatches.append([i, j])
    return {"partial_isomorphism": not mismatches, "mismatches": mismatches}


def _payoff_report_json(report):
    kind, i, j, k, y, z = report.witness
    witness = {"clause": kind, "i": i, "j": j, "k": k}
    if y is not None:
        witness["y"] = [y.real, y.imag]
        witness["z"] = [z.real, z.imag]
    return {
        "max_violation": report.max_violation,
        "witness": witness,
        "grid_slack": report.grid_slack,
        "verdict": report.verdict,
    }


def session_state_json(session):
    state = session.state
    base = {
        "id": session.id,
        "kind": session.kind,
        "engine": {"side": session.engine_side, "strategy": session.engine_strategy_name},
        "moves": list(session.moves),
        "winner": session.winner,
        "reason": session.reason,
    }
    if session.kind == "discrete":
        base["g1"] = graph_to_json(state.g1)
        base["g2"] = graph_to_json(state.g2)
        base["n"] = state.n
        base["picks"] = [list(p) for p in state.pairs]
        base["pending"] = (
            {"graph": state.pending[0], "v": state.pending[1]} if state.pending else None
        )
        base["to_move"] = state.to_move
        base["status"] = "finished" if session.winner or state.is_over else "in-progress"
        base["legal_moves"] = (
            [list(mv) for mv in games.legal_moves(state)] if not state.is_over else []
        )
        base["payoff"] = _discrete_payoff(state)
    else:
        cfg = state.cfg
        base["n"] = cfg.n
        base["epsilon"] = cfg.epsilon
        base["to_move"] = state.to_move
        base["status"] = "finished" if state.is_over else "in-progress"
        base["inning"] = state.inning
        if session.kind.startswith("continuous"):
            base["dims"] = list(cfg.dims)
            base["norm"] = cfg.norm
            base["delta"] = cfg.delta
            base["moves1"] = [matrix_to_json(x) for x in state.moves1]
            base["moves2"] = [matrix_to_json(x) for x in state.moves2]
            base["pending"] = (
                {"side": state.pending[0], "matrix": matrix_to_json(state.pending[1])}
                if state.pending
                else None
            )
            if state.pending is None:
                base["move_constraint"] = {"op_norm_max": 1.0, "dims": list(cfg.dims)}
            else:
                side = 2 if state.pending[0] == 1 else 1
                base["move_constraint"] = {"op_norm_max": 1.0, "side": side, "dim": cfg.dims[side - 1]}
        else:
            base["degrees"] = list(cfg.degrees)
            base["variant"] = cfg.variant
            base["moves1"] = [list(p.images) for p in state.moves1]
            base["moves2"] = [list(p.images) for p in state.moves2]
            base["pending"] = (
                {"side": state.pending[0], "images": list(state.pending[1].images)}
                if state.pending
                else None
            )
        base["payoff"] = session.payoff
    return base


# ---------------------------------------------------------------------------
# Move application
# ---------------------------------------------------------------------------


def _finish_if_over(session):
    state = session.state
    if session.kind == "discrete":
        if state.is_over:
            session.winner = games.winner(state)
            session.reason = "win-condition"
        elif not games.legal_moves(state):
            session.winner = games.winner(state)
            session.reason = "no-move"
    else:
        if state.pending is None and state.inning > 0:
            if session.kind.startswith("continuous"):
                report = metric_games.payoff_violation(state.moves1, state.moves2, state.cfg)
                session.payoff = _payoff_report_json(report)
                if state.is_over:
                    session.winner = "D" if report.duplicator_holds(state.cfg.epsilon) else "C"
                    session.reason = "payoff"
            else:
                report = metric_games.perm_payoff_violation(state.moves1, state.moves2, state.cfg)
                session.payoff = _payoff_report_json(report)
                if state.is_over:
                    session.winner = "D" if report.max_violation < state.cfg.epsilon else "C"
                    session.reason = "payoff"


def _apply_session_move(session, mover, body):
    state = session.state
    if session.winner is not None:
        raise ApiError(409, "game-over", "the game is already finished")
    if state.to_move != mover:
        raise ApiError(409, "not-your-turn", f"it is {state.to_move!r} to move")
    if session.kind == "discrete":
        try:
            move = (int(body["graph"]), int(body["v"]))
        except (KeyError, TypeError, ValueError):
            raise ApiError(422, "bad-move", "discrete moves look like {'graph': 1|2, 'v': int}")
        try:
            session.state = games.apply_move(state, move)
        except games.IllegalMoveError as exc:
            code = "repeat" if "repeat" in str(exc) else "illegal-move"
            raise ApiError(409, code, str(exc))
        session.moves.append({"by": mover, "graph": move[0], "v": move[1]})
    elif session.kind.startswith("continuous"):
        try:
            side = int(body["side"])
            matrix = matrix_from_json(body["matrix"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ApiError(422, "bad-move", f"continuous moves look like {{'side', 'matrix'}}: {exc}")
        try:
            metric_games.apply_continuous_move(state, side, matrix)
        except metric_games.IllegalPositionError as exc:
            raise ApiError(409, "illegal-move", str(exc))
        session.moves.append({"by": mover, "side": side, "matrix": matrix_to_json(matrix)})
    else:
        try:
            side = int(body["side"])
            perm = Permutation(tuple(int(x) for x in body["images"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ApiError(422, "bad-move", f"permutation moves look like {{'side', 'images'}}: {exc}")
        try:
            metric_games.apply_permutation_move(state, side, perm)
        except metric_games.IllegalPositionError as exc:
            raise ApiError(409, "illegal-move", str(exc))
        session.moves.append({"by": mover, "side": side, "images": list(perm.images)})
    _finish_if_over(session)


def _replay_consistent(session):
    """Re-derive the final position from the recorded moves and compare."""
    if session.kind == "discrete":
        cfg = session.state
        state = games.new_game(cfg.g1, cfg.g2, cfg.n)
        for mv in session.moves:
            state = games.apply_move(state, (mv["graph"], mv["v"]))
        same = state.pairs == session.state.pairs and state.pending == session.state.pending
        rewinner = None
        if state.is_over or not games.legal_moves(state):
            rewinner = games.winner(state)
        return same and rewinner == session.winner, rewinner
    if session.kind.startswith("continuous"):
        state = metric_games.ContinuousGameState(session.state.cfg)
        for mv in session.moves:
            metric_games.apply_continuous_move(state, mv["side"], matrix_from_json(mv["matrix"]))
        same = len(state.moves1) == len(session.state.moves1)
        rewinner = None
        if state.is_over:
            report = metric_games.payoff_violation(state.moves1, state.moves2, state.cfg)
            rewinner = "D" if report.duplicator_holds(state.cfg.epsilon) else "C"
        return same and rewinner == session.winner, rewinner
    state = metric_games.PermGameState(session.state.cfg)
    for mv in session.moves:
        metric_games.apply_permutation_move(state, mv["side"], Permutation(tuple(mv["images"])))
    same = len(state.moves1) == len(session.state.moves1)
    rewinner = None
    if state.is_over:
        report = metric_games.perm_payoff_violation(state.moves1, state.moves2, state.cfg)
        rewinner = "D" if report.max_violation < state.cfg.epsilon else "C"
    return same and rewinner == session.winner, rewinner


# ---------------------------------------------------------------------------
# FastAPI wiring
# ---------------------------------------------------------------------------


def create_app(snapshot_dir=None):
    app = FastAPI(title="game laboratory session service")
    store = SessionStore(snapshot_dir)
    app.state.store = store

    @app.exception_handler(ApiError)
    async def api_error_handler(request: Request, exc: ApiError):
        return JSONResponse(status_code=exc.status, content={"error": exc.code, "detail": exc.detail})

    @app.exception_handler(RequestValidationError)
    async def validation_handler(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=422, content={"error": "malformed", "detail": str(exc)})

    @app.get("/strategies")
    def strategies():
        return {
            "discrete": DISCRETE_STRATEGIES,
            "continuous": CONTINUOUS_STRATEGIES,
            "permutation": PERMUTATION_STRATEGIES,
        }

    @app.post("/games", status_code=201)
    async def create_game(request: Request):
        try:
            body = await request.json()
        except Exception:
            raise ApiError(422, "malformed", "request body must be JSON")
        if not isinstance(body, dict):
            raise ApiError(422, "malformed", "request body must be a JSON object")
        session = create_session(body)
        store.add(session)
        return session_state_json(session)

    @app.get("/games/{sid}")
    def get_game(sid: str):
        return session_state_json(store.get(sid))

    @app.post("/games/{sid}/moves")
    async def post_move(sid: str, request: Request):
        session = store.get(sid)
        try:
            body = await request.json()
        except Exception:
            raise ApiError(422, "malformed", "request body must be JSON")
        with session.lock:
            human = "C" if session.engine_side == "D" else "D"
            _apply_session_move(session, human, body)
            store.snapshot(session)
        return session_state_json(session)

    @app.post("/games/{sid}/engine-move")
    def engine_move(sid: str):
        session = store.get(sid)
        with session.lock:
            state = session.state
            if session.winner is not None:
                raise ApiError(409, "game-over", "the game is already finished")
            if state.to_move != session.engine_side:
                raise ApiError(409, "not-your-turn", "it is not the engine's turn")
            try:
                choice = session.engine_strategy.choose(state)
            except Exception as exc:
                raise ApiError(409, "engine-error", f"engine strategy failed: {exc}")
            if session.kind == "discrete":
                body = {"graph": choice[0], "v": choice[1]}
            elif session.kind.startswith("continuous"):
                body = {"side": choice[0], "matrix": matrix_to_json(choice[1])}
            else:
                body = {"side": choice[0], "images": list(choice[1].images)}
            _apply_session_move(session, session.engine_side, body)
            store.snapshot(session)
        return session_state_json(session)

    @app.get("/games/{sid}/replay")
    def replay_game(sid: str):
        session = store.get(sid)
        consistent, rewinner = _replay_consistent(session)
        return {"consistent": consistent, "winner": rewinner}

    return app


app = create_app()
