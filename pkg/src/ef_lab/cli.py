"""Command-line entry points: solve, play, psi, zeroone, diagonal, serve.

Reports go to stdout as JSON; with --out DIR the experiment subcommands also
write a CSV table, a rendered PNG figure, and the full record JSON there.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

EXIT_USAGE = 2
EXIT_BUDGET = 3


def _parse_graph(spec, default_seed=0):
    from .graphs import complete_graph, cycle_graph, empty_graph, graph_from_json, random_graph

    if spec.startswith("cycle:"):
        return cycle_graph(int(spec.split(":")[1]))
    if spec.startswith("complete:"):
        return complete_graph(int(spec.split(":")[1]))
    if spec.startswith("empty:"):
        return empty_graph(int(spec.split(":")[1]))
    if spec.startswith("random:"):
        parts = spec.split(":")
        seed = int(parts[3]) if len(parts) > 3 else default_seed
        return random_graph(int(parts[1]), float(parts[2]), seed)
    path = Path(spec)
    if path.exists():
        return graph_from_json(json.loads(path.read_text()))
    raise ValueError(
        f"cannot interpret graph {spec!r}: use cycle:M, complete:M, empty:M, "
        "random:M:P[:SEED], or a path to a graph JSON file"
    )


def _parse_dims(text):
    dims = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if ".." in chunk:
            lo, hi = chunk.split("..")
            dims.extend(range(int(lo), int(hi) + 1))
        elif chunk:
            dims.append(int(chunk))
    return dims


def _read_sentence(text):
    if text.startswith("@"):
        return Path(text[1:]).read_text().strip()
    return text


def _emit(payload):
    json.dump(payload, sys.stdout, indent=2, default=str)
    sys.stdout.write("\n")


def _write_outputs(record, out_dir, stem):
    from .experiments import record_to_csv
    from .plots import save_record_figure

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / f"{stem}.csv"
    csv_path.write_text(record_to_csv(record))
    fig_path = out / f"{stem}.png"
    save_record_figure(record, fig_path)
    record_path = out / f"{stem}.json"
    record_path.write_text(json.dumps(record.to_json(), indent=2))
    return {"csv": str(csv_path), "figure": str(fig_path), "record": str(record_path)}


def cmd_solve(args):
    from .games import BudgetExceededError, solve

    g1 = _parse_graph(args.g1, args.seed)
    g2 = _parse_graph(args.g2, args.seed)
    start = time.perf_counter()
    try:
        win, _ = solve(g1, g2, args.n, budget=args.budget)
    except BudgetExceededError as exc:
        _emit({"error": "budget-exceeded", "detail": str(exc)})
        return EXIT_BUDGET
    _emit({"winner": win, "n": args.n, "wall_time": time.perf_counter() - start})
    return 0


def _make_cli_strategy(name, g1, g2, n, seed):
    from . import games

    if name == "random":
        return games.random_strategy(seed)
    if name == "solver-optimal":
        solver = games.GameSolver(g1, g2, n)
        win = games.DUPLICATOR if solver.duplicator_wins() else games.CHALLENGER
        return solver.strategy(win)
    if name == "cycle-duplicator":
        return games.cycle_duplicator_strategy(g1.m, g2.m, n)
    if name.startswith("formula:"):
        from .logic import parse_sentence

        sentence = _read_sentence(name.split(":", 1)[1])
        return games.formula_challenger_strategy(g1, g2, parse_sentence(sentence))
    raise ValueError(f"unknown strategy {name!r}")


def cmd_play(args):
    from .games import play, transcript_to_json

    g1 = _parse_graph(args.g1, args.seed)
    g2 = _parse_graph(args.g2, args.seed)
    strat_c = _make_cli_strategy(args.challenger, g1, g2, args.n, args.seed)
    strat_d = _make_cli_strategy(args.duplicator, g1, g2, args.n, args.seed + 1)
    transcript = play(g1, g2, args.n, strat_c, strat_d)
    payload = transcript_to_json(transcript)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "transcript.json").write_text(json.dumps(payload, indent=2))
    _emit(payload)
    return 0


def cmd_psi(args):
    from .experiments import psi_sweep, record_to_csv

    record = psi_sweep(_parse_dims(args.dims), restarts=args.restarts, max_steps=args.steps, seed=args.seed)
    if args.out:
        files = _write_outputs(record, args.out, "psi_sweep")
        _emit({"summary": record.summary, "files": files})
    else:
        sys.stdout.write(record_to_csv(record))
    return 0


def cmd_zeroone(args):
    from .experiments import record_to_csv, zero_one_sweep

    sentences = [_read_sentence(s) for s in args.sentence]
    record = zero_one_sweep(sentences, _parse_dims(args.m), args.samples, args.seed)
    if args.out:
        files = _write_outputs(record, args.out, "zero_one")
        _emit({"summary": record.summary, "files": files})
    else:
        sys.stdout.write(record_to_csv(record))
    return 0


def cmd_diagonal(args):
    from .experiments import diagonal_subsequence
    from .graphs import graph_from_json
    from .logic import parse_sentence

    graphs = [graph_from_json(obj) for obj in json.loads(Path(args.graphs).read_text())]
    lines = [ln.strip() for ln in Path(args.sentences).read_text().splitlines() if ln.strip()]
    sentences = [parse_sentence(ln) for ln in lines]
    result = diagonal_subsequence(graphs, sentences)
    _emit({"indices": result.indices, "sentences_processed": result.sentences_processed})
    return 0


def cmd_serve(args):
    import uvicorn

    from .service import create_app

    addr = args.addr or os.environ.get("EF_LAB_ADDR", "127.0.0.1:8000")
    host, _, port = addr.rpartition(":")
    app = create_app(snapshot_dir=args.snapshot_dir)
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port))
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="ef", description=__doc__)
    parser.add_argument("--seed", type=int, default=0, help="master random seed")
    parser.add_argument("--budget", type=int, default=10**8, help="solver node budget")
    parser.add_argument("--out", help="directory for CSV/figure/record outputs")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="winner of a graph game with optimal play")
    p.add_argument("--g1", required=True)
    p.add_argument("--g2", required=True)
    p.add_argument("-n", type=int, required=True)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("play", help="referee one game between two strategies")
    p.add_argument("--g1", required=True)
    p.add_argument("--g2", required=True)
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--challenger", default="random")
    p.add_argument("--duplicator", default="random")
    p.set_defaults(func=cmd_play)

    p = sub.add_parser("psi", help="parity-observable sweep over matrix dimensions")
    p.add_argument("--dims", required=True, help="e.g. 1..8 or 2,3,5")
    p.add_argument("--restarts", type=int, default=64)
    p.add_argument("--steps", type=int, default=400)
    p.set_defaults(func=cmd_psi)

    p = sub.add_parser("zeroone", help="truth frequency of sentences on G(m, 1/2)")
    p.add_argument("--sentence", action="append", required=True, help="sentence text or @file")
    p.add_argument("--m", required=True, help="graph sizes, e.g. 10,20,40")
    p.add_argument("--samples", type=int, default=200)
    p.set_defaults(func=cmd_zeroone)

    p = sub.add_parser("diagonal", help="majority-diagonal subsequence of a graph list")
    p.add_argument("--graphs", required=True, help="JSON file: list of graph objects")
    p.add_argument("--sentences", required=True, help="text file: one sentence per line")
    p.set_defaults(func=cmd_diagonal)

    p = sub.add_parser("serve", help="run the session service")
    p.add_argument("--addr", help="host:port (default env EF_LAB_ADDR or 127.0.0.1:8000)")
    p.add_argument("--snapshot-dir", help="persist session snapshots as JSON here")
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        parser.exit(EXIT_USAGE, f"error: {exc}\n")


if __name__ == "__main__":
    sys.exit(main())
