import itertools

import pytest

from ef_lab.games import (
    BudgetExceededError,
    GameNotOverError,
    GameSolver,
    IllegalMoveError,
    InvariantViolation,
    Strategy,
    apply_move,
    cycle_duplicator_strategy,
    formula_challenger_strategy,
    legal_moves,
    new_game,
    play,
    random_strategy,
    replay,
    solve,
    transcript_from_json,
    transcript_to_json,
    winner,
)
from ef_lab.graphs import Graph, complete_graph, cycle_graph, empty_graph, random_graph
from ef_lab.logic import evaluate, find_distinguishing_sentence, parse_sentence, quantifier_depth
from oracles import brute_force_game_winner


def test_legal_moves_fresh_game():
    s = new_game(cycle_graph(3), cycle_graph(4), 1)
    assert len(legal_moves(s)) == 7  # 3 + 4


def test_legal_moves_duplicator_side_restricted():
    s = new_game(cycle_graph(3), cycle_graph(4), 1)
    s = apply_move(s, (1, 0))
    moves = legal_moves(s)
    assert moves and all(side == 2 for side, _ in moves)


def test_apply_move_pending_and_pairing():
    s = new_game(cycle_graph(3), cycle_graph(4), 2)
    s = apply_move(s, (2, 3))
    assert s.pending == (2, 3)
    s = apply_move(s, (1, 1))
    assert s.pairs == ((1, 3),)  # pairs are always (g1 vertex, g2 vertex)
    assert s.pending is None


def test_repeat_is_illegal():
    s = new_game(cycle_graph(3), cycle_graph(4), 2)
    s = apply_move(s, (1, 0))
    s = apply_move(s, (2, 0))
    with pytest.raises(IllegalMoveError, match="repeat"):
        apply_move(s, (1, 0))


def test_winner_zero_innings_is_duplicator():
    s = new_game(cycle_graph(3), cycle_graph(4), 0)
    assert winner(s) == "D"


def test_winner_on_mismatch_and_match():
    s = new_game(cycle_graph(3), cycle_graph(4), 2)
    for mv in [(1, 0), (2, 0), (1, 2), (2, 2)]:
        s = apply_move(s, mv)
    assert winner(s) == "C"  # 0~2 in the triangle but 0 and 2 are antipodal in the square
    g = cycle_graph(5)
    s = new_game(g, g, 2)
    for mv in [(1, 0), (2, 0), (1, 1), (2, 1)]:
        s = apply_move(s, mv)
    assert winner(s) == "D"


def test_winner_requires_finished_game():
    s = new_game(cycle_graph(3), cycle_graph(4), 2)
    with pytest.raises(GameNotOverError):
        winner(s)


def test_solve_identical_graphs_duplicator():
    for g in [cycle_graph(5), random_graph(5, 0.5, 4), complete_graph(4)]:
        for n in (1, 2, 3):
            assert solve(g, g, n)[0] == "D"


def test_solve_matches_brute_force_oracle():
    cases = []
    for m, k in itertools.product((3, 4, 5), repeat=2):
        for n in (1, 2):
            cases.append((cycle_graph(m), cycle_graph(k), n))
    for seed in range(4):
        cases.append((random_graph(4, 0.5, seed), random_graph(5, 0.4, seed + 50), 2))
    cases.append((empty_graph(2), complete_graph(2), 2))
    # degenerate long games exercise the exhaustion rules
    cases.append((complete_graph(2), complete_graph(3), 3))
    cases.append((empty_graph(2), empty_graph(3), 4))
    for g1, g2, n in cases:
        assert solve(g1, g2, n)[0] == brute_force_game_winner(g1, g2, n)


def test_solve_thresholds():
    assert solve(cycle_graph(3), cycle_graph(4), 2)[0] == "C"
    assert solve(cycle_graph(3), cycle_graph(4), 3)[0] == "C"
    assert solve(cycle_graph(9), cycle_graph(10), 2)[0] == "D"


def test_solve_long_cycle_threshold_sweep_one_inning():
    # every pair with 2^(1+1) < min(m, k) <= 12 is a duplicator win at n=1
    for m in range(5, 13):
        for k in range(5, 13):
            assert solve(cycle_graph(m), cycle_graph(k), 1)[0] == "D"


def test_duplicator_stuck_when_small_graph_is_exhausted():
    s = new_game(cycle_graph(5), cycle_graph(3), 4)
    for mv in [(1, 0), (2, 0), (1, 1), (2, 1), (1, 2), (2, 2)]:
        s = apply_move(s, mv)
    s = apply_move(s, (1, 3))  # challenger moves; duplicator has no reply
    assert legal_moves(s) == []
    assert winner(s) == "C"


def test_solve_monotone_in_innings():
    # a challenger win is never lost by lengthening the game (within sizes
    # where nobody can run out of vertices)
    for g1, g2 in [
        (cycle_graph(3), cycle_graph(4)),
        (random_graph(5, 0.5, 1), random_graph(5, 0.2, 2)),
    ]:
        wins = [solve(g1, g2, n)[0] for n in (1, 2, 3)]
        for earlier, later in zip(wins, wins[1:]):
            if earlier == "C":
                assert later == "C"


def test_solve_symmetric_in_graph_order():
    for seed in range(3):
        g1 = random_graph(4, 0.5, seed)
        g2 = random_graph(5, 0.5, seed + 9)
        assert solve(g1, g2, 2)[0] == solve(g2, g1, 2)[0]


def test_solve_budget_exceeded_is_an_error():
    with pytest.raises(BudgetExceededError):
        solve(cycle_graph(9), cycle_graph(10), 2, budget=3)


def test_optimal_strategies_realize_the_announced_winner():
    for g1, g2, n in [
        (cycle_graph(3), cycle_graph(4), 2),
        (cycle_graph(9), cycle_graph(10), 2),
        (random_graph(5, 0.5, 3), random_graph(5, 0.5, 4), 2),
    ]:
        solver = GameSolver(g1, g2, n)
        expected = "D" if solver.duplicator_wins() else "C"
        t = play(g1, g2, n, solver.strategy("C"), solver.strategy("D"))
        assert t.winner == expected


def test_play_forfeit_on_illegal_strategy():
    class Repeater(Strategy):
        def choose(self, state):
            return (1, 0)

    t = play(cycle_graph(4), cycle_graph(4), 2, Repeater(), random_strategy(0))
    assert t.winner == "D"
    assert t.reason == "forfeit-illegal-move"


def test_transcript_replay_reproduces_winner():
    for seed in range(6):
        t = play(cycle_graph(5), cycle_graph(6), 2, random_strategy(seed), random_strategy(seed + 100))
        assert replay(t) == t.winner
        blob = transcript_to_json(t)
        assert blob["winner"] == t.winner
        assert replay(transcript_from_json(blob)) == t.winner


def test_transcript_json_shape():
    t = play(cycle_graph(3), cycle_graph(4), 1, random_strategy(1), random_strategy(2))
    blob = transcript_to_json(t)
    assert set(blob) == {"g1", "g2", "n", "moves", "winner", "reason"}
    assert all(set(m) == {"by", "graph", "v"} for m in blob["moves"])


# -- cycle duplicator --------------------------------------------------------


def test_cycle_duplicator_requires_threshold():
    with pytest.raises(ValueError):
        cycle_duplicator_strategy(8, 8, 2)  # needs min > 2^3
    cycle_duplicator_strategy(9, 9, 2)


def test_cycle_duplicator_never_loses_random_sample():
    for seed in range(200):
        t = play(
            cycle_graph(17),
            cycle_graph(18),
            2,
            random_strategy(seed),
            cycle_duplicator_strategy(17, 18, 2),
        )
        assert t.winner == "D", t.moves


def test_cycle_duplicator_beats_optimal_challenger():
    for m, k, n in [(9, 10, 2), (10, 11, 2), (12, 9, 2)]:
        solver = GameSolver(cycle_graph(m), cycle_graph(k), n)
        t = play(
            cycle_graph(m),
            cycle_graph(k),
            n,
            solver.strategy("C"),
            cycle_duplicator_strategy(m, k, n),
        )
        assert t.winner == "D"


def test_cycle_duplicator_holds_distance_invariant_three_innings():
    # three innings on large cycles; instrumented check raises on violation
    for seed in range(100):
        t = play(
            cycle_graph(20),
            cycle_graph(23),
            3,
            random_strategy(seed),
            cycle_duplicator_strategy(20, 23, 3),
        )
        assert t.winner == "D"


# -- formula challenger -------------------------------------------------------


def test_formula_challenger_wins_phi_pair_within_three():
    phi = parse_sentence("forall x. forall y. (x != y -> exists z. (E(z,x) & !E(z,y)))")
    # phi holds in the 5-cycle but fails in the star: a leaf pair only has
    # the centre as witness candidate, and the centre touches both leaves
    g1 = cycle_graph(5)
    g2 = Graph.from_edges(4, [(0, 1), (0, 2), (0, 3)])
    assert evaluate(g1, phi) is True
    assert evaluate(g2, phi) is False
    solver = GameSolver(g1, g2, 3)
    strat = formula_challenger_strategy(g1, g2, phi)
    t = play(g1, g2, 3, strat, solver.strategy("D"))
    assert t.winner == "C"


def test_formula_challenger_depth_one_wins_in_one():
    # the only depth-1 separation between simple graphs is emptiness
    f = parse_sentence("exists x. x = x")
    g1, g2 = cycle_graph(3), Graph(0, frozenset())
    assert evaluate(g1, f) and not evaluate(g2, f)
    strat = formula_challenger_strategy(g1, g2, f)
    t = play(g1, g2, 1, strat, random_strategy(0))
    assert t.winner == "C"
    assert len(t.moves) == 1  # one half-move; the duplicator is stuck


def test_formula_challenger_wins_within_quantifier_depth_random_pairs():
    wins = 0
    tried = 0
    for seed in range(60):
        g1 = random_graph(4, 0.5, seed)
        g2 = random_graph(5, 0.5, seed + 1000)
        f = find_distinguishing_sentence(g1, g2, 2, max_size=5)
        if f is None:
            continue
        tried += 1
        n = quantifier_depth(f)
        strat = formula_challenger_strategy(g1, g2, f)
        t = play(g1, g2, n, strat, random_strategy(seed))
        if t.winner == "C":
            wins += 1
    assert tried > 20
    assert wins == tried


def test_formula_challenger_refuses_agreeing_graphs():
    f = parse_sentence("exists x. exists y. E(x,y)")
    with pytest.raises(ValueError):
        formula_challenger_strategy(cycle_graph(4), cycle_graph(4), f)
