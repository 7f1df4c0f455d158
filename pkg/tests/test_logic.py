import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ef_lab.graphs import Graph, complete_graph, cycle_graph, empty_graph, random_graph
from ef_lab.logic import (
    And,
    Edge,
    EnumerationLimitError,
    Equal,
    Exists,
    Forall,
    FreeVariableError,
    Implies,
    Not,
    Or,
    ParseError,
    canonicalize_variables,
    enumerate_sentences,
    evaluate,
    find_distinguishing_sentence,
    formula_size,
    free_variables,
    negation_normal_form,
    parse_formula,
    parse_sentence,
    print_formula,
    quantifier_depth,
)
from oracles import eval_by_substitution

PSI = "exists x. forall y. (y != x -> E(y,x))"
PHI = "forall x. forall y. (x != y -> exists z. (E(z,x) & !E(z,y)))"


def star_graph():
    # one center adjacent to every leaf
    return Graph.from_edges(4, [(0, 1), (0, 2), (0, 3)])


def test_parse_psi_shape():
    f = parse_sentence(PSI)
    assert f == Exists("x", Forall("y", Implies(Not(Equal("y", "x")), Edge("y", "x"))))


def test_parse_phi_shape():
    f = parse_sentence(PHI)
    assert f == Forall(
        "x",
        Forall("y", Implies(Not(Equal("x", "y")), Exists("z", And(Edge("z", "x"), Not(Edge("z", "y")))))),
    )


def test_parse_free_variable_error():
    with pytest.raises(FreeVariableError) as err:
        parse_sentence("exists x. E(x,y)")
    assert "y" in str(err.value)


def test_parse_syntax_error_carries_position():
    with pytest.raises(ParseError) as err:
        parse_sentence("exists x forall y. E(x,y)")
    assert err.value.line == 1
    assert err.value.column is not None


def test_precedence_and_sugar():
    f = parse_formula("!E(x,x) & x = x | x != x -> E(x,x)")
    # ! binds tightest, then &, then |, then ->
    assert isinstance(f, Implies)
    assert isinstance(f.left, Or)
    assert isinstance(f.left.left, And)
    assert f.left.right == Not(Equal("x", "x"))


def test_quantifier_scope_runs_to_the_end():
    f = parse_formula("exists x. E(x,x) & x = x")
    assert isinstance(f, Exists)
    assert isinstance(f.body, And)


def test_evaluate_psi_on_star_and_cycle():
    psi = parse_sentence(PSI)
    assert evaluate(star_graph(), psi) is True
    # no vertex of degree 4 in the five-cycle: checked exhaustively
    c5 = cycle_graph(5)
    assert all(c5.degree(v) < 4 for v in range(5))
    assert evaluate(c5, psi) is False


def test_evaluate_phi_on_k3_matches_exhaustive_oracle():
    phi = parse_sentence(PHI)
    k3 = complete_graph(3)
    # independent triple loop: for every distinct pair, is there z adjacent
    # to x but not y?  (z = y itself qualifies: the graph is irreflexive)
    expected = all(
        any(k3.adjacent(z, x) and not k3.adjacent(z, y) for z in range(3))
        for x in range(3)
        for y in range(3)
        if x != y
    )
    assert expected is True
    assert evaluate(k3, phi) is expected


def test_evaluate_unbound_variable():
    with pytest.raises(FreeVariableError):
        evaluate(cycle_graph(3), parse_formula("E(x,y)"), {"x": 0})


def test_quantifier_depth_examples():
    assert quantifier_depth(parse_sentence(PSI)) == 2
    assert quantifier_depth(parse_sentence(PHI)) == 3
    assert quantifier_depth(Edge("x", "y")) == 0


def test_formula_size():
    assert formula_size(parse_sentence(PSI)) == 6
    assert formula_size(Edge("x", "y")) == 1


# -- random formula machinery for property tests ----------------------------

VARS = ["x0", "x1"]


def formulas(depth):
    atoms = st.tuples(st.sampled_from(VARS), st.sampled_from(VARS)).flatmap(
        lambda p: st.sampled_from([Equal(p[0], p[1]), Edge(p[0], p[1])])
    )
    return st.recursive(
        atoms,
        lambda children: st.one_of(
            children.map(Not),
            st.tuples(children, children).map(lambda t: And(*t)),
            st.tuples(children, children).map(lambda t: Or(*t)),
            st.tuples(children, children).map(lambda t: Implies(*t)),
            st.tuples(st.sampled_from(VARS), children).map(lambda t: Exists(*t)),
            st.tuples(st.sampled_from(VARS), children).map(lambda t: Forall(*t)),
        ),
        max_leaves=6,
    )


def close_up(f):
    out = f
    for v in sorted(free_variables(f)):
        out = Forall(v, out)
    return out


@given(formulas(2), st.integers(0, 2**32 - 1))
@settings(max_examples=60, deadline=None)
def test_print_parse_round_trip_and_semantics(f, seed):
    sentence = close_up(f)
    text = print_formula(sentence)
    reparsed = parse_sentence(text)
    assert reparsed == sentence
    g = random_graph(4, 0.5, seed)
    assert evaluate(g, sentence) == eval_by_substitution(g, sentence)


@given(formulas(2), st.integers(0, 2**32 - 1))
@settings(max_examples=40, deadline=None)
def test_logical_equivalences(f, seed):
    sentence = close_up(f)
    g = random_graph(4, 0.5, seed)
    val = evaluate(g, sentence)
    assert evaluate(g, Not(Not(sentence))) == val
    # forall x f == not exists x not f
    wrapped_forall = Forall("x0", sentence)
    wrapped_dual = Not(Exists("x0", Not(sentence)))
    assert evaluate(g, wrapped_forall) == evaluate(g, wrapped_dual)
    # De Morgan
    other = Edge("x0", "x0")
    lhs = Not(And(sentence, Exists("x0", other)))
    rhs = Or(Not(sentence), Not(Exists("x0", other)))
    assert evaluate(g, lhs) == evaluate(g, rhs)


@given(formulas(2), st.integers(0, 2**32 - 1))
@settings(max_examples=40, deadline=None)
def test_negation_normal_form_preserves_truth(f, seed):
    sentence = close_up(f)
    g = random_graph(4, 0.5, seed)
    nnf = negation_normal_form(sentence)
    assert evaluate(g, nnf) == evaluate(g, sentence)
    neg = negation_normal_form(sentence, negate=True)
    assert evaluate(g, neg) == (not evaluate(g, sentence))


def test_enumerate_depth_zero_is_empty():
    assert enumerate_sentences(0, 5) == []


def test_enumerate_smallest_closed_sentences():
    got = {print_formula(f) for f in enumerate_sentences(1, 3)}
    assert "exists x0. E(x0,x0)" in got
    assert "forall x0. E(x0,x0)" in got


def test_enumerate_is_deterministic_and_duplicate_free():
    a = [print_formula(f) for f in enumerate_sentences(2, 5)]
    b = [print_formula(f) for f in enumerate_sentences(2, 5)]
    assert a == b
    assert len(a) == len(set(a))


def test_enumerate_respects_bounds():
    for f in enumerate_sentences(2, 5):
        assert quantifier_depth(f) <= 2
        assert formula_size(f) <= 5


def test_enumerate_has_stable_index_for_psi():
    sentences = enumerate_sentences(2, 6)
    target = print_formula(canonicalize_variables(parse_sentence(PSI)))
    index = [i for i, f in enumerate(sentences) if print_formula(f) == target]
    assert index == [7200]


def test_enumerate_refuses_past_safety_limit():
    with pytest.raises(EnumerationLimitError):
        enumerate_sentences(4, 5)
    with pytest.raises(EnumerationLimitError):
        enumerate_sentences(2, 12)


def test_find_distinguishing_identical_graphs():
    g = random_graph(5, 0.5, 2)
    assert find_distinguishing_sentence(g, g, 2) is None


def test_find_distinguishing_c3_c4():
    f = find_distinguishing_sentence(cycle_graph(3), cycle_graph(4), 2)
    assert f is not None
    assert quantifier_depth(f) <= 2
    assert evaluate(cycle_graph(3), f) != evaluate(cycle_graph(4), f)


def test_find_distinguishing_depth_matters():
    # a single edge cannot be seen with one quantifier (atoms on one variable
    # are loops, always false), but two quantifiers see it
    assert find_distinguishing_sentence(empty_graph(2), complete_graph(2), 1) is None
    f = find_distinguishing_sentence(empty_graph(2), complete_graph(2), 2)
    assert f is not None
    assert evaluate(empty_graph(2), f) != evaluate(complete_graph(2), f)
