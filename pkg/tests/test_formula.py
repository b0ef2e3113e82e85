import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hyperdox import (
    And,
    Atom,
    Believes,
    Knows,
    Not,
    ParseError,
    PropVar,
    Workspace,
    WorkspaceError,
    f_imp,
    fragment_check,
    modal_depth,
    parse_formula,
    render_formula,
)
from hyperdox.randgen import random_formula


@pytest.fixture
def ws(ws3):
    return ws3


def test_parse_implication_desugars(ws):
    f = parse_formula("B{a}(p_a_1 -> K{a} p_a_1)", ws)
    p = Atom(ws.var_by_name("p_a_1"))
    assert f == Believes(0, f_imp(p, Knows(0, p)))


def test_parse_false_uses_designated_atom(ws):
    f = parse_formula("~B{a} false", ws)
    p = Atom(PropVar(0, 0))
    assert f == Not(Believes(0, And(p, Not(p))))


def test_parse_true_is_not_false(ws):
    f = parse_formula("true", ws)
    p = Atom(PropVar(0, 0))
    assert f == Not(And(p, Not(p)))


def test_undeclared_atom_rejected(ws):
    with pytest.raises(ParseError, match="undeclared atom"):
        parse_formula("B{a}(p & ~p)", ws)


def test_undeclared_agent_rejected(ws):
    with pytest.raises(ParseError, match="undeclared agent"):
        parse_formula("B{z} p_a_1", ws)


def test_syntax_error_carries_position(ws):
    with pytest.raises(ParseError) as exc:
        parse_formula("p_a_1 & & p_b_1", ws)
    assert exc.value.pos == 8


def test_false_without_designated_atom(ws):
    bare = Workspace(("a",), ((),))
    with pytest.raises(ParseError, match="designated"):
        parse_formula("false", bare)


def test_precedence_and_binds_tighter_than_or(ws):
    f = parse_formula("p_a_1 & p_b_1 | p_c_1", ws)
    g = parse_formula("(p_a_1 & p_b_1) | p_c_1", ws)
    assert f == g


def test_implication_right_associative(ws):
    f = parse_formula("p_a_1 -> p_b_1 -> p_c_1", ws)
    g = parse_formula("p_a_1 -> (p_b_1 -> p_c_1)", ws)
    assert f == g


def test_iff_right_associative(ws):
    f = parse_formula("p_a_1 <-> p_b_1 <-> p_c_1", ws)
    g = parse_formula("p_a_1 <-> (p_b_1 <-> p_c_1)", ws)
    assert f == g


def test_desugaring_totality(ws):
    core = (Atom, Not, And, Believes, Knows)
    for text in ["p_a_1 | ~p_b_1", "true -> false", "K{b} p_b_1 <-> B{c} p_c_1"]:
        stack = [parse_formula(text, ws)]
        while stack:
            node = stack.pop()
            assert isinstance(node, core)
            if isinstance(node, Not):
                stack.append(node.sub)
            elif isinstance(node, And):
                stack.extend([node.left, node.right])
            elif isinstance(node, (Believes, Knows)):
                stack.append(node.sub)


def test_render_examples(ws):
    p = Atom(ws.var_by_name("p_a_1"))
    q = Atom(ws.var_by_name("p_b_1"))
    assert render_formula(Believes(0, p), ws) == "B{a} p_a_1"
    assert render_formula(Not(And(p, q)), ws) == "~(p_a_1 & p_b_1)"


def test_render_is_identity_on_sugar_free_text(ws):
    for text in [
        "B{a} p_a_1 & ~(p_b_1 & p_c_1)",
        "~~K{c} p_c_1",
        "B{a}(p_a_1 & K{b} p_b_1)",
        "p_a_1 & p_b_1 & p_c_1",
    ]:
        assert render_formula(parse_formula(text, ws), ws) == text


def test_render_parse_roundtrip_seeded(ws):
    rng = random.Random(7)
    vars_ = ws.all_vars()
    agents = list(range(ws.n_agents))
    for _ in range(1000):
        f = random_formula(rng, vars_, agents, max_depth=3, max_size=9)
        assert parse_formula(render_formula(f, ws), ws) == f


def _formula_strategy(ws):
    atoms = st.sampled_from([Atom(v) for v in ws.all_vars()])
    agents = st.sampled_from(range(ws.n_agents))
    return st.recursive(
        atoms,
        lambda sub: st.one_of(
            sub.map(Not),
            st.tuples(sub, sub).map(lambda t: And(*t)),
            st.tuples(agents, sub).map(lambda t: Believes(*t)),
            st.tuples(agents, sub).map(lambda t: Knows(*t)),
        ),
        max_leaves=12,
    )


@settings(max_examples=300, deadline=None)
@given(data=st.data())
def test_render_parse_roundtrip_hypothesis(data):
    ws = Workspace(("a", "b"), (("p_a_1", "p_a_2"), ("p_b_1",)))
    f = data.draw(_formula_strategy(ws))
    assert parse_formula(render_formula(f, ws), ws) == f


def test_fragment_check_examples(ws):
    p_a = Atom(ws.var_by_name("p_a_1"))
    p_b = Atom(ws.var_by_name("p_b_1"))
    info = fragment_check(Believes(0, p_a))
    assert info.in_doxastic_fragment and info.agent_formula_for == {0}
    info = fragment_check(Knows(0, p_a))
    assert not info.in_doxastic_fragment and info.agent_formula_for == {0}
    info = fragment_check(Believes(0, p_b))
    assert info.in_doxastic_fragment and info.agent_formula_for == frozenset()


def test_modal_depth_examples(ws):
    p = Atom(ws.var_by_name("p_a_1"))
    q = Atom(ws.var_by_name("p_b_1"))
    assert modal_depth(p) == 0
    assert modal_depth(Believes(0, Believes(0, p))) == 2
    assert modal_depth(And(Believes(0, p), Knows(1, q))) == 1


def test_variable_disjointness():
    assert PropVar(0, 1) != PropVar(1, 1)
    with pytest.raises(WorkspaceError, match="twice"):
        Workspace(("a", "b"), (("p",), ("p",)))
