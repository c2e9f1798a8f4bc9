import pytest
from hypothesis import given, strategies as st

from conftest import ltss, proc
from oracles import bfs
from procverify.algebra import choice
from procverify.errors import UnknownState
from procverify.lts import (Action, Lts, act_of, deadlocks, inp, isomorphic, out, parse_action,
                            reachable_part, tau)
from procverify.models import basic, build


def chain(*labels, prefix="c"):
    return Lts.build(f"{prefix}0", [(f"{prefix}{i}", a, f"{prefix}{i + 1}") for i, a in enumerate(labels)])


def test_action_text():
    assert str(tau) == "tau"
    assert str(inp("a")) == "a?"
    assert str(out("b", 3)) == "b!3"
    assert parse_action("a!") == out("a")
    assert inp("a").complement() == out("a")
    with pytest.raises(ValueError):
        Action("in", "bad name")
    with pytest.raises(ValueError):
        tau.complement()


def test_lts_rejects_bad_input():
    with pytest.raises(ValueError):
        Lts(("s",), "t")
    with pytest.raises(ValueError):
        Lts(("s", "s"), "s")
    with pytest.raises(ValueError):
        Lts(("s",), "s", {("s", tau, "x")})
    with pytest.raises(UnknownState):
        Lts(("s",), "s").out_of("x")


def test_alternative_composition_drops_old_roots():
    p = choice(proc("coin_1?.cola!.0"), proc("coin_2?.fanta!.0"))
    assert len(p.states) == 7
    assert len(reachable_part(p).states) == 5


def test_reachable_part_keeps_reachable_lts():
    p = chain("a?", "b?")
    assert reachable_part(p) == p


@given(ltss(max_states=10, max_trans=15))
def test_reachable_part_matches_bfs(p):
    q = reachable_part(p)
    assert set(q.states) == bfs(p)
    assert q.transitions == {t for t in p.transitions if t[0] in bfs(p)}


def test_separation_terminal_states():
    from procverify.vp import concretize
    dead = deadlocks(concretize(build("separation")))
    assert len(dead) == 1
    assert next(iter(dead)).startswith("⟨C,a⟩")


def test_loop_has_no_deadlock():
    assert deadlocks(basic.star(["a?"])) == set()


@given(ltss(max_states=8))
def test_deadlocks_match_outdegree_scan(p):
    reach = bfs(p)
    assert deadlocks(p) == {s for s in reach if not any(t[0] == s for t in p.transitions)}


def test_isomorphic_renamed():
    p = chain("a?", "b!", "tau")
    q = p.relabel_states({s: "x" + s for s in p.states})
    m = isomorphic(p, q)
    assert m == {s: "x" + s for s in p.states}


def test_isomorphic_label_mismatch():
    assert isomorphic(chain("a?"), chain("b?")) is None


def test_minimized_jobshop_is_isomorphic_to_buffer_chain():
    from procverify.minimize import minimize
    # two one-place buffers in a row: 3 states counting stored items
    spec = Lts.build("0", [("0", "in?", "1"), ("1", "in?", "2"), ("2", "out!", "1"), ("1", "out!", "0")])
    assert isomorphic(minimize(basic.jobshop(), "weak"), spec) is not None


def test_act_of_vending():
    assert {str(a) for a in act_of(basic.vending(1))} == {"in_coin?", "pr_but?", "out_choc!"}
    assert act_of(proc("0")) == set()


@given(ltss(), st.data())
def test_act_of_state_matches_scan(p, data):
    s = data.draw(st.sampled_from(p.states))
    assert act_of(p, s) == {a for src, a, _ in p.transitions if src == s}
