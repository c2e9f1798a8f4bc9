import itertools

import pytest
from hypothesis import assume, given, settings, strategies as st

from procverify.equiv import equivalent
from procverify.errors import (CapacityTooSmall, MalformedFlowchart, RangeOverflow, StateExplosion,
                               VariableClash)
from procverify.lts import inp, out, tau
from procverify.models import valued, protocols
from procverify.syntax import parse_expr, parse_type, parse_vpm
from procverify.vp import (INIT_STATE, Executor, Flowchart, IntRange, PetriNet, concretize,
                           empty_vp, essential_vars, eval_expr, flowchart_to_process,
                           invariant_holds, petri_to_process, reduce, seq_compose, verify_mu_certificate,
                           vp_combine, vp_parallel, vp_rename, vp_restrict)
from procverify.vp.brute import iter_valuations
from procverify.vp.flowchart import HALT, start
from procverify.vp.ops import co_text
from procverify.algebra import rename, restrict

HEAD = "var x : 0..3\nvar y : 0..3\nvar b : bool\nvar q : list(0..1, 2)\nvar f : 0..1\n"


def co(text, head=HEAD):
    p = parse_vpm(head + "state A init\ntrans A -> A : " + text + "\n")
    return p.transitions[0].op, p.types


def ev(text, **sigma):
    return eval_expr(parse_expr(text), sigma)


# ---------------------------------------------------------------- expressions

def test_eval_examples():
    assert ev("len([m] ++ [m])", m="u") == 2
    assert ev("hd(q ++ [f])", q=(), f=1) == 1
    assert ev("between(1, 2, 0)") is True
    assert ev("between(0, 2, 1)") is False
    assert ev("addm(3, 1, 4)") == 0 and ev("subm(0, 1, 4)") == 3


def test_between_matches_cyclic_order():
    # b lies on the half-open cyclic interval from a up to (not incl.) c
    for a, b, c in itertools.product(range(4), repeat=3):
        walk = [(a + k) % 4 for k in range(((c - a) % 4))]
        assert ev("between(a, b, c)", a=a, b=b, c=c) == (b in walk)


def test_empty_list_defaults():
    types = {"q": parse_type("list(1..3, 2)")}
    assert eval_expr(parse_expr("hd(q)"), {"q": ()}, types) == 1
    assert eval_expr(parse_expr("tl(q)"), {"q": ()}, types) == ()


def test_range_overflow():
    op, types = co("x := x + 1")
    with pytest.raises(RangeOverflow):
        Executor(op, types).run({"x": 3, "y": 0, "b": False, "q": (), "f": 0})


# ---------------------------------------------------------------- sequential composition

def test_seq_compose_examples():
    a, _ = co("k := k + 1", "var k : 0..3\n")
    g, _ = co("[k <= 1]", "var k : 0..3\n")
    assert co_text(seq_compose(a, g)) == "[k + 1 <= 1] ; k := k + 1"
    i, _ = co("In?x")
    gx, _ = co("[x > 0] ; y := x")
    assert seq_compose(i, gx) is None
    o, _ = co("Out!x")
    assert seq_compose(i, o) is None
    assert seq_compose(o, gx) is not None


OPS = ["x := addm(x, 1, 4)", "y := x", "b := !b", "q := tl(q)", "f := 1 - f", "In?x", "Out!y",
       "Sig!", "y := subm(y, x, 4)"]
GUARDS = ["true", "x == 1", "b", "x < y", "len(q) > 0", "!b || y == 2"]


@st.composite
def cos(draw):
    g = draw(st.sampled_from(GUARDS))
    body = draw(st.lists(st.sampled_from(OPS), max_size=3))
    comm = [o for o in body if o.startswith(("In", "Out", "Sig"))]
    for extra in comm[1:]:
        body.remove(extra)
    return co(" ; ".join([f"[{g}]"] + body))


SIGMAS = list(iter_valuations(co("[true]")[1], ["x", "y", "b", "q", "f"]))


@given(cos(), cos())
def test_seq_compose_semantics(c1, c2):
    (op1, types), (op2, _) = c1, c2
    comp = seq_compose(op1, op2)
    assume(comp is not None)
    e1, e2, ec = Executor(op1, types, strict=False), Executor(op2, types, strict=False), \
        Executor(comp, types, strict=False)
    dom = e1.input_domain() or e2.input_domain() or [Executor.NO_INPUT]
    for s in SIGMAS:
        for v in dom:
            v1 = v if e1.input_domain() else Executor.NO_INPUT
            v2 = v if e2.input_domain() else Executor.NO_INPUT
            both = e1.enabled(s) and e2.enabled(e1.run(s, v1)[1])
            assert ec.enabled(s) == both
            if both:
                a1, s1 = e1.run(s, v1)
                a2, s2 = e2.run(s1, v2)
                ac, sc = ec.run(s, v)
                assert sc == s2
                assert ac == (a2 if a1.is_tau else a1)


# ---------------------------------------------------------------- concretization

def test_concretize_buffer1_matches_buf():
    b1 = concretize(valued.buffer_reduced(1))
    assert equivalent(b1, concretize(valued.buf()), "weak")


def test_concretize_false_guard():
    p = parse_vpm("var x : 0..1\nstate A init\nstate B\ntrans A -> B : [false] ; x := 1\n")
    c = concretize(p)
    assert c.initial == INIT_STATE and not c.transitions


def test_concretize_labels():
    c = concretize(valued.buf(("m0", "m1")))
    labels = {a for _, a, _ in c.transitions}
    assert labels == {inp("In", "m0"), inp("In", "m1"), out("Out", "m0"), out("Out", "m1")}


def test_init_fan_out():
    p = parse_vpm("var x : 0..2\nstate A init\ntrans A -> A : Out!x\n")
    c = concretize(p)
    assert {a for s, a, _ in c.transitions if s == INIT_STATE} == {out("Out", v) for v in range(3)}


def test_plain_and_wrapped_agree():
    p1 = parse_vpm("var x : 0..1\nstate A init\nstate B\nstate C\n"
                   "trans A -> B : In?x\ntrans B -> C : x := 1 - x\ntrans C -> A : Out!x\n")
    p2 = parse_vpm("var x : 0..1\nstate A init\nstate C\n"
                   "trans A -> C : In?x ; x := 1 - x\ntrans C -> A : Out!x\n")
    assert equivalent(concretize(p1), concretize(p2), "weak")


def test_state_explosion():
    p = parse_vpm("var q : list(0..5, 6)\nstate A init\ntrans A -> A : In?q\n", validate=False)
    with pytest.raises(StateExplosion):
        concretize(p, max_states=100)


# ---------------------------------------------------------------- operations

def test_vp_parallel_empty():
    b = valued.buf()
    c = concretize(vp_parallel(b, empty_vp()))
    assert equivalent(c, concretize(b), "strong")


def test_separation_merged_co():
    p = vp_parallel(valued.small((3,), 3), valued.large((1, 2), 3))
    merged = [t for t in p.transitions if (t.src, t.dst) == ("⟨A,a⟩", "⟨D,d⟩") and t.op.is_internal]
    assert len(merged) == 1
    text = co_text(merged[0].op)
    assert text == ("mx := max(S) ; y := mx ; S := remove(S, mx) ; L := insert(L, y) ; "
                    "mn := min(L)")


def test_square_meets_buffered_spec():
    sq = concretize(valued.square())
    assert equivalent(sq, concretize(valued.square_spec_buffered()), "weak")
    assert not equivalent(sq, concretize(valued.square_spec()), "weak")


def test_parallel_concretize_commute():
    d, m = valued.dup(), valued.mul()
    d = vp_rename(d, {"Out1": "pass1", "Out2": "pass2"})
    m = vp_rename(m, {"In1": "pass1", "In2": "pass2"})
    lhs = concretize(vp_restrict(vp_parallel(d, m), {"pass1", "pass2"}))
    from procverify.algebra import parallel
    rhs = restrict(parallel(concretize(d), concretize(m)), {"pass1", "pass2"})
    assert equivalent(lhs, rhs, "weak")


def test_choice_conjoins_init():
    p1 = parse_vpm("var x : 0..1\ninit x == 0\nstate A init\ntrans A -> A : Out!x\n")
    p2 = parse_vpm("var y : 0..1\ninit y == 1\nstate B init\ntrans B -> B : Out!y\n")
    c = vp_combine("choice", p1, p2)
    assert str(c.init) in ("x == 0 && y == 1",)


def test_restrict_unused_names():
    b = valued.buf()
    assert vp_restrict(b, {"zzz"}).transitions == b.transitions


@given(st.sampled_from(["In", "Out"]), st.sampled_from(["A", "Out", "C"]))
def test_rename_commutes_with_concretize(old, new):
    b = valued.buf()
    lhs = concretize(vp_rename(b, {old: new}))
    rhs = rename(concretize(b), {old: new})
    assert equivalent(lhs, rhs, "strong")


def test_variable_clash_renamed():
    p = vp_parallel(valued.buf(), valued.buf())
    assert len(set(p.var_names)) == 2


def test_vp_combine_reports_clash():
    with pytest.raises(VariableClash):
        vp_combine("parallel", valued.buf(), valued.buf(), on_clash="error")


# ---------------------------------------------------------------- invariants and certificates

def test_invariants():
    b1 = valued.buffer_reduced(1)
    assert invariant_holds(b1, parse_expr("true"))
    v = invariant_holds(b1, parse_expr("k == 0"))
    assert not v and "In?f" in v.witness["op"]
    chain = valued.buffer_chain(1, 1)
    names = chain.var_names
    k1, k2 = [n for n in names if n.startswith("k")]
    q1, q2 = [n for n in names if n.startswith("q")]
    inv = parse_expr(f"0 <= {k1} && {k1} <= 1 && len({q1}) == {k1} && "
                     f"0 <= {k2} && {k2} <= 1 && len({q2}) == {k2}")
    assert invariant_holds(chain, inv)


def test_buffer1_certificate():
    mu = {("A", "a"): parse_expr("k == 0 && q == []"), ("A", "b"): parse_expr("k == 1 && q == [x]")}
    assert verify_mu_certificate(valued.buffer_reduced(1), valued.buf(), mu)
    bad = verify_mu_certificate(valued.buffer_reduced(1), valued.buf(), {})
    assert not bad and "condition 1" in bad.reason


def test_abp_certificate():
    mu = {k: parse_expr(v) for k, v in protocols.abp_certificate_mu().items()}
    assert verify_mu_certificate(protocols.spec_buf(), protocols.abp_reduced(), mu)
    mu[("b", "j")] = parse_expr("s == r")
    v = verify_mu_certificate(protocols.spec_buf(), protocols.abp_reduced(), mu)
    assert not v


def test_certificate_implies_equivalence():
    assert equivalent(concretize(protocols.spec_buf()), concretize(protocols.abp_reduced()), "weak")
    assert equivalent(concretize(valued.buffer_reduced(1)), concretize(valued.buf()), "weak")


# ---------------------------------------------------------------- reduction

def test_buffer_reduces_to_two_loops():
    for n in (1, 2, 3):
        r = reduce(valued.buffer(n))
        target = valued.buffer_reduced(n)
        assert len(r.states) == 1
        assert sorted(co_text(t.op) for t in r.transitions) == \
            sorted(co_text(t.op) for t in target.transitions)


def test_reduce_noop():
    b = valued.buf()
    assert reduce(b) == b


def test_glue_guards():
    p = parse_vpm("var x : 0..1\nstate A init\ntrans A -> A : [x == 0] ; Out!x\n"
                  "trans A -> A : [!(x == 0)] ; Out!x\n")
    r = reduce(p, rules=["R2"])
    assert len(r.transitions) == 1
    assert equivalent(concretize(r), concretize(p), "weak")


def test_inessential_assignment_removed():
    p = parse_vpm("var x : 0..1\nvar junk : 0..1\nstate A init\n"
                  "trans A -> A : In?x ; junk := x\ntrans A -> A : Out!x\n")
    assert essential_vars(p) == {"x"}
    r = reduce(p, rules=["R3"])
    assert all("junk" not in co_text(t.op) for t in r.transitions)


@st.composite
def small_vps(draw):
    n = draw(st.integers(1, 4))
    lines = ["var x : 0..2", "var b : bool"] + [f"state S{i}" + (" init" if i == 0 else "")
                                                for i in range(n)]
    ops = ["x := addm(x, 1, 3)", "b := !b", "a!x", "c?x", "d!", "x := 0"]
    guards = ["true", "b", "!b", "x == 1", "x != 2"]
    for _ in range(draw(st.integers(0, 6))):
        s, t = draw(st.integers(0, n - 1)), draw(st.integers(0, n - 1))
        body = draw(st.lists(st.sampled_from(ops), max_size=2))
        comm = [o for o in body if "!" in o or "?" in o]
        for extra in comm[1:]:
            body.remove(extra)
        lines.append(f"trans S{s} -> S{t} : " + " ; ".join([f"[{draw(st.sampled_from(guards))}]"] + body))
    return parse_vpm("\n".join(lines) + "\n")


@settings(max_examples=150)
@given(small_vps())
def test_reduction_soundness(p):
    assert equivalent(concretize(reduce(p)), concretize(p), "weak")


def test_essential_vars_least_fixpoint():
    p = parse_vpm("var x : 0..1\nvar y : 0..1\nvar z : 0..1\nstate A init\n"
                  "trans A -> A : y := x ; z := y\ntrans A -> A : [z == 1] ; Out!x\n")
    assert essential_vars(p) == {"x", "y", "z"}
    p2 = parse_vpm("var x : 0..1\nvar y : 0..1\nvar z : 0..1\nstate A init\n"
                   "trans A -> A : y := x ; z := y\ntrans A -> A : Out!x\n")
    assert essential_vars(p2) == {"x"}


# ---------------------------------------------------------------- Petri nets

def test_petri_single_token():
    net = PetriNet(("p",), (("t", {"p"}, set()),), {"p": 1})
    c = concretize(petri_to_process(net))
    moves = [(s, a) for s, a, _ in c.transitions]
    assert len(c.states) == 2 and moves == [(INIT_STATE, tau)]


def test_petri_no_transitions():
    net = PetriNet(("p",), (), {"p": 2})
    c = concretize(petri_to_process(net))
    assert not c.transitions


def test_petri_capacity():
    net = PetriNet(("p",), (), {"p": 5})
    with pytest.raises(CapacityTooSmall):
        petri_to_process(net, cap=3)


def _reachable_markings(net, cap):
    seen, todo = {net.marking0}, [net.marking0]
    while todo:
        m = todo.pop()
        for name in net.enabled(m):
            m2 = net.fire(m, name)
            if max(m2) <= cap and m2 not in seen:
                seen.add(m2)
                todo.append(m2)
    return seen


def test_petri_matches_direct_simulation():
    from procverify.models.simulate import simulate
    net = valued.producer_consumer_net()
    p = petri_to_process(net, 3)
    order = [f"x_{pl}" for pl in net.places]
    for seed in range(5):
        run = simulate(p, 10, seed=seed)
        assert run.steps == 10
        # replay: each step fires one enabled net transition
        m = net.marking0
        sim = simulate(p, 0, seed=seed)
        for k in range(1, 11):
            after = tuple(simulate(p, k, seed=seed).sigma[v] for v in order)
            assert after in {net.fire(m, t) for t in net.enabled(m)}
            m = after
        assert sim.sigma == dict(zip(order, net.marking0))
    assert len(concretize(p).states) - 1 == len(_reachable_markings(net, 3))


# ---------------------------------------------------------------- flowcharts

def test_buffer_flowchart_points():
    p = valued.buffer(1)
    assert len(p.states) == 9


def test_trivial_flowchart():
    fc = Flowchart((("x", IntRange(0, 1)),), {"st": start(parse_expr("x == 0")), "h": HALT})
    fc.edge("A", "st", "h")
    p = flowchart_to_process(fc)
    assert len(p.states) == 1 and not p.transitions


def test_sender_flowchart():
    p = flowchart_to_process(protocols.simple_sender_flowchart())
    assert len(p.states) == 4
    assert equivalent(concretize(p), concretize(protocols.simple_sender()), "strong")


def test_malformed_flowchart():
    fc = Flowchart((), {"st": start(parse_expr("true"))})
    with pytest.raises(MalformedFlowchart):
        flowchart_to_process(fc)
