"""Value-passing examples: buffers, separation of sets, squaring, a Petri net."""
from __future__ import annotations

from ..errors import BadParams
from ..syntax.vexpr import parse_expr, parse_type
from ..syntax.vpm import parse_vpm
from ..vp import (Flowchart, IntRange, ListT, PetriNet, VpProcess, flowchart_to_process,
                  petri_to_process, vp_parallel, vp_rename, vp_restrict)
from ..vp.flowchart import CHOICE, JOIN, assign, cond, recv, send, start


def _mes(values) -> str:
    """Type text for a message domain given as ints or symbol names."""
    values = list(values)
    if not values:
        raise BadParams("message domain must not be empty")
    if all(isinstance(v, int) for v in values):
        lo, hi = min(values), max(values)
        if sorted(values) != list(range(lo, hi + 1)):
            raise BadParams("integer message domains must be contiguous")
        return f"{lo}..{hi}"
    return "{" + ", ".join(str(v) for v in values) + "}"


MES = ("m0", "m1")


# ---------------------------------------------------------------- buffers

def buf(mes=MES, var: str = "x") -> VpProcess:
    """One-place buffer ``a -In?x-> b -Out!x-> a``."""
    return parse_vpm(f"""
var {var} : {_mes(mes)}
state a init
state b
trans a -> b : In?{var}
trans b -> a : Out!{var}
""")


def buffer_flowchart(n: int = 1, mes=MES) -> Flowchart:
    """The buffer flowchart with capacity ``n`` and queue ``q`` of length ``k``."""
    if not isinstance(n, int) or n < 1:
        raise BadParams("buffer capacity must be a positive integer")
    m = parse_type(_mes(mes))
    vars_ = (("n", IntRange(n, n)), ("q", ListT(m, n)), ("k", IntRange(0, n)), ("f", m))
    e = parse_expr
    nodes = {
        "st": start(e("n > 0 && q == [] && k == 0")),
        "j": JOIN,
        "c1": cond(e("k < n")),
        "c2": cond(e("k > 0")),
        "ch": CHOICE,
        "in": recv("In", "f"),
        "out": send("Out", e("hd(q)")),
        "a1": assign("q", e("q ++ [f]")),
        "a2": assign("k", e("k + 1")),
        "a3": assign("q", e("tl(q)")),
        "a4": assign("k", e("k - 1")),
    }
    fc = Flowchart(vars_, nodes)
    for edge in [("A", "st", "j"), ("B", "j", "c1"), ("C", "c1", "c2", "+"), ("E", "c1", "out", "-"),
                 ("F", "c2", "ch", "+"), ("D", "c2", "in", "-"), ("G", "ch", "in"), ("H", "ch", "out"),
                 ("L", "in", "a1"), ("O", "a1", "a2"), ("K", "a2", "j"), ("M", "out", "a3"),
                 ("P", "a3", "a4"), ("N", "a4", "j")]:
        fc.edge(*edge)
    return fc


def buffer(n: int = 1, mes=MES) -> VpProcess:
    """Buffer of capacity ``n`` translated from its flowchart (not reduced)."""
    return flowchart_to_process(buffer_flowchart(n, mes))


def buffer_reduced_text(n: int = 1, mes=MES) -> str:
    return f"""var n : {n}..{n}
var q : list({_mes(mes)}, {n})
var k : 0..{n}
var f : {_mes(mes)}
init n > 0 && q == [] && k == 0
state A init
trans A -> A : [k < n] ; In?f ; q := q ++ [f] ; k := k + 1
trans A -> A : [k > 0] ; Out!hd(q) ; q := tl(q) ; k := k - 1
"""


def buffer_reduced(n: int = 1, mes=MES) -> VpProcess:
    """The single-state two-loop buffer."""
    return parse_vpm(buffer_reduced_text(n, mes))


def chain(p1: VpProcess, p2: VpProcess, link: str = "pass",
          inp: str = "In", outp: str = "Out") -> VpProcess:
    """``(p1[link/Out] | p2[link/In]) \\ {link}``."""
    left = vp_rename(p1, {outp: link})
    right = vp_rename(p2, {inp: link})
    return vp_restrict(vp_parallel(left, right), {link})


def buffer_chain(n1: int = 1, n2: int = 1, mes=MES, reduced: bool = True) -> VpProcess:
    make = buffer_reduced if reduced else buffer
    return chain(make(n1, mes), make(n2, mes))


# ---------------------------------------------------------------- separation of sets

def _set_lit(xs) -> str:
    return "[" + ", ".join(str(x) for x in sorted(xs)) + "]"


def _check_set(xs, what):
    xs = list(xs)
    if not xs:
        raise BadParams(f"{what} must not be empty")
    if any(not isinstance(x, int) or not 0 <= x <= 5 for x in xs):
        raise BadParams(f"{what} must hold integers in 0..5")
    if len(set(xs)) != len(xs):
        raise BadParams(f"{what} has repeated elements")
    return sorted(xs)


def small(u, cap: int) -> VpProcess:
    u = _check_set(u, "U")
    return parse_vpm(f"""
var S : list(0..5, {cap})
var mx : 0..5
var x : 0..5
init S == {_set_lit(u)}
state A init
state D
state B
state C
trans A -> D : mx := max(S) ; alpha!mx ; S := remove(S, mx)
trans D -> B : beta?x ; S := insert(S, x) ; mx := max(S)
trans B -> C : [x >= mx]
trans B -> A : [x < mx]
""")


def large(v, cap: int) -> VpProcess:
    v = _check_set(v, "V")
    return parse_vpm(f"""
var L : list(0..5, {cap})
var mn : 0..5
var y : 0..5
init L == {_set_lit(v)}
state a init
state d
state b
state c
trans a -> d : alpha?y ; L := insert(L, y) ; mn := min(L)
trans d -> b : beta!mn ; L := remove(L, mn) ; mn := min(L)
trans b -> c : [y <= mn]
trans b -> a : [y > mn]
""")


def separation(u=(3,), v=(1, 2)) -> VpProcess:
    """``(Small | Large) \\ {alpha, beta}``; ``S`` ends with the small half."""
    u, v = _check_set(u, "U"), _check_set(v, "V")
    if set(u) & set(v):
        raise BadParams("U and V must be disjoint")
    cap = len(u) + len(v)
    return vp_restrict(vp_parallel(small(u, cap), large(v, cap)), {"alpha", "beta"})


# ---------------------------------------------------------------- squaring

def _vals(vals) -> str:
    return _mes(vals)


def mul(vals=(1, 2)) -> VpProcess:
    t = _vals(vals)
    return parse_vpm(f"""
var x : {t}
var y : {t}
state A init
state B
state C
trans A -> B : In1?x
trans B -> C : In2?y
trans C -> A : Out!x * y
""")


def dup(vals=(1, 2)) -> VpProcess:
    return parse_vpm(f"""
var z : {_vals(vals)}
state a init
state b
state c
trans a -> b : In?z
trans b -> c : Out1!z
trans c -> a : Out2!z
""")


def square(vals=(1, 2)) -> VpProcess:
    """``(Dup[pass1/Out1, pass2/Out2] | Mul[pass1/In1, pass2/In2]) \\ {pass1, pass2}``."""
    d = vp_rename(dup(vals), {"Out1": "pass1", "Out2": "pass2"})
    m = vp_rename(mul(vals), {"In1": "pass1", "In2": "pass2"})
    return vp_restrict(vp_parallel(d, m), {"pass1", "pass2"})


def square_spec(vals=(1, 2)) -> VpProcess:
    return parse_vpm(f"""
var z : {_vals(vals)}
state s init
state t
trans s -> t : In?z
trans t -> s : Out!z * z
""")


def square_spec_buffered(vals=(1, 2)) -> VpProcess:
    """``(Buf[pass/Out] | Square_Spec[pass/In]) \\ {pass}``."""
    return chain(buf(vals, var="w"), square_spec(vals))


# ---------------------------------------------------------------- Petri nets

def producer_consumer_net() -> PetriNet:
    return PetriNet(
        places=("ready", "full", "empty", "wait"),
        transitions=(("produce", {"ready", "empty"}, {"full", "ready"}),
                     ("consume", {"full", "wait"}, {"empty", "wait"})),
        marking0={"ready": 1, "empty": 2, "wait": 1},
    )


def petri_example(cap: int = 3) -> VpProcess:
    return petri_to_process(producer_consumer_net(), cap)


__all__ = ["MES", "buf", "buffer", "buffer_flowchart", "buffer_reduced", "buffer_reduced_text",
           "buffer_chain", "chain", "small", "large", "separation", "mul", "dup", "square",
           "square_spec", "square_spec_buffered", "producer_consumer_net", "petri_example"]
