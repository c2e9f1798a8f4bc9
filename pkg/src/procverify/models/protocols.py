"""Communication protocols over unreliable channels.

One-way models (simple protocol, alternating bit) follow the agent diagrams
literally and are small enough to concretize.  Two-way models (ABP-2,
go-back-n, selective repeat) are simulation fixtures: every agent sends on
``tx`` and receives on ``rx`` and talks to its peer through a pair of FIFO
channels.
"""
from __future__ import annotations

import itertools

from ..errors import BadParams
from ..syntax.vpm import parse_vpm
from ..vp import (Flowchart, VpProcess, flowchart_to_process, rename_variables, vp_parallel_all,
                  vp_rename, vp_restrict)
from ..vp.flowchart import CHOICE, JOIN, cond, recv, send, start
from ..vp.expr import TRUE
from ..syntax.vexpr import parse_expr


def _packets(k) -> str:
    if not isinstance(k, int) or k < 1:
        raise BadParams("packet domain size must be a positive integer")
    return f"0..{k - 1}"


class _Text:
    """Accumulates a ``.vpm`` document; ``chain`` threads fresh states."""

    def __init__(self):
        self.head = []
        self.states = []
        self.trans = []
        self._fresh = itertools.count(1)

    def var(self, name, typ):
        self.head.append(f"var {name} : {typ}")

    def init(self, expr):
        self.head.append(f"init {expr}")

    def state(self, name):
        if name not in self.states:
            self.states.append(name)
        return name

    def t(self, src, dst, ops):
        self.state(src)
        self.state(dst)
        self.trans.append(f"trans {src} -> {dst} : {ops}")

    def chain(self, src, dst, *steps):
        """``src -steps[0]-> _1 -steps[1]-> ... -> dst``."""
        cur = src
        for k, ops in enumerate(steps):
            nxt = dst if k == len(steps) - 1 else self.state(f"_{next(self._fresh)}")
            self.t(cur, nxt, ops)
            cur = nxt

    def text(self):
        lines = list(self.head)
        lines += [f"state {s}" + (" init" if k == 0 else "") for k, s in enumerate(self.states)]
        return "\n".join(lines + self.trans) + "\n"

    def build(self) -> VpProcess:
        return parse_vpm(self.text())


# ---------------------------------------------------------------- simple protocol

def simple_sender(packets: int = 2) -> VpProcess:
    return parse_vpm(f"""
var x : {_packets(packets)}
state A init
state B
state C
state D
trans A -> B : In?x
trans B -> C : C!x
trans C -> D : start!
trans D -> B : timeout?
trans D -> A : C?
""")


def simple_sender_flowchart(packets: int = 2) -> Flowchart:
    """The sender drawn as a flowchart; it translates to :func:`simple_sender`."""
    from ..syntax.vexpr import parse_type
    nodes = {
        "st": start(TRUE), "j1": JOIN, "in": recv("In", "x"), "j2": JOIN,
        "c": send("C", parse_expr("x")), "go": send("start"), "ch": CHOICE,
        "to": recv("timeout"), "ack": recv("C"),
    }
    fc = Flowchart((("x", parse_type(_packets(packets))),), nodes)
    for e in [("S", "st", "j1"), ("A", "j1", "in"), ("X", "in", "j2"), ("B", "j2", "c"),
              ("C", "c", "go"), ("D", "go", "ch"), ("E", "ch", "to"), ("F", "ch", "ack"),
              ("G", "to", "j2"), ("H", "ack", "j1")]:
        fc.edge(*e)
    return fc


def timer() -> VpProcess:
    return parse_vpm("""
var t : 0..1
init t == 0
state T init
trans T -> T : start? ; t := 1
trans T -> T : [t == 1] ; timeout! ; t := 0
""")


def simple_channel(packets: int = 2) -> VpProcess:
    """One frame at a time in either direction; frames are lost or distorted."""
    return parse_vpm(f"""
var y : distorted({_packets(packets)})
state al init
state be
state ga
trans al -> be : S?y
trans be -> al : R!y
trans be -> al : [true]
trans be -> al : R!'*'
trans al -> ga : R?
trans ga -> al : S!
trans ga -> al : [true]
""")


def simple_receiver(packets: int = 2) -> VpProcess:
    return parse_vpm(f"""
var f : distorted({_packets(packets)})
state a init
state b
state c
trans a -> b : C?f
trans b -> a : [f == '*']
trans b -> c : [f != '*'] ; Out!f
trans c -> a : C!
""")


def _protocol(sender, tmr, channel, receiver) -> VpProcess:
    parts = [vp_rename(sender, {"C": "S"}), tmr, channel, vp_rename(receiver, {"C": "R"})]
    return vp_restrict(vp_parallel_all(parts), {"S", "R", "start", "timeout"})


def simple_protocol(packets: int = 2) -> VpProcess:
    """``(Sender[S/C] | Timer | Channel | Receiver[R/C]) \\ {S, R, start, timeout}``."""
    return _protocol(simple_sender(packets), timer(), simple_channel(packets), simple_receiver(packets))


def spec_buf(packets: int = 2, var: str = "z") -> VpProcess:
    """Protocol specification: a one-place buffer over the packet domain."""
    return parse_vpm(f"""
var {var} : {_packets(packets)}
state a init
state b
trans a -> b : In?{var}
trans b -> a : Out!{var}
""")


# ---------------------------------------------------------------- alternating bit

def abp_sender(packets: int = 2) -> VpProcess:
    return parse_vpm(f"""
var x : {_packets(packets)}
var s : 0..1
var z : distorted(0..1)
init s == 0
state A init
state B
state C
state D
state E
trans A -> B : In?x
trans B -> C : C!(x, s)
trans C -> D : start!
trans D -> B : timeout?
trans D -> E : C?z
trans E -> A : [z != '*' && z == s] ; s := 1 - s
trans E -> B : [z == '*' || z != s]
""")


def abp_channel(packets: int = 2) -> VpProcess:
    return parse_vpm(f"""
var y : distorted(({_packets(packets)}, 0..1))
var u : distorted(0..1)
state al init
state be
state ga
trans al -> be : S?y
trans be -> al : R!y
trans be -> al : [true]
trans be -> al : R!'*'
trans al -> ga : R?u
trans ga -> al : S!u
trans ga -> al : [true]
trans ga -> al : S!'*'
""")


def abp_receiver(packets: int = 2) -> VpProcess:
    return parse_vpm(f"""
var f : distorted(({_packets(packets)}, 0..1))
var r : 0..1
init r == 0
state a init
state b
state c
trans a -> b : C?f
trans b -> a : [f == '*']
trans b -> c : [f != '*' && get(f, 1) != r]
trans b -> c : [f != '*' && get(f, 1) == r] ; Out!get(f, 0) ; r := 1 - r
trans c -> a : C!(1 - r)
""")


def abp(packets: int = 2) -> VpProcess:
    return _protocol(abp_sender(packets), timer(), abp_channel(packets), abp_receiver(packets))


def abp_reduced_text(packets: int = 2) -> str:
    return f"""var x : {_packets(packets)}
var s : 0..1
var r : 0..1
init s == 0 && r == 0
state i init
state j
trans i -> j : In?x
trans j -> i : [s != r] ; s := 1 - s
trans j -> j : [s != r]
trans j -> i : [s == r] ; Out!x ; s := 1 - s ; r := 1 - r
trans j -> j : [s == r] ; Out!x ; r := 1 - r
"""


def abp_reduced(packets: int = 2) -> VpProcess:
    """The alternating bit protocol after reduction: two control states."""
    return parse_vpm(abp_reduced_text(packets))


def abp_certificate_mu():
    """``mu`` between :func:`spec_buf` (left, variable ``z``) and
    :func:`abp_reduced` (right), as text.  Keys are ``(left, right)`` states."""
    return {("a", "i"): "s == r", ("b", "i"): "false",
            ("a", "j"): "s != r", ("b", "j"): "s == r && x == z"}


# ---------------------------------------------------------------- two-way fixtures

def fifo_channel(frame: str, cap: int = 2, loss: bool = True) -> VpProcess:
    """FIFO of at most ``cap`` frames from ``S`` to ``R``.

    Frames arriving at a full channel are dropped; with ``loss`` any queued
    frame may vanish.  The head may be delivered distorted.
    """
    if not isinstance(cap, int) or cap < 1:
        raise BadParams("channel capacity must be a positive integer")
    lines = [f"var q : list(distorted({frame}), {cap})",
             f"var y : distorted({frame})",
             "init q == []",
             "state C init",
             f"trans C -> C : [len(q) < {cap}] ; S?y ; q := q ++ [y]",
             f"trans C -> C : [len(q) == {cap}] ; S?y",
             "trans C -> C : [len(q) > 0] ; R!hd(q) ; q := tl(q)",
             "trans C -> C : [len(q) > 0] ; R!'*' ; q := tl(q)"]
    if loss:
        lines.append("trans C -> C : [len(q) > 0] ; q := tl(q)")
    return parse_vpm("\n".join(lines) + "\n")


def _suffix(p: VpProcess, k: int, ports) -> VpProcess:
    p = rename_variables(p, {v: f"{v}_{k}" for v in p.var_names})
    return vp_rename(p, {n: f"{n}{k}" for n in ports})


def _duplex(agent_of, timers_of, frame: str, ports, cap: int, loss: bool) -> VpProcess:
    """Two agents, their timers and two channels, with internal names hidden.

    Agent ``k`` keeps the open ports ``In{k}`` and ``Out{k}``.
    """
    parts = []
    hidden = set()
    for k in (1, 2):
        a = _suffix(agent_of(), k, ports)
        a = vp_rename(a, {f"tx{k}": f"S{k}", f"rx{k}": f"R{k}"})
        parts.append(a)
        for tm in timers_of():
            parts.append(_suffix(tm, k, ports))
        hidden |= {f"{n}{k}" for n in ports if n not in ("In", "Out", "tx", "rx")}
        hidden |= {f"S{k}", f"R{k}"}
    for src, dst in ((1, 2), (2, 1)):
        ch = fifo_channel(frame, cap, loss)
        ch = rename_variables(ch, {"q": f"q{src}{dst}", "y": f"y{src}{dst}"})
        parts.append(vp_rename(ch, {"S": f"S{src}", "R": f"R{dst}"}))
    return vp_restrict(vp_parallel_all(parts), hidden)


def abp2_agent(packets: int = 2) -> VpProcess:
    """Duplex alternating bit agent: frames are ``(info, seq, ack)``."""
    P = _packets(packets)
    return parse_vpm(f"""
var x : {P}
var s : 0..1
var r : 0..1
var f : distorted(({P}, 0..1, 0..1))
init s == 0 && r == 0
state A init
state B
state C
state D
state F
state G
trans A -> B : In?x
trans B -> C : tx!(x, s, 1 - r)
trans C -> D : start!
trans D -> B : timeout?
trans D -> F : rx?f
trans F -> B : [f == '*']
trans F -> G : [f != '*' && get(f, 1) == r] ; Out!get(f, 0) ; r := 1 - r
trans F -> G : [f != '*' && get(f, 1) != r]
trans G -> A : [get(f, 2) == s] ; s := 1 - s
trans G -> B : [get(f, 2) != s]
""")


def abp2(packets: int = 2, cap: int = 1, loss: bool = True) -> VpProcess:
    P = _packets(packets)
    return _duplex(lambda: abp2_agent(packets), lambda: [timer()], f"({P}, 0..1, 0..1)",
                   ("In", "Out", "tx", "rx", "start", "timeout"), cap, loss)


def _check_window(n):
    if n not in (2, 4):
        raise BadParams("sequence space n must be 2 or 4")


def gbn_agent(n: int = 4, packets: int = 2) -> VpProcess:
    """Go-back-n agent; window ``n - 1``; one timer per sequence number."""
    _check_window(n)
    P = _packets(packets)
    d = _Text()
    for name, typ in [("x", f"array({P}, {n})"), ("s", f"0..{n - 1}"), ("b", f"0..{n - 1}"),
                      ("r", f"0..{n - 1}"), ("w", f"0..{n - 1}"), ("i", f"0..{n}"),
                      ("j", f"0..{n - 1}"), ("en", "bool"),
                      ("f", f"distorted(({P}, 0..{n - 1}, 0..{n - 1}))")]:
        d.var(name, typ)
    d.init("s == 0 && b == 0 && r == 0 && w == 0 && en == true")
    d.state("M")
    frame = f"tx!(x[s], s, subm(r, 1, {n}))"
    d.chain("M", "E", "[en] ; In?x[s]", frame, f"start!s ; s := addm(s, 1, {n}) ; w := w + 1")
    d.t("M", "R", "timeout?j ; s := b ; i := 1")
    d.chain("R", "R", "[i <= w]", frame, f"start!s ; s := addm(s, 1, {n}) ; i := i + 1")
    d.t("R", "E", "[i > w]")
    d.t("M", "F", "rx?f")
    d.t("F", "E", "[f == '*']")
    d.t("F", "K", f"[f != '*' && get(f, 1) == r] ; Out!get(f, 0) ; r := addm(r, 1, {n})")
    d.t("F", "K", "[f != '*' && get(f, 1) != r]")
    d.t("K", "K", f"[between(b, get(f, 2), s)] ; w := w - 1 ; stop!b ; b := addm(b, 1, {n})")
    d.t("K", "E", "[!between(b, get(f, 2), s)]")
    d.t("E", "M", f"en := w < {n - 1}")
    return d.build()


def timers(count: int) -> VpProcess:
    """``count`` timers addressed by index on ``start``, ``stop`` and ``timeout``."""
    lines = [f"var t : array(bool, {count})", f"var k : 0..{count - 1}",
             "init t == (" + ", ".join(["false"] * count) + ("," if count == 1 else "") + ")",
             "state T init",
             "trans T -> T : start?k ; t[k] := true",
             "trans T -> T : stop?k ; t[k] := false"]
    for j in range(count):
        lines.append(f"trans T -> T : [t[{j}]] ; timeout!{j} ; t[{j}] := false")
    return parse_vpm("\n".join(lines) + "\n")


def ack_timer() -> VpProcess:
    return parse_vpm("""
var at : bool
init at == false
state T init
trans T -> T : start_ack_timer? ; at := true
trans T -> T : stop_ack_timer? ; at := false
trans T -> T : [at] ; ack_timeout! ; at := false
""")


def gbn(n: int = 4, packets: int = 2, cap: int = 2, loss: bool = True) -> VpProcess:
    _check_window(n)
    P = _packets(packets)
    return _duplex(lambda: gbn_agent(n, packets), lambda: [timers(n)],
                   f"({P}, 0..{n - 1}, 0..{n - 1})",
                   ("In", "Out", "tx", "rx", "start", "stop", "timeout"), cap, loss)


def sr_agent(n: int = 4, packets: int = 2) -> VpProcess:
    """Selective-repeat agent; window ``m = n / 2``; frames ``(kind, info, seq, ack)``."""
    _check_window(n)
    m = n // 2
    P = _packets(packets)
    d = _Text()
    for name, typ in [("x", f"array({P}, {m})"), ("y", f"array({P}, {m})"),
                      ("arrived", f"array(bool, {m})"), ("s", f"0..{n - 1}"),
                      ("b", f"0..{n - 1}"), ("r", f"0..{n - 1}"), ("u", f"0..{n - 1}"),
                      ("w", f"0..{m}"), ("k", f"0..{n - 1}"), ("j", f"0..{m - 1}"),
                      ("no_nak", "bool"), ("en", "bool"),
                      ("f", f"distorted(({{data, ack, nak}}, {P}, 0..{n - 1}, 0..{n - 1}))")]:
        d.var(name, typ)
    falses = "(" + ", ".join(["false"] * m) + ("," if m == 1 else "") + ")"
    d.init(f"s == 0 && b == 0 && r == 0 && u == {m} && w == 0 && no_nak == true && en == true"
           f" && arrived == {falses}")
    d.state("M")

    def send(src, dst, kind, seq, pre=None):
        steps = [f"tx!('{kind}', x[{seq}], {seq}, subm(r, 1, {n}))"]
        if kind == "nak":
            steps[0] += " ; no_nak := false"
        if kind == "data":
            steps.append(f"start!({seq} % {m})")
        steps.append("stop_ack_timer!")
        if pre:
            steps.insert(0, pre)
        d.chain(src, dst, *steps)

    send("M", "N", "data", "s", pre="[en] ; In?x[s]")
    d.t("N", "E", f"s := addm(s, 1, {n}) ; w := w + 1")
    d.t("M", "T", f"timeout?j ; k := addm(b, (j - b) % {m}, {n})")
    send("T", "E", "data", "k")
    d.t("M", "A", "ack_timeout?")
    send("A", "E", "ack", "0")
    d.t("M", "F", "rx?f")
    d.t("F", "Z", "[f == '*' && no_nak]")
    send("Z", "E", "nak", "0")
    d.t("F", "E", "[f == '*' && !no_nak]")
    d.t("F", "D", "[f != '*' && get(f, 0) == 'data']")
    d.t("F", "K", "[f != '*' && get(f, 0) != 'data']")
    d.t("D", "Y", "[get(f, 2) != r && no_nak]")
    send("Y", "D2", "nak", "0")
    d.t("D", "D2", "[!(get(f, 2) != r && no_nak)] ; start_ack_timer!")
    d.t("D2", "D3", "[between(r, get(f, 2), u) && !arrived[get(f, 2)]] ; "
                    "arrived[get(f, 2)] := true ; y[get(f, 2)] := get(f, 1)")
    d.t("D2", "K", "[!(between(r, get(f, 2), u) && !arrived[get(f, 2)])]")
    d.chain("D3", "D3", f"[arrived[r]] ; Out!y[r] ; no_nak := true ; arrived[r] := false ; "
                        f"r := addm(r, 1, {n}) ; u := addm(u, 1, {n})", "start_ack_timer!")
    d.t("D3", "K", "[!arrived[r]]")
    d.t("K", "V", f"[get(f, 0) == 'nak' && between(b, addm(get(f, 3), 1, {n}), s)] ; "
                  f"k := addm(get(f, 3), 1, {n})")
    send("V", "L", "data", "k")
    d.t("K", "L", f"[!(get(f, 0) == 'nak' && between(b, addm(get(f, 3), 1, {n}), s))]")
    d.t("L", "L", f"[between(b, get(f, 3), s)] ; w := w - 1 ; stop!(b % {m}) ; b := addm(b, 1, {n})")
    d.t("L", "E", "[!between(b, get(f, 3), s)]")
    d.t("E", "M", f"en := w < {m}")
    return d.build()


def sr(n: int = 4, packets: int = 2, cap: int = 2, loss: bool = True) -> VpProcess:
    _check_window(n)
    P = _packets(packets)
    return _duplex(lambda: sr_agent(n, packets), lambda: [timers(n // 2), ack_timer()],
                   f"({{data, ack, nak}}, {P}, 0..{n - 1}, 0..{n - 1})",
                   ("In", "Out", "tx", "rx", "start", "stop", "timeout", "start_ack_timer",
                    "stop_ack_timer", "ack_timeout"), cap, loss)


__all__ = ["simple_sender", "simple_sender_flowchart", "timer", "simple_channel", "simple_receiver",
           "simple_protocol", "spec_buf", "abp_sender", "abp_channel", "abp_receiver", "abp",
           "abp_reduced", "abp_reduced_text", "abp_certificate_mu", "fifo_channel", "abp2_agent",
           "abp2", "gbn_agent", "gbn", "timers", "ack_timer", "sr_agent", "sr"]
