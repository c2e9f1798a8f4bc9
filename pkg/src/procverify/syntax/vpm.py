"""The ``.vpm`` format for value-passing processes.

Example::

    type mes = {m0, m1}
    var n : 1..1
    var q : list(mes, 1)
    var k : 0..1
    var f : mes
    init n > 0 && q == [] && k == 0
    state A init
    trans A -> A : [k < n] ; In?f ; q := q ++ [f] ; k := k + 1
    trans A -> A as out : [k > 0] ; Out!hd(q) ; q := tl(q) ; k := k - 1
"""
from __future__ import annotations

import re

from ..errors import InvariantViolation, ParseError
from ..vp.expr import TRUE, to_text
from ..vp.ops import Assign, CompositeOp, Guard, In, Out, op_text
from ..vp.process import Transition, VpProcess
from .lexer import Stream, tokenize
from .vexpr import _impl, _type


def _lines(text):
    """Split into logical lines with their starting line numbers."""
    for no, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        yield no, raw


def _stream(raw, no):
    toks = tokenize(raw)
    from .lexer import Token
    return Stream([Token(t.kind, t.text, no, t.col) for t in toks])


def parse_vpm(text: str, validate: bool = True) -> VpProcess:
    named = {}
    vars_ = []
    init = TRUE
    states = []
    initial = None
    trans = []
    for no, raw in _lines(text):
        s = _stream(raw, no)
        kw = s.expect_kind("ident", "a keyword").text
        if kw == "type":
            name = s.expect_kind("ident", "a type name").text
            s.expect("=")
            named[name] = _type(s, named)
        elif kw == "var":
            names = [s.expect_kind("ident", "a variable").text]
            while s.at(","):
                s.next()
                names.append(s.expect_kind("ident", "a variable").text)
            s.expect(":")
            t = _type(s, named)
            vars_.extend((n, t) for n in names)
        elif kw == "init":
            init = _impl(s)
        elif kw == "state":
            name = s.expect_kind("ident", "a state name").text
            if name in states:
                raise ParseError(f"state {name} declared twice", no, 1)
            states.append(name)
            if s.at_kind("ident") and s.cur.text == "init":
                s.next()
                if initial is not None:
                    raise ParseError("two initial states", no, 1)
                initial = name
        elif kw == "trans":
            src = s.expect_kind("ident", "a state").text
            s.expect("->")
            dst = s.expect_kind("ident", "a state").text
            label = ""
            if s.at_kind("ident") and s.cur.text == "as":
                s.next()
                label = s.expect_kind("ident", "a label").text
            s.expect(":")
            ops = _ops(s)
            try:
                co = CompositeOp.of(*ops) if not ops or not isinstance(ops[0], Guard) else CompositeOp(tuple(ops))
            except InvariantViolation as exc:
                raise InvariantViolation(f"line {no}: {exc}") from None
            trans.append(Transition(src, co, dst, label))
        else:
            raise ParseError(f"unknown keyword {kw!r}", no, 1)
        if not s.at_kind("eof"):
            s.fail("unexpected trailing input")
    if not states:
        raise ParseError("no states declared", 1, 1)
    if initial is None:
        initial = states[0]
    for t in trans:
        for x in (t.src, t.dst):
            if x not in states:
                raise ParseError(f"undeclared state {x}", None, None)
    p = VpProcess(tuple(vars_), init, tuple(states), initial, tuple(trans))
    if validate:
        p.validate()
    return p


def _ops(s):
    ops = []
    while True:
        ops.append(_op(s))
        if not s.at(";"):
            return ops
        s.next()


def _op(s):
    if s.at("["):
        s.next()
        e = _impl(s)
        s.expect("]")
        return Guard(e)
    name = s.expect_kind("ident", "an operator").text
    if s.at("?"):
        s.next()
        if not s.at_kind("ident"):
            return In(name)
        var = s.next().text
        idx = None
        if s.at("["):
            s.next()
            idx = _impl(s)
            s.expect("]")
        return In(name, var, idx)
    if s.at("!"):
        s.next()
        if s.at(";") or s.at_kind("eof"):
            return Out(name)
        return Out(name, _impl(s))
    idx = None
    if s.at("["):
        s.next()
        idx = _impl(s)
        s.expect("]")
    s.expect(":=")
    return Assign(name, _impl(s), idx)


def _state_names(states) -> dict:
    """Map state names to identifiers; product names ``⟨a,b⟩`` become ``a_b``."""
    out, used = {}, set()
    for st in states:
        base = re.sub(r"[^A-Za-z0-9_]+", "_", st).strip("_") or "s"
        if base[0].isdigit():
            base = "s" + base
        n, k = base, 1
        while n in used:
            n, k = f"{base}_{k}", k + 1
        used.add(n)
        out[st] = n
    return out


def format_vpm(p: VpProcess) -> str:
    """``.vpm`` text; state names that are not identifiers are rewritten."""
    names = _state_names(p.states)
    lines = []
    for n, t in p.vars:
        lines.append(f"var {n} : {t}")
    lines.append(f"init {to_text(p.init)}")
    for st in p.states:
        lines.append(f"state {names[st]}" + (" init" if st == p.initial else ""))
    for t in p.transitions:
        head = f"trans {names[t.src]} -> {names[t.dst]}" + (f" as {t.label}" if t.label else "")
        lines.append(f"{head} : " + " ; ".join(op_text(op) for op in t.op.ops))
    return "\n".join(lines) + "\n"
