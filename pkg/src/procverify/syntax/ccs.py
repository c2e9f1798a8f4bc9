"""The ``.ccs`` format: ``agent Name = expr ;`` definitions."""
from __future__ import annotations

import re

from ..calc import NIL, Choice, NameRef, Par, Prefix, RecDef, Rename, Restrict, name_refs, to_text
from ..errors import ParseError, UndefinedName
from ..lts import Lts, inp, out, tau
from .lexer import Stream, tokenize


def parse_ccs(text: str) -> RecDef:
    s = Stream(tokenize(text))
    eqs = []
    seen = set()
    while not s.at_kind("eof"):
        t = s.cur
        if not (t.kind == "ident" and t.text == "agent"):
            s.fail("expected 'agent'")
        s.next()
        name_tok = s.expect_kind("ident", "an agent name")
        if name_tok.text in seen:
            raise ParseError(f"agent {name_tok.text} defined twice", name_tok.line, name_tok.col)
        seen.add(name_tok.text)
        s.expect("=")
        e = _choice(s)
        s.expect(";")
        eqs.append((name_tok.text, e))
    defined = {n for n, _ in eqs}
    for n, e in eqs:
        missing = name_refs(e) - defined
        if missing:
            raise UndefinedName(f"agent {sorted(missing)[0]} used in {n} is not defined")
    return RecDef(tuple(eqs))


def parse_ccs_expr(text: str):
    s = Stream(tokenize(text))
    e = _choice(s)
    if not s.at_kind("eof"):
        s.fail("unexpected trailing input")
    return e


def _choice(s):
    e = _par(s)
    while s.at("+"):
        s.next()
        e = Choice(e, _par(s))
    return e


def _par(s):
    e = _prefix(s)
    while s.at("|"):
        s.next()
        e = Par(e, _prefix(s))
    return e


def _is_action_start(s):
    t = s.cur
    if t.kind != "ident":
        return False
    if t.text == "tau":
        return s.peek().text == "."
    return s.peek().text in ("?", "!")


def _prefix(s):
    if _is_action_start(s):
        t = s.next()
        if t.text == "tau":
            a = tau
        else:
            a = inp(t.text) if s.next().text == "?" else out(t.text)
        s.expect(".")
        return Prefix(a, _prefix(s))
    return _postfix(s)


def _postfix(s):
    e = _atom(s)
    while True:
        if s.at("\\"):
            s.next()
            s.expect("{")
            names = []
            if not s.at("}"):
                names.append(s.expect_kind("ident", "a name").text)
                while s.at(","):
                    s.next()
                    names.append(s.expect_kind("ident", "a name").text)
            s.expect("}")
            e = Restrict(e, frozenset(names))
        elif s.at("["):
            s.next()
            pairs = []
            while True:
                new = s.expect_kind("ident", "a name").text
                s.expect("/")
                old = s.expect_kind("ident", "a name").text
                pairs.append((old, new))
                if not s.at(","):
                    break
                s.next()
            s.expect("]")
            e = Rename(e, tuple(pairs))
        else:
            return e


def _atom(s):
    t = s.cur
    if t.kind == "int" and t.text == "0":
        s.next()
        return NIL
    if t.kind == "ident" and t.text != "tau":
        s.next()
        return NameRef(t.text)
    if s.at("("):
        s.next()
        e = _choice(s)
        s.expect(")")
        return e
    s.fail("expected a process expression")


def format_ccs(rd: RecDef) -> str:
    return "".join(f"agent {n} = {to_text(e)};\n" for n, e in rd.equations)


_IDENT = re.compile(r"[^A-Za-z0-9_]")


def lts_to_recdef(p: Lts, prefix: str = "S") -> tuple:
    """One agent per state; returns ``(RecDef, name of the initial agent)``."""
    names = {}
    used = set()
    for s in p.states:
        base = prefix + "_" + _IDENT.sub("_", s)
        n, k = base, 1
        while n in used:
            n, k = f"{base}_{k}", k + 1
        used.add(n)
        names[s] = n
    if any(a.valued for _, a, _ in p.transitions):
        raise ValueError("valued actions have no text form")
    eqs = []
    for s in p.states:
        e = NIL
        for a, t in p.out_of(s):
            term = Prefix(a, NameRef(names[t]))
            e = term if e is NIL else Choice(e, term)
        eqs.append((names[s], e))
    return RecDef(tuple(eqs)), names[p.initial]
