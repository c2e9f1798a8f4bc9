"""Parser for modal formulas: ``T F ~f f & g <a?>f <a!>f <tau>f <tau+>f``."""
from __future__ import annotations

from ..hml import TOP, BOTTOM, And, Diamond, DiamondTauPlus, Not
from ..lts import inp, out, tau
from .lexer import Stream, tokenize


def parse_formula(text: str):
    s = Stream(tokenize(text))
    f = _and(s)
    if not s.at_kind("eof"):
        s.fail("unexpected trailing input")
    return f


def _and(s):
    f = _unary(s)
    while s.at("&"):
        s.next()
        f = And(f, _unary(s))
    return f


def _unary(s):
    if s.at("~"):
        s.next()
        return Not(_unary(s))
    if s.at("<"):
        s.next()
        name = s.expect_kind("ident", "an action").text
        if name == "tau":
            if s.at("+"):
                s.next()
                s.expect(">")
                arg = _unary(s)
                try:
                    return DiamondTauPlus(arg)
                except ValueError as exc:
                    s.fail(str(exc))
            a = tau
        elif s.at("?"):
            s.next()
            a = inp(name)
        elif s.at("!"):
            s.next()
            a = out(name)
        else:
            s.fail("expected '?' or '!'")
        s.expect(">")
        return Diamond(a, _unary(s))
    t = s.cur
    if t.kind == "ident" and t.text == "T":
        s.next()
        return TOP
    if t.kind == "ident" and t.text == "F":
        s.next()
        return BOTTOM
    if s.at("("):
        s.next()
        f = _and(s)
        s.expect(")")
        return f
    s.fail("expected a formula")
