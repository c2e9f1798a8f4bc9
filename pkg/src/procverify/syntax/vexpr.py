"""Parser for value expressions and type expressions."""
from __future__ import annotations

from ..errors import ParseError, VpTypeError
from ..vp.expr import OPS, App, Lit, Var
from ..vp.types import BOOL, ArrayT, Distorted, Enum, IntRange, ListT, TupleT, VList
from .lexer import Stream, tokenize

_CMP = ("==", "!=", "<", "<=", ">", ">=")
_FUNCS = {name for name in OPS if name.isidentifier()} - {"tuple", "single", "idx"}


def parse_expr(text_or_stream):
    s = text_or_stream if isinstance(text_or_stream, Stream) else Stream(tokenize(text_or_stream))
    e = _impl(s)
    if not isinstance(text_or_stream, Stream) and not s.at_kind("eof"):
        s.fail("unexpected trailing input")
    return e


def _mk(s, op, *args):
    try:
        return App(op, args)
    except VpTypeError as exc:
        s.fail(str(exc))


def _impl(s):
    left = _or(s)
    if s.at("->"):
        s.next()
        return _mk(s, "->", left, _impl(s))
    return left


def _or(s):
    e = _and(s)
    while s.at("||"):
        s.next()
        e = _mk(s, "||", e, _and(s))
    return e


def _and(s):
    e = _not(s)
    while s.at("&&"):
        s.next()
        e = _mk(s, "&&", e, _not(s))
    return e


def _not(s):
    if s.at("!"):
        s.next()
        return _mk(s, "!", _not(s))
    return _cmp(s)


def _cmp(s):
    e = _cat(s)
    if s.at(*_CMP):
        op = s.next().text
        e = _mk(s, op, e, _cat(s))
    return e


def _cat(s):
    e = _add(s)
    while s.at("++"):
        s.next()
        e = _mk(s, "++", e, _add(s))
    return e


def _add(s):
    e = _mul(s)
    while s.at("+", "-"):
        op = s.next().text
        e = _mk(s, op, e, _mul(s))
    return e


def _mul(s):
    e = _unary(s)
    while s.at("*", "/", "%"):
        op = s.next().text
        e = _mk(s, op, e, _unary(s))
    return e


def _unary(s):
    if s.at("-"):
        s.next()
        inner = _unary(s)
        if isinstance(inner, Lit) and isinstance(inner.value, int) and not isinstance(inner.value, bool):
            return Lit(-inner.value)
        return _mk(s, "neg", inner)
    return _postfix(s)


def _postfix(s):
    e = _atom(s)
    while s.at("["):
        s.next()
        i = _impl(s)
        s.expect("]")
        e = _mk(s, "idx", e, i)
    return e


def _atom(s):
    t = s.cur
    if t.kind == "int":
        s.next()
        return Lit(int(t.text))
    if t.kind == "sym":
        s.next()
        return Lit(t.text[1:-1])
    if t.kind == "ident":
        s.next()
        if t.text == "true":
            return Lit(True)
        if t.text == "false":
            return Lit(False)
        if s.at("(") and t.text in _FUNCS:
            s.next()
            args = []
            if not s.at(")"):
                args.append(_impl(s))
                while s.at(","):
                    s.next()
                    args.append(_impl(s))
            s.expect(")")
            return _mk(s, t.text, *args)
        return Var(t.text)
    if s.at("("):
        s.next()
        first = _impl(s)
        if s.at(")"):
            s.next()
            return first
        items = [first]
        while s.at(","):
            s.next()
            if s.at(")"):
                break
            items.append(_impl(s))
        s.expect(")")
        if all(isinstance(x, Lit) for x in items):
            return Lit(tuple(x.value for x in items))
        return _mk(s, "tuple", *items)
    if s.at("["):
        s.next()
        items = []
        if not s.at("]"):
            items.append(_impl(s))
            while s.at(","):
                s.next()
                items.append(_impl(s))
        s.expect("]")
        if all(isinstance(x, Lit) for x in items):
            return Lit(VList(x.value for x in items))
        acc = None
        for x in items:
            one = _mk(s, "single", x)
            acc = one if acc is None else _mk(s, "++", acc, one)
        return acc
    s.fail("expected an expression")


# ---------------------------------------------------------------- types

def parse_type(text_or_stream, named=None):
    s = text_or_stream if isinstance(text_or_stream, Stream) else Stream(tokenize(text_or_stream))
    t = _type(s, named or {})
    if not isinstance(text_or_stream, Stream) and not s.at_kind("eof"):
        s.fail("unexpected trailing input")
    return t


def _int_lit(s):
    neg = False
    if s.at("-"):
        s.next()
        neg = True
    v = int(s.expect_kind("int", "an integer").text)
    return -v if neg else v


def _type(s, named):
    t = s.cur
    if t.kind == "int" or s.at("-"):
        lo = _int_lit(s)
        s.expect("..")
        hi = _int_lit(s)
        try:
            return IntRange(lo, hi)
        except ValueError as exc:
            raise ParseError(str(exc), t.line, t.col) from None
    if s.at("{"):
        s.next()
        syms = [s.expect_kind("ident", "a symbol").text]
        while s.at(","):
            s.next()
            syms.append(s.expect_kind("ident", "a symbol").text)
        s.expect("}")
        return Enum(tuple(syms))
    if s.at("("):
        s.next()
        items = [_type(s, named)]
        while s.at(","):
            s.next()
            items.append(_type(s, named))
        s.expect(")")
        return TupleT(tuple(items))
    if t.kind == "ident":
        s.next()
        if t.text == "bool":
            return BOOL
        if t.text in ("list", "array"):
            s.expect("(")
            el = _type(s, named)
            s.expect(",")
            n = int(s.expect_kind("int", "a length").text)
            s.expect(")")
            return ListT(el, n) if t.text == "list" else ArrayT(el, n)
        if t.text == "distorted":
            s.expect("(")
            el = _type(s, named)
            s.expect(")")
            return Distorted(el)
        if t.text in named:
            return named[t.text]
        raise ParseError(f"unknown type {t.text!r}", t.line, t.col)
    s.fail("expected a type")


def type_text(t) -> str:
    return str(t)
