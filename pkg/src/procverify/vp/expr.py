"""Expressions over finite-domain variables.

An expression is a tree of :class:`Var`, :class:`Lit` and :class:`App` nodes.
Arithmetic is carried out on unbounded integers; range checks happen when a
value is stored into a variable.
"""
from __future__ import annotations

import bisect
from dataclasses import dataclass
from typing import Mapping, Optional

from ..errors import VpTypeError
from .types import (DISTORTED, EMPTY, ArrayT, Distorted, ListT, TupleT, VList, VType)


class Expr:
    def __str__(self):
        return to_text(self)

    def __repr__(self):
        return f"Expr({to_text(self)!r})"


@dataclass(frozen=True, repr=False)
class Var(Expr):
    name: str


@dataclass(frozen=True, repr=False)
class Lit(Expr):
    value: object


@dataclass(frozen=True, repr=False)
class App(Expr):
    op: str
    args: tuple

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))
        spec = OPS.get(self.op)
        if spec is None:
            raise VpTypeError(f"unknown operation {self.op!r}")
        arity = spec[0]
        if arity is not None and len(self.args) != arity:
            raise VpTypeError(f"{self.op} takes {arity} arguments, got {len(self.args)}")


TRUE, FALSE = Lit(True), Lit(False)


# ---------------------------------------------------------------- operations

def _between(a, b, c):
    return (a <= b < c) or (c < a <= b) or (b < c < a)


def _insert(s, x):
    lst = list(s)
    bisect.insort(lst, x)
    return VList(lst)


def _remove(s, x):
    lst = list(s)
    if x in lst:
        lst.remove(x)
    return VList(lst)


def _store(arr, i, v):
    lst = list(arr)
    lst[i % len(lst)] = v
    return tuple(lst)


# name -> (arity, function); hd/max/min need a default for empty lists and
# are handled by the evaluators
OPS = {
    "+": (2, lambda a, b: a + b),
    "-": (2, lambda a, b: a - b),
    "*": (2, lambda a, b: a * b),
    "/": (2, lambda a, b: a // b),
    "%": (2, lambda a, b: a % b),
    "neg": (1, lambda a: -a),
    "addm": (3, lambda a, b, n: (a + b) % n),
    "subm": (3, lambda a, b, n: (a - b) % n),
    "==": (2, lambda a, b: a == b),
    "!=": (2, lambda a, b: a != b),
    "<": (2, lambda a, b: a < b),
    "<=": (2, lambda a, b: a <= b),
    ">": (2, lambda a, b: a > b),
    ">=": (2, lambda a, b: a >= b),
    "&&": (2, lambda a, b: a and b),
    "||": (2, lambda a, b: a or b),
    "->": (2, lambda a, b: (not a) or b),
    "!": (1, lambda a: not a),
    "if": (3, None),
    "hd": (1, None),
    "max": (1, None),
    "min": (1, None),
    "tl": (1, lambda q: VList(q[1:])),
    "single": (1, lambda x: VList((x,))),
    "++": (2, lambda a, b: VList(tuple(a) + tuple(b))),
    "len": (1, lambda q: len(q)),
    "tuple": (None, lambda *xs: tuple(xs)),
    "get": (2, lambda t, i: t[i]),
    "idx": (2, lambda a, i: a[i % len(a)]),
    "store": (3, _store),
    "between": (3, _between),
    "insert": (2, _insert),
    "remove": (2, _remove),
}

_EMPTY_DEFAULT = {"hd": lambda q: q[0], "max": lambda q: q[-1], "min": lambda q: q[0]}


def _strict_bool(v, op):
    if not isinstance(v, bool):
        raise VpTypeError(f"{op} expects a boolean, got {v!r}")
    return v


# ---------------------------------------------------------------- typing

def infer_type(e: Expr, types: Mapping[str, VType]) -> Optional[VType]:
    """Type of ``e`` where it can be determined structurally, else ``None``."""
    if isinstance(e, Var):
        if e.name not in types:
            raise VpTypeError(f"unknown variable {e.name}")
        return types[e.name]
    if isinstance(e, Lit):
        return None
    op, args = e.op, e.args
    if op in ("tl", "++", "insert", "remove", "store"):
        for a in args[:1] if op != "++" else args:
            t = infer_type(a, types)
            if t is not None:
                return t
        return None
    if op in ("hd", "max", "min"):
        t = _strip(infer_type(args[0], types))
        return t.element if isinstance(t, ListT) else None
    if op == "idx":
        t = _strip(infer_type(args[0], types))
        return t.element if isinstance(t, ArrayT) else None
    if op == "get":
        t = _strip(infer_type(args[0], types))
        if isinstance(t, TupleT) and isinstance(args[1], Lit):
            return t.elements[args[1].value]
        return None
    if op == "if":
        return infer_type(args[1], types) or infer_type(args[2], types)
    return None


def _strip(t):
    return t.base if isinstance(t, Distorted) else t


def check_expr(e: Expr, types: Mapping[str, VType]):
    """Raise :class:`VpTypeError` on unknown variables or misused list heads."""
    for v in free_vars(e):
        if v not in types:
            raise VpTypeError(f"unknown variable {v}")
    for sub in subterms(e):
        if isinstance(sub, App) and sub.op in ("hd", "max", "min"):
            if _default_for(sub, types) is None:
                raise VpTypeError(f"cannot determine the element type in {to_text(sub)}")


def _default_for(e, types):
    t = _strip(infer_type(e.args[0], types))
    if isinstance(t, ListT):
        return t.element.least()
    return None


_BOOL_OPS = {"==", "!=", "<", "<=", ">", ">=", "&&", "||", "->", "!", "between"}
_INT_OPS = {"+", "-", "*", "/", "%", "neg", "addm", "subm", "len"}
_LIST_OPS = {"++", "tl", "single", "insert", "remove"}


def type_kind(t: Optional[VType]) -> Optional[str]:
    """Coarse kind of a type: ``bool``, ``int``, ``sym``, ``list``, ``tuple``
    or ``None`` when values of several kinds are possible."""
    from .types import Bool, Enum, IntRange
    if isinstance(t, Bool):
        return "bool"
    if isinstance(t, IntRange):
        return "int"
    if isinstance(t, Enum):
        return "sym"
    if isinstance(t, ListT):
        return "list"
    if isinstance(t, (TupleT, ArrayT)):
        return "tuple"
    return None


def kind_of(e: Expr, types: Mapping[str, VType]) -> Optional[str]:
    if isinstance(e, Lit):
        v = e.value
        if isinstance(v, bool):
            return "bool"
        if isinstance(v, int):
            return "int"
        if isinstance(v, str):
            return "sym" if v != DISTORTED else None
        return "list" if isinstance(v, VList) else "tuple" if isinstance(v, tuple) else None
    if isinstance(e, Var):
        return type_kind(types.get(e.name))
    if e.op in _BOOL_OPS:
        return "bool"
    if e.op in _INT_OPS:
        return "int"
    if e.op in _LIST_OPS:
        return "list"
    if e.op == "tuple":
        return "tuple"
    return type_kind(infer_type(e, types))


def check_kinds(e: Expr, types: Mapping[str, VType], expect: Optional[str] = None):
    """Reject expressions whose operands have the wrong kind, e.g. ``k && b``
    with an integer ``k`` or ``x + true``."""
    for sub in subterms(e):
        if not isinstance(sub, App):
            continue
        if sub.op in ("&&", "||", "->", "!"):
            want = ("bool",)
        elif sub.op in _INT_OPS - {"len"} or sub.op in ("<", "<=", ">", ">="):
            want = ("int",)
        else:
            continue
        for a in sub.args:
            k = kind_of(a, types)
            if k is not None and k not in want:
                raise VpTypeError(f"{to_text(a)} is not {want[0]} in {to_text(sub)}")
    if expect is not None:
        k = kind_of(e, types)
        if k is not None and k != expect:
            raise VpTypeError(f"{to_text(e)} is {k}, expected {expect}")


# ---------------------------------------------------------------- evaluation

def eval_expr(e: Expr, sigma: Mapping, types: Optional[Mapping[str, VType]] = None):
    """Value of ``e`` under the evaluation ``sigma``."""
    if isinstance(e, Var):
        try:
            return sigma[e.name]
        except KeyError:
            raise VpTypeError(f"variable {e.name} has no value") from None
    if isinstance(e, Lit):
        return e.value
    op = e.op
    if op == "if":
        c = _strict_bool(eval_expr(e.args[0], sigma, types), "if")
        return eval_expr(e.args[1] if c else e.args[2], sigma, types)
    if op == "&&":
        return _strict_bool(eval_expr(e.args[0], sigma, types), op) and \
            _strict_bool(eval_expr(e.args[1], sigma, types), op)
    if op == "||":
        return _strict_bool(eval_expr(e.args[0], sigma, types), op) or \
            _strict_bool(eval_expr(e.args[1], sigma, types), op)
    vals = [eval_expr(a, sigma, types) for a in e.args]
    if op in _EMPTY_DEFAULT:
        q = vals[0]
        if len(q) == 0:
            d = _default_for(e, types or {})
            if d is None:
                raise VpTypeError(f"{op} of an empty list of unknown element type")
            return d
        return _EMPTY_DEFAULT[op](q)
    try:
        return OPS[op][1](*vals)
    except VpTypeError:
        raise
    except (TypeError, IndexError, ZeroDivisionError) as exc:
        raise VpTypeError(f"cannot evaluate {to_text(e)}: {exc}") from None


def compile_expr(e: Expr, types: Optional[Mapping[str, VType]] = None):
    """Closure computing ``e`` from an evaluation dict; faster than :func:`eval_expr`."""
    types = types or {}
    if isinstance(e, Var):
        name = e.name
        return lambda s: s[name]
    if isinstance(e, Lit):
        v = e.value
        return lambda s: v
    op = e.op
    fs = [compile_expr(a, types) for a in e.args]
    if op == "if":
        c, a, b = fs
        return lambda s: a(s) if c(s) else b(s)
    if op == "&&":
        a, b = fs
        return lambda s: a(s) and b(s)
    if op == "||":
        a, b = fs
        return lambda s: a(s) or b(s)
    if op in _EMPTY_DEFAULT:
        d = _default_for(e, types)
        pick = _EMPTY_DEFAULT[op]
        f = fs[0]

        def run(s):
            q = f(s)
            if not q:
                if d is None:
                    raise VpTypeError(f"{op} of an empty list of unknown element type")
                return d
            return pick(q)
        return run
    fn = OPS[op][1]
    if len(fs) == 1:
        f0 = fs[0]
        return lambda s: fn(f0(s))
    if len(fs) == 2:
        f0, f1 = fs
        return lambda s: fn(f0(s), f1(s))
    return lambda s: fn(*[f(s) for f in fs])


# ---------------------------------------------------------------- structure

def subterms(e: Expr):
    stack = [e]
    while stack:
        x = stack.pop()
        yield x
        if isinstance(x, App):
            stack.extend(x.args)


def free_vars(e: Expr) -> set:
    return {x.name for x in subterms(e) if isinstance(x, Var)}


def subst(e: Expr, mapping: Mapping[str, Expr]) -> Expr:
    """Replace variables simultaneously."""
    if isinstance(e, Var):
        return mapping.get(e.name, e)
    if isinstance(e, Lit):
        return e
    return App(e.op, tuple(subst(a, mapping) for a in e.args))


def rename_vars(e: Expr, mapping: Mapping[str, str]) -> Expr:
    return subst(e, {k: Var(v) for k, v in mapping.items()})


# ---------------------------------------------------------------- builders

def lit(v) -> Lit:
    return Lit(v)


def app(op, *args) -> App:
    return App(op, tuple(_as_expr(a) for a in args))


def _as_expr(x):
    if isinstance(x, Expr):
        return x
    if isinstance(x, str):
        return Var(x)
    return Lit(x)


def and_(*parts) -> Expr:
    """Conjunction with trivial simplification of literal operands."""
    out = None
    for p in parts:
        p = _as_expr(p)
        if p == TRUE:
            continue
        if p == FALSE:
            return FALSE
        out = p if out is None else App("&&", (out, p))
    return TRUE if out is None else out


def or_(*parts) -> Expr:
    out = None
    for p in parts:
        p = _as_expr(p)
        if p == FALSE:
            continue
        if p == TRUE:
            return TRUE
        out = p if out is None else App("||", (out, p))
    return FALSE if out is None else out


def not_(p) -> Expr:
    p = _as_expr(p)
    if p == TRUE:
        return FALSE
    if p == FALSE:
        return TRUE
    if isinstance(p, App) and p.op == "!":
        return p.args[0]
    return App("!", (p,))


def eq(a, b) -> Expr:
    return app("==", a, b)


# ---------------------------------------------------------------- printing

_BINARY = {"->": 0, "||": 1, "&&": 2, "==": 4, "!=": 4, "<": 4, "<=": 4, ">": 4, ">=": 4,
           "++": 5, "+": 6, "-": 6, "*": 7, "/": 7, "%": 7}
_RIGHT_ASSOC = {"->"}


def fmt_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, VList):
        return "[" + ", ".join(fmt_value(x) for x in v) + "]"
    if isinstance(v, tuple):
        inner = ", ".join(fmt_value(x) for x in v)
        return f"({inner},)" if len(v) == 1 else f"({inner})"
    return f"'{v}'"


def to_text(e: Expr) -> str:
    return _fmt(e, 0)


def _fmt(e, level):
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Lit):
        return fmt_value(e.value)
    op, args = e.op, e.args
    if op in _BINARY:
        p = _BINARY[op]
        if op in _RIGHT_ASSOC:
            s = f"{_fmt(args[0], p + 1)} {op} {_fmt(args[1], p)}"
        elif p == 4:
            s = f"{_fmt(args[0], p + 1)} {op} {_fmt(args[1], p + 1)}"
        else:
            s = f"{_fmt(args[0], p)} {op} {_fmt(args[1], p + 1)}"
        return s if level <= p else f"({s})"
    if op == "!":
        s = "!" + _fmt(args[0], 9)
        return s if level <= 3 else f"({s})"
    if op == "single":
        return f"[{_fmt(args[0], 0)}]"
    if op == "idx":
        return f"{_fmt(args[0], 9)}[{_fmt(args[1], 0)}]"
    if op == "tuple":
        inner = ", ".join(_fmt(a, 0) for a in args)
        return f"({inner},)" if len(args) == 1 else f"({inner})"
    return f"{op}(" + ", ".join(_fmt(a, 0) for a in args) + ")"


__all__ = [
    "Expr", "Var", "Lit", "App", "TRUE", "FALSE", "OPS", "eval_expr", "compile_expr",
    "infer_type", "check_expr", "free_vars", "subst", "rename_vars", "subterms", "lit", "app",
    "and_", "or_", "not_", "eq", "to_text", "fmt_value", "EMPTY", "DISTORTED",
]
