"""Operators, composite operators and their sequential composition."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional

from ..errors import InvariantViolation, RangeOverflow, VpTypeError
from ..lts import inp, out, tau
from .expr import (TRUE, Expr, Var, and_, compile_expr, free_vars, rename_vars, subst, to_text)
from .types import ArrayT, VType


class Operator:
    def __str__(self):
        return op_text(self)

    def __repr__(self):
        return f"Operator({op_text(self)!r})"


@dataclass(frozen=True, repr=False)
class Guard(Operator):
    expr: Expr


@dataclass(frozen=True, repr=False)
class Assign(Operator):
    """``var := expr`` or, with ``index``, ``var[index] := expr``."""
    var: str
    expr: Expr
    index: Optional[Expr] = None


@dataclass(frozen=True, repr=False)
class In(Operator):
    """``name?var`` (``var`` may be ``None`` for a valueless signal)."""
    name: str
    var: Optional[str] = None
    index: Optional[Expr] = None


@dataclass(frozen=True, repr=False)
class Out(Operator):
    name: str
    expr: Optional[Expr] = None


def op_text(op: Operator) -> str:
    if isinstance(op, Guard):
        return f"[{to_text(op.expr)}]"
    if isinstance(op, Assign):
        tgt = op.var if op.index is None else f"{op.var}[{to_text(op.index)}]"
        return f"{tgt} := {to_text(op.expr)}"
    if isinstance(op, In):
        if op.var is None:
            return f"{op.name}?"
        tgt = op.var if op.index is None else f"{op.var}[{to_text(op.index)}]"
        return f"{op.name}?{tgt}"
    if isinstance(op, Out):
        return f"{op.name}!" if op.expr is None else f"{op.name}!{to_text(op.expr)}"
    raise TypeError(op)


def _target_expr(var, index, value: Expr) -> Expr:
    """Whole-variable value after storing ``value`` at the target."""
    if index is None:
        return value
    return _app("store", Var(var), index, value)


def _app(op, *args):
    from .expr import App
    return App(op, args)


def op_vars(op: Operator) -> set:
    """Variables read or written by one operator."""
    if isinstance(op, Guard):
        return free_vars(op.expr)
    if isinstance(op, Assign):
        s = {op.var} | free_vars(op.expr)
        return s | (free_vars(op.index) if op.index is not None else set())
    if isinstance(op, In):
        if op.var is None:
            return set()
        return {op.var} | (free_vars(op.index) if op.index is not None else set())
    if isinstance(op, Out):
        return free_vars(op.expr) if op.expr is not None else set()
    raise TypeError(op)


@dataclass(frozen=True)
class CompositeOp:
    """A guard followed by assignments and at most one input or output."""
    ops: tuple

    def __post_init__(self):
        ops = tuple(self.ops)
        object.__setattr__(self, "ops", ops)
        if not ops or not isinstance(ops[0], Guard):
            raise InvariantViolation("a composite operator starts with a guard")
        comm = 0
        for op in ops[1:]:
            if isinstance(op, Guard):
                raise InvariantViolation("only the first operator may be a guard")
            if isinstance(op, (In, Out)):
                comm += 1
        if comm > 1:
            raise InvariantViolation("at most one input or output per composite operator")

    @classmethod
    def of(cls, *ops) -> "CompositeOp":
        """Build from operators, inserting a true guard when none leads."""
        ops = list(ops)
        if not ops or not isinstance(ops[0], Guard):
            ops.insert(0, Guard(TRUE))
        return cls(tuple(ops))

    @property
    def cond(self) -> Expr:
        return self.ops[0].expr

    @property
    def body(self) -> tuple:
        return self.ops[1:]

    @property
    def comm(self) -> Optional[Operator]:
        for op in self.ops[1:]:
            if isinstance(op, (In, Out)):
                return op
        return None

    @property
    def is_internal(self) -> bool:
        return self.comm is None

    def vars(self) -> set:
        out_ = set()
        for op in self.ops:
            out_ |= op_vars(op)
        return out_

    def with_guard(self, g: Expr) -> "CompositeOp":
        return CompositeOp((Guard(g),) + self.ops[1:])

    def __str__(self):
        return co_text(self)

    def __repr__(self):
        return f"CompositeOp({co_text(self)!r})"


def co_text(co: CompositeOp) -> str:
    parts = [op_text(op) for op in co.ops]
    if co.cond == TRUE and len(parts) > 1:
        parts = parts[1:]
    return " ; ".join(parts)


def rename_co_vars(co: CompositeOp, mapping: Mapping[str, str]) -> CompositeOp:
    def r(op):
        if isinstance(op, Guard):
            return Guard(rename_vars(op.expr, mapping))
        if isinstance(op, Assign):
            return Assign(mapping.get(op.var, op.var), rename_vars(op.expr, mapping),
                          None if op.index is None else rename_vars(op.index, mapping))
        if isinstance(op, In):
            if op.var is None:
                return op
            return In(op.name, mapping.get(op.var, op.var),
                      None if op.index is None else rename_vars(op.index, mapping))
        if isinstance(op, Out):
            return op if op.expr is None else Out(op.name, rename_vars(op.expr, mapping))
        raise TypeError(op)
    return CompositeOp(tuple(r(op) for op in co.ops))


def rename_co_names(co: CompositeOp, f: Mapping[str, str]) -> CompositeOp:
    def r(op):
        if isinstance(op, In):
            return In(f.get(op.name, op.name), op.var, op.index)
        if isinstance(op, Out):
            return Out(f.get(op.name, op.name), op.expr)
        return op
    return CompositeOp(tuple(r(op) for op in co.ops))


# ---------------------------------------------------------------- composition

def append_op(co: CompositeOp, op: Operator) -> Optional[CompositeOp]:
    """``Op . op``; ``None`` where the result is undefined."""
    if not isinstance(op, Guard):
        if isinstance(op, (In, Out)) and co.comm is not None:
            return None
        return CompositeOp(co.ops + (op,))
    g = op.expr
    for prev in reversed(co.body):
        if isinstance(prev, Assign):
            g = subst(g, {prev.var: _target_expr(prev.var, prev.index, prev.expr)})
        elif isinstance(prev, In):
            if prev.var is not None and prev.var in free_vars(g):
                return None
        # outputs commute with guards
    return co.with_guard(and_(co.cond, g))


def seq_compose(op1: CompositeOp, op2: CompositeOp) -> Optional[CompositeOp]:
    """Sequential composition, or ``None`` when it is undefined."""
    if not (op1.is_internal or op2.is_internal):
        return None
    acc = op1
    for op in op2.ops:
        acc = append_op(acc, op)
        if acc is None:
            return None
    return acc


def compose_path(cos) -> Optional[CompositeOp]:
    """Left fold of :func:`seq_compose`; the empty path gives ``(<true>)``."""
    acc = CompositeOp((Guard(TRUE),))
    for co in cos:
        acc = seq_compose(acc, co)
        if acc is None:
            return None
    return acc


# ---------------------------------------------------------------- execution

class Executor:
    """Compiled form of a composite operator over a typed variable set."""

    NO_INPUT = object()

    def __init__(self, co: CompositeOp, types: Mapping[str, VType], strict: bool = True):
        self.co = co
        self.types = types
        self.strict = strict
        self.guard = compile_expr(co.cond, types)
        self.steps = []
        self.comm = co.comm
        self.input_type = None
        for op in co.body:
            if isinstance(op, Assign):
                self.steps.append(("set", op.var, compile_expr(op.expr, types),
                                   None if op.index is None else compile_expr(op.index, types)))
            elif isinstance(op, In):
                self.steps.append(("in", op.var, None,
                                   None if op.index is None else compile_expr(op.index, types)))
                if op.var is not None:
                    t = types.get(op.var)
                    if t is None:
                        raise VpTypeError(f"unknown variable {op.var}")
                    self.input_type = t.element if op.index is not None and isinstance(t, ArrayT) else t
            elif isinstance(op, Out):
                self.steps.append(("out", None, None if op.expr is None else compile_expr(op.expr, types), None))

    def enabled(self, sigma) -> bool:
        v = self.guard(sigma)
        if not isinstance(v, bool):
            raise VpTypeError(f"guard {to_text(self.co.cond)} is not boolean")
        return v

    def input_domain(self):
        if self.comm is None or not isinstance(self.comm, In) or self.comm.var is None:
            return None
        return self.input_type.domain()

    def run(self, sigma, value=NO_INPUT):
        """Execute the body from ``sigma``; returns ``(action, sigma')``."""
        s = dict(sigma)
        action = tau
        for kind, var, fn, idx in self.steps:
            if kind == "set":
                self._store(s, var, fn(s), idx)
            elif kind == "in":
                if var is None:
                    action = inp(self.comm.name)
                else:
                    if value is self.NO_INPUT:
                        raise ValueError("input value required")
                    self._store(s, var, value, idx)
                    action = inp(self.comm.name, value)
            else:
                action = out(self.comm.name) if fn is None else out(self.comm.name, fn(s))
        return action, s

    def _store(self, s, var, v, idx):
        t = self.types[var]
        if idx is not None:
            arr = list(s[var])
            if not arr:
                raise VpTypeError(f"{var} is not an array")
            i = idx(s) % len(arr)
            if self.strict and isinstance(t, ArrayT) and not t.element.contains(v):
                raise RangeOverflow(f"{var}[{i}] := {v!r} leaves the declared domain")
            arr[i] = v
            s[var] = tuple(arr)
            return
        if self.strict and not t.contains(v):
            raise RangeOverflow(f"{var} := {v!r} leaves the declared domain {t}")
        s[var] = v

    def successors(self, sigma):
        """All ``(action, sigma')`` pairs from ``sigma`` (empty if disabled)."""
        if not self.enabled(sigma):
            return []
        dom = self.input_domain()
        if dom is None:
            return [self.run(sigma)]
        return [self.run(sigma, v) for v in dom]
