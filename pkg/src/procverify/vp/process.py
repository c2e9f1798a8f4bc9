"""Value-passing processes and their concretization to plain Lts."""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping, Optional

from ..errors import InvariantViolation, StateExplosion, VpTypeError
from ..lts import Lts
from .expr import (TRUE, App, Expr, Var, check_expr, check_kinds, compile_expr, eval_expr, fmt_value,
                   free_vars, type_kind)
from .ops import Assign, CompositeOp, Executor, In, Out, op_vars
from .types import VType

MAX_CONCRETE = 200000
INIT_STATE = "s0"


@dataclass(frozen=True)
class Transition:
    src: str
    op: CompositeOp
    dst: str
    label: str = field(default="", compare=False)

    def __iter__(self):
        return iter((self.src, self.op, self.dst))


@dataclass(frozen=True)
class VpProcess:
    """``(variables, init condition, states, initial state, transitions)``."""

    vars: tuple
    init: Expr
    states: tuple
    initial: str
    transitions: tuple

    def __post_init__(self):
        v = self.vars
        if isinstance(v, Mapping):
            v = v.items()
        object.__setattr__(self, "vars", tuple((n, t) for n, t in v))
        object.__setattr__(self, "states", tuple(self.states))
        trs = []
        for t in self.transitions:
            if not isinstance(t, Transition):
                t = Transition(*t)
            trs.append(t)
        object.__setattr__(self, "transitions", tuple(trs))
        names = [n for n, _ in self.vars]
        if len(set(names)) != len(names):
            raise VpTypeError("duplicate variable names")
        if len(set(self.states)) != len(self.states):
            raise ValueError("duplicate state names")
        if self.initial not in self.states:
            raise ValueError(f"initial state {self.initial!r} not among states")
        sset = set(self.states)
        for t in self.transitions:
            if t.src not in sset or t.dst not in sset:
                raise ValueError(f"transition endpoint outside states: {t.src} -> {t.dst}")

    @classmethod
    def build(cls, vars, init, initial, transitions, states=()):
        order = {initial: None}
        for s in states:
            order.setdefault(s, None)
        trs = []
        for t in transitions:
            if not isinstance(t, Transition):
                t = Transition(*t)
            order.setdefault(t.src, None)
            order.setdefault(t.dst, None)
            trs.append(t)
        return cls(vars, init, tuple(order), initial, tuple(trs))

    @cached_property
    def types(self) -> dict:
        return dict(self.vars)

    @property
    def var_names(self) -> list:
        return [n for n, _ in self.vars]

    def out_of(self, s: str) -> list:
        return [t for t in self.transitions if t.src == s]

    def into(self, s: str) -> list:
        return [t for t in self.transitions if t.dst == s]

    def transition_ref(self, t: Transition) -> str:
        """Stable name: the label if set, else ``src->dst`` plus ``#k`` if ambiguous."""
        if t.label:
            return t.label
        same = [u for u in self.transitions if u.src == t.src and u.dst == t.dst]
        if len(same) == 1:
            return f"{t.src}->{t.dst}"
        return f"{t.src}->{t.dst}#{same.index(t)}"

    def find_transition(self, ref: str) -> Transition:
        for t in self.transitions:
            if self.transition_ref(t) == ref or (t.label and t.label == ref):
                return t
        raise KeyError(ref)

    def replace(self, **kw) -> "VpProcess":
        d = dict(vars=self.vars, init=self.init, states=self.states, initial=self.initial,
                 transitions=self.transitions)
        d.update(kw)
        return VpProcess(**d)

    def validate(self, check_init: bool = True, limit: int = MAX_CONCRETE):
        """Type-check expressions and confirm the initial condition is satisfiable.

        The satisfiability check is skipped when the candidate evaluations
        exceed ``limit``.
        """
        types = self.types
        check_expr(self.init, types)
        check_kinds(self.init, types, "bool")
        for t in self.transitions:
            for op in t.op.ops:
                for v in op_vars(op):
                    if v not in types:
                        raise VpTypeError(f"unknown variable {v} in {t.op}")
                for e in _op_exprs(op):
                    check_expr(e, types)
                    check_kinds(e, types, _expected_kind(op, e, types))
        if check_init:
            try:
                first = next(iter(init_evaluations(self, limit)), None)
            except StateExplosion:
                return self
            if first is None:
                raise InvariantViolation("initial condition is unsatisfiable")
        return self

    def __str__(self):
        from ..syntax.vpm import format_vpm
        return format_vpm(self)


def _expected_kind(op, e, types):
    if isinstance(op, Assign) and e is op.expr:
        t = types[op.var]
        if op.index is not None:
            t = getattr(t, "element", None)
        return type_kind(t)
    if isinstance(op, Assign) or isinstance(op, In):
        return "int"  # array index
    if isinstance(op, Out):
        return None
    return "bool"


def _op_exprs(op):
    for name in ("expr", "index"):
        e = getattr(op, name, None)
        if e is not None:
            yield e


def _conjuncts(e: Expr):
    if isinstance(e, App) and e.op == "&&":
        yield from _conjuncts(e.args[0])
        yield from _conjuncts(e.args[1])
    else:
        yield e


def solve_init(p: VpProcess):
    """Values forced by ``x == e`` conjuncts of the initial condition.

    Returns ``None`` when a forced value leaves its variable's domain.
    """
    types = p.types
    fixed = {}
    parts = list(_conjuncts(p.init))
    progress = True
    while progress:
        progress = False
        for c in parts:
            if not (isinstance(c, App) and c.op == "=="):
                continue
            for lhs, rhs in (c.args, c.args[::-1]):
                if isinstance(lhs, Var) and lhs.name in types and lhs.name not in fixed \
                        and free_vars(rhs) <= set(fixed):
                    v = eval_expr(rhs, fixed, types)
                    if not types[lhs.name].contains(v):
                        return None
                    fixed[lhs.name] = v
                    progress = True
                    break
    return fixed


def init_evaluations(p: VpProcess, limit: int = MAX_CONCRETE):
    """Evaluations satisfying the initial condition, in a deterministic order.

    Conjuncts ``x == e`` whose right side is already determined fix ``x``
    directly; the remaining variables are enumerated.
    """
    types = p.types
    fixed = solve_init(p)
    if fixed is None:
        return
    rest = [n for n in p.var_names if n not in fixed]
    total = 1
    for n in rest:
        total *= types[n].size()
    if total > limit:
        raise StateExplosion(limit, "candidate initial evaluations")
    check = compile_expr(p.init, types)
    for combo in itertools.product(*(types[n].domain() for n in rest)):
        s = dict(fixed)
        s.update(zip(rest, combo))
        if check(s):
            yield {n: s[n] for n in p.var_names}


def fmt_sigma(names, values) -> str:
    return "{" + ",".join(f"{n}={fmt_value(v)}" for n, v in zip(names, values)) + "}"


class Concretizer:
    """Shared machinery for concretization and simulation."""

    def __init__(self, p: VpProcess):
        self.p = p
        self.names = sorted(p.var_names)
        self.execs = {}
        for t in p.transitions:
            self.execs.setdefault(t.src, []).append((Executor(t.op, p.types), t.dst))

    def key(self, sigma) -> tuple:
        return tuple(sigma[n] for n in self.names)

    def moves(self, ctl, sigma):
        """``(action, ctl', sigma')`` for every enabled transition of ``(ctl, sigma)``."""
        res = []
        for ex, dst in self.execs.get(ctl, ()):
            for a, s2 in ex.successors(sigma):
                res.append((a, dst, s2))
        return res

    def state_name(self, ctl, key) -> str:
        return f"{ctl}{fmt_sigma(self.names, key)}"


def concretize(p: VpProcess, max_states: int = MAX_CONCRETE) -> Lts:
    """Plain Lts over evaluations; a fresh initial state fans out over all
    initial evaluations."""
    c = Concretizer(p)
    ids = {}
    queue = deque()
    trans = set()

    def intern(ctl, sigma):
        k = (ctl, c.key(sigma))
        sid = ids.get(k)
        if sid is None:
            sid = c.state_name(ctl, k[1])
            ids[k] = sid
            if len(ids) >= max_states:
                raise StateExplosion(max_states)
            queue.append((ctl, sigma))
        return sid

    for s0 in init_evaluations(p, max_states):
        for a, dst, s2 in c.moves(p.initial, s0):
            trans.add((INIT_STATE, a, intern(dst, s2)))
    while queue:
        ctl, sigma = queue.popleft()
        src = ids[(ctl, c.key(sigma))]
        for a, dst, s2 in c.moves(ctl, sigma):
            trans.add((src, a, intern(dst, s2)))
    states = (INIT_STATE,) + tuple(ids.values())
    return Lts(states, INIT_STATE, frozenset(trans))


def plain(*ops) -> CompositeOp:
    """A composite operator from plain operators (guard inserted if absent)."""
    return CompositeOp.of(*ops)


def empty_vp(name: str = "0") -> VpProcess:
    return VpProcess((), TRUE, (name,), name, ())


__all__ = ["VpProcess", "Transition", "concretize", "init_evaluations", "solve_init", "Concretizer",
           "MAX_CONCRETE", "INIT_STATE", "plain", "empty_vp", "fmt_sigma", "Assign", "In", "Out"]
