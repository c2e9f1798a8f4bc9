"""Process expressions, recursive definitions and their transition semantics."""
from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from typing import Mapping, Optional

from .errors import StateExplosion, UndefinedName
from .lts import Action, Lts

MAX_STATES = 10000


class ProcExpr:
    """Base class of process expressions."""

    def __str__(self):
        return to_text(self)

    def __repr__(self):
        return f"ProcExpr({to_text(self)!r})"


@dataclass(frozen=True, repr=False)
class Nil(ProcExpr):
    pass


@dataclass(frozen=True, repr=False)
class Const(ProcExpr):
    """A state of a given Lts used as a constant process."""
    name: str
    state: str
    lts: Lts = field(compare=False, hash=False)


def const(name: str, p: Lts) -> Const:
    return Const(name, p.initial, p)


@dataclass(frozen=True, repr=False)
class NameRef(ProcExpr):
    name: str


@dataclass(frozen=True, repr=False)
class Prefix(ProcExpr):
    action: Action
    body: ProcExpr


@dataclass(frozen=True, repr=False)
class Choice(ProcExpr):
    left: ProcExpr
    right: ProcExpr


@dataclass(frozen=True, repr=False)
class Par(ProcExpr):
    left: ProcExpr
    right: ProcExpr


@dataclass(frozen=True, repr=False)
class Restrict(ProcExpr):
    body: ProcExpr
    names: frozenset

    def __post_init__(self):
        object.__setattr__(self, "names", frozenset(self.names))


@dataclass(frozen=True, repr=False)
class Rename(ProcExpr):
    """``mapping`` is a sorted tuple of ``(old, new)`` name pairs."""
    body: ProcExpr
    mapping: tuple

    def __post_init__(self):
        m = self.mapping
        if isinstance(m, Mapping):
            m = m.items()
        object.__setattr__(self, "mapping", tuple(sorted(m)))

    @property
    def table(self) -> dict:
        return dict(self.mapping)


NIL = Nil()


def choice_of(exprs) -> ProcExpr:
    exprs = list(exprs)
    if not exprs:
        return NIL
    acc = exprs[0]
    for e in exprs[1:]:
        acc = Choice(acc, e)
    return acc


def par_of(exprs) -> ProcExpr:
    exprs = list(exprs)
    if not exprs:
        return NIL
    acc = exprs[0]
    for e in exprs[1:]:
        acc = Par(acc, e)
    return acc


def prefixes(actions, body: ProcExpr = NIL) -> ProcExpr:
    """``a1.a2. ... .body`` from action strings or Actions."""
    from .lts import parse_action
    for a in reversed(list(actions)):
        body = Prefix(parse_action(a) if isinstance(a, str) else a, body)
    return body


@dataclass(frozen=True)
class RecDef:
    """Ordered equations ``A_i = P_i``."""
    equations: tuple

    def __post_init__(self):
        eqs = tuple((n, e) for n, e in self.equations)
        object.__setattr__(self, "equations", eqs)
        names = [n for n, _ in eqs]
        if len(set(names)) != len(names):
            raise ValueError("duplicate names in recursive definition")
        defined = set(names)
        for n, e in eqs:
            for ref in name_refs(e):
                if ref not in defined:
                    raise UndefinedName(f"{ref} (used in {n})")

    @property
    def names(self) -> list:
        return [n for n, _ in self.equations]

    def __getitem__(self, name) -> ProcExpr:
        for n, e in self.equations:
            if n == name:
                return e
        raise UndefinedName(name)

    def __contains__(self, name):
        return any(n == name for n, _ in self.equations)


EMPTY_ENV = RecDef(())


def name_refs(e: ProcExpr) -> set:
    out = set()
    stack = [e]
    while stack:
        x = stack.pop()
        if isinstance(x, NameRef):
            out.add(x.name)
        elif isinstance(x, Prefix):
            stack.append(x.body)
        elif isinstance(x, (Choice, Par)):
            stack += [x.left, x.right]
        elif isinstance(x, (Restrict, Rename)):
            stack.append(x.body)
    return out


# ---------------------------------------------------------------- printing

def to_text(e: ProcExpr) -> str:
    """Text in the ``.ccs`` expression syntax (constants print by name)."""
    return _fmt(e, 0)


def _fmt(e, level):
    # levels: 0 choice, 1 parallel, 2 prefix, 3 postfix/atom
    if isinstance(e, Nil):
        return "0"
    if isinstance(e, NameRef):
        return e.name
    if isinstance(e, Const):
        return e.name if e.state == e.lts.initial else f"{e.name}@{e.state}"
    if isinstance(e, Choice):
        s = f"{_fmt(e.left, 0)} + {_fmt(e.right, 1)}"
        return s if level <= 0 else f"({s})"
    if isinstance(e, Par):
        s = f"{_fmt(e.left, 1)} | {_fmt(e.right, 2)}"
        return s if level <= 1 else f"({s})"
    if isinstance(e, Prefix):
        s = f"{e.action}.{_fmt(e.body, 2)}"
        return s if level <= 2 else f"({s})"
    if isinstance(e, Restrict):
        return f"{_fmt(e.body, 3)} \\ {{{', '.join(sorted(e.names))}}}"
    if isinstance(e, Rename):
        pairs = ", ".join(f"{new}/{old}" for old, new in e.mapping)
        return f"{_fmt(e.body, 3)}[{pairs}]"
    raise TypeError(e)


# ---------------------------------------------------------------- semantics

def sos_step(e: ProcExpr, env: RecDef = EMPTY_ENV) -> set:
    """One-step successors ``{(action, expr)}`` of ``e``."""
    return set(_steps(e, env, frozenset()))


def _steps(e, env, unfolding):
    if isinstance(e, Nil):
        return []
    if isinstance(e, Prefix):
        return [(e.action, e.body)]
    if isinstance(e, Const):
        return [(a, Const(e.name, t, e.lts)) for a, t in e.lts.out_of(e.state)]
    if isinstance(e, NameRef):
        if e.name not in env:
            raise UndefinedName(e.name)
        # unguarded self-reference contributes no moves (least solution)
        if e.name in unfolding:
            return []
        return _steps(env[e.name], env, unfolding | {e.name})
    if isinstance(e, Choice):
        return _steps(e.left, env, unfolding) + _steps(e.right, env, unfolding)
    if isinstance(e, Par):
        left = _steps(e.left, env, unfolding)
        right = _steps(e.right, env, unfolding)
        res = [(a, Par(l2, e.right)) for a, l2 in left]
        res += [(a, Par(e.left, r2)) for a, r2 in right]
        for a, l2 in left:
            if a.is_tau:
                continue
            for b, r2 in right:
                if not b.is_tau and b == a.complement():
                    res.append((Action("tau"), Par(l2, r2)))
        return res
    if isinstance(e, Restrict):
        return [(a, Restrict(b, e.names)) for a, b in _steps(e.body, env, unfolding)
                if a.is_tau or a.name not in e.names]
    if isinstance(e, Rename):
        f = e.table
        return [(a.with_name(f.get(a.name, a.name)) if not a.is_tau else a, Rename(b, e.mapping))
                for a, b in _steps(e.body, env, unfolding)]
    raise TypeError(e)


def materialize(e: ProcExpr, env: RecDef = EMPTY_ENV, max_states: int = MAX_STATES) -> Lts:
    """Reachable transition graph of ``e`` with structurally interned states."""
    if max_states < 1:
        raise ValueError("max_states must be positive")
    ids = {}
    used = set()

    def intern(x):
        sid = ids.get(x)
        if sid is None:
            base = to_text(x)
            sid, k = base, 1
            while sid in used:
                sid, k = f"{base}#{k}", k + 1
            used.add(sid)
            ids[x] = sid
            if len(ids) > max_states:
                raise StateExplosion(max_states)
            queue.append(x)
        return sid

    queue = deque()
    start = intern(e)
    trans = set()
    while queue:
        x = queue.popleft()
        sx = ids[x]
        for a, y in sos_step(x, env):
            trans.add((sx, a, intern(y)))
    return Lts(tuple(ids.values()), start, frozenset(trans))


def materialize_name(name: str, env: RecDef, max_states: int = MAX_STATES) -> Lts:
    return materialize(NameRef(name), env, max_states)


# ---------------------------------------------------------------- guardedness

class Guardedness(enum.Enum):
    STRONG_UNIQUE = "StrongUnique"
    CONGRUENCE_UNIQUE = "CongruenceUnique"
    NONE = "None"


def guardedness(rd: RecDef) -> Guardedness:
    """Sufficient syntactic test for uniqueness of the solution of ``rd``."""
    strong_ok = True
    cong_ok = True

    def walk(e, guarded, visible, plain):
        nonlocal strong_ok, cong_ok
        if isinstance(e, NameRef):
            strong_ok &= guarded
            cong_ok &= visible and plain
        elif isinstance(e, Prefix):
            walk(e.body, True, visible or not e.action.is_tau, plain)
        elif isinstance(e, Choice):
            walk(e.left, guarded, visible, plain)
            walk(e.right, guarded, visible, plain)
        elif isinstance(e, Par):
            walk(e.left, guarded, visible, False)
            walk(e.right, guarded, visible, False)
        elif isinstance(e, (Restrict, Rename)):
            walk(e.body, guarded, visible, False)

    for _, rhs in rd.equations:
        walk(rhs, False, False, True)
    if not strong_ok:
        return Guardedness.NONE
    return Guardedness.CONGRUENCE_UNIQUE if cong_ok else Guardedness.STRONG_UNIQUE


def unfold(e: ProcExpr, env: RecDef, depth: int = 1) -> ProcExpr:
    """Replace name references by their right-hand sides ``depth`` times."""
    if depth <= 0:
        return e

    def sub(x):
        if isinstance(x, NameRef):
            return env[x.name]
        if isinstance(x, Prefix):
            return Prefix(x.action, sub(x.body))
        if isinstance(x, Choice):
            return Choice(sub(x.left), sub(x.right))
        if isinstance(x, Par):
            return Par(sub(x.left), sub(x.right))
        if isinstance(x, Restrict):
            return Restrict(sub(x.body), x.names)
        if isinstance(x, Rename):
            return Rename(sub(x.body), x.mapping)
        return x

    return unfold(sub(e), env, depth - 1)
