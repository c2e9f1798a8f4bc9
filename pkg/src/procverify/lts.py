"""Finite labelled transition systems and structural utilities."""
from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Iterable, Mapping, Optional

from .errors import SizeLimit, UnknownState

_NAME_RE = re.compile(r"^[A-Za-z0-9_]+$")

TAU, IN, OUT = "tau", "in", "out"

NOVALUE = None
_UNSET = object()


@dataclass(frozen=True, order=False)
class Action:
    """An action: ``tau``, an input ``a?`` or an output ``a!``.

    Concretized value-passing systems attach a ``value`` to inputs and outputs.
    """

    kind: str
    name: Optional[str] = None
    value: Any = _UNSET

    def __post_init__(self):
        if self.kind == TAU:
            if self.name is not None or self.value is not _UNSET:
                raise ValueError("tau carries no name or value")
        elif self.kind in (IN, OUT):
            if not self.name or not _NAME_RE.match(self.name):
                raise ValueError(f"bad action name {self.name!r}")
        else:
            raise ValueError(f"bad action kind {self.kind!r}")

    @property
    def is_tau(self) -> bool:
        return self.kind == TAU

    @property
    def valued(self) -> bool:
        return self.value is not _UNSET

    def complement(self) -> "Action":
        if self.kind == TAU:
            raise ValueError("tau has no complement")
        kind = OUT if self.kind == IN else IN
        return Action(kind, self.name, self.value)

    def with_name(self, name: str) -> "Action":
        if self.kind == TAU:
            return self
        return Action(self.kind, name, self.value)

    def unvalued(self) -> "Action":
        if self.kind == TAU:
            return self
        return Action(self.kind, self.name)

    def __str__(self):
        if self.kind == TAU:
            return "tau"
        s = self.name + ("?" if self.kind == IN else "!")
        if self.valued:
            s += _fmt_value(self.value)
        return s

    __repr__ = __str__

    def sort_key(self):
        return str(self)


def _fmt_value(v) -> str:
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, list) or getattr(v, "is_list", False):
        return "[" + ",".join(_fmt_value(x) for x in v) + "]"
    if isinstance(v, tuple):
        return "(" + ",".join(_fmt_value(x) for x in v) + ")"
    return str(v)


tau = Action(TAU)


def inp(name: str, value=_UNSET) -> Action:
    return Action(IN, name, value)


def out(name: str, value=_UNSET) -> Action:
    return Action(OUT, name, value)


def parse_action(text: str) -> Action:
    """Parse ``tau``, ``a?`` or ``a!``."""
    text = text.strip()
    if text == "tau":
        return tau
    if text.endswith("?"):
        return inp(text[:-1])
    if text.endswith("!"):
        return out(text[:-1])
    raise ValueError(f"cannot parse action {text!r}")


@dataclass(frozen=True)
class Lts:
    """A process ``(states, initial, transitions)``.

    States are strings; ``transitions`` is a frozenset of triples
    ``(source, action, target)``.
    """

    states: tuple
    initial: str
    transitions: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        states = tuple(self.states)
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "transitions", frozenset(self.transitions))
        sset = set(states)
        if len(sset) != len(states):
            raise ValueError("duplicate state ids")
        if self.initial not in sset:
            raise ValueError(f"initial state {self.initial!r} not among states")
        for s, a, t in self.transitions:
            if s not in sset or t not in sset:
                raise ValueError(f"transition endpoint outside states: {(s, a, t)}")
            if not isinstance(a, Action):
                raise TypeError(f"label {a!r} is not an Action")

    @classmethod
    def build(cls, initial, transitions: Iterable, states: Iterable = ()):
        """Construct from transitions, collecting states in first-seen order."""
        order = {initial: None}
        trans = []
        for s in states:
            order.setdefault(s, None)
        for s, a, t in transitions:
            if isinstance(a, str):
                a = parse_action(a)
            order.setdefault(s, None)
            order.setdefault(t, None)
            trans.append((s, a, t))
        return cls(tuple(order), initial, frozenset(trans))

    # cached indexing used by the algorithms
    @cached_property
    def index(self) -> dict:
        return {s: i for i, s in enumerate(self.states)}

    @cached_property
    def succ(self) -> tuple:
        """``succ[i]`` is a sorted tuple of ``(action, j)`` pairs."""
        idx = self.index
        out_ = [[] for _ in self.states]
        for s, a, t in self.transitions:
            out_[idx[s]].append((a, idx[t]))
        return tuple(tuple(sorted(set(x), key=lambda p: (str(p[0]), p[1]))) for x in out_)

    @cached_property
    def labels(self) -> tuple:
        return tuple(sorted({a for _, a, _ in self.transitions}, key=str))

    @property
    def init_index(self) -> int:
        return self.index[self.initial]

    def __len__(self):
        return len(self.states)

    def out_of(self, s: str):
        if s not in self.index:
            raise UnknownState(s)
        i = self.index[s]
        return [(a, self.states[j]) for a, j in self.succ[i]]

    def sorted_transitions(self):
        return sorted(self.transitions, key=lambda x: (x[0], str(x[1]), x[2]))

    def relabel_states(self, mapping: Mapping[str, str]) -> "Lts":
        return Lts(tuple(mapping[s] for s in self.states), mapping[self.initial],
                   frozenset((mapping[s], a, mapping[t]) for s, a, t in self.transitions))

    def __str__(self):
        lines = [f"initial {self.initial}", "states " + " ".join(sorted(self.states))]
        for s, a, t in self.sorted_transitions():
            lines.append(f"{s} -{a}-> {t}")
        return "\n".join(lines)


@dataclass(frozen=True)
class Relation:
    """A binary relation between the state sets of two processes."""

    left: Lts
    right: Lts
    pairs: frozenset

    def __post_init__(self):
        object.__setattr__(self, "pairs", frozenset(self.pairs))
        li, ri = self.left.index, self.right.index
        for a, b in self.pairs:
            if a not in li or b not in ri:
                raise ValueError(f"pair {(a, b)} outside left x right")

    def __contains__(self, pair):
        return pair in self.pairs

    def __len__(self):
        return len(self.pairs)

    def __iter__(self):
        return iter(sorted(self.pairs))

    def __le__(self, other: "Relation"):
        return self.pairs <= other.pairs

    def __repr__(self):
        return f"Relation({sorted(self.pairs)!r})"

    def inverse(self) -> "Relation":
        return Relation(self.right, self.left, frozenset((b, a) for a, b in self.pairs))

    def image(self, a) -> set:
        return {y for x, y in self.pairs if x == a}


def empty_process(name: str = "0") -> Lts:
    return Lts((name,), name, frozenset())


def _reachable_indices(p: Lts) -> list:
    seen = [False] * len(p.states)
    start = p.init_index
    seen[start] = True
    order = [start]
    dq = deque([start])
    while dq:
        i = dq.popleft()
        for _, j in p.succ[i]:
            if not seen[j]:
                seen[j] = True
                order.append(j)
                dq.append(j)
    return order


def reachable_states(p: Lts) -> set:
    return {p.states[i] for i in _reachable_indices(p)}


def reachable_part(p: Lts) -> Lts:
    """Restrict ``p`` to the states reachable from its initial state."""
    keep = reachable_states(p)
    if len(keep) == len(p.states):
        return p
    states = tuple(s for s in p.states if s in keep)
    trans = frozenset(tr for tr in p.transitions if tr[0] in keep)
    return Lts(states, p.initial, trans)


def deadlocks(p: Lts) -> set:
    """Reachable states without outgoing transitions."""
    return {p.states[i] for i in _reachable_indices(p) if not p.succ[i]}


def act_of(p: Lts, s: Optional[str] = None) -> set:
    """Visible labels of ``p``, or all labels leaving state ``s``."""
    if s is None:
        return {a for _, a, _ in p.transitions if not a.is_tau}
    if s not in p.index:
        raise UnknownState(s)
    return {a for a, _ in p.succ[p.index[s]]}


def names_of(p: Lts) -> set:
    return {a.name for _, a, _ in p.transitions if not a.is_tau}


ISO_LIMIT = 12


def isomorphic(p1: Lts, p2: Lts, limit: Optional[int] = ISO_LIMIT) -> Optional[dict]:
    """Find a label-preserving bijection of states mapping initial to initial.

    Returns the bijection as a dict or ``None``.  Candidates are pruned by
    iterated colour refinement before backtracking.
    """
    if limit is not None and max(len(p1.states), len(p2.states)) > limit:
        raise SizeLimit(f"isomorphism check limited to {limit} states")
    n = len(p1.states)
    if n != len(p2.states) or len(p1.transitions) != len(p2.transitions):
        return None
    if p1.labels != p2.labels:
        return None
    col1, col2 = _joint_colours(p1, p2)
    if sorted(col1) != sorted(col2):
        return None
    if col1[p1.init_index] != col2[p2.init_index]:
        return None
    succ1 = [set(x) for x in p1.succ]
    succ2 = [set(x) for x in p2.succ]
    pred1 = [set() for _ in range(n)]
    pred2 = [set() for _ in range(n)]
    for i in range(n):
        for a, j in succ1[i]:
            pred1[j].add((a, i))
        for a, j in succ2[i]:
            pred2[j].add((a, i))
    fwd = [-1] * n
    bwd = [-1] * n
    by_colour = {}
    for j, c in enumerate(col2):
        by_colour.setdefault(c, []).append(j)

    def consistent(i, j):
        for a, k in succ1[i]:
            if fwd[k] != -1 and (a, fwd[k]) not in succ2[j]:
                return False
        for a, k in pred1[i]:
            if fwd[k] != -1 and (a, fwd[k]) not in pred2[j]:
                return False
        return True

    # visit order: BFS from initial, then the rest
    order = _reachable_indices(p1)
    rest = [i for i in range(n) if i not in set(order)]
    order = order + rest

    def assign(pos):
        if pos == n:
            return True
        i = order[pos]
        cands = [p2.init_index] if i == p1.init_index else by_colour[col1[i]]
        for j in cands:
            if bwd[j] != -1 or not consistent(i, j):
                continue
            fwd[i], bwd[j] = j, i
            if assign(pos + 1):
                return True
            fwd[i], bwd[j] = -1, -1
        return False

    if not assign(0):
        return None
    return {p1.states[i]: p2.states[fwd[i]] for i in range(n)}


def _joint_colours(p1: Lts, p2: Lts):
    """Colour refinement run jointly so colours are comparable across systems."""
    n1 = len(p1.states)
    init = [0] * (n1 + len(p2.states))
    init[p1.init_index] = 1
    init[n1 + p2.init_index] = 1
    succ = [[(str(a), j) for a, j in x] for x in p1.succ] + \
           [[(str(a), j + n1) for a, j in x] for x in p2.succ]
    pred = [[] for _ in init]
    for i, lst in enumerate(succ):
        for a, j in lst:
            pred[j].append((a, i))
    col = init
    ncol = len(set(col))
    while True:
        sigs = [(col[i], tuple(sorted((a, col[j]) for a, j in succ[i])),
                 tuple(sorted((a, col[j]) for a, j in pred[i]))) for i in range(len(col))]
        table = {s: k for k, s in enumerate(sorted(set(sigs)))}
        new = [table[s] for s in sigs]
        if len(table) == ncol:
            return new[:n1], new[n1:]
        col, ncol = new, len(table)
