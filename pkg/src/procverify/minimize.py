"""Factor processes and minimization under ~, ≈ and ≅."""
from __future__ import annotations

from .equiv import state_classes
from .errors import NotAnEquivalence
from .lts import Lts, Relation, reachable_part


def _check_equivalence(p: Lts, eq: Relation):
    pairs = eq.pairs
    states = p.states
    if eq.left.states != states or eq.right.states != states:
        raise NotAnEquivalence("relation is not over the states of the process")
    for s in states:
        if (s, s) not in pairs:
            raise NotAnEquivalence(f"not reflexive at {s}")
    for a, b in pairs:
        if (b, a) not in pairs:
            raise NotAnEquivalence(f"not symmetric at {(a, b)}")
    succ = {}
    for a, b in pairs:
        succ.setdefault(a, set()).add(b)
    for a, bs in succ.items():
        for b in bs:
            if not succ.get(b, set()) <= bs:
                raise NotAnEquivalence(f"not transitive through {(a, b)}")


def quotient_by_classes(p: Lts, classes) -> Lts:
    """Quotient given a class label per state index."""
    members = {}
    for i, c in enumerate(classes):
        members.setdefault(c, []).append(p.states[i])
    name = {c: "[" + min(ms) + "]" for c, ms in members.items()}
    sid = [name[c] for c in classes]
    idx = p.index
    trans = frozenset((sid[idx[s]], a, sid[idx[t]]) for s, a, t in p.transitions)
    states = tuple(sorted(set(sid)))
    return Lts(states, sid[p.init_index], trans)


def quotient(p: Lts, eq: Relation) -> Lts:
    """Factor process of ``p`` by an equivalence on its states."""
    _check_equivalence(p, eq)
    cls = {}
    label = []
    for s in p.states:
        rep = min(b for a, b in eq.pairs if a == s)
        label.append(cls.setdefault(rep, rep))
    return quotient_by_classes(p, label)


def equivalence_relation(p: Lts, weak: bool = False) -> Relation:
    """``mu(P, P)`` (or its weak variant) as an explicit relation."""
    cls = state_classes(p, weak)
    by = {}
    for i, c in enumerate(cls):
        by.setdefault(c, []).append(p.states[i])
    pairs = frozenset((a, b) for ms in by.values() for a in ms for b in ms)
    return Relation(p, p, pairs)


def minimize(p: Lts, kind: str = "strong") -> Lts:
    """Reachable part quotiented by ``mu`` (strong) or ``mu_tau`` (weak, congruence).

    Weak quotients drop inert ``tau`` self-loops.  The congruence case keeps
    the one on the initial class when the initial state itself has a ``tau``
    move inside its class, so that the result stays congruent to ``p``.
    """
    if kind not in ("strong", "weak", "congruence", "cong"):
        raise ValueError(f"unknown minimization kind {kind!r}")
    q = reachable_part(p)
    cls = state_classes(q, weak=(kind != "strong"))
    m = quotient_by_classes(q, cls)
    if kind == "strong":
        return m
    i0 = q.init_index
    keep_root = kind != "weak" and any(a.is_tau and cls[j] == cls[i0] for a, j in q.succ[i0])
    trans = frozenset(t for t in m.transitions
                      if not (t[1].is_tau and t[0] == t[2] and not (keep_root and t[0] == m.initial)))
    return Lts(m.states, m.initial, trans)
