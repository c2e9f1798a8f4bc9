"""Operations on processes: prefix, choice, parallel, restriction, renaming.

Every operation returns a fresh :class:`Lts`.  State names for new states
come from a deterministic counter, so equal inputs give byte-identical output.
"""
from __future__ import annotations

from typing import Iterable, Mapping

from .lts import Action, Lts, empty_process, reachable_part


def fresh(base: str, used) -> str:
    """Smallest ``base``, ``base1``, ``base2``... not in ``used``."""
    if base not in used:
        return base
    k = 1
    while f"{base}{k}" in used:
        k += 1
    return f"{base}{k}"


def with_initial(p: Lts, s: str) -> Lts:
    return Lts(p.states, s, p.transitions)


def nil() -> Lts:
    return empty_process("0")


def prefix(a: Action, p: Lts) -> Lts:
    """``a.P``: a new initial state with one ``a`` edge to the old initial."""
    if isinstance(a, str):
        from .lts import parse_action
        a = parse_action(a)
    if a.valued:
        raise ValueError("prefix takes unvalued actions")
    s = fresh("s", set(p.states))
    return Lts((s,) + p.states, s, p.transitions | {(s, a, p.initial)})


def _disjoint_copy(p2: Lts, used: set) -> Lts:
    mapping = {}
    taken = set(used) | set(p2.states)
    for s in p2.states:
        if s in used:
            t = s + "'"
            while t in taken:
                t += "'"
            taken.add(t)
            mapping[s] = t
        else:
            mapping[s] = s
    return p2.relabel_states(mapping) if any(k != v for k, v in mapping.items()) else p2


def choice(p1: Lts, p2: Lts) -> Lts:
    """``P1 + P2``.

    Both old initial states are kept and may become unreachable; call
    :func:`reachable_part` to drop them.
    """
    p2 = _disjoint_copy(p2, set(p1.states))
    used = set(p1.states) | set(p2.states)
    s0 = fresh("s", used)
    trans = set(p1.transitions) | set(p2.transitions)
    for p in (p1, p2):
        for s, a, t in p.transitions:
            if s == p.initial:
                trans.add((s0, a, t))
    return Lts((s0,) + p1.states + p2.states, s0, frozenset(trans))


def pair_id(s: str, t: str) -> str:
    return f"⟨{s},{t}⟩"


def parallel(p1: Lts, p2: Lts) -> Lts:
    """``P1 | P2`` over the full cartesian product of states."""
    states = tuple(pair_id(s, t) for s in p1.states for t in p2.states)
    trans = set()
    for s, a, s2 in p1.transitions:
        for t in p2.states:
            trans.add((pair_id(s, t), a, pair_id(s2, t)))
    for t, a, t2 in p2.transitions:
        for s in p1.states:
            trans.add((pair_id(s, t), a, pair_id(s, t2)))
    by_label = {}
    for t, b, t2 in p2.transitions:
        if not b.is_tau:
            by_label.setdefault(b, []).append((t, t2))
    tau = Action("tau")
    for s, a, s2 in p1.transitions:
        if a.is_tau:
            continue
        for t, t2 in by_label.get(a.complement(), ()):
            trans.add((pair_id(s, t), tau, pair_id(s2, t2)))
    return Lts(states, pair_id(p1.initial, p2.initial), frozenset(trans))


def parallel_all(procs: Iterable[Lts]) -> Lts:
    procs = list(procs)
    if not procs:
        return nil()
    acc = procs[0]
    for p in procs[1:]:
        acc = parallel(acc, p)
    return acc


def restrict(p: Lts, names: Iterable[str]) -> Lts:
    """``P \\ L``: drop edges whose name is in ``L``; tau always stays."""
    names = set(names)
    trans = frozenset(tr for tr in p.transitions if tr[1].is_tau or tr[1].name not in names)
    return Lts(p.states, p.initial, trans)


def rename(p: Lts, f: Mapping[str, str]) -> Lts:
    """``P[f]``: map names through ``f`` (identity where undefined)."""
    trans = frozenset((s, a.with_name(f.get(a.name, a.name)) if not a.is_tau else a, t)
                      for s, a, t in p.transitions)
    return Lts(p.states, p.initial, trans)


def compose_renamings(f: Mapping[str, str], g: Mapping[str, str]) -> dict:
    """The renaming ``g o f`` (apply ``f`` first)."""
    keys = set(f) | set(g)
    return {k: g.get(f.get(k, k), f.get(k, k)) for k in keys}


def hnf_terms(p: Lts):
    """Initial transitions of ``p`` as ``(action, residual)`` pairs."""
    return [(a, with_initial(p, t)) for a, t in p.out_of(p.initial)]


def sum_of_prefixes(terms) -> Lts:
    """Sum ``a1.P1 + ... + an.Pn``; the empty sum is ``0``."""
    acc = None
    for a, q in terms:
        term = prefix(a, q)
        acc = term if acc is None else choice(acc, term)
    return acc if acc is not None else nil()


def expand(terms, restricted: Iterable[str] = ()):
    """Summands of ``(P1[f1] | ... | Pn[fn]) \\ L`` in head normal form.

    ``terms`` is a list of ``(lts, renaming)``; each component's current state
    is its initial state.  Returns ``(action, descriptor)`` pairs where the
    descriptor is the tuple of component states after the move.
    """
    terms = [(p, dict(f or {})) for p, f in terms]
    L = set(restricted)
    start = tuple(p.initial for p, _ in terms)
    moves = []
    for i, (p, f) in enumerate(terms):
        for a, t in p.out_of(p.initial):
            b = a if a.is_tau else a.with_name(f.get(a.name, a.name))
            moves.append((i, b, t))
    out = []
    for i, b, t in moves:
        if b.is_tau or b.name not in L:
            desc = list(start)
            desc[i] = t
            out.append((b, tuple(desc)))
    tau = Action("tau")
    for x in range(len(moves)):
        i, b, t = moves[x]
        if b.is_tau:
            continue
        for y in range(x + 1, len(moves)):
            j, c, u = moves[y]
            if j == i or c.is_tau or c != b.complement():
                continue
            desc = list(start)
            desc[i], desc[j] = t, u
            out.append((tau, tuple(desc)))
    out.sort(key=lambda e: (str(e[0]), e[1]))
    return out


def system(terms, restricted: Iterable[str] = (), descriptor=None) -> Lts:
    """Build ``(P1[f1] | ... | Pn[fn]) \\ L``, optionally at given component states."""
    comps = []
    for k, (p, f) in enumerate(terms):
        if descriptor is not None:
            p = with_initial(p, descriptor[k])
        comps.append(rename(p, f or {}))
    return restrict(parallel_all(comps), restricted)


def materialize_expansion(terms, restricted: Iterable[str] = ()) -> Lts:
    """Sum of ``a.(system at descriptor)`` over the expansion summands."""
    parts = []
    for a, desc in expand(terms, restricted):
        parts.append((a, reachable_part(system(terms, restricted, desc))))
    return sum_of_prefixes(parts)
