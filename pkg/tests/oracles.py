"""Slow, direct implementations used to cross-check the library."""
from collections import deque
from itertools import product


def bfs(p):
    seen, todo = {p.initial}, deque([p.initial])
    while todo:
        s = todo.popleft()
        for src, _, dst in p.transitions:
            if src == s and dst not in seen:
                seen.add(dst)
                todo.append(dst)
    return seen


def moves(p, s):
    return {(a, t) for src, a, t in p.transitions if src == s}


def tau_closure(p, s):
    seen, todo = {s}, [s]
    while todo:
        x = todo.pop()
        for a, t in moves(p, x):
            if a.is_tau and t not in seen:
                seen.add(t)
                todo.append(t)
    return seen


def weak_moves(p, s):
    """Pairs (a, t) with s =a=> t; tau means zero or more internal steps."""
    out = {("tau", t) for t in tau_closure(p, s)}
    for x in tau_closure(p, s):
        for a, y in moves(p, x):
            if not a.is_tau:
                for t in tau_closure(p, y):
                    out.add((str(a), t))
    return out


def strong_moves(p, s):
    return {(str(a), t) for a, t in moves(p, s)}


def step(p1, p2, rel, weak=False):
    """The matching operator applied to a set of pairs."""
    m1 = {s: (weak_moves if weak else strong_moves)(p1, s) for s in p1.states}
    m2 = {s: (weak_moves if weak else strong_moves)(p2, s) for s in p2.states}
    strong1 = {s: strong_moves(p1, s) for s in p1.states}
    strong2 = {s: strong_moves(p2, s) for s in p2.states}
    out = set()
    for s, t in product(p1.states, p2.states):
        ok = all(any(b == a and (s2, t2) in rel for b, t2 in m2[t]) for a, s2 in strong1[s]) \
            and all(any(b == a and (s2, t2) in rel for b, s2 in m1[s]) for a, t2 in strong2[t])
        if ok:
            out.add((s, t))
    return out


def greatest(p1, p2, weak=False):
    rel = set(product(p1.states, p2.states))
    while True:
        nxt = step(p1, p2, rel, weak)
        if nxt == rel:
            return rel
        rel = nxt


def bisimilar(p1, p2, weak=False):
    return (p1.initial, p2.initial) in greatest(p1, p2, weak)


def traces(p, depth):
    out, frontier = {()}, {((), p.initial)}
    for _ in range(depth):
        nxt = set()
        for tr, s in frontier:
            for a, t in moves(p, s):
                nxt.add((tr + (str(a),), t))
        out |= {tr for tr, _ in nxt}
        frontier = nxt
    return out
