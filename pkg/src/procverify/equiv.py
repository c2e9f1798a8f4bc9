"""Equivalence checking: strong, weak, congruence and trace equivalences.

Two engines compute the same relations.  The relation engine iterates the
matching operator over a boolean matrix from ``S1 x S2`` down to its greatest
fixed point (:func:`greatest_bisim`).  The partition engine refines blocks of
the disjoint union by move signatures and scales to thousands of states; it
backs :func:`equivalent` and minimization.  Tests cross-check both.
"""
from __future__ import annotations

import enum
from collections import deque
from typing import Optional

import numpy as np

from . import kernels
from .errors import SizeLimit
from .lts import Lts, Relation, tau

TRACE_LIMIT = 64


class EquivKind(enum.Enum):
    STRONG = "strong"
    WEAK = "weak"
    CONGRUENCE = "cong"
    TRACE = "trace"
    CHOICE_TRACE = "ctrace"

    @classmethod
    def parse(cls, x) -> "EquivKind":
        if isinstance(x, cls):
            return x
        aliases = {"congruence": "cong", "tracelanguage": "trace", "choicetrace": "ctrace"}
        x = str(x).lower()
        return cls(aliases.get(x, x))


class RelationKind(enum.Enum):
    BS = "BS"
    OBS = "OBS"
    OBS_PLUS = "OBSplus"
    BS_MOD_STRONG = "BSmodStrong"
    OBS_MOD_STRONG = "OBSmodStrong"
    OBS_MOD_WEAK = "OBSmodWeak"


# ---------------------------------------------------------------- moves

def tau_star(p: Lts) -> list:
    """``tau_star(p)[i]``: sorted indices reachable from ``i`` by zero or more taus."""
    n = len(p.states)
    off, dst = [0], []
    for i in range(n):
        dst.extend(j for a, j in p.succ[i] if a.is_tau)
        off.append(len(dst))
    coff, cdst = kernels.tau_closure(n, np.asarray(off, dtype=np.int64),
                                     np.asarray(dst, dtype=np.int64))
    return [cdst[coff[i]:coff[i + 1]].tolist() for i in range(n)]


def weak_moves(p: Lts, closure: Optional[list] = None) -> list:
    """Saturated moves: ``tau`` for tau*, and ``a`` for tau* a tau*."""
    if closure is None:
        closure = tau_star(p)
    res = []
    for i in range(len(p.states)):
        moves = {(tau, j) for j in closure[i]}
        for k in closure[i]:
            for a, m in p.succ[k]:
                if a.is_tau:
                    continue
                for j in closure[m]:
                    moves.add((a, j))
        res.append(moves)
    return res


def tau_plus(p: Lts, i: int, closure: Optional[list] = None) -> set:
    if closure is None:
        closure = tau_star(p)
    res = set()
    for a, j in p.succ[i]:
        if a.is_tau:
            res.update(closure[j])
    return res


def _csr(rows, label_ids):
    off, lab, dst = [0], [], []
    for row in rows:
        ent = sorted((label_ids[a], j) for a, j in row)
        lab.extend(e[0] for e in ent)
        dst.extend(e[1] for e in ent)
        off.append(len(lab))
    return (np.asarray(off, dtype=np.int64), np.asarray(lab, dtype=np.int64),
            np.asarray(dst, dtype=np.int64))


def _kernel_args(p1: Lts, p2: Lts, weak: bool):
    acts = sorted(set(p1.labels) | set(p2.labels) | {tau}, key=str)
    ids = {a: k for k, a in enumerate(acts)}
    c1 = _csr(p1.succ, ids)
    c2 = _csr(p2.succ, ids)
    if weak:
        r1 = _csr(weak_moves(p1), ids)
        r2 = _csr(weak_moves(p2), ids)
    else:
        r1, r2 = c1, c2
    return c1, r1, c2, r2


def _to_matrix(p1: Lts, p2: Lts, r: Relation) -> np.ndarray:
    m = np.zeros((len(p1.states), len(p2.states)), dtype=np.uint8)
    i1, i2 = p1.index, p2.index
    for a, b in r.pairs:
        m[i1[a], i2[b]] = 1
    return m


def _to_relation(p1: Lts, p2: Lts, m: np.ndarray) -> Relation:
    xs, ys = np.nonzero(m)
    return Relation(p1, p2, frozenset((p1.states[i], p2.states[j]) for i, j in zip(xs, ys)))


# ---------------------------------------------------------------- relation engine

def refine_step(p1: Lts, p2: Lts, mu: Relation, weak: bool = False) -> Relation:
    """The matching operator: ``mu'`` (strong) or ``mu'_tau`` (weak)."""
    args = _kernel_args(p1, p2, weak)
    return _to_relation(p1, p2, kernels.refine_step(_to_matrix(p1, p2, mu), *args))


def bisim_fixpoint(p1: Lts, p2: Lts, weak: bool = False):
    """Greatest fixed point from ``S1 x S2`` and the number of shrinking steps."""
    args = _kernel_args(p1, p2, weak)
    full = np.ones((len(p1.states), len(p2.states)), dtype=np.uint8)
    m, steps = kernels.greatest_fixpoint(full, *args)
    return _to_relation(p1, p2, m), int(steps)


def greatest_bisim(p1: Lts, p2: Lts, weak: bool = False) -> Relation:
    """``mu(P1, P2)`` or ``mu_tau(P1, P2)``."""
    return bisim_fixpoint(p1, p2, weak)[0]


# ---------------------------------------------------------------- partition engine

def _refine_blocks(rows, init=None) -> list:
    """Coarsest stable partition for signature ``{(label, block of target)}``."""
    n = len(rows)
    block = list(init) if init is not None else [0] * n
    count = len(set(block))
    while True:
        sigs = [(block[i], frozenset((a, block[j]) for a, j in rows[i])) for i in range(n)]
        table = {}
        new = [table.setdefault(s, len(table)) for s in sigs]
        if len(table) == count:
            return new
        block, count = new, len(table)


def _disjoint_union(p1: Lts, p2: Lts):
    n1 = len(p1.states)
    rows = [list(r) for r in p1.succ] + [[(a, j + n1) for a, j in r] for r in p2.succ]
    return n1, rows


def strong_classes_rows(rows) -> list:
    return _refine_blocks(rows)


def _tau_scc_collapse(rows):
    """Map states to representatives of their tau-strongly-connected component."""
    n = len(rows)
    tsucc = [[j for a, j in r if a.is_tau] for r in rows]
    index = [-1] * n
    low = [0] * n
    comp = [-1] * n
    onstack = [False] * n
    stack, counter, ncomp = [], 0, 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            v, k = work.pop()
            if k == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                onstack[v] = True
            recurse = False
            while k < len(tsucc[v]):
                w = tsucc[v][k]
                k += 1
                if index[w] == -1:
                    work.append((v, k))
                    work.append((w, 0))
                    recurse = True
                    break
                if onstack[w]:
                    low[v] = min(low[v], index[w])
            if recurse:
                continue
            if low[v] == index[v]:
                while True:
                    w = stack.pop()
                    onstack[w] = False
                    comp[w] = ncomp
                    if w == v:
                        break
                ncomp += 1
            if work:
                u = work[-1][0]
                low[u] = min(low[u], low[v])
    return comp, ncomp


def weak_classes_rows(rows) -> list:
    """Weak bisimilarity classes of a system given as successor rows."""
    # tau-cycles collapse without changing weak bisimilarity
    comp, nc = _tau_scc_collapse(rows)
    crows = [set() for _ in range(nc)]
    for i, r in enumerate(rows):
        for a, j in r:
            if a.is_tau and comp[i] == comp[j]:
                continue
            crows[comp[i]].add((a, comp[j]))
    # strong bisimilarity is finer; quotient by it first
    sb = _refine_blocks([list(r) for r in crows])
    nb = max(sb) + 1 if sb else 0
    qrows = [set() for _ in range(nb)]
    for i, r in enumerate(crows):
        for a, j in r:
            qrows[sb[i]].add((a, sb[j]))
    q = Lts(tuple(str(k) for k in range(nb)), "0" if nb else None,
            frozenset((str(i), a, str(j)) for i, r in enumerate(qrows) for a, j in r)) if nb else None
    sat = weak_moves(q)
    # translate back: q.states are "k" strings in order, index k
    wb = _refine_blocks([list(s) for s in sat])
    return [wb[sb[comp[i]]] for i in range(len(rows))]


def state_classes(p: Lts, weak: bool = False) -> list:
    """Block number per state index under ``~`` or ``≈``."""
    rows = [list(r) for r in p.succ]
    return weak_classes_rows(rows) if weak else _refine_blocks(rows)


def _union_classes(p1: Lts, p2: Lts, weak: bool):
    n1, rows = _disjoint_union(p1, p2)
    cls = weak_classes_rows(rows) if weak else _refine_blocks(rows)
    return cls[:n1], cls[n1:]


def bisim_relation_by_partition(p1: Lts, p2: Lts, weak: bool = False) -> Relation:
    c1, c2 = _union_classes(p1, p2, weak)
    by = {}
    for j, c in enumerate(c2):
        by.setdefault(c, []).append(p2.states[j])
    return Relation(p1, p2, frozenset((p1.states[i], t) for i, c in enumerate(c1) for t in by.get(c, ())))


# ---------------------------------------------------------------- congruence

def _congruent(p1: Lts, p2: Lts) -> bool:
    c1, c2 = _union_classes(p1, p2, True)
    i1, i2 = p1.init_index, p2.init_index
    if c1[i1] != c2[i2]:
        return False
    cl1, cl2 = tau_star(p1), tau_star(p2)
    plus1 = {c1[j] for j in tau_plus(p1, i1, cl1)}
    plus2 = {c2[j] for j in tau_plus(p2, i2, cl2)}
    for a, j in p1.succ[i1]:
        if a.is_tau and c1[j] not in plus2:
            return False
    for a, j in p2.succ[i2]:
        if a.is_tau and c2[j] not in plus1:
            return False
    return True


# ---------------------------------------------------------------- traces

def _check_size(*ps, limit=TRACE_LIMIT):
    for p in ps:
        if limit is not None and len(p.states) > limit:
            raise SizeLimit(f"trace equivalence limited to {limit} states")


def _post(succ, subset, a):
    return frozenset(j for i in subset for b, j in succ[i] if b == a)


def _enabled(succ, subset):
    return frozenset(b for i in subset for b, _ in succ[i])


def trace_equivalent(p1: Lts, p2: Lts, limit=TRACE_LIMIT) -> bool:
    """Equality of the prefix-closed trace sets (tau counted as a symbol)."""
    _check_size(p1, p2, limit=limit)
    start = (frozenset([p1.init_index]), frozenset([p2.init_index]))
    seen = {start}
    dq = deque([start])
    while dq:
        a, b = dq.popleft()
        ea, eb = _enabled(p1.succ, a), _enabled(p2.succ, b)
        if ea != eb:
            return False
        for x in ea:
            nxt = (_post(p1.succ, a, x), _post(p2.succ, b, x))
            if nxt not in seen:
                seen.add(nxt)
                dq.append(nxt)
    return True


def trace_classes(rows) -> list:
    """Per-state trace-language classes via subset construction and DFA minimization."""
    n = len(rows)
    subsets = {}
    order = []
    dq = deque()
    for i in range(n):
        s = frozenset([i])
        if s not in subsets:
            subsets[s] = len(order)
            order.append(s)
            dq.append(s)
    while dq:
        s = dq.popleft()
        for a in _enabled(rows, s):
            t = _post(rows, s, a)
            if t not in subsets:
                subsets[t] = len(order)
                order.append(t)
                dq.append(t)
    drows = [[(a, subsets[_post(rows, s, a)]) for a in _enabled(rows, s)] for s in order]
    # all reachable subsets are non-empty, hence accepting
    blocks = _refine_blocks(drows)
    return [blocks[subsets[frozenset([i])]] for i in range(n)]


def choice_trace_equivalent(p1: Lts, p2: Lts, act_only: bool = False, limit=TRACE_LIMIT) -> bool:
    """Trace equivalence refined by matching end states.

    For every trace ``w`` each end state of a run of one process over ``w``
    must be matched by an end state of the other with the same trace set.
    With ``act_only`` the weaker test compares only enabled labels.
    """
    _check_size(p1, p2, limit=limit)
    n1, rows = _disjoint_union(p1, p2)
    if act_only:
        keys = [frozenset(a for a, _ in r) for r in rows]
    else:
        keys = trace_classes(rows)
    k1, k2 = keys[:n1], keys[n1:]
    start = (frozenset([p1.init_index]), frozenset([p2.init_index]))
    seen = {start}
    dq = deque([start])
    while dq:
        a, b = dq.popleft()
        ka, kb = {k1[i] for i in a}, {k2[j] for j in b}
        if ka != kb:
            return False
        for x in _enabled(p1.succ, a) | _enabled(p2.succ, b):
            nxt = (_post(p1.succ, a, x), _post(p2.succ, b, x))
            if nxt not in seen:
                seen.add(nxt)
                dq.append(nxt)
    return True


# ---------------------------------------------------------------- public verdicts

def equivalent(p1: Lts, p2: Lts, kind="strong") -> bool:
    kind = EquivKind.parse(kind)
    if kind is EquivKind.STRONG:
        c1, c2 = _union_classes(p1, p2, False)
        return c1[p1.init_index] == c2[p2.init_index]
    if kind is EquivKind.WEAK:
        c1, c2 = _union_classes(p1, p2, True)
        return c1[p1.init_index] == c2[p2.init_index]
    if kind is EquivKind.CONGRUENCE:
        return _congruent(p1, p2)
    if kind is EquivKind.TRACE:
        return trace_equivalent(p1, p2)
    return choice_trace_equivalent(p1, p2)


def _self_matrix(p: Lts, weak: bool) -> np.ndarray:
    cls = np.asarray(state_classes(p, weak))
    return (cls[:, None] == cls[None, :]).astype(np.uint8)


def verify_relation(p1: Lts, p2: Lts, r: Relation, kind="BS"):
    """Check that ``r`` is a relation of the given kind.

    Returns ``(True, None)`` or ``(False, pair)`` with the first violating pair
    in sorted order; the initial pair is reported when it is missing.
    """
    kind = RelationKind(kind) if not isinstance(kind, RelationKind) else kind
    weak = kind not in (RelationKind.BS, RelationKind.BS_MOD_STRONG)
    m = _to_matrix(p1, p2, r)
    closed = m
    if kind in (RelationKind.BS_MOD_STRONG, RelationKind.OBS_MOD_STRONG, RelationKind.OBS_MOD_WEAK):
        w = kind is RelationKind.OBS_MOD_WEAK
        s1, s2 = _self_matrix(p1, w), _self_matrix(p2, w)
        closed = ((s1.astype(np.int64) @ m @ s2.astype(np.int64)) > 0).astype(np.uint8)
    i1, i2 = p1.init_index, p2.init_index
    init_pair = (p1.initial, p2.initial)
    if not closed[i1, i2]:
        return False, init_pair
    refined = kernels.refine_step(closed, *_kernel_args(p1, p2, weak))
    for a, b in sorted(r.pairs):
        if not refined[p1.index[a], p2.index[b]]:
            return False, (a, b)
    if kind is RelationKind.OBS_PLUS:
        if not m[i1, i2]:
            return False, init_pair
        cl1, cl2 = tau_star(p1), tau_star(p2)
        plus1, plus2 = tau_plus(p1, i1, cl1), tau_plus(p2, i2, cl2)
        for a, j in p1.succ[i1]:
            if a.is_tau and not any(m[j, k] for k in plus2):
                return False, init_pair
        for a, k in p2.succ[i2]:
            if a.is_tau and not any(m[j, k] for j in plus1):
                return False, init_pair
    return True, None
