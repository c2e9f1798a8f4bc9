"""Hennessy-Milner logic: formulas, evaluation and distinguishing formulas.

Three semantics are supported.  ``strong`` reads ``<a>`` as one ``a`` step.
``weak`` reads ``<tau>`` as zero or more taus and ``<a>`` as ``tau* a tau*``.
``plus`` is ``weak`` extended with ``<tau+>`` (at least one tau step).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .equiv import tau_plus, tau_star, weak_moves
from .errors import SemanticsMismatch
from .lts import Action, Lts

SEMANTICS = ("strong", "weak", "plus")


class Formula:
    """Base class of formula nodes."""

    def __and__(self, other):
        return And(self, other)

    def __invert__(self):
        return Not(self)

    def __str__(self):
        return to_text(self)

    @property
    def has_tau_plus(self) -> bool:
        return False

    def size(self) -> int:
        return 1


@dataclass(frozen=True, repr=False)
class Top(Formula):
    pass


@dataclass(frozen=True, repr=False)
class Bottom(Formula):
    pass


@dataclass(frozen=True, repr=False)
class Not(Formula):
    arg: Formula

    @property
    def has_tau_plus(self):
        return self.arg.has_tau_plus

    def size(self):
        return 1 + self.arg.size()


@dataclass(frozen=True, repr=False)
class And(Formula):
    left: Formula
    right: Formula

    @property
    def has_tau_plus(self):
        return self.left.has_tau_plus or self.right.has_tau_plus

    def size(self):
        return 1 + self.left.size() + self.right.size()


@dataclass(frozen=True, repr=False)
class Diamond(Formula):
    action: Action
    arg: Formula

    def __post_init__(self):
        if self.action.valued:
            raise ValueError("diamond actions are unvalued")

    @property
    def has_tau_plus(self):
        return self.arg.has_tau_plus

    def size(self):
        return 1 + self.arg.size()


@dataclass(frozen=True, repr=False)
class DiamondTauPlus(Formula):
    arg: Formula

    def __post_init__(self):
        if self.arg.has_tau_plus:
            raise ValueError("<tau+> takes a formula without <tau+>")

    @property
    def has_tau_plus(self):
        return True

    def size(self):
        return 1 + self.arg.size()


for _cls in (Top, Bottom, Not, And, Diamond, DiamondTauPlus):
    _cls.__repr__ = lambda self: f"Formula({to_text(self)!r})"

TOP, BOTTOM = Top(), Bottom()


def conj(parts) -> Formula:
    parts = list(parts)
    if not parts:
        return TOP
    acc = parts[0]
    for f in parts[1:]:
        acc = And(acc, f)
    return acc


def to_text(f: Formula) -> str:
    """Render in the text syntax accepted by the command line."""
    def prefix_arg(g):
        s = to_text(g)
        return f"({s})" if isinstance(g, And) else s

    if isinstance(f, Top):
        return "T"
    if isinstance(f, Bottom):
        return "F"
    if isinstance(f, Not):
        return "~" + prefix_arg(f.arg)
    if isinstance(f, And):
        right = to_text(f.right)
        if isinstance(f.right, And):
            right = f"({right})"
        return f"{to_text(f.left)} & {right}"
    if isinstance(f, Diamond):
        return f"<{f.action}>" + prefix_arg(f.arg)
    if isinstance(f, DiamondTauPlus):
        return "<tau+>" + prefix_arg(f.arg)
    raise TypeError(f)


# ---------------------------------------------------------------- evaluation

class _Model:
    """Successor structures of one process under one semantics."""

    def __init__(self, p: Lts, semantics: str):
        if semantics not in SEMANTICS:
            raise ValueError(f"unknown semantics {semantics!r}")
        self.p = p
        self.semantics = semantics
        n = len(p.states)
        if semantics == "strong":
            rows = [set(r) for r in p.succ]
        else:
            self.closure = tau_star(p)
            rows = weak_moves(p, self.closure)
        self.pred = {}
        for i, r in enumerate(rows):
            for a, j in r:
                self.pred.setdefault(a, [set() for _ in range(n)])[j].add(i)
        if semantics == "plus":
            self.plus_pred = [set() for _ in range(n)]
            for i in range(n):
                for j in tau_plus(p, i, self.closure):
                    self.plus_pred[j].add(i)
        self.memo = {}

    def sat(self, f: Formula) -> frozenset:
        got = self.memo.get(f)
        if got is not None:
            return got
        n = len(self.p.states)
        if isinstance(f, Top):
            res = frozenset(range(n))
        elif isinstance(f, Bottom):
            res = frozenset()
        elif isinstance(f, Not):
            res = frozenset(range(n)) - self.sat(f.arg)
        elif isinstance(f, And):
            res = self.sat(f.left) & self.sat(f.right)
        elif isinstance(f, Diamond):
            pred = self.pred.get(f.action)
            res = frozenset(i for j in self.sat(f.arg) for i in pred[j]) if pred else frozenset()
        elif isinstance(f, DiamondTauPlus):
            if self.semantics != "plus":
                raise SemanticsMismatch("<tau+> needs plus semantics")
            res = frozenset(i for j in self.sat(f.arg) for i in self.plus_pred[j])
        else:
            raise TypeError(f)
        self.memo[f] = res
        return res


def eval_formula(p: Lts, phi: Formula, semantics: str = "strong") -> int:
    """Value ``P(phi)`` as 0 or 1."""
    if phi.has_tau_plus and semantics != "plus":
        raise SemanticsMismatch("<tau+> needs plus semantics")
    return int(p.init_index in _Model(p, semantics).sat(phi))


# ---------------------------------------------------------------- distinguishing

def _refine_history(rows):
    """Partition refinement keeping every round's block array."""
    n = len(rows)
    block = [0] * n
    hist = [block]
    count = 1
    while True:
        sigs = [(block[i], frozenset((a, block[j]) for a, j in rows[i])) for i in range(n)]
        table = {}
        new = [table.setdefault(s, len(table)) for s in sigs]
        if len(table) == count:
            return hist
        hist.append(new)
        block, count = new, len(table)


class _Distinguisher:
    def __init__(self, rows):
        self.rows = [sorted(r, key=lambda x: (str(x[0]), x[1])) for r in rows]
        self.hist = _refine_history(self.rows)
        self.final = self.hist[-1]
        self.memo = {}

    def level(self, s, t):
        for k, blk in enumerate(self.hist):
            if blk[s] != blk[t]:
                return k
        return None

    def formula(self, s, t) -> Formula:
        """A formula true at ``s`` and false at ``t``."""
        key = (s, t)
        if key in self.memo:
            return self.memo[key]
        k = self.level(s, t)
        assert k is not None and k > 0
        prev = self.hist[k - 1]
        res = self._witness(s, t, prev)
        if res is None:
            res = Not(self._witness(t, s, prev))
        self.memo[key] = res
        return res

    def _witness(self, s, t, prev):
        t_sig = {(a, prev[j]) for a, j in self.rows[t]}
        for a, s2 in self.rows[s]:
            if (a, prev[s2]) in t_sig:
                continue
            answers = [j for b, j in self.rows[t] if b == a]
            if not answers:
                return Diamond(a, TOP)
            seen_cls, parts = set(), []
            for t2 in answers:
                if self.final[t2] in seen_cls:
                    continue
                seen_cls.add(self.final[t2])
                parts.append(self.formula(s2, t2))
            uniq = sorted(set(parts), key=to_text)
            return Diamond(a, conj(uniq))
        return None


def distinguish(p1: Lts, p2: Lts, semantics: str = "strong") -> Optional[Formula]:
    """A formula with different values on ``p1`` and ``p2``, or ``None`` if equivalent."""
    if semantics not in SEMANTICS:
        raise ValueError(f"unknown semantics {semantics!r}")
    for p in (p1, p2):
        valued = sorted({str(a) for a in p.labels if a.valued})
        if valued:
            raise ValueError(f"formulas use unvalued actions only; found {valued[0]}")
    n1 = len(p1.states)
    i1, i2 = p1.init_index, n1 + p2.init_index
    union = _union(p1, p2)
    if semantics == "strong":
        rows = [set(r) for r in union.succ]
    else:
        rows = weak_moves(union)
    d = _Distinguisher(rows)
    phi = None
    if d.final[i1] != d.final[i2]:
        phi = d.formula(i1, i2)
    elif semantics == "plus":
        closure = tau_star(union)
        phi = _root_formula(union, d, i1, i2, closure)
        if phi is None:
            phi = _root_formula(union, d, i2, i1, closure)
    if phi is None:
        return None
    if eval_formula(p1, phi, semantics) == eval_formula(p2, phi, semantics):
        raise AssertionError(f"distinguishing formula {phi} failed its re-check")
    return phi


def _root_formula(union, d, i, j, closure):
    """``<tau+>`` witness for an unmatched initial tau move of ``i``."""
    plus_j = sorted(tau_plus(union, j, closure))
    cls_j = {d.final[x] for x in plus_j}
    for a, s in union.succ[i]:
        if not a.is_tau or d.final[s] in cls_j:
            continue
        parts, seen = [], set()
        for t in plus_j:
            if d.final[t] not in seen:
                seen.add(d.final[t])
                parts.append(d.formula(s, t))
        return DiamondTauPlus(conj(sorted(set(parts), key=to_text)))
    return None


def _union(p1: Lts, p2: Lts) -> Lts:
    """Disjoint union keeping ``p1`` indices first; initial is ``p1``'s."""
    n1 = len(p1.states)
    st = tuple(f"1:{s}" for s in p1.states) + tuple(f"2:{s}" for s in p2.states)
    trans = frozenset((f"1:{s}", a, f"1:{t}") for s, a, t in p1.transitions) | \
        frozenset((f"2:{s}", a, f"2:{t}") for s, a, t in p2.transitions)
    u = Lts(st, st[p1.init_index], trans)
    assert u.index[f"2:{p2.initial}"] == n1 + p2.init_index
    return u
