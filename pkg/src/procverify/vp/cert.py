"""Invariants and state-indexed formula certificates of weak equivalence.

All inequalities between formulas are decided by enumerating the finite
domains of the variables they mention.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional

from ..errors import MalformedCT, RangeOverflow, VariableClash
from .brute import LIMIT, iter_valuations
from .expr import FALSE, TRUE, Expr, and_, compile_expr, free_vars, or_
from .ops import CompositeOp, Executor, In, Out, co_text, compose_path
from .process import Transition, VpProcess


@dataclass
class Verdict:
    ok: bool
    reason: str = ""
    witness: Optional[dict] = field(default=None)

    def __bool__(self):
        return self.ok


# ---------------------------------------------------------------- invariants

def invariant_holds(p: VpProcess, inv: Expr, limit: int = LIMIT) -> Verdict:
    """Check ``I_P <= inv`` and preservation of ``inv`` by every transition.

    A step that leaves a declared domain from a state satisfying ``inv``
    counts as a violation, except for the trivial invariant ``true``.
    """
    if inv == TRUE:
        return Verdict(True)
    types = p.types
    f_init, f_inv = compile_expr(p.init, types), compile_expr(inv, types)
    for s in iter_valuations(types, free_vars(p.init) | free_vars(inv), limit):
        if f_init(s) and not f_inv(s):
            return Verdict(False, "initial condition does not imply the invariant",
                           {"state": p.initial, "sigma": s})
    for t in p.transitions:
        ex = Executor(t.op, types)
        names = free_vars(inv) | t.op.vars()
        for s in iter_valuations(types, names, limit):
            if not f_inv(s) or not ex.enabled(s):
                continue
            try:
                succ = ex.successors(s)
            except RangeOverflow as exc:
                return Verdict(False, f"range overflow: {exc}",
                               {"state": t.src, "sigma": s, "op": co_text(t.op)})
            for _, s2 in succ:
                if not f_inv(s2):
                    return Verdict(False, "transition does not preserve the invariant",
                                   {"state": t.src, "sigma": s, "op": co_text(t.op), "after": s2})
    return Verdict(True)


# ---------------------------------------------------------------- diagrams

def _kind(co: CompositeOp):
    c = co.comm
    if c is None:
        return ("internal", None)
    return ("in" if isinstance(c, In) else "out", c.name)


def diagram_correct(phi: Expr, left: CompositeOp, right: CompositeOp, psi: Expr, types,
                    hyp: Expr = TRUE, limit: int = LIMIT) -> Verdict:
    """Correctness of the square ``phi / left, right / psi`` over disjoint variables."""
    kl, kr = _kind(left), _kind(right)
    if kl != kr:
        return Verdict(False, f"operator kinds differ: {kl} vs {kr}")
    names = free_vars(phi) | free_vars(psi) | free_vars(hyp) | left.vars() | right.vars()
    xl, xr = Executor(left, types, strict=False), Executor(right, types, strict=False)
    f_phi, f_psi, f_hyp = (compile_expr(e, types) for e in (phi, psi, hyp))
    values = [Executor.NO_INPUT]
    if kl[0] == "in":
        dl, dr = xl.input_domain(), xr.input_domain()
        if (dl is None) != (dr is None):
            return Verdict(False, "one input carries a value and the other does not")
        if dl is not None:
            values = [v for v in dl if v in set(dr)]
    for s in iter_valuations(types, names, limit):
        if not (f_phi(s) and f_hyp(s)):
            continue
        if not (xl.enabled(s) and xr.enabled(s)):
            continue
        for v in values:
            a1, s1 = xl.run(s, v)
            a2, s2 = xr.run(s1, v)
            if kl[0] == "out":
                if a1.valued != a2.valued:
                    return Verdict(False, "one output carries a value and the other does not")
                if a1.valued and a1.value != a2.value:
                    return Verdict(False, "output values differ", {"sigma": s})
            if not f_psi(s2):
                w = {"sigma": s}
                if v is not Executor.NO_INPUT:
                    w["value"] = v
                return Verdict(False, "target formula fails after the step", w)
    return Verdict(True)


# ---------------------------------------------------------------- certificates

def _mu_get(mu: Mapping, a, b) -> Expr:
    return mu.get((a, b), FALSE)


def enumerate_cts(p: VpProcess, start: str, max_len: int):
    """Composite transitions from ``start``: ``(path, composed CO, end)``."""
    out = [((), compose_path(()), start)]

    def walk(path, co, end, depth):
        if depth == max_len:
            return
        for t in p.out_of(end):
            nxt = compose_path([co, t.op]) if path else compose_path([t.op])
            if nxt is None:
                continue
            new = path + (t,)
            out.append((new, nxt, t.dst))
            walk(new, nxt, t.dst, depth + 1)

    walk((), out[0][1], start, 0)
    return out


def resolve_ct(p: VpProcess, start: str, refs):
    """Turn a list of transition references into ``(path, CO, end)``."""
    path = []
    at = start
    for r in refs:
        try:
            t = p.find_transition(r)
        except KeyError:
            raise MalformedCT(f"unknown transition {r!r}") from None
        if t.src != at:
            raise MalformedCT(f"{r!r} does not start at {at}")
        path.append(t)
        at = t.dst
    comms = sum(1 for t in path if not t.op.is_internal)
    if comms > 1:
        raise MalformedCT("more than one input or output along the path")
    co = compose_path([t.op for t in path])
    if co is None:
        raise MalformedCT(f"composition undefined along {list(refs)}")
    return tuple(path), co, at


def _lookup_ct(ct_sets, side, a1, a2, ref):
    if ct_sets is None:
        return None
    for key in ((side, a1, a2, ref), (side, "*", a2, ref), (side, a1, "*", ref), (side, "*", "*", ref)):
        if key in ct_sets:
            return ct_sets[key]
    return None


def verify_mu_certificate(p1: VpProcess, p2: VpProcess, mu: Mapping, ct_sets: Optional[Mapping] = None,
                          inv1: Expr = TRUE, inv2: Expr = TRUE, check_invariants: bool = True,
                          max_ct_len: int = 4, limit: int = LIMIT) -> Verdict:
    """Check a certificate that ``p1`` and ``p2`` are weakly equivalent.

    ``mu`` maps state pairs to formulas (missing pairs mean false).
    ``ct_sets`` maps ``(side, A1, A2, ref)`` to a list of paths, each a list of
    transition references of the other process; ``"*"`` matches any state.
    Entries that are absent are found by searching paths up to ``max_ct_len``.
    """
    clash = set(p1.var_names) & set(p2.var_names)
    if clash:
        raise VariableClash(f"certificate processes share variables {sorted(clash)}")
    types = dict(p1.types)
    types.update(p2.types)
    if check_invariants:
        for side, (p, inv) in enumerate(((p1, inv1), (p2, inv2)), start=1):
            v = invariant_holds(p, inv, limit)
            if not v:
                return Verdict(False, f"invariant {side} fails: {v.reason}", v.witness)
    hyp = and_(inv1, inv2)
    init = and_(p1.init, p2.init, hyp)
    mu0 = _mu_get(mu, p1.initial, p2.initial)
    f_init, f_mu0 = compile_expr(init, types), compile_expr(mu0, types)
    for s in iter_valuations(types, free_vars(init) | free_vars(mu0), limit):
        if f_init(s) and not f_mu0(s):
            return Verdict(False, "condition 1: initial conditions do not imply mu", {"sigma": s})
    for side, (pa, pb) in ((1, (p1, p2)), (2, (p2, p1))):
        for a in pa.states:
            for b in pb.states:
                phi = _mu_get(mu, a, b) if side == 1 else _mu_get(mu, b, a)
                if phi == FALSE:
                    continue
                for t in pa.out_of(a):
                    v = _check_transition(side, pa, pb, t, a, b, phi, mu, ct_sets, types, hyp,
                                          max_ct_len, limit)
                    if not v:
                        return v
    return Verdict(True)


def _check_transition(side, pa, pb, t: Transition, a, b, phi, mu, ct_sets, types, hyp, max_len, limit):
    ref = pa.transition_ref(t)
    where = f"side {side}, pair ({a}, {b}), transition {ref}"
    h = and_(t.op.cond, phi, hyp)
    f_h = compile_expr(h, types)
    hv = free_vars(h)
    if not any(f_h(s) for s in iter_valuations(types, hv, limit)):
        return Verdict(True)
    given = _lookup_ct(ct_sets, side, a, b, ref) if side == 1 else _lookup_ct(ct_sets, side, b, a, ref)
    if given is not None:
        cands = [resolve_ct(pb, b, refs) for refs in given]
    else:
        cands = enumerate_cts(pb, b, max_len)
    accepted = []
    for path, co, end in cands:
        psi = _mu_get(mu, t.dst, end) if side == 1 else _mu_get(mu, end, t.dst)
        left, right = (t.op, co) if side == 1 else (co, t.op)
        v = diagram_correct(phi, left, right, psi, types, hyp, limit)
        if v:
            accepted.append(co)
        elif given is not None:
            names = [pb.transition_ref(x) for x in path]
            return Verdict(False, f"{where}: diagram with {names} incorrect: {v.reason}", v.witness)
    cover = or_(*[co.cond for co in accepted])
    f_cover = compile_expr(cover, types)
    for s in iter_valuations(types, hv | free_vars(cover), limit):
        if f_h(s) and not f_cover(s):
            return Verdict(False, f"{where}: composite transitions do not cover the guard", {"sigma": s})
    return Verdict(True)


__all__ = ["Verdict", "invariant_holds", "diagram_correct", "verify_mu_certificate",
           "enumerate_cts", "resolve_ct"]
