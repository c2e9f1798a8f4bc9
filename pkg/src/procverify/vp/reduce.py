"""Reduction of value-passing processes: composition, gluing, dead assignments."""
from __future__ import annotations

from typing import Iterable

from .brute import equivalent_exprs, valuations
from .expr import FALSE, TRUE, App, Expr, Var, eval_expr, free_vars, or_, subterms
from .ops import Assign, CompositeOp, Guard, In, Out, seq_compose
from ..errors import StateExplosion
from .process import Transition, VpProcess, init_evaluations, solve_init
from .types import Bool

RULES = ("R1", "R2", "R3")
CHECK_LIMIT = 20000


def reduce(p: VpProcess, rules: Iterable[str] = RULES, max_passes: int = 100,
           safe: bool = True) -> VpProcess:
    """Apply the selected rules until nothing changes or ``max_passes`` is hit.

    With ``safe`` (the default) state removal additionally requires that the
    removed state is a deterministic internal step or is entered only by
    internal steps that leave no alternative at their source; without these
    checks composition can change weak behaviour.
    """
    rules = set(rules)
    bad = rules - set(RULES)
    if bad:
        raise ValueError(f"unknown rules {sorted(bad)}")
    for _ in range(max_passes):
        before = p
        if "R1" in rules:
            while True:
                q = _rule1_once(p, safe)
                if q is None:
                    break
                p = q
        if "R2" in rules:
            p = glue(p)
        if "R3" in rules:
            p = remove_inessential(p)
        if p == before:
            break
    return p


# ---------------------------------------------------------------- rule 1

def _rule1_once(p: VpProcess, safe: bool):
    for s in p.states:
        if s == p.initial:
            continue
        ins, outs = p.into(s), p.out_of(s)
        if not ins or not outs:
            continue
        if any(t.src == s for t in ins) or any(t.dst == s for t in outs):
            continue
        composed = []
        ok = True
        for a in ins:
            for b in outs:
                c = seq_compose(a.op, b.op)
                if c is None:
                    ok = False
                    break
                composed.append(Transition(a.src, c, b.dst))
            if not ok:
                break
        if not ok:
            continue
        if safe and not _removal_is_safe(p, s, ins, outs):
            continue
        keep = [t for t in p.transitions if t.src != s and t.dst != s]
        states = tuple(x for x in p.states if x != s)
        return p.replace(states=states, transitions=tuple(_dedupe(keep + composed)))
    return None


def _dedupe(trs):
    seen, out = set(), []
    for t in trs:
        k = (t.src, t.op, t.dst)
        if k not in seen:
            seen.add(k)
            out.append(t)
    return out


def _removal_is_safe(p, s, ins, outs) -> bool:
    types = p.types
    # the state takes exactly one internal step from every evaluation
    if all(t.op.is_internal for t in outs):
        guards = [t.op.cond for t in outs]
        fv = set().union(*(free_vars(g) for g in guards))
        sigmas = valuations(types, fv, CHECK_LIMIT)
        if sigmas is not None:
            if all(sum(bool(eval_expr(g, sg, types)) for g in guards) == 1 for sg in sigmas):
                return True
    # every entry is an internal step that is the only option at its source
    for a in ins:
        if not a.op.is_internal:
            return False
        if a.src == p.initial and _open_init_vars(p) & live_vars(p)[p.initial]:
            # the step would no longer commit the initial evaluation silently
            return False
        others = [t.op.cond for t in p.out_of(a.src) if t is not a]
        fv = free_vars(a.op.cond).union(*(free_vars(g) for g in others)) if others else free_vars(a.op.cond)
        sigmas = valuations(types, fv, CHECK_LIMIT)
        if sigmas is None:
            return False
        for sg in sigmas:
            if eval_expr(a.op.cond, sg, types) and any(eval_expr(g, sg, types) for g in others):
                return False
    return True


def _open_init_vars(p: VpProcess) -> set:
    """Variables on which the initial evaluations disagree."""
    try:
        seen = {}
        for sg in init_evaluations(p, CHECK_LIMIT):
            for n, v in sg.items():
                seen.setdefault(n, set()).add(v)
    except StateExplosion:
        fixed = solve_init(p) or {}
        return set(p.var_names) - set(fixed)
    return {n for n, vs in seen.items() if len(vs) > 1}


def _uses_defs(co: CompositeOp):
    """Variables read before being overwritten, and variables overwritten."""
    uses, defs = set(), set()
    for op in co.ops:
        if isinstance(op, Guard):
            uses |= free_vars(op.expr) - defs
        elif isinstance(op, Out):
            if op.expr is not None:
                uses |= free_vars(op.expr) - defs
        elif isinstance(op, Assign):
            read = free_vars(op.expr)
            if op.index is not None:
                read |= free_vars(op.index) | {op.var}
            uses |= read - defs
            if op.index is None:
                defs.add(op.var)
        elif isinstance(op, In) and op.var is not None:
            if op.index is not None:
                uses |= (free_vars(op.index) | {op.var}) - defs
            else:
                defs.add(op.var)
    return uses, defs


def live_vars(p: VpProcess) -> dict:
    """Per control state, the variables whose current value can still be read."""
    ud = [(t.src, t.dst) + _uses_defs(t.op) for t in p.transitions]
    live = {s: set() for s in p.states}
    changed = True
    while changed:
        changed = False
        for src, dst, uses, defs in ud:
            new = uses | (live[dst] - defs)
            if not new <= live[src]:
                live[src] |= new
                changed = True
    return live


# ---------------------------------------------------------------- rule 2

def glue(p: VpProcess) -> VpProcess:
    """Merge transitions with equal ends whose COs differ only in the guard."""
    groups = {}
    order = []
    for t in p.transitions:
        k = (t.src, t.dst, t.op.body)
        if k not in groups:
            groups[k] = []
            order.append(k)
        groups[k].append(t)
    out = []
    for k in order:
        ts = groups[k]
        if len(ts) == 1:
            out.append(ts[0])
            continue
        guards = []
        for t in ts:
            if t.op.cond not in guards:
                guards.append(t.op.cond)
        g = simplify_guard(or_(*guards), p.types) if len(guards) > 1 else guards[0]
        out.append(Transition(k[0], CompositeOp((Guard(g),) + k[2]), k[1]))
    return p.replace(transitions=tuple(out))


_BOOL_OPS = ("==", "!=", "<", "<=", ">", ">=", "between")


def _is_bool_atom(e: Expr, types) -> bool:
    if isinstance(e, Var):
        return isinstance(types.get(e.name), Bool)
    return isinstance(e, App) and e.op in _BOOL_OPS


def simplify_guard(g: Expr, types) -> Expr:
    """Replace ``g`` by ``true``, ``false`` or one of its own atoms when
    they agree with it on every evaluation of the declared domains."""
    candidates = [TRUE, FALSE]
    for sub in subterms(g):
        if sub not in candidates and _is_bool_atom(sub, types):
            candidates.append(sub)
    candidates.sort(key=lambda e: len(str(e)))
    for c in candidates:
        try:
            if equivalent_exprs(g, c, types, CHECK_LIMIT):
                return c
        except Exception:
            continue
    return g


# ---------------------------------------------------------------- rule 3

def essential_vars(p: VpProcess) -> set:
    """Least set containing guard and output variables and closed under
    right sides of assignments (and target indices) to its members."""
    ess = set()
    assigns = []
    for t in p.transitions:
        for op in t.op.ops:
            if isinstance(op, Guard):
                ess |= free_vars(op.expr)
            elif isinstance(op, Out) and op.expr is not None:
                ess |= free_vars(op.expr)
            elif isinstance(op, Assign):
                deps = free_vars(op.expr)
                if op.index is not None:
                    deps |= free_vars(op.index)
                assigns.append((op.var, deps))
            elif isinstance(op, In) and op.index is not None:
                assigns.append((op.var, free_vars(op.index)))
    changed = True
    while changed:
        changed = False
        for v, deps in assigns:
            if v in ess and not deps <= ess:
                ess |= deps
                changed = True
    return ess


def inessential_vars(p: VpProcess) -> set:
    return set(p.var_names) - essential_vars(p)


def remove_inessential(p: VpProcess) -> VpProcess:
    dead = inessential_vars(p)
    if not dead:
        return p
    out = []
    for t in p.transitions:
        ops = tuple(op for op in t.op.ops if not (isinstance(op, Assign) and op.var in dead))
        out.append(Transition(t.src, CompositeOp(ops), t.dst, t.label))
    return p.replace(transitions=tuple(_dedupe(out)))


__all__ = ["reduce", "glue", "remove_inessential", "essential_vars", "inessential_vars",
           "simplify_guard", "RULES"]
