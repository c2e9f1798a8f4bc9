"""Operations on value-passing processes: parallel, prefix, choice, restriction, renaming."""
from __future__ import annotations

from typing import Iterable, Mapping

from ..algebra import fresh, pair_id
from ..errors import VariableClash, VpTypeError
from .expr import and_
from .ops import Assign, CompositeOp, Guard, In, Out, rename_co_names, rename_co_vars
from .process import Transition, VpProcess


def rename_variables(p: VpProcess, mapping: Mapping[str, str]) -> VpProcess:
    from .expr import rename_vars
    vars_ = tuple((mapping.get(n, n), t) for n, t in p.vars)
    trs = tuple(Transition(t.src, rename_co_vars(t.op, mapping), t.dst, t.label) for t in p.transitions)
    return p.replace(vars=vars_, init=rename_vars(p.init, mapping), transitions=trs)


def separate_variables(p1: VpProcess, p2: VpProcess, on_clash: str = "rename"):
    """Rename variables of ``p2`` that also occur in ``p1``.

    Returns ``(p2', mapping)``; with ``on_clash="error"`` a clash raises.
    """
    clash = set(p1.var_names) & set(p2.var_names)
    if not clash:
        return p2, {}
    if on_clash == "error":
        raise VariableClash(f"shared variables {sorted(clash)}")
    used = set(p1.var_names) | set(p2.var_names)
    mapping = {}
    for v in sorted(clash):
        new = fresh(v + "_", used)
        used.add(new)
        mapping[v] = new
    return rename_variables(p2, mapping), mapping


def _split(co: CompositeOp):
    body = co.body
    for i, op in enumerate(body):
        if isinstance(op, (In, Out)):
            return body[:i], op, body[i + 1:]
    return body, None, ()


def merge_handshake(co1: CompositeOp, co2: CompositeOp):
    """Internal CO for a matching input/output pair, or ``None``."""
    pre1, c1, suf1 = _split(co1)
    pre2, c2, suf2 = _split(co2)
    if c1 is None or c2 is None or c1.name != c2.name:
        return None
    if isinstance(c1, In) and isinstance(c2, Out):
        i, o = c1, c2
    elif isinstance(c1, Out) and isinstance(c2, In):
        i, o = c2, c1
    else:
        return None
    if (i.var is None) != (o.expr is None):
        raise VpTypeError(f"channel {c1.name}: valued and valueless ends do not match")
    mid = () if i.var is None else (Assign(i.var, o.expr, i.index),)
    return CompositeOp((Guard(and_(co1.cond, co2.cond)),) + pre1 + pre2 + mid + suf1 + suf2)


def vp_parallel(p1: VpProcess, p2: VpProcess, on_clash: str = "rename") -> VpProcess:
    """Product process with interleaving and merged handshakes."""
    p2, _ = separate_variables(p1, p2, on_clash)
    states = tuple(pair_id(a, b) for a in p1.states for b in p2.states)
    trs = []
    for t in p1.transitions:
        for b in p2.states:
            trs.append(Transition(pair_id(t.src, b), t.op, pair_id(t.dst, b)))
    for t in p2.transitions:
        for a in p1.states:
            trs.append(Transition(pair_id(a, t.src), t.op, pair_id(a, t.dst)))
    for t1 in p1.transitions:
        if t1.op.is_internal:
            continue
        for t2 in p2.transitions:
            if t2.op.is_internal:
                continue
            m = merge_handshake(t1.op, t2.op)
            if m is not None:
                trs.append(Transition(pair_id(t1.src, t2.src), m, pair_id(t1.dst, t2.dst)))
    return VpProcess(p1.vars + p2.vars, and_(p1.init, p2.init), states,
                     pair_id(p1.initial, p2.initial), tuple(trs))


def vp_parallel_all(procs: Iterable[VpProcess]) -> VpProcess:
    procs = list(procs)
    acc = procs[0]
    for p in procs[1:]:
        acc = vp_parallel(acc, p)
    return acc


def vp_prefix(co: CompositeOp, p: VpProcess) -> VpProcess:
    s = fresh("s", set(p.states))
    return p.replace(states=(s,) + p.states, initial=s,
                     transitions=(Transition(s, co, p.initial),) + p.transitions)


def vp_choice(p1: VpProcess, p2: VpProcess, on_clash: str = "rename") -> VpProcess:
    p2, _ = separate_variables(p1, p2, on_clash)
    used = set(p1.states)
    smap = {}
    for s in p2.states:
        n = s
        while n in used:
            n += "'"
        used.add(n)
        smap[s] = n
    trs2 = tuple(Transition(smap[t.src], t.op, smap[t.dst], t.label) for t in p2.transitions)
    new = fresh("s", used)
    init_moves = [Transition(new, t.op, t.dst) for t in p1.transitions if t.src == p1.initial]
    init_moves += [Transition(new, t.op, t.dst) for t in trs2 if t.src == smap[p2.initial]]
    return VpProcess(p1.vars + p2.vars, and_(p1.init, p2.init),
                     (new,) + p1.states + tuple(smap[s] for s in p2.states), new,
                     tuple(init_moves) + p1.transitions + trs2)


def vp_restrict(p: VpProcess, names: Iterable[str]) -> VpProcess:
    names = set(names)
    trs = tuple(t for t in p.transitions if t.op.comm is None or t.op.comm.name not in names)
    return p.replace(transitions=trs)


def vp_rename(p: VpProcess, f: Mapping[str, str]) -> VpProcess:
    trs = tuple(Transition(t.src, rename_co_names(t.op, f), t.dst, t.label) for t in p.transitions)
    return p.replace(transitions=trs)


def vp_combine(kind: str, *args, **kw) -> VpProcess:
    """Dispatch on ``kind`` in prefix, choice, parallel, restrict, rename."""
    table = {"prefix": vp_prefix, "choice": vp_choice, "parallel": vp_parallel,
             "restrict": vp_restrict, "rename": vp_rename}
    if kind not in table:
        raise ValueError(f"unknown combination {kind!r}")
    return table[kind](*args, **kw)
