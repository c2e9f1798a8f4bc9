"""Brute-force validity over finite domains."""
from __future__ import annotations

import itertools
from typing import Iterable, Mapping, Optional

from ..errors import StateExplosion
from .expr import Expr, compile_expr, free_vars
from .types import VType

LIMIT = 200000


def valuations(types: Mapping[str, VType], names: Iterable[str], limit: int = LIMIT) -> Optional[list]:
    """All evaluations of ``names`` (sorted), or ``None`` above ``limit``."""
    names = sorted(names)
    total = 1
    for n in names:
        total *= types[n].size()
        if total > limit:
            return None
    doms = [types[n].domain() for n in names]
    return [dict(zip(names, combo)) for combo in itertools.product(*doms)]


def iter_valuations(types, names, limit: int = LIMIT):
    names = sorted(names)
    total = 1
    for n in names:
        total *= types[n].size()
    if total > limit:
        raise StateExplosion(limit, "evaluations")
    doms = [types[n].domain() for n in names]
    for combo in itertools.product(*doms):
        yield dict(zip(names, combo))


def counterexample(phi: Expr, types, limit: int = LIMIT) -> Optional[dict]:
    """An evaluation making ``phi`` false, or ``None`` if it is valid."""
    f = compile_expr(phi, types)
    for s in iter_valuations(types, free_vars(phi), limit):
        if not f(s):
            return s
    return None


def is_valid(phi: Expr, types, limit: int = LIMIT) -> bool:
    return counterexample(phi, types, limit) is None


def leq(phi: Expr, psi: Expr, types, limit: int = LIMIT) -> bool:
    """``phi <= psi``: every evaluation satisfying ``phi`` satisfies ``psi``."""
    f, g = compile_expr(phi, types), compile_expr(psi, types)
    for s in iter_valuations(types, free_vars(phi) | free_vars(psi), limit):
        if f(s) and not g(s):
            return False
    return True


def equivalent_exprs(a: Expr, b: Expr, types, limit: int = LIMIT) -> bool:
    fa, fb = compile_expr(a, types), compile_expr(b, types)
    for s in iter_valuations(types, free_vars(a) | free_vars(b), limit):
        if fa(s) != fb(s):
            return False
    return True


def satisfiable(phi: Expr, types, limit: int = LIMIT) -> bool:
    f = compile_expr(phi, types)
    return any(f(s) for s in iter_valuations(types, free_vars(phi), limit))
