"""Seeded random runs of plain and value-passing processes."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Optional

from ..errors import BadParams
from ..lts import Lts
from ..vp import Executor, VpProcess, compile_expr, solve_init


@dataclass
class Run:
    """A finished simulation.

    ``trace`` lists the performed actions (tau included).  ``state`` is the
    last control state and ``sigma`` the last evaluation (empty for plain
    processes).  ``deadlock`` tells whether the run stopped early.
    """
    trace: list = field(default_factory=list)
    states: list = field(default_factory=list)
    state: Optional[str] = None
    sigma: dict = field(default_factory=dict)
    deadlock: bool = False

    @property
    def steps(self) -> int:
        return len(self.trace)

    def visible(self, name: Optional[str] = None) -> list:
        return [a for a in self.trace if not a.is_tau and (name is None or a.name == name)]

    def values(self, name: str) -> list:
        """Values carried by the visible actions on ``name``."""
        return [a.value for a in self.visible(name)]


def simulate(p, steps: int, seed: int = 0, max_init_tries: int = 10000) -> Run:
    if not isinstance(steps, int) or steps < 0:
        raise BadParams("steps must be a non-negative integer")
    rng = random.Random(seed)
    if isinstance(p, Lts):
        return _simulate_lts(p, steps, rng)
    if isinstance(p, VpProcess):
        return _simulate_vp(p, steps, rng, max_init_tries)
    raise TypeError(f"cannot simulate {type(p).__name__}")


def _simulate_lts(p: Lts, steps: int, rng) -> Run:
    run = Run(state=p.initial, states=[p.initial])
    for _ in range(steps):
        moves = sorted(p.out_of(run.state), key=lambda m: (str(m[0]), m[1]))
        if not moves:
            run.deadlock = True
            return run
        a, t = rng.choice(moves)
        run.trace.append(a)
        run.state = t
        run.states.append(t)
    run.deadlock = not p.out_of(run.state)
    return run


class _Domains:
    def __init__(self):
        self.cache = {}

    def __call__(self, t):
        d = self.cache.get(t)
        if d is None:
            d = self.cache[t] = t.domain()
        return d


def initial_sample(p: VpProcess, rng, tries: int = 10000, domains=None) -> dict:
    """A random evaluation satisfying the initial condition."""
    domains = domains or _Domains()
    types = p.types
    fixed = solve_init(p)
    if fixed is None:
        raise BadParams("the initial condition is unsatisfiable")
    rest = [n for n in p.var_names if n not in fixed]
    check = compile_expr(p.init, types)
    for _ in range(tries):
        s = dict(fixed)
        for n in rest:
            s[n] = rng.choice(domains(types[n]))
        if check(s):
            return {n: s[n] for n in p.var_names}
    raise BadParams(f"no initial evaluation found in {tries} samples")


def _simulate_vp(p: VpProcess, steps: int, rng, tries: int) -> Run:
    domains = _Domains()
    execs = {}
    for t in p.transitions:
        execs.setdefault(t.src, []).append((Executor(t.op, p.types), t.dst))
    sigma = initial_sample(p, rng, tries, domains)
    run = Run(state=p.initial, sigma=sigma, states=[p.initial])
    for _ in range(steps):
        enabled = [(ex, dst) for ex, dst in execs.get(run.state, ()) if ex.enabled(run.sigma)]
        if not enabled:
            run.deadlock = True
            return run
        ex, dst = rng.choice(enabled)
        if ex.input_domain() is None:
            a, s2 = ex.run(run.sigma)
        else:
            a, s2 = ex.run(run.sigma, rng.choice(domains(ex.input_type)))
        run.trace.append(a)
        run.state, run.sigma = dst, s2
        run.states.append(dst)
    run.deadlock = not any(ex.enabled(run.sigma) for ex, _ in execs.get(run.state, ()))
    return run


def in_order(sent, delivered) -> bool:
    """``delivered`` is a prefix of ``sent``: no loss in the middle, no
    duplicates, no reordering."""
    return list(delivered) == list(sent)[:len(delivered)]


__all__ = ["Run", "simulate", "initial_sample", "in_order"]
