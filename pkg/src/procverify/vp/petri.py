"""Petri nets and their encoding as value-passing processes."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from ..errors import CapacityTooSmall
from .expr import Var, and_, app, eq, lit
from .ops import Assign, CompositeOp, Guard
from .process import Transition, VpProcess
from .types import IntRange


@dataclass(frozen=True)
class PetriNet:
    """``transitions`` is a tuple of ``(name, inputs, outputs)`` with place sets."""
    places: tuple
    transitions: tuple
    marking0: tuple

    def __post_init__(self):
        object.__setattr__(self, "places", tuple(self.places))
        trs = tuple((n, frozenset(i), frozenset(o)) for n, i, o in self.transitions)
        object.__setattr__(self, "transitions", trs)
        m = self.marking0
        if isinstance(m, Mapping):
            m = tuple(m.get(p, 0) for p in self.places)
        object.__setattr__(self, "marking0", tuple(m))
        known = set(self.places)
        for n, i, o in trs:
            if not (i | o) <= known:
                raise ValueError(f"transition {n} uses undeclared places")
        if len(self.marking0) != len(self.places):
            raise ValueError("marking length differs from the number of places")

    def enabled(self, marking) -> list:
        idx = {p: k for k, p in enumerate(self.places)}
        return [n for n, i, _ in self.transitions if all(marking[idx[p]] > 0 for p in i)]

    def fire(self, marking, name) -> tuple:
        idx = {p: k for k, p in enumerate(self.places)}
        for n, i, o in self.transitions:
            if n == name:
                m = list(marking)
                for p in i:
                    if m[idx[p]] <= 0:
                        raise ValueError(f"{name} is not enabled")
                    m[idx[p]] -= 1
                for p in o:
                    m[idx[p]] += 1
                return tuple(m)
        raise KeyError(name)


def place_var(p: str) -> str:
    return f"x_{p}"


def petri_to_process(net: PetriNet, cap: int = 3) -> VpProcess:
    """Single control state with one guarded self-loop per net transition."""
    for p, k in zip(net.places, net.marking0):
        if k > cap:
            raise CapacityTooSmall(f"place {p} starts with {k} tokens, capacity {cap}")
    vars_ = tuple((place_var(p), IntRange(0, cap)) for p in net.places)
    init = and_(*[eq(Var(place_var(p)), lit(k)) for p, k in zip(net.places, net.marking0)])
    trs = []
    for name, ins, outs in net.transitions:
        guard = and_(*[app(">", Var(place_var(p)), lit(0)) for p in sorted(ins)])
        ops = [Guard(guard)]
        ops += [Assign(place_var(p), app("-", Var(place_var(p)), lit(1))) for p in sorted(ins)]
        ops += [Assign(place_var(p), app("+", Var(place_var(p)), lit(1))) for p in sorted(outs)]
        trs.append(Transition("s0", CompositeOp(tuple(ops)), "s0", name))
    return VpProcess(vars_, init, ("s0",), "s0", tuple(trs))
