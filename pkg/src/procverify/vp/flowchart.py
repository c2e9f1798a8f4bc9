"""Flowcharts and their translation into value-passing processes.

A flowchart is a set of nodes and a list of edges.  Every edge carries a
point name; points become the states of the resulting process.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from ..errors import MalformedFlowchart
from .expr import Expr, not_
from .ops import Assign, CompositeOp, Guard, In, Out
from .process import Transition, VpProcess

KINDS = ("start", "assign", "cond", "send", "recv", "choice", "join", "halt")


@dataclass(frozen=True)
class Node:
    kind: str
    payload: object = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise MalformedFlowchart(f"unknown node kind {self.kind!r}")


@dataclass(frozen=True)
class Edge:
    point: str
    src: str
    dst: str
    sign: Optional[str] = None


@dataclass
class Flowchart:
    vars: tuple
    nodes: dict
    edges: list = field(default_factory=list)

    def edge(self, point, src, dst, sign=None):
        self.edges.append(Edge(point, src, dst, sign))
        return self


def start(init: Expr) -> Node:
    return Node("start", init)


def assign(var: str, e: Expr, index=None) -> Node:
    return Node("assign", Assign(var, e, index))


def cond(b: Expr) -> Node:
    return Node("cond", b)


def send(name: str, e: Optional[Expr] = None) -> Node:
    return Node("send", Out(name, e))


def recv(name: str, var: Optional[str] = None, index=None) -> Node:
    return Node("recv", In(name, var, index))


CHOICE, JOIN, HALT = Node("choice"), Node("join"), Node("halt")


def _check(fc: Flowchart):
    points = [e.point for e in fc.edges]
    if len(set(points)) != len(points):
        raise MalformedFlowchart("edge points must be distinct")
    for e in fc.edges:
        for n in (e.src, e.dst):
            if n not in fc.nodes:
                raise MalformedFlowchart(f"edge {e.point} refers to unknown node {n}")
    starts = [n for n, nd in fc.nodes.items() if nd.kind == "start"]
    if len(starts) != 1:
        raise MalformedFlowchart(f"exactly one start node required, found {len(starts)}")
    outs = {n: [e for e in fc.edges if e.src == n] for n in fc.nodes}
    ins = {n: [e for e in fc.edges if e.dst == n] for n in fc.nodes}
    for n, nd in fc.nodes.items():
        k = nd.kind
        if k in ("start", "assign", "send", "recv", "join") and len(outs[n]) != 1:
            raise MalformedFlowchart(f"node {n} ({k}) needs exactly one outgoing edge")
        if k == "start" and ins[n]:
            raise MalformedFlowchart("the start node has no incoming edges")
        if k == "cond":
            signs = sorted(e.sign for e in outs[n])
            if signs not in (["+"], ["+", "-"]):
                raise MalformedFlowchart(f"conditional node {n} needs a '+' edge and optionally a '-' edge")
        if k == "choice" and len(ins[n]) != 1:
            raise MalformedFlowchart(f"choice node {n} needs exactly one incoming edge")
        if k == "halt" and outs[n]:
            raise MalformedFlowchart(f"halt node {n} has outgoing edges")
    return starts[0], ins, outs


def flowchart_to_process(fc: Flowchart) -> VpProcess:
    """Points become states; choice and join points are merged away."""
    s_node, ins, outs = _check(fc)
    parent = {e.point: e.point for e in fc.edges}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    removed = set()
    for n, nd in fc.nodes.items():
        if nd.kind == "choice":
            keep = ins[n][0].point
            for e in outs[n]:
                removed.add(e.point)
                parent[find(e.point)] = find(keep)
        elif nd.kind == "join":
            keep = outs[n][0].point
            for e in ins[n]:
                removed.add(e.point)
                parent[find(e.point)] = find(keep)
    # name each class by a surviving point
    members = {}
    for e in fc.edges:
        members.setdefault(find(e.point), []).append(e.point)
    name = {}
    for root, ms in members.items():
        alive = [m for m in ms if m not in removed] or ms
        name[root] = min(alive)

    def state(point):
        return name[find(point)]

    trs = []
    for n, nd in fc.nodes.items():
        if nd.kind in ("choice", "join", "start", "halt"):
            continue
        for f1 in ins[n]:
            for f2 in outs[n]:
                if nd.kind == "cond":
                    g = nd.payload if f2.sign == "+" else not_(nd.payload)
                    co = CompositeOp((Guard(g),))
                else:
                    co = CompositeOp.of(nd.payload)
                trs.append(Transition(state(f1.point), co, state(f2.point)))
    initial = state(outs[s_node][0].point)
    order = []
    for e in fc.edges:
        s = state(e.point)
        if s not in order:
            order.append(s)
    return VpProcess(fc.vars, fc.nodes[s_node].payload, tuple(order), initial, tuple(trs))
