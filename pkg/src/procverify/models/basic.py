"""Plain-process examples: vending machines, jobshop, dispatcher, scheduler, semaphore."""
from __future__ import annotations

from ..algebra import parallel_all, restrict
from ..calc import materialize_name
from ..errors import BadParams
from ..lts import Action, Lts, out, parse_action
from ..syntax.ccs import parse_ccs


def _act(a) -> Action:
    return a if isinstance(a, Action) else parse_action(a)


def cycle(actions, prefix: str = "c") -> Lts:
    """A loop ``s0 -a1-> s1 ... -an-> s0``; one state per action."""
    actions = [_act(a) for a in actions]
    if not actions:
        raise BadParams("a cycle needs at least one action")
    n = len(actions)
    states = tuple(f"{prefix}{i}" for i in range(n))
    trans = frozenset((states[i], a, states[(i + 1) % n]) for i, a in enumerate(actions))
    return Lts(states, states[0], trans)


def star(actions) -> Lts:
    """The process ``(a1 ... an)*``."""
    return cycle(actions, "q")


def hide(p: Lts, actions) -> Lts:
    """``(P | (~a1)* | ... | (~ak)*) \\ names(a1..ak)``: turn the ``ai`` into tau."""
    actions = [_act(a) for a in actions]
    if any(a.is_tau for a in actions):
        raise BadParams("cannot hide tau")
    parts = [p] + [star([a.complement()]) for a in actions]
    return restrict(parallel_all(parts), {a.name for a in actions})


# ---------------------------------------------------------------- vending machines

VENDING_1 = """
agent VM = in_coin?.pr_but?.out_choc!.VM;
"""

VENDING_2 = """
agent S0 = in_coin_1?.S1 + in_coin_2?.S2;
agent S1 = in_coin_1?.S2 + pr_but_tea?.out_tea!.S0;
agent S2 = pr_but_tea?.out_tea!.S1 + pr_but_cof?.out_cof!.S0;
"""


def vending(variant: int = 1) -> Lts:
    if variant == 1:
        return materialize_name("VM", parse_ccs(VENDING_1))
    if variant == 2:
        return materialize_name("S0", parse_ccs(VENDING_2))
    raise BadParams("vending variant must be 1 or 2")


# ---------------------------------------------------------------- jobshop

JOBSHOP = """
agent Jobber = in?.Start;
agent Start = get_and_work!.Using;
agent Using = put!.Finish;
agent Finish = out!.Jobber;
agent Mallet = get_and_work?.Busy;
agent Busy = put?.Mallet;
agent Jobshop = (Jobber | Jobber | Mallet) \\ {get_and_work, put};
agent AbsJobber = in?.Doing;
agent Doing = out!.AbsJobber;
agent AbsJobshop = AbsJobber | AbsJobber;
"""


def jobber() -> Lts:
    return cycle(["in?", "get_and_work!", "put!", "out!"], "j")


def mallet() -> Lts:
    return cycle(["get_and_work?", "put?"], "m")


def jobshop() -> Lts:
    """``(Jobber | Jobber | Mallet) \\ L`` over the full product of states."""
    return restrict(parallel_all([jobber(), jobber(), mallet()]), {"get_and_work", "put"})


def abs_jobshop() -> Lts:
    abs_jobber = cycle(["in?", "out!"], "a")
    return parallel_all([abs_jobber, abs_jobber])


# ---------------------------------------------------------------- dispatcher

def _check_n(n, lo=1, hi=None):
    if not isinstance(n, int) or n < lo or (hi is not None and n > hi):
        raise BadParams(f"n must be an integer in [{lo}, {hi if hi is not None else 'inf'}]")


def dispatcher_source(n: int = 2) -> str:
    _check_n(n)
    d = " + ".join(f"req{i}?.acq{i}!.rel{i}?.D" for i in range(1, n + 1))
    lines = [f"agent D = {d};"]
    for i in range(1, n + 1):
        lines.append(f"agent G{i} = req{i}!.acq{i}?.start!.finish!.rel{i}!.G{i};")
    hidden = ", ".join(f"{c}{i}" for i in range(1, n + 1) for c in ("req", "acq", "rel"))
    group = " | ".join(f"G{i}" for i in range(1, n + 1))
    lines.append(f"agent Sys = (D | {group}) \\ {{{hidden}}};")
    lines.append("agent Spec = start!.finish!.Spec;")
    lines.append("agent TauSpec = tau.Spec;")
    return "\n".join(lines) + "\n"


def dispatcher(n: int = 2, which: str = "Sys") -> Lts:
    return materialize_name(which, parse_ccs(dispatcher_source(n)))


# ---------------------------------------------------------------- scheduler

def _next(i, n):
    return i + 1 if i < n else 1


def scheduler_source(n: int = 2, cycler: str = "seq") -> str:
    """Ring of cyclers.

    ``cycler="seq"`` passes the token before finishing (``g_next! . beta_i!``);
    ``cycler="free"`` lets the two happen in either order.
    """
    _check_n(n)
    if cycler not in ("seq", "free"):
        raise BadParams("cycler must be 'seq' or 'free'")
    lines = ["agent Start = g1!.0;"]
    for i in range(1, n + 1):
        g = f"g{_next(i, n)}"
        if cycler == "seq":
            body = f"{g}!.beta{i}!.C{i}"
        else:
            body = f"(beta{i}!.{g}!.C{i} + {g}!.beta{i}!.C{i})"
        lines.append(f"agent C{i} = g{i}?.alpha{i}!.{body};")
    comps = " | ".join(f"C{i}" for i in range(1, n + 1))
    gammas = ", ".join(f"g{i}" for i in range(1, n + 1))
    lines.append(f"agent Sch = (Start | {comps}) \\ {{{gammas}}};")
    return "\n".join(lines) + "\n"


def scheduler(n: int = 2, cycler: str = "seq") -> Lts:
    return materialize_name("Sch", parse_ccs(scheduler_source(n, cycler)))


def alpha(i):
    return out(f"alpha{i}")


def beta(i):
    return out(f"beta{i}")


def sch0(n: int = 2) -> Lts:
    """Reference scheduler over pairs ``(i, X)``; ``X`` is a bitmask of active clients.

    ``alpha_i!`` is offered in ``(i, X)`` when ``i`` is not active;
    ``beta_j!`` for every active ``j``.
    """
    _check_n(n, 1, 4)

    def name(i, mask):
        members = ",".join(str(j) for j in range(1, n + 1) if mask >> (j - 1) & 1)
        return f"({i};{{{members}}})"

    states, trans = [], set()
    for i in range(1, n + 1):
        for mask in range(1 << n):
            s = name(i, mask)
            states.append(s)
            if not mask >> (i - 1) & 1:
                trans.add((s, alpha(i), name(_next(i, n), mask | 1 << (i - 1))))
            for j in range(1, n + 1):
                if mask >> (j - 1) & 1:
                    trans.add((s, beta(j), name(i, mask & ~(1 << (j - 1)))))
    return Lts(tuple(states), name(1, 0), frozenset(trans))


def scheduler_rotation_spec(n: int) -> Lts:
    """``(alpha1! ... alphan!)*``."""
    return star([alpha(i) for i in range(1, n + 1)])


def scheduler_session_spec(i: int) -> Lts:
    """``(alpha_i! beta_i!)*``."""
    return star([alpha(i), beta(i)])


def hide_all_but(p: Lts, n: int, i: int) -> Lts:
    hidden = [alpha(j) for j in range(1, n + 1) if j != i] + [beta(j) for j in range(1, n + 1) if j != i]
    return hide(p, hidden)


# ---------------------------------------------------------------- semaphore

def semaphore_source(n: int = 2, k: int = 2) -> str:
    _check_n(n)
    _check_n(k)
    lines = []
    for i in range(1, n + 1):
        proper = ".".join(f"a{i}{j}!" for j in range(1, k + 1))
        lines.append(f"agent P{i} = alpha{i}?.{proper}.beta{i}?.P{i};")
    lines.append("agent Sem = pi!.phi!.Sem;")
    comps = " | ".join(f"P{i}[pi/alpha{i}, phi/beta{i}]" for i in range(1, n + 1))
    lines.append(f"agent P = ({comps} | Sem) \\ {{pi, phi}};")
    sessions = " + ".join("tau." + ".".join(f"a{i}{j}!" for j in range(1, k + 1)) + ".Spec"
                          for i in range(1, n + 1))
    lines.append(f"agent Spec = {sessions};")
    return "\n".join(lines) + "\n"


def semaphore(n: int = 2, k: int = 2, which: str = "P") -> Lts:
    return materialize_name(which, parse_ccs(semaphore_source(n, k)))


# ---------------------------------------------------------------- small pairs

TRACE_PAIR = """
agent P1 = a?.(b?.0 + c?.0);
agent P2 = a?.b?.0 + a?.c?.0;
"""


__all__ = ["cycle", "star", "hide", "vending", "jobber", "mallet", "jobshop", "abs_jobshop",
           "dispatcher", "dispatcher_source", "scheduler", "scheduler_source", "sch0",
           "scheduler_rotation_spec", "scheduler_session_spec", "hide_all_but", "alpha", "beta",
           "semaphore", "semaphore_source", "JOBSHOP", "VENDING_1", "VENDING_2", "TRACE_PAIR"]
