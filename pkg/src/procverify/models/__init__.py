"""Named example models.

``build(name, params)`` returns an :class:`~procverify.lts.Lts`, a
:class:`~procverify.vp.VpProcess` or a :class:`~procverify.calc.RecDef`.
Parameters may be given as Python values or as the strings used on the
command line (``n=3``, ``U=1,4``, ``loss=off``).
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Callable

from ..calc import RecDef
from ..errors import BadParams, UnknownModel
from ..lts import Lts, parse_action
from ..syntax.ccs import format_ccs, lts_to_recdef, parse_ccs
from ..syntax.vpm import format_vpm
from ..vp import VpProcess
from . import basic, protocols, valued
from .simulate import Run, in_order, simulate

FILES = Path(__file__).parent / "files"


def _int(v):
    if isinstance(v, bool):
        raise BadParams(f"expected an integer, got {v!r}")
    try:
        return int(v)
    except (TypeError, ValueError):
        raise BadParams(f"expected an integer, got {v!r}") from None


def _bool(v):
    if isinstance(v, bool):
        return v
    s = str(v).lower()
    if s in ("1", "true", "on", "yes"):
        return True
    if s in ("0", "false", "off", "no"):
        return False
    raise BadParams(f"expected on/off, got {v!r}")


def _ints(v):
    if isinstance(v, str):
        v = [x for x in v.replace(" ", "").split(",") if x]
    return tuple(_int(x) for x in v)


def _words(v):
    if isinstance(v, str):
        v = [x for x in v.replace(" ", "").split(",") if x]
    return tuple(str(x) for x in v)


def _str(v):
    return str(v)


@dataclass(frozen=True)
class Model:
    name: str
    make: Callable
    params: dict
    doc: str = ""

    def build(self, params=None):
        params = dict(params or {})
        unknown = set(params) - set(self.params)
        if unknown:
            raise BadParams(f"model {self.name} has no parameter {sorted(unknown)[0]!r}"
                            f" (known: {', '.join(sorted(self.params)) or 'none'})")
        kw = {}
        for k, (conv, default) in self.params.items():
            kw[k] = conv(params[k]) if k in params else default
        return self.make(**kw)


def _hide(of, actions, n):
    inner = build(of, {"n": n} if "n" in REGISTRY[of].params else {})
    if not isinstance(inner, Lts):
        raise BadParams("hide applies to plain processes")
    return basic.hide(inner, [parse_action(a) for a in actions])


def _star(actions):
    return basic.star([parse_action(a) for a in actions])


def _trace_pair(which):
    from ..calc import materialize_name
    if which not in ("P1", "P2"):
        raise BadParams("which must be P1 or P2")
    return materialize_name(which, parse_ccs(basic.TRACE_PAIR))


def _buffer(n, reduced, mes):
    return valued.buffer_reduced(n, mes) if reduced else valued.buffer(n, mes)


_MES = (_words, valued.MES)

REGISTRY = {m.name: m for m in [
    Model("vending", basic.vending, {"variant": (_int, 1)}, "vending machine"),
    Model("jobshop", basic.jobshop, {}, "two jobbers sharing a mallet, full product"),
    Model("abs_jobshop", basic.abs_jobshop, {}, "two abstract jobbers"),
    Model("dispatcher", basic.dispatcher, {"n": (_int, 2), "which": (_str, "Sys")},
          "room dispatcher; which = Sys, Spec or TauSpec"),
    Model("scheduler", basic.scheduler, {"n": (_int, 2), "cycler": (_str, "seq")},
          "ring of cyclers"),
    Model("sch0", basic.sch0, {"n": (_int, 2)}, "reference scheduler over (i, X) pairs"),
    Model("semaphore", basic.semaphore, {"n": (_int, 2), "k": (_int, 2), "which": (_str, "P")},
          "processes sharing a semaphore; which = P or Spec"),
    Model("star", _star, {"actions": (_words, ("a?",))}, "(a1 ... an)*"),
    Model("hide", _hide, {"of": (_str, "scheduler"), "actions": (_words, ("beta1!", "beta2!")),
                          "n": (_int, 2)}, "hide(P, a1, ..., ak)"),
    Model("trace_pair", _trace_pair, {"which": (_str, "P1")}, "a?.(b?.0 + c?.0) and a?.b?.0 + a?.c?.0"),
    Model("buf", valued.buf, {"mes": _MES}, "one-place buffer"),
    Model("buffer", _buffer, {"n": (_int, 1), "reduced": (_bool, False), "mes": _MES},
          "buffer of capacity n from its flowchart"),
    Model("buffer_chain", valued.buffer_chain, {"n1": (_int, 1), "n2": (_int, 1), "mes": _MES},
          "two buffers in sequence"),
    Model("separation", lambda U, V: valued.separation(U, V), {"U": (_ints, (3,)), "V": (_ints, (1, 2))},
          "separation of sets"),
    Model("square", valued.square, {"vals": (_ints, (1, 2))}, "Dup feeding Mul"),
    Model("square_spec", valued.square_spec, {"vals": (_ints, (1, 2))}, "In?z then Out!(z*z)"),
    Model("square_spec_buffered", valued.square_spec_buffered, {"vals": (_ints, (1, 2))},
          "a buffer in front of square_spec"),
    Model("dup", valued.dup, {"vals": (_ints, (1, 2))}, "duplicator"),
    Model("mul", valued.mul, {"vals": (_ints, (1, 2))}, "multiplier"),
    Model("petri", valued.petri_example, {"cap": (_int, 3)}, "producer/consumer Petri net"),
    Model("simple_protocol", protocols.simple_protocol, {"packets": (_int, 2)},
          "sender, timer, channel and receiver without sequence numbers"),
    Model("spec_buf", protocols.spec_buf, {"packets": (_int, 2)}, "protocol specification"),
    Model("abp", protocols.abp, {"packets": (_int, 2)}, "one-way alternating bit protocol"),
    Model("abp_reduced", protocols.abp_reduced, {"packets": (_int, 2)},
          "alternating bit protocol after reduction"),
    Model("abp2", protocols.abp2, {"packets": (_int, 2), "cap": (_int, 1), "loss": (_bool, True)},
          "duplex alternating bit protocol"),
    Model("swp_gbn", protocols.gbn, {"n": (_int, 4), "packets": (_int, 2), "cap": (_int, 2),
                                     "loss": (_bool, True)}, "sliding window, go-back-n"),
    Model("swp_sr", protocols.sr, {"n": (_int, 4), "packets": (_int, 2), "cap": (_int, 2),
                                   "loss": (_bool, True)}, "sliding window, selective repeat"),
]}

# Models with a hand-written .ccs source keep their agent names.
_CCS_SOURCES = {
    "vending": lambda p: basic.VENDING_1 if _int(p.get("variant", 1)) == 1 else basic.VENDING_2,
    "jobshop": lambda p: basic.JOBSHOP,
    "abs_jobshop": lambda p: basic.JOBSHOP,
    "dispatcher": lambda p: basic.dispatcher_source(_int(p.get("n", 2))),
    "scheduler": lambda p: basic.scheduler_source(_int(p.get("n", 2)), str(p.get("cycler", "seq"))),
    "semaphore": lambda p: basic.semaphore_source(_int(p.get("n", 2)), _int(p.get("k", 2))),
    "trace_pair": lambda p: basic.TRACE_PAIR,
}


def names() -> list:
    return sorted(REGISTRY)


def build(name: str, params=None):
    model = REGISTRY.get(name)
    if model is None:
        raise UnknownModel(f"unknown model {name!r}; known: {', '.join(names())}")
    return model.build(params)


def model_text(name: str, params=None) -> str:
    """The model as a ``.ccs`` or ``.vpm`` document."""
    params = dict(params or {})
    obj = build(name, params)
    if name in _CCS_SOURCES:
        return _CCS_SOURCES[name](params).lstrip()
    if isinstance(obj, VpProcess):
        return format_vpm(obj)
    if isinstance(obj, RecDef):
        return format_ccs(obj)
    rd, top = lts_to_recdef(obj, prefix=_agent_prefix(name))
    return f"# initial agent: {top}\n" + format_ccs(rd)


def _agent_prefix(name: str) -> str:
    return "".join(w.capitalize() for w in name.split("_"))


def text_kind(name: str, params=None) -> str:
    return "vpm" if isinstance(build(name, params), VpProcess) else "ccs"


def packaged_files(suffix: str = "") -> list:
    return sorted(p for p in FILES.iterdir() if p.name.endswith(suffix))


BUFFER1_CERT = """\
# Buffer of capacity 1 against the one-place buffer.
left buffer1.vpm
right buf.vpm
mu A a : k == 0 && q == []
mu A b : k == 1 && q == [x]
"""

ABP_CERT = """\
# Reduced alternating bit protocol against its specification.
# The specification's variable is z; x == z ties the buffered packets.
left spec_buf.vpm
right abp_reduced.vpm
""" + "".join(f"mu {a} {b} : {e}\n" for (a, b), e in protocols.abp_certificate_mu().items())


def example_files() -> dict:
    """File name to contents for everything shipped under ``models/files``."""
    files = {
        "vending.ccs": basic.VENDING_1.lstrip() + basic.VENDING_2.lstrip(),
        "jobshop.ccs": basic.JOBSHOP.lstrip(),
        "trace_pair.ccs": basic.TRACE_PAIR.lstrip(),
        "semaphore.ccs": basic.semaphore_source(2, 2),
        "buffer1.vpm": valued.buffer_reduced_text(1),
        "buf.vpm": format_vpm(valued.buf()),
        "buffer1.cert": BUFFER1_CERT,
        "spec_buf.vpm": format_vpm(protocols.spec_buf()),
        "abp_reduced.vpm": protocols.abp_reduced_text(),
        "abp.vpm": format_vpm(protocols.abp()),
        "abp.cert": ABP_CERT,
        "simple_protocol.vpm": format_vpm(protocols.simple_protocol()),
        "separation.vpm": format_vpm(valued.separation()),
        "square.vpm": format_vpm(valued.square()),
        "square_spec.vpm": format_vpm(valued.square_spec()),
    }
    for n in (2, 3):
        files[f"dispatcher{n}.ccs"] = basic.dispatcher_source(n)
        files[f"scheduler{n}.ccs"] = basic.scheduler_source(n)
    return files


def export_files(dest=FILES) -> list:
    dest = Path(dest)
    dest.mkdir(parents=True, exist_ok=True)
    written = []
    for name, text in sorted(example_files().items()):
        (dest / name).write_text(text, encoding="utf-8")
        written.append(dest / name)
    return written


__all__ = ["REGISTRY", "Model", "build", "names", "model_text", "text_kind", "packaged_files",
           "example_files", "export_files",
           "simulate", "Run", "in_order", "FILES", "basic", "valued", "protocols"]
