"""Command-line driver.

Exit codes: 0 when the checked property holds, 1 when it does not, 2 on any
error.  File arguments may be paths, ``examples`` (the packaged example that
defines the requested agents) or ``examples:STEM`` (one packaged file).
"""
from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path

from . import models
from .calc import materialize_name
from .equiv import equivalent
from .errors import ProcVerifyError
from .hml import distinguish, eval_formula, to_text
from .lts import Lts, _fmt_value
from .minimize import minimize
from .syntax import load_cert, parse_ccs, parse_formula, parse_vpm
from .syntax.vpm import format_vpm
from .vp import MAX_CONCRETE, VpProcess, concretize, reduce
from .vp.ops import op_text

KINDS = ("strong", "weak", "cong", "trace", "ctrace")
SEMANTICS = ("strong", "weak", "plus")
_HEADER = re.compile(r"^#\s*initial agent:\s*(\S+)", re.M)


class CliError(Exception):
    pass


# ---------------------------------------------------------------- file resolution

def _packaged(stem: str, suffixes=(".ccs", ".vpm", ".cert")) -> Path:
    for suf in suffixes:
        p = models.FILES / (stem + suf)
        if p.exists():
            return p
    known = ", ".join(sorted({p.stem for p in models.packaged_files()}))
    raise CliError(f"no packaged example {stem!r}; known: {known}")


def _resolve(arg: str, agents=(), suffixes=(".ccs", ".vpm", ".cert")) -> list:
    if arg == "examples":
        found = [p for p in models.packaged_files(".ccs")
                 if agents and all(a in parse_ccs(p.read_text()) for a in agents)]
        if not found:
            found = [p for p in models.packaged_files(".vpm") if p.stem in agents]
        if not found:
            raise CliError(f"no packaged example defines {', '.join(agents)}")
        if found[0].suffix == ".ccs" and len(found) > 1:
            names = ", ".join("examples:" + p.stem for p in found)
            raise CliError(f"several packaged examples define {', '.join(agents)}: {names}")
        return found
    if arg.startswith("examples:"):
        return [_packaged(arg.split(":", 1)[1], suffixes)]
    return [Path(arg)]


def _read(path: Path) -> str:
    try:
        return path.read_text(encoding="utf-8")
    except OSError as e:
        raise CliError(f"cannot read {path}: {e.strerror}") from None


def load_agents(names, files) -> dict:
    """Agent name to Lts.  A ``.vpm`` file defines one agent named by its stem."""
    paths = [p for f in files for p in _resolve(f, names)]
    envs, vps = [], {}
    for p in paths:
        if p.suffix == ".vpm":
            vps[p.stem] = p
        else:
            envs.append(parse_ccs(_read(p)))
    out = {}
    for n in names:
        if n in out:
            continue
        env = next((e for e in envs if n in e), None)
        if env is not None:
            out[n] = materialize_name(n, env)
        elif n in vps:
            out[n] = concretize(parse_vpm(_read(vps[n])))
        else:
            raise CliError(f"agent {n} is not defined in {', '.join(map(str, paths))}")
    return out


def load_one(agent, file) -> Lts:
    """Process of ``--agent`` in ``file``; without ``--agent`` use the file's
    ``# initial agent:`` header or its last equation."""
    path = _resolve(file, (agent,) if agent else ())[0]
    text = _read(path)
    if path.suffix == ".vpm":
        return concretize(parse_vpm(text))
    rd = parse_ccs(text)
    if agent is None:
        m = _HEADER.search(text)
        agent = m.group(1) if m else rd.names[-1] if rd.names else None
        if agent is None:
            raise CliError(f"{path} defines no agents")
    return materialize_name(agent, rd)


def load_vpm(file) -> VpProcess:
    path = _resolve(file, suffixes=(".vpm",))[0]
    return parse_vpm(_read(path))


# ---------------------------------------------------------------- output

def _value(v):
    if isinstance(v, bool) or isinstance(v, int):
        return v
    if isinstance(v, (list, tuple)) or getattr(v, "is_list", False):
        return [_value(x) for x in v]
    return str(v)


def lts_text(p: Lts, fmt: str) -> str:
    trans = p.sorted_transitions()
    if fmt == "json":
        doc = {"initial": p.initial, "states": sorted(p.states),
               "transitions": [[s, str(a), t] for s, a, t in trans]}
        return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False)
    if fmt == "dot":
        lines = ["digraph lts {", "  rankdir=LR;", '  __start [shape=point];',
                 f"  __start -> {json.dumps(p.initial)};"]
        lines += [f"  {json.dumps(s)};" for s in sorted(p.states)]
        lines += [f"  {json.dumps(s)} -> {json.dumps(t)} [label={json.dumps(str(a))}];"
                  for s, a, t in trans]
        return "\n".join(lines + ["}"])
    return str(p)


def vp_text(p: VpProcess, fmt: str) -> str:
    trans = sorted(p.transitions, key=lambda t: (t.src, t.dst, str(t.op)))
    label = lambda t: " ; ".join(op_text(o) for o in t.op.ops)  # noqa: E731
    if fmt == "json":
        doc = {"vars": [[n, str(t)] for n, t in p.vars], "init": str(p.init),
               "initial": p.initial, "states": sorted(p.states),
               "transitions": [[t.src, label(t), t.dst] for t in trans]}
        return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False)
    if fmt == "dot":
        lines = ["digraph vp {", "  rankdir=LR;", '  __start [shape=point];',
                 f"  __start -> {json.dumps(p.initial)};"]
        lines += [f"  {json.dumps(s)};" for s in sorted(p.states)]
        lines += [f"  {json.dumps(t.src)} -> {json.dumps(t.dst)} [label={json.dumps(label(t))}];"
                  for t in trans]
        return "\n".join(lines + ["}"])
    return format_vpm(p).rstrip("\n")


def _emit(fmt, text_line, doc):
    if fmt == "json":
        print(json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False))
    else:
        print(text_line)


# ---------------------------------------------------------------- commands

def cmd_check(a) -> int:
    ps = load_agents([a.left, a.right], a.files)
    ok = equivalent(ps[a.left], ps[a.right], a.kind)
    _emit(a.format, "equivalent" if ok else "not equivalent",
          {"kind": a.kind, "left": a.left, "right": a.right, "equivalent": ok})
    return 0 if ok else 1


def cmd_minimize(a) -> int:
    print(lts_text(minimize(load_one(a.agent, a.file), a.kind), a.format))
    return 0


def cmd_mc(a) -> int:
    phi = parse_formula(a.formula)
    v = eval_formula(load_one(a.agent, a.file), phi, a.semantics)
    _emit(a.format, str(v), {"formula": to_text(phi), "semantics": a.semantics, "value": v})
    return 0 if v == 1 else 1


def cmd_distinguish(a) -> int:
    ps = load_agents([a.left, a.right], a.files)
    phi = distinguish(ps[a.left], ps[a.right], a.semantics)
    text = "equivalent" if phi is None else to_text(phi)
    _emit(a.format, text, {"semantics": a.semantics, "left": a.left, "right": a.right,
                           "formula": None if phi is None else text})
    return 0 if phi is None else 1


def cmd_reduce(a) -> int:
    print(vp_text(reduce(load_vpm(a.file)), a.format))
    return 0


def cmd_concretize(a) -> int:
    print(lts_text(concretize(load_vpm(a.file), a.max_states), a.format))
    return 0


def cmd_simulate(a) -> int:
    path = _resolve(a.file, (a.agent,) if a.agent else ())[0]
    p = load_vpm(str(path)) if path.suffix == ".vpm" else load_one(a.agent, str(path))
    run = models.simulate(p, a.steps, a.seed)
    sigma = {k: _value(v) for k, v in sorted(run.sigma.items())}
    if a.format == "json":
        _emit("json", "", {"trace": [str(x) for x in run.trace], "state": run.state,
                           "sigma": sigma, "deadlock": run.deadlock, "steps": run.steps})
        return 0
    for x in run.trace:
        print(x)
    print(f"state {run.state}")
    if sigma:
        print("sigma " + " ".join(f"{k}={_fmt_value(v)}" for k, v in sorted(run.sigma.items())))
    print(f"deadlock after {run.steps} steps" if run.deadlock else f"ran {run.steps} steps")
    return 0


def _params(items) -> dict:
    out = {}
    for it in items or ():
        k, sep, v = it.partition("=")
        if not sep or not k:
            raise CliError(f"--param expects k=v, got {it!r}")
        out[k.strip()] = v.strip()
    return out


def cmd_examples(a) -> int:
    if a.name is None:
        for n in models.names():
            print(f"{n:22s} {models.REGISTRY[n].doc}")
        return 0
    sys.stdout.write(models.model_text(a.name, _params(a.param)))
    return 0


def cmd_verify_cert(a) -> int:
    path = _resolve(a.file, suffixes=(".cert",))[0]

    def reader(name):
        local = path.parent / name
        if local.exists() or not name.startswith("examples:"):
            return _read(local)
        return _read(_packaged(name.split(":", 1)[1], (".vpm",)))

    cert, p1, p2 = load_cert(path, reader)
    v = cert.verify(p1, p2, check_invariants=not a.skip_invariants)
    _emit(a.format, "certificate holds" if v.ok else f"certificate fails: {v.reason}",
          {"ok": v.ok, "reason": v.reason,
           "witness": {k: _value(x) if not isinstance(x, dict) else {n: _value(y) for n, y in x.items()}
                       for k, x in (v.witness or {}).items()}})
    return 0 if v.ok else 1


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="procverify", description="Verify finite processes.")
    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument("--format", choices=("text", "dot", "json"), default="text")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("check", parents=[fmt], help="compare two agents")
    s.add_argument("--kind", choices=KINDS, default="strong")
    s.add_argument("left")
    s.add_argument("right")
    s.add_argument("files", nargs="+")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("minimize", parents=[fmt], help="print the minimal process")
    s.add_argument("--kind", choices=("strong", "weak", "cong"), default="strong")
    s.add_argument("--agent")
    s.add_argument("file")
    s.set_defaults(func=cmd_minimize)

    s = sub.add_parser("mc", parents=[fmt], help="evaluate a modal formula")
    s.add_argument("--semantics", choices=SEMANTICS, default="strong")
    s.add_argument("--formula", required=True)
    s.add_argument("--agent")
    s.add_argument("file")
    s.set_defaults(func=cmd_mc)

    s = sub.add_parser("distinguish", parents=[fmt], help="find a distinguishing formula")
    s.add_argument("--semantics", choices=SEMANTICS, default="strong")
    s.add_argument("left")
    s.add_argument("right")
    s.add_argument("files", nargs="+")
    s.set_defaults(func=cmd_distinguish)

    s = sub.add_parser("reduce", parents=[fmt], help="reduce a value-passing process")
    s.add_argument("file")
    s.set_defaults(func=cmd_reduce)

    s = sub.add_parser("concretize", parents=[fmt], help="expand a value-passing process")
    s.add_argument("--max-states", type=int, default=MAX_CONCRETE)
    s.add_argument("file")
    s.set_defaults(func=cmd_concretize)

    s = sub.add_parser("simulate", parents=[fmt], help="seeded random run")
    s.add_argument("--steps", type=int, default=100)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--agent")
    s.add_argument("file")
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("examples", help="print a model file")
    s.add_argument("--name")
    s.add_argument("--param", action="append", metavar="K=V")
    s.set_defaults(func=cmd_examples)

    s = sub.add_parser("verify-cert", parents=[fmt], help="check a certificate file")
    s.add_argument("--skip-invariants", action="store_true")
    s.add_argument("file")
    s.set_defaults(func=cmd_verify_cert)
    return ap


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return 2 if e.code not in (0, None) else 0
    try:
        return args.func(args)
    except (CliError, ProcVerifyError, ValueError, OSError, RecursionError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
