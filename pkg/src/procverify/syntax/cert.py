"""The ``.cert`` format for state-indexed certificates.

Example::

    left buffer.vpm
    right buf.vpm
    inv-left k == len(q)
    mu B A : q == [] && k == 0
    ct 1 B A in = a | a b
    ct 2 * * out = -
    maxlen 3

``ct side A1 A2 ref = path | path`` lists the composite transitions of the
other process that answer transition ``ref``; a path is a space separated list
of transition references and ``-`` is the empty path.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional

from ..errors import ParseError
from ..vp.cert import Verdict, verify_mu_certificate
from ..vp.expr import TRUE, Expr, to_text
from .lexer import Stream, Token, tokenize
from .vexpr import _impl
from .vpm import parse_vpm


@dataclass
class Certificate:
    left: str
    right: str
    mu: dict = field(default_factory=dict)
    ct_sets: dict = field(default_factory=dict)
    inv_left: Expr = TRUE
    inv_right: Expr = TRUE
    max_ct_len: int = 4

    def verify(self, p1, p2, check_invariants: bool = True) -> Verdict:
        return verify_mu_certificate(p1, p2, self.mu, self.ct_sets or None, self.inv_left,
                                     self.inv_right, check_invariants, self.max_ct_len)


def _expr_after(raw, start, no):
    toks = tokenize(raw[start:])
    s = Stream([Token(t.kind, t.text, no, t.col + start) for t in toks])
    e = _impl(s)
    if not s.at_kind("eof"):
        s.fail("unexpected trailing input")
    return e


def parse_cert(text: str) -> Certificate:
    cert = Certificate("", "")
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        kw, _, rest = line.partition(" ")
        rest = rest.strip()
        offset = raw.index(kw) + len(kw) + 1
        if kw in ("left", "right"):
            if not rest:
                raise ParseError(f"{kw} needs a file name", no, 1)
            setattr(cert, kw, rest)
        elif kw in ("inv-left", "inv-right"):
            setattr(cert, kw.replace("-", "_"), _expr_after(raw, offset, no))
        elif kw == "mu":
            head, sep, _ = rest.partition(":")
            names = head.split()
            if not sep or len(names) != 2:
                raise ParseError("expected 'mu A1 A2 : expr'", no, 1)
            cert.mu[tuple(names)] = _expr_after(raw, raw.index(":") + 1, no)
        elif kw == "ct":
            head, sep, body = rest.partition("=")
            parts = head.split()
            if not sep or len(parts) != 4 or parts[0] not in ("1", "2"):
                raise ParseError("expected 'ct side A1 A2 ref = paths'", no, 1)
            paths = []
            for alt in body.split("|"):
                refs = alt.split()
                if refs == ["-"]:
                    refs = []
                elif not refs:
                    raise ParseError("empty path, write '-'", no, 1)
                paths.append(tuple(refs))
            cert.ct_sets[(int(parts[0]), parts[1], parts[2], parts[3])] = paths
        elif kw == "maxlen":
            try:
                cert.max_ct_len = int(rest)
            except ValueError:
                raise ParseError("maxlen needs an integer", no, 1) from None
        else:
            raise ParseError(f"unknown keyword {kw!r}", no, 1)
    if not cert.left or not cert.right:
        raise ParseError("certificate needs 'left' and 'right'", None, None)
    return cert


def format_cert(cert: Certificate) -> str:
    lines = [f"left {cert.left}", f"right {cert.right}"]
    if cert.inv_left != TRUE:
        lines.append(f"inv-left {to_text(cert.inv_left)}")
    if cert.inv_right != TRUE:
        lines.append(f"inv-right {to_text(cert.inv_right)}")
    for (a, b), e in sorted(cert.mu.items()):
        lines.append(f"mu {a} {b} : {to_text(e)}")
    for (side, a, b, ref), paths in sorted(cert.ct_sets.items()):
        alts = " | ".join(" ".join(p) if p else "-" for p in paths)
        lines.append(f"ct {side} {a} {b} {ref} = {alts}")
    lines.append(f"maxlen {cert.max_ct_len}")
    return "\n".join(lines) + "\n"


def load_cert(path, reader: Optional[Callable[[str], str]] = None):
    """Parse a certificate file and the two processes it names.

    Process paths are relative to the certificate's directory unless
    ``reader`` resolves them.
    """
    path = Path(path)
    cert = parse_cert(path.read_text())
    if reader is None:
        def reader(name):
            return (path.parent / name).read_text()
    return cert, parse_vpm(reader(cert.left)), parse_vpm(reader(cert.right))
