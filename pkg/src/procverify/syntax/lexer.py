"""A small regex tokenizer shared by the text formats."""
from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import ParseError

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>(?<![^\s])\#[^\n]*)
  | (?P<int>\d+)
  | (?P<sym>'[^'\n]*')
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>:=|->|\.\.|==|!=|<=|>=|&&|\|\||\+\+|[-+*/%<>!?.,;:=()\[\]{}|\\&~@#^])
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int

    def __str__(self):
        return self.text


EOF = "eof"


def tokenize(text: str, keep_newlines: bool = False) -> list:
    out = []
    pos, line, col0 = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - col0 + 1)
        kind = m.lastgroup
        if kind == "nl":
            if keep_newlines:
                out.append(Token("nl", "\n", line, pos - col0 + 1))
            line += 1
            col0 = m.end()
        elif kind not in ("ws", "comment"):
            out.append(Token(kind, m.group(), line, pos - col0 + 1))
        pos = m.end()
    out.append(Token(EOF, "", line, pos - col0 + 1))
    return out


class Stream:
    def __init__(self, tokens):
        self.toks = tokens
        self.i = 0

    @property
    def cur(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def at(self, *texts) -> bool:
        t = self.cur
        return t.kind != "sym" and t.text in texts

    def at_kind(self, kind) -> bool:
        return self.cur.kind == kind

    def next(self) -> Token:
        t = self.cur
        if t.kind != EOF:
            self.i += 1
        return t

    def expect(self, text) -> Token:
        if not self.at(text):
            self.fail(f"expected {text!r}")
        return self.next()

    def expect_kind(self, kind, what=None) -> Token:
        if self.cur.kind != kind:
            self.fail(f"expected {what or kind}")
        return self.next()

    def fail(self, msg):
        t = self.cur
        found = t.text if t.kind != EOF else "end of input"
        raise ParseError(f"{msg}, found {found!r}", t.line, t.col)
