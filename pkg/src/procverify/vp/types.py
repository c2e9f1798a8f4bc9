"""Finite value types for value-passing processes."""
from __future__ import annotations

import itertools
from dataclasses import dataclass


class VList(tuple):
    """A list value; a tuple subclass so values stay hashable."""

    is_list = True

    def __repr__(self):
        return "[" + ", ".join(repr(x) for x in self) + "]"


EMPTY = VList()

DISTORTED = "*"


class VType:
    """Base class; every type has a finite ``domain`` and a ``least`` value."""

    def domain(self) -> tuple:
        raise NotImplementedError

    def size(self) -> int:
        return len(self.domain())

    def least(self):
        return self.domain()[0]

    def contains(self, v) -> bool:
        return v in set(self.domain())


@dataclass(frozen=True)
class IntRange(VType):
    lo: int
    hi: int

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("empty integer range")

    def domain(self):
        return tuple(range(self.lo, self.hi + 1))

    def size(self):
        return self.hi - self.lo + 1

    def least(self):
        return self.lo

    def contains(self, v):
        return isinstance(v, int) and not isinstance(v, bool) and self.lo <= v <= self.hi

    def __str__(self):
        return f"{self.lo}..{self.hi}"


@dataclass(frozen=True)
class Enum(VType):
    symbols: tuple

    def __post_init__(self):
        object.__setattr__(self, "symbols", tuple(self.symbols))
        if not self.symbols:
            raise ValueError("empty enumeration")

    def domain(self):
        return self.symbols

    def contains(self, v):
        return isinstance(v, str) and v in self.symbols

    def __str__(self):
        return "{" + ", ".join(self.symbols) + "}"


@dataclass(frozen=True)
class Bool(VType):
    def domain(self):
        return (False, True)

    def contains(self, v):
        return isinstance(v, bool)

    def __str__(self):
        return "bool"


@dataclass(frozen=True)
class ListT(VType):
    element: VType
    maxlen: int

    def __post_init__(self):
        if self.maxlen < 0:
            raise ValueError("negative list bound")

    def domain(self):
        dom = self.element.domain()
        out = []
        for n in range(self.maxlen + 1):
            out.extend(VList(x) for x in itertools.product(dom, repeat=n))
        return tuple(out)

    def size(self):
        k = self.element.size()
        return sum(k ** n for n in range(self.maxlen + 1))

    def least(self):
        return EMPTY

    def contains(self, v):
        return isinstance(v, tuple) and len(v) <= self.maxlen and all(self.element.contains(x) for x in v)

    def __str__(self):
        return f"list({self.element}, {self.maxlen})"


@dataclass(frozen=True)
class TupleT(VType):
    elements: tuple

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))

    def domain(self):
        return tuple(itertools.product(*(t.domain() for t in self.elements)))

    def size(self):
        n = 1
        for t in self.elements:
            n *= t.size()
        return n

    def least(self):
        return tuple(t.least() for t in self.elements)

    def contains(self, v):
        return (isinstance(v, tuple) and not isinstance(v, VList) and len(v) == len(self.elements)
                and all(t.contains(x) for t, x in zip(self.elements, v)))

    def __str__(self):
        return "(" + ", ".join(str(t) for t in self.elements) + ")"


@dataclass(frozen=True)
class ArrayT(VType):
    """Fixed-length array; indices are taken modulo the length."""
    element: VType
    length: int

    def __post_init__(self):
        if self.length < 1:
            raise ValueError("array length must be positive")

    def domain(self):
        return tuple(itertools.product(self.element.domain(), repeat=self.length))

    def size(self):
        return self.element.size() ** self.length

    def least(self):
        return (self.element.least(),) * self.length

    def contains(self, v):
        return (isinstance(v, tuple) and not isinstance(v, VList) and len(v) == self.length
                and all(self.element.contains(x) for x in v))

    def __str__(self):
        return f"array({self.element}, {self.length})"


@dataclass(frozen=True)
class Distorted(VType):
    """``base`` extended with the distorted-frame symbol ``*``."""
    base: VType

    def domain(self):
        return self.base.domain() + (DISTORTED,)

    def size(self):
        return self.base.size() + 1

    def least(self):
        return self.base.least()

    def contains(self, v):
        return v == DISTORTED or self.base.contains(v)

    def __str__(self):
        return f"distorted({self.base})"


BOOL = Bool()


def type_of_value(v):
    """Best-effort name of a runtime value's kind, for error messages."""
    if isinstance(v, bool):
        return "bool"
    if isinstance(v, int):
        return "int"
    if isinstance(v, VList):
        return "list"
    if isinstance(v, tuple):
        return "tuple"
    return "symbol"
