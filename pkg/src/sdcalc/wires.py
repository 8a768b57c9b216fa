"""Typed wires and wire words, the objects of the diagram calculus.

A :class:`Wire` is a single system: either quantum (a Hilbert space of the
given dimension) or classical (a finite outcome set).  A :class:`Word` is an
ordered tensor product of wires; the empty word is the monoidal unit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

QUANTUM = "quantum"
CLASSICAL = "classical"


@dataclass(frozen=True)
class Wire:
    """A single typed wire with a finite dimension.

    Two wires are equal iff both kind and dimension match.
    """

    kind: str
    dim: int

    def __post_init__(self):
        if self.kind not in (QUANTUM, CLASSICAL):
            raise ValueError(f"unknown wire kind {self.kind!r}")
        if not isinstance(self.dim, int) or self.dim < 1:
            raise ValueError("wire dimension must be a positive integer")

    @property
    def is_quantum(self) -> bool:
        return self.kind == QUANTUM

    @property
    def is_classical(self) -> bool:
        return self.kind == CLASSICAL

    def __repr__(self):
        return f"{'q' if self.is_quantum else 'c'}{self.dim}"


def quantum(dim: int) -> Wire:
    """A quantum wire of the given Hilbert-space dimension."""
    return Wire(QUANTUM, dim)


def classical(dim: int) -> Wire:
    """A classical wire with the given number of outcomes."""
    return Wire(CLASSICAL, dim)


class Word:
    """An ordered word of wires.  ``Word()`` is the monoidal unit."""

    __slots__ = ("wires",)

    def __init__(self, *wires: Wire):
        for w in wires:
            if not isinstance(w, Wire):
                raise TypeError(f"expected Wire, got {type(w).__name__}")
        object.__setattr__(self, "wires", tuple(wires))

    def __setattr__(self, name, value):
        raise AttributeError("Word is immutable")

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(w.dim for w in self.wires)

    @property
    def total_dim(self) -> int:
        return math.prod(self.dims)

    def __add__(self, other: "Word") -> "Word":
        return Word(*self.wires, *other.wires)

    def __len__(self):
        return len(self.wires)

    def __iter__(self):
        return iter(self.wires)

    def __getitem__(self, index):
        got = self.wires[index]
        return Word(*got) if isinstance(index, slice) else got

    def __eq__(self, other):
        return isinstance(other, Word) and self.wires == other.wires

    def __hash__(self):
        return hash(self.wires)

    def __repr__(self):
        if not self.wires:
            return "I"
        return "*".join(repr(w) for w in self.wires)


UNIT = Word()
