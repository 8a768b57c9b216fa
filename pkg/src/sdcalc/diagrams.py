"""Term-structured diagram IR for the dagger-compact process calculus.

A diagram is a binary term tree built from generators and structural
morphisms.  Every node knows its domain and codomain word; ill-typed
compositions are rejected at construction time, so a constructed diagram is
always valid.  Diagrams are immutable values and safe to share.

Sequential composition reads left to right in time: ``Seq(d1, d2)`` (or
``d1 >> d2``) applies ``d1`` first.
"""

from __future__ import annotations

import numpy as np

from .errors import ClassicalOnly, ShapeError, TypeMismatch
from .wires import UNIT, Wire, Word


class Diagram:
    """Base class of all diagram terms."""

    dom: Word
    cod: Word

    def __rshift__(self, other: "Diagram") -> "Diagram":
        return Seq(self, other)

    def __matmul__(self, other: "Diagram") -> "Diagram":
        return Par(self, other)

    def dagger(self) -> "Diagram":
        return dagger(self)


class Id(Diagram):
    """The identity on a wire word (possibly empty)."""

    __slots__ = ("word", "dom", "cod")

    def __init__(self, word: Word | Wire):
        if isinstance(word, Wire):
            word = Word(word)
        self.word = word
        self.dom = word
        self.cod = word

    def __eq__(self, other):
        return isinstance(other, Id) and self.word == other.word

    def __hash__(self):
        return hash(("Id", self.word))

    def __repr__(self):
        return f"Id({self.word!r})"


class Box(Diagram):
    """A named generator, optionally carrying a concrete matrix payload.

    The payload maps the domain to the codomain, so its shape is
    ``(cod.total_dim, dom.total_dim)``.  A box with empty domain is a state,
    one with empty codomain is an effect.
    """

    __slots__ = ("name", "dom", "cod", "payload")

    def __init__(self, name: str, dom: Word, cod: Word, payload=None):
        self.name = name
        self.dom = dom
        self.cod = cod
        if payload is not None:
            payload = np.array(payload, dtype=complex)
            want = (cod.total_dim, dom.total_dim)
            if payload.shape != want:
                raise ShapeError(
                    f"payload of {name!r} has shape {payload.shape}, "
                    f"expected {want}")
            payload.setflags(write=False)
        self.payload = payload

    @property
    def is_state(self) -> bool:
        return len(self.dom) == 0

    @property
    def is_effect(self) -> bool:
        return len(self.cod) == 0

    def __eq__(self, other):
        if not isinstance(other, Box):
            return False
        if (self.name, self.dom, self.cod) != (other.name, other.dom, other.cod):
            return False
        if (self.payload is None) != (other.payload is None):
            return False
        return self.payload is None or np.array_equal(self.payload, other.payload)

    def __hash__(self):
        return hash(("Box", self.name, self.dom, self.cod))

    def __repr__(self):
        return f"Box({self.name!r}, {self.dom!r}, {self.cod!r})"


class Seq(Diagram):
    """Sequential composition: ``first`` then ``second``."""

    __slots__ = ("first", "second", "dom", "cod")

    def __init__(self, first: Diagram, second: Diagram):
        if first.cod != second.dom:
            raise TypeMismatch(
                f"junction {first!r} ; {second!r}", first.cod, second.dom)
        self.first = first
        self.second = second
        self.dom = first.dom
        self.cod = second.cod

    def __eq__(self, other):
        return (isinstance(other, Seq)
                and self.first == other.first and self.second == other.second)

    def __hash__(self):
        return hash(("Seq", self.first, self.second))

    def __repr__(self):
        return f"({self.first!r} >> {self.second!r})"


class Par(Diagram):
    """Parallel (tensor) composition, ``left`` above ``right``."""

    __slots__ = ("left", "right", "dom", "cod")

    def __init__(self, left: Diagram, right: Diagram):
        self.left = left
        self.right = right
        self.dom = left.dom + right.dom
        self.cod = left.cod + right.cod

    def __eq__(self, other):
        return (isinstance(other, Par)
                and self.left == other.left and self.right == other.right)

    def __hash__(self):
        return hash(("Par", self.left, self.right))

    def __repr__(self):
        return f"({self.left!r} @ {self.right!r})"


class _WireNode(Diagram):
    """Shared plumbing for single-wire structural morphisms."""

    __slots__ = ("wire", "dom", "cod")

    def __init__(self, wire: Wire):
        self.wire = wire
        self.dom, self.cod = self._words(wire)

    def _words(self, wire):
        raise NotImplementedError

    def __eq__(self, other):
        return type(other) is type(self) and self.wire == other.wire

    def __hash__(self):
        return hash((type(self).__name__, self.wire))

    def __repr__(self):
        return f"{type(self).__name__}({self.wire!r})"


class Cup(_WireNode):
    """Unnormalized pair creation on one wire: unit to ``A*A``."""

    def _words(self, wire):
        return UNIT, Word(wire, wire)


class Cap(_WireNode):
    """Unnormalized pair annihilation: ``A*A`` to the unit; dagger of Cup."""

    def _words(self, wire):
        return Word(wire, wire), UNIT


class Copy(_WireNode):
    """Classical copying, ``A`` to ``A*A``.  Classical wires only."""

    def _words(self, wire):
        if not wire.is_classical:
            raise ClassicalOnly(f"Copy({wire!r})")
        return Word(wire), Word(wire, wire)


class Delete(_WireNode):
    """Classical deletion, ``A`` to the unit.  Classical wires only."""

    def _words(self, wire):
        if not wire.is_classical:
            raise ClassicalOnly(f"Delete({wire!r})")
        return Word(wire), UNIT


class Discard(_WireNode):
    """Discarding a wire into the environment.

    Has no pure-tensor meaning; it becomes a partial trace after doubling.
    """

    def _words(self, wire):
        return Word(wire), UNIT


class Swap(Diagram):
    """The symmetry exchanging two adjacent wires."""

    __slots__ = ("a", "b", "dom", "cod")

    def __init__(self, a: Wire, b: Wire):
        self.a = a
        self.b = b
        self.dom = Word(a, b)
        self.cod = Word(b, a)

    def __eq__(self, other):
        return isinstance(other, Swap) and (self.a, self.b) == (other.a, other.b)

    def __hash__(self):
        return hash(("Swap", self.a, self.b))

    def __repr__(self):
        return f"Swap({self.a!r}, {self.b!r})"


class Dagger(Diagram):
    """The dagger of a subterm.  ``dagger`` keeps these only on leaves."""

    __slots__ = ("inner", "dom", "cod")

    def __init__(self, inner: Diagram):
        self.inner = inner
        self.dom = inner.cod
        self.cod = inner.dom

    def __eq__(self, other):
        return isinstance(other, Dagger) and self.inner == other.inner

    def __hash__(self):
        return hash(("Dagger", self.inner))

    def __repr__(self):
        return f"Dagger({self.inner!r})"


# -- operations ---------------------------------------------------------------

def validate(d: Diagram) -> tuple[Word, Word]:
    """Return the (domain, codomain) word of a diagram.

    Construction already checks every junction, so this also serves as a
    cheap assertion that ``d`` really is a diagram term.
    """
    if not isinstance(d, Diagram):
        raise TypeError(f"expected Diagram, got {type(d).__name__}")
    return d.dom, d.cod


def dagger(d: Diagram) -> Diagram:
    """The dagger of a diagram, distributed down to the leaves.

    Sequential factors reverse, parallel factors stay in place, cups and
    caps exchange, and swaps reverse their arguments.  Applying ``dagger``
    twice gives back a structurally equal diagram.
    """
    if isinstance(d, Id):
        return d
    if isinstance(d, Seq):
        return Seq(dagger(d.second), dagger(d.first))
    if isinstance(d, Par):
        return Par(dagger(d.left), dagger(d.right))
    if isinstance(d, Swap):
        return Swap(d.b, d.a)
    if isinstance(d, Cup):
        return Cap(d.wire)
    if isinstance(d, Cap):
        return Cup(d.wire)
    if isinstance(d, Dagger):
        return d.inner
    # Box, Copy, Delete, Discard keep an explicit wrapper.
    return Dagger(d)


def push_daggers(d: Diagram) -> Diagram:
    """Distribute dagger nodes so they wrap only generator-like leaves.

    Cups become caps (and back), swaps reverse, composites distribute; the
    result denotes the same morphism.
    """
    if isinstance(d, Seq):
        return Seq(push_daggers(d.first), push_daggers(d.second))
    if isinstance(d, Par):
        return Par(push_daggers(d.left), push_daggers(d.right))
    if isinstance(d, Dagger):
        inner = d.inner
        if isinstance(inner, Dagger):
            return push_daggers(inner.inner)
        if isinstance(inner, (Box, Copy, Delete, Discard)):
            return d
        return push_daggers(dagger(inner))
    return d


def compose_seq(first: Diagram, second: Diagram) -> Diagram:
    """Compose in time order: ``first`` happens before ``second``."""
    return Seq(first, second)


def compose_par(left: Diagram, right: Diagram) -> Diagram:
    """Tensor two diagrams side by side."""
    return Par(left, right)


def state(name: str, word: Word | Wire, amplitudes) -> Box:
    """A state box (empty domain) with the given amplitude vector."""
    if isinstance(word, Wire):
        word = Word(word)
    column = np.asarray(amplitudes, dtype=complex).reshape(-1, 1)
    return Box(name, UNIT, word, column)


def effect(name: str, word: Word | Wire, amplitudes) -> Box:
    """The effect testing against the given amplitudes (a bra row)."""
    if isinstance(word, Wire):
        word = Word(word)
    row = np.asarray(amplitudes, dtype=complex).conj().reshape(1, -1)
    return Box(name, word, UNIT, row)


def leaves(d: Diagram):
    """Iterate over the leaf morphisms of a term, left to right."""
    if isinstance(d, Seq):
        yield from leaves(d.first)
        yield from leaves(d.second)
    elif isinstance(d, Par):
        yield from leaves(d.left)
        yield from leaves(d.right)
    elif isinstance(d, Dagger):
        yield from leaves(d.inner)
    else:
        yield d


def box_count(d: Diagram) -> int:
    """Number of non-identity leaves in a term."""
    return sum(1 for leaf in leaves(d) if not isinstance(leaf, Id))


def term_size(d: Diagram) -> int:
    """Total number of nodes in a term tree."""
    if isinstance(d, Seq):
        return 1 + term_size(d.first) + term_size(d.second)
    if isinstance(d, Par):
        return 1 + term_size(d.left) + term_size(d.right)
    if isinstance(d, Dagger):
        return 1 + term_size(d.inner)
    return 1
