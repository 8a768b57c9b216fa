"""Dense complex tensors and evaluation of pure diagrams.

Evaluation folds a diagram term bottom-up into a matrix: sequential
composition becomes a matrix product, parallel composition a Kronecker
product, and the structural morphisms get their standard basis
realizations.  Cups are unnormalized (the all-correlated vector of norm
``sqrt(dim)``), which makes the snake equations hold exactly; callers who
want normalized entangled states must divide themselves.
"""

from __future__ import annotations

import math

import numpy as np

from .diagrams import (
    Box, Cap, Copy, Cup, Dagger, Delete, Diagram, Discard, Id, Par, Seq, Swap,
)
from .errors import DiscardAtPureLevel, MissingPayload
from .wires import Word

DEFAULT_ATOL = 1e-9


class Tensor:
    """A dense complex tensor with its output/input dimension grouping.

    ``shape`` lists the output dimensions followed by the input dimensions;
    the underlying matrix has shape ``(prod(cod_dims), prod(dom_dims))``.
    """

    __slots__ = ("cod_dims", "dom_dims", "array", "atol")

    def __init__(self, cod_dims, dom_dims, array, atol: float = DEFAULT_ATOL):
        self.cod_dims = tuple(int(d) for d in cod_dims)
        self.dom_dims = tuple(int(d) for d in dom_dims)
        arr = np.array(array, dtype=complex)
        want = (math.prod(self.cod_dims), math.prod(self.dom_dims))
        arr = arr.reshape(want)
        arr.setflags(write=False)
        self.array = arr
        if atol < 0:
            raise ValueError("atol must be nonnegative")
        self.atol = float(atol)

    @property
    def shape(self) -> tuple[int, ...]:
        return self.cod_dims + self.dom_dims

    def dagger(self) -> "Tensor":
        return Tensor(self.dom_dims, self.cod_dims,
                      self.array.conj().T, self.atol)

    def __repr__(self):
        return (f"Tensor(cod_dims={self.cod_dims}, dom_dims={self.dom_dims}, "
                f"array=\n{np.round(self.array, 6)})")


def tensors_close(a: Tensor, b: Tensor) -> bool:
    """Entrywise comparison at the larger of the two tolerances."""
    if a.shape != b.shape:
        return False
    atol = max(a.atol, b.atol)
    return bool(np.max(np.abs(a.array - b.array)) <= atol)


# -- structural matrices -------------------------------------------------------

def identity_matrix(dim: int) -> np.ndarray:
    return np.eye(dim, dtype=complex)


def swap_matrix(da: int, db: int) -> np.ndarray:
    """Permutation sending ``|i>|j>`` on A*B to ``|j>|i>`` on B*A."""
    return (np.eye(da * db, dtype=complex)
            .reshape(da, db, da, db)
            .transpose(1, 0, 2, 3)
            .reshape(da * db, da * db))


def cup_vector(dim: int) -> np.ndarray:
    """Column vector sum of ``|ii>``; norm ``sqrt(dim)``."""
    v = np.zeros((dim * dim, 1), dtype=complex)
    for i in range(dim):
        v[i * dim + i, 0] = 1.0
    return v


def copy_matrix(dim: int) -> np.ndarray:
    """The basis-copying map, sum of ``|ii><i|``."""
    m = np.zeros((dim * dim, dim), dtype=complex)
    for i in range(dim):
        m[i * dim + i, i] = 1.0
    return m


def delete_matrix(dim: int) -> np.ndarray:
    """The basis-deleting effect, sum of ``<i|``."""
    return np.ones((1, dim), dtype=complex)


def evaluate(d: Diagram, atol: float = DEFAULT_ATOL) -> Tensor:
    """Evaluate a pure diagram into a complex tensor.

    Every box must carry a payload and the diagram must not contain a
    discard; discards only acquire meaning after doubling into a channel.
    """
    return Tensor(d.cod.dims, d.dom.dims, _matrix(d), atol)


def _matrix(d: Diagram) -> np.ndarray:
    if isinstance(d, Id):
        return identity_matrix(d.word.total_dim)
    if isinstance(d, Box):
        if d.payload is None:
            raise MissingPayload(d.name)
        return d.payload
    if isinstance(d, Seq):
        return _matrix(d.second) @ _matrix(d.first)
    if isinstance(d, Par):
        return np.kron(_matrix(d.left), _matrix(d.right))
    if isinstance(d, Swap):
        return swap_matrix(d.a.dim, d.b.dim)
    if isinstance(d, Cup):
        return cup_vector(d.wire.dim)
    if isinstance(d, Cap):
        return cup_vector(d.wire.dim).conj().T
    if isinstance(d, Copy):
        return copy_matrix(d.wire.dim)
    if isinstance(d, Delete):
        return delete_matrix(d.wire.dim)
    if isinstance(d, Dagger):
        return _matrix(d.inner).conj().T
    if isinstance(d, Discard):
        raise DiscardAtPureLevel(
            "discard has no pure-tensor meaning; double the diagram first")
    raise TypeError(f"cannot evaluate {type(d).__name__}")
