"""Small linear-algebra helpers shared by the channel and scattering code.

Vectorization is column-stacking throughout: ``vec(A)`` concatenates the
columns of ``A``, so ``vec(A X B) = (B.T kron A) vec(X)``.
"""

from __future__ import annotations

import math

import numpy as np


def dag(m: np.ndarray) -> np.ndarray:
    return np.asarray(m).conj().T


def vec(m: np.ndarray) -> np.ndarray:
    """Column-stacking vectorization."""
    return np.asarray(m).flatten(order="F")


def unvec(v: np.ndarray, rows: int, cols: int) -> np.ndarray:
    return np.asarray(v).reshape((rows, cols), order="F")


def kron_all(mats) -> np.ndarray:
    out = np.array([[1.0 + 0j]])
    for m in mats:
        out = np.kron(out, m)
    return out


def basis_vector(i: int, dim: int) -> np.ndarray:
    v = np.zeros(dim, dtype=complex)
    v[i] = 1.0
    return v


def projector(i: int, dim: int) -> np.ndarray:
    p = np.zeros((dim, dim), dtype=complex)
    p[i, i] = 1.0
    return p


def is_unitary(m: np.ndarray, atol: float) -> bool:
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    return float(np.max(np.abs(m @ dag(m) - np.eye(m.shape[0])))) <= atol


def permute_wire_axes(matrix: np.ndarray, dims, perm) -> np.ndarray:
    """Reorder the tensor factors of a square matrix.

    ``matrix`` acts on the tensor product of systems listed in the order
    ``perm`` (a permutation of ``range(n)``); ``dims`` gives the canonical
    per-system dimensions.  Returns the same operator expressed on the
    canonical ordering ``0, 1, ..., n-1``.
    """
    dims = list(dims)
    perm = list(perm)
    n = len(dims)
    perm_dims = [dims[p] for p in perm]
    total = math.prod(dims)
    arr = np.asarray(matrix).reshape(perm_dims + perm_dims)
    # axis carrying canonical system w sits at position perm.index(w)
    order = [perm.index(w) for w in range(n)]
    arr = arr.transpose(order + [n + o for o in order])
    return arr.reshape(total, total)


def partial_trace(matrix: np.ndarray, dims, keep) -> np.ndarray:
    """Trace out every tensor factor not listed in ``keep``."""
    dims = list(dims)
    keep = sorted(keep)
    n = len(dims)
    arr = np.asarray(matrix).reshape(dims + dims)
    drop = [i for i in range(n) if i not in keep]
    for offset, axis in enumerate(drop):
        a = axis - offset
        arr = np.trace(arr, axis1=a, axis2=a + (n - offset))
    d_keep = math.prod(dims[i] for i in keep) if keep else 1
    return arr.reshape(d_keep, d_keep)


def reduced_state_of_vector(psi: np.ndarray, dims, keep) -> np.ndarray:
    """Reduced density matrix of a pure state on the ``keep`` factors."""
    rho = np.outer(psi, np.conj(psi))
    return partial_trace(rho, dims, keep)
