"""Unitary scattering operators and their cluster decomposition.

A scattering operator on ``n`` wires is split into connected parts indexed
by set partitions: each subset of wires gets a "moment" operator (the
leading operator-Schmidt factor across that cut, canonically normalized),
and connected blocks are obtained by subtracting every finer partition's
contribution.  By construction the sum over all partitions of the aligned
tensor products of connected blocks reproduces the operator exactly, and
all blocks of size two or more vanish when the operator is a tensor
product of single-wire factors.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DimMismatch, NotNormalized, NotUnitary, TooManyWires, WireWordMismatch,
)
from .linalg import dag, kron_all, permute_wire_axes, reduced_state_of_vector
from .sampling import random_state_vector, rng_from
from .tensors import DEFAULT_ATOL, Tensor
from .wires import Word

_BLOCK_ZERO = 1e-11
_ENTANGLED_BITS = 1e-6


class SMatrix:
    """A unitary operator on a word of quantum wires (same in and out)."""

    __slots__ = ("word", "matrix", "atol")

    def __init__(self, word: Word, matrix, atol: float = DEFAULT_ATOL):
        if any(not w.is_quantum for w in word):
            raise ValueError("scattering wires must be quantum")
        m = np.array(matrix, dtype=complex)
        d = word.total_dim
        if m.shape != (d, d):
            raise DimMismatch(f"matrix shape {m.shape} does not match {word!r}")
        dev = float(np.max(np.abs(m @ dag(m) - np.eye(d))))
        if dev > atol:
            raise NotUnitary(f"unitarity deviation {dev} exceeds {atol}")
        m.setflags(write=False)
        self.word = word
        self.matrix = m
        self.atol = float(atol)

    @property
    def wire_dims(self) -> tuple[int, ...]:
        return self.word.dims

    def __repr__(self):
        return f"SMatrix({self.word!r})"


@dataclass(frozen=True)
class ClusterTerm:
    """One partition of the wires with a connected tensor per block."""

    word: Word
    partition: tuple[tuple[int, ...], ...]
    blocks: tuple[Tensor, ...]

    def block_norms(self) -> tuple[float, ...]:
        return tuple(float(np.max(np.abs(b.array))) for b in self.blocks)

    def trivial_bubbles(self) -> tuple[tuple[int, ...], ...]:
        """Singleton blocks whose tensor is the identity."""
        out = []
        for block, tensor in zip(self.partition, self.blocks):
            if len(block) == 1:
                d = tensor.array.shape[0]
                if np.max(np.abs(tensor.array - np.eye(d))) <= 1e-9:
                    out.append(block)
        return tuple(out)


def unitarity_check(s: SMatrix) -> float:
    """Largest entrywise deviation of ``S S^dagger`` from the identity."""
    d = s.matrix.shape[0]
    return float(np.max(np.abs(s.matrix @ dag(s.matrix) - np.eye(d))))


def set_partitions(items):
    """All partitions of a sequence, blocks and partitions in stable order."""
    items = list(items)
    if not items:
        yield ()
        return
    first, rest = items[0], items[1:]
    for sub in set_partitions(rest):
        yield ((first,),) + sub
        for k, block in enumerate(sub):
            yield sub[:k] + ((first,) + block,) + sub[k + 1:]


def _phase_fixed(m: np.ndarray, rtol: float = 1e-6) -> np.ndarray:
    mods = np.abs(m)
    top = mods.max()
    if top <= 0:
        return m
    i, j = np.argwhere(mods >= top * (1 - rtol))[0]
    entry = m[i, j]
    return m * (np.conj(entry) / abs(entry))


def _aligned_factor(matrix: np.ndarray, dims, subset) -> np.ndarray:
    """Leading operator-Schmidt factor of ``matrix`` on the given wires.

    Deterministic: within a degenerate leading singular subspace the
    representative is picked by projecting a fixed reference sequence
    (identity first, then basis matrices), and the overall phase is set by
    the first maximal-modulus entry.  The result is scaled to the
    Hilbert-Schmidt norm of a unitary, which makes the extraction
    multiplicative on tensor-product operators.
    """
    subset = sorted(subset)
    n = len(dims)
    comp = [i for i in range(n) if i not in subset]
    d_a = math.prod(dims[i] for i in subset)
    if not comp:
        return np.asarray(matrix)

    arr = np.asarray(matrix).reshape(tuple(dims) * 2)
    axes = ([i for i in subset] + [n + i for i in subset]
            + [i for i in comp] + [n + i for i in comp])
    d_c = math.prod(dims[i] for i in comp)
    realigned = arr.transpose(axes).reshape(d_a * d_a, d_c * d_c)

    u, sv, _ = np.linalg.svd(realigned, full_matrices=False)
    if sv[0] <= 0:
        return np.zeros((d_a, d_a), dtype=complex)
    lead = u[:, sv >= sv[0] * (1 - 1e-6)]

    refs = [np.eye(d_a, dtype=complex).reshape(-1) / math.sqrt(d_a)]
    refs.extend(np.eye(d_a * d_a, dtype=complex)[k] for k in range(d_a * d_a))
    for ref in refs:
        proj = lead @ (lead.conj().T @ ref)
        norm = np.linalg.norm(proj)
        if norm > 1e-6:
            factor = proj.reshape(d_a, d_a) / norm
            return math.sqrt(d_a) * _phase_fixed(factor)
    raise AssertionError("leading subspace admitted no reference projection")


def _aligned_product(blocks, tensors, dims) -> np.ndarray:
    """Tensor the block operators and reorder wires canonically."""
    order = [w for block in blocks for w in block]
    combined = kron_all(tensors)
    canon = sorted(order)
    positions = [canon.index(w) for w in order]
    return permute_wire_axes(combined, [dims[w] for w in canon], positions)


def _connected_blocks(matrix: np.ndarray, dims) -> dict:
    n = len(dims)
    connected: dict[tuple[int, ...], np.ndarray] = {}
    subsets = []
    for size in range(1, n + 1):
        subsets.extend(itertools.combinations(range(n), size))
    full = tuple(range(n))
    for subset in subsets:
        if subset == full:
            moment = np.asarray(matrix)
        else:
            moment = _aligned_factor(matrix, dims, subset)
        acc = np.array(moment, dtype=complex)
        for partition in set_partitions(subset):
            if len(partition) == 1:
                continue
            tensors = [connected[tuple(sorted(b))] for b in partition]
            acc -= _aligned_product(
                [tuple(sorted(b)) for b in partition], tensors, dict(enumerate(dims)))
        connected[subset] = acc
    return connected


def connected_parts(s: SMatrix) -> list[ClusterTerm]:
    """Decompose a scattering operator over the partition lattice.

    Returns one term per partition whose blocks are all nonzero; summing
    the aligned tensor products of the returned terms (``recombine``)
    reproduces the operator.
    """
    dims = list(s.wire_dims)
    n = len(dims)
    if n > 4:
        raise TooManyWires(f"{n} wires; the partition lattice is kept small")
    connected = _connected_blocks(s.matrix, dims)

    terms = []
    for partition in set_partitions(range(n)):
        blocks = tuple(tuple(sorted(b)) for b in partition)
        mats = [connected[b] for b in blocks]
        if any(np.max(np.abs(m)) <= _BLOCK_ZERO for m in mats):
            continue
        tensors = tuple(
            Tensor([dims[w] for w in b], [dims[w] for w in b], m, s.atol)
            for b, m in zip(blocks, mats))
        terms.append(ClusterTerm(s.word, blocks, tensors))
    return terms


def term_operator(term: ClusterTerm) -> np.ndarray:
    """The full-word operator contributed by one cluster term."""
    dims = dict(enumerate(term.word.dims))
    return _aligned_product(term.partition, [b.array for b in term.blocks], dims)


def recombine(terms) -> SMatrix:
    """Sum the aligned tensor products of cluster terms back into one operator."""
    terms = list(terms)
    if not terms:
        raise WireWordMismatch("no terms to recombine")
    word = terms[0].word
    if any(t.word != word for t in terms):
        raise WireWordMismatch("cluster terms disagree on the wire word")
    total = np.zeros((word.total_dim,) * 2, dtype=complex)
    for term in terms:
        total += term_operator(term)
    return SMatrix(word, total)


def discontinuity(s_a, s_q, s_b, atol: float = DEFAULT_ATOL) -> Tensor:
    """The composite ``S_B S_Q^dagger S_A`` across an intermediate system."""
    mats = []
    for s in (s_a, s_q, s_b):
        mats.append(s.matrix if isinstance(s, SMatrix) else
                    np.asarray(s, dtype=complex))
    a, q, b = mats
    if not (a.shape == q.shape == b.shape) or a.shape[0] != a.shape[1]:
        raise DimMismatch("the three operators must share one square shape")
    dev = float(np.max(np.abs(q @ dag(q) - np.eye(q.shape[0]))))
    if dev > atol:
        raise NotUnitary(f"middle operator unitarity deviation {dev}")
    dim = a.shape[0]
    return Tensor([dim], [dim], b @ dag(q) @ a, atol)


def entangle_by_scattering(s: SMatrix, factors,
                           atol: float = DEFAULT_ATOL):
    """Scatter a product state and measure the entanglement it gains.

    ``factors`` is one unit vector per wire.  Returns the output vector and
    the von Neumann entropy (in bits) of the reduced state on the first
    wire against the rest.
    """
    dims = s.wire_dims
    vecs = [np.asarray(f, dtype=complex).reshape(-1) for f in factors]
    if len(vecs) != len(dims) or any(v.size != d for v, d in zip(vecs, dims)):
        raise DimMismatch("one factor per wire, matching dimensions")
    for v in vecs:
        if abs(np.linalg.norm(v) - 1.0) > max(atol, 1e-9):
            raise NotNormalized("input factors must be unit vectors")
    psi = kron_all([v.reshape(-1, 1) for v in vecs]).reshape(-1)
    out = s.matrix @ psi
    reduced = reduced_state_of_vector(out, dims, keep=[0])
    eigs = np.clip(np.linalg.eigvalsh(reduced), 0.0, None)
    eigs = eigs[eigs > 1e-15]
    entropy = float(-(eigs * np.log2(eigs)).sum()) if eigs.size else 0.0
    return out, max(entropy, 0.0)


def permutation_operator(dims, perm) -> np.ndarray:
    """Unitary sending ``|i_0 ... i_{n-1}>`` to ``|i_{perm[0]} ... >``."""
    dims = list(dims)
    out_dims = [dims[p] for p in perm]
    total = math.prod(dims)
    m = np.zeros((total, total), dtype=complex)
    for multi in itertools.product(*(range(d) for d in dims)):
        j = [multi[p] for p in perm]
        row = 0
        for val, d in zip(j, out_dims):
            row = row * d + val
        col = 0
        for val, d in zip(multi, dims):
            col = col * d + val
        m[row, col] = 1.0
    return m


def _is_full_product(matrix, dims, tol=1e-9) -> bool:
    connected = _connected_blocks(matrix, dims)
    return all(np.max(np.abs(c)) <= tol
               for subset, c in connected.items() if len(subset) > 1)


def structurally_separable(s: SMatrix) -> bool:
    """True iff the operator is a wire permutation of single-wire factors.

    Such operators send every product state to a product state, so they can
    never create entanglement.
    """
    dims = list(s.wire_dims)
    n = len(dims)
    if n > 4:
        raise TooManyWires(f"{n} wires; the partition lattice is kept small")
    for perm in itertools.permutations(range(n)):
        if [dims[p] for p in perm] != dims:
            continue
        p_op = permutation_operator(dims, perm)
        if _is_full_product(dag(p_op) @ s.matrix, dims):
            return True
    return False


@dataclass(frozen=True)
class ScatterWitness:
    """Outcome of the entanglement search over product inputs."""

    entangling: bool
    witness: tuple | None
    max_entropy_bits: float
    structurally_separable: bool
    inputs_checked: int


def quantumness_witness(s: SMatrix, samples: int = 64,
                        seed=0) -> ScatterWitness:
    """Search product inputs for one that the operator entangles.

    Tensor products of single-wire unitaries (up to a wire permutation) are
    rejected exactly, without sampling.  Otherwise a fixed grid of basis
    states and uniform superpositions is scanned, followed by ``samples``
    random product states; the witness is the first input whose output
    carries more than ``1e-6`` bits of entanglement across wire one versus
    the rest.
    """
    if samples < 1:
        raise ValueError("at least one sample is required")
    if structurally_separable(s):
        return ScatterWitness(False, None, 0.0, True, 0)

    dims = s.wire_dims
    checked = 0
    best = 0.0

    def grid_options(d):
        options = [np.eye(d, dtype=complex)[k] for k in range(d)]
        options.append(np.ones(d, dtype=complex) / math.sqrt(d))
        return options

    rng = rng_from(seed)
    grid = itertools.product(*(grid_options(d) for d in dims))
    random_inputs = ([random_state_vector(d, rng) for d in dims]
                     for _ in range(samples))
    for factors in itertools.chain(grid, random_inputs):
        factors = tuple(factors)
        checked += 1
        _, bits = entangle_by_scattering(s, factors)
        best = max(best, bits)
        if bits > _ENTANGLED_BITS:
            return ScatterWitness(True, factors, bits, False, checked)
    return ScatterWitness(False, None, best, False, checked)
