"""Density matrices, channels, and the doubling of pure diagrams.

A :class:`Channel` is stored as a nonempty Kraus family; its Choi matrix
(column-stacking vectorization, so the Choi of a map with input dimension
``m`` and output dimension ``n`` is an ``m*n`` square matrix) is cached on
first use.  Doubling turns a pure diagram into the channel that conjugates
by its tensor; discards become partial traces, and classical wires are
dephased wherever they enter or leave a generator, so copy/delete act as
genuine classical operations.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .diagrams import (
    Box, Cap, Copy, Cup, Dagger, Delete, Diagram, Discard, Id, Par, Seq, Swap,
    push_daggers, validate,
)
from .errors import (
    DimMismatch, InvalidDistribution, NotAResolution, NotAState, NotUnitary,
)
from .linalg import dag, is_unitary, kron_all, projector, unvec, vec
from .tensors import DEFAULT_ATOL, cup_vector, swap_matrix

_PRUNE = 1e-14


class ClassicalDistribution:
    """A probability distribution over a finite outcome set."""

    __slots__ = ("probs",)

    def __init__(self, probs, atol: float = DEFAULT_ATOL):
        p = np.asarray(probs, dtype=float)
        if p.ndim != 1 or p.size == 0:
            raise InvalidDistribution("expected a nonempty vector")
        if p.min() < -atol:
            raise InvalidDistribution(f"negative probability {p.min()}")
        if abs(p.sum() - 1.0) > max(atol, 1e-9 * p.size):
            raise InvalidDistribution(f"probabilities sum to {p.sum()}")
        p = np.clip(p, 0.0, None)
        p.setflags(write=False)
        self.probs = p

    def __len__(self):
        return self.probs.size

    def __getitem__(self, i):
        return float(self.probs[i])

    def __repr__(self):
        return f"ClassicalDistribution({self.probs.tolist()})"


class DensityMatrix:
    """A Hermitian, positive semidefinite, trace-one matrix."""

    __slots__ = ("matrix", "atol")

    def __init__(self, matrix, atol: float = DEFAULT_ATOL):
        m = np.array(matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise NotAState(f"expected a square matrix, got shape {m.shape}")
        if np.max(np.abs(m - dag(m))) > atol:
            raise NotAState("matrix is not Hermitian")
        eigs = np.linalg.eigvalsh(m)
        if eigs.min() < -max(atol, 1e-9):
            raise NotAState(f"negative eigenvalue {eigs.min()}")
        if abs(np.trace(m).real - 1.0) > max(atol, 1e-9):
            raise NotAState(f"trace is {np.trace(m).real}, not 1")
        m.setflags(write=False)
        self.matrix = m
        self.atol = float(atol)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def from_pure(cls, vector, atol: float = DEFAULT_ATOL) -> "DensityMatrix":
        v = np.asarray(vector, dtype=complex).reshape(-1)
        norm = np.linalg.norm(v)
        if abs(norm - 1.0) > max(atol, 1e-9):
            raise NotAState(f"vector norm is {norm}, not 1")
        return cls(np.outer(v, v.conj()), atol)

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)

    def __repr__(self):
        return f"DensityMatrix(dim={self.dim})"


class Channel:
    """A completely positive map in Kraus form."""

    __slots__ = ("kraus", "dim_in", "dim_out", "atol", "_choi")

    def __init__(self, kraus, atol: float = DEFAULT_ATOL):
        ops = [np.array(k, dtype=complex) for k in kraus]
        if not ops:
            raise ValueError("a channel needs at least one Kraus operator")
        shape = ops[0].shape
        if len(shape) != 2 or any(k.shape != shape for k in ops):
            raise DimMismatch("Kraus operators must share one 2-d shape")
        for k in ops:
            k.setflags(write=False)
        self.kraus = tuple(ops)
        self.dim_out, self.dim_in = shape
        self.atol = float(atol)
        self._choi = None

    @property
    def choi(self) -> np.ndarray:
        """Choi matrix, ``sum of vec(K) vec(K)^dagger`` (column stacking)."""
        if self._choi is None:
            d = self.dim_in * self.dim_out
            j = np.zeros((d, d), dtype=complex)
            for k in self.kraus:
                v = vec(k)
                j += np.outer(v, v.conj())
            j.setflags(write=False)
            self._choi = j
        return self._choi

    def apply_matrix(self, rho: np.ndarray) -> np.ndarray:
        rho = np.asarray(rho, dtype=complex)
        if rho.shape != (self.dim_in, self.dim_in):
            raise DimMismatch(
                f"state has shape {rho.shape}, channel input is {self.dim_in}")
        out = np.zeros((self.dim_out, self.dim_out), dtype=complex)
        for k in self.kraus:
            out += k @ rho @ dag(k)
        return out

    def then(self, other: "Channel") -> "Channel":
        """This channel first, then ``other``."""
        if self.dim_out != other.dim_in:
            raise DimMismatch("channel dimensions do not compose")
        ops = [k2 @ k1 for k1 in self.kraus for k2 in other.kraus]
        return Channel(_prune(ops), atol=max(self.atol, other.atol))

    def tensor(self, other: "Channel") -> "Channel":
        ops = [np.kron(k1, k2) for k1 in self.kraus for k2 in other.kraus]
        return Channel(_prune(ops), atol=max(self.atol, other.atol))

    def __repr__(self):
        return (f"Channel(dim_in={self.dim_in}, dim_out={self.dim_out}, "
                f"kraus={len(self.kraus)})")


def _prune(ops):
    kept = [k for k in ops if np.max(np.abs(k)) > _PRUNE]
    return kept if kept else [np.zeros_like(ops[0])]


# -- doubling -------------------------------------------------------------------

def double(d: Diagram) -> Channel:
    """Interpret a diagram at the channel level.

    Pure all-quantum boxes become single-Kraus conjugations, discards become
    partial traces, and classical copy/delete become the basis copy and
    marginalization.  Doubling is functorial: the double of a composite is
    the composite of the doubles.
    """
    validate(d)
    return Channel(_prune(_kraus_of(push_daggers(d))))


def _dephasers(word) -> list[np.ndarray]:
    """Kraus families projecting every classical wire of a word onto its basis."""
    classical = [(k, w.dim) for k, w in enumerate(word) if w.is_classical]
    if not classical:
        return [np.eye(word.total_dim, dtype=complex)]
    out = []
    for combo in itertools.product(*(range(dim) for _, dim in classical)):
        chosen = dict(zip((k for k, _ in classical), combo))
        mats = [projector(chosen[k], w.dim) if k in chosen
                else np.eye(w.dim, dtype=complex)
                for k, w in enumerate(word)]
        out.append(kron_all(mats))
    return out


def _box_kraus(matrix, dom, cod) -> list[np.ndarray]:
    return [do @ matrix @ di
            for do in _dephasers(cod) for di in _dephasers(dom)]


def _kraus_of(d) -> list[np.ndarray]:
    if isinstance(d, Id):
        return [np.eye(d.word.total_dim, dtype=complex)]
    if isinstance(d, Box):
        if d.payload is None:
            from .errors import MissingPayload
            raise MissingPayload(d.name)
        return _box_kraus(d.payload, d.dom, d.cod)
    if isinstance(d, Dagger):
        return [dag(k) for k in _kraus_of(d.inner)]
    if isinstance(d, Seq):
        first = _kraus_of(d.first)
        second = _kraus_of(d.second)
        return _prune([k2 @ k1 for k1 in first for k2 in second])
    if isinstance(d, Par):
        left = _kraus_of(d.left)
        right = _kraus_of(d.right)
        return _prune([np.kron(k1, k2) for k1 in left for k2 in right])
    if isinstance(d, Swap):
        return [swap_matrix(d.a.dim, d.b.dim)]
    if isinstance(d, Cup):
        n = d.wire.dim
        if d.wire.is_classical:
            return [_correlated_column(i, n) for i in range(n)]
        return [cup_vector(n)]
    if isinstance(d, Cap):
        n = d.wire.dim
        if d.wire.is_classical:
            return [_correlated_column(i, n).conj().T for i in range(n)]
        return [cup_vector(n).conj().T]
    if isinstance(d, Copy):
        n = d.wire.dim
        return [_copy_branch(i, n) for i in range(n)]
    if isinstance(d, Delete):
        n = d.wire.dim
        return [projector(i, n)[i:i + 1, :] for i in range(n)]
    if isinstance(d, Discard):
        n = d.wire.dim
        return [projector(i, n)[i:i + 1, :] for i in range(n)]
    raise TypeError(f"cannot double {type(d).__name__}")


def _correlated_column(i, n):
    v = np.zeros((n * n, 1), dtype=complex)
    v[i * n + i, 0] = 1.0
    return v


def _copy_branch(i, n):
    m = np.zeros((n * n, n), dtype=complex)
    m[i * n + i, i] = 1.0
    return m


# -- channel operations -----------------------------------------------------------

def apply(ch: Channel, rho: DensityMatrix) -> DensityMatrix:
    """Apply a channel to a state.  The channel must be trace preserving."""
    out = ch.apply_matrix(rho.matrix)
    return DensityMatrix(out, atol=max(ch.atol, rho.atol))


@dataclass(frozen=True)
class ChannelAudit:
    """Structural facts about a channel, each checked within tolerance."""

    is_cp: bool
    is_tp: bool
    is_unital: bool
    is_unitary: bool
    cp_deviation: float
    tp_deviation: float
    unital_deviation: float


def channel_audit(ch: Channel, atol: float | None = None) -> ChannelAudit:
    """Check complete positivity, trace preservation, unitality, unitarity."""
    atol = ch.atol if atol is None else atol
    eye_in = np.eye(ch.dim_in)
    eye_out = np.eye(ch.dim_out)

    choi = ch.choi
    eigs = np.linalg.eigvalsh(choi)
    cp_dev = float(max(0.0, -eigs.min()))
    is_cp = cp_dev <= atol

    ktk = sum(dag(k) @ k for k in ch.kraus)
    tp_dev = float(np.max(np.abs(ktk - eye_in)))
    kkt = sum(k @ dag(k) for k in ch.kraus)
    unital_dev = float(np.max(np.abs(kkt - eye_out)))

    unitary = False
    if ch.dim_in == ch.dim_out and tp_dev <= atol and unital_dev <= atol:
        vals, vecs = np.linalg.eigh(choi)
        rank1 = vals[-2] <= max(atol, atol * vals[-1]) if vals.size > 1 else True
        if rank1 and vals[-1] > atol:
            k = unvec(np.sqrt(vals[-1]) * vecs[:, -1], ch.dim_out, ch.dim_in)
            unitary = is_unitary(k, max(10 * atol, 1e-8))

    return ChannelAudit(
        is_cp=is_cp,
        is_tp=tp_dev <= atol,
        is_unital=unital_dev <= atol,
        is_unitary=unitary,
        cp_deviation=cp_dev,
        tp_deviation=tp_dev,
        unital_deviation=unital_dev,
    )


def causality_check(ch: Channel, atol: float | None = None) -> bool:
    """A channel is causal iff discarding its output discards its input."""
    atol = ch.atol if atol is None else atol
    ktk = sum(dag(k) @ k for k in ch.kraus)
    return float(np.max(np.abs(ktk - np.eye(ch.dim_in)))) <= atol


def decoherence(dim: int) -> Channel:
    """Measure-then-prepare in the computational basis: full dephasing."""
    if dim < 1:
        raise ValueError("dimension must be positive")
    return Channel([projector(i, dim) for i in range(dim)])


def prepare(p: ClassicalDistribution | list | np.ndarray) -> DensityMatrix:
    """The diagonal state encoding a classical distribution."""
    if not isinstance(p, ClassicalDistribution):
        p = ClassicalDistribution(p)
    return DensityMatrix(np.diag(p.probs.astype(complex)))


def measure(rho: DensityMatrix) -> ClassicalDistribution:
    """Computational-basis outcome probabilities of a state."""
    return ClassicalDistribution(np.real(np.diag(rho.matrix)),
                                 atol=max(rho.atol, 1e-9))


def transition_probability(rho_a: DensityMatrix, rho_b: DensityMatrix,
                           unitary=None,
                           atol: float = DEFAULT_ATOL) -> float:
    """Overlap ``tr(rho_a rho_b)``, optionally after evolving ``rho_a``.

    With an evolution matrix ``S`` this is ``tr(S rho_a S^dagger rho_b)``.
    For pure states it reduces to the squared inner product of the vectors.
    """
    a, b = rho_a.matrix, rho_b.matrix
    if a.shape != b.shape:
        raise DimMismatch(f"state dims {a.shape[0]} and {b.shape[0]} differ")
    if unitary is not None:
        u = np.asarray(unitary, dtype=complex)
        if u.shape != a.shape:
            raise DimMismatch("evolution matrix does not fit the states")
        if not is_unitary(u, atol):
            raise NotUnitary("evolution matrix is not unitary")
        a = u @ a @ dag(u)
    return float(np.trace(a @ b).real)


@dataclass(frozen=True)
class StateChangeReport:
    """Nonselective channel, its selective parts, and their Choi residual."""

    nonselective: Channel
    selective: tuple[Channel, ...]
    choi_residual: float
    weights: tuple[float, ...] | None
    posteriors: tuple[DensityMatrix | None, ...] | None
    updated_state: DensityMatrix | None


def state_change_decomposition(projectors, rho: DensityMatrix | None = None,
                               atol: float = DEFAULT_ATOL) -> StateChangeReport:
    """Split a projective update into selective branches and recombine it.

    Builds the nonselective channel ``T`` with Kraus family the projectors
    and the selective maps ``T_a`` with one projector each, and verifies
    ``Choi(T) = sum of Choi(T_a)``.  Given a state, also reports the outcome
    weights, the conditional states, and their mixture.
    """
    ps = [np.asarray(p, dtype=complex) for p in projectors]
    if not ps:
        raise NotAResolution("no projectors given")
    dim = ps[0].shape[0]
    for p in ps:
        if p.shape != (dim, dim):
            raise NotAResolution("projectors must share one square shape")
        if np.max(np.abs(p - dag(p))) > atol:
            raise NotAResolution("projector is not Hermitian")
        if np.max(np.abs(p @ p - p)) > atol:
            raise NotAResolution("projector is not idempotent")
    for i in range(len(ps)):
        for j in range(i + 1, len(ps)):
            if np.max(np.abs(ps[i] @ ps[j])) > atol:
                raise NotAResolution("projectors are not orthogonal")
    if np.max(np.abs(sum(ps) - np.eye(dim))) > atol:
        raise NotAResolution("projectors do not sum to the identity")

    nonselective = Channel(ps, atol=atol)
    selective = tuple(Channel([p], atol=atol) for p in ps)
    total = sum(t.choi for t in selective)
    residual = float(np.max(np.abs(nonselective.choi - total)))

    weights = posteriors = updated = None
    if rho is not None:
        weights = tuple(float(np.trace(p @ rho.matrix).real) for p in ps)
        posts = []
        for p, w in zip(ps, weights):
            if w > atol:
                posts.append(DensityMatrix(p @ rho.matrix @ p / w, atol=atol))
            else:
                posts.append(None)
        posteriors = tuple(posts)
        updated = DensityMatrix(nonselective.apply_matrix(rho.matrix),
                                atol=atol)
    return StateChangeReport(nonselective, selective, residual,
                             weights, posteriors, updated)


# -- ready-made channels -----------------------------------------------------------

def identity_channel(dim: int) -> Channel:
    return Channel([np.eye(dim, dtype=complex)])


def unitary_channel(u, atol: float = DEFAULT_ATOL) -> Channel:
    """Conjugation by a unitary matrix."""
    u = np.asarray(u, dtype=complex)
    if not is_unitary(u, atol):
        raise NotUnitary("matrix is not unitary")
    return Channel([u], atol=atol)


def depolarizing(lam: float, dim: int = 2) -> Channel:
    """Mix a state with the maximally mixed one: ``(1-lam) rho + lam I/d``."""
    if not 0.0 <= lam <= 1.0:
        raise ValueError("mixing parameter must lie in [0, 1]")
    shift = np.zeros((dim, dim), dtype=complex)
    for j in range(dim):
        shift[(j + 1) % dim, j] = 1.0
    omega = np.exp(2j * np.pi / dim)
    clock = np.diag([omega ** j for j in range(dim)])
    ops = []
    for a in range(dim):
        for b in range(dim):
            w = np.linalg.matrix_power(shift, a) @ np.linalg.matrix_power(clock, b)
            if a == 0 and b == 0:
                coeff = np.sqrt(1.0 - lam + lam / dim ** 2)
            else:
                coeff = np.sqrt(lam / dim ** 2)
            ops.append(coeff * w)
    return Channel(_prune(ops))
