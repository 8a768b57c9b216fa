"""Entropy bookkeeping: Shannon, von Neumann, and preservation audits.

All entropies are in bits (base-2 logarithms) with the ``0 log 0 = 0``
convention.  The preservation audit samples states through a bistochastic
channel and compares the entropy drift against whether the channel is
actually unitary; block-form construction assembles states and channels
that preserve entropy by design, with each direct summand carrying a
unitary part and a maximally mixed factor fixed by a unital channel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channels import Channel, DensityMatrix, channel_audit
from .errors import (
    BlockSpecViolation, InvalidDistribution, NotBistochastic, TooManyWires,
)
from .linalg import is_unitary
from .sampling import random_density_matrix, random_state_vector, rng_from
from .tensors import DEFAULT_ATOL


def entropy_bits(values) -> float:
    """Entropy of a nonnegative vector, ignoring zeros."""
    p = np.clip(np.asarray(values, dtype=float), 0.0, None)
    p = p[p > 1e-15]
    if p.size == 0:
        return 0.0
    return float(-(p * np.log2(p)).sum())


def shannon_entropy(p, atol: float = DEFAULT_ATOL) -> float:
    """Shannon entropy of a distribution, in bits."""
    probs = np.asarray(getattr(p, "probs", p), dtype=float)
    if probs.min() < -atol:
        raise InvalidDistribution(f"negative probability {probs.min()}")
    if abs(probs.sum() - 1.0) > max(atol, 1e-9):
        raise InvalidDistribution(f"probabilities sum to {probs.sum()}")
    return entropy_bits(probs)


def mutual_information(joint, atol: float = DEFAULT_ATOL) -> float:
    """Mutual information of a joint probability matrix, in bits."""
    j = np.asarray(joint, dtype=float)
    if j.ndim != 2:
        raise InvalidDistribution("expected a matrix of joint probabilities")
    if j.min() < -atol:
        raise InvalidDistribution(f"negative joint probability {j.min()}")
    if abs(j.sum() - 1.0) > max(atol, 1e-9):
        raise InvalidDistribution(f"joint probabilities sum to {j.sum()}")
    h_row = entropy_bits(j.sum(axis=1))
    h_col = entropy_bits(j.sum(axis=0))
    h_joint = entropy_bits(j.reshape(-1))
    return h_row + h_col - h_joint


def von_neumann_entropy(rho, atol: float = DEFAULT_ATOL) -> float:
    """Entropy of a density matrix from its eigenvalues, in bits."""
    if not isinstance(rho, DensityMatrix):
        rho = DensityMatrix(rho, atol=atol)
    return entropy_bits(rho.eigenvalues())


# -- preservation audit ---------------------------------------------------------

@dataclass(frozen=True)
class EntropyPreservation:
    """Entropy drift of sampled states against the unitarity verdict.

    ``consistent`` records whether "no drift on any sample" agreed with
    "the channel is unitary"; a finite sample can only support, never
    prove, the forward direction.
    """

    preserved_on_all: bool
    max_delta: float
    unitary: bool
    consistent: bool
    samples: int
    seed: int


def entropy_preservation_report(ch: Channel, sample_states: int = 20,
                                seed: int = 0,
                                tol: float = 1e-9) -> EntropyPreservation:
    """Sample states through a bistochastic channel and track entropy drift."""
    if sample_states < 10:
        raise ValueError("use at least 10 sample states")
    audit = channel_audit(ch)
    if not (audit.is_tp and audit.is_unital):
        raise NotBistochastic(
            f"tp deviation {audit.tp_deviation}, "
            f"unital deviation {audit.unital_deviation}")

    rng = rng_from(seed)
    dim = ch.dim_in
    max_delta = 0.0
    for k in range(sample_states):
        if k % 2 == 0:
            rho = random_density_matrix(dim, rng)
        else:
            v = random_state_vector(dim, rng)
            rho = np.outer(v, v.conj())
        before = entropy_bits(np.linalg.eigvalsh(rho))
        after = entropy_bits(np.linalg.eigvalsh(ch.apply_matrix(rho)))
        max_delta = max(max_delta, abs(after - before))

    preserved = max_delta <= tol
    return EntropyPreservation(
        preserved_on_all=preserved,
        max_delta=float(max_delta),
        unitary=audit.is_unitary,
        consistent=preserved == audit.is_unitary,
        samples=sample_states,
        seed=seed,
    )


# -- block forms ------------------------------------------------------------------

@dataclass(frozen=True)
class Block:
    """One direct summand: a weighted state with a unitary and a unital part.

    The summand state is ``weight * rho_left (x) I/d_right`` and the summand
    channel is ``Ad(left_unitary) (x) right_channel``.
    """

    weight: float
    rho_left: DensityMatrix
    left_unitary: np.ndarray
    right_channel: Channel


def build_blockform(blocks, atol: float = DEFAULT_ATOL):
    """Assemble the direct-sum state and channel from block data.

    Returns a pair ``(rho, channel)`` on the direct-sum space.  The right
    factor of every block is maximally mixed and fixed by the block's unital
    channel, so the assembled channel preserves the entropy of the
    assembled state exactly.
    """
    blocks = list(blocks)
    if not blocks:
        raise BlockSpecViolation("no blocks given")
    total_weight = sum(b.weight for b in blocks)
    if abs(total_weight - 1.0) > max(atol, 1e-9):
        raise BlockSpecViolation(f"block weights sum to {total_weight}")
    for b in blocks:
        if b.weight < -atol:
            raise BlockSpecViolation("negative block weight")
        u = np.asarray(b.left_unitary, dtype=complex)
        if u.shape != (b.rho_left.dim, b.rho_left.dim):
            raise BlockSpecViolation("unitary does not match the left state")
        if not is_unitary(u, max(atol, 1e-9)):
            raise BlockSpecViolation("left operator is not unitary")
        audit = channel_audit(b.right_channel)
        if not (audit.is_tp and audit.is_unital):
            raise BlockSpecViolation("right channel is not bistochastic")
        if b.right_channel.dim_in != b.right_channel.dim_out:
            raise BlockSpecViolation("right channel must be square")

    sizes = [b.rho_left.dim * b.right_channel.dim_in for b in blocks]
    total = sum(sizes)
    offsets = np.cumsum([0] + sizes[:-1])

    rho = np.zeros((total, total), dtype=complex)
    kraus = []
    for b, size, off in zip(blocks, sizes, offsets):
        d_r = b.right_channel.dim_in
        summand = b.weight * np.kron(b.rho_left.matrix, np.eye(d_r) / d_r)
        rho[off:off + size, off:off + size] = summand
        for k in b.right_channel.kraus:
            big = np.zeros((total, total), dtype=complex)
            big[off:off + size, off:off + size] = np.kron(b.left_unitary, k)
            kraus.append(big)
    return DensityMatrix(rho, atol=atol), Channel(kraus, atol=atol)


# -- cluster weights --------------------------------------------------------------

@dataclass(frozen=True)
class ClusterEntropyReport:
    """Partition weights of a scattering operator and its entropy drift.

    Weights are squared Hilbert-Schmidt masses of the cluster terms,
    normalized to one; this is a reporting convention, flagged in
    ``weight_convention``.
    """

    partitions: tuple[tuple[tuple[int, ...], ...], ...]
    weights: tuple[float, ...]
    entropy_delta: float
    weight_convention: str


def cluster_entropy_bridge(s, seed: int = 0, states: int = 8,
                           atol: float = DEFAULT_ATOL) -> ClusterEntropyReport:
    """Weigh the cluster terms of a scattering operator and audit entropy.

    Each partition's weight is the squared Hilbert-Schmidt norm of its
    aligned term (its mass under a maximally mixed reference input),
    normalized so the weights sum to one.  Conjugation by the full unitary
    is also checked to preserve entropy on random states.
    """
    from .scattering import connected_parts, term_operator

    if len(s.word) > 3:
        raise TooManyWires("cluster weights are reported for up to 3 wires")
    terms = connected_parts(s)
    masses = [float(np.linalg.norm(term_operator(t)) ** 2) for t in terms]
    total = sum(masses)
    weights = tuple(m / total for m in masses)

    rng = rng_from(seed)
    dim = s.word.total_dim
    delta = 0.0
    for _ in range(states):
        rho = random_density_matrix(dim, rng)
        before = entropy_bits(np.linalg.eigvalsh(rho))
        evolved = s.matrix @ rho @ s.matrix.conj().T
        after = entropy_bits(np.linalg.eigvalsh(evolved))
        delta = max(delta, abs(after - before))

    return ClusterEntropyReport(
        partitions=tuple(t.partition for t in terms),
        weights=weights,
        entropy_delta=float(delta),
        weight_convention="squared Hilbert-Schmidt mass, normalized to 1",
    )
