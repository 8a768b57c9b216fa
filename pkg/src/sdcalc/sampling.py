"""Seeded random matrices and states for audits and tests."""

from __future__ import annotations

import numpy as np


def rng_from(seed) -> np.random.Generator:
    """Accept a seed or an existing generator."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def random_unitary(dim: int, rng) -> np.ndarray:
    """Haar-distributed unitary via the QR decomposition trick."""
    rng = rng_from(rng)
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(z)
    phases = np.diag(r).copy()
    phases /= np.abs(phases)
    return q * phases


def random_state_vector(dim: int, rng) -> np.ndarray:
    rng = rng_from(rng)
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def random_density_matrix(dim: int, rng, rank: int | None = None) -> np.ndarray:
    """A random mixed state; full rank by default."""
    rng = rng_from(rng)
    rank = dim if rank is None else rank
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    m = g @ g.conj().T
    return m / np.trace(m).real


def random_product_vectors(dims, rng) -> list[np.ndarray]:
    """One random unit vector per factor dimension."""
    rng = rng_from(rng)
    return [random_state_vector(d, rng) for d in dims]
