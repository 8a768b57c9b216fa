"""Joint outcome measures, correlators, and the CHSH inequality.

The classical side works with a single joint measure over the four
settings' outcomes; any such nonnegative normalized measure obeys the
CHSH bound of 2, which ``lhv_maximum`` certifies by enumerating all
deterministic strategies and checking the underlying algebraic identity.
The quantum side computes correlators of +/-1 observables on two-qubit
states and scans planar measurement settings for violations, which are
capped by the ceiling of ``2*sqrt(2)``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidDistribution, NotNormalized, NotPM1Observable
from .linalg import dag
from .tensors import DEFAULT_ATOL

OUTCOMES = (+1, -1)
TSIRELSON_BOUND = 2.0 * math.sqrt(2.0)

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


class JointMeasure4:
    """A weight for every outcome tuple ``(i, i', j, j')`` in {+1,-1}^4."""

    __slots__ = ("table",)

    def __init__(self, table, lhv: bool = True, atol: float = DEFAULT_ATOL):
        full = {}
        total = 0.0
        for key in itertools.product(OUTCOMES, repeat=4):
            w = float(table.get(key, 0.0))
            full[key] = w
            total += w
        if lhv:
            if any(w < -atol for w in full.values()):
                raise InvalidDistribution("joint measure has negative weight")
            if abs(total - 1.0) > max(atol, 1e-9):
                raise InvalidDistribution(f"joint weights sum to {total}")
        self.table = full

    def total_weight(self) -> float:
        return float(sum(self.table.values()))


class PairMeasure:
    """A weight for every pair outcome ``(i, j)`` in {+1,-1}^2."""

    __slots__ = ("table",)

    def __init__(self, table):
        self.table = {key: float(table.get(key, 0.0))
                      for key in itertools.product(OUTCOMES, repeat=2)}

    def total_weight(self) -> float:
        return float(sum(self.table.values()))


class MeasurementSetting:
    """A qubit observable with eigenvalues +1 and -1."""

    __slots__ = ("observable",)

    def __init__(self, observable, atol: float = DEFAULT_ATOL):
        m = np.array(observable, dtype=complex)
        if m.shape != (2, 2):
            raise NotPM1Observable(f"expected a 2x2 matrix, got {m.shape}")
        if np.max(np.abs(m - dag(m))) > atol:
            raise NotPM1Observable("observable is not Hermitian")
        if np.max(np.abs(m @ m - np.eye(2))) > max(atol, 1e-9):
            raise NotPM1Observable("eigenvalues are not +/-1")
        m.setflags(write=False)
        self.observable = m

    @classmethod
    def planar(cls, theta: float) -> "MeasurementSetting":
        """The observable ``cos(theta) Z + sin(theta) X``."""
        return cls(math.cos(theta) * PAULI_Z + math.sin(theta) * PAULI_X)


def marginalize(measure: JointMeasure4, alice: int, bob: int) -> PairMeasure:
    """Sum out the two settings that were not selected.

    ``alice`` and ``bob`` pick the unprimed (0) or primed (1) setting on
    each side; the result weighs the selected pair's outcomes.
    """
    if alice not in (0, 1) or bob not in (0, 1):
        raise ValueError("settings are selected by 0 (unprimed) or 1 (primed)")
    out = {key: 0.0 for key in itertools.product(OUTCOMES, repeat=2)}
    for (i, ip, j, jp), w in measure.table.items():
        picked = (i if alice == 0 else ip, j if bob == 0 else jp)
        out[picked] += w
    return PairMeasure(out)


def correlator(measure: PairMeasure) -> float:
    """The signed weighted sum of outcome products."""
    return float(sum(i * j * w for (i, j), w in measure.table.items()))


def chsh_value(x_ab: float, x_apb: float, x_abp: float, x_apbp: float) -> float:
    """The CHSH combination ``X(a,b) + X(a',b) + X(a,b') - X(a',b')``."""
    return float(x_ab + x_apb + x_abp - x_apbp)


def chsh_of_measure(measure: JointMeasure4) -> float:
    """CHSH value of the four marginal correlators of one joint measure."""
    return chsh_value(
        correlator(marginalize(measure, 0, 0)),
        correlator(marginalize(measure, 1, 0)),
        correlator(marginalize(measure, 0, 1)),
        correlator(marginalize(measure, 1, 1)),
    )


def deterministic_strategies():
    """All sixteen deterministic outcome assignments with their CHSH values."""
    out = []
    for i, ip, j, jp in itertools.product(OUTCOMES, repeat=4):
        value = chsh_value(i * j, ip * j, i * jp, ip * jp)
        out.append(((i, ip, j, jp), value))
    return out


def chsh_identity_holds() -> bool:
    """Exhaustively check ``ij + i'j + ij' - i'j' = (i+i')j + (i-i')j'``."""
    for i, ip, j, jp in itertools.product(OUTCOMES, repeat=4):
        if i * j + ip * j + i * jp - ip * jp != (i + ip) * j + (i - ip) * jp:
            return False
    return True


def lhv_maximum() -> float:
    """Largest CHSH value over the deterministic strategies (exactly 2)."""
    return float(max(value for _, value in deterministic_strategies()))


def quantum_correlator(psi, a: MeasurementSetting, b: MeasurementSetting,
                       atol: float = DEFAULT_ATOL) -> float:
    """Expectation of ``A (x) B`` in a two-qubit state."""
    v = np.asarray(psi, dtype=complex).reshape(-1)
    if v.size != 4:
        raise NotNormalized("expected a two-qubit state vector")
    if abs(np.linalg.norm(v) - 1.0) > max(atol, 1e-9):
        raise NotNormalized(f"state norm is {np.linalg.norm(v)}")
    value = np.vdot(v, np.kron(a.observable, b.observable) @ v)
    return float(value.real)


def singlet_state() -> np.ndarray:
    """The two-qubit singlet ``(|01> - |10>)/sqrt(2)``."""
    return np.array([0, 1, -1, 0], dtype=complex) / math.sqrt(2)


@dataclass(frozen=True)
class TsirelsonScan:
    """Best CHSH value found on a planar-angle grid."""

    max_chsh: float
    best_angles: tuple[float, float, float, float]
    resolution: int

    def best_settings(self) -> tuple[MeasurementSetting, ...]:
        return tuple(MeasurementSetting.planar(t) for t in self.best_angles)


def tsirelson_scan(psi, resolution: int = 64) -> TsirelsonScan:
    """Grid-scan planar +/-1 observables for the largest CHSH value.

    All four angles range over ``[0, 2*pi)`` with the given resolution.
    For the singlet the maximum approaches ``2*sqrt(2)`` as the grid
    refines (a grid divisible by 8 contains the exact optimum).
    """
    if resolution < 8:
        raise ValueError("use at least 8 angles per setting")
    v = np.asarray(psi, dtype=complex).reshape(-1)
    if v.size != 4:
        raise NotNormalized("expected a two-qubit state vector")
    if abs(np.linalg.norm(v) - 1.0) > 1e-9:
        raise NotNormalized(f"state norm is {np.linalg.norm(v)}")

    paulis = (PAULI_Z, PAULI_X)
    block = np.empty((2, 2), dtype=float)
    for r, pa in enumerate(paulis):
        for c, pb in enumerate(paulis):
            block[r, c] = np.vdot(v, np.kron(pa, pb) @ v).real

    thetas = np.arange(resolution) * (2.0 * math.pi / resolution)
    trig = np.stack([np.cos(thetas), np.sin(thetas)])       # (2, res)
    corr = trig.T @ block @ trig                            # E[a, b]

    best = -np.inf
    best_idx = (0, 0, 0, 0)
    for ia in range(resolution):
        for iap in range(resolution):
            same_b = corr[ia] + corr[iap]      # over b
            diff_b = corr[ia] - corr[iap]      # over b'
            ib = int(np.argmax(same_b))
            ibp = int(np.argmax(diff_b))
            value = same_b[ib] + diff_b[ibp]
            if value > best:
                best = value
                best_idx = (ia, iap, ib, ibp)
    angles = tuple(float(thetas[k]) for k in best_idx)
    return TsirelsonScan(float(best), angles, resolution)
