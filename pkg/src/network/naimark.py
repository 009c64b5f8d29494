"""
Optical Network (Naimark Extension) and Shot Simulator

The three-element POM is realized as a projective measurement on three modes:
|H>1, |V>1 carry the signal and |V>2 is an ancilla port fed with vacuum.
Detector index 0 is PD1 (outcome 1), 1 is PD2, 2 is PD3.

Random numbers come from numpy's Philox4x64 counter-based generator keyed by
the seed. Raw 64-bit words w are mapped to doubles as (w >> 11) * 2**-53.
Shot k consumes word 2k (state draw) then word 2k+1 (detector draw), so a
shard that starts at an even shot s is reproduced by starting Philox at
counter s // 2; merged counts do not depend on how shots are sharded.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from src.config import Config
from src.errors import DomainError
from src.measurement.ensemble import MirrorEnsemble, QubitStateVector
from src.measurement.operators import Povm, conditional_probabilities

logger = logging.getLogger("mirror_povm.network")

DETECTORS = ("PD1", "PD2", "PD3")
_WORDS_PER_COUNTER = 4
_DOUBLE_SCALE = 2.0 ** -53


@dataclass(frozen=True, eq=False)
class NaimarkUnitary:
    """3x3 real orthogonal matrix whose rows extend the POM vectors |φ1>, |φ2>, |φ3>"""

    u: np.ndarray
    a: float

    def orthogonality_defect(self) -> float:
        """max(|UUᵀ - I|, |UᵀU - I|) over entries"""
        eye = np.eye(3)
        return float(max(
            np.max(np.abs(self.u @ self.u.T - eye)),
            np.max(np.abs(self.u.T @ self.u - eye)),
        ))


@dataclass(frozen=True)
class ShotReport:
    """Detector counts for a batch of shots against their expected distribution"""

    counts: Tuple[int, int, int]
    n_shots: int
    expected: Tuple[float, float, float]
    seed: int
    max_sigma_deviation: float
    sigma_deviations: Tuple[float, float, float] = (0.0, 0.0, 0.0)

    def to_dict(self) -> dict:
        return {
            "counts": dict(zip(DETECTORS, self.counts)),
            "n_shots": self.n_shots,
            "expected": dict(zip(DETECTORS, self.expected)),
            "seed": self.seed,
            "max_sigma_deviation": self.max_sigma_deviation,
            "sigma_deviations": dict(zip(DETECTORS, self.sigma_deviations)),
        }


@dataclass(frozen=True)
class SimulationReport:
    """Overall and per-signal-state detector statistics of a simulated run"""

    overall: ShotReport
    per_state: Tuple[ShotReport, ShotReport, ShotReport]
    confusion: Tuple[Tuple[int, int, int], ...]
    correct: int
    empirical_success: float
    expected_success: float
    success_sigma_deviation: float

    def to_dict(self) -> dict:
        return {
            "overall": self.overall.to_dict(),
            "per_state": [report.to_dict() for report in self.per_state],
            "confusion": [list(row) for row in self.confusion],
            "correct": self.correct,
            "empirical_success": self.empirical_success,
            "expected_success": self.expected_success,
            "success_sigma_deviation": self.success_sigma_deviation,
        }


# ===== Unitary =====

def extend_unitary(a: float) -> NaimarkUnitary:
    """
    Build the network unitary for ansatz parameter a

    Args:
        a: Ansatz parameter in [0, 1] (1 is the two-element strategy)

    Returns:
        NaimarkUnitary with rows (a, 1, √(1-a²))/√2, (a, -1, √(1-a²))/√2, (√(1-a²), 0, -a)

    Raises:
        DomainError: If a is outside [0, 1]
    """
    if not 0.0 <= a <= 1.0:
        raise DomainError("a", a, "[0, 1]")
    b = math.sqrt(1.0 - a * a)
    inv_sqrt2 = 1.0 / math.sqrt(2.0)
    u = np.array([
        [a * inv_sqrt2, inv_sqrt2, b * inv_sqrt2],
        [a * inv_sqrt2, -inv_sqrt2, b * inv_sqrt2],
        [b, 0.0, -a],
    ])
    u.setflags(write=False)
    return NaimarkUnitary(u, a)


def embed_signal(state: QubitStateVector) -> np.ndarray:
    """Signal in |H>1, |V>1 and vacuum in the ancilla mode |V>2"""
    return np.array([state.c_plus, state.c_minus, 0.0])


def born_probabilities(u: NaimarkUnitary, state: QubitStateVector) -> Tuple[float, float, float]:
    """Squared output amplitudes of U applied to the embedded signal"""
    amplitudes = u.u @ embed_signal(state)
    probabilities = np.clip(amplitudes * amplitudes, 0.0, 1.0)
    return tuple(float(x) for x in probabilities)


def born_table(u: NaimarkUnitary, e: MirrorEnsemble) -> List[Tuple[float, float, float]]:
    """Row i holds the detector distribution for signal state i"""
    return [born_probabilities(u, state) for state in e.states]


def max_born_deviation(u: NaimarkUnitary, e: MirrorEnsemble, povm: Povm) -> float:
    """Largest |born(j|i) - <ψ_i|π_j|ψ_i>| over all i, j"""
    network = np.array(born_table(u, e))
    pom = np.array(conditional_probabilities(e, povm))
    return float(np.max(np.abs(network - pom)))


# ===== Sampling =====

def _uniforms(seed: int, start_shot: int, n_shots: int) -> np.ndarray:
    """Two uniforms per shot for shots [start_shot, start_shot + n_shots)"""
    bit_generator = np.random.Philox(key=seed, counter=start_shot * 2 // _WORDS_PER_COUNTER)
    words = bit_generator.random_raw(2 * n_shots)
    return (words >> np.uint64(11)).astype(np.float64) * _DOUBLE_SCALE


def _inverse_cdf(cdf: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Index of the first cdf entry strictly above u (cdf rows end at exactly 1)"""
    return np.minimum((u[:, None] >= cdf).sum(axis=1), cdf.shape[-1] - 1)


def _sample_shard(
    priors: np.ndarray,
    table: np.ndarray,
    seed: int,
    start_shot: int,
    n_shots: int,
) -> np.ndarray:
    """Return a 3x3 confusion count matrix (signal state × detector)"""
    uniforms = _uniforms(seed, start_shot, n_shots)
    state_draws, detector_draws = uniforms[0::2], uniforms[1::2]

    prior_cdf = np.cumsum(priors)
    prior_cdf[-1] = 1.0
    states = _inverse_cdf(prior_cdf[None, :], state_draws)

    detector_cdf = np.cumsum(table, axis=1)
    detector_cdf[:, -1] = 1.0
    detectors = np.minimum(
        (detector_draws[:, None] >= detector_cdf[states]).sum(axis=1), 2
    )

    confusion = np.zeros((3, 3), dtype=np.int64)
    np.add.at(confusion, (states, detectors), 1)
    return confusion


def _shard_bounds(n_shots: int, shards: int) -> List[Tuple[int, int]]:
    """Split [0, n_shots) into contiguous shards whose starts are even"""
    size = max(2, math.ceil(n_shots / shards))
    size += size % 2
    return [(start, min(size, n_shots - start)) for start in range(0, n_shots, size)]


def _sigma_deviation(observed: float, expected: float, n: int) -> float:
    if n == 0:
        return 0.0
    sigma = math.sqrt(expected * (1.0 - expected) / n)
    gap = abs(observed - expected)
    if sigma == 0.0:
        return 0.0 if gap <= 1e-12 else math.inf
    return gap / sigma


def _shot_report(counts: np.ndarray, expected: Sequence[float], seed: int) -> ShotReport:
    n = int(counts.sum())
    deviations = tuple(
        _sigma_deviation(counts[j] / n if n else 0.0, expected[j], n) for j in range(3)
    )
    return ShotReport(
        counts=tuple(int(c) for c in counts),
        n_shots=n,
        expected=tuple(float(q) for q in expected),
        seed=seed,
        max_sigma_deviation=max(deviations),
        sigma_deviations=deviations,
    )


def simulate_network(
    u: NaimarkUnitary,
    e: MirrorEnsemble,
    n_shots: int,
    seed: Optional[int] = None,
    shards: int = 1,
) -> SimulationReport:
    """
    Monte Carlo run of the network with single photons prepared per the priors

    Args:
        u: Network unitary
        e: Signal ensemble (state draw per shot follows e.priors)
        n_shots: Number of photons, at least 1
        seed: 64-bit generator key (default Config.DEFAULT_SEED)
        shards: Number of counter-space shards; the result does not depend on it

    Returns:
        SimulationReport with overall and per-state ShotReports, confusion matrix
        and empirical success rate

    Raises:
        DomainError: On n_shots < 1, shards < 1 or a seed outside [0, 2**64)
    """
    seed = Config.DEFAULT_SEED if seed is None else seed
    if n_shots < 1:
        raise DomainError("n_shots", n_shots, "n_shots >= 1")
    if shards < 1:
        raise DomainError("shards", shards, "shards >= 1")
    if not 0 <= seed < 2**64:
        raise DomainError("seed", seed, "[0, 2**64)")

    priors = np.array(e.priors, dtype=float)
    table = np.array(born_table(u, e), dtype=float)

    confusion = np.zeros((3, 3), dtype=np.int64)
    for start, size in _shard_bounds(n_shots, shards):
        confusion += _sample_shard(priors, table, seed, start, size)

    expected_overall = priors @ table
    overall = _shot_report(confusion.sum(axis=0), expected_overall, seed)
    per_state = tuple(_shot_report(confusion[i], table[i], seed) for i in range(3))

    correct = int(np.trace(confusion))
    empirical = correct / n_shots
    expected_success = float(np.dot(priors, np.diag(table)))
    report = SimulationReport(
        overall=overall,
        per_state=per_state,
        confusion=tuple(tuple(int(c) for c in row) for row in confusion),
        correct=correct,
        empirical_success=empirical,
        expected_success=expected_success,
        success_sigma_deviation=_sigma_deviation(empirical, expected_success, n_shots),
    )
    logger.info(
        f"Simulated {n_shots} shots (seed={seed}, a={u.a:.6g}): "
        f"success {empirical:.6f} vs expected {expected_success:.6f} "
        f"({report.success_sigma_deviation:.2f}σ)"
    )
    return report
