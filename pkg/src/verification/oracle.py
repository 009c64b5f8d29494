"""
Brute-Force Optimality Oracle

Brackets the minimum-error success probability from both sides without the
closed-form regime analysis:

- primal_grid_search: best success over the mirror-symmetric ansatz family and
  over all two-outcome projective measurements (a lower bound)
- dual_certificate_search: smallest trace(Γ) over real symmetric Γ with
  Γ ⪰ p_i|ψ_i><ψ_i| for every i (an upper bound, by weak duality)

For fixed (x, z) the smallest feasible y in Γ = [[x, z], [z, y]] is
max_i [C_i + (z - B_i)²/(x - A_i)] where p_i|ψ_i><ψ_i| = [[A_i, B_i], [B_i, C_i]],
so the dual is a convex problem in (x, z). It is solved by a coarse grid
followed by nested bounded scalar minimization with fixed iteration caps.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import minimize_scalar

from src.config import Config
from src.errors import DomainError, InfeasibleStartError
from src.measurement.ensemble import MirrorEnsemble, QubitStateVector
from src.measurement.operators import (
    Operator2,
    Povm,
    lagrange_operator,
    min_eigenvalue,
    projector,
    success_probability,
)
from src.measurement.strategy import optimal_povm, optimal_success, three_element_povm

logger = logging.getLogger("mirror_povm.oracle")

# Refinement caps
INNER_MAXITER = 200
OUTER_MAXITER = 200
REFINE_XATOL = 1e-12
WEAK_DUALITY_TOL = 1e-9
FEASIBILITY_LIFT = 1e-15


@dataclass(frozen=True)
class PrimalBound:
    """Best measurement found by the primal search"""

    value: float
    povm: Povm
    family: str  # "ansatz" or "von_neumann"
    parameter: float  # a for the ansatz family, projector angle α otherwise


@dataclass(frozen=True)
class DualBound:
    """Feasible dual matrix Γ with trace(Γ) = value"""

    value: float
    gamma: Operator2
    feasibility_margin: float
    warm_start: bool


@dataclass(frozen=True)
class SandwichResult:
    primal_best: float
    dual_best: float
    closed_form: float
    gap: float
    resolution: float
    slack: float

    @property
    def contains_closed_form(self) -> bool:
        return self.primal_best - self.slack <= self.closed_form <= self.dual_best + self.slack

    @property
    def weak_duality_ok(self) -> bool:
        return self.primal_best <= self.dual_best + WEAK_DUALITY_TOL

    def to_dict(self) -> dict:
        return {
            "primal_best": self.primal_best,
            "dual_best": self.dual_best,
            "closed_form": self.closed_form,
            "gap": self.gap,
            "resolution": self.resolution,
            "slack": self.slack,
            "contains_closed_form": self.contains_closed_form,
            "weak_duality_ok": self.weak_duality_ok,
        }


def _check_resolution(resolution: float) -> None:
    if not 0.0 < resolution <= 0.1:
        raise DomainError("resolution", resolution, "(0, 0.1]")


def slack_for(resolution: float) -> float:
    """Heuristic sandwich slack, validated on the trivial cases"""
    return Config.ORACLE_SLACK_FACTOR * resolution


# ===== Primal =====

def _state_arrays(e: MirrorEnsemble) -> Tuple[np.ndarray, np.ndarray]:
    states = np.array([s.as_tuple() for s in e.states])
    return states, np.array(e.priors)


def _best_ansatz(e: MirrorEnsemble, resolution: float) -> Tuple[float, float]:
    states, priors = _state_arrays(e)
    a = np.linspace(0.0, 1.0, math.ceil(1.0 / resolution) + 1)
    c_p, c_m = states[:, 0], states[:, 1]
    # <ψ_j|π_j|ψ_j> for the ansatz: ½(a c+ ± c-)² for j = 1, 2 and (1 - a²)c+² for j = 3
    hit1 = 0.5 * (a * c_p[0] + c_m[0]) ** 2
    hit2 = 0.5 * (a * c_p[1] - c_m[1]) ** 2
    hit3 = (1.0 - a * a) * c_p[2] ** 2
    values = priors[0] * hit1 + priors[1] * hit2 + priors[2] * hit3
    best = int(np.argmax(values))
    return float(a[best]), float(values[best])


def _best_projective(e: MirrorEnsemble, resolution: float) -> Tuple[float, float, Tuple[int, int]]:
    states, priors = _state_arrays(e)
    n = math.ceil(math.pi / resolution)
    alpha = math.pi * np.arange(n) / n
    v = np.stack([np.cos(alpha), np.sin(alpha)], axis=1)
    w = np.stack([-np.sin(alpha), np.cos(alpha)], axis=1)
    # weighted hit rates p_i <ψ_i|P|ψ_i> for each outcome and candidate label i
    hits_v = priors[None, :] * (v @ states.T) ** 2
    hits_w = priors[None, :] * (w @ states.T) ** 2
    values = hits_v.max(axis=1) + hits_w.max(axis=1)
    best = int(np.argmax(values))
    labels = (int(np.argmax(hits_v[best])), int(np.argmax(hits_w[best])))
    return float(alpha[best]), float(values[best]), labels


def _projective_povm(alpha: float, labels: Tuple[int, int]) -> Povm:
    v = QubitStateVector(math.cos(alpha), math.sin(alpha))
    w = QubitStateVector(-math.sin(alpha), math.cos(alpha))
    elements: List[Operator2] = [Operator2.zero()] * 3
    elements[labels[0]] = elements[labels[0]] + projector(v)
    elements[labels[1]] = elements[labels[1]] + projector(w)
    return Povm(tuple(elements))


def primal_grid_search(e: MirrorEnsemble, resolution: Optional[float] = None) -> PrimalBound:
    """
    Lower bound on the optimal success probability

    Args:
        e: Signal ensemble
        resolution: Grid step for a and for the projector angle α, in (0, 0.1]

    Returns:
        PrimalBound with the best value and the measurement achieving it
    """
    resolution = Config.ORACLE_RESOLUTION if resolution is None else resolution
    _check_resolution(resolution)

    a, _ = _best_ansatz(e, resolution)
    alpha, _, labels = _best_projective(e, resolution)

    ansatz_povm = three_element_povm(a)
    ansatz = PrimalBound(success_probability(e, ansatz_povm), ansatz_povm, "ansatz", a)
    projective_povm = _projective_povm(alpha, labels)
    projective = PrimalBound(
        success_probability(e, projective_povm), projective_povm, "von_neumann", alpha
    )
    best = ansatz if ansatz.value >= projective.value else projective
    logger.debug(
        f"Primal at theta={e.theta:.6g} p={e.p:.6g}: ansatz {ansatz.value:.12g}, "
        f"projective {projective.value:.12g}"
    )
    return best


# ===== Dual =====

def _dual_terms(e: MirrorEnsemble) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    weighted = [projector(state, prior) for state, prior in zip(e.states, e.priors)]
    return (
        np.array([w.a11 for w in weighted]),
        np.array([w.a12 for w in weighted]),
        np.array([w.a22 for w in weighted]),
    )


def _min_feasible_y(
    x: float, z: float, A: Sequence[float], B: Sequence[float], C: Sequence[float]
) -> float:
    """Smallest y making [[x, z], [z, y]] - p_i ρ_i PSD for all i (inf if none)"""
    y = -math.inf
    for a_i, b_i, c_i in zip(A, B, C):
        gap = x - a_i
        dz = z - b_i
        if gap > 0.0:
            term = c_i + dz * dz / gap
        elif gap == 0.0 and dz == 0.0:
            term = c_i
        else:
            return math.inf
        y = max(y, term)
    return y


def _inner(x: float, A, B, C) -> Tuple[float, float]:
    """min over z of x + y_min(x, z); returns (value, z)"""
    result = minimize_scalar(
        lambda z: x + _min_feasible_y(x, z, A, B, C),
        bounds=(-1.0, 1.0),
        method="bounded",
        options={"xatol": REFINE_XATOL, "maxiter": INNER_MAXITER},
    )
    return float(result.fun), float(result.x)


def _refine(lo: float, hi: float, A, B, C) -> Tuple[float, float]:
    """Minimize over x in [lo, hi]; returns (x, z)"""
    result = minimize_scalar(
        lambda x: _inner(x, A, B, C)[0],
        bounds=(lo, hi),
        method="bounded",
        options={"xatol": REFINE_XATOL, "maxiter": OUTER_MAXITER},
    )
    x = float(result.x)
    return x, _inner(x, A, B, C)[1]


def _coarse_grid(x_lo: float, x_hi: float, step: float, A, B, C) -> Tuple[float, float, float]:
    nx = max(3, math.ceil((x_hi - x_lo) / step))
    xs = np.linspace(x_lo, x_hi, nx + 2)[1:-1]
    zs = np.linspace(-1.0, 1.0, max(3, math.ceil(2.0 / step)) + 1)
    X, Z = xs[:, None, None], zs[None, :, None]
    with np.errstate(divide="ignore", invalid="ignore"):
        y = np.max(C + (Z - B) ** 2 / (X - A), axis=2)
    values = xs[:, None] + y
    values[~np.isfinite(values)] = np.inf
    flat = int(np.argmin(values))
    i, j = np.unravel_index(flat, values.shape)
    return float(values[i, j]), float(xs[i]), float(zs[j])


def dual_certificate_search(
    e: MirrorEnsemble,
    resolution: Optional[float] = None,
    warm_start: bool = False,
) -> DualBound:
    """
    Upper bound on the optimal success probability via a feasible dual matrix

    Args:
        e: Signal ensemble
        resolution: Sets the coarse grid step (10·resolution, at most 0.05), in (0, 0.1]
        warm_start: Center the refinement at Σ_j p_jρ_jπ_j of the closed-form POM
            instead of the coarse grid optimum; falls back to the grid when the
            refined point lands on the edge of the warm bracket

    Returns:
        DualBound whose value is trace(Γ) for a feasible Γ

    Raises:
        InfeasibleStartError: If the coarse grid holds no feasible point
    """
    resolution = Config.ORACLE_RESOLUTION if resolution is None else resolution
    _check_resolution(resolution)
    A, B, C = _dual_terms(e)
    terms = (A.tolist(), B.tolist(), C.tolist())

    # feasible x > max A_i; optimum has trace ≤ 1 and y ≥ 0, hence x ≤ 1
    x_lo, x_hi = float(A.max()), 1.0 + resolution
    step = min(0.05, 10.0 * resolution)
    edge_tol = 1e-9

    def bracket_around(x_center: float) -> Tuple[float, float]:
        return max(x_lo, x_center - 2.0 * step), min(x_hi, x_center + 2.0 * step)

    x, z = math.nan, math.nan
    used_warm = False
    if warm_start:
        gamma0 = lagrange_operator(e, optimal_povm(e).povm)
        lo, hi = bracket_around(gamma0.a11)
        x, z = _refine(lo, hi, *terms)
        on_edge = (lo > x_lo and x - lo <= edge_tol) or (hi < x_hi and hi - x <= edge_tol)
        used_warm = not on_edge
        if on_edge:
            logger.debug("Warm-started dual landed on its bracket edge, falling back to grid")

    if not used_warm:
        grid_value, x_grid, _ = _coarse_grid(x_lo, x_hi, step, A, B, C)
        if not math.isfinite(grid_value):
            raise InfeasibleStartError(
                f"No feasible dual point on the coarse grid at theta={e.theta:.6g}, p={e.p:.6g}"
            )
        lo, hi = bracket_around(x_grid)
        x, z = _refine(lo, hi, *terms)
        if (lo > x_lo and x - lo <= edge_tol) or (hi < x_hi and hi - x <= edge_tol):
            x, z = _refine(x_lo, x_hi, *terms)

    y = _min_feasible_y(x, z, *terms)
    gamma = Operator2(x, z, y)
    weighted = [projector(state, prior) for state, prior in zip(e.states, e.priors)]
    margin = min(min_eigenvalue(gamma - w) for w in weighted)
    if margin < 0.0:
        # rounding-level infeasibility; a multiple of I raises every eigenvalue
        gamma = gamma + (2.0 * abs(margin) + FEASIBILITY_LIFT) * Operator2.identity()
        margin = min(min_eigenvalue(gamma - w) for w in weighted)

    logger.debug(
        f"Dual at theta={e.theta:.6g} p={e.p:.6g}: trace {gamma.trace:.12g}, margin {margin:.3e}"
    )
    return DualBound(gamma.trace, gamma, margin, used_warm)


# ===== Sandwich =====

def sandwich(e: MirrorEnsemble, resolution: Optional[float] = None) -> SandwichResult:
    """
    Bracket the closed-form optimum between the primal and (cold) dual searches

    Args:
        e: Signal ensemble
        resolution: Oracle resolution in (0, 0.1]

    Returns:
        SandwichResult; contains_closed_form and weak_duality_ok summarize the check
    """
    resolution = Config.ORACLE_RESOLUTION if resolution is None else resolution
    primal = primal_grid_search(e, resolution)
    dual = dual_certificate_search(e, resolution, warm_start=False)
    closed_form = optimal_success(e)
    result = SandwichResult(
        primal_best=primal.value,
        dual_best=dual.value,
        closed_form=closed_form,
        gap=dual.value - primal.value,
        resolution=resolution,
        slack=slack_for(resolution),
    )
    if not result.contains_closed_form:
        logger.warning(
            f"Closed form {closed_form:.12g} outside [{primal.value:.12g}, {dual.value:.12g}] "
            f"at theta={e.theta:.6g}, p={e.p:.6g}"
        )
    return result
