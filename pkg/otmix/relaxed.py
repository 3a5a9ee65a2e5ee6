"""
Relaxed optimal transport with a diagonal window.

Dropping the column-marginal constraint turns OT into a per-row problem: each
source token sends all of its mass to its cheapest admissible target. The
optimum is a lower bound of the exact OT cost.
"""
from typing import Tuple

import numpy as np

from .constants import GRAD_DISTANCE_MIN
from .cost import cost_matrix
from .errors import DegenerateGradient, IndexOutOfRange, ShapeMismatch
from .sequences import masses_from_norms
from .types import Alignment, CostMatrix, EmbeddingSequence, MassVector, TransportPlan
from .types import WindowConfig


#
# Window strategy
#
def window_bounds(i: int, n: int, n_hat: int, W: int) -> Tuple[int, int]:
    """
    Admissible 1-based column range (lo, hi) for row i.

    With ``lambda = n_hat / n``, ``lo = max(1, ceil(lambda*i - W))`` and
    ``hi = min(n_hat, floor(lambda*i + W))``. Evaluated in integer arithmetic,
    so there is no rounding at the window edges.
    """
    if not 1 <= i <= n:
        raise IndexOutOfRange(f"row {i} is outside [1, {n}]")
    if W < 1:
        raise ValueError(f"window size must be >= 1, got {W}")
    lo = max(1, -((W * n - n_hat * i) // n))
    hi = min(n_hat, (n_hat * i + W * n) // n)
    return lo, hi


def window_limits(n: int, n_hat: int, W: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Vectorized window_bounds() for rows 1..n.
    """
    i = np.arange(1, n + 1, dtype=np.int64)
    lo = np.maximum(1, -((W * n - n_hat * i) // n))
    hi = np.minimum(n_hat, (n_hat * i + W * n) // n)
    return lo, hi


def window_mask(n: int, n_hat: int, W: int) -> np.ndarray:
    """
    Boolean n x n_hat matrix of admissible (row, column) pairs.
    """
    lo, hi = window_limits(n, n_hat, W)
    cols = np.arange(1, n_hat + 1)
    return (cols >= lo[:, None]) & (cols <= hi[:, None])


def admissible_mask(shape, window: WindowConfig = None) -> np.ndarray:
    n, n_hat = shape
    if window is None or not window.enabled:
        return np.ones(shape, dtype=bool)
    return window_mask(n, n_hat, window.size)


def masked_cost(cost: CostMatrix, window: WindowConfig = None) -> np.ndarray:
    """
    Cost values with inadmissible entries set to +inf.
    """
    return np.where(admissible_mask(cost.shape, window), cost.values, np.inf)


def argmin_margin(cost: CostMatrix, window: WindowConfig = None) -> float:
    """
    Smallest gap between the best and second best admissible cost of any row.

    Returns inf when no row has a second admissible column.
    """
    if cost.cols < 2:
        return np.inf
    values = np.sort(masked_cost(cost, window), axis=1)
    gaps = values[:, 1] - values[:, 0]
    gaps = gaps[np.isfinite(gaps)]
    return float(gaps.min()) if len(gaps) else np.inf


#
# Solver and alignment extraction
#
def solve_relaxed(
    cost: CostMatrix, row_masses: MassVector, window: WindowConfig = WindowConfig()
) -> Tuple[TransportPlan, float]:
    """
    Solve relaxed OT in closed form.

    Row i places its whole mass m_i on the admissible column of smallest cost
    (smallest index on ties). The distance is ``sum_i m_i * min_j c_ij`` over
    admissible columns.
    """
    if cost.rows != len(row_masses):
        raise ShapeMismatch(
            f"cost matrix has {cost.rows} rows but {len(row_masses)} masses were given"
        )
    values = masked_cost(cost, window)
    rows = np.arange(cost.rows)
    targets = values.argmin(axis=1)
    masses = row_masses.masses

    plan = np.zeros(cost.shape)
    plan[rows, targets] = masses
    distance = float(np.dot(masses, values[rows, targets]))
    return TransportPlan(plan, row_masses, cost=cost, window=window), distance


def extract_alignment(plan: TransportPlan) -> Alignment:
    """
    Alignment a_i = argmax_j T_ij, smallest column on ties.

    Rows without mass are aligned to their cheapest admissible column when the
    plan carries its cost matrix.
    """
    values = plan.values
    targets = values.argmax(axis=1)
    empty = values.max(axis=1) <= 0
    if empty.any() and plan.cost is not None:
        fallback = masked_cost(plan.cost, plan.window).argmin(axis=1)
        targets = np.where(empty, fallback, targets)
    return Alignment(targets + 1, n_targets=plan.cols)


def relaxed_align(
    speech: EmbeddingSequence,
    text: EmbeddingSequence,
    window: WindowConfig = WindowConfig(),
) -> Tuple[Alignment, float]:
    """
    Align speech to text with relaxed OT, using norm masses and Euclidean costs.

    Return the alignment and the relaxed distance.
    """
    plan, distance = solve_relaxed(
        cost_matrix(speech, text), masses_from_norms(speech), window
    )
    return extract_alignment(plan), distance


def relaxed_distance(
    a: EmbeddingSequence, b: EmbeddingSequence, window: WindowConfig = WindowConfig()
) -> float:
    return relaxed_align(a, b, window)[1]


#
# Gradient
#
def relaxed_grad(
    a: EmbeddingSequence, b: EmbeddingSequence, window: WindowConfig = WindowConfig()
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Gradient of the relaxed distance D* with respect to both sequences.

    The alignment is frozen at its current value and the masses
    ``m_i = |a_i| / sum_k |a_k|`` are differentiated too. Callers must make
    sure the argmin is unique with a safe margin (see argmin_margin).
    """
    align, _ = relaxed_align(a, b, window)
    targets = align.zero_based

    diff = a.vectors - b.vectors[targets]
    dist = np.linalg.norm(diff, axis=1)
    if (dist <= GRAD_DISTANCE_MIN).any():
        i = int(np.argmin(dist))
        raise DegenerateGradient(
            f"row {i + 1} coincides with its aligned target (distance {dist[i]:.3g})"
        )
    norms = a.norms()
    if (norms == 0).any():
        i = int(np.argmin(norms))
        raise DegenerateGradient(f"row {i + 1} has zero norm, so its mass is not smooth")

    total = norms.sum()
    masses = norms / total
    value = np.dot(masses, dist)
    units = diff / dist[:, None]

    grad_a = masses[:, None] * units
    grad_a += ((dist - value) / total)[:, None] * (a.vectors / norms[:, None])
    grad_b = np.zeros_like(b.vectors)
    np.add.at(grad_b, targets, -masses[:, None] * units)
    return grad_a, grad_b
