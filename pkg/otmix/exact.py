"""
Reference solvers for the full (two-marginal) OT problem.

Both solvers iterate in the log domain and finish every iteration with the
row scaling, so returned plans match the row masses to rounding error and the
column sums carry the whole marginal violation.
"""
import logging
from pathlib import Path
from typing import NamedTuple, Tuple

import numpy as np
from scipy.special import logsumexp

from .cost import cost_matrix
from .errors import NumericalUnderflow, ShapeMismatch
from .io import write_json, write_matrix
from .relaxed import extract_alignment
from .sequences import masses_from_norms
from .types import Alignment, CostMatrix, EmbeddingSequence, MassVector, SolverConfig
from .types import TransportPlan

log = logging.getLogger(__name__)


class ExactSolution(NamedTuple):
    plan: TransportPlan
    plan_cost: float
    iters_used: int
    violation: float
    converged: bool
    method: str

    def summary(self) -> dict:
        """
        Sidecar record written next to exported plans.
        """
        return {
            "method": self.method,
            "iters_used": self.iters_used,
            "violation": self.violation,
            "plan_cost": self.plan_cost,
        }


def solve_exact(
    cost: CostMatrix,
    row_masses: MassVector,
    col_masses: MassVector,
    cfg: SolverConfig = SolverConfig(),
) -> ExactSolution:
    """
    Approximately solve min <T, C> subject to both marginal constraints.

    Zero-mass rows and columns are removed before iterating and come back as
    zeros in the returned plan. Reaching ``cfg.max_iters`` with a violation
    above ``cfg.tol`` is not an error: the result is returned with
    ``converged=False``.
    """
    if cost.shape != (len(row_masses), len(col_masses)):
        raise ShapeMismatch(
            f"cost shape {cost.shape} does not match masses "
            f"({len(row_masses)}, {len(col_masses)})"
        )
    rows, cols = row_masses.support, col_masses.support
    sub_cost = cost.values[np.ix_(rows, cols)]
    a, b = row_masses.masses[rows], col_masses.masses[cols]

    if cfg.method == "sinkhorn":
        eps = cfg.resolve_epsilon(cost.mean())
        sub_plan, iters = sinkhorn(sub_cost, a, b, eps, cfg.max_iters, cfg.tol)
    else:
        sub_plan, iters = ipot(sub_cost, a, b, cfg.beta, cfg.max_iters, cfg.tol)

    if not np.isfinite(sub_plan).all() or (sub_plan.sum(axis=1) <= 0).any():
        raise NumericalUnderflow(
            f"{cfg.method} iterates underflowed; "
            "increase epsilon/beta for this cost scale"
        )

    values = np.zeros(cost.shape)
    values[np.ix_(rows, cols)] = sub_plan
    plan = TransportPlan(values, row_masses, col_masses, cost=cost)
    violation = plan.violation()
    converged = violation <= cfg.tol
    plan_cost = float((values * cost.values).sum())

    if converged:
        log.debug(
            "%s converged in %d iterations (cost=%.6g)", cfg.method, iters, plan_cost
        )
    else:
        log.warning(
            "%s stopped after %d iterations with marginal violation %.3g > %.3g",
            cfg.method,
            iters,
            violation,
            cfg.tol,
        )
    return ExactSolution(plan, plan_cost, iters, violation, converged, cfg.method)


def sinkhorn(cost, a, b, epsilon, max_iters, tol) -> Tuple[np.ndarray, int]:
    """
    Log-domain Sinkhorn iterations for entropic OT with weight epsilon.

    Return the plan and the number of iterations used.
    """
    log_a, log_b = np.log(a), np.log(b)
    f = np.zeros(len(a))
    g = np.zeros(len(b))
    plan = None
    for it in range(1, max_iters + 1):
        g = epsilon * (log_b - logsumexp((f[:, None] - cost) / epsilon, axis=0))
        f = epsilon * (log_a - logsumexp((g[None, :] - cost) / epsilon, axis=1))
        plan = np.exp((f[:, None] + g[None, :] - cost) / epsilon)
        if np.abs(plan.sum(axis=0) - b).max() <= tol:
            break
    return plan, it


def ipot(cost, a, b, beta, max_iters, tol, inner=1) -> Tuple[np.ndarray, int]:
    """
    Inexact proximal point OT with ``inner`` scaling sweeps per proximal step.

    Stops when the column violation and the largest change of the plan in one
    step are both below tol. Return the plan and the number of proximal steps.
    """
    log_a, log_b = np.log(a), np.log(b)
    log_kernel = -cost / beta
    log_plan = np.zeros(cost.shape)
    log_u = np.zeros(len(a))
    log_v = np.full(len(b), -np.log(len(b)))
    plan = np.ones(cost.shape)
    for it in range(1, max_iters + 1):
        log_q = log_kernel + log_plan
        for _ in range(inner):
            log_v = log_b - logsumexp(log_q + log_u[:, None], axis=0)
            log_u = log_a - logsumexp(log_q + log_v[None, :], axis=1)
        log_plan = log_u[:, None] + log_q + log_v[None, :]
        new = np.exp(log_plan)
        change = np.abs(new - plan).max()
        plan = new
        if change <= tol and np.abs(plan.sum(axis=0) - b).max() <= tol:
            break
    return plan, it


def exact_align(
    speech: EmbeddingSequence, text: EmbeddingSequence, cfg: SolverConfig = SolverConfig()
) -> Tuple[Alignment, ExactSolution]:
    """
    Align speech to text by the row argmax of an exact OT plan.

    Both sides use norm masses and Euclidean costs.
    """
    solution = solve_exact(
        cost_matrix(speech, text), masses_from_norms(speech), masses_from_norms(text), cfg
    )
    return extract_alignment(solution.plan), solution


def write_plan(solution: ExactSolution, path) -> Path:
    """
    Write plan CSV to path and the JSON summary next to it.

    Return the path of the JSON sidecar.
    """
    path = Path(path)
    sidecar = path.with_suffix(".json")
    write_matrix(solution.plan, path)
    write_json(solution.summary(), sidecar)
    return sidecar
