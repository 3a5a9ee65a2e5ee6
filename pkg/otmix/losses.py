"""
Training-objective arithmetic on explicit token distributions.

Probabilities are floored at PROB_FLOOR and renormalized before every log.
Per-position losses are averaged over positions.
"""
from dataclasses import replace
from typing import Mapping, Sequence, Tuple

import numpy as np

from .constants import GRAD_PROB_MIN, LABEL_SMOOTHING, OBJECTIVE_NAMES, OT_WEIGHT
from .constants import PROB_FLOOR, MASS_TOL
from .errors import DataError, DegenerateGradient, IndexOutOfRange, ShapeMismatch
from .types import ObjectiveWeights
from .types.sequence import Immutable, frozen_array


class TokenDistributionSequence(Immutable):
    """
    L predicted distributions over a vocabulary of size V.
    """

    probs: np.ndarray

    def __init__(self, probs, tol=MASS_TOL):
        data = frozen_array(probs, name="token distributions")
        if (data < 0).any():
            raise DataError("probabilities must be nonnegative")
        sums = data.sum(axis=1)
        bad = np.flatnonzero(np.abs(sums - 1) > tol)
        if len(bad):
            i = bad[0]
            raise DataError(f"distribution at position {i + 1} sums to {sums[i]!r}")
        self._set(probs=data)

    @classmethod
    def uniform(cls, length: int, vocab: int) -> "TokenDistributionSequence":
        return cls(np.full((length, vocab), 1.0 / vocab))

    @classmethod
    def one_hot(
        cls, target_ids: Sequence[int], vocab: int
    ) -> "TokenDistributionSequence":
        ids = np.asarray(target_ids)
        probs = np.zeros((len(ids), vocab))
        probs[np.arange(len(ids)), ids - 1] = 1.0
        return cls(probs)

    @property
    def length(self) -> int:
        return self.probs.shape[0]

    @property
    def vocab(self) -> int:
        return self.probs.shape[1]

    def __len__(self):
        return self.length

    def __repr__(self):
        return f"{self.__class__.__name__}(L={self.length}, V={self.vocab})"


def floored(probs: np.ndarray) -> np.ndarray:
    """
    Floor probabilities at PROB_FLOOR and renormalize each row.
    """
    out = np.maximum(probs, PROB_FLOOR)
    return out / out.sum(axis=-1, keepdims=True)


def _same_shape(p, q):
    if p.probs.shape != q.probs.shape:
        raise ShapeMismatch(
            f"distribution shapes differ: {p.probs.shape} != {q.probs.shape}"
        )


#
# Cross entropy
#
def cross_entropy(
    pred: TokenDistributionSequence,
    target_ids: Sequence[int],
    label_smoothing: float = LABEL_SMOOTHING,
) -> float:
    """
    Label-smoothed negative log-likelihood of 1-based target ids, averaged over
    positions.

    Each position contributes ``(1 - a) * -log p[t] + a/V * sum_v -log p[v]``.
    """
    if not 0 <= label_smoothing < 1:
        raise ValueError(f"label smoothing must be in [0, 1), got {label_smoothing}")
    ids = np.asarray(target_ids)
    if ids.shape != (pred.length,):
        raise ShapeMismatch(f"expected {pred.length} target ids, got shape {ids.shape}")
    if ids.dtype.kind not in "iu":
        raise DataError(f"target ids must be integers, got {ids.dtype}")
    if ((ids < 1) | (ids > pred.vocab)).any():
        raise IndexOutOfRange(f"target ids must lie in [1, {pred.vocab}]")

    neg_log = -np.log(floored(pred.probs))
    nll = neg_log[np.arange(pred.length), ids - 1]
    smooth = neg_log.mean(axis=1)
    return float(np.mean((1 - label_smoothing) * nll + label_smoothing * smooth))


#
# Symmetric KL
#
def symmetric_kl_array(p: np.ndarray, q: np.ndarray) -> float:
    """
    Symmetric KL on raw L x V arrays.

    Rows are floored and renormalized first, so the value is defined (and
    smooth away from the floor) for any positive arrays, including points off
    the simplex used by finite differences.
    """
    p, q = floored(np.asarray(p, dtype=float)), floored(np.asarray(q, dtype=float))
    per_row = 0.5 * ((p - q) * (np.log(p) - np.log(q))).sum(axis=1)
    return float(per_row.mean())


def symmetric_kl(p: TokenDistributionSequence, q: TokenDistributionSequence) -> float:
    """
    Mean over positions of 0.5 * (KL(p||q) + KL(q||p)).
    """
    _same_shape(p, q)
    return symmetric_kl_array(p.probs, q.probs)


def _first_argument_grad(p, q) -> np.ndarray:
    sums = p.sum(axis=1, keepdims=True)
    pt, qt = p / sums, q / q.sum(axis=1, keepdims=True)
    inner = 0.5 * (np.log(pt) - np.log(qt) + 1 - qt / pt)
    centered = inner - (pt * inner).sum(axis=1, keepdims=True)
    return centered / sums / len(p)


def symmetric_kl_grad(
    p: TokenDistributionSequence, q: TokenDistributionSequence
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Gradient of symmetric_kl with respect to the raw entries of p and q.

    Includes the row renormalization; requires every entry >= GRAD_PROB_MIN so
    that the floor is inactive.
    """
    _same_shape(p, q)
    low = min(p.probs.min(), q.probs.min())
    if low < GRAD_PROB_MIN:
        raise DegenerateGradient(
            f"probability {low:.3g} is too close to the floor to differentiate"
        )
    return _first_argument_grad(p.probs, q.probs), _first_argument_grad(q.probs, p.probs)


#
# Objectives
#
def total_objective(
    st_ce: float,
    mt_ce: float,
    mixup_ce: float,
    kl_ms: float,
    kl_mt: float,
    ot_dist: float,
    w: ObjectiveWeights = ObjectiveWeights(),
) -> float:
    """
    ``st + mt [+ mixup] + lambda * (kl_ms + kl_mt) + mu * ot``.
    """
    parts = (st_ce, mt_ce, mixup_ce, kl_ms, kl_mt, ot_dist)
    if not np.isfinite(parts).all():
        raise DataError(f"loss components must be finite, got {parts}")
    total = st_ce + mt_ce
    total += mixup_ce if w.use_mixup_ce else 0.0
    total += w.lambda_kl * (kl_ms + kl_mt)
    total += w.mu_ot * ot_dist
    return total


def ablation_objective(
    name: str,
    components: Mapping[str, float],
    weights: ObjectiveWeights = ObjectiveWeights(mu_ot=OT_WEIGHT),
) -> float:
    """
    Evaluate one of the training objectives of the objective ablation.

    ``components`` maps any of st, mt, mixup, kl_st, kl_ms, kl_mt, ot to a
    loss value; missing entries count as 0. ``weights.lambda_kl`` scales every
    KL term, ``weights.mu_ot`` is only used by "cmot+ot".
    """
    get = lambda key: float(components.get(key, 0.0))
    lam = weights.lambda_kl
    base = get("st") + get("mt")
    cmot = lambda w: total_objective(
        get("st"), get("mt"), get("mixup"), get("kl_ms"), get("kl_mt"), get("ot"), w
    )

    if name == "st":
        return get("st")
    elif name == "st+mt":
        return base
    elif name == "kl(s,t)":
        return base + lam * get("kl_st")
    elif name == "kl(m,s)":
        return base + lam * get("kl_ms")
    elif name == "kl(m,t)":
        return base + lam * get("kl_mt")
    elif name == "cmot":
        return cmot(replace(weights, use_mixup_ce=False, mu_ot=0.0))
    elif name == "cmot+mixup":
        return cmot(replace(weights, use_mixup_ce=True, mu_ot=0.0))
    elif name == "cmot+ot":
        return cmot(replace(weights, use_mixup_ce=False))
    raise ValueError(f"unknown objective {name!r}, expected one of {OBJECTIVE_NAMES}")
