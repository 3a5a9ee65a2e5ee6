from dataclasses import asdict, dataclass
from typing import Iterable

import numpy as np

from .errors import DataError, DimensionMismatch, LengthMismatch, ShapeMismatch
from .types import Alignment, EmbeddingSequence


def a_score(pred: Alignment, ref: Alignment) -> float:
    """
    Fraction of positions where the predicted target equals the reference.
    """
    if len(pred) != len(ref):
        raise LengthMismatch(
            f"cannot compare alignments of length {len(pred)} and {len(ref)}"
        )
    return float(np.mean(pred.targets == ref.targets))


@dataclass(frozen=True)
class GapReport:
    """
    Speech/text modality gap.

    ``sentence_gap`` is the distance between the mean-pooled sequences and
    ``word_gap`` the mean distance between aligned token pairs.
    """

    sentence_gap: float
    word_gap: float

    def __post_init__(self):
        for value in (self.sentence_gap, self.word_gap):
            if not (np.isfinite(value) and value >= 0):
                raise DataError(f"gaps must be finite and nonnegative, got {value}")

    def to_dict(self) -> dict:
        return asdict(self)


def modality_gap(
    speech: EmbeddingSequence, text: EmbeddingSequence, align: Alignment
) -> GapReport:
    if speech.dim != text.dim:
        raise DimensionMismatch(f"speech dim {speech.dim} != text dim {text.dim}")
    if len(align) != speech.length:
        raise ShapeMismatch(
            f"alignment has {len(align)} entries for {speech.length} speech tokens"
        )
    align.check_targets(text.length)

    pooled = speech.vectors.mean(axis=0) - text.vectors.mean(axis=0)
    pairs = speech.vectors - text.vectors[align.zero_based]
    return GapReport(
        sentence_gap=float(np.linalg.norm(pooled)),
        word_gap=float(np.linalg.norm(pairs, axis=1).mean()),
    )


def mean_gap(reports: Iterable[GapReport]) -> GapReport:
    """
    Average per-pair gap reports over a set of pairs.
    """
    reports = list(reports)
    if not reports:
        raise ValueError("cannot average an empty list of gap reports")
    return GapReport(
        sentence_gap=float(np.mean([r.sentence_gap for r in reports])),
        word_gap=float(np.mean([r.word_gap for r in reports])),
    )
