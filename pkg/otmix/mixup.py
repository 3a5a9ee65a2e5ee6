"""
Token-level cross-modal mixup.

Position i keeps its speech vector unless a uniform draw u_i <= p_star, in
which case it takes the text vector it is aligned to. Draws are consumed in
ascending position order from a PCG64 generator seeded with the config seed.
"""
from typing import Iterable, List, Tuple

import numpy as np

from .errors import DimensionMismatch, ShapeMismatch
from .types import Alignment, EmbeddingSequence, MixupConfig, MixupSequence
from .utils import derive_rng


def mixup(
    speech: EmbeddingSequence,
    text: EmbeddingSequence,
    align: Alignment,
    cfg: MixupConfig = MixupConfig(),
    rng: np.random.Generator = None,
) -> MixupSequence:
    """
    Build the mixup sequence of speech and text along the alignment.

    An explicit ``rng`` replaces the generator derived from ``cfg.seed``.
    """
    if len(align) != speech.length:
        raise ShapeMismatch(
            f"alignment has {len(align)} entries for {speech.length} speech tokens"
        )
    if speech.dim != text.dim:
        raise DimensionMismatch(f"speech dim {speech.dim} != text dim {text.dim}")
    align.check_targets(text.length)

    rng = derive_rng(cfg.seed) if rng is None else rng
    draws = rng.random(speech.length)
    from_text = draws <= cfg.p_star
    vectors = np.where(from_text[:, None], text.vectors[align.zero_based], speech.vectors)
    return MixupSequence(vectors, from_text)


def mixup_batch(
    pairs: Iterable[Tuple[EmbeddingSequence, EmbeddingSequence, Alignment]],
    cfg: MixupConfig = MixupConfig(),
) -> List[MixupSequence]:
    """
    Mixup every (speech, text, alignment) triple.

    Instance k draws from ``default_rng([cfg.seed, k])``, so the output does not
    depend on evaluation order.
    """
    return [
        mixup(speech, text, align, cfg, rng=derive_rng(cfg.seed, k))
        for k, (speech, text, align) in enumerate(pairs)
    ]
