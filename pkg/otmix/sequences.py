import numpy as np

from .errors import AllZeroSequence
from .io import read_sequence, write_sequence
from .types import EmbeddingSequence, MassVector
from .utils import overflow_scale

__all__ = ["masses_from_norms", "read_sequence", "write_sequence"]


def masses_from_norms(seq: EmbeddingSequence) -> MassVector:
    """
    Token masses proportional to the L2 norm of each embedding.

    Zero-norm tokens receive zero mass. Scaling the whole sequence by a positive
    constant leaves the masses unchanged. Norms are taken on rows rescaled by a
    power of two when needed, so any finite input gives finite masses.
    """
    norms = np.linalg.norm(seq.vectors / overflow_scale(seq.vectors), axis=1)
    total = norms.sum()
    if total == 0:
        raise AllZeroSequence(f"all {seq.length} rows have zero norm")
    return MassVector(norms / total)
