from scipy.spatial.distance import cdist

from .errors import DimensionMismatch
from .io import write_matrix
from .types import CostMatrix, EmbeddingSequence
from .utils import overflow_scale


def cost_matrix(a: EmbeddingSequence, b: EmbeddingSequence) -> CostMatrix:
    """
    Euclidean distances between every row of ``a`` and every row of ``b``.

    ``cdist`` evaluates sqrt(sum((u - v)**2)) directly for each pair, so the
    result agrees with a pairwise loop to rounding and is exactly zero for
    identical rows. Inputs large enough for squares to overflow are rescaled by a
    power of two first.
    """
    if a.dim != b.dim:
        raise DimensionMismatch(f"cannot compare dimensions {a.dim} and {b.dim}")
    scale = overflow_scale(a.vectors, b.vectors)
    values = cdist(a.vectors / scale, b.vectors / scale, "euclidean")
    return CostMatrix(scale * values)


def write_heatmap(cost: CostMatrix, path) -> None:
    """
    Export cost matrix as CSV for heatmap plots.
    """
    write_matrix(cost, path)
