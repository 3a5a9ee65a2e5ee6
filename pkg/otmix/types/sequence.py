from typing import List

import numpy as np
import pandas as pd

from ..constants import MASS_TOL, ORIGIN_CODES
from ..errors import DataError, ShapeMismatch
from ..utils import overflow_scale


def frozen_array(data, dtype=float, ndim=2, name="array") -> np.ndarray:
    """
    Copy data into a read-only numpy array with the given number of dimensions.
    """
    out = np.array(data, dtype=dtype)
    if out.ndim != ndim:
        raise ShapeMismatch(
            f"{name} must have {ndim} dimension(s), got shape {out.shape}"
        )
    if 0 in out.shape:
        raise ShapeMismatch(f"{name} must not be empty, got shape {out.shape}")
    if out.dtype.kind == "f" and not np.isfinite(out).all():
        raise DataError(f"{name} contains non-finite values")
    out.setflags(write=False)
    return out


class Immutable:
    """
    Base class for value objects that refuse attribute assignment.
    """

    def __setattr__(self, attr, value):
        raise AttributeError(f"{self.__class__.__name__} objects are immutable")

    def _set(self, **kwargs):
        self.__dict__.update(kwargs)


class EmbeddingSequence(Immutable):
    """
    A sequence of n token embeddings of dimension d (n rows of d reals).
    """

    vectors: np.ndarray

    def __init__(self, vectors):
        self._set(vectors=frozen_array(vectors, name="embedding sequence"))

    @property
    def length(self) -> int:
        return self.vectors.shape[0]

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    @property
    def shape(self):
        return self.vectors.shape

    def __len__(self):
        return self.length

    def __getitem__(self, idx):
        return self.vectors[idx]

    def __eq__(self, other):
        if isinstance(other, EmbeddingSequence):
            return np.array_equal(self.vectors, other.vectors)
        return NotImplemented

    __hash__ = None

    def __repr__(self):
        return f"{self.__class__.__name__}(n={self.length}, d={self.dim})"

    def norms(self) -> np.ndarray:
        """
        L2 norm of each row.

        Rows are rescaled by a power of two first when needed, so large finite
        coordinates give finite norms.
        """
        scale = overflow_scale(self.vectors)
        return scale * np.linalg.norm(self.vectors / scale, axis=1)

    def scaled(self, factor: float) -> "EmbeddingSequence":
        return EmbeddingSequence(self.vectors * factor)

    def to_frame(self) -> pd.DataFrame:
        """
        Rows as a data frame indexed by 1-based token position.
        """
        index = pd.RangeIndex(1, self.length + 1, name="i")
        return pd.DataFrame(self.vectors, index=index)


class MassVector(Immutable):
    """
    Nonnegative per-token masses that sum to one.
    """

    masses: np.ndarray

    def __init__(self, masses, tol=MASS_TOL):
        data = frozen_array(masses, ndim=1, name="mass vector")
        if (data < 0).any():
            raise DataError("masses must be nonnegative")
        total = data.sum()
        if abs(total - 1.0) > tol:
            raise DataError(f"masses must sum to 1, got {total!r}")
        self._set(masses=data)

    @classmethod
    def uniform(cls, n: int) -> "MassVector":
        return cls(np.full(n, 1.0 / n))

    @property
    def support(self) -> np.ndarray:
        """
        Boolean mask of tokens with positive mass.
        """
        return self.masses > 0

    def __len__(self):
        return len(self.masses)

    def __getitem__(self, idx):
        return self.masses[idx]

    def __eq__(self, other):
        if isinstance(other, MassVector):
            return np.array_equal(self.masses, other.masses)
        return NotImplemented

    __hash__ = None

    def __repr__(self):
        return f"{self.__class__.__name__}({np.array2string(self.masses, precision=4)})"


class MixupSequence(Immutable):
    """
    Mixed speech/text sequence.

    ``from_text[i]`` is True when row i was taken from the aligned text token
    and False when it is the original speech token.
    """

    vectors: np.ndarray
    from_text: np.ndarray

    def __init__(self, vectors, from_text):
        vectors = frozen_array(vectors, name="mixup sequence")
        from_text = frozen_array(from_text, dtype=bool, ndim=1, name="origin flags")
        if len(from_text) != len(vectors):
            raise ShapeMismatch(
                f"got {len(from_text)} origin flags for {len(vectors)} vectors"
            )
        self._set(vectors=vectors, from_text=from_text)

    @property
    def length(self) -> int:
        return self.vectors.shape[0]

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    @property
    def origin(self) -> List[str]:
        """
        Origin codes, "S" (speech) or "T" (text), per row.
        """
        return [ORIGIN_CODES[bool(x)] for x in self.from_text]

    @property
    def text_fraction(self) -> float:
        return float(self.from_text.mean())

    def __len__(self):
        return self.length

    def __eq__(self, other):
        if isinstance(other, MixupSequence):
            return np.array_equal(self.vectors, other.vectors) and np.array_equal(
                self.from_text, other.from_text
            )
        return NotImplemented

    __hash__ = None

    def __repr__(self):
        return (
            f"{self.__class__.__name__}(n={self.length}, d={self.dim}, "
            f"text_fraction={self.text_fraction:.3})"
        )

    def to_sequence(self) -> EmbeddingSequence:
        return EmbeddingSequence(self.vectors)

