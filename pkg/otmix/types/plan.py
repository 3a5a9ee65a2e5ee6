from typing import Optional

import numpy as np
import pandas as pd

from ..constants import MASS_TOL
from ..errors import DataError, IndexOutOfRange, ShapeMismatch
from .config import WindowConfig
from .sequence import Immutable, MassVector, frozen_array


def matrix_frame(values: np.ndarray) -> pd.DataFrame:
    """
    Matrix as a data frame with 1-based row and column labels, as used by the
    heatmap and plan CSV exports (header ``i\\j,1,2,...``).
    """
    rows, cols = values.shape
    index = pd.RangeIndex(1, rows + 1, name="i\\j")
    return pd.DataFrame(values, index=index, columns=range(1, cols + 1))


class CostMatrix(Immutable):
    """
    Pairwise transfer costs between the rows of two sequences.
    """

    values: np.ndarray

    def __init__(self, values):
        data = frozen_array(values, name="cost matrix")
        if (data < 0).any():
            raise DataError("costs must be nonnegative")
        self._set(values=data)

    @property
    def rows(self) -> int:
        return self.values.shape[0]

    @property
    def cols(self) -> int:
        return self.values.shape[1]

    @property
    def shape(self):
        return self.values.shape

    def transpose(self) -> "CostMatrix":
        return CostMatrix(self.values.T)

    @property
    def T(self) -> "CostMatrix":
        return self.transpose()

    def mean(self) -> float:
        return float(self.values.mean())

    def __getitem__(self, idx):
        return self.values[idx]

    def __eq__(self, other):
        if isinstance(other, CostMatrix):
            return np.array_equal(self.values, other.values)
        return NotImplemented

    __hash__ = None

    def __repr__(self):
        return f"{self.__class__.__name__}(rows={self.rows}, cols={self.cols})"

    def to_frame(self) -> pd.DataFrame:
        return matrix_frame(self.values)


class TransportPlan(Immutable):
    """
    Nonnegative n x n_hat matrix of transported mass.

    Relaxed plans only constrain row sums and have ``col_marginal = None``.
    Plans may carry the cost matrix and window they were solved with; those are
    used to align rows that carry no mass.
    """

    values: np.ndarray
    row_marginal: MassVector
    col_marginal: Optional[MassVector]
    cost: Optional[CostMatrix]
    window: Optional[WindowConfig]

    def __init__(
        self,
        values,
        row_marginal,
        col_marginal=None,
        cost=None,
        window=None,
        tol=MASS_TOL,
    ):
        data = frozen_array(values, name="transport plan")
        if (data < 0).any():
            raise DataError("transport plan entries must be nonnegative")
        if data.shape[0] != len(row_marginal):
            raise ShapeMismatch(
                f"plan has {data.shape[0]} rows but row marginal has "
                f"{len(row_marginal)} entries"
            )
        if col_marginal is not None and data.shape[1] != len(col_marginal):
            raise ShapeMismatch(
                f"plan has {data.shape[1]} columns but column marginal has "
                f"{len(col_marginal)} entries"
            )
        if cost is not None and cost.shape != data.shape:
            raise ShapeMismatch(f"cost shape {cost.shape} != plan shape {data.shape}")

        violation = np.abs(data.sum(axis=1) - row_marginal.masses).max()
        if violation > tol:
            raise DataError(f"plan row sums deviate from row marginal by {violation:.3g}")
        self._set(
            values=data,
            row_marginal=row_marginal,
            col_marginal=col_marginal,
            cost=cost,
            window=window,
        )

    @property
    def rows(self) -> int:
        return self.values.shape[0]

    @property
    def cols(self) -> int:
        return self.values.shape[1]

    @property
    def shape(self):
        return self.values.shape

    @property
    def is_relaxed(self) -> bool:
        return self.col_marginal is None

    def row_violation(self) -> float:
        return float(np.abs(self.values.sum(axis=1) - self.row_marginal.masses).max())

    def col_violation(self) -> float:
        if self.col_marginal is None:
            return 0.0
        return float(np.abs(self.values.sum(axis=0) - self.col_marginal.masses).max())

    def violation(self) -> float:
        """
        Largest absolute row or column sum violation.
        """
        return max(self.row_violation(), self.col_violation())

    def transport_cost(self, cost: CostMatrix = None) -> float:
        """
        Total cost sum_ij T_ij c_ij.
        """
        cost = self.cost if cost is None else cost
        if cost is None:
            raise ValueError("plan has no cost matrix attached")
        if cost.shape != self.shape:
            raise ShapeMismatch(f"cost shape {cost.shape} != plan shape {self.shape}")
        return float((self.values * cost.values).sum())

    def __getitem__(self, idx):
        return self.values[idx]

    def __repr__(self):
        kind = "relaxed" if self.is_relaxed else "dense"
        return f"{self.__class__.__name__}(rows={self.rows}, cols={self.cols}, {kind})"

    def to_frame(self) -> pd.DataFrame:
        return matrix_frame(self.values)


class Alignment(Immutable):
    """
    1-based target index for every source position.

    ``n_targets`` is the length of the target sequence when known; targets are
    then checked to lie in ``[1, n_targets]``.
    """

    targets: np.ndarray
    n_targets: Optional[int]

    def __init__(self, targets, n_targets=None):
        data = np.array(targets)
        if data.ndim != 1 or len(data) == 0:
            raise ShapeMismatch(f"alignment must be a nonempty vector, got {data.shape}")
        if data.dtype.kind == "f":
            if not np.array_equal(data, np.round(data)):
                raise DataError("alignment targets must be integers")
        elif data.dtype.kind not in "iu":
            raise DataError(f"alignment targets must be integers, got {data.dtype}")
        data = data.astype(np.int64)
        if (data < 1).any():
            raise IndexOutOfRange(f"alignment targets must be >= 1, got {data.min()}")
        if n_targets is not None and (data > n_targets).any():
            raise IndexOutOfRange(
                f"alignment target {data.max()} exceeds target length {n_targets}"
            )
        data.setflags(write=False)
        self._set(targets=data, n_targets=n_targets)

    @classmethod
    def identity(cls, n: int) -> "Alignment":
        return cls(np.arange(1, n + 1), n_targets=n)

    @property
    def zero_based(self) -> np.ndarray:
        return self.targets - 1

    def is_monotone(self) -> bool:
        return bool((np.diff(self.targets) >= 0).all())

    def check_targets(self, n_targets: int) -> None:
        """
        Raise IndexOutOfRange unless every target lies in [1, n_targets].
        """
        bad = np.flatnonzero((self.targets < 1) | (self.targets > n_targets))
        if len(bad):
            i = bad[0]
            raise IndexOutOfRange(
                f"alignment target {self.targets[i]} at position {i + 1} is outside "
                f"[1, {n_targets}]"
            )

    def __len__(self):
        return len(self.targets)

    def __getitem__(self, idx):
        return self.targets[idx]

    def __iter__(self):
        return iter(int(x) for x in self.targets)

    def __eq__(self, other):
        if isinstance(other, Alignment):
            return np.array_equal(self.targets, other.targets)
        return NotImplemented

    __hash__ = None

    def __repr__(self):
        return f"{self.__class__.__name__}({self.targets.tolist()!r})"

