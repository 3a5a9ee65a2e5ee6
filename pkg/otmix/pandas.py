"""
The ``.otmix`` data frame accessor for per-trial benchmark tables.
"""
import numpy as np
import pandas as pd

from .constants import BENCH_COLUMNS


@pd.api.extensions.register_dataframe_accessor("otmix")
class OtmixDataFrameAccessor:
    def __init__(self, obj):
        self._data = obj

    def select(self, **kwargs) -> pd.DataFrame:
        """
        Rows where every given column equals the given value.
        """
        df = self._data
        m = pd.Series(True, index=df.index)
        for k, v in kwargs.items():
            m &= mask(df, k, v)
        return df[m]

    def summarize(self, by="method") -> pd.DataFrame:
        """
        Aggregate per-trial rows into one row per method.

        Methods keep their order of first appearance; the standard deviation
        is the population one (ddof=0).
        """
        df = self._data
        groups = df.groupby(by, sort=False)
        out = pd.DataFrame(
            {
                "trials": groups["trial"].nunique(),
                "mean_ascore": groups["ascore"].mean(),
                "std_ascore": groups["ascore"].std(ddof=0),
                "mean_distance": groups["distance"].mean(),
                "mean_wall_ms": groups["wall_ms"].mean(),
            }
        )
        return out.reset_index().rename(columns={by: "method"})[BENCH_COLUMNS]

    def lower_bound_holds(self, reference="ipot", slack=1e-8) -> bool:
        """
        True if, in every trial, the unwindowed relaxed distance is at most the
        plan cost of the reference method.
        """
        ref = self.select(method=reference).set_index("trial")
        if ref.empty:
            raise ValueError(f"no rows for method {reference!r}")
        return bool(np.all(ref["relaxed_distance"] <= ref["distance"] + slack))


def mask(data: pd.DataFrame, col: str, value) -> pd.Series:
    """
    Return a boolean mask with values in which df[col] == value
    """
    if col not in data:
        raise ValueError(f"unknown column {col!r}")
    return data[col].__eq__(value)
