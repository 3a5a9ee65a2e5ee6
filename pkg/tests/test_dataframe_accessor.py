import pandas as pd
import pytest

import otmix
from otmix.constants import BENCH_COLUMNS, TRIAL_COLUMNS


class TestDataFrameAccessor:
    @pytest.fixture
    def trials(self):
        rows = [
            (0, "relaxed", 0.5, 1.0, 1.0, True, 0.1),
            (0, "ipot", 0.25, 1.5, 1.0, True, 2.0),
            (1, "relaxed", 1.0, 2.0, 2.0, True, 0.3),
            (1, "ipot", 0.75, 2.5, 2.0, False, 4.0),
        ]
        return pd.DataFrame.from_records(rows, columns=TRIAL_COLUMNS)

    def test_accessor_is_registered(self, trials):
        assert hasattr(trials, "otmix")

    def test_select(self, trials):
        df = trials.otmix.select(method="ipot", trial=1)
        assert len(df) == 1
        assert df.iloc[0]["distance"] == 2.5

    def test_select_unknown_column(self, trials):
        with pytest.raises(ValueError):
            trials.otmix.select(solver="ipot")

    def test_summarize(self, trials):
        summary = trials.otmix.summarize()
        assert list(summary.columns) == BENCH_COLUMNS
        assert list(summary["method"]) == ["relaxed", "ipot"]
        relaxed = summary.iloc[0]
        assert relaxed["trials"] == 2
        assert relaxed["mean_ascore"] == 0.75
        assert relaxed["std_ascore"] == 0.25
        assert relaxed["mean_distance"] == 1.5
        assert relaxed["mean_wall_ms"] == pytest.approx(0.2)

    def test_lower_bound(self, trials):
        assert trials.otmix.lower_bound_holds("ipot")
        broken = trials.copy()
        broken.loc[3, "distance"] = 1.0
        assert not broken.otmix.lower_bound_holds("ipot")

    def test_lower_bound_needs_reference_rows(self, trials):
        with pytest.raises(ValueError):
            trials.otmix.lower_bound_holds("sinkhorn")
