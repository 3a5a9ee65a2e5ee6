import numpy as np
import pytest

from otmix import Alignment, MassVector, TransportPlan, WindowConfig
from otmix.errors import DataError, IndexOutOfRange, ShapeMismatch
from otmix.types import CostMatrix


class TestAlignment:
    def test_targets(self):
        align = Alignment([1, 1, 3], n_targets=3)
        assert list(align) == [1, 1, 3]
        assert align.zero_based.tolist() == [0, 0, 2]
        assert align.is_monotone()
        assert not Alignment([2, 1]).is_monotone()
        assert repr(align) == "Alignment([1, 1, 3])"

    def test_accepts_integral_floats(self):
        assert Alignment([1.0, 2.0]) == Alignment([1, 2])

    @pytest.mark.parametrize("targets", [[], [[1, 2]], [1.5], ["a"]])
    def test_invalid(self, targets):
        with pytest.raises(DataError):
            Alignment(targets)

    def test_range(self):
        with pytest.raises(IndexOutOfRange):
            Alignment([0, 1])
        with pytest.raises(IndexOutOfRange):
            Alignment([1, 4], n_targets=3)


class TestTransportPlan:
    def test_violations_and_cost(self):
        plan = TransportPlan(
            [[0.25, 0.25], [0.0, 0.5]],
            MassVector([0.5, 0.5]),
            MassVector([0.5, 0.5]),
            cost=CostMatrix([[1.0, 2.0], [3.0, 4.0]]),
        )
        assert not plan.is_relaxed
        assert plan.row_violation() == 0.0
        assert plan.col_violation() == 0.25
        assert plan.violation() == 0.25
        assert plan.transport_cost() == 0.25 + 0.5 + 2.0

    def test_relaxed_plan_has_no_column_violation(self):
        plan = TransportPlan([[1.0, 0.0]], MassVector([1.0]), window=WindowConfig())
        assert plan.is_relaxed
        assert plan.col_violation() == 0.0
        with pytest.raises(ValueError):
            plan.transport_cost()

    def test_row_sums_must_match(self):
        with pytest.raises(DataError):
            TransportPlan([[0.5, 0.0]], MassVector([1.0]))

    def test_shapes_must_match(self):
        with pytest.raises(ShapeMismatch):
            TransportPlan([[1.0]], MassVector([0.5, 0.5]))
        with pytest.raises(ShapeMismatch):
            TransportPlan([[1.0]], MassVector([1.0]), cost=CostMatrix(np.ones((1, 2))))

    def test_frame_layout(self):
        df = TransportPlan([[0.5, 0.5]], MassVector([1.0])).to_frame()
        assert df.index.name == "i\\j"
        assert list(df.columns) == [1, 2]


class TestWindowConfig:
    def test_defaults(self):
        assert WindowConfig() == WindowConfig(enabled=True, size=10)
        assert not WindowConfig.disabled().enabled

    def test_invalid_size(self):
        with pytest.raises(DataError):
            WindowConfig(size=0)
