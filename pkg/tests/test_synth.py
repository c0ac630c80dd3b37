import numpy as np
import pytest

from planconnect.errors import InfeasibleParams
from planconnect.farm import Analysis, TaskStatus
from planconnect.grid import load_occupancy
from planconnect.synth import (
    MAX_FREE_RATIO,
    MIN_FREE_RATIO,
    PlanStyle,
    PlanSynthParams,
    generate_batch,
    generate_plan,
)

from oracles import flood_components


class TestParams:
    def test_defaults_valid(self):
        PlanSynthParams()

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"width": 8},
            {"height": 15},
            {"seed": -1},
            {"room_count_range": (5, 2)},
            {"corridor_width_range": (0, 3)},
            {"furniture_density": 0.5},
            {"furniture_density": -0.1},
            {"door_width": 0},
            {"wall_thickness": 0},
        ],
    )
    def test_invalid_rejected(self, kwargs):
        with pytest.raises(ValueError):
            PlanSynthParams(**kwargs)


class TestGeneratePlan:
    @pytest.mark.parametrize("style", list(PlanStyle))
    def test_deterministic_in_params(self, style):
        params = PlanSynthParams(width=48, height=40, style=style, seed=9)
        a = generate_plan(params)
        b = generate_plan(params)
        assert np.array_equal(a.free, b.free)

    def test_different_seeds_differ(self):
        params = PlanSynthParams(width=64, height=64, seed=1)
        other = PlanSynthParams(width=64, height=64, seed=2)
        assert not np.array_equal(generate_plan(params).free, generate_plan(other).free)

    @pytest.mark.parametrize("style", list(PlanStyle))
    @pytest.mark.parametrize("seed", range(8))
    def test_single_component_and_free_ratio(self, style, seed):
        params = PlanSynthParams(width=50, height=50, style=style, seed=seed)
        grid = generate_plan(params)
        assert len(flood_components(grid.free)) == 1
        ratio = grid.free.sum() / grid.free.size
        assert ratio >= MIN_FREE_RATIO
        if style is PlanStyle.CORRIDORS:
            assert ratio <= MAX_FREE_RATIO

    def test_perimeter_is_walled(self):
        grid = generate_plan(PlanSynthParams(width=40, height=32, seed=3))
        assert not grid.free[0, :].any()
        assert not grid.free[-1, :].any()
        assert not grid.free[:, 0].any()
        assert not grid.free[:, -1].any()

    def test_open_plan_density_near_target(self):
        params = PlanSynthParams(width=80, height=80, style=PlanStyle.OPEN_PLAN, seed=4, furniture_density=0.2)
        grid = generate_plan(params)
        interior = grid.free[1:-1, 1:-1]
        blocked_ratio = 1 - interior.sum() / interior.size
        assert blocked_ratio == pytest.approx(0.2, abs=0.05)

    def test_infeasible_raises_with_attempts(self):
        params = PlanSynthParams(
            width=16, height=16, style=PlanStyle.CORRIDORS, seed=0, wall_thickness=7
        )
        with pytest.raises(InfeasibleParams) as excinfo:
            generate_plan(params)
        assert excinfo.value.attempts >= 1

    def test_cell_size_propagates(self):
        grid = generate_plan(PlanSynthParams(width=32, height=32, seed=5, cell_size=0.5))
        assert grid.cell_size == 0.5


class TestGenerateBatch:
    def test_files_and_tasks(self, tmp_path):
        params = PlanSynthParams(width=40, height=40, seed=100)
        tasks = generate_batch(params, 3, tmp_path, analyses=(Analysis.SPATIAL, Analysis.SDF))
        assert len(tasks) == 6
        assert sorted(p.name for p in tmp_path.glob("*.pgm")) == [
            "plan_00000.pgm",
            "plan_00001.pgm",
            "plan_00002.pgm",
        ]
        assert all(t.status is TaskStatus.PENDING for t in tasks)
        assert tasks[1].analysis is Analysis.SDF
        assert tasks[1].output_path.endswith("plan_00000.sdf.f32")
        assert len({t.id for t in tasks}) == 6

    def test_per_index_seeds_are_order_independent(self, tmp_path):
        params = PlanSynthParams(width=40, height=40, seed=100)
        generate_batch(params, 2, tmp_path / "a")
        # plan i in a batch equals a standalone plan with seed+i
        solo = generate_plan(PlanSynthParams(width=40, height=40, seed=101))
        batch_plan = load_occupancy(tmp_path / "a" / "plan_00001.pgm")
        assert np.array_equal(batch_plan.free, solo.free)

    def test_infeasible_index_marked_failed(self, tmp_path):
        params = PlanSynthParams(width=16, height=16, seed=0, wall_thickness=7)
        tasks = generate_batch(params, 2, tmp_path)
        assert all(t.status is TaskStatus.FAILED for t in tasks)
        assert all("error" in t.extra for t in tasks)

    def test_negative_count_rejected(self, tmp_path):
        with pytest.raises(ValueError):
            generate_batch(PlanSynthParams(), -1, tmp_path)
