import numpy as np
import pytest
from sklearn.pipeline import Pipeline
from sklearn.utils.estimator_checks import check_get_params_invariance

from planconnect.estimators import (
    SignedDistance,
    SpatialConnectivity,
    VisualConnectivity,
    VisualMeanDepth,
    as_grid,
)
from planconnect.fields import FieldKind
from planconnect.grid import OccupancyGrid
from planconnect.spatial import spatial_connectivity_field

ALL_TRANSFORMERS = [SpatialConnectivity, VisualConnectivity, VisualMeanDepth, SignedDistance]


class TestAsGrid:
    def test_passthrough(self, open3x3):
        assert as_grid(open3x3) is open3x3

    def test_from_binary_array(self):
        grid = as_grid([[1, 0], [1, 1]], cell_size=2.0)
        assert grid.free.tolist() == [[True, False], [True, True]]
        assert grid.cell_size == 2.0

    def test_rejects_wrong_rank(self):
        with pytest.raises(ValueError):
            as_grid([1, 0, 1])


class TestTransformers:
    @pytest.mark.parametrize("cls", ALL_TRANSFORMERS)
    def test_fit_transform(self, cls, open3x3):
        field = cls().fit(open3x3).transform(open3x3)
        assert field.values.shape == (3, 3)
        assert field.mask.all()

    @pytest.mark.parametrize("cls", ALL_TRANSFORMERS)
    def test_get_set_params_round_trip(self, cls):
        est = cls()
        params = est.get_params()
        assert "cell_size" in params and "prune" in params
        est.set_params(cell_size=0.5)
        assert est.get_params()["cell_size"] == 0.5
        check_get_params_invariance(cls.__name__, cls())

    def test_prune_handles_stray_cells(self):
        free = np.zeros((6, 6), dtype=bool)
        free[1:4, 1:4] = True
        free[5, 5] = True
        field = SpatialConnectivity().fit(free).transform(free)
        assert not field.mask[5, 5]

    def test_matches_direct_call(self, ring3x3):
        direct = spatial_connectivity_field(ring3x3)
        via = SpatialConnectivity().fit_transform(ring3x3)
        assert np.array_equal(direct.values, via.values)
        assert via.kind is FieldKind.SPATIAL_CONNECTIVITY

    def test_visual_backend_validated(self, open3x3):
        with pytest.raises(ValueError):
            VisualConnectivity(backend="bogus").fit(open3x3)

    def test_visual_backends_agree(self):
        rng = np.random.default_rng(8)
        free = rng.random((9, 9)) > 0.25
        fast = VisualConnectivity(backend="shadowcast").fit_transform(free)
        exact = VisualConnectivity(backend="exact").fit_transform(free)
        assert np.array_equal(fast.values, exact.values)

    def test_sdf_defaults_to_no_prune(self):
        free = np.zeros((5, 5), dtype=bool)
        free[0, 0] = True
        free[4, 4] = True
        field = SignedDistance().fit_transform(free)
        assert field.mask[0, 0] and field.mask[4, 4]

    def test_in_sklearn_pipeline(self, open3x3):
        pipe = Pipeline([("analysis", SpatialConnectivity())])
        field = pipe.fit_transform(open3x3)
        assert field.values[1, 1] == pytest.approx(1.2071067811865475)
        assert pipe.get_params()["analysis__prune"] is True

    def test_cell_size_param_scales_output(self):
        free = np.ones((4, 4), dtype=bool)
        small = SpatialConnectivity(cell_size=1.0).fit_transform(free)
        large = SpatialConnectivity(cell_size=2.0).fit_transform(free)
        assert np.allclose(large.values, 2.0 * small.values)
