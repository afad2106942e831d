import math

import numpy as np
import pytest

from app.errors import DimensionMismatch, InvalidNodeSet
from app.testbed.functions import TEST_FUNCTIONS, eval_function, get_function
from app.testbed.nodes import (
    FULL_SIZES,
    NYSTROM_SIZES,
    ExperimentDesign,
    NodeScheme,
    cosine_map,
    default_scheme,
    make_nodes,
)
from app.testbed import nodes as testbed_nodes


class TestCosineMap:
    def test_fixed_points(self):
        np.testing.assert_allclose(cosine_map([0.0, 0.5, 1.0]), [0.0, 0.5, 1.0], atol=1e-16)

    def test_quarter(self):
        assert cosine_map(0.25) == pytest.approx(0.5 * (1 - math.sqrt(2) / 2), rel=1e-14)
        assert cosine_map(0.25) == pytest.approx(0.14645, abs=1e-5)

    def test_monotone_with_flat_ends(self):
        x = np.linspace(0.0, 1.0, 1001)
        y = cosine_map(x)
        assert np.all(np.diff(y) > 0)
        h = 1e-6
        assert (cosine_map(h) - cosine_map(0.0)) / h < 1e-5
        assert (cosine_map(1.0) - cosine_map(1.0 - h)) / h < 1e-5


class TestMakeNodes:
    def test_deterministic(self):
        a = make_nodes(2, 50, NodeScheme.UNIFORM, seed=7)
        b = make_nodes(2, 50, NodeScheme.UNIFORM, seed=7)
        assert np.array_equal(a.points, b.points)

    def test_cosine_scheme_maps_the_uniform_sample(self):
        u = make_nodes(3, 40, NodeScheme.UNIFORM, seed=3)
        c = make_nodes(3, 40, NodeScheme.COSINE_MAPPED, seed=3)
        np.testing.assert_allclose(c.points, cosine_map(u.points), rtol=1e-15)
        assert c.points.min() >= 0.0 and c.points.max() <= 1.0

    def test_needs_two_nodes(self):
        with pytest.raises(InvalidNodeSet):
            make_nodes(1, 1, NodeScheme.UNIFORM, seed=0)

    def test_default_schemes(self):
        assert default_scheme(1) is NodeScheme.UNIFORM
        assert default_scheme(2) is NodeScheme.UNIFORM
        assert default_scheme(3) is NodeScheme.COSINE_MAPPED


class TestFunctions:
    def test_registry(self):
        assert list(TEST_FUNCTIONS) == [f"f{i}" for i in range(1, 9)]
        assert [f.dim for f in TEST_FUNCTIONS.values()] == [1, 1, 2, 2, 2, 3, 3, 3]

    def test_closed_form_values(self):
        f1, f2 = get_function("f1"), get_function("f2")
        np.testing.assert_allclose(eval_function(f1, [0.0, 0.5]), [1.0, math.e], rtol=1e-15)
        np.testing.assert_allclose(eval_function(f2, [0.0, 0.5]), [1.0, 0.2], rtol=1e-15)
        assert np.all(eval_function(get_function("f6"), np.random.default_rng(0).random((10, 3))) == 1.0)
        assert eval_function(get_function("f7"), [[0.0, 0.0, 0.0]])[0] == pytest.approx(-math.sin(0.25), rel=1e-15)

    def test_franke_peak(self):
        # the first bump sits at (2/9, 2/9)
        v = eval_function(get_function("f5"), [[2 / 9, 2 / 9]])[0]
        assert 0.75 < v < 1.3

    @pytest.mark.parametrize("name", ["f3", "f4"])
    def test_boundary_factor_symmetries(self, name):
        f = get_function(name)
        x = np.random.default_rng(1).random((200, 2))
        base = eval_function(f, x)
        np.testing.assert_allclose(eval_function(f, x[:, ::-1]), base, atol=1e-12)
        np.testing.assert_allclose(eval_function(f, np.c_[1.0 - x[:, 0], x[:, 1]]), base, atol=1e-12)

    @pytest.mark.parametrize("name", ["f3", "f4"])
    def test_vanishes_on_the_boundary(self, name):
        f = get_function(name)
        t = np.linspace(0.0, 1.0, 11)
        edge = np.c_[t, np.zeros_like(t)]
        np.testing.assert_allclose(eval_function(f, edge), 0.0, atol=1e-15)

    def test_bounds(self):
        rng = np.random.default_rng(2)
        bounds = {"f1": math.e, "f2": 1.0, "f6": 1.0, "f7": 2.0, "f8": 2.0}
        for name, f in TEST_FUNCTIONS.items():
            v = eval_function(f, rng.random((20000, f.dim)))
            assert np.all(np.isfinite(v))
            if name in bounds:
                assert np.max(np.abs(v)) <= bounds[name] + 1e-12
            else:
                assert np.max(np.abs(v)) < 2.0

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            eval_function(get_function("f3"), np.zeros((4, 3)))


class TestExperimentDesign:
    def test_test_points_fixed_per_function(self):
        f = get_function("f7")
        a, b = testbed_nodes.test_points(f), testbed_nodes.test_points(f)
        assert a.shape == (5000, 3)
        assert np.array_equal(a, b)
        assert not np.array_equal(a, testbed_nodes.test_points(get_function("f8")))

    def test_nodes_shared_across_methods(self):
        f = get_function("f3")
        full = ExperimentDesign(f, FULL_SIZES, seed=4)
        nys = ExperimentDesign(f, NYSTROM_SIZES, seed=4)
        assert np.array_equal(full.nodes(512).points, nys.nodes(512).points)

    def test_scheme_follows_dimension(self):
        assert ExperimentDesign(get_function("f6")).scheme is NodeScheme.COSINE_MAPPED
        assert ExperimentDesign(get_function("f6"), node_scheme=NodeScheme.UNIFORM).scheme is NodeScheme.UNIFORM

    def test_default_sizes(self):
        assert ExperimentDesign(get_function("f1")).train_sizes == [64, 128, 256, 512, 1024, 2048, 4096]
        assert NYSTROM_SIZES == [512, 1024, 2048, 4096]

    def test_rejects_unsorted_sizes(self):
        with pytest.raises(ValueError):
            ExperimentDesign(get_function("f1"), [128, 64])
