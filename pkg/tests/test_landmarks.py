from itertools import combinations

import numpy as np
import pytest
from sklearn.metrics import normalized_mutual_info_score

from app.errors import LengthMismatch, TooManyLandmarks
from app.landmarks.kmeans import _kmeanspp_seed, _lloyd, _map_to_nodes, kmeanspp_select
from app.landmarks.stability import nmi, run_seeds, stability_experiment
from app.testbed.nodes import NodeScheme, make_nodes
from tests.conftest import random_nodes


class TestKmeansppSelect:
    def test_all_nodes_as_landmarks(self, rng):
        nodes = random_nodes(rng, 25, 2)
        lm = kmeanspp_select(nodes, 25, seed=4)
        assert sorted(lm.indices.tolist()) == list(range(25))
        assert lm.inertia == pytest.approx(0.0, abs=1e-24)

    def test_single_landmark_is_nearest_to_centroid(self, rng):
        nodes = random_nodes(rng, 60, 3)
        lm = kmeanspp_select(nodes, 1, seed=0)
        oracle = int(np.argmin(np.linalg.norm(nodes.points - nodes.points.mean(axis=0), axis=1)))
        assert lm.indices.tolist() == [oracle]
        assert np.all(lm.assignments == 0)

    def test_valid_landmark_set(self, rng):
        nodes = random_nodes(rng, 300, 2)
        lm = kmeanspp_select(nodes, 20, seed=11)
        assert lm.m == 20
        assert len(set(lm.indices.tolist())) == 20
        assert lm.indices.min() >= 0 and lm.indices.max() < 300
        assert lm.assignments.shape == (300,)
        assert set(lm.assignments.tolist()) == set(range(20))

    def test_deterministic(self, rng):
        nodes = random_nodes(rng, 200, 3)
        a = kmeanspp_select(nodes, 15, seed=9)
        b = kmeanspp_select(nodes, 15, seed=9)
        assert np.array_equal(a.indices, b.indices)
        assert np.array_equal(a.assignments, b.assignments)
        assert a.inertia == b.inertia

    def test_too_many_landmarks(self, rng):
        with pytest.raises(TooManyLandmarks):
            kmeanspp_select(random_nodes(rng, 5, 1), 6, seed=0)

    def test_two_seeds_agree_in_1d(self):
        nodes = make_nodes(1, 1024, NodeScheme.UNIFORM, seed=2024)
        a = kmeanspp_select(nodes, 200, seed=1)
        b = kmeanspp_select(nodes, 200, seed=101)
        assert nmi(a.assignments, b.assignments) >= 0.8


class TestLloyd:
    def test_inertia_never_increases(self, rng):
        x = rng.random((500, 2))
        centers = _kmeanspp_seed(x, 12, np.random.default_rng(0))
        _, _, trace = _lloyd(x, centers)
        assert len(trace) >= 2
        assert all(b <= a * (1 + 1e-12) for a, b in zip(trace, trace[1:]))

    def test_seeding_never_repeats_points(self, rng):
        x = rng.random((40, 1))
        centers = _kmeanspp_seed(x, 40, np.random.default_rng(3))
        assert np.unique(centers, axis=0).shape[0] == 40

    def test_shared_nearest_node_falls_back_to_next_nearest(self):
        x = np.array([[0.0], [0.1], [0.5], [1.0]])
        idx = _map_to_nodes(x, np.array([[0.11], [0.09], [0.9]]))
        assert idx.tolist() == [1, 0, 3]


class TestNmi:
    def test_identical(self):
        assert nmi([0, 1, 2, 0, 1], [0, 1, 2, 0, 1]) == 1.0

    def test_constant_against_informative(self):
        assert nmi([0, 0, 0, 0], [0, 1, 0, 1]) == 0.0

    def test_label_permutation(self):
        assert nmi([0, 0, 1, 1], [1, 1, 0, 0]) == 1.0

    def test_symmetric_and_permutation_invariant(self, rng):
        a = rng.integers(0, 6, size=300)
        b = rng.integers(0, 4, size=300)
        perm = rng.permutation(6)
        assert nmi(a, b) == pytest.approx(nmi(b, a), abs=1e-12)
        assert nmi(perm[a], b) == pytest.approx(nmi(a, b), abs=1e-12)

    def test_matches_geometric_normalization(self, rng):
        a = rng.integers(0, 5, size=400)
        b = (a + rng.integers(0, 2, size=400)) % 5
        expected = normalized_mutual_info_score(a, b, average_method="geometric")
        assert nmi(a, b) == pytest.approx(expected, rel=1e-10)
        assert 0.0 <= nmi(a, b) <= 1.0

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatch):
            nmi([0, 1], [0, 1, 1])


class TestStability:
    def test_seed_blocks_do_not_overlap(self):
        seeds = run_seeds(3)
        assert len(seeds) == 10
        blocks = [set(range(s, s + 5)) for s in seeds]
        assert all(not (p & q) for p, q in combinations(blocks, 2))

    def test_all_nodes_as_landmarks_is_perfectly_stable(self, rng):
        nodes = random_nodes(rng, 30, 2)
        report = stability_experiment(nodes, 30, base_seed=1)
        assert len(report.pair_nmis) == 45
        assert report.mean_nmi == 1.0
        assert report.std_nmi == 0.0

    def test_report_summary(self):
        nodes = make_nodes(2, 400, NodeScheme.UNIFORM, seed=5)
        report = stability_experiment(nodes, 20, base_seed=0, workers=2)
        assert len(report.pair_nmis) == 45
        assert all(0.0 <= v <= 1.0 for v in report.pair_nmis)
        assert report.min_nmi <= report.mean_nmi <= report.max_nmi
        assert report.std_nmi == pytest.approx(float(np.std(report.pair_nmis)))
        assert (report.n, report.m, report.dim) == (400, 20, 2)

    def test_thread_count_does_not_change_result(self):
        nodes = make_nodes(1, 300, NodeScheme.UNIFORM, seed=8)
        serial = stability_experiment(nodes, 15, base_seed=2)
        pooled = stability_experiment(nodes, 15, base_seed=2, workers=4)
        assert serial.pair_nmis == pooled.pair_nmis
