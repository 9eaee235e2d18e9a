import itertools

import networkx as nx
import numpy as np
import pytest
from pydantic import ValidationError

from app.models.errors import EmptyInputError, InvalidParameterError
from app.services import probe
from app.services.codebook import build_codebook


@pytest.fixture(scope="module")
def probe_codebook():
    return build_codebook(512, 1, 32, 8)


class TestGeneratorParams:
    def test_defaults(self):
        params = probe.GeneratorParams()
        assert (params.family, params.n_min, params.n_max, params.max_chords) == ("er", 5, 15, 1)

    def test_inverted_range(self):
        with pytest.raises(ValidationError):
            probe.GeneratorParams(n_min=10, n_max=5)

    def test_unknown_field(self):
        with pytest.raises(ValidationError):
            probe.GeneratorParams(colour="red")

    def test_ba_needs_room(self):
        with pytest.raises(ValidationError):
            probe.GeneratorParams(family="ba", n_min=2, n_max=8, ba_m=2)


class TestBalancedProbability:
    @pytest.mark.parametrize("p", [0.1, 0.5, 0.9])
    def test_triangle_forest_probability(self, p):
        assert probe.forest_probability(3, p) == pytest.approx(1.0 - p ** 3, rel=1e-12)

    @pytest.mark.parametrize("n, p", [(4, 0.3), (5, 0.45)])
    def test_forest_probability_matches_enumeration(self, n, p):
        pairs = list(itertools.combinations(range(n), 2))
        total = 0.0
        for mask in range(1 << len(pairs)):
            edges = [pair for bit, pair in enumerate(pairs) if mask >> bit & 1]
            g = nx.Graph(edges)
            g.add_nodes_from(range(n))
            if nx.is_forest(g):
                total += p ** len(edges) * (1.0 - p) ** (len(pairs) - len(edges))
        assert probe.forest_probability(n, p) == pytest.approx(total, rel=1e-10)

    @pytest.mark.parametrize("n", [3, 5, 10, 15, 100])
    def test_half_of_the_graphs_are_acyclic(self, n):
        assert probe.forest_probability(n, probe.p_balanced(n)) == pytest.approx(0.5, rel=1e-9)

    def test_decreases_with_size(self):
        assert probe.p_balanced(15) < probe.p_balanced(10) < probe.p_balanced(5)

    def test_too_small_for_cycles(self):
        assert probe.p_balanced(2) == 0.5
        assert probe.forest_probability(2, 0.9) == 1.0

    def test_er_family_is_balanced(self, probe_codebook):
        ds = probe.build_dataset("has_cycle", probe.GeneratorParams(), probe_codebook, 400, 3)
        assert 0.4 <= ds.y.mean() <= 0.6


class TestSplit:
    def test_disjoint_and_covering(self):
        train, test = probe.split_indices(10, 4)
        assert len(train) == 8 and len(test) == 2
        assert sorted(np.concatenate([train, test]).tolist()) == list(range(10))

    def test_single_row_trains(self):
        train, test = probe.split_indices(1, 0)
        assert train.tolist() == [0] and test.size == 0

    def test_mismatched_targets(self):
        with pytest.raises(InvalidParameterError):
            probe.LabeledEmbeddingSet.from_arrays(np.zeros((4, 3)), np.zeros(3))


class TestBuildDataset:
    def test_labels_and_shape(self, probe_codebook):
        params = probe.GeneratorParams(n_min=5, n_max=9)
        ds = probe.build_dataset(probe.Task.NUM_NODES, params, probe_codebook, 30, 1)
        assert ds.X.shape == (30, 512)
        assert ds.task == "num_nodes" and not ds.classification
        assert set(ds.y.tolist()) <= set(range(5, 10))
        assert ds.X_train.shape[0] + ds.X_test.shape[0] == 30

    def test_same_seed_same_dataset(self, probe_codebook):
        params = probe.GeneratorParams(family="tree")
        first = probe.build_dataset("has_cycle", params, probe_codebook, 25, 8)
        second = probe.build_dataset("has_cycle", params, probe_codebook, 25, 8)
        np.testing.assert_array_equal(first.X, second.X)
        np.testing.assert_array_equal(first.y, second.y)
        assert first.classification

    def test_worker_count_does_not_change_the_data(self, probe_codebook):
        params = probe.GeneratorParams()
        serial = probe.build_dataset("num_edges", params, probe_codebook, 40, 2)
        threaded = probe.build_dataset("num_edges", params, probe_codebook, 40, 2, workers=4)
        np.testing.assert_array_equal(serial.X, threaded.X)
        np.testing.assert_array_equal(serial.y, threaded.y)

    def test_degree_labels_are_bounded(self, probe_codebook):
        params = probe.GeneratorParams(n_min=6, n_max=6)
        ds = probe.build_dataset("node_degree", params, probe_codebook, 20, 5)
        assert ds.y.min() >= 0 and ds.y.max() <= 5

    def test_hypergraph_tasks(self, probe_codebook):
        params = probe.GeneratorParams(n_min=4, n_max=10, m_min=2, m_max=5)
        ds = probe.build_dataset("hyper_num_edges", params, probe_codebook, 20, 6)
        assert set(ds.y.tolist()) <= {2.0, 3.0, 4.0, 5.0}

    def test_empty(self, probe_codebook):
        with pytest.raises(EmptyInputError):
            probe.build_dataset("num_nodes", probe.GeneratorParams(), probe_codebook, 0, 1)

    def test_unknown_task(self, probe_codebook):
        with pytest.raises(ValueError):
            probe.build_dataset("diameter", probe.GeneratorParams(), probe_codebook, 5, 1)
