import itertools
import logging

import numpy as np
import pytest

from app.models.embedding import EncodingMode
from app.models.errors import (
    BadMagicError,
    CapacityExceededError,
    DimensionMismatchError,
    EmptyInputError,
    TruncatedFileError,
    UnknownAttributeError,
    UnknownModeError,
    VersionMismatchError,
)
from app.models.graph import AttributedGraph, Graph, HyperGraph
from app.services import encoder, graph_generators, graph_io
from app.services.codebook import build_codebook
from app.services.decoder import unbind_value
from app.services.vsa_core import bind, cosine, inverse, random_hypervector


class TestGraphEncoding:
    def test_empty_graph_is_the_size_term(self, gaussian_codebook):
        cb = gaussian_codebook
        emb = encoder.encode_graph(Graph.from_edges(4, []), cb)
        np.testing.assert_array_equal(emb.vector, bind(cb.size_vector, cb.node(4)))
        assert emb.mode is EncodingMode.GRAPH
        assert emb.n_declared == 4
        assert emb.codebook_fingerprint == cb.fingerprint

    def test_explicit_sum(self, gaussian_codebook):
        cb = gaussian_codebook
        g = Graph.from_edges(3, [(1, 2), (2, 3)])
        expected = bind(cb.size_vector, cb.node(3)) + bind(cb.node(1), cb.node(2)) + bind(cb.node(2), cb.node(3))
        np.testing.assert_allclose(encoder.encode_graph(g, cb).vector, expected, atol=1e-12)

    def test_edge_order_does_not_matter(self, gaussian_codebook):
        edges = [(1, 2), (4, 3), (2, 5), (1, 5), (3, 2)]
        first = encoder.encode_graph(Graph.from_edges(5, edges), gaussian_codebook)
        second = encoder.encode_graph(Graph.from_edges(5, list(reversed(edges))), gaussian_codebook)
        np.testing.assert_array_equal(first.vector, second.vector)

    def test_adding_an_edge_adds_its_term(self, gaussian_codebook):
        cb = gaussian_codebook
        base = Graph.from_edges(6, [(1, 2), (3, 4)])
        grown = Graph.from_edges(6, [(1, 2), (3, 4), (2, 6)])
        difference = encoder.encode_graph(grown, cb).vector - encoder.encode_graph(base, cb).vector
        np.testing.assert_allclose(difference, bind(cb.node(2), cb.node(6)), atol=1e-12)

    def test_repeatable(self, gaussian_codebook):
        g = graph_generators.gen_er(20, 0.3, 1)
        first = encoder.encode_graph(g, gaussian_codebook)
        second = encoder.encode_graph(g, gaussian_codebook)
        assert encoder.embedding_digest(first) == encoder.embedding_digest(second)

    def test_too_many_vertices(self, gaussian_codebook):
        with pytest.raises(CapacityExceededError):
            encoder.encode_graph(Graph.from_edges(65, []), gaussian_codebook)


class TestEncodingProperties:
    @pytest.mark.parametrize("d", [128, 512, 2048])
    def test_permutation_invariance(self, d):
        cb = build_codebook(d, 1, 12, 0)
        for seed in range(100):
            g = graph_generators.gen_er(12, 0.3, seed)
            edges = list(g.edges)
            np.random.default_rng(seed).shuffle(edges)
            shuffled = Graph.from_edges(12, edges)
            np.testing.assert_allclose(
                encoder.encode_graph(shuffled, cb).vector, encoder.encode_graph(g, cb).vector, atol=1e-12
            )

    @pytest.mark.parametrize("d", [128, 512, 2048])
    def test_incrementality(self, d):
        cb = build_codebook(d, 1, 12, 0)
        for seed in range(100):
            g = graph_generators.gen_er(12, 0.3, seed)
            missing = sorted(set(itertools.combinations(range(1, 13), 2)) - g.edge_set)
            i, j = missing[np.random.default_rng(seed).integers(len(missing))]
            grown = Graph.from_edges(12, list(g.edges) + [(i, j)])
            difference = encoder.encode_graph(grown, cb).vector - encoder.encode_graph(g, cb).vector
            np.testing.assert_allclose(difference, bind(cb.node(i), cb.node(j)), atol=1e-12)


class TestAttributedEncoding:
    def test_adds_vertex_attribute_terms(self, gaussian_codebook, resource_path):
        cb = gaussian_codebook
        g = graph_io.parse_graph_json(resource_path("p4_amino_acids.json"))
        plain = encoder.encode_graph(g.graph, cb).vector
        attributed = encoder.encode_attributed(g, cb)
        expected = sum(bind(cb.node(v), cb.attribute(key)) for v, key in zip(g.graph.vertices, g.attrs))
        np.testing.assert_allclose(attributed.vector - plain, expected, atol=1e-12)
        assert attributed.mode is EncodingMode.ATTRIBUTED

    def test_unknown_attribute(self, gaussian_codebook):
        g = AttributedGraph(Graph.from_edges(2, [(1, 2)]), ("ALA", "XYZ"))
        with pytest.raises(UnknownAttributeError):
            encoder.encode_attributed(g, gaussian_codebook)


class TestHypergraphEncoding:
    def test_pairwise_hypergraph_equals_graph(self, gaussian_codebook):
        edges = [(1, 2), (2, 3), (1, 4), (3, 5)]
        g = Graph.from_edges(5, edges)
        h = HyperGraph.from_lists(5, [[3, 5], [1, 2], [4, 1], [2, 3]])
        product = encoder.encode_hypergraph_product(h, gaussian_codebook)
        np.testing.assert_array_equal(product.vector, encoder.encode_graph(g, gaussian_codebook).vector)
        assert product.mode is EncodingMode.HYPER_PRODUCT

    def test_three_member_product(self, gaussian_codebook):
        cb = gaussian_codebook
        h = HyperGraph.from_lists(3, [[1, 2, 3]])
        term = encoder.encode_hypergraph_product(h, cb).vector - bind(cb.size_vector, cb.node(3))
        expected = bind(bind(cb.node(1), cb.node(2)), cb.node(3))
        assert cosine(term, expected) > 0.999

    def test_two_members_unbind_to_the_third(self, gaussian_codebook):
        cb = gaussian_codebook
        h = HyperGraph.from_lists(3, [[1, 2, 3]])
        term = encoder.encode_hypergraph_product(h, cb).vector - bind(cb.size_vector, cb.node(3))
        recovered = bind(inverse(bind(cb.node(1), cb.node(2))), term)
        assert cosine(recovered, cb.node(3)) > 0.5

    def test_singleton_hyperedge_is_its_vertex(self, gaussian_codebook):
        cb = gaussian_codebook
        h = HyperGraph.from_lists(4, [[4]])
        term = encoder.encode_hypergraph_product(h, cb).vector - bind(cb.size_vector, cb.node(4))
        np.testing.assert_allclose(term, cb.node(4), atol=1e-12)

    def test_wide_product_warns(self, gaussian_codebook, caplog):
        h = HyperGraph.from_lists(6, [[1, 2, 3, 4, 5]])
        with caplog.at_level(logging.WARNING, logger="app.services.encoder"):
            encoder.encode_hypergraph_product(h, gaussian_codebook)
        assert "numerically unstable" in caplog.text

    def test_keyed_encoding(self, gaussian_codebook, resource_path):
        cb = gaussian_codebook
        h = graph_io.parse_hypergraph_json(resource_path("icl_hypergraph.json"))
        emb = encoder.encode_hypergraph(h, cb)
        expected = bind(cb.size_vector, cb.node(9))
        for k, members in enumerate(h.hyperedges, start=1):
            expected = expected + bind(cb.edge_id(k), sum(cb.node(v) for v in members))
        np.testing.assert_allclose(emb.vector, expected, atol=1e-12)
        assert emb.mode is EncodingMode.HYPER_KEYED
        assert emb.n_declared == 9

    def test_keyed_encoding_needs_enough_edge_ids(self, gaussian_codebook):
        h = HyperGraph.from_lists(4, [[1, 2]] * 17)
        with pytest.raises(CapacityExceededError):
            encoder.encode_hypergraph(h, gaussian_codebook)


class TestNeighborhoodEncoding:
    def test_center_of_a_star_sees_everything(self, gaussian_codebook):
        star = graph_generators.gen_star(5)
        emb = encoder.encode_node_neighborhood(star, 1, gaussian_codebook)
        np.testing.assert_allclose(emb.vector, encoder.encode_graph(star, gaussian_codebook).vector, atol=1e-12)
        assert emb.mode is EncodingMode.NEIGHBORHOOD

    def test_leaf_keeps_global_labels(self, gaussian_codebook):
        cb = gaussian_codebook
        emb = encoder.encode_node_neighborhood(graph_generators.gen_star(5), 3, cb)
        assert emb.n_declared == 2
        expected = bind(cb.size_vector, cb.node(2)) + bind(cb.node(1), cb.node(3))
        np.testing.assert_allclose(emb.vector, expected, atol=1e-12)

    def test_leaf_relabeled(self, gaussian_codebook):
        cb = gaussian_codebook
        emb = encoder.encode_node_neighborhood(graph_generators.gen_star(5), 3, cb, relabel=True)
        expected = bind(cb.size_vector, cb.node(2)) + bind(cb.node(1), cb.node(2))
        np.testing.assert_allclose(emb.vector, expected, atol=1e-12)

    def test_isolated_vertex(self, gaussian_codebook):
        cb = gaussian_codebook
        emb = encoder.encode_node_neighborhood(Graph.from_edges(3, [(1, 2)]), 3, cb)
        assert emb.n_declared == 1
        np.testing.assert_allclose(emb.vector, bind(cb.size_vector, cb.node(1)), atol=1e-12)


class TestKeyValueBundle:
    def test_single_pair(self):
        rng = np.random.default_rng(3)
        key, value = random_hypervector(1024, rng), random_hypervector(1024, rng)
        bundle = encoder.encode_kv_pairs([(key, value)])
        np.testing.assert_allclose(bundle, bind(key, value), atol=1e-12)
        assert cosine(unbind_value(bundle, key), value) > 0.999

    def test_empty(self):
        with pytest.raises(EmptyInputError):
            encoder.encode_kv_pairs([])

    def test_mismatched_dimensions(self):
        with pytest.raises(DimensionMismatchError):
            encoder.encode_kv_pairs([(np.ones(8), np.ones(16))])

    def test_dimension_changes_between_pairs(self):
        with pytest.raises(DimensionMismatchError):
            encoder.encode_kv_pairs([(np.ones(8), np.ones(8)), (np.ones(16), np.ones(16))])
        with pytest.raises(DimensionMismatchError):
            encoder.encode_kv_pairs([(np.ones(8), np.ones(8)), (np.ones(8), np.ones(4))])


class TestEmbeddingFile:
    def _saved(self, cb, tmp_path):
        emb = encoder.encode_graph(Graph.from_edges(3, [(1, 2), (1, 3), (2, 3)]), cb)
        path = tmp_path / "k3.emb"
        encoder.save_embedding(emb, str(path))
        return emb, path

    def test_roundtrip(self, gaussian_codebook, tmp_path):
        emb, path = self._saved(gaussian_codebook, tmp_path)
        loaded = encoder.load_embedding(str(path))
        np.testing.assert_array_equal(loaded.vector, emb.vector)
        assert (loaded.mode, loaded.n_declared, loaded.codebook_fingerprint) == (
            emb.mode, emb.n_declared, emb.codebook_fingerprint,
        )

    def test_truncated_payload(self, gaussian_codebook, tmp_path):
        _, path = self._saved(gaussian_codebook, tmp_path)
        path.write_bytes(path.read_bytes()[:-8])
        with pytest.raises(TruncatedFileError):
            encoder.load_embedding(str(path))

    def test_bad_magic(self, gaussian_codebook, tmp_path):
        _, path = self._saved(gaussian_codebook, tmp_path)
        path.write_bytes(b"XXXX" + path.read_bytes()[4:])
        with pytest.raises(BadMagicError):
            encoder.load_embedding(str(path))

    def test_unknown_version(self, gaussian_codebook, tmp_path):
        _, path = self._saved(gaussian_codebook, tmp_path)
        data = bytearray(path.read_bytes())
        data[4] = 7
        path.write_bytes(bytes(data))
        with pytest.raises(VersionMismatchError):
            encoder.load_embedding(str(path))

    def test_unknown_mode_byte(self, gaussian_codebook, tmp_path):
        _, path = self._saved(gaussian_codebook, tmp_path)
        data = bytearray(path.read_bytes())
        data[6] = 42
        path.write_bytes(bytes(data))
        with pytest.raises(UnknownModeError):
            encoder.load_embedding(str(path))
