import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sosm.clustering import (
    cluster_exhaustive,
    cluster_greedy,
    cluster_report,
    clustering_cost,
    iter_partitions,
)
from sosm.errors import AnalysisError
from sosm.matrix import build_matrix, permute
from oracles import best_partition_oracle, make_model, random_model

# Frozen optimum for the bundled fixture, computed beforehand with the
# recursive enumeration oracle over all 21147 partitions of 9 systems.
EFS_BEST_CLUSTERS = ((1, 2, 4, 5, 7), (3, 6, 8, 9))
EFS_BEST_COST = 883.0


def test_cost_two_systems_single_flow():
    matrix = build_matrix(make_model([1, 2], [(1, 2)]))
    assert clustering_cost(matrix, [{1, 2}], 2) == 4.0
    assert clustering_cost(matrix, [{1}, {2}], 2) == 4.0


def test_cost_without_exchanges_is_zero():
    matrix = build_matrix(make_model([1, 2, 3], []))
    assert clustering_cost(matrix, [{1, 2, 3}], 2) == 0.0
    assert clustering_cost(matrix, [{1}, {2}, {3}], 3) == 0.0


def test_cost_full_mesh_is_pow_insensitive_to_grouping():
    edges = [(i, j) for i in (1, 2, 3) for j in (1, 2, 3) if i != j]
    matrix = build_matrix(make_model([1, 2, 3], edges))
    assert clustering_cost(matrix, [{1}, {2}, {3}], 2) == 54.0
    assert clustering_cost(matrix, [{1, 2, 3}], 2) == 54.0


@pytest.mark.parametrize("partition", [
    [{1}], [{1, 2}, {2, 3}], [{1, 2, 3}, set()], [{1, 2, 3, 4}],
])
def test_cost_rejects_invalid_partitions(partition):
    matrix = build_matrix(make_model([1, 2, 3], []))
    with pytest.raises(AnalysisError, match="not a partition"):
        clustering_cost(matrix, partition, 2)


def test_cost_rejects_pow_below_one():
    matrix = build_matrix(make_model([1, 2], []))
    with pytest.raises(AnalysisError, match="pow"):
        clustering_cost(matrix, [{1}, {2}], 0.5)


@pytest.mark.parametrize("n,bell", [(1, 1), (2, 2), (3, 5), (4, 15), (5, 52), (6, 203)])
def test_partition_enumeration_counts(n, bell):
    assert sum(1 for _ in iter_partitions(tuple(range(1, n + 1)))) == bell


def test_partition_enumeration_is_exact_set():
    got = set(iter_partitions((1, 2, 3)))
    assert got == {
        ((1, 2, 3),), ((1, 2), (3,)), ((1, 3), (2,)), ((1,), (2, 3)),
        ((1,), (2,), (3,)),
    }


def test_exhaustive_without_exchanges_prefers_singletons():
    matrix = build_matrix(make_model([1, 2, 3], []))
    clustering = cluster_exhaustive(matrix, 2)
    assert clustering.clusters == ((1,), (2,), (3,))
    assert clustering.cost == 0.0


def test_greedy_without_exchanges_keeps_singletons():
    matrix = build_matrix(make_model([1, 2, 3], []))
    assert cluster_greedy(matrix, 2).clusters == ((1,), (2,), (3,))


def test_two_cycles_cluster_together():
    matrix = build_matrix(make_model([1, 2, 3, 4], [(1, 2), (2, 1), (3, 4), (4, 3)]))
    exhaustive = cluster_exhaustive(matrix, 2)
    assert exhaustive.clusters == ((1, 2), (3, 4))
    assert exhaustive.cost == 16.0
    greedy = cluster_greedy(matrix, 2)
    assert greedy.clusters == exhaustive.clusters
    assert greedy.cost == exhaustive.cost


def test_efs_golden_clustering(efs_matrix):
    exhaustive = cluster_exhaustive(efs_matrix, 2)
    assert exhaustive.clusters == EFS_BEST_CLUSTERS
    assert exhaustive.cost == EFS_BEST_COST
    assert exhaustive.order == (1, 2, 4, 5, 7, 3, 6, 8, 9)
    assert exhaustive.method == "exhaustive"
    greedy = cluster_greedy(efs_matrix, 2)
    assert greedy.cost >= exhaustive.cost


def test_exhaustive_size_limit():
    matrix = build_matrix(make_model(list(range(1, 12)), []))
    with pytest.raises(AnalysisError, match="greedy"):
        cluster_exhaustive(matrix, 2)


def test_greedy_never_beats_exhaustive():
    rng = random.Random(13)
    for _ in range(30):
        matrix = build_matrix(random_model(rng, n_min=2, n_max=7, max_occurrences=10))
        assert cluster_greedy(matrix, 2).cost >= cluster_exhaustive(matrix, 2).cost


def test_exhaustive_matches_recursive_oracle():
    rng = random.Random(29)
    for _ in range(30):
        model = random_model(rng, n_min=2, n_max=6, max_occurrences=8)
        matrix = build_matrix(model)
        instances = [(e.from_id, e.to_id) for e in model.exchanges]
        expected_clusters, expected_cost = best_partition_oracle(
            list(matrix.order), instances, 2.0)
        clustering = cluster_exhaustive(matrix, 2)
        assert clustering.clusters == expected_clusters
        assert clustering.cost == expected_cost


@given(st.integers(0, 2 ** 32 - 1))
@settings(max_examples=25, deadline=None)
def test_clustering_output_is_a_partition(seed):
    rng = random.Random(seed)
    matrix = build_matrix(random_model(rng, n_min=2, n_max=6, max_occurrences=8))
    for clustering in (cluster_exhaustive(matrix, 2), cluster_greedy(matrix, 2)):
        members = [m for block in clustering.clusters for m in block]
        assert sorted(members) == sorted(matrix.order)
        assert sorted(clustering.order) == sorted(matrix.order)


def test_order_groups_clusters_contiguously(efs_matrix):
    clustering = cluster_exhaustive(efs_matrix, 2)
    permuted = permute(efs_matrix, clustering.order)
    position = {system: idx for idx, system in enumerate(permuted.order)}
    for block in clustering.clusters:
        positions = sorted(position[m] for m in block)
        assert positions == list(range(positions[0], positions[0] + len(block)))


def test_clustering_is_deterministic(efs_matrix):
    assert cluster_exhaustive(efs_matrix, 2) == cluster_exhaustive(efs_matrix, 2)
    assert cluster_greedy(efs_matrix, 2) == cluster_greedy(efs_matrix, 2)


def test_cluster_report_format(efs_matrix):
    text = cluster_report(cluster_exhaustive(efs_matrix, 2), efs_matrix)
    lines = text.splitlines()
    assert lines[0] == "cluster 1: {1, 2, 4, 5, 7} (internal instances: 14, external: 5)"
    assert lines[1] == "cluster 2: {3, 6, 8, 9} (internal instances: 8, external: 5)"
    assert lines[2] == "total cost: 883 (method: exhaustive)"
