import numpy as np

from streampart.generators import (
    barabasi_albert,
    community_of,
    erdos_renyi,
    mixed_corpus,
    planted_partition,
    random_geometric,
    with_random_weights,
)
from streampart.metrics import edge_cut


def test_planted_partition_shape():
    g = planted_partition(10_000, 16, 20, 10, 0)
    assert g.n == 10_000
    assert 8.0 < g.total_edge_weight * 2 / g.n <= 20.0
    labels = community_of(g.n, 16)
    _, ratio = edge_cut(g, labels.tolist())
    # about one inter edge per ten intra edges
    assert 0.07 < ratio < 0.12
    assert np.all(np.diff(labels) >= 0)


def test_generators_are_seeded():
    a = planted_partition(500, 4, 6, 5, 3)
    b = planted_partition(500, 4, 6, 5, 3)
    assert sorted(a.edges()) == sorted(b.edges())
    assert sorted(erdos_renyi(200, 4, 1).edges()) == sorted(erdos_renyi(200, 4, 1).edges())


def test_barabasi_albert_has_hubs():
    g = barabasi_albert(2000, 3, 0)
    assert g.max_degree > 10 * (2 * g.m / g.n)


def test_random_geometric_matches_bruteforce():
    g = random_geometric(300, 0.1, 4)
    rng = np.random.default_rng(4)
    pts = rng.random((300, 2))
    d2 = ((pts[:, None, :] - pts[None, :, :]) ** 2).sum(-1)
    iu = np.triu_indices(300, 1)
    expected = {(int(u), int(v)) for u, v in zip(*iu) if d2[u, v] < 0.01}
    assert {(u, v) for u, v, _ in g.edges()} == expected


def test_weights_and_corpus():
    g = with_random_weights(erdos_renyi(100, 4, 2), 3)
    assert g.has_node_weights and all(1 <= w <= 5 for w in g.node_weights)
    corpus = mixed_corpus(8, 1, n_min=50, n_max=120)
    assert len(corpus) == 8 and all(50 <= g.n <= 120 for _, g in corpus)
