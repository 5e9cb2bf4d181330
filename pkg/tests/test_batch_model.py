import random

import pytest

from streampart.batch_model import Batch, build_batch_model, commit_batch
from streampart.graph import StreamGraph
from streampart.state import UNASSIGNED, PartitionState

from conftest import random_graph


def naive_aux_weights(g, members, state):
    out = {}
    for v in members:
        for i in range(state.k):
            total = 0
            for u, w in zip(g.adj[v], g.adj_w[v]):
                if state.block[u] == i and u not in members:
                    total += w
            if total:
                out[(v, i)] = total
    return out


def model_aux_weights(model):
    gr = model.graph
    nb = gr.n_regular
    out = {}
    for i in range(nb):
        for u, w in zip(gr.adj[i], gr.wgt[i]):
            if u >= nb:
                out[(model.local_to_global[i], u - nb)] = w
    return out


def test_two_node_batch_example():
    # u=0, v=1 in batch; u also adjacent to node 2 (block 0)
    g = StreamGraph.from_edges(3, [(0, 1), (0, 2)])
    st_ = PartitionState.from_blocks([1, 1, 1], [UNASSIGNED, UNASSIGNED, 0], 2)
    model = build_batch_model(g, [0, 1], st_)
    gr = model.graph
    assert gr.n == 4 and gr.n_regular == 2
    assert sorted(zip(gr.adj[0], gr.wgt[0])) == [(1, 1), (2, 1)]
    assert gr.adj[1] == [0] and gr.adj[3] == []
    assert gr.node_weight == [1, 1, 1, 0]


def test_no_assigned_neighbors():
    g = random_graph(10, 0.4, 2)
    st_ = PartitionState.for_graph(g, 3)
    model = build_batch_model(g, list(range(10)), st_)
    assert all(model.graph.adj[model.graph.aux(i)] == [] for i in range(3))
    assert model.graph.edge_weight() == g.total_edge_weight


def test_aux_weights_match_double_loop():
    rng = random.Random(5)
    for trial in range(30):
        g = random_graph(300, 0.02, trial, weighted=True)
        k = rng.randint(1, 6)
        blocks = [rng.randrange(k) if rng.random() < 0.5 else UNASSIGNED for _ in range(g.n)]
        free = [v for v in range(g.n) if blocks[v] == UNASSIGNED]
        members = rng.sample(free, min(40, len(free)))
        st_ = PartitionState.from_blocks(g.node_weights, blocks, k)
        model = build_batch_model(g, members, st_)
        assert model_aux_weights(model) == naive_aux_weights(g, set(members), st_)
        assert model.graph.node_weight[model.graph.n_regular:] == st_.block_weight
        for i, v in enumerate(members):
            assert len(model.graph.adj[i]) <= len(g.adj[v])
            assert model.global_to_local[v] == i


def test_cut_consistency_after_commit():
    rng = random.Random(8)
    for trial in range(20):
        g = random_graph(60, 0.1, 100 + trial, weighted=True)
        k = 3
        blocks = [rng.randrange(k) if rng.random() < 0.6 else UNASSIGNED for _ in range(g.n)]
        st_ = PartitionState.from_blocks(g.node_weights, blocks, k, epsilon=10.0)
        members = [v for v in range(g.n) if blocks[v] == UNASSIGNED]
        model = build_batch_model(g, members, st_)
        local = [rng.randrange(k) for _ in members] + list(range(k))
        model_cut = model.graph.cut(local)
        assigned_before = {v for v in range(g.n) if blocks[v] != UNASSIGNED}
        commit_batch(model, local, st_)
        ms = set(members)
        brute = sum(
            w for u, v, w in g.edges()
            if (u in ms or v in ms) and {u, v} <= ms | assigned_before and st_.block[u] != st_.block[v]
        )
        assert model_cut == brute
        assert st_.block_weight == st_.recompute_block_weights()


def test_commit_errors():
    g = StreamGraph.from_edges(2, [(0, 1)])
    st_ = PartitionState.for_graph(g, 2, epsilon=0.0)
    model = build_batch_model(g, [0, 1], st_)
    with pytest.raises(ValueError, match="pinned"):
        commit_batch(model, [0, 1, 1, 0], st_)
    with pytest.raises(ValueError, match="covers 0"):
        commit_batch(model, [], st_)
    with pytest.raises(RuntimeError, match="l_max"):
        commit_batch(model, [0, 0], st_)
    assert st_.block == [UNASSIGNED, UNASSIGNED]
    assert commit_batch(model, [0, 1, 0, 1], st_) == [(0, 0), (1, 1)]
    assert st_.block_weight == [1, 1]


def test_build_errors():
    g = StreamGraph.from_edges(3, [(0, 1)])
    st_ = PartitionState.from_blocks([1, 1, 1], [0, UNASSIGNED, UNASSIGNED], 2)
    with pytest.raises(ValueError, match="already assigned"):
        build_batch_model(g, [0, 1], st_)
    with pytest.raises(ValueError, match="duplicate"):
        build_batch_model(g, [1, 1], st_)
    with pytest.raises(ValueError, match="empty"):
        build_batch_model(g, [], st_)


def test_batch_container():
    b = Batch(2)
    b.add(4)
    b.add(1)
    assert b.is_full() and b.members == [4, 1]
    with pytest.raises(ValueError):
        b.add(3)
    with pytest.raises(ValueError):
        Batch.of([1, 1])
    b.clear()
    assert len(b) == 0


def test_rebuild_is_identical():
    g = random_graph(50, 0.1, 4, weighted=True)
    blocks = [v % 3 if v % 2 else UNASSIGNED for v in range(50)]
    st_ = PartitionState.from_blocks(g.node_weights, blocks, 3)
    members = [v for v in range(50) if v % 2 == 0]
    a, b = build_batch_model(g, members, st_), build_batch_model(g, members, st_)
    assert a.graph == b.graph and a.local_to_global == b.local_to_global
