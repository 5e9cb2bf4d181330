import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from streampart.graph import (
    MetisFormatError,
    StreamGraph,
    load_metis,
    parse_metis,
    read_assignment,
    stream_nodes,
    write_assignment,
    write_metis,
)
from streampart.ordering import StreamOrder, source_order
from streampart.state import PartitionState

from conftest import random_graph


def test_smallest_file():
    g = parse_metis("3 2\n2 3\n1\n1\n".splitlines())
    assert (g.n, g.m) == (3, 2)
    assert g.adj == [[1, 2], [0], [0]]
    assert g.node_weights == [1, 1, 1]
    assert all(w == 1 for ws in g.adj_w for w in ws)


def test_edge_weight_format():
    g = parse_metis("3 3 1\n2 4 3 1\n1 4 3 2\n1 1 2 2\n".splitlines())
    weights = {(u, v): w for u, v, w in g.edges()}
    assert weights == {(0, 1): 4, (0, 2): 1, (1, 2): 2}
    assert g.has_edge_weights and not g.has_node_weights


def test_node_and_edge_weights():
    g = parse_metis("2 1 11\n5 2 3\n7 1 3\n".splitlines())
    assert g.node_weights == [5, 7]
    assert g.total_node_weight == 12
    assert g.total_edge_weight == 3


def test_comments_and_isolated_nodes():
    g = parse_metis("% a comment\n3 1\n% another\n2\n1\n\n".splitlines())
    assert g.adj == [[1], [0], []]


def test_line_count_mismatch():
    with pytest.raises(MetisFormatError, match="adjacency line count mismatch"):
        parse_metis("3 2\n2 3\n1\n".splitlines())


def test_asymmetric_edge_reported():
    with pytest.raises(MetisFormatError, match=r"asymmetric edge"):
        parse_metis("3 2\n2 3\n1\n\n".splitlines())


@pytest.mark.parametrize(
    "text,msg",
    [
        ("2 1\n3\n1\n", "out of range"),
        ("2 1\n1 2\n1\n", "self-loop"),
        ("2 1 7\n2\n1\n", "unsupported fmt"),
        ("x y\n", "malformed header"),
        ("", "malformed header"),
        ("2 2\n2\n1\n", "header edge count"),
    ],
)
def test_rejects_bad_input(text, msg):
    with pytest.raises(MetisFormatError, match=msg):
        parse_metis(text.splitlines())


def test_stream_identity_and_permuted(path3):
    assert [(v, list(n)) for v, n, _ in stream_nodes(path3, source_order(3))] == [
        (0, [1]),
        (1, [0, 2]),
        (2, [1]),
    ]
    order = StreamOrder.from_perm([2, 0, 1])
    assert [(v, sorted(n)) for v, n, _ in stream_nodes(path3, order)] == [
        (2, [1]),
        (0, [1]),
        (1, [0, 2]),
    ]


def test_stream_empty_graph():
    g = StreamGraph.from_edges(0, [])
    assert list(stream_nodes(g, source_order(0))) == []


def test_write_assignment(tmp_path):
    st_ = PartitionState.from_blocks([1, 1, 1], [0, 1, 0], k=2)
    write_assignment(st_, tmp_path / "a.txt")
    assert (tmp_path / "a.txt").read_text() == "0\n1\n0\n"
    assert read_assignment(tmp_path / "a.txt", 3) == [0, 1, 0]

    one = PartitionState.from_blocks([1], [4], k=5)
    write_assignment(one, tmp_path / "b.txt")
    assert (tmp_path / "b.txt").read_text() == "4\n"


def test_write_assignment_unassigned(tmp_path):
    st_ = PartitionState.from_blocks([1, 1, 1], [0, 1, -1], k=2)
    with pytest.raises(ValueError, match="node 2"):
        write_assignment(st_, tmp_path / "a.txt")


@settings(max_examples=40, deadline=None)
@given(n=st.integers(0, 30), p=st.floats(0, 1), seed=st.integers(0, 10**6), weighted=st.booleans())
def test_roundtrip_and_degree_sum(tmp_path_factory, n, p, seed, weighted):
    g = random_graph(n, p, seed, weighted)
    assert sum(len(a) for a in g.adj) == 2 * g.m
    path = tmp_path_factory.mktemp("rt") / "g.metis"
    write_metis(g, path)
    h = load_metis(path)
    assert (h.n, h.m) == (g.n, g.m)
    assert h.node_weights == g.node_weights
    assert sorted(h.edges()) == sorted(g.edges())


@settings(max_examples=30, deadline=None)
@given(perm=st.permutations(list(range(25))))
def test_stream_visits_each_node_once(perm):
    g = random_graph(25, 0.2, 1)
    seen = [0] * 25
    for v, nbrs, _ in stream_nodes(g, StreamOrder.from_perm(perm)):
        seen[v] += 1
        assert nbrs == g.adj[v]
    assert seen == [1] * 25
