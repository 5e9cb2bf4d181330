import heapq
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from streampart.bucket_pq import EMPTY, BucketPQ, bucket_count
from streampart.scoring import ScoreKind, ScoringConfig, max_score


def test_bucket_count_for_anr():
    assert bucket_count(max_score(ScoringConfig(ScoreKind.ANR)), 1000) == 1001
    assert bucket_count(max_score(ScoringConfig(ScoreKind.HAA)), 1000) == 1001


def test_constructor_checks():
    with pytest.raises(ValueError):
        BucketPQ(10, 0)
    with pytest.raises(ValueError):
        BucketPQ(0, 1000)
    q = BucketPQ(5, 1000)
    assert len(q) == 0 and q.top == EMPTY


def test_single_bucket_is_a_stack():
    q = BucketPQ(1, 1000)
    for v, s in enumerate([0.3, 0.9, 0.1]):
        q.insert(v, s)
    assert [q.extract_max() for _ in range(3)] == [2, 1, 0]


def test_insert_indices():
    q = BucketPQ(2000, 1000)
    q.insert(1, 0.625)
    assert q.bucket_of(1) == 625
    q2 = BucketPQ(1000, 1000)
    q2.insert(1, 9.9)
    assert q2.bucket_of(1) == 999
    q3 = BucketPQ(10, 1000)
    q3.insert(5, 0.0)
    assert q3.bucket_of(5) == 0 and q3.top == 0


def test_round_half_up():
    q = BucketPQ(10, 1.0)
    q.insert(0, 2.5)
    q.insert(1, 3.49)
    assert q.bucket_of(0) == 3 and q.bucket_of(1) == 3


def test_duplicate_insert_rejected():
    q = BucketPQ(10, 1.0)
    q.insert(0, 1)
    with pytest.raises(ValueError):
        q.insert(0, 2)


def test_increase_key_swap_trace():
    q = BucketPQ(10, 1.0)
    q.insert("v", 3)
    q.insert("x", 3)
    q.increase_key("v", 7)
    assert q.buckets[3] == ["x"] and q.buckets[7] == ["v"]
    assert q._loc["x"] == (3, 0) and q.top == 7
    q.check()


def test_increase_key_same_bucket_and_errors():
    q = BucketPQ(10, 1.0)
    for v in "abc":
        q.insert(v, 4)
    q.increase_key("a", 4)
    assert sorted(q.buckets[4]) == ["a", "b", "c"]
    q.check()
    with pytest.raises(ValueError, match="decrease"):
        q.increase_key("a", 2)
    with pytest.raises(KeyError):
        q.increase_key("zz", 5)


def test_extract_order():
    q = BucketPQ(10, 1.0)
    q.insert("b", 2)
    q.insert("c", 2)
    q.insert("a", 5)
    assert [q.extract_max() for _ in range(3)] == ["a", "c", "b"]
    assert q.top == EMPTY
    with pytest.raises(IndexError):
        q.extract_max()


def test_against_naive_oracle():
    rng = random.Random(2024)
    q = BucketPQ(1001, 1000)
    ref: dict[int, int] = {}
    heap: list[tuple[int, int]] = []  # (-bucket, node), stale entries skipped
    alive: list[int] = []  # for uniform sampling of queued nodes
    slot: dict[int, int] = {}

    def oracle_max():
        while heap and ref.get(heap[0][1]) != -heap[0][0]:
            heapq.heappop(heap)
        return -heap[0][0] if heap else EMPTY

    next_id = 0
    for step in range(100_000):
        r = rng.random()
        if r < 0.4 or not ref:
            v, s = next_id, rng.random() * 0.5
            next_id += 1
            q.insert(v, s)
            slot[v] = len(alive)
            alive.append(v)
        elif r < 0.8:
            v = alive[rng.randrange(len(alive))]
            s = min(1.0, ref[v] / 1000 + rng.random() * 0.05)
            q.increase_key(v, s)
        else:
            best = oracle_max()
            v = q.extract_max()
            assert ref.pop(v) == best
            i, last = slot.pop(v), alive.pop()
            if last != v:
                alive[i] = last
                slot[last] = i
            v = None
        if v is not None:
            ref[v] = q.index(s)
            heapq.heappush(heap, (-ref[v], v))
            b, p = q._loc[v]
            assert b == ref[v] and q.buckets[b][p] == v
        assert len(q) == len(ref)
        assert q.top == oracle_max()
        if step % 97 == 0:
            q.check()
    q.check()
    per_bucket = {}
    for v, b in ref.items():
        per_bucket.setdefault(b, set()).add(v)
    assert {b: set(bucket) for b, bucket in enumerate(q.buckets) if bucket} == per_bucket


@settings(max_examples=60, deadline=None)
@given(ops=st.lists(st.tuples(st.integers(0, 2), st.integers(0, 30), st.floats(0, 1)), max_size=200))
def test_consistency_property(ops):
    q = BucketPQ(101, 100)
    keys: dict[int, float] = {}
    for op, v, s in ops:
        if op == 0 and v not in keys:
            q.insert(v, s)
            keys[v] = s
        elif op == 1 and v in keys:
            s = max(s, keys[v])
            q.increase_key(v, s)
            keys[v] = s
        elif op == 2 and keys:
            top = max(q.index(x) for x in keys.values())
            got = q.extract_max()
            assert q.index(keys.pop(got)) == top
        q.check()


def test_gradual_keys_keep_extract_cheap():
    rng = random.Random(1)
    q = BucketPQ(1001, 1000)
    for v in range(5000):
        q.insert(v, rng.random() * 0.1)
    for _ in range(5000):
        q.extract_max()
    assert q.top_moves / q.extracts < 1001 / 10
