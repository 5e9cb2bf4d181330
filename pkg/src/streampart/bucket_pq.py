"""Bounded-range bucket max-priority queue with monotone keys."""

from __future__ import annotations

import math

EMPTY = -1


class BucketPQ:
    """Max-queue over node IDs keyed by discretized scores.

    Buckets are plain lists; ``_loc`` maps a node to ``(bucket, position)``.
    Within a bucket the most recently inserted node is extracted first.
    Keys may only grow: a decrease raises ``ValueError``.
    """

    def __init__(self, b_count: int, disc_factor: float):
        if b_count < 1:
            raise ValueError("bucket count must be >= 1")
        if not disc_factor > 0:
            raise ValueError("disc_factor must be > 0")
        self.b_count = b_count
        self.disc_factor = float(disc_factor)
        self.buckets: list[list[int]] = [[] for _ in range(b_count)]
        self._loc: dict[int, tuple[int, int]] = {}
        self.top = EMPTY
        # instrumentation
        self.increase_calls = 0
        self.top_moves = 0
        self.extracts = 0

    @classmethod
    def for_max_score(cls, s_max: float, disc_factor: float) -> "BucketPQ":
        return cls(bucket_count(s_max, disc_factor), disc_factor)

    def __len__(self) -> int:
        return len(self._loc)

    def __contains__(self, v: int) -> bool:
        return v in self._loc

    def index(self, s: float) -> int:
        # round half up; scores are non-negative
        b = int(s * self.disc_factor + 0.5)
        return b if b < self.b_count else self.b_count - 1

    def bucket_of(self, v: int) -> int:
        return self._loc[v][0]

    def insert(self, v: int, s: float) -> None:
        if v in self._loc:
            raise ValueError(f"node {v} already in queue")
        self._push(v, self.index(s))

    def _push(self, v: int, b: int) -> None:
        bucket = self.buckets[b]
        self._loc[v] = (b, len(bucket))
        bucket.append(v)
        if b > self.top:
            self.top = b

    def increase_key(self, v: int, s: float) -> None:
        try:
            b, p = self._loc[v]
        except KeyError:
            raise KeyError(f"node {v} not in queue") from None
        nb = self.index(s)
        if nb < b:
            raise ValueError(f"decrease-key for node {v}: bucket {b} -> {nb}")
        self.increase_calls += 1
        bucket = self.buckets[b]
        x = bucket.pop()
        if p < len(bucket):
            bucket[p] = x
            self._loc[x] = (b, p)
        self._push(v, nb)

    def extract_max(self) -> int:
        if not self._loc:
            raise IndexError("extract from empty queue")
        buckets = self.buckets
        rho = self.top
        v = buckets[rho].pop()
        del self._loc[v]
        self.extracts += 1
        if not self._loc:
            self.top = EMPTY
            return v
        while not buckets[rho]:
            rho -= 1
            self.top_moves += 1
        self.top = rho
        return v

    def items(self):
        """``(node, bucket)`` pairs in no particular order."""
        return ((v, bp[0]) for v, bp in self._loc.items())

    def check(self) -> None:
        """Assert internal consistency (used by tests)."""
        count = 0
        for b, bucket in enumerate(self.buckets):
            for p, v in enumerate(bucket):
                assert self._loc[v] == (b, p), (v, b, p, self._loc.get(v))
                count += 1
        assert count == len(self._loc)
        if self._loc:
            assert self.top == max(b for b, bucket in enumerate(self.buckets) if bucket)
        else:
            assert self.top == EMPTY


def bucket_count(s_max: float, disc_factor: float) -> int:
    """``ceil(s_max * disc_factor) + 1`` buckets, so the top score has its own bucket."""
    return math.ceil(s_max * disc_factor) + 1
