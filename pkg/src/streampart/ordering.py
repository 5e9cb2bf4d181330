"""Stream orders: which node arrives at which stream position."""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class StreamOrder:
    """A permutation ``perm[pos] = node`` with its inverse ``inverse[node] = pos``."""

    perm: np.ndarray
    inverse: np.ndarray
    label: str = "source"

    @classmethod
    def from_perm(cls, perm, label: str = "custom") -> "StreamOrder":
        perm = np.asarray(perm, dtype=np.int64)
        n = len(perm)
        if perm.ndim != 1:
            raise ValueError("order must be one-dimensional")
        seen = np.zeros(n, dtype=bool)
        if n and (perm.min() < 0 or perm.max() >= n):
            raise ValueError("order contains node IDs outside [0, n)")
        seen[perm] = True
        if not seen.all():
            missing = int(np.flatnonzero(~seen)[0])
            raise ValueError(f"order is not a permutation: node {missing} missing")
        inverse = np.empty(n, dtype=np.int64)
        inverse[perm] = np.arange(n, dtype=np.int64)
        return cls(perm, inverse, label)

    def __len__(self) -> int:
        return len(self.perm)

    def position(self, v: int) -> int:
        return int(self.inverse[v])

    def reversed(self) -> "StreamOrder":
        return StreamOrder.from_perm(self.perm[::-1].copy(), f"reversed({self.label})")


def source_order(n: int) -> StreamOrder:
    perm = np.arange(n, dtype=np.int64)
    return StreamOrder(perm, perm.copy(), "source")


def random_order(n: int, seed: int) -> StreamOrder:
    """Uniform random permutation.

    Uses numpy's PCG64 generator (``np.random.default_rng(seed)``), whose
    ``permutation`` is a Fisher-Yates shuffle; ``(n, seed)`` fixes the result.
    """
    perm = np.random.default_rng(seed).permutation(n).astype(np.int64)
    return StreamOrder.from_perm(perm, f"random({seed})")


def save_order(order: StreamOrder, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write("".join(f"{int(v)}\n" for v in order.perm))


def load_order(path: str | os.PathLike, n: int | None = None) -> StreamOrder:
    with open(path, "r", encoding="ascii") as fh:
        perm = [int(tok) for tok in fh.read().split()]
    if n is not None and len(perm) != n:
        raise ValueError(f"order file has {len(perm)} entries, expected {n}")
    return StreamOrder.from_perm(perm, f"file({os.fspath(path)})")


def parse_order_spec(spec: str, n: int) -> StreamOrder:
    """Resolve ``source``, ``random:SEED`` or ``file:PATH``."""
    if spec == "source":
        return source_order(n)
    kind, _, arg = spec.partition(":")
    if kind == "random" and arg:
        return random_order(n, int(arg))
    if kind == "file" and arg:
        return load_order(arg, n)
    raise ValueError(f"bad order spec {spec!r}; expected source, random:SEED or file:PATH")
