"""Synthetic graph families used by tests, benchmarks and the CLI demo."""

from __future__ import annotations

import numpy as np

from .graph import StreamGraph


def _from_pairs(n: int, pairs: np.ndarray) -> StreamGraph:
    """Drop self-loops and duplicates, then build an unweighted graph."""
    if len(pairs):
        pairs = np.sort(pairs, axis=1)
        pairs = pairs[pairs[:, 0] != pairs[:, 1]]
        pairs = np.unique(pairs, axis=0)
    return StreamGraph.from_edges(n, [(int(u), int(v), 1) for u, v in pairs])


def planted_partition(
    n: int,
    communities: int,
    avg_degree: float,
    intra_ratio: float,
    seed: int,
) -> StreamGraph:
    """Contiguous equal-size communities; ``intra_ratio`` intra edges per inter edge.

    Edges are sampled with replacement and deduplicated, so the realized
    degree is slightly below ``avg_degree`` on dense settings.
    """
    if communities < 1 or n < communities:
        raise ValueError("need 1 <= communities <= n")
    rng = np.random.default_rng(seed)
    m = int(round(n * avg_degree / 2))
    m_intra = int(round(m * intra_ratio / (intra_ratio + 1)))
    m_inter = m - m_intra
    bounds = np.linspace(0, n, communities + 1).astype(np.int64)
    sizes = np.diff(bounds)
    # intra: pick a community proportional to size^2, then two members
    comm = rng.choice(communities, size=m_intra, p=sizes**2 / np.sum(sizes**2))
    u = bounds[comm] + (rng.random(m_intra) * sizes[comm]).astype(np.int64)
    v = bounds[comm] + (rng.random(m_intra) * sizes[comm]).astype(np.int64)
    intra = np.stack([u, v], axis=1)
    # inter: uniform pairs, rejecting those that land in one community
    label = np.repeat(np.arange(communities), sizes)
    chunks = []
    need = m_inter
    while need > 0 and communities > 1:
        a = rng.integers(0, n, size=2 * need)
        b = rng.integers(0, n, size=2 * need)
        keep = label[a] != label[b]
        got = np.stack([a[keep], b[keep]], axis=1)[:need]
        chunks.append(got)
        need -= len(got)
    pairs = np.concatenate([intra] + chunks) if chunks else intra
    return _from_pairs(n, pairs)


def community_of(n: int, communities: int) -> np.ndarray:
    """Ground-truth labels matching ``planted_partition``."""
    bounds = np.linspace(0, n, communities + 1).astype(np.int64)
    return np.repeat(np.arange(communities), np.diff(bounds))


def erdos_renyi(n: int, avg_degree: float, seed: int) -> StreamGraph:
    rng = np.random.default_rng(seed)
    m = int(round(n * avg_degree / 2))
    return _from_pairs(n, rng.integers(0, n, size=(m, 2)))


def barabasi_albert(n: int, attach: int, seed: int) -> StreamGraph:
    """Preferential attachment; produces a few high-degree hubs."""
    if attach < 1 or n <= attach:
        raise ValueError("need 1 <= attach < n")
    rng = np.random.default_rng(seed)
    targets = list(range(attach))
    repeated: list[int] = []
    pairs = []
    for v in range(attach, n):
        for t in set(targets):
            pairs.append((v, t))
        repeated.extend(targets)
        repeated.extend([v] * attach)
        idx = rng.integers(0, len(repeated), size=attach)
        targets = [repeated[i] for i in idx]
    return _from_pairs(n, np.array(pairs, dtype=np.int64))


def random_geometric(n: int, radius: float, seed: int) -> StreamGraph:
    """Unit-square points joined when closer than ``radius`` (grid hashing)."""
    rng = np.random.default_rng(seed)
    pts = rng.random((n, 2))
    cells = max(1, int(1.0 / radius))
    cell = np.minimum((pts * cells).astype(np.int64), cells - 1)
    grid: dict[tuple[int, int], list[int]] = {}
    for i, (cx, cy) in enumerate(cell):
        grid.setdefault((int(cx), int(cy)), []).append(i)
    r2 = radius * radius
    pairs = []
    for (cx, cy), members in grid.items():
        near = []
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                near.extend(grid.get((cx + dx, cy + dy), ()))
        near_arr = np.array(near, dtype=np.int64)
        for i in members:
            d = pts[near_arr] - pts[i]
            hit = near_arr[(np.einsum("ij,ij->i", d, d) < r2) & (near_arr > i)]
            pairs.extend((i, int(j)) for j in hit)
    return _from_pairs(n, np.array(pairs, dtype=np.int64).reshape(-1, 2))


def with_random_weights(g: StreamGraph, seed: int, max_node: int = 5, max_edge: int = 9) -> StreamGraph:
    """Same topology with random positive integer node and edge weights."""
    rng = np.random.default_rng(seed)
    nw = rng.integers(1, max_node + 1, size=g.n).tolist()
    edges = [(u, v, int(rng.integers(1, max_edge + 1))) for u, v, _ in g.edges()]
    return StreamGraph.from_edges(g.n, edges, node_weights=nw)


def mixed_corpus(count: int, seed: int, n_min: int = 100, n_max: int = 2000) -> list[tuple[str, StreamGraph]]:
    """A reproducible mix of community, uniform, hub-heavy and spatial graphs."""
    rng = np.random.default_rng(seed)
    out = []
    for i in range(count):
        n = int(rng.integers(n_min, n_max + 1))
        s = int(rng.integers(0, 2**31))
        kind = i % 4
        if kind == 0:
            c = int(rng.integers(2, 17))
            g = planted_partition(n, c, float(rng.uniform(6, 16)), float(rng.uniform(4, 12)), s)
            name = f"planted-{i}"
        elif kind == 1:
            g = erdos_renyi(n, float(rng.uniform(3, 10)), s)
            name = f"er-{i}"
        elif kind == 2:
            g = barabasi_albert(n, int(rng.integers(2, 6)), s)
            name = f"ba-{i}"
        else:
            g = random_geometric(n, float(np.sqrt(8.0 / (np.pi * n))), s)
            name = f"geo-{i}"
        out.append((name, g))
    return out
