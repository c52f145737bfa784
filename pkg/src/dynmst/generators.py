"""Seeded graph generators: random, path, star, grid.

Every generator builds a spanning skeleton first, so the result is always
connected, then adds random chords up to ``m`` edges.  Weights are distinct.
"""

from __future__ import annotations

import math
import random

from .graph import GraphError, WeightedEdge, WeightedGraph, save_graph

KINDS = ("random", "path", "star", "grid")


def _weights(rng: random.Random, m: int) -> list[float]:
    out, seen = [], set()
    for i in range(m):
        w = round(rng.uniform(1.0, 1000.0), 3)
        # ties are broken by an id-scaled epsilon
        while w in seen:
            w = round(w + (i + 1) * 1e-6, 9)
        seen.add(w)
        out.append(w)
    return out


def _finish(n: int, pairs: list[tuple[int, int]], rng: random.Random) -> WeightedGraph:
    ws = _weights(rng, len(pairs))
    return WeightedGraph(n, [WeightedEdge(f"e{i}", a, b, ws[i]) for i, (a, b) in enumerate(pairs)])


def _add_chords(n, pairs, m, rng, allowed=None, max_degree=None):
    have = {frozenset(p) for p in pairs}
    degree = [0] * n
    for a, b in pairs:
        degree[a] += 1
        degree[b] += 1
    candidates = [
        (a, b) for a in range(n) for b in range(a + 1, n)
        if frozenset((a, b)) not in have and (allowed is None or allowed(a, b))
    ]
    rng.shuffle(candidates)
    for a, b in candidates:
        if len(pairs) >= m:
            break
        if max_degree is not None and (degree[a] >= max_degree or degree[b] >= max_degree):
            continue
        pairs.append((a, b))
        degree[a] += 1
        degree[b] += 1
    if len(pairs) < m:
        raise GraphError(f"cannot place {m} edges on {n} vertices under the constraints")
    return pairs


def random_graph(n: int, m: int, seed: int) -> WeightedGraph:
    """Uniform random tree skeleton plus random chords; simple graph."""
    if n < 1:
        raise GraphError("n must be at least 1")
    if m < n - 1:
        raise GraphError(f"m={m} < n-1={n - 1}: cannot be connected")
    if m > n * (n - 1) // 2:
        raise GraphError(f"m={m} exceeds the {n * (n - 1) // 2} edges of a simple graph")
    rng = random.Random(seed)
    label = list(range(n))
    rng.shuffle(label)
    pairs = [(label[rng.randrange(v)], label[v]) for v in range(1, n)]
    pairs = [(min(a, b), max(a, b)) for a, b in pairs]
    return _finish(n, _add_chords(n, pairs, m, rng), rng)


def bounded_degree_graph(n: int, m: int, seed: int, max_degree: int = 3) -> WeightedGraph:
    """Random connected graph whose vertex degrees never exceed ``max_degree``."""
    if m < n - 1:
        raise GraphError(f"m={m} < n-1={n - 1}: cannot be connected")
    rng = random.Random(seed)
    degree = [0] * n
    pairs = []
    for v in range(1, n):
        open_ = [u for u in range(v) if degree[u] < max_degree]
        u = rng.choice(open_)
        pairs.append((u, v))
        degree[u] += 1
        degree[v] += 1
    return _finish(n, _add_chords(n, pairs, m, rng, max_degree=max_degree), rng)


def path_graph(n: int, m: int | None, seed: int) -> WeightedGraph:
    rng = random.Random(seed)
    pairs = [(v, v + 1) for v in range(n - 1)]
    return _finish(n, _extend(n, pairs, m, rng), rng)


def star_graph(n: int, m: int | None, seed: int) -> WeightedGraph:
    rng = random.Random(seed)
    pairs = [(0, v) for v in range(1, n)]
    return _finish(n, _extend(n, pairs, m, rng), rng)


def grid_graph(n: int, m: int | None, seed: int) -> WeightedGraph:
    """The first ``n`` cells, row-major, of a near-square grid."""
    rng = random.Random(seed)
    rows = max(1, int(math.isqrt(n)))
    cols = math.ceil(n / rows)
    pairs = []
    for v in range(n):
        r, c = divmod(v, cols)
        if c + 1 < cols and v + 1 < n:
            pairs.append((v, v + 1))
        if v + cols < n:
            pairs.append((v, v + cols))
    return _finish(n, _extend(n, pairs, m, rng), rng)


def _extend(n, pairs, m, rng):
    if not m:
        return pairs
    if m < len(pairs):
        raise GraphError(f"m={m} is below the {len(pairs)} skeleton edges")
    return _add_chords(n, pairs, m, rng)


def generate_graph(kind: str, n: int, m: int | None, seed: int) -> WeightedGraph:
    if kind == "random":
        return random_graph(n, n - 1 if m is None else m, seed)
    if kind == "path":
        return path_graph(n, m, seed)
    if kind == "star":
        return star_graph(n, m, seed)
    if kind == "grid":
        return grid_graph(n, m, seed)
    raise GraphError(f"unknown graph kind {kind!r}; choose from {', '.join(KINDS)}")


def generate(kind: str, n: int, m: int | None, seed: int) -> str:
    """Edge-list document for a generated graph."""
    return save_graph(generate_graph(kind, n, m, seed))


def parse_generate_spec(spec: str) -> tuple[str, int, int | None, int | None]:
    """``kind:n:m:seed``; m may be empty (skeleton only) and so may seed."""
    parts = spec.split(":")
    if len(parts) != 4:
        raise GraphError(f"expected kind:n:m:seed, got {spec!r}")
    kind, n, m, seed = parts
    try:
        return kind, int(n), (int(m) if m else None), (int(seed) if seed else None)
    except ValueError:
        raise GraphError(f"non-integer field in {spec!r}") from None
