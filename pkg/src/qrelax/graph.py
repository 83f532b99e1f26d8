"""Graph instances, greedy coloring, cut evaluation and an exact MaxCut oracle."""
from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np
from numba import njit

MAX_ORACLE_VERTICES = 30
MAX_GENERATION_ATTEMPTS = 1000


@dataclass(frozen=True)
class Graph:
    """Weighted undirected simple graph with canonical edges ``u < v``."""

    n: int
    edges: tuple[tuple[int, int, float], ...] = ()

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"vertex count must be positive, got {self.n}")
        seen = set()
        for u, v, _ in self.edges:
            if not 0 <= u < v < self.n:
                raise ValueError(f"edge ({u}, {v}) is not canonical for n={self.n}")
            if (u, v) in seen:
                raise ValueError(f"duplicate edge ({u}, {v})")
            seen.add((u, v))

    @classmethod
    def from_edges(cls, n: int, edges) -> Graph:
        """Build a graph from ``(u, v)`` or ``(u, v, w)`` tuples in any orientation."""
        canon = []
        for e in edges:
            u, v = int(e[0]), int(e[1])
            w = float(e[2]) if len(e) > 2 else 1.0
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if u > v:
                u, v = v, u
            canon.append((u, v, w))
        canon.sort(key=lambda e: (e[0], e[1]))
        return cls(n, tuple(canon))

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def edge_arrays(self):
        if not self.edges:
            return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64), np.zeros(0)
        u, v, w = zip(*self.edges)
        return np.array(u, dtype=np.int64), np.array(v, dtype=np.int64), np.array(w, dtype=float)

    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.n, dtype=np.int64)
        for u, v, _ in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def neighbors(self) -> list[list[int]]:
        adj = [[] for _ in range(self.n)]
        for u, v, _ in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return adj

    @property
    def is_unweighted(self) -> bool:
        return all(w == 1.0 for _, _, w in self.edges)


@dataclass(frozen=True)
class CutSolution:
    bits: np.ndarray
    value: float


def generate_regular(n: int, degree: int, seed) -> Graph:
    """Random simple ``degree``-regular graph via the pairing model with rejection."""
    if degree < 0 or n <= degree:
        raise ValueError(f"need 0 <= degree < n, got n={n}, degree={degree}")
    if (n * degree) % 2:
        raise ValueError(f"n * degree must be even, got {n} * {degree}")
    rng = np.random.default_rng(seed)
    stubs = np.repeat(np.arange(n), degree)
    for _ in range(MAX_GENERATION_ATTEMPTS):
        pairs = rng.permutation(stubs).reshape(-1, 2)
        pairs.sort(axis=1)
        if np.any(pairs[:, 0] == pairs[:, 1]):
            continue
        keys = pairs[:, 0] * n + pairs[:, 1]
        if len(np.unique(keys)) != len(keys):
            continue
        return Graph.from_edges(n, [(int(u), int(v)) for u, v in pairs])
    raise RuntimeError(
        f"no simple {degree}-regular graph on {n} vertices after {MAX_GENERATION_ATTEMPTS} attempts"
    )


def assign_random_signs(g: Graph, seed) -> Graph:
    """Same topology with every weight replaced by an independent fair ±1."""
    rng = np.random.default_rng(seed)
    signs = 1 - 2 * rng.integers(0, 2, size=g.num_edges)
    return Graph(g.n, tuple((u, v, float(s)) for (u, v, _), s in zip(g.edges, signs)))


def cut_value(g: Graph, bits) -> float:
    bits = np.asarray(bits)
    if bits.shape != (g.n,):
        raise ValueError(f"expected {g.n} bits, got shape {bits.shape}")
    u, v, w = g.edge_arrays()
    return float(np.sum(w[bits[u] != bits[v]]))


def _csr(g: Graph):
    adj = [[] for _ in range(g.n)]
    for u, v, w in g.edges:
        adj[u].append((v, w))
        adj[v].append((u, w))
    ptr = np.zeros(g.n + 1, dtype=np.int64)
    for i, row in enumerate(adj):
        ptr[i + 1] = ptr[i] + len(row)
    idx = np.array([j for row in adj for j, _ in row], dtype=np.int64)
    wts = np.array([w for row in adj for _, w in row], dtype=np.float64)
    return ptr, idx, wts


@njit(cache=True)
def _gray_code_search(n, ptr, idx, wts):
    # Vertex 0 stays on side 0. Gray bit t drives vertex n-1-t so that the
    # integer key (vertex i at bit n-1-i) orders bit vectors lexicographically.
    bits = np.zeros(n, dtype=np.int8)
    cur = 0.0
    best = 0.0
    key = 0
    best_key = 0
    for step in range(1, 1 << (n - 1)):
        t = 0
        while (step >> t) & 1 == 0:
            t += 1
        vtx = n - 1 - t
        delta = 0.0
        for k in range(ptr[vtx], ptr[vtx + 1]):
            if bits[idx[k]] == bits[vtx]:
                delta += wts[k]
            else:
                delta -= wts[k]
        cur += delta
        bits[vtx] ^= 1
        key ^= 1 << t
        if cur > best + 1e-9 or (cur >= best - 1e-9 and key < best_key):
            best = cur
            best_key = key
    return best_key


def brute_force_max_cut(g: Graph) -> CutSolution:
    """Exact MaxCut by Gray-code enumeration with incremental cut updates.

    Vertex 0 is pinned to side 0; among maximizers the lexicographically
    smallest bit vector is returned.
    """
    if g.n > MAX_ORACLE_VERTICES:
        raise ValueError(f"oracle limited to n <= {MAX_ORACLE_VERTICES}, got {g.n}")
    if g.n == 1:
        return CutSolution(np.zeros(1, dtype=np.int8), 0.0)
    ptr, idx, wts = _csr(g)
    key = _gray_code_search(g.n, ptr, idx, wts)
    bits = np.array([(key >> (g.n - 1 - i)) & 1 for i in range(g.n)], dtype=np.int8)
    return CutSolution(bits, cut_value(g, bits))


def greedy_color(g: Graph) -> np.ndarray:
    """Proper coloring: descending degree (ties by index), smallest free color."""
    deg = g.degrees()
    adj = g.neighbors()
    colors = np.full(g.n, -1, dtype=np.int64)
    for v in sorted(range(g.n), key=lambda i: (-deg[i], i)):
        used = {colors[u] for u in adj[v] if colors[u] >= 0}
        c = 0
        while c in used:
            c += 1
        colors[v] = c
    return colors


def is_proper_coloring(g: Graph, colors) -> bool:
    colors = np.asarray(colors)
    return colors.shape == (g.n,) and all(colors[u] != colors[v] for u, v, _ in g.edges)


def _format_weight(w: float) -> str:
    return str(int(w)) if float(w).is_integer() else repr(float(w))


def write_graph(path, g: Graph) -> None:
    lines = [f"{g.n} {g.num_edges}"]
    lines += [f"{u} {v} {_format_weight(w)}" for u, v, w in g.edges]
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_graph(path: str | os.PathLike) -> Graph:
    with open(path) as fh:
        rows = [line.split() for line in fh if line.strip()]
    if not rows or len(rows[0]) != 2:
        raise ValueError(f"{path}: header must be 'n m'")
    n, m = int(rows[0][0]), int(rows[0][1])
    body = rows[1:]
    if len(body) != m:
        raise ValueError(f"{path}: header declares {m} edges, found {len(body)}")
    edges = []
    for r in body:
        if len(r) not in (2, 3):
            raise ValueError(f"{path}: bad edge line {' '.join(r)!r}")
        edges.append((int(r[0]), int(r[1]), float(r[2]) if len(r) == 3 else 1.0))
    return Graph.from_edges(n, edges)
