"""Cyclic decomposition of balanced weighted digraphs and Birkhoff splitting.

A weighted digraph decomposes into cycles exactly when in-weight equals
out-weight at every vertex.  The construction is greedy: seed a walk at a
globally minimal edge, extend (every vertex entered has positive out-weight
by balance), cut at the first repeated vertex and subtract the cycle's
minimal weight.  Each round deletes at least one edge, so the number of
terms never exceeds the edge count.

Bistochastic weight matrices additionally split into permutation matrices:
repeatedly extract a perfect matching of the positive support and subtract
its minimal entry.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .errors import (
    EmptyGraph,
    NoPerfectMatching,
    NotBalanced,
    NotBistochastic,
)
from .ratio import ONE, ZERO, Rat, to_rat


@dataclass(frozen=True)
class GraphCycle:
    """Closed sequence of distinct vertices, canonically rotated.

    The rotation placing the least vertex first makes equality independent
    of the starting point.  A single-vertex cycle stands for a self-loop
    and only appears in bistochastic contexts.
    """

    vertices: tuple

    def __post_init__(self):
        vs = tuple(self.vertices)
        if not vs:
            raise ValueError("cycle must be nonempty")
        if len(set(vs)) != len(vs):
            raise ValueError("cycle vertices must be distinct")
        pivot = vs.index(min(vs))
        object.__setattr__(self, "vertices", vs[pivot:] + vs[:pivot])

    def __len__(self):
        return len(self.vertices)

    def edges(self):
        n = len(self.vertices)
        return [(self.vertices[i], self.vertices[(i + 1) % n]) for i in range(n)]


@dataclass
class WeightedDigraph:
    """Vertex set plus a positive rational weight per oriented edge."""

    vertices: tuple
    weights: dict
    allow_self_loops: bool = False

    def __post_init__(self):
        self.vertices = tuple(sorted(set(self.vertices)))
        vset = set(self.vertices)
        cleaned = {}
        for (u, v), w in self.weights.items():
            if u not in vset or v not in vset:
                raise ValueError(f"edge ({u}, {v}) uses unknown vertex")
            if u == v and not self.allow_self_loops:
                raise ValueError(f"self-loop at {u} not allowed")
            w = to_rat(w)
            if w < 0:
                raise ValueError(f"negative weight on ({u}, {v})")
            if w > 0:
                cleaned[(u, v)] = w
        self.weights = cleaned

    @classmethod
    def from_edges(cls, edge_weights, vertices=(), allow_self_loops=False):
        weights = {}
        vs = set(vertices)
        for u, v, w in edge_weights:
            if (u, v) in weights:
                raise ValueError(f"duplicate edge ({u}, {v})")
            weights[(u, v)] = w
            vs.add(u)
            vs.add(v)
        return cls(tuple(vs), weights, allow_self_loops)

    def weight(self, u, v) -> Rat:
        return self.weights.get((u, v), ZERO)

    def edges(self):
        return sorted(self.weights)

    def out_weight(self, u) -> Rat:
        return sum((w for (a, _), w in self.weights.items() if a == u), ZERO)

    def in_weight(self, u) -> Rat:
        return sum((w for (_, b), w in self.weights.items() if b == u), ZERO)


@dataclass
class GraphDecomposition:
    """Cycle terms whose indicator weights sum back to the input exactly."""

    terms: list = field(default_factory=list)

    def reconstruct(self) -> dict:
        acc: dict = {}
        for cycle, weight in self.terms:
            for e in cycle.edges():
                acc[e] = acc.get(e, ZERO) + weight
        return {e: w for e, w in acc.items() if w != 0}

    def matches(self, g: WeightedDigraph) -> bool:
        return self.reconstruct() == g.weights


def is_balanced_graph(g: WeightedDigraph):
    """Exact in-weight vs out-weight comparison per vertex.

    Returns ``(verdict, violators)`` with the offending vertices sorted.
    """
    violators = [x for x in g.vertices if g.in_weight(x) != g.out_weight(x)]
    return not violators, violators


def _greedy_cycle(vertices, weights):
    if not weights:
        raise EmptyGraph("no positive-weight edges")
    m_star = min(weights.values())
    seed = min(e for e, w in weights.items() if w == m_star)

    out: dict = {}
    for (u, v), w in weights.items():
        out.setdefault(u, []).append((v, w))

    walk = [seed[0], seed[1]]
    seen = {seed[0]: 0, seed[1]: 1}
    while True:
        here = walk[-1]
        candidates = sorted(
            v for v, w in out.get(here, ()) if w >= m_star
        )
        if not candidates:
            raise NotBalanced(
                f"greedy walk stalled at {here}; graph is not balanced",
                violators=[here],
            )
        nxt = candidates[0]
        if nxt in seen:
            cycle = walk[seen[nxt]:]
            break
        seen[nxt] = len(walk)
        walk.append(nxt)

    cycle_obj = GraphCycle(tuple(cycle))
    m = min(weights[e] for e in cycle_obj.edges())
    return cycle_obj, m


def extract_min_cycle(g: WeightedDigraph):
    """Greedy cycle whose edges all weigh at least the global minimum.

    Seeds at the lexicographically least edge achieving the global minimum
    weight and always extends to the least admissible target, so the result
    is deterministic.  Returns the cycle and its minimal edge weight.
    """
    return _greedy_cycle(g.vertices, g.weights)


def decompose_graph(g: WeightedDigraph) -> GraphDecomposition:
    """Peel greedy cycles until no edge remains.

    Raises :class:`NotBalanced` (with the violating vertices) when no
    decomposition exists.  Successful output reconstructs the weights
    exactly with at most ``|E|`` terms.
    """
    ok, violators = is_balanced_graph(g)
    if not ok:
        raise NotBalanced("in-weight differs from out-weight", violators=violators)
    residual = dict(g.weights)
    terms = []
    while residual:
        cycle, m = _greedy_cycle(g.vertices, residual)
        for e in cycle.edges():
            residual[e] -= m
            if residual[e] == 0:
                del residual[e]
        terms.append((cycle, m))
    return GraphDecomposition(terms)


def is_bistochastic(g: WeightedDigraph) -> bool:
    """Every row and column of the weight matrix sums to exactly one."""
    for x in g.vertices:
        if g.out_weight(x) != ONE or g.in_weight(x) != ONE:
            return False
    return True


def _hopcroft_karp(rows, cols, adjacency):
    """Maximum bipartite matching; returns {row: col} pairs."""
    INF = float("inf")
    match_row = {r: None for r in rows}
    match_col = {c: None for c in cols}
    dist: dict = {}

    def bfs():
        queue = deque()
        for r in rows:
            if match_row[r] is None:
                dist[r] = 0
                queue.append(r)
            else:
                dist[r] = INF
        found = False
        while queue:
            r = queue.popleft()
            for c in adjacency[r]:
                nxt = match_col[c]
                if nxt is None:
                    found = True
                elif dist[nxt] == INF:
                    dist[nxt] = dist[r] + 1
                    queue.append(nxt)
        return found

    def dfs(r):
        for c in adjacency[r]:
            nxt = match_col[c]
            if nxt is None or (dist[nxt] == dist[r] + 1 and dfs(nxt)):
                match_row[r] = c
                match_col[c] = r
                return True
        dist[r] = INF
        return False

    while bfs():
        for r in rows:
            if match_row[r] is None:
                dfs(r)
    return {r: c for r, c in match_row.items() if c is not None}


def birkhoff_decompose(g: WeightedDigraph):
    """Split a bistochastic weight matrix into weighted permutations.

    Repeatedly extracts a perfect matching of the positive support
    (Hopcroft-Karp) and subtracts its minimal entry.  The weights sum to
    one and the number of terms is at most ``(n - 1)^2 + 1``.
    """
    if not is_bistochastic(g):
        raise NotBistochastic("row or column sums differ from 1")
    residual = dict(g.weights)
    terms = []
    while residual:
        adjacency = {r: [] for r in g.vertices}
        for (u, v) in sorted(residual):
            adjacency[u].append(v)
        matching = _hopcroft_karp(g.vertices, g.vertices, adjacency)
        if len(matching) != len(g.vertices):
            raise NoPerfectMatching(
                "no perfect matching on a bistochastic support; arithmetic bug"
            )
        m = min(residual[(u, v)] for u, v in matching.items())
        terms.append((dict(matching), m))
        for u, v in matching.items():
            residual[(u, v)] -= m
            if residual[(u, v)] == 0:
                del residual[(u, v)]
    return terms


def permutation_to_cycles(pi: dict):
    """Orbit decomposition of a permutation.

    Returns ``(cycles, fixed_points)``: vertex-disjoint cycles of length at
    least two, plus the fixed points reported separately.
    """
    domain = sorted(pi)
    if sorted(pi.values()) != domain:
        raise ValueError("mapping is not a permutation of its domain")
    seen = set()
    cycles = []
    fixed = []
    for start in domain:
        if start in seen:
            continue
        orbit = [start]
        seen.add(start)
        x = pi[start]
        while x != start:
            orbit.append(x)
            seen.add(x)
            x = pi[x]
        if len(orbit) == 1:
            fixed.append(start)
        else:
            cycles.append(GraphCycle(tuple(orbit)))
    return cycles, fixed


def birkhoff_graph_decomposition(g: WeightedDigraph) -> GraphDecomposition:
    """Birkhoff terms refined into disjoint cycles, merged per class.

    Fixed points become single-vertex cycles (self-loops), so the
    reconstruction reproduces the full bistochastic matrix.
    """
    acc: dict = {}
    for pi, weight in birkhoff_decompose(g):
        cycles, fixed = permutation_to_cycles(pi)
        for cycle in cycles:
            acc[cycle] = acc.get(cycle, ZERO) + weight
        for x in fixed:
            loop = GraphCycle((x,))
            acc[loop] = acc.get(loop, ZERO) + weight
    return GraphDecomposition(sorted(acc.items(), key=lambda t: t[0].vertices))
