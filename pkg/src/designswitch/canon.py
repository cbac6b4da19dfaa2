"""Individualization-refinement canonical labeling for vertex-colored graphs.

A small nauty-style engine: equitable (color-degree) refinement, a search
tree over individualized vertices, trace-based pruning against the best leaf,
and automorphism pruning with an exact group order from the orbits seen along
the first path.  Domain modules reduce designs and Hadamard matrices to
:class:`ColoredGraph` and optionally supply a vertex invariant that is mixed
into the root partition.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

VertexInvariant = Callable[[np.ndarray, np.ndarray], np.ndarray]


@dataclass(frozen=True)
class ColoredGraph:
    """Simple undirected graph with an ordered vertex coloring.

    ``colors[u]`` is any integer; isomorphisms must map each color class onto
    the class with the same label.
    """

    adjacency: np.ndarray
    colors: np.ndarray

    def __post_init__(self) -> None:
        adj = np.asarray(self.adjacency, dtype=np.uint8)
        col = np.asarray(self.colors, dtype=np.int64)
        n = adj.shape[0]
        if adj.shape != (n, n):
            raise ValueError("adjacency must be square")
        if col.shape != (n,):
            raise ValueError("one color per vertex required")
        if not np.array_equal(adj, adj.T):
            raise ValueError("adjacency must be symmetric")
        if n and adj.diagonal().any():
            raise ValueError("loops are not allowed")
        adj.setflags(write=False)
        col.setflags(write=False)
        object.__setattr__(self, "adjacency", adj)
        object.__setattr__(self, "colors", col)

    @property
    def n(self) -> int:
        return self.adjacency.shape[0]

    def relabel(self, perm: np.ndarray) -> "ColoredGraph":
        """Graph with vertex ``u`` renamed ``perm[u]``."""
        perm = np.asarray(perm)
        inv = np.empty_like(perm)
        inv[perm] = np.arange(len(perm))
        return ColoredGraph(self.adjacency[np.ix_(inv, inv)], self.colors[inv])


@dataclass
class CanonResult:
    """Outcome of :func:`canonical_form`.

    ``labeling[i]`` is the original vertex placed at canonical position ``i``.
    """

    form: bytes
    labeling: np.ndarray
    group_order: int
    generators: list[np.ndarray] = field(default_factory=list)
    nodes: int = 0


def _compress(keys: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    if keys.ndim == 1:
        uniq, inv = np.unique(keys, return_inverse=True)
    else:
        uniq, inv = np.unique(keys, axis=0, return_inverse=True)
    return uniq, inv.reshape(-1).astype(np.int64)


# Per-color hash weights below 2**40: neighbour sums of up to 2**12 terms stay
# exact in float64.
_WEIGHTS = np.random.default_rng(0x5EED).integers(1, 2**40, size=1 << 16).astype(np.float64)


def refine(adj: np.ndarray, colors: np.ndarray) -> tuple[np.ndarray, bytes]:
    """Equitable refinement of ``colors`` by hashed neighbour-color multisets.

    ``colors`` must already be dense (0..c-1) and ``adj`` float64.  Each
    round a vertex is keyed by (old color, sum of fixed weights of its
    neighbours' colors); new cells are numbered in sorted key order, so both
    the result and the returned trace depend only on the graph, never on the
    vertex labels.  A hash collision can only make the partition coarser.
    """
    n = len(colors)
    c = int(colors.max()) + 1 if n else 0
    while True:
        sig = adj @ _WEIGHTS[colors]
        order = np.lexsort((sig, colors))
        key_c, key_s = colors[order], sig[order]
        step = np.empty(n, dtype=bool)
        step[0] = True
        step[1:] = (key_c[1:] != key_c[:-1]) | (key_s[1:] != key_s[:-1])
        new = np.empty(n, dtype=np.int64)
        new[order] = np.cumsum(step) - 1
        c_new = int(new[order[-1]]) + 1
        if c_new == c:
            sizes = np.bincount(colors, minlength=c)
            return colors, sizes.tobytes() + key_s[step].tobytes()
        colors, c = new, c_new


def _individualize(colors: np.ndarray, v: int) -> np.ndarray:
    out = 2 * colors
    out[colors == colors[v]] += 1
    out[v] -= 1
    return _compress(out)[1]


def _target_cell(colors: np.ndarray) -> Optional[np.ndarray]:
    sizes = np.bincount(colors)
    if sizes.max() <= 1:
        return None
    # first cell of maximal size
    return np.flatnonzero(colors == int(np.argmax(sizes)))


class _Orbits:
    """Union-find over vertices for the group generated by some permutations."""

    def __init__(self, n: int, gens: list[np.ndarray]):
        self.parent = list(range(n))
        for g in gens:
            for u, w in enumerate(g.tolist()):
                if u != w:
                    self._union(u, w)

    def find(self, u: int) -> int:
        p = self.parent
        while p[u] != u:
            p[u] = p[p[u]]
            u = p[u]
        return u

    def _union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if ra < rb:
                self.parent[rb] = ra
            else:
                self.parent[ra] = rb


class _Search:
    def __init__(self, graph: ColoredGraph, invariant: Optional[VertexInvariant]):
        self.n = graph.n
        self.adj = graph.adjacency
        self.adjf = graph.adjacency.astype(np.float64)
        self.invariant = invariant
        self.root_colors = graph.colors
        self.generators: list[np.ndarray] = []
        self.first_path: list[int] = []
        self.first_traces: list[bytes] = []
        self.first_perm: Optional[np.ndarray] = None
        self.first_form: Optional[bytes] = None
        self.best_path: list[int] = []
        self.best_traces: list[bytes] = []
        self.best_perm: Optional[np.ndarray] = None
        self.best_form: Optional[bytes] = None
        self.group_order = 1
        self.nodes = 0

    def _leaf_form(self, colors: np.ndarray) -> tuple[np.ndarray, bytes]:
        perm = np.argsort(colors, kind="stable")
        sub = self.adj[np.ix_(perm, perm)]
        head = self.root_colors[perm].astype(np.int64).tobytes()
        return perm, head + np.packbits(sub, axis=None).tobytes()

    def _add_automorphism(self, src: np.ndarray, dst: np.ndarray) -> None:
        gamma = np.empty(self.n, dtype=np.int64)
        gamma[src] = dst
        if np.array_equal(gamma, np.arange(self.n)):
            return
        self.generators.append(gamma)

    def _stabilizer_gens(self, path: list[int]) -> list[np.ndarray]:
        if not path:
            return self.generators
        p = np.asarray(path)
        return [g for g in self.generators if np.array_equal(g[p], p)]

    def run(self) -> CanonResult:
        _, start = _compress(self.root_colors)
        if self.invariant is not None and self.n:
            inv = np.asarray(self.invariant(self.adj, start))
            if inv.ndim == 1:
                inv = inv[:, None]
            _, start = _compress(np.column_stack([start, inv]))
        colors, trace = refine(self.adjf, start) if self.n else (start, b"")
        self._dfs(colors, [], [trace], on_first=True, best_cmp=0)
        if self.best_perm is None:
            self.best_perm = np.arange(self.n)
            self.best_form = b""
        return CanonResult(
            form=self.best_form,
            labeling=self.best_perm,
            group_order=self.group_order,
            generators=self.generators,
            nodes=self.nodes,
        )

    def _leaf(self, colors, path, traces, on_first, best_cmp) -> Optional[int]:
        perm, form = self._leaf_form(colors)
        if self.first_perm is None:
            self.first_path, self.first_traces = list(path), list(traces)
            self.first_perm, self.first_form = perm, form
            self.best_path, self.best_traces = list(path), list(traces)
            self.best_perm, self.best_form = perm, form
            return None
        if on_first and form == self.first_form:
            self._add_automorphism(self.first_perm, perm)
            return _common_prefix(path, self.first_path)
        if best_cmp < 0:
            return None
        if best_cmp > 0 or form > self.best_form:
            self.best_path, self.best_traces = list(path), list(traces)
            self.best_perm, self.best_form = perm, form
            return None
        if form == self.best_form:
            self._add_automorphism(self.best_perm, perm)
            return _common_prefix(path, self.best_path)
        return None

    def _dfs(self, colors, path, traces, on_first, best_cmp) -> Optional[int]:
        self.nodes += 1
        level = len(path)
        cell = _target_cell(colors)
        if cell is None:
            return self._leaf(colors, path, traces, on_first, best_cmp)
        on_first_path = self.first_perm is None
        explored: list[int] = []
        orbits, ngens = None, -1
        for v in cell.tolist():
            if explored:
                if len(self.generators) != ngens:
                    ngens = len(self.generators)
                    orbits = _Orbits(self.n, self._stabilizer_gens(path))
                rv = orbits.find(v)
                if any(orbits.find(u) == rv for u in explored):
                    continue
            explored.append(v)
            child, trace = refine(self.adjf, _individualize(colors, v))
            child_first = (
                on_first and self.first_perm is not None
                and level + 1 < len(self.first_traces)
                and trace == self.first_traces[level + 1]
            )
            if self.first_perm is None:
                child_first = True
            if self.best_path[:level] == path and self.best_perm is not None:
                best_cmp = 0
            child_cmp = best_cmp
            if best_cmp == 0 and self.best_perm is not None:
                if level + 1 >= len(self.best_traces):
                    child_cmp = 1
                else:
                    ref = self.best_traces[level + 1]
                    child_cmp = (trace > ref) - (trace < ref)
            if child_cmp < 0 and not child_first:
                continue
            jump = self._dfs(child, path + [v], traces + [trace], child_first, child_cmp)
            if jump is not None and jump < level:
                return jump
        if on_first_path:
            # this node lies on the first path: its orbit closes here
            orbits = _Orbits(self.n, self._stabilizer_gens(path))
            root = orbits.find(self.first_path[level])
            self.group_order *= sum(1 for u in cell.tolist() if orbits.find(u) == root)
        return None


def _common_prefix(a: list[int], b: list[int]) -> int:
    i = 0
    for x, y in zip(a, b):
        if x != y:
            break
        i += 1
    return i


def canonical_form(
    graph: ColoredGraph, invariant: Optional[VertexInvariant] = None
) -> CanonResult:
    """Canonical labeling, canonical adjacency bytes and |Aut| of ``graph``.

    Two colored graphs get identical ``form`` bytes (together with their color
    class sizes) iff they are isomorphic by a color-preserving bijection.
    ``invariant`` must be a labeling-invariant function of
    (adjacency, dense colors) returning one integer row per vertex.
    """
    if graph.n > 1 << 12:
        raise ValueError("canonical_form handles at most 4096 vertices")
    return _Search(graph, invariant).run()
