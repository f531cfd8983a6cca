"""Vertex-colored undirected multigraphs: representation, constructors, file I/O.

Graphs are immutable after construction. Vertices are dense 0-based ints,
colors are dense ints starting at 0, parallel edges carry a multiplicity
in [1, 255] and self-loops are forbidden.
"""

from __future__ import annotations

import random
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .errors import GraphFormatError

MAX_MULTIPLICITY = 255

VertexSet = tuple  # sorted tuple of distinct vertex ids


def vertex_set(ids: Iterable[int], n: int) -> VertexSet:
    """Normalize an iterable of vertex ids into a sorted, validated VertexSet."""
    xs = sorted(int(v) for v in ids)
    for i, v in enumerate(xs):
        if v < 0 or v >= n:
            raise ValueError(f"vertex {v} out of range [0, {n})")
        if i and xs[i - 1] == v:
            raise ValueError(f"duplicate vertex {v} in vertex set")
    return tuple(xs)


class ColoredGraph:
    """Undirected multigraph with a vertex coloring.

    Adjacency is stored in CSR form (numpy arrays) so the refinement engine
    can run vectorized; python-level views are materialized lazily.
    """

    __slots__ = ("n", "m", "colors", "_indptr", "_nbr", "_mult",
                 "_adj", "_adj_dicts", "_nbr_masks", "_key", "_simple")

    def __init__(self, n, colors, indptr, nbr, mult, m):
        self.n = n
        self.m = m
        self.colors = colors
        self._indptr = indptr
        self._nbr = nbr
        self._mult = mult
        self._adj = None
        self._adj_dicts = None
        self._nbr_masks = None
        self._key = None
        self._simple = None

    # -- construction ------------------------------------------------------

    @classmethod
    def from_edges(cls, n: int, edges: Iterable, colors: Sequence[int] | None = None) -> "ColoredGraph":
        """Build a graph from undirected edges (u, v) or (u, v, mult), each listed once."""
        if n < 0:
            raise GraphFormatError("vertex count must be >= 0")
        norm = {}
        for e in edges:
            if len(e) == 2:
                u, v, w = e[0], e[1], 1
            else:
                u, v, w = e
            u, v, w = int(u), int(v), int(w)
            if u == v:
                raise GraphFormatError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphFormatError(f"edge ({u},{v}) out of range [0, {n})")
            if not (1 <= w <= MAX_MULTIPLICITY):
                raise GraphFormatError(f"multiplicity {w} outside [1, {MAX_MULTIPLICITY}]")
            if u > v:
                u, v = v, u
            if (u, v) in norm:
                raise GraphFormatError(f"edge ({u},{v}) listed more than once")
            norm[(u, v)] = w
        return cls._from_normalized(n, norm, colors)

    @classmethod
    def _from_normalized(cls, n, norm, colors):
        colors = _check_colors(n, colors)
        m = len(norm)
        deg = np.zeros(n + 1, dtype=np.int64)
        us = np.fromiter((e[0] for e in norm), dtype=np.int64, count=m)
        vs = np.fromiter((e[1] for e in norm), dtype=np.int64, count=m)
        ws = np.fromiter(norm.values(), dtype=np.int64, count=m)
        np.add.at(deg, us + 1, 1)
        np.add.at(deg, vs + 1, 1)
        indptr = np.cumsum(deg)
        nbr = np.empty(2 * m, dtype=np.int64)
        mult = np.empty(2 * m, dtype=np.int64)
        pos = indptr[:-1].copy()
        for u, v, w in zip(us, vs, ws):
            nbr[pos[u]] = v
            mult[pos[u]] = w
            pos[u] += 1
            nbr[pos[v]] = u
            mult[pos[v]] = w
            pos[v] += 1
        # sort each adjacency row by neighbor id for a canonical layout
        for u in range(n):
            a, b = indptr[u], indptr[u + 1]
            if b - a > 1:
                order = np.argsort(nbr[a:b], kind="stable")
                nbr[a:b] = nbr[a:b][order]
                mult[a:b] = mult[a:b][order]
        return cls(n, colors, indptr, nbr, mult, m)

    @classmethod
    def _from_arrays(cls, n, us, vs, ws, colors):
        """Trusted bulk constructor: us < vs, no duplicates, mults in range."""
        colors = _check_colors(n, colors)
        m = len(us)
        deg = np.zeros(n + 1, dtype=np.int64)
        np.add.at(deg, us + 1, 1)
        np.add.at(deg, vs + 1, 1)
        indptr = np.cumsum(deg)
        half = np.concatenate([us, vs])
        other = np.concatenate([vs, us])
        wboth = np.concatenate([ws, ws])
        order = np.lexsort((other, half))
        return cls(n, colors, indptr, other[order], wboth[order], m)

    # -- views -------------------------------------------------------------

    @property
    def adj(self):
        """Per-vertex tuple of (neighbor, multiplicity) pairs sorted by neighbor."""
        if self._adj is None:
            ip, nb, mu = self._indptr, self._nbr, self._mult
            nbl = nb.tolist()
            mul = mu.tolist()
            self._adj = tuple(
                tuple(zip(nbl[ip[u]:ip[u + 1]], mul[ip[u]:ip[u + 1]]))
                for u in range(self.n)
            )
        return self._adj

    @property
    def adj_dicts(self):
        """Per-vertex dict neighbor -> multiplicity (0 means non-adjacent)."""
        if self._adj_dicts is None:
            self._adj_dicts = tuple(dict(row) for row in self.adj)
        return self._adj_dicts

    @property
    def nbr_masks(self):
        """Per-vertex neighbor bitmasks; only meaningful for simple graphs with n <= 512."""
        if self._nbr_masks is None:
            masks = []
            for row in self.adj:
                m = 0
                for v, _ in row:
                    m |= 1 << v
                masks.append(m)
            self._nbr_masks = tuple(masks)
        return self._nbr_masks

    def csr(self):
        return self._indptr, self._nbr, self._mult

    def edges(self):
        """Iterate undirected edges as (u, v, mult) with u < v."""
        ip, nb, mu = self._indptr, self._nbr, self._mult
        for u in range(self.n):
            for i in range(ip[u], ip[u + 1]):
                v = int(nb[i])
                if u < v:
                    yield u, v, int(mu[i])

    def degree(self, u: int, weighted: bool = True) -> int:
        a, b = self._indptr[u], self._indptr[u + 1]
        if weighted:
            return int(self._mult[a:b].sum())
        return int(b - a)

    def multiplicity(self, u: int, v: int) -> int:
        return self.adj_dicts[u].get(v, 0)

    @property
    def is_simple(self) -> bool:
        if self._simple is None:
            self._simple = bool((self._mult == 1).all()) if len(self._mult) else True
        return self._simple

    @property
    def color_count(self) -> int:
        return (max(self.colors) + 1) if self.colors else 0

    def with_colors(self, colors: Sequence[int]) -> "ColoredGraph":
        """Same adjacency structure under a different coloring."""
        colors = _check_colors(self.n, colors)
        return ColoredGraph(self.n, colors, self._indptr, self._nbr, self._mult, self.m)

    def relabel(self, perm: Sequence[int]) -> "ColoredGraph":
        """Apply a permutation: vertex v of self becomes perm[v] in the result."""
        n = self.n
        if sorted(perm) != list(range(n)):
            raise ValueError("not a permutation")
        colors = [0] * n
        for v in range(n):
            colors[perm[v]] = self.colors[v]
        edges = [(perm[u], perm[v], w) for u, v, w in self.edges()]
        return ColoredGraph.from_edges(n, edges, colors)

    # -- equality / hashing -------------------------------------------------

    def _cache_key(self):
        if self._key is None:
            self._key = (self.n, self.colors, self._indptr.tobytes(),
                         self._nbr.tobytes(), self._mult.tobytes())
        return self._key

    def __eq__(self, other):
        if not isinstance(other, ColoredGraph):
            return NotImplemented
        return self._cache_key() == other._cache_key()

    def __hash__(self):
        return hash(self._cache_key())

    def __repr__(self):
        return f"ColoredGraph(n={self.n}, m={self.m}, colors={self.color_count})"


def _check_colors(n, colors):
    if colors is None:
        return (0,) * n
    colors = tuple(int(c) for c in colors)
    if len(colors) != n:
        raise GraphFormatError(f"expected {n} colors, got {len(colors)}")
    if n == 0:
        return colors
    used = set(colors)
    if min(used) < 0 or used != set(range(max(used) + 1)):
        raise GraphFormatError(f"colors must form a contiguous range 0..c-1, got {sorted(used)}")
    return colors


# -- file format -------------------------------------------------------------


def load(text: str) -> ColoredGraph:
    """Parse the line-oriented graph format.

    `p cgraph <n> <m>` header, optional `c <v> <color>` lines, `e <u> <v> [mult]`
    lines (each undirected edge once), `#` starts a comment.
    """
    n = None
    m_declared = 0
    colors = {}
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] == "p":
                if n is not None:
                    raise GraphFormatError(f"line {lineno}: duplicate header")
                if len(parts) != 4 or parts[1] != "cgraph":
                    raise GraphFormatError(f"line {lineno}: expected 'p cgraph <n> <m>'")
                n, m_declared = int(parts[2]), int(parts[3])
            elif parts[0] == "c":
                if n is None:
                    raise GraphFormatError(f"line {lineno}: color line before header")
                if len(parts) != 3:
                    raise GraphFormatError(f"line {lineno}: expected 'c <v> <color>'")
                v, col = int(parts[1]), int(parts[2])
                if not 0 <= v < n:
                    raise GraphFormatError(f"line {lineno}: vertex {v} out of range")
                if v in colors:
                    raise GraphFormatError(f"line {lineno}: duplicate color for vertex {v}")
                if col < 0:
                    raise GraphFormatError(f"line {lineno}: negative color")
                colors[v] = col
            elif parts[0] == "e":
                if n is None:
                    raise GraphFormatError(f"line {lineno}: edge line before header")
                if len(parts) not in (3, 4):
                    raise GraphFormatError(f"line {lineno}: expected 'e <u> <v> [mult]'")
                u, v = int(parts[1]), int(parts[2])
                w = int(parts[3]) if len(parts) == 4 else 1
                edges.append((lineno, u, v, w))
            else:
                raise GraphFormatError(f"line {lineno}: unknown directive {parts[0]!r}")
        except ValueError as exc:
            if isinstance(exc, GraphFormatError):
                raise
            raise GraphFormatError(f"line {lineno}: bad integer in {line!r}") from exc
    if n is None:
        raise GraphFormatError("missing 'p cgraph' header")
    if len(edges) != m_declared:
        raise GraphFormatError(f"header declares {m_declared} edges, found {len(edges)}")
    seen = set()
    plain = []
    for lineno, u, v, w in edges:
        if u == v:
            raise GraphFormatError(f"line {lineno}: self-loop at vertex {u}")
        if not (0 <= u < n and 0 <= v < n):
            raise GraphFormatError(f"line {lineno}: edge ({u},{v}) out of range")
        if not 1 <= w <= MAX_MULTIPLICITY:
            raise GraphFormatError(f"line {lineno}: multiplicity {w} outside [1, {MAX_MULTIPLICITY}]")
        key = (u, v) if u < v else (v, u)
        if key in seen:
            raise GraphFormatError(f"line {lineno}: edge ({u},{v}) listed more than once")
        seen.add(key)
        plain.append((u, v, w))
    color_list = [colors.get(v, 0) for v in range(n)]
    return ColoredGraph.from_edges(n, plain, color_list)


def save(g: ColoredGraph) -> str:
    """Serialize in canonical layout; load(save(g)) == g and save is idempotent."""
    out = [f"p cgraph {g.n} {g.m}"]
    for v in range(g.n):
        if g.colors[v] != 0:
            out.append(f"c {v} {g.colors[v]}")
    for u, v, w in g.edges():
        out.append(f"e {u} {v}" if w == 1 else f"e {u} {v} {w}")
    return "\n".join(out) + "\n"


# -- combinators --------------------------------------------------------------


def disjoint_union(g: ColoredGraph, h: ColoredGraph) -> ColoredGraph:
    """Vertex-disjoint union; h's vertices are shifted by g.n, color space is shared."""
    shift = g.n
    edges = list(g.edges()) + [(u + shift, v + shift, w) for u, v, w in h.edges()]
    colors = list(g.colors) + list(h.colors)
    if colors:
        # both inputs have contiguous colors, so the union does too
        pass
    return ColoredGraph.from_edges(g.n + h.n, edges, colors or None)


def complement(g: ColoredGraph) -> ColoredGraph:
    """Simple-graph complement; colors preserved."""
    if not g.is_simple:
        raise ValueError("complement is defined for simple graphs only")
    present = {(u, v) for u, v, _ in g.edges()}
    edges = [(u, v) for u, v in combinations(range(g.n), 2) if (u, v) not in present]
    return ColoredGraph.from_edges(g.n, edges, g.colors)


def _densify_colors(colors):
    remap = {c: i for i, c in enumerate(sorted(set(colors)))}
    return [remap[c] for c in colors]


def induced(g: ColoredGraph, x: Iterable[int]) -> tuple[ColoredGraph, VertexSet]:
    """Induced subgraph G[X] with densely remapped ids; returns (graph, old-id map)."""
    xs = vertex_set(x, g.n)
    pos = {v: i for i, v in enumerate(xs)}
    edges = []
    for v in xs:
        for u, w in g.adj[v]:
            if u in pos and v < u:
                edges.append((pos[v], pos[u], w))
    colors = _densify_colors([g.colors[v] for v in xs])
    return ColoredGraph.from_edges(len(xs), edges, colors or None), xs


def bipartite_induced(g: ColoredGraph, x: Iterable[int], y: Iterable[int]) -> tuple[ColoredGraph, VertexSet]:
    """The bipartite graph G[X, Y]: only edges between X and Y are kept."""
    xs, ys, pos = _bipartite_parts(g, x, y)
    edges = []
    for v in xs:
        for u, w in g.adj[v]:
            if u in pos and pos[u] >= len(xs):
                edges.append((pos[v], pos[u], w))
    ids = xs + ys
    colors = _densify_colors([g.colors[v] for v in ids])
    return ColoredGraph.from_edges(len(ids), edges, colors or None), ids


def bipartite_complement(g: ColoredGraph, x: Iterable[int], y: Iterable[int]) -> tuple[ColoredGraph, VertexSet]:
    """Bipartite complement of G[X, Y]: cross pairs flipped, no within-part edges."""
    if not g.is_simple:
        raise ValueError("bipartite complement is defined for simple graphs only")
    xs, ys, pos = _bipartite_parts(g, x, y)
    k = len(xs)
    edges = []
    for v in xs:
        nbrs = {u for u, _ in g.adj[v]}
        for u in ys:
            if u not in nbrs:
                edges.append((pos[v], pos[u]))
    ids = xs + ys
    colors = _densify_colors([g.colors[v] for v in ids])
    return ColoredGraph.from_edges(k + len(ys), edges, colors or None), ids


def _bipartite_parts(g, x, y):
    xs = vertex_set(x, g.n)
    ys = vertex_set(y, g.n)
    if set(xs) & set(ys):
        raise ValueError("vertex sets overlap")
    pos = {v: i for i, v in enumerate(xs)}
    pos.update({v: len(xs) + i for i, v in enumerate(ys)})
    return xs, ys, pos


# -- standard graphs ----------------------------------------------------------


def empty_graph(n: int) -> ColoredGraph:
    return ColoredGraph.from_edges(n, [])


def complete(n: int) -> ColoredGraph:
    if n < 1:
        raise ValueError("complete graph needs n >= 1")
    return ColoredGraph.from_edges(n, list(combinations(range(n), 2)))


def complete_bipartite(s: int, t: int) -> ColoredGraph:
    if s < 1 or t < 1:
        raise ValueError("complete bipartite graph needs s, t >= 1")
    return ColoredGraph.from_edges(s + t, [(i, s + j) for i in range(s) for j in range(t)])


def cycle(n: int) -> ColoredGraph:
    if n < 3:
        raise ValueError("cycle needs n >= 3")
    return ColoredGraph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def path(n: int) -> ColoredGraph:
    if n < 1:
        raise ValueError("path needs n >= 1")
    return ColoredGraph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def matching(m: int) -> ColoredGraph:
    """mK2: m disjoint edges."""
    if m < 1:
        raise ValueError("matching needs m >= 1")
    return ColoredGraph.from_edges(2 * m, [(2 * i, 2 * i + 1) for i in range(m)])


def star_forest(s: int, t: int) -> ColoredGraph:
    """sK_{1,t}: s stars; centers come first (0..s-1), then the s*t leaves."""
    if s < 1 or t < 1:
        raise ValueError("star forest needs s, t >= 1")
    edges = [(i, s + i * t + j) for i in range(s) for j in range(t)]
    return ColoredGraph.from_edges(s + s * t, edges)


def johnson(n: int, k: int = 2) -> ColoredGraph:
    """Johnson graph J(n, k): k-subsets of [n], adjacent when they share k-1 elements."""
    if not 1 <= k <= n:
        raise ValueError("johnson needs 1 <= k <= n")
    verts = list(combinations(range(n), k))
    edges = [(i, j) for i, j in combinations(range(len(verts)), 2)
             if len(set(verts[i]) & set(verts[j])) == k - 1]
    return ColoredGraph.from_edges(len(verts), edges)


def petersen() -> ColoredGraph:
    """Kneser graph K(5,2): 2-subsets of [5], adjacent when disjoint."""
    verts = list(combinations(range(5), 2))
    edges = [(i, j) for i, j in combinations(range(len(verts)), 2)
             if not set(verts[i]) & set(verts[j])]
    return ColoredGraph.from_edges(10, edges)


def random_gnp(n: int, seed: int, p: float = 0.5) -> ColoredGraph:
    """Erdos-Renyi G(n, p) with a deterministic seed."""
    if n < 0 or not 0.0 <= p <= 1.0:
        raise ValueError("need n >= 0 and p in [0, 1]")
    rng = random.Random(seed)
    edges = [(u, v) for u, v in combinations(range(n), 2) if rng.random() < p]
    return ColoredGraph.from_edges(n, edges)


def random_gnm(n: int, m: int, seed: int) -> ColoredGraph:
    """Uniform random simple graph with exactly m edges (numpy-backed, bench scale)."""
    maxm = n * (n - 1) // 2
    if m > maxm:
        raise ValueError(f"too many edges: {m} > {maxm}")
    rng = np.random.default_rng(seed)
    seen = np.empty(0, dtype=np.int64)
    while len(seen) < m:
        need = int((m - len(seen)) * 1.2) + 16
        us = rng.integers(0, n, size=need, dtype=np.int64)
        vs = rng.integers(0, n, size=need, dtype=np.int64)
        keep = us != vs
        us, vs = us[keep], vs[keep]
        lo = np.minimum(us, vs)
        hi = np.maximum(us, vs)
        codes = lo * n + hi
        seen = np.unique(np.concatenate([seen, codes]))[: max(m, 0)]
        if len(seen) == maxm:
            break
    codes = seen[:m]
    us = codes // n
    vs = codes % n
    ws = np.ones(m, dtype=np.int64)
    return ColoredGraph._from_arrays(n, us, vs, ws, None)


_STANDARD = {
    "empty": (empty_graph, ("n",)),
    "complete": (complete, ("n",)),
    "complete_bipartite": (complete_bipartite, ("s", "t")),
    "cycle": (cycle, ("n",)),
    "path": (path, ("n",)),
    "matching": (matching, ("m",)),
    "star_forest": (star_forest, ("s", "t")),
    "johnson": (johnson, ("n", "k")),
    "petersen": (petersen, ()),
    "random_gnp": (random_gnp, ("n", "seed")),
}


def standard_graph(name: str, **params) -> ColoredGraph:
    """Dispatch constructor for standard graphs (K_n, K_{s,t}, C_n, sK_{1,t}, mK2, ...)."""
    if name not in _STANDARD:
        raise ValueError(f"unknown standard graph {name!r}; choices: {sorted(_STANDARD)}")
    fn, _ = _STANDARD[name]
    return fn(**params)
