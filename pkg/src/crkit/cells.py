"""Cell graph machinery: classify cells and cell pairs of an equitable
partition, and extract anisotropic components.

A cell is homogeneous when it induces an empty or complete graph and
heterogeneous otherwise; a pair is isotropic when the bipartite graph
between the cells is empty or complete and anisotropic otherwise.
Within an equitable partition the admissible structures are fully
determined by sizes and degrees, so classification needs no explicit
subgraph reconstruction.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .graphs import ColoredGraph, vertex_set
from .refinement import Partition, validate_partition


class CellKind(Enum):
    EMPTY = "empty"
    COMPLETE = "complete"
    MATCHING = "matching"
    CO_MATCHING = "co-matching"
    PENTAGONAL = "pentagonal"
    IRREGULAR = "irregular"


class PairKind(Enum):
    ISOTROPIC_EMPTY = "empty"
    ISOTROPIC_COMPLETE = "complete"
    CONSTELLATION = "constellation"
    CO_CONSTELLATION = "co-constellation"
    IRREGULAR = "irregular"


@dataclass(frozen=True)
class CellLabel:
    kind: CellKind
    size: int
    degree: int  # inner degree of every vertex in the cell

    @property
    def heterogeneous(self) -> bool:
        return self.kind not in (CellKind.EMPTY, CellKind.COMPLETE)


@dataclass(frozen=True)
class PairLabel:
    kind: PairKind
    d_xy: int  # neighbors in Y of each vertex of X
    d_yx: int  # neighbors in X of each vertex of Y
    s: int | None = None  # star count for (co-)constellations
    t: int | None = None  # leaves per star
    centers: int | None = None  # 0 = first cell is the center side, 1 = second

    @property
    def anisotropic(self) -> bool:
        return self.kind not in (PairKind.ISOTROPIC_EMPTY, PairKind.ISOTROPIC_COMPLETE)


ISOTROPIC_EMPTY = PairLabel(PairKind.ISOTROPIC_EMPTY, 0, 0)


def _cell_label(size: int, degree: int) -> CellLabel:
    if degree == 0:
        kind = CellKind.EMPTY
    elif degree == size - 1:
        kind = CellKind.COMPLETE
    elif degree == 1:
        kind = CellKind.MATCHING
    elif degree == size - 2:
        kind = CellKind.CO_MATCHING
    elif degree == 2 and size == 5:
        kind = CellKind.PENTAGONAL
    else:
        kind = CellKind.IRREGULAR
    return CellLabel(kind, size, degree)


def _pair_label(sx: int, sy: int, dxy: int, dyx: int) -> PairLabel:
    if dxy == 0:
        return PairLabel(PairKind.ISOTROPIC_EMPTY, 0, 0)
    if dxy == sy:
        return PairLabel(PairKind.ISOTROPIC_COMPLETE, dxy, dyx)
    if dyx == 1:
        return PairLabel(PairKind.CONSTELLATION, dxy, dyx, s=sx, t=dxy, centers=0)
    if dxy == 1:
        return PairLabel(PairKind.CONSTELLATION, dxy, dyx, s=sy, t=dyx, centers=1)
    if dyx == sx - 1:
        return PairLabel(PairKind.CO_CONSTELLATION, dxy, dyx, s=sx, t=sy - dxy, centers=0)
    if dxy == sy - 1:
        return PairLabel(PairKind.CO_CONSTELLATION, dxy, dyx, s=sy, t=sx - dyx, centers=1)
    return PairLabel(PairKind.IRREGULAR, dxy, dyx)


@dataclass(frozen=True)
class AnisotropicComponent:
    cells: tuple  # sorted cell ids
    edges: tuple  # anisotropic edges (i, j) with i < j inside the component

    @property
    def is_tree(self) -> bool:
        return len(self.edges) == len(self.cells) - 1


@dataclass
class CellGraphData:
    """Labeled cell graph of an equitable partition."""

    partition: Partition
    cell_labels: tuple
    pair_labels: dict  # (i, j) with i < j -> PairLabel, only pairs with edges
    components: tuple  # AnisotropicComponent covering every cell

    def pair_label(self, i: int, j: int) -> PairLabel:
        if i == j:
            raise ValueError("pair label needs two distinct cells")
        key = (i, j) if i < j else (j, i)
        return self.pair_labels.get(key, ISOTROPIC_EMPTY)

    @property
    def cell_count(self) -> int:
        return len(self.cell_labels)


def build(g: ColoredGraph, p: Partition) -> CellGraphData:
    """Label every cell and cell pair and compute anisotropic components.

    Rejects multigraphs and non-equitable partitions. Pairs never touched by
    an edge are isotropic-empty and are not stored explicitly.
    """
    if not g.is_simple:
        raise ValueError("cell graphs are defined for simple graphs only")
    validate_partition(g, p)
    class_of = p.class_of
    n = g.n
    counts = [None] * n
    adj = g.adj
    for v in range(n):
        c = class_of[v]
        for u, _m in adj[v]:
            d = counts[u]
            if d is None:
                d = counts[u] = {}
            d[c] = d.get(c, 0) + 1
    # equitability: within a cell, equal colors and equal count vectors
    for cid, cls in enumerate(p.classes):
        v0 = cls[0]
        ref = counts[v0] or {}
        col0 = g.colors[v0]
        for v in cls[1:]:
            if g.colors[v] != col0 or (counts[v] or {}) != ref:
                raise ValueError(f"partition is not equitable (cell {cid})")

    k = len(p.classes)
    sizes = [len(cls) for cls in p.classes]
    cell_labels = []
    pair_labels = {}
    for cid, cls in enumerate(p.classes):
        ref = counts[cls[0]] or {}
        cell_labels.append(_cell_label(sizes[cid], ref.get(cid, 0)))
        for other, dxy in ref.items():
            if other > cid:
                dyx = (counts[p.classes[other][0]] or {}).get(cid, 0)
                pair_labels[(cid, other)] = _pair_label(sizes[cid], sizes[other], dxy, dyx)

    components = _components(k, pair_labels)
    return CellGraphData(p, tuple(cell_labels), pair_labels, components)


def _components(k, pair_labels):
    nbrs = [[] for _ in range(k)]
    for (i, j), lab in pair_labels.items():
        if lab.anisotropic:
            nbrs[i].append(j)
            nbrs[j].append(i)
    seen = [False] * k
    comps = []
    for start in range(k):
        if seen[start]:
            continue
        stack = [start]
        seen[start] = True
        cells = []
        while stack:
            x = stack.pop()
            cells.append(x)
            for y in nbrs[x]:
                if not seen[y]:
                    seen[y] = True
                    stack.append(y)
        cells.sort()
        cellset = set(cells)
        edges = tuple(sorted((i, j) for (i, j), lab in pair_labels.items()
                             if lab.anisotropic and i in cellset))
        comps.append(AnisotropicComponent(tuple(cells), edges))
    return tuple(comps)


def classify_cell(g: ColoredGraph, x) -> CellLabel:
    """Label G[X] for a cell X of an equitable partition."""
    if not g.is_simple:
        raise ValueError("cell classification is defined for simple graphs only")
    xs = vertex_set(x, g.n)
    xset = set(xs)
    degs = {sum(1 for u, _ in g.adj[v] if u in xset) for v in xs}
    if len(degs) != 1:
        return CellLabel(CellKind.IRREGULAR, len(xs), -1)
    return _cell_label(len(xs), degs.pop())


def classify_pair(g: ColoredGraph, x, y) -> PairLabel:
    """Label G[X, Y] for two disjoint cells of an equitable partition."""
    if not g.is_simple:
        raise ValueError("cell classification is defined for simple graphs only")
    xs = vertex_set(x, g.n)
    ys = vertex_set(y, g.n)
    if set(xs) & set(ys):
        raise ValueError("vertex sets overlap")
    yset = set(ys)
    xset = set(xs)
    dx = {sum(1 for u, _ in g.adj[v] if u in yset) for v in xs}
    dy = {sum(1 for u, _ in g.adj[v] if u in xset) for v in ys}
    if len(dx) != 1 or len(dy) != 1:
        return PairLabel(PairKind.IRREGULAR, -1, -1)
    return _pair_label(len(xs), len(ys), dx.pop(), dy.pop())


@dataclass(frozen=True)
class ComponentReport:
    cells: tuple
    edges: tuple
    is_tree: bool
    heterogeneous_cells: tuple
    min_cardinality_cells: tuple
    root: int
    monotone: bool | None  # None when the component is not a tree
    monotone_witness: tuple | None  # offending directed edge (parent, child)


def anisotropic_components(data: CellGraphData) -> tuple:
    """Per-component structure report: tree-ness, heterogeneous cells, minimum
    cells, and the size-monotonicity check from a minimum-cardinality root."""
    sizes = [lab.size for lab in data.cell_labels]
    reports = []
    for comp in data.components:
        het = tuple(c for c in comp.cells if data.cell_labels[c].heterogeneous)
        minsize = min(sizes[c] for c in comp.cells)
        mincells = tuple(c for c in comp.cells if sizes[c] == minsize)
        if len(het) == 1 and sizes[het[0]] == minsize:
            root = het[0]
        else:
            root = mincells[0]
        monotone = None
        witness = None
        if comp.is_tree:
            monotone, witness = _check_monotone(comp, sizes, root)
        reports.append(ComponentReport(comp.cells, comp.edges, comp.is_tree,
                                       het, mincells, root, monotone, witness))
    return tuple(reports)


def _check_monotone(comp, sizes, root):
    nbrs = {c: [] for c in comp.cells}
    for i, j in comp.edges:
        nbrs[i].append(j)
        nbrs[j].append(i)
    seen = {root}
    queue = [root]
    while queue:
        x = queue.pop()
        for y in nbrs[x]:
            if y in seen:
                continue
            if sizes[x] > sizes[y]:
                return False, (x, y)
            seen.add(y)
            queue.append(y)
    return True, None
