"""Amenability: does color refinement distinguish this graph from every
non-isomorphic graph?

The recognizer checks the stable partition's cell graph: every cell must be
empty, complete, a matching, a co-matching, or the 5-cycle (A); every cell
pair empty, complete, a star forest, or its bipartite complement (B); and
every anisotropic component must be a tree with sizes non-decreasing away
from a minimum-cardinality root (G) containing at most one heterogeneous
cell, which then has minimum cardinality (H).

check_CDEF verifies the equivalent path/cycle formulation by explicit
enumeration, and amenable_bruteforce is the semantic oracle over all graphs
on the same vertices.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import cells as cells_mod
from . import maskcr, oracles
from .cells import CellGraphData, CellKind
from .errors import BudgetExceededError
from .graphs import ColoredGraph
from .refinement import cr_equivalent, stable_partition

DEFAULT_PATH_BUDGET = 1 << 20


@dataclass(frozen=True)
class Violation:
    condition: str  # one of "A".."H"
    cell_ids: tuple
    cells: tuple  # vertex tuples of the cells involved
    detail: str


@dataclass(frozen=True)
class AmenabilityVerdict:
    amenable: bool
    violation: Violation | None


def _violation(data: CellGraphData, condition, cell_ids, detail):
    cls = data.partition.classes
    return AmenabilityVerdict(False, Violation(condition, tuple(cell_ids),
                                               tuple(cls[c] for c in cell_ids), detail))


def _check_AB(data: CellGraphData):
    for cid, lab in enumerate(data.cell_labels):
        if lab.kind is CellKind.IRREGULAR:
            return _violation(data, "A", (cid,),
                              f"cell {cid} induces a {lab.degree}-regular graph on "
                              f"{lab.size} vertices outside the admissible list")
    for (i, j) in sorted(data.pair_labels):
        lab = data.pair_labels[(i, j)]
        if lab.kind is cells_mod.PairKind.IRREGULAR:
            return _violation(data, "B", (i, j),
                              f"pair ({i},{j}) is ({lab.d_xy},{lab.d_yx})-biregular but "
                              "not a star forest or its complement")
    return None


def _find_cycle(cells, edges):
    """A cycle in a connected component that is not a tree."""
    nbrs = {c: [] for c in cells}
    for i, j in edges:
        nbrs[i].append(j)
        nbrs[j].append(i)
    parent = {cells[0]: None}
    stack = [cells[0]]
    order = []
    while stack:
        x = stack.pop()
        order.append(x)
        for y in nbrs[x]:
            if y not in parent:
                parent[y] = x
                stack.append(y)
    tree = {(min(x, parent[x]), max(x, parent[x])) for x in parent if parent[x] is not None}
    for i, j in edges:
        if (min(i, j), max(i, j)) not in tree:
            path_i, path_j = [i], [j]
            seen = {i: 0}
            x = i
            while parent[x] is not None:
                x = parent[x]
                seen[x] = len(path_i)
                path_i.append(x)
            x = j
            while x not in seen:
                x = parent[x]
                path_j.append(x)
            return path_i[:seen[x] + 1] + path_j[::-1][:-1]
    raise AssertionError("component claimed non-tree but no extra edge found")


def is_amenable(g: ColoredGraph) -> AmenabilityVerdict:
    """Quasilinear amenability check (conditions A, B, G, H over the stable
    partition's cell graph); the first violation is reported as a witness."""
    if not g.is_simple:
        raise ValueError("amenability is defined for simple graphs")
    part, _ = stable_partition(g)
    data = cells_mod.build(g, part)
    bad = _check_AB(data)
    if bad is not None:
        return bad
    sizes = [lab.size for lab in data.cell_labels]
    for comp in data.components:
        if not comp.is_tree:
            cyc = _find_cycle(comp.cells, comp.edges)
            return _violation(data, "G", tuple(cyc),
                              "anisotropic component contains a cycle")
        het = [c for c in comp.cells if data.cell_labels[c].heterogeneous]
        minsize = min(sizes[c] for c in comp.cells)
        if len(het) > 1:
            return _violation(data, "H", tuple(het[:2]),
                              "anisotropic component has more than one heterogeneous cell")
        if het and sizes[het[0]] != minsize:
            return _violation(data, "H", (het[0],),
                              "heterogeneous cell does not have minimum cardinality "
                              "in its anisotropic component")
        root = het[0] if het else min(c for c in comp.cells if sizes[c] == minsize)
        ok, offending = cells_mod._check_monotone(comp, sizes, root)
        if not ok:
            return _violation(data, "G", offending,
                              f"size decreases along directed edge {offending} "
                              f"from root {root}")
    return AmenabilityVerdict(True, None)


def check_CDEF(g: ColoredGraph, budget: int = DEFAULT_PATH_BUDGET) -> AmenabilityVerdict:
    """Desk-scale cross-check: conditions A, B plus explicit enumeration of
    anisotropic paths and cycles for conditions C, D, E, F."""
    if not g.is_simple:
        raise ValueError("amenability is defined for simple graphs")
    part, _ = stable_partition(g)
    data = cells_mod.build(g, part)
    bad = _check_AB(data)
    if bad is not None:
        return bad

    k = data.cell_count
    sizes = [lab.size for lab in data.cell_labels]
    het = [lab.heterogeneous for lab in data.cell_labels]
    nbrs = [[] for _ in range(k)]
    for (i, j), lab in data.pair_labels.items():
        if lab.anisotropic:
            nbrs[i].append(j)
            nbrs[j].append(i)
    for row in nbrs:
        row.sort()

    states = 0

    def check_path(path):
        s0, s1 = sizes[path[0]], sizes[path[1]]
        mid_equal = all(sizes[c] == s1 for c in path[1:-1])
        last = sizes[path[-1]]
        if het[path[0]] and het[path[-1]] and s0 == s1 and mid_equal and last == s1:
            return _violation(data, "C", tuple(path),
                              "uniform anisotropic path connects two heterogeneous cells")
        if s0 < s1 and mid_equal and last == s1 and het[path[-1]]:
            return _violation(data, "F", tuple(path),
                              "anisotropic path grows from its first cell into a "
                              "uniform run ending at a heterogeneous cell")
        if len(path) >= 3 and s0 < s1 and mid_equal and last < s1:
            return _violation(data, "E", tuple(path),
                              "anisotropic path rises, stays level, then falls")
        return None

    def check_cycle(path):
        s0, s1 = sizes[path[0]], sizes[path[1]]
        rest_equal = all(sizes[c] == s1 for c in path[1:])
        if rest_equal and s0 == s1:
            return _violation(data, "D", tuple(path), "uniform anisotropic cycle")
        if rest_equal and s0 < s1:
            return _violation(data, "E", tuple(path),
                              "anisotropic cycle rises from its smallest cell "
                              "into a uniform run")
        return None

    def dfs(path, on_path):
        nonlocal states
        last = path[-1]
        for y in nbrs[last]:
            if y == path[0] and len(path) >= 3:
                bad = check_cycle(path)
                if bad is not None:
                    return bad
            if y in on_path:
                continue
            states += 1
            if states > budget:
                raise BudgetExceededError("anisotropic path enumeration exceeded budget")
            path.append(y)
            on_path.add(y)
            bad = check_path(path)
            if bad is None:
                bad = dfs(path, on_path)
            on_path.discard(y)
            path.pop()
            if bad is not None:
                return bad
        return None

    for start in range(k):
        bad = dfs([start], {start})
        if bad is not None:
            return bad
    return AmenabilityVerdict(True, None)


def amenable_bruteforce(g: ColoredGraph, n_budget: int = 7) -> bool:
    """Semantic oracle: True iff every graph on the same vertex set and
    coloring that refinement cannot distinguish from g is isomorphic to g.

    Enumerates all labeled simple graphs, keeps those with g's refinement
    signature, and tests each survivor for isomorphism (survivors that fail
    the exact joint refinement comparison are discarded)."""
    if g.n > n_budget:
        raise BudgetExceededError(f"brute-force amenability limited to {n_budget} vertices")
    if not g.is_simple:
        raise ValueError("amenability is defined for simple graphs")
    n = g.n
    colors = g.colors if any(g.colors) else None
    own_mask = maskcr.graph_to_mask(g)
    own_key = maskcr.signature_key(g)
    total = 1 << (n * (n - 1) // 2)
    chunk = 1 << 18
    for start in range(0, total, chunk):
        masks = np.arange(start, min(start + chunk, total), dtype=np.int64)
        keys = maskcr.batch_signature_keys(n, masks, colors)
        for mask, key in zip(masks.tolist(), keys):
            if key != own_key or mask == own_mask:
                continue
            h = maskcr.mask_to_graph(n, mask, colors)
            if oracles.isomorphic(g, h) is not None:
                continue
            if cr_equivalent(g, h):
                return False
    return True
