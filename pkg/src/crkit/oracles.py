"""Brute-force ground truth at desk scale: automorphism groups, isomorphism,
and membership tests for the refinable / Godsil / Tinhofer graph classes."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import BudgetExceededError
from .graphs import ColoredGraph, disjoint_union
from .refinement import stable_partition

_NODE_BUDGET = 1 << 22


@dataclass(frozen=True)
class AutGroup:
    """Complete list of color- and multiplicity-preserving automorphisms."""

    perms: tuple
    orbits: tuple

    @property
    def order(self) -> int:
        return len(self.perms)


def _orbits_of_perms(n, perms):
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for p in perms:
        for v in range(n):
            a, b = find(v), find(p[v])
            if a != b:
                parent[a] = b
    buckets = {}
    for v in range(n):
        buckets.setdefault(find(v), []).append(v)
    return tuple(tuple(sorted(b)) for b in sorted(buckets.values()))


class _SearchSpace:
    """Backtracking over class-respecting vertex maps between two graphs
    (or one graph against itself). Enumerates all maps or stops at the first."""

    def __init__(self, g, h, classes_g, classes_h, node_budget):
        self.g = g
        self.h = h
        self.node_budget = node_budget
        self.nodes = 0
        n = g.n
        self.n = n
        self.cand = [None] * n  # candidate targets per source vertex
        order = []
        for cg, ch in zip(classes_g, classes_h):
            for v in cg:
                self.cand[v] = ch
        for cg, _ in sorted(zip(classes_g, classes_h), key=lambda t: (len(t[0]), t[0])):
            order.extend(cg)
        self.order = order
        self.simple = g.is_simple and h.is_simple and n <= 512
        if self.simple:
            self.gmask = g.nbr_masks
            self.hmask = h.nbr_masks
        else:
            self.gadj = g.adj_dicts
            self.hadj = h.adj_dicts

    def run(self, first_only):
        self.results = []
        self.first_only = first_only
        n = self.n
        self.mapping = [-1] * n
        self.used = [False] * n
        if self.simple:
            self.img_mask = 0
            self.img_nbrs = [0] * n  # images of already-mapped neighbors
            self._rec_simple(0)
        else:
            self.mapped = []
            self._rec_multi(0)
        return self.results

    def _bump(self):
        self.nodes += 1
        if self.nodes > self.node_budget:
            raise BudgetExceededError("map search exceeded node budget")

    def _rec_simple(self, i):
        if i == self.n:
            self.results.append(tuple(self.mapping))
            return self.first_only
        v = self.order[i]
        want = self.img_nbrs[v]
        gm = self.gmask[v]
        for w in self.cand[v]:
            if self.used[w]:
                continue
            self._bump()
            if self.hmask[w] & self.img_mask != want:
                continue
            self.mapping[v] = w
            self.used[w] = True
            self.img_mask |= 1 << w
            changed = []
            bit = 1 << w
            for u, _ in self.g.adj[v]:
                if self.mapping[u] < 0:
                    self.img_nbrs[u] |= bit
                    changed.append(u)
            if self._rec_simple(i + 1):
                return True
            for u in changed:
                self.img_nbrs[u] &= ~bit
            self.img_mask &= ~bit
            self.used[w] = False
            self.mapping[v] = -1
        return False

    def _rec_multi(self, i):
        if i == self.n:
            self.results.append(tuple(self.mapping))
            return self.first_only
        v = self.order[i]
        gav = self.gadj[v]
        for w in self.cand[v]:
            if self.used[w]:
                continue
            self._bump()
            haw = self.hadj[w]
            ok = True
            for u in self.mapped:
                if gav.get(u, 0) != haw.get(self.mapping[u], 0):
                    ok = False
                    break
            if not ok:
                continue
            self.mapping[v] = w
            self.used[w] = True
            self.mapped.append(v)
            if self._rec_multi(i + 1):
                return True
            self.mapped.pop()
            self.used[w] = False
            self.mapping[v] = -1
        return False


def automorphisms(g: ColoredGraph, budget: int = 32, node_budget: int = _NODE_BUDGET) -> AutGroup:
    """Enumerate the full automorphism group together with its orbit partition."""
    if g.n > budget:
        raise BudgetExceededError(f"automorphism enumeration limited to {budget} vertices")
    part, _ = stable_partition(g)
    classes = [list(c) for c in part.classes]
    space = _SearchSpace(g, g, classes, classes, node_budget)
    perms = tuple(space.run(first_only=False))
    return AutGroup(perms, _orbits_of_perms(g.n, perms))


def isomorphic(g: ColoredGraph, h: ColoredGraph, budget: int = 32,
               node_budget: int = _NODE_BUDGET):
    """A color/multiplicity-preserving isomorphism g -> h, or None (search is
    exhaustive, so None certifies non-isomorphism)."""
    if g.n != h.n or g.m != h.m or sorted(g.colors) != sorted(h.colors):
        return None
    if g.n > budget:
        raise BudgetExceededError(f"isomorphism search limited to {budget} vertices")
    u = disjoint_union(g, h)
    part, _ = stable_partition(u)
    n = g.n
    by_class: dict = {}
    for v in range(2 * n):
        by_class.setdefault(part.class_of[v], ([], []))[0 if v < n else 1].append(v)
    classes_g, classes_h = [], []
    for cid in sorted(by_class):
        left, right = by_class[cid]
        if len(left) != len(right):
            return None
        if left:
            classes_g.append(left)
            classes_h.append([w - n for w in right])
    space = _SearchSpace(g, h, classes_g, classes_h, node_budget)
    res = space.run(first_only=True)
    return res[0] if res else None


def is_refinable(g: ColoredGraph, budget: int = 32, node_budget: int = _NODE_BUDGET) -> bool:
    """True iff the stable partition equals the automorphism orbit partition."""
    part, _ = stable_partition(g)
    aut = automorphisms(g, budget, node_budget)
    return set(part.classes) == set(aut.orbits)


# -- Godsil graphs -------------------------------------------------------------


def _equitable_partitions(g: ColoredGraph, node_budget: int):
    """Yield every equitable partition as a list of sorted vertex tuples.

    Cells are chosen greedily around the minimum unassigned vertex; a cell is
    accepted only if it is monochromatic, induces a regular graph, and is
    biregular against every previously completed cell, which prunes hard.
    """
    n = g.n
    adj = g.adj_dicts
    colors = g.colors
    nodes = 0

    def weighted_count(v, cell):
        return sum(adj[v].get(u, 0) for u in cell)

    def rec(remaining, completed):
        nonlocal nodes
        if not remaining:
            yield [tuple(c) for c in completed]
            return
        v0 = min(remaining)
        pool = [v for v in remaining if v != v0 and colors[v] == colors[v0]]
        for pick in range(1 << len(pool)):
            nodes += 1
            if nodes > node_budget:
                raise BudgetExceededError("equitable partition enumeration exceeded budget")
            cell = [v0] + [pool[i] for i in range(len(pool)) if (pick >> i) & 1]
            cell.sort()
            degs = {weighted_count(v, cell) for v in cell}
            if len(degs) != 1:
                continue
            ok = True
            for other in completed:
                if len({weighted_count(v, other) for v in cell}) != 1:
                    ok = False
                    break
                if len({weighted_count(v, cell) for v in other}) != 1:
                    ok = False
                    break
            if not ok:
                continue
            completed.append(cell)
            yield from rec(remaining - set(cell), completed)
            completed.pop()

    yield from rec(set(range(n)), [])


def is_godsil(g: ColoredGraph, budget: int = 10, node_budget: int = 1 << 22) -> bool:
    """True iff every equitable partition is the orbit partition of the
    subgroup of automorphisms stabilizing each of its cells setwise."""
    if g.n > budget:
        raise BudgetExceededError(f"Godsil test limited to {budget} vertices")
    aut = automorphisms(g, budget=max(budget, 32), node_budget=node_budget)
    n = g.n
    for cells in _equitable_partitions(g, node_budget):
        cls_id = [0] * n
        for i, cell in enumerate(cells):
            for v in cell:
                cls_id[v] = i
        stab = [p for p in aut.perms if all(cls_id[p[v]] == cls_id[v] for v in range(n))]
        if set(_orbits_of_perms(n, stab)) != set(cells):
            return False
    return True


# -- Tinhofer graphs -----------------------------------------------------------


@dataclass(frozen=True)
class FailingTranscript:
    """A choice sequence on two copies of the graph that drives the
    individualization-refinement procedure to a wrong answer."""

    steps: tuple  # ((u, v), ...): u individualized in the first copy, v in the second
    reason: str  # "histogram" or "final-map"


def is_tinhofer_bruteforce(g: ColoredGraph, budget: int = 10, node_budget: int = 1 << 18):
    """Explore every individualization choice on two identical copies of g.

    Returns True when every branch ends in a verified isomorphism, otherwise
    a replayable FailingTranscript. Source vertices are reduced to one
    representative per orbit of the current colored graph (a sound symmetry
    reduction); target vertices likewise.
    """
    if g.n > budget:
        raise BudgetExceededError(f"Tinhofer test limited to {budget} vertices")
    n = g.n
    u_struct = disjoint_union(g, g)
    memo: dict = {}
    nodes = 0

    def orbit_reps(colors, members):
        aut = automorphisms(g.with_colors(colors))
        reps = []
        member_set = set(members)
        for orb in aut.orbits:
            hits = [v for v in orb if v in member_set]
            if hits:
                reps.append(min(hits))
        return reps

    def explore(colors_u, steps):
        nonlocal nodes
        nodes += 1
        if nodes > node_budget:
            raise BudgetExceededError("Tinhofer exploration exceeded node budget")
        cached = memo.get(colors_u)
        if cached is not None or colors_u in memo:
            return cached
        part, _ = stable_partition(u_struct.with_colors(colors_u))
        left = sorted(part.class_of[:n])
        right = sorted(part.class_of[n:])
        if left != right:
            result = FailingTranscript(steps, "histogram")
            memo[colors_u] = result
            return result
        by_class: dict = {}
        for v in range(2 * n):
            by_class.setdefault(part.class_of[v], ([], []))[0 if v < n else 1].append(v)
        if all(len(l) == 1 for l, _ in by_class.values()):
            mapping = [-1] * n
            for l, r in by_class.values():
                mapping[l[0]] = r[0] - n
            ok = all(g.colors[v] == g.colors[mapping[v]] for v in range(n))
            if ok:
                adjd = g.adj_dicts
                for v in range(n):
                    for w, m in g.adj[v]:
                        if adjd[mapping[v]].get(mapping[w], 0) != m:
                            ok = False
                            break
                    if not ok:
                        break
            result = None if ok else FailingTranscript(steps, "final-map")
            memo[colors_u] = result
            return result
        colors_left = colors_u[:n]
        colors_right = colors_u[n:]
        fresh = max(colors_u) + 1
        result = None
        for cid in sorted(by_class):
            lmem, rmem = by_class[cid]
            if len(lmem) < 2:
                continue
            urep = orbit_reps(colors_left, lmem)
            vrep = orbit_reps(colors_right, [w - n for w in rmem])
            for uu in urep:
                for vv in vrep:
                    nxt = list(colors_u)
                    nxt[uu] = fresh
                    nxt[n + vv] = fresh
                    sub = explore(tuple(nxt), steps + ((uu, vv),))
                    if sub is not None:
                        memo[colors_u] = sub
                        return sub
        memo[colors_u] = result
        return result

    out = explore(tuple(g.colors) + tuple(g.colors), ())
    return True if out is None else out
