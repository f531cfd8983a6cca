"""Color refinement: iterated neighborhood coloring and stable partitions.

One refinement round recolors each vertex by (current class, multiset of
neighbor classes), with neighbor multiplicities counted. The engine tracks
which classes changed in the previous round and, when a class splits, lets
the largest part keep its id while the other parts become new splitter
classes. This keeps total work quasilinear while producing, round for
round, the same partitions as the textbook iteration.

Class ids are canonical: new classes are numbered by (parent class id,
neighbor-class signature), so isomorphic graphs get literally identical
class assignments under any isomorphism.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graphs import ColoredGraph, disjoint_union

_NUMPY_KERNEL_MIN_ITEMS = 4096


@dataclass(frozen=True, eq=False)
class Partition:
    """An ordered partition of the vertices into classes.

    `fresh` lists class ids created by the most recent round (None means
    every class should act as a splitter in the next round).
    """

    class_of: tuple
    classes: tuple
    round: int = 0
    fresh: tuple | None = None

    @property
    def n(self) -> int:
        return len(self.class_of)

    @property
    def size(self) -> int:
        return len(self.classes)

    @property
    def is_discrete(self) -> bool:
        return len(self.classes) == len(self.class_of)

    def __eq__(self, other):
        if not isinstance(other, Partition):
            return NotImplemented
        return self.class_of == other.class_of

    def __hash__(self):
        return hash(self.class_of)


@dataclass(frozen=True)
class RefinementTrace:
    """Class counts per round: class_counts[0] is the initial count, one entry
    per effective round after that."""

    class_counts: tuple

    @property
    def rounds(self) -> int:
        return len(self.class_counts) - 1


def partition_from_colors(g: ColoredGraph) -> Partition:
    """Initial partition: one class per color, class id = color id."""
    k = g.color_count
    buckets = [[] for _ in range(k)]
    for v, c in enumerate(g.colors):
        buckets[c].append(v)
    return Partition(tuple(g.colors), tuple(tuple(b) for b in buckets), 0, None)


def validate_partition(g: ColoredGraph, p: Partition) -> None:
    if len(p.class_of) != g.n:
        raise ValueError(f"partition covers {len(p.class_of)} vertices, graph has {g.n}")
    k = len(p.classes)
    seen = [0] * g.n
    for cid, cls in enumerate(p.classes):
        if not cls:
            raise ValueError(f"class {cid} is empty")
        for v in cls:
            if not 0 <= v < g.n or seen[v]:
                raise ValueError(f"vertex {v} repeated or out of range")
            seen[v] = 1
            if p.class_of[v] != cid:
                raise ValueError(f"class_of[{v}]={p.class_of[v]} but vertex listed in class {cid}")
    if sum(seen) != g.n:
        raise ValueError("classes do not cover all vertices")
    if k and (min(p.class_of) != 0 or max(p.class_of) != k - 1):
        raise ValueError("class ids not contiguous from 0")


# -- one refinement round -----------------------------------------------------


def _sig_bytes(pairs):
    """Pack sorted (class, count) pairs into big-endian bytes; lexicographic
    byte order matches lexicographic order on the pair sequences."""
    return b"".join(((c << 32) | t).to_bytes(8, "big") for c, t in pairs)


def _aggregate_python(g, class_of, members, fresh):
    """Group touched vertices by (their class, restricted neighbor signature)."""
    adj = g.adj
    acc = {}
    if fresh is None:
        for v in range(g.n):
            c = class_of[v]
            for u, m in adj[v]:
                d = acc.get(u)
                if d is None:
                    d = acc[u] = {}
                d[c] = d.get(c, 0) + m
    else:
        for c in fresh:
            for v in members[c]:
                for u, m in adj[v]:
                    d = acc.get(u)
                    if d is None:
                        d = acc[u] = {}
                    d[c] = d.get(c, 0) + m
    groups = {}
    for u, d in acc.items():
        sig = _sig_bytes(sorted(d.items()))
        p = class_of[u]
        gp = groups.get(p)
        if gp is None:
            gp = groups[p] = {}
        gp.setdefault(sig, []).append(u)
    return groups


def _aggregate_numpy(g, class_of_np, members, fresh):
    indptr, nbr, mult = g.csr()
    if fresh is None:
        if len(nbr) == 0:
            return {}
        u_all = nbr
        m_all = mult
        degs = np.diff(indptr)
        cls_all = np.repeat(class_of_np, degs)
    else:
        from itertools import chain
        total = sum(len(members[c]) for c in fresh)
        if total == 0:
            return {}
        srcs = np.fromiter(chain.from_iterable(members[c] for c in fresh), np.int64, total)
        starts = indptr[srcs]
        lens = indptr[srcs + 1] - starts
        tot = int(lens.sum())
        if tot == 0:
            return {}
        offsets = np.repeat(np.cumsum(lens) - lens, lens)
        e_idx = np.arange(tot, dtype=np.int64) - offsets + np.repeat(starts, lens)
        u_all = nbr[e_idx]
        m_all = mult[e_idx]
        cls_all = np.repeat(class_of_np[srcs], lens)

    if g.is_simple:
        # single radix-sorted key; run lengths are the neighbor counts
        combined = np.sort((u_all << 32) | cls_all, kind="stable")
        run = np.empty(len(combined), dtype=bool)
        run[0] = True
        np.not_equal(combined[1:], combined[:-1], out=run[1:])
        starts_r = np.flatnonzero(run)
        cnt = np.diff(np.append(starts_r, len(combined)))
        heads = combined[starts_r]
        ru = heads >> 32
        rc = heads & 0xFFFFFFFF
    else:
        order = np.lexsort((cls_all, u_all))
        u_s = u_all[order]
        c_s = cls_all[order]
        m_s = m_all[order]
        run = np.empty(len(u_s), dtype=bool)
        run[0] = True
        np.logical_or(u_s[1:] != u_s[:-1], c_s[1:] != c_s[:-1], out=run[1:])
        starts_r = np.flatnonzero(run)
        cnt = np.add.reduceat(m_s, starts_r)
        ru = u_s[starts_r]
        rc = c_s[starts_r]
    pbytes = ((rc << 32) | cnt).astype(">i8").tobytes()

    vrun = np.empty(len(ru), dtype=bool)
    vrun[0] = True
    np.not_equal(ru[1:], ru[:-1], out=vrun[1:])
    vstart = np.flatnonzero(vrun)
    vend = np.append(vstart[1:], len(ru))
    touched = ru[vstart].tolist()
    parents = class_of_np[ru[vstart]].tolist()
    vs = vstart.tolist()
    ve = vend.tolist()

    groups = {}
    for i, u in enumerate(touched):
        sig = pbytes[8 * vs[i]:8 * ve[i]]
        p = parents[i]
        gp = groups.get(p)
        if gp is None:
            gp = groups[p] = {}
        gp.setdefault(sig, []).append(u)
    return groups


def _round(g, class_of_np, members, fresh):
    """Run one refinement round in place; returns the list of new class ids."""
    if fresh is not None and not fresh:
        return []
    if fresh is None:
        items = 2 * g.m
    else:
        items = sum(len(members[c]) for c in fresh) * (1 + (2 * g.m) // max(g.n, 1))
    # the python kernel walks g.adj, so keep it to graphs small enough that
    # materializing that view is cheap
    if items >= _NUMPY_KERNEL_MIN_ITEMS or g.n + 2 * g.m >= 200_000:
        groups = _aggregate_numpy(g, class_of_np, members, fresh)
    else:
        class_of = class_of_np.tolist()
        groups = _aggregate_python(g, class_of, members, fresh)

    new_parts = []
    for p, sigmap in groups.items():
        mp = members[p]
        size_p = len(mp)
        touched_total = sum(len(lst) for lst in sigmap.values())
        untouched = size_p - touched_total
        if untouched == 0 and len(sigmap) == 1:
            continue
        # retained part: largest, ties broken by smallest signature
        # (the untouched part has the empty signature, smallest of all)
        retained_sig = b"" if untouched > 0 else None
        retained_size = untouched if untouched > 0 else -1
        for sig, lst in sigmap.items():
            sz = len(lst)
            if sz > retained_size or (sz == retained_size and (retained_sig is None or sig < retained_sig)):
                retained_sig, retained_size = sig, sz
        if retained_sig == b"":
            for sig, lst in sigmap.items():
                for v in lst:
                    mp.discard(v)
                new_parts.append((p, sig, lst))
        else:
            for sig, lst in sigmap.items():
                if sig == retained_sig:
                    continue
                for v in lst:
                    mp.discard(v)
                new_parts.append((p, sig, lst))
            if untouched > 0:
                retained = sigmap[retained_sig]
                for v in retained:
                    mp.discard(v)
                new_parts.append((p, b"", mp))  # mp is now exactly the untouched part
                members[p] = set(retained)
            else:
                members[p] = set(sigmap[retained_sig])

    if not new_parts:
        return []
    new_parts.sort(key=lambda t: (t[0], t[1]))
    fresh_ids = []
    for _parent, _sig, part in new_parts:
        cid = len(members)
        members.append(set(part))
        if len(part) >= 128:
            class_of_np[np.fromiter(part, np.int64, len(part))] = cid
        else:
            for v in part:
                class_of_np[v] = cid
        fresh_ids.append(cid)
    return fresh_ids


def _state_from_partition(g, p):
    class_of_np = np.fromiter(p.class_of, np.int64, g.n)
    members = [set(cls) for cls in p.classes]
    return class_of_np, members


def _finish(class_of_np, members, rnd, fresh):
    class_of = tuple(class_of_np.tolist())
    classes = tuple(tuple(sorted(s)) for s in members)
    return Partition(class_of, classes, rnd, tuple(fresh))


def refine_step(g: ColoredGraph, p: Partition) -> Partition:
    """One refinement round. The result refines the input and equals it
    exactly when the input is stable."""
    validate_partition(g, p)
    if p.is_discrete:
        return Partition(p.class_of, p.classes, p.round, ())
    class_of_np, members = _state_from_partition(g, p)
    fresh = _round(g, class_of_np, members, list(p.fresh) if p.fresh is not None else None)
    rnd = p.round + (1 if fresh else 0)
    return _finish(class_of_np, members, rnd, fresh)


def stable_partition(g: ColoredGraph) -> tuple[Partition, RefinementTrace]:
    """Coarsest equitable partition refining the initial coloring, plus the
    per-round class counts."""
    p0 = partition_from_colors(g)
    class_of_np, members = _state_from_partition(g, p0)
    counts = [len(members)]
    fresh = None
    rounds = 0
    while len(members) < g.n:  # a discrete partition is stable, no round needed
        fresh = _round(g, class_of_np, members, fresh)
        if not fresh:
            break
        rounds += 1
        counts.append(len(members))
        if rounds > g.n:
            raise AssertionError("refinement failed to stabilize")
    part = _finish(class_of_np, members, rounds, [])
    return part, RefinementTrace(tuple(counts))


def is_equitable(g: ColoredGraph, p: Partition) -> bool:
    """True iff cells are monochromatic, each G[X] is regular, and each
    G[X,Y] is biregular (all degree counts multiplicity-weighted)."""
    validate_partition(g, p)
    class_of = p.class_of
    counts = [None] * g.n
    adj = g.adj
    for v in range(g.n):
        c = class_of[v]
        for u, m in adj[v]:
            d = counts[u]
            if d is None:
                d = counts[u] = {}
            d[c] = d.get(c, 0) + m
    for cls in p.classes:
        v0 = cls[0]
        col0 = g.colors[v0]
        ref = counts[v0] or {}
        for v in cls[1:]:
            if g.colors[v] != col0:
                return False
            if (counts[v] or {}) != ref:
                return False
    return True


def cr_equivalent(g: ColoredGraph, h: ColoredGraph) -> bool:
    """Run refinement on the disjoint union and compare the two color histograms."""
    u = disjoint_union(g, h)
    part, _ = stable_partition(u)
    left = sorted(part.class_of[:g.n])
    right = sorted(part.class_of[g.n:])
    return left == right


def is_discrete(g: ColoredGraph) -> bool:
    """True iff the stable partition consists of singletons."""
    part, _ = stable_partition(g)
    return part.is_discrete
