"""Tinhofer's individualization-refinement isomorphism procedure and the
canonical labeling it yields on Tinhofer graphs.

The loop refines the disjoint union of the two graphs to stability, compares
per-side color histograms, and individualizes one same-class vertex pair
until every class is a singleton, at which point the induced map is verified
edge by edge. "Non-isomorphic" answers are always correct; "isomorphic"
answers carry a verified mapping.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .graphs import ColoredGraph, disjoint_union
from .refinement import stable_partition

POLICY_DETERMINISTIC = "det"
POLICY_RANDOM = "rand"


@dataclass(frozen=True)
class IndividualizationStep:
    round: int
    class_id: int
    u: int  # vertex individualized in g
    v: int  # vertex individualized in h


@dataclass(frozen=True)
class IsoResult:
    isomorphic: bool
    mapping: tuple | None  # verified vertex map g -> h when isomorphic
    transcript: tuple  # IndividualizationStep sequence


def _side_classes(part, n):
    by_class: dict = {}
    for v in range(len(part.class_of)):
        by_class.setdefault(part.class_of[v], ([], []))[0 if v < n else 1].append(v)
    return by_class


def _verify_map(g, h, mapping):
    if any(g.colors[v] != h.colors[mapping[v]] for v in range(g.n)):
        return False
    hadj = h.adj_dicts
    for v in range(g.n):
        for w, m in g.adj[v]:
            if hadj[mapping[v]].get(mapping[w], 0) != m:
                return False
    return True


def _tinhofer_loop(g, h, choose):
    """Shared loop; `choose(by_class, eligible)` picks (class_id, u, v)."""
    if g.n != h.n:
        return IsoResult(False, None, ())
    n = g.n
    u_struct = disjoint_union(g, h)
    colors = list(g.colors) + list(h.colors)
    transcript = []
    rnd = 0
    while True:
        part, _ = stable_partition(u_struct.with_colors(colors))
        if sorted(part.class_of[:n]) != sorted(part.class_of[n:]):
            return IsoResult(False, None, tuple(transcript))
        by_class = _side_classes(part, n)
        if all(len(left) == 1 for left, _ in by_class.values()):
            mapping = [-1] * n
            for left, right in by_class.values():
                mapping[left[0]] = right[0] - n
            mapping = tuple(mapping)
            if _verify_map(g, h, mapping):
                return IsoResult(True, mapping, tuple(transcript))
            return IsoResult(False, None, tuple(transcript))
        eligible = sorted(c for c, (left, _) in by_class.items() if len(left) >= 2)
        cid, u, v = choose(by_class, eligible)
        fresh = max(colors) + 1
        colors[u] = fresh
        colors[n + v] = fresh
        transcript.append(IndividualizationStep(rnd, cid, u, v))
        rnd += 1


def tinhofer_iso(g: ColoredGraph, h: ColoredGraph, policy: str = POLICY_DETERMINISTIC,
                 seed: int = 0) -> IsoResult:
    """Run the procedure with either the deterministic first-class/first-vertex
    policy or a seeded random choice of class and vertices."""
    if policy in (POLICY_DETERMINISTIC, "deterministic", "first"):
        def choose(by_class, eligible):
            cid = eligible[0]
            left, right = by_class[cid]
            return cid, min(left), min(right) - g.n
    elif policy in (POLICY_RANDOM, "random", "seeded-random"):
        rng = random.Random(seed)

        def choose(by_class, eligible):
            cid = rng.choice(eligible)
            left, right = by_class[cid]
            return cid, rng.choice(left), rng.choice(right) - g.n
    else:
        raise ValueError(f"unknown policy {policy!r}")
    return _tinhofer_loop(g, h, choose)


def run_with_choices(g: ColoredGraph, h: ColoredGraph, choices) -> IsoResult:
    """Replay a forced sequence of (u, v) individualizations, then fall back to
    the deterministic policy; used to re-verify failing transcripts."""
    queue = list(choices)

    def choose(by_class, eligible):
        if queue:
            u, v = queue.pop(0)
            for cid in eligible:
                left, right = by_class[cid]
                if u in left and (g.n + v) in right:
                    return cid, u, v
            raise ValueError(f"choice ({u},{v}) is not available in any eligible class")
        cid = eligible[0]
        left, right = by_class[cid]
        return cid, min(left), min(right) - g.n

    return _tinhofer_loop(g, h, choose)


def canonical_form(g: ColoredGraph) -> tuple:
    """Deterministic individualization-refinement ordering.

    For Tinhofer graphs the relabeled adjacency is a canonical form: any
    relabeled copy produces the same canonical graph. For other graphs the
    output is defined but carries no canonicity guarantee.
    """
    colors = list(g.colors)
    while True:
        part, _ = stable_partition(g.with_colors(colors))
        if part.is_discrete:
            order = sorted(range(g.n), key=lambda v: part.class_of[v])
            return tuple(order)
        cid = min(c for c, cls in enumerate(part.classes) if len(cls) >= 2)
        u = part.classes[cid][0]
        colors = list(part.class_of)
        colors[u] = len(part.classes)


def canonical_graph(g: ColoredGraph) -> ColoredGraph:
    """The graph relabeled into canonical order (position i gets vertex order[i])."""
    order = canonical_form(g)
    perm = [0] * g.n
    for i, v in enumerate(order):
        perm[v] = i
    return g.relabel(perm)
