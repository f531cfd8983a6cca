"""Exhaustive sweeps over all labeled simple graphs on a fixed vertex count.

Verdicts for every graph class here are isomorphism-invariant, so sweeps
enumerate the refinement-signature census once, split each signature bucket
into isomorphism classes with the exact oracle, evaluate class oracles on
one representative per class, and weight by orbit size n!/|Aut|. The orbit
sizes double as a self-check: within each bucket the classified member
counts must match them exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial

import numpy as np

from . import maskcr, oracles
from .amenability import check_CDEF, is_amenable
from .errors import BudgetExceededError
from .graphs import ColoredGraph
from .refinement import stable_partition

SWEEP_MAX_N = 7


@dataclass(frozen=True)
class IsoClass:
    rep_mask: int
    labeled_count: int  # n!/|Aut|, verified against the census
    aut_order: int


_CENSUS_CACHE: dict = {}


def signature_census(n: int, collect_members: bool = False):
    """Cached signature census; the n=7 pass is expensive enough to share."""
    key = (n, collect_members)
    if key not in _CENSUS_CACHE:
        _CENSUS_CACHE[key] = maskcr.signature_census(n, collect_members=collect_members)
    return _CENSUS_CACHE[key]


def iso_classes(n: int) -> list:
    """All isomorphism classes of simple graphs on n vertices, via signature
    buckets refined by exact isomorphism tests."""
    if n > SWEEP_MAX_N:
        raise BudgetExceededError(f"exhaustive sweeps limited to {SWEEP_MAX_N} vertices")
    _counts, members = signature_census(n, collect_members=True)
    classes = []
    nfact = factorial(n)
    for key in sorted(members):
        bucket = members[key]
        reps: list = []  # (mask, graph, seen count)
        for mask in bucket.tolist():
            g = maskcr.mask_to_graph(n, mask)
            for i, (rmask, rg, cnt) in enumerate(reps):
                if oracles.isomorphic(rg, g) is not None:
                    reps[i] = (rmask, rg, cnt + 1)
                    break
            else:
                reps.append((mask, g, 1))
        for rmask, rg, cnt in reps:
            order = oracles.automorphisms(rg).order
            expected = nfact // order
            if cnt != expected:
                raise AssertionError(
                    f"orbit size mismatch for mask {rmask}: saw {cnt}, expected {expected}")
            classes.append(IsoClass(rmask, expected, order))
    return classes


CLASS_NAMES = ("discrete", "amenable", "godsil", "tinhofer", "refinable")


@dataclass(frozen=True)
class SweepReport:
    n: int
    labeled_total: int
    iso_class_total: int
    labeled_counts: dict  # class name -> count over labeled graphs
    iso_counts: dict  # class name -> count over isomorphism classes
    bruteforce_amenable_labeled: int
    inclusion_violations: int  # labeled graphs violating the class chain


def classify_representative(g: ColoredGraph) -> dict:
    """Membership vector over the hierarchy for one graph."""
    part, _ = stable_partition(g)
    tin = oracles.is_tinhofer_bruteforce(g)
    return {
        "discrete": part.is_discrete,
        "amenable": is_amenable(g).amenable,
        "godsil": oracles.is_godsil(g),
        "tinhofer": tin is True,
        "refinable": oracles.is_refinable(g),
    }


def sweep(n: int) -> SweepReport:
    """Class counts over all labeled graphs on n vertices plus the number of
    labeled graphs violating the inclusion chain (must be zero)."""
    classes = iso_classes(n)
    counts, _ = signature_census(n)
    labeled = {name: 0 for name in CLASS_NAMES}
    iso_cnt = {name: 0 for name in CLASS_NAMES}
    bf_labeled = 0
    violations = 0
    nfact = factorial(n)
    for cls in classes:
        g = maskcr.mask_to_graph(n, cls.rep_mask)
        verdicts = classify_representative(g)
        bucket = counts[maskcr.signature_key(g)]
        bf = bucket == nfact // cls.aut_order
        if bf:
            bf_labeled += cls.labeled_count
        chain = [verdicts[name] for name in CLASS_NAMES]
        if any(a and not b for a, b in zip(chain, chain[1:])):
            violations += cls.labeled_count
        for name in CLASS_NAMES:
            if verdicts[name]:
                labeled[name] += cls.labeled_count
                iso_cnt[name] += 1
    return SweepReport(n, 1 << (n * (n - 1) // 2), len(classes), labeled, iso_cnt,
                       bf_labeled, violations)


def amenable_three_way(n: int, masks) -> list:
    """For each mask: (is_amenable, check_CDEF, brute-force) verdict triple.

    The brute-force verdict compares the graph's signature-bucket size against
    its labeled orbit size: the bucket holds exactly the graphs refinement
    cannot distinguish from it, so equality means every such graph is an
    isomorphic copy."""
    counts, _ = signature_census(n)
    masks_np = np.asarray(masks, dtype=np.int64)
    keys = maskcr.batch_signature_keys(n, masks_np)
    nfact = factorial(n)
    out = []
    for mask, key in zip(masks_np.tolist(), keys):
        g = maskcr.mask_to_graph(n, mask)
        a = is_amenable(g).amenable
        c = check_CDEF(g).amenable
        order = oracles.automorphisms(g).order
        bf = counts[key] == nfact // order
        out.append((a, c, bf))
    return out
