"""Vectorized color refinement over bitmask-encoded graph populations.

Small simple graphs on a fixed vertex count are encoded as edge bitmasks
(bit i is the i-th pair in lexicographic order). Refinement runs over whole
mask batches at once, producing a per-graph signature key with the property
that two graphs get equal keys exactly when color refinement cannot
distinguish them. The key records, round by round, the sorted list of
(class, neighbor-class counts) codes, so it is invariant under relabeling
and complete for CR equivalence.
"""

from __future__ import annotations

from itertools import combinations

import numpy as np

from .graphs import ColoredGraph


def pair_bits(n: int) -> list:
    """Bit order of vertex pairs: bit i encodes the i-th pair of combinations order."""
    return list(combinations(range(n), 2))


def mask_to_graph(n: int, mask: int, colors=None) -> ColoredGraph:
    edges = [p for i, p in enumerate(pair_bits(n)) if (mask >> i) & 1]
    return ColoredGraph.from_edges(n, edges, colors)


def graph_to_mask(g: ColoredGraph) -> int:
    if not g.is_simple:
        raise ValueError("mask encoding needs a simple graph")
    index = {p: i for i, p in enumerate(pair_bits(g.n))}
    mask = 0
    for u, v, _ in g.edges():
        mask |= 1 << index[(u, v)]
    return mask


def batch_signature_keys(n: int, masks: np.ndarray, colors=None) -> list:
    """CR signature key (bytes) for each mask; keys are comparable across batches
    as long as n and the coloring agree."""
    if n < 1:
        raise ValueError("need n >= 1")
    masks = np.asarray(masks, dtype=np.int64)
    b = len(masks)
    if b == 0:
        return []
    adj = np.zeros((b, n, n), dtype=np.uint8)
    for i, (u, v) in enumerate(pair_bits(n)):
        bit = ((masks >> i) & 1).astype(np.uint8)
        adj[:, u, v] = bit
        adj[:, v, u] = bit
    colors0 = np.zeros(n, dtype=np.int64) if colors is None else np.asarray(colors, dtype=np.int64)
    prefix = np.sort(colors0).tobytes()
    col = np.broadcast_to(colors0, (b, n)).copy()
    k_per = np.full(b, len(set(colors0.tolist())), dtype=np.int64)
    active = np.ones(b, dtype=bool)
    stop = np.zeros(b, dtype=np.int64)
    round_blobs = []
    base = n  # counts are at most n-1
    for rnd in range(1, n + 2):
        c_max = int(col.max()) + 1
        onehot = (col[:, :, None] == np.arange(c_max, dtype=np.int64)[None, None, :]).astype(np.uint8)
        counts = np.einsum("bvu,buc->bvc", adj, onehot).astype(np.int64)
        powers = base ** np.arange(c_max, dtype=np.int64)
        # the multiplier is a function of n alone so that codes (and hence keys)
        # are comparable across batches with different per-batch color maxima
        code = col * (base ** n) + counts @ powers
        order = np.argsort(code, axis=1, kind="stable")
        srt = np.take_along_axis(code, order, axis=1)
        round_blobs.append(srt.tobytes())
        grew = np.zeros((b, n), dtype=np.int64)
        grew[:, 1:] = (srt[:, 1:] != srt[:, :-1]).cumsum(axis=1)
        distinct = grew[:, -1] + 1
        newly_done = active & (distinct == k_per)
        stop[newly_done] = rnd
        active &= ~newly_done
        if not active.any():
            break
        k_per = distinct
        col = np.empty_like(code)
        np.put_along_axis(col, order, grew, axis=1)
    else:
        raise AssertionError("batch refinement failed to stabilize")
    row = 8 * n
    stops = stop.tolist()
    keys = []
    for i in range(b):
        lo, hi = row * i, row * (i + 1)
        keys.append(prefix + b"".join(round_blobs[r][lo:hi] for r in range(stops[i])))
    return keys


def signature_key(g: ColoredGraph) -> bytes:
    """Signature of a single simple graph, comparable with batch keys for the
    same n and coloring."""
    mask = graph_to_mask(g)
    colors = g.colors if any(g.colors) else None
    return batch_signature_keys(g.n, np.array([mask], dtype=np.int64), colors)[0]


def signature_census(n: int, colors=None, chunk: int = 1 << 18, collect_members: bool = False):
    """Signatures of every labeled simple graph on n vertices.

    Returns (counts, members): counts maps key -> number of graphs, members
    maps key -> sorted mask array (only when collect_members is set).
    """
    total = 1 << (n * (n - 1) // 2)
    counts: dict = {}
    members: dict = {}
    for start in range(0, total, chunk):
        masks = np.arange(start, min(start + chunk, total), dtype=np.int64)
        keys = batch_signature_keys(n, masks, colors)
        ms = masks.tolist()
        for mask, key in zip(ms, keys):
            counts[key] = counts.get(key, 0) + 1
            if collect_members:
                members.setdefault(key, []).append(mask)
    if collect_members:
        members = {k: np.array(v, dtype=np.int64) for k, v in members.items()}
    return counts, members
