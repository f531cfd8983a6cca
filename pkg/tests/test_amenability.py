import random

import pytest

from crkit import graphs as G
from crkit import maskcr
from crkit.amenability import amenable_bruteforce, check_CDEF, is_amenable
from crkit.cells import build, classify_cell, classify_pair
from crkit.errors import BudgetExceededError
from crkit.oracles import isomorphic
from crkit.refinement import cr_equivalent, stable_partition


def test_complete_graphs_amenable():
    for n in range(1, 11):
        v = is_amenable(G.complete(n))
        assert v.amenable and v.violation is None


def test_c5_amenable_cn_not():
    assert is_amenable(G.cycle(5)).amenable
    for n in range(6, 13):
        assert not is_amenable(G.cycle(n)).amenable


def test_trees_amenable():
    import networkx as nx
    for n in range(1, 8):
        for t in ([nx.empty_graph(1)] if n == 1 else nx.nonisomorphic_trees(n)):
            g = G.ColoredGraph.from_edges(n, list(t.edges()))
            assert is_amenable(g).amenable
            assert check_CDEF(g).amenable


def test_petersen_not_amenable():
    v = is_amenable(G.petersen())
    assert not v.amenable and v.violation.condition == "A"


def _reverify(g, verdict):
    """Check the reported witness against the condition's definition."""
    vio = verdict.violation
    part, _ = stable_partition(g)
    data = build(g, part)
    sizes = [lab.size for lab in data.cell_labels]
    if vio.condition == "A":
        (cid,) = vio.cell_ids
        assert classify_cell(g, part.classes[cid]).kind.value == "irregular"
    elif vio.condition == "B":
        i, j = vio.cell_ids
        assert classify_pair(g, part.classes[i], part.classes[j]).kind.value == "irregular"
    elif vio.condition == "G":
        cells = vio.cell_ids
        if len(cells) == 2:
            # monotonicity witness: a directed edge whose size decreases
            x, y = cells
            assert data.pair_label(x, y).anisotropic
            assert sizes[x] > sizes[y]
        else:
            # cycle witness: consecutive pairs anisotropic, closing edge included
            k = len(cells)
            assert k >= 3
            for a, b in zip(cells, cells[1:] + cells[:1]):
                assert data.pair_label(a, b).anisotropic
    elif vio.condition == "H":
        for cid in vio.cell_ids:
            assert data.cell_labels[cid].heterogeneous
        if len(vio.cell_ids) == 2:
            x, y = vio.cell_ids
            comp = next(c for c in data.components if x in c.cells)
            assert y in comp.cells
        else:
            (cid,) = vio.cell_ids
            comp = next(c for c in data.components if cid in c.cells)
            assert sizes[cid] > min(sizes[c] for c in comp.cells)
    else:
        raise AssertionError(f"unexpected condition {vio.condition}")


def test_three_way_agreement_exhaustive_n5():
    for n in range(1, 6):
        for mask in range(1 << (n * (n - 1) // 2)):
            g = maskcr.mask_to_graph(n, mask)
            a = is_amenable(g)
            c = check_CDEF(g)
            bf = amenable_bruteforce(g)
            assert a.amenable == c.amenable == bf, (n, mask)
            if not a.amenable:
                _reverify(g, a)
                _reverify(g, c)


def test_three_way_agreement_random_n6():
    rng = random.Random(0)
    for _ in range(40):
        g = maskcr.mask_to_graph(6, rng.getrandbits(15))
        a = is_amenable(g).amenable
        assert a == check_CDEF(g).amenable == amenable_bruteforce(g)


def test_witnesses_on_known_nonamenable():
    for g in (G.cycle(6), G.cycle(9), G.complete_bipartite(3, 3),
              G.disjoint_union(G.cycle(3), G.cycle(4))):
        v = is_amenable(g)
        assert not v.amenable
        _reverify(g, v)
        c = check_CDEF(g)
        assert not c.amenable


def test_complement_closure():
    rng = random.Random(1)
    for _ in range(80):
        n = rng.randint(1, 7)
        g = maskcr.mask_to_graph(n, rng.getrandbits(n * (n - 1) // 2))
        assert is_amenable(g).amenable == is_amenable(G.complement(g)).amenable


def test_colored_uniform_anisotropic_cycle():
    # three color classes joined pairwise by perfect matchings: two disjoint
    # triangles, each class holding one vertex per triangle
    edges = [(0, 2), (2, 4), (4, 0), (1, 3), (3, 5), (5, 1)]
    g = G.ColoredGraph.from_edges(6, edges, [0, 0, 1, 1, 2, 2])
    v = is_amenable(g)
    assert not v.amenable and v.violation.condition == "G"  # cycle in the component
    c = check_CDEF(g)
    assert not c.amenable and c.violation.condition == "D"  # uniform anisotropic cycle
    # semantic confirmation: a colored 6-cycle is indistinguishable but not isomorphic
    h = G.ColoredGraph.from_edges(6, [(i, (i + 1) % 6) for i in range(6)],
                                  [0, 1, 2, 0, 1, 2])
    assert cr_equivalent(g, h) and isomorphic(g, h) is None
    assert not amenable_bruteforce(g)


def test_colored_inputs_respected():
    # pre-coloring can make an otherwise non-amenable graph amenable
    g = G.cycle(6).with_colors([0, 1, 0, 1, 0, 1])
    colored_verdict = is_amenable(g)
    assert colored_verdict.amenable == check_CDEF(g).amenable == amenable_bruteforce(g)


def test_empty_graph_amenable():
    assert check_CDEF(G.empty_graph(4)).amenable
    assert is_amenable(G.empty_graph(4)).amenable


def test_bruteforce_examples():
    assert amenable_bruteforce(G.complete(4))
    assert not amenable_bruteforce(G.disjoint_union(G.cycle(3), G.cycle(3)))
    with pytest.raises(BudgetExceededError):
        amenable_bruteforce(G.complete(8), n_budget=7)


def test_cdef_budget():
    # a chain of 2-cells joined by perfect matchings: every cell-graph edge is
    # anisotropic, so path enumeration must hit a tiny budget
    k = 6
    edges = []
    for i in range(k - 1):
        edges.append((2 * i, 2 * i + 2))
        edges.append((2 * i + 1, 2 * i + 3))
    colors = [i // 2 for i in range(2 * k)]
    g = G.ColoredGraph.from_edges(2 * k, edges, colors)
    with pytest.raises(BudgetExceededError):
        check_CDEF(g, budget=2)


def test_multigraph_rejected():
    mg = G.ColoredGraph.from_edges(2, [(0, 1, 2)])
    with pytest.raises(ValueError):
        is_amenable(mg)
    with pytest.raises(ValueError):
        check_CDEF(mg)
    with pytest.raises(ValueError):
        amenable_bruteforce(mg)
