import random

import pytest

from conftest import random_colored_graph, random_relabel
from crkit import graphs as G
from crkit.errors import GraphFormatError
from crkit.oracles import isomorphic


def test_load_k2():
    g = G.load("p cgraph 2 1\ne 0 1\n")
    assert g.n == 2 and g.m == 1
    assert g.colors == (0, 0)
    assert g.multiplicity(0, 1) == 1


def test_load_c5_file():
    text = "# five-cycle\np cgraph 5 5\n" + "\n".join(
        f"e {i} {(i + 1) % 5}" for i in range(5)) + "\n"
    g = G.load(text)
    assert g.n == 5 and g.m == 5
    assert all(w == 1 for _, _, w in g.edges())
    assert isomorphic(g, G.cycle(5)) is not None


def test_load_self_loop_rejected():
    with pytest.raises(GraphFormatError, match="line 2.*self-loop"):
        G.load("p cgraph 2 1\ne 0 0\n")


@pytest.mark.parametrize("text,pattern", [
    ("e 0 1\n", "header"),
    ("p cgraph 2 2\ne 0 1\n", "declares 2 edges"),
    ("p cgraph 2 2\ne 0 1\ne 1 0\n", "more than once"),
    ("p cgraph 2 1\ne 0 5\n", "out of range"),
    ("p cgraph 2 1\ne 0 1 300\n", "multiplicity"),
    ("p cgraph 2 1\nc 0 2\ne 0 1\n", "contiguous"),
    ("p cgraph 2 1\nq 0 1\ne 0 1\n", "unknown directive"),
])
def test_load_errors(text, pattern):
    with pytest.raises(GraphFormatError, match=pattern):
        G.load(text)


def test_save_load_roundtrip_random():
    rng = random.Random(0)
    for _ in range(60):
        g = random_colored_graph(rng)
        assert G.load(G.save(g)) == g
        # canonical layout: saving is idempotent
        assert G.save(G.load(G.save(g))) == G.save(g)


def test_save_load_roundtrip_multigraph():
    g = G.ColoredGraph.from_edges(4, [(0, 1, 2), (1, 2), (0, 3, 255)], [0, 1, 0, 1])
    assert G.load(G.save(g)) == g
    assert "e 0 1 2" in G.save(g)


def test_disjoint_union_c3_c4():
    u = G.disjoint_union(G.cycle(3), G.cycle(4))
    assert u.n == 7 and u.m == 7
    assert sorted(u.degree(v) for v in range(7)) == [2] * 7
    # two components: vertices 0-2 vs 3-6 never mix
    reach = {0}
    frontier = [0]
    while frontier:
        v = frontier.pop()
        for w, _ in u.adj[v]:
            if w not in reach:
                reach.add(w)
                frontier.append(w)
    assert reach == {0, 1, 2}


def test_disjoint_union_identity_and_matching():
    g = G.cycle(4)
    assert G.disjoint_union(g, G.empty_graph(0)) == g
    assert isomorphic(G.disjoint_union(G.complete(2), G.complete(2)), G.matching(2)) is not None


def test_disjoint_union_associative_up_to_iso():
    a, b, c = G.cycle(3), G.path(2), G.complete(4)
    left = G.disjoint_union(G.disjoint_union(a, b), c)
    right = G.disjoint_union(a, G.disjoint_union(b, c))
    assert isomorphic(left, right) is not None


def test_complement_basics():
    assert G.complement(G.complete(3)) == G.empty_graph(3)
    c5 = G.cycle(5)
    assert isomorphic(G.complement(c5), c5) is not None  # self-complementary
    rng = random.Random(1)
    for _ in range(30):
        g = random_colored_graph(rng)
        assert G.complement(G.complement(g)) == g


def test_complement_of_matching():
    g = G.complement(G.matching(3))
    assert all(g.degree(v) == 4 for v in range(6))
    with pytest.raises(ValueError):
        G.complement(G.ColoredGraph.from_edges(2, [(0, 1, 2)]))


def test_induced_path_from_cycle():
    sub, ids = G.induced(G.cycle(5), [0, 1, 2])
    assert ids == (0, 1, 2)
    assert isomorphic(sub, G.path(3)) is not None


def test_bipartite_induced_and_complement():
    g = G.star_forest(2, 2)  # centers 0,1; leaves 2..5
    x, y = [0, 1], [2, 3, 4, 5]
    cross, _ = G.bipartite_induced(g, x, y)
    assert cross.m == 4 and isomorphic(cross, G.star_forest(2, 2)) is not None
    comp, _ = G.bipartite_complement(g, x, y)
    # each center now sees the other center's leaves
    assert comp.m == 4
    assert {w for w, _ in comp.adj[0]} == {4, 5}
    with pytest.raises(ValueError, match="overlap"):
        G.bipartite_induced(g, [0, 1], [1, 2])


def test_bipartite_complement_twice_is_identity():
    rng = random.Random(2)
    for _ in range(20):
        g = random_colored_graph(rng, max_n=7)
        if g.n < 4:
            continue
        x = [0, 1]
        y = [v for v in range(2, g.n)]
        once, _ = G.bipartite_complement(g, x, y)
        twice, _ = G.bipartite_complement(once, list(range(len(x))),
                                          list(range(len(x), g.n)))
        base, _ = G.bipartite_induced(g, x, y)
        assert twice.m == base.m


def test_petersen():
    p = G.petersen()
    assert p.n == 10 and p.m == 15
    assert all(p.degree(v) == 3 for v in range(10))


def test_johnson_5_2_by_definition():
    # independent oracle: vertices are 2-subsets, adjacency iff intersecting
    from itertools import combinations
    verts = list(combinations(range(5), 2))
    j = G.johnson(5, 2)
    assert j.n == 10
    assert all(j.degree(v) == 6 for v in range(10))
    for i, a in enumerate(verts):
        for k, b in enumerate(verts):
            if i < k:
                assert (j.multiplicity(i, k) == 1) == bool(set(a) & set(b))
    # Kneser duality: J(5,2) is the complement of the Petersen graph
    assert isomorphic(j, G.complement(G.petersen())) is not None


def test_cycle3_is_k3():
    assert G.cycle(3) == G.complete(3)


@pytest.mark.parametrize("name,params", [
    ("cycle", {"n": 2}),
    ("complete", {"n": 0}),
    ("star_forest", {"s": 0, "t": 2}),
    ("johnson", {"n": 2, "k": 5}),
])
def test_standard_graph_bad_params(name, params):
    with pytest.raises(ValueError):
        G.standard_graph(name, **params)


def test_standard_graph_dispatch():
    assert G.standard_graph("petersen") == G.petersen()
    assert G.standard_graph("matching", m=3) == G.matching(3)
    with pytest.raises(ValueError, match="unknown standard graph"):
        G.standard_graph("mystery")


def test_random_gnp_deterministic():
    assert G.random_gnp(10, seed=7) == G.random_gnp(10, seed=7)
    assert G.random_gnp(10, seed=7) != G.random_gnp(10, seed=8)


def test_random_gnm_counts():
    g = G.random_gnm(50, 200, seed=3)
    assert g.n == 50 and g.m == 200 and g.is_simple
    assert G.random_gnm(50, 200, seed=3) == g


def test_relabel_preserves_structure():
    rng = random.Random(3)
    for _ in range(20):
        g = random_colored_graph(rng)
        h, perm = random_relabel(g, rng.randint(0, 10**6))
        assert h.m == g.m
        for u, v, w in g.edges():
            assert h.multiplicity(perm[u], perm[v]) == w
        assert all(h.colors[perm[v]] == g.colors[v] for v in range(g.n))
