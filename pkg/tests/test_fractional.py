import itertools
import random
from fractions import Fraction

import pytest

from conftest import random_relabel
from crkit import graphs as G
from crkit import maskcr
from crkit.fractional import (RatMatrix, adjacency_matrix, birkhoff_decompose,
                              build_polytope, compact_probe, extreme_point,
                              extreme_point_for_objective, is_fractionally_isomorphic,
                              verify_fractional_automorphism)
from crkit.oracles import automorphisms
from crkit.refinement import cr_equivalent


def test_birkhoff_polytope_vertices_for_k2():
    poly = build_polytope(G.complete(2))
    assert poly.num_vars == 4
    diag = [0] * 4
    diag[poly.index[(0, 0)]] = diag[poly.index[(1, 1)]] = 5
    x = extreme_point_for_objective(poly, diag)
    assert x == RatMatrix.identity(2)
    anti = [0] * 4
    anti[poly.index[(0, 1)]] = anti[poly.index[(1, 0)]] = 5
    assert extreme_point_for_objective(poly, anti) == RatMatrix.from_permutation((1, 0))


def test_infeasible_pair():
    assert not is_fractionally_isomorphic(G.complete(3), G.path(3))
    assert not is_fractionally_isomorphic(G.complete(3), G.empty_graph(3))
    poly = build_polytope(G.complete(3), G.path(3))
    assert extreme_point(poly, 0) is None


def test_c3c4_vs_c7_feasible_never_integral():
    g = G.disjoint_union(G.cycle(3), G.cycle(4))
    h = G.cycle(7)
    assert is_fractionally_isomorphic(g, h)
    poly = build_polytope(g, h)
    for seed in range(12):
        x = extreme_point(poly, seed)
        assert x is not None and not x.is_integral


def test_extreme_points_satisfy_constraints():
    rng = random.Random(0)
    a34 = G.disjoint_union(G.cycle(3), G.cycle(4))
    cases = [(G.cycle(5), G.cycle(5)), (a34, G.cycle(7)), (G.petersen(), G.petersen())]
    for g, h in cases:
        poly = build_polytope(g, h)
        a = adjacency_matrix(g)
        b = adjacency_matrix(h)
        for _ in range(4):
            x = extreme_point(poly, rng.randint(0, 10**6))
            assert x is not None
            assert x.is_doubly_stochastic
            assert a.matmul(x) == x.matmul(b)
            # block support: variables only exist for same-class pairs
            support = {(i, j) for i in range(g.n) for j in range(g.n) if x[i, j] != 0}
            assert support <= set(poly.pairs)


def test_rsu_equivalence_exhaustive_n4():
    for n in range(1, 5):
        gs = [maskcr.mask_to_graph(n, m) for m in range(1 << (n * (n - 1) // 2))]
        for g, h in itertools.combinations_with_replacement(gs, 2):
            assert cr_equivalent(g, h) == is_fractionally_isomorphic(g, h)


def test_rsu_invariant_under_relabeling():
    rng = random.Random(1)
    for _ in range(20):
        n = rng.randint(2, 6)
        g = maskcr.mask_to_graph(n, rng.getrandbits(n * (n - 1) // 2))
        h = maskcr.mask_to_graph(n, rng.getrandbits(n * (n - 1) // 2))
        v = is_fractionally_isomorphic(g, h)
        g2, _ = random_relabel(g, rng.randint(0, 10**6))
        h2, _ = random_relabel(h, rng.randint(0, 10**6))
        assert is_fractionally_isomorphic(g2, h2) == v


def test_ds_kn_vertices_are_permutations():
    for n in (2, 3, 4):
        poly = build_polytope(G.complete(n))
        for seed in range(6):
            x = extreme_point(poly, seed)
            assert x.is_integral and x.is_doubly_stochastic


def test_compact_probe_c3c4():
    g = G.disjoint_union(G.cycle(3), G.cycle(4))
    res = compact_probe(g, trials=100, seed=0)
    assert res.non_compact
    w = res.witness
    assert w.is_doubly_stochastic and not w.is_integral
    a = adjacency_matrix(g)
    assert a.matmul(w) == w.matmul(a)


def test_compact_probe_quiet_on_cycles_and_matchings():
    for n in range(3, 9):
        assert not compact_probe(G.cycle(n), trials=100, seed=0).non_compact
    for m in range(1, 5):
        assert not compact_probe(G.matching(m), trials=100, seed=0).non_compact


def test_amenable_samples_probe_quiet_and_integral():
    for g in (G.complete(5), G.star_forest(2, 2), G.path(6), G.cycle(5)):
        res = compact_probe(g, trials=25, seed=3)
        assert not res.non_compact
        poly = build_polytope(g)
        auts = set(automorphisms(g).perms)
        for seed in range(10):
            x = extreme_point(poly, seed)
            terms = birkhoff_decompose(x)
            assert len(terms) == 1
            coeff, perm = terms[0]
            assert coeff == 1 and perm in auts


def test_birkhoff_identity():
    assert birkhoff_decompose(RatMatrix.identity(4)) == [(Fraction(1), (0, 1, 2, 3))]


def test_birkhoff_half_half():
    x = RatMatrix([[Fraction(1, 2)] * 2] * 2)
    terms = birkhoff_decompose(x)
    assert sorted(t[1] for t in terms) == [(0, 1), (1, 0)]
    assert all(c == Fraction(1, 2) for c, _ in terms)


def test_birkhoff_roundtrip_random():
    rng = random.Random(2)
    for _ in range(100):
        n = rng.randint(1, 6)
        k = rng.randint(1, 5)
        perms = [tuple(rng.sample(range(n), n)) for _ in range(k)]
        weights = [rng.randint(1, 9) for _ in range(k)]
        total = sum(weights)
        x = RatMatrix.zeros(n, n)
        for w, p in zip(weights, perms):
            x = x.add(RatMatrix.from_permutation(p).scaled(Fraction(w, total)))
        terms = birkhoff_decompose(x)
        assert len(terms) <= (n - 1) ** 2 + 1
        assert sum(c for c, _ in terms) == 1
        back = RatMatrix.zeros(n, n)
        for c, p in terms:
            back = back.add(RatMatrix.from_permutation(p).scaled(c))
        assert back == x


def test_birkhoff_rejects_non_doubly_stochastic():
    with pytest.raises(ValueError):
        birkhoff_decompose(RatMatrix([[Fraction(1, 2), Fraction(1, 2)],
                                      [Fraction(1, 4), Fraction(3, 4)]][::-1]))
    with pytest.raises(ValueError):
        birkhoff_decompose(RatMatrix([[1, 1], [1, 1]]))


def test_polytope_rejects_bad_input():
    with pytest.raises(ValueError, match="size"):
        build_polytope(G.complete(3), G.complete(4))
    mg = G.ColoredGraph.from_edges(2, [(0, 1, 2)])
    with pytest.raises(ValueError, match="simple"):
        build_polytope(mg, mg)


def test_verify_fractional_automorphism():
    g = G.cycle(4)
    assert verify_fractional_automorphism(g, RatMatrix.identity(4))
    quarter = RatMatrix([[Fraction(1, 4)] * 4] * 4)
    assert verify_fractional_automorphism(g, quarter)
    assert not verify_fractional_automorphism(G.path(3), RatMatrix([[Fraction(1, 3)] * 3] * 3))
