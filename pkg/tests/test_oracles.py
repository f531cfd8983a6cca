import itertools
import random

import pytest

from conftest import random_colored_graph, random_relabel
from crkit import graphs as G
from crkit import maskcr
from crkit.errors import BudgetExceededError
from crkit.mcvp import separating_graph
from crkit.oracles import (FailingTranscript, _equitable_partitions, automorphisms,
                           is_godsil, is_refinable, is_tinhofer_bruteforce, isomorphic)
from crkit.refinement import Partition, is_equitable
from crkit.tinhofer import run_with_choices


def test_aut_orders_known():
    assert automorphisms(G.cycle(5)).order == 10
    assert automorphisms(G.petersen()).order == 120
    assert automorphisms(G.complete(4)).order == 24
    assert automorphisms(G.path(4)).order == 2
    assert automorphisms(G.star_forest(1, 3)).order == 6


def _is_automorphism(g, perm):
    if any(g.colors[perm[v]] != g.colors[v] for v in range(g.n)):
        return False
    return all(g.multiplicity(perm[u], perm[v]) == w for u, v, w in g.edges())


def test_aut_group_verified_and_closed():
    rng = random.Random(0)
    for _ in range(30):
        g = random_colored_graph(rng, max_n=7)
        aut = automorphisms(g)
        perms = set(aut.perms)
        assert tuple(range(g.n)) in perms
        for p in aut.perms:
            assert _is_automorphism(g, p)
            assert tuple(p.index(v) for v in range(g.n)) in perms  # inverse
        for p, q in itertools.islice(itertools.product(aut.perms, repeat=2), 200):
            assert tuple(p[q[v]] for v in range(g.n)) in perms


def test_orbits_partition():
    aut = automorphisms(G.star_forest(1, 3))
    assert set(aut.orbits) == {(0,), (1, 2, 3)}


def test_aut_multigraph_multiplicity_sensitive():
    plain = G.path(3)
    weighted = G.ColoredGraph.from_edges(3, [(0, 1, 2), (1, 2, 1)])
    assert automorphisms(plain).order == 2
    assert automorphisms(weighted).order == 1


def test_isomorphic_examples():
    assert isomorphic(G.disjoint_union(G.cycle(3), G.cycle(4)), G.cycle(7)) is None
    t = G.ColoredGraph.from_edges(6, [(0, 1), (1, 2), (1, 3), (3, 4), (3, 5)])
    h, perm = random_relabel(t, 99)
    mapping = isomorphic(t, h)
    assert mapping is not None
    for u, v, w in t.edges():
        assert h.multiplicity(mapping[u], mapping[v]) == w
    assert isomorphic(G.complete(3), G.path(3)) is None  # pruned by refinement


def test_isomorphic_respects_colors():
    g = G.path(2).with_colors([0, 1])
    h = G.path(2).with_colors([1, 0])
    assert isomorphic(g, h) is not None  # swap map
    k = G.empty_graph(2).with_colors([0, 1])
    assert isomorphic(g, k) is None


def test_refinable_examples():
    assert is_refinable(G.cycle(6))
    assert not is_refinable(G.disjoint_union(G.cycle(3), G.cycle(4)))
    sep, _, _ = separating_graph()
    assert is_refinable(sep)
    # a rigid discrete graph: both partitions are all singletons
    g = G.path(5).with_colors([1, 0, 0, 0, 0])
    assert is_refinable(g)


def _brute_equitable(g):
    def rec(i, maxid, assign):
        if i == g.n:
            yield list(assign)
            return
        for c in range(maxid + 1):
            assign.append(c)
            yield from rec(i + 1, maxid + (1 if c == maxid else 0), assign)
            assign.pop()

    out = set()
    for assign in rec(0, 0, []):
        k = max(assign) + 1
        cells = tuple(tuple(v for v in range(g.n) if assign[v] == c) for c in range(k))
        p = Partition(tuple(assign), cells)
        if is_equitable(g, p):
            out.add(frozenset(cells))
    return out


def test_equitable_enumeration_matches_bruteforce():
    rng = random.Random(1)
    for _ in range(40):
        g = random_colored_graph(rng, max_n=6)
        mine = {frozenset(cells) for cells in _equitable_partitions(g, 1 << 22)}
        assert mine == _brute_equitable(g)


def test_petersen_is_godsil():
    assert is_godsil(G.petersen())


def test_petersen_appendix_partitions_pass_stabilizer_test():
    pet = G.petersen()
    aut = automorphisms(pet)
    # 2-subset labels over {a..e}: ab=0 ac=1 ad=2 ae=3 bc=4 bd=5 be=6 cd=7 ce=8 de=9
    for cells in (((0, 7), (3, 6, 8, 9), (1, 2, 4, 5)),
                  ((0, 7), (3, 6, 8, 9), (1, 5), (2, 4))):
        cls_id = [0] * 10
        for i, cell in enumerate(cells):
            for v in cell:
                cls_id[v] = i
        stab = [p for p in aut.perms if all(cls_id[p[v]] == cls_id[v] for v in range(10))]
        parent = {}

        def find(x):
            while parent.get(x, x) != x:
                x = parent[x]
            return x

        for p in stab:
            for v in range(10):
                a, b = find(v), find(p[v])
                if a != b:
                    parent[a] = b
        orbits = {}
        for v in range(10):
            orbits.setdefault(find(v), []).append(v)
        assert {tuple(sorted(o)) for o in orbits.values()} == {tuple(sorted(c)) for c in cells}


def test_godsil_closed_under_known_members():
    # every compact graph is Godsil; cycles are compact
    for n in (3, 4, 5, 6, 7):
        assert is_godsil(G.cycle(n))


def test_tinhofer_examples():
    assert is_tinhofer_bruteforce(G.petersen()) is True
    assert is_tinhofer_bruteforce(G.johnson(4, 2)) is True
    sep, pairs, _ = separating_graph()
    result = is_tinhofer_bruteforce(sep, budget=16, node_budget=1 << 20)
    assert isinstance(result, FailingTranscript)
    # the transcript is replayable: forcing the same choices on two copies
    # drives the procedure to a wrong "non-isomorphic" answer
    replay = run_with_choices(sep, sep, result.steps)
    assert not replay.isomorphic
    # the failure flips exactly one of the two gadget output pairs
    p3, p4 = set(pairs[2]), set(pairs[3])
    touched = {frozenset((u, v)) for u, v in result.steps}
    flips = [(u, v) for u, v in result.steps if u != v and {u, v} in (p3, p4)]
    straight = [(u, v) for u, v in result.steps if u == v and (u in p3 or u in p4)]
    assert len(flips) == 1 and len(straight) >= 1


def test_tinhofer_implies_refinable_small():
    rng = random.Random(2)
    for _ in range(30):
        n = rng.randint(1, 6)
        g = maskcr.mask_to_graph(n, rng.getrandbits(n * (n - 1) // 2))
        if is_tinhofer_bruteforce(g) is True:
            assert is_refinable(g)


def test_budget_errors():
    with pytest.raises(BudgetExceededError):
        automorphisms(G.complete(4), budget=3)
    with pytest.raises(BudgetExceededError):
        is_godsil(G.petersen(), budget=9)
    with pytest.raises(BudgetExceededError):
        is_tinhofer_bruteforce(G.petersen(), budget=9)
    with pytest.raises(BudgetExceededError):
        isomorphic(G.complete(40), G.complete(40))
