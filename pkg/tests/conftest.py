import random

from crkit import graphs as G


def random_relabel(g, seed):
    rng = random.Random(seed)
    perm = list(range(g.n))
    rng.shuffle(perm)
    return g.relabel(perm), perm


def random_colored_graph(rng, max_n=8, colored_prob=0.4):
    n = rng.randint(1, max_n)
    g = G.random_gnp(n, seed=rng.randint(0, 10**9), p=rng.choice([0.2, 0.5, 0.8]))
    if rng.random() < colored_prob and n >= 2:
        k = rng.randint(1, min(3, n))
        cols = [rng.randrange(k) for _ in range(n)]
        used = sorted(set(cols))
        remap = {c: i for i, c in enumerate(used)}
        g = g.with_colors([remap[c] for c in cols])
    return g
