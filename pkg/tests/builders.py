"""Random towers and level morphisms for property tests."""

import numpy as np

from proact.finalg import enumerate_homs, quotient_by_normal_closure
from proact.finalg.catalog import GROUPS, group
from proact.prosys import RawProMorphism, Tower

SMALL = sorted(name for name in GROUPS if GROUPS[name]().order <= 8)


def _decreasing_seeds(rng, G, depth):
    """Seed sets S_0 ⊇ S_1 ⊇ ... ⊇ S_depth (the last one empty)."""
    pool = list(rng.permutation(G.order)[: rng.integers(0, 3)])
    cuts = sorted(rng.integers(0, len(pool) + 1, size=depth + 1).tolist(), reverse=True)
    cuts[-1] = 0
    return [pool[:c] for c in cuts]


def quotient_tower(G, seeds_by_level):
    """``n -> G / ncl(seeds_n)`` with bonds induced by the identity of G."""
    quots = [quotient_by_normal_closure(G, s) for s in seeds_by_level]
    labels = [p.table for _, p in quots]
    bonds = []
    for n in range(len(quots) - 1):
        b = np.zeros(quots[n + 1][0].order, dtype=np.int64)
        b[labels[n + 1]] = labels[n]
        bonds.append(b)
    return Tower.from_levels([q for q, _ in quots], bonds), labels


def random_level_morphism(rng, depth=4):
    """A level morphism between quotient towers induced by a hom ``H -> K``."""
    H = group(SMALL[rng.integers(len(SMALL))])
    K = group(SMALL[rng.integers(len(SMALL))])
    homs = enumerate_homs(H, K)
    phi = homs[rng.integers(len(homs))].table
    hs = _decreasing_seeds(rng, H, depth)
    ks = _decreasing_seeds(rng, K, depth)
    X, lx = quotient_tower(H, hs)
    # the target kernels must contain the images of the source kernels
    Y, ly = quotient_tower(K, [list(phi[s]) + k for s, k in zip(hs, ks)])

    def maps(n):
        m = min(n, depth)
        f = np.zeros(X.level(n).order, dtype=np.int64)
        f[lx[m]] = ly[m][phi]
        return f

    return RawProMorphism.level_morphism(X, Y, maps)
