"""Random strict actions with surjective bonds, for property tests and demos."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from ..finalg import catalog
from ..finalg.constructions import (
    ideal_closure_mask,
    quotient_group_by_mask,
    quotient_ring_by_mask,
    substructure,
)
from ..finalg.homs import enumerate_homs
from ..prosys import Tower
from .common import first_by_key
from .group import ShiftedGroupAction
from .ring import ShiftedRingAction


def _joins(singles, join):
    found = {m.tobytes(): m for m in singles}
    frontier = list(found.values())
    while frontier:
        new = []
        for a in frontier:
            for b in list(found.values()):
                j = join(a | b)
                k = j.tobytes()
                if k not in found:
                    found[k] = j
                    new.append(j)
        frontier = new
    return sorted(found.values(), key=lambda m: (int(m.sum()), m.tobytes()))


def normal_subgroups(G):
    """Every normal subgroup as a boolean mask, smallest first."""
    singles = [G.normal_closure_mask([g]) for g in range(G.order)]
    return _joins(singles, lambda m: G.normal_closure_mask(np.flatnonzero(m)))


def ideals(R):
    """Every two-sided ideal as a boolean mask, smallest first."""
    singles = [ideal_closure_mask(R, [a]) for a in range(R.order)]
    return _joins(singles, lambda m: ideal_closure_mask(R, np.flatnonzero(m)))


@lru_cache(maxsize=None)
def _group_data(name):
    H = catalog.group(name)
    auts = [h.table for h in enumerate_homs(H, H) if h.is_injective()]
    return H, auts, normal_subgroups(H)


def _reps(proj, order):
    return first_by_key(proj, np.arange(len(proj)), order)[0]


def _perm_order(p):
    q, k = p.copy(), 1
    while not (q == np.arange(len(p))).all():
        q, k = p[q], k + 1
    return k


@dataclass
class GeneratedAction:
    acting: Tower
    carrier: Tower
    action: object
    depth: int
    description: dict = field(default_factory=dict)


def _subchain(rng, options, top, levels, contains):
    """Masks ``c[levels-1] = top``, each ``c[n]`` a superset of ``c[n+1]`` chosen from ``options``."""
    chain = [None] * levels
    chain[-1] = top
    for n in range(levels - 2, -1, -1):
        ok = [m for m in options if contains(m, n) and (m >= chain[n + 1]).all()]
        chain[n] = ok[rng.integers(len(ok))]
    return chain


def random_group_action(rng, max_order=12, depth=6):
    """A levelwise action ``G_n x X_n -> X_n`` with surjective bonds.

    Chooses groups ``K`` and ``H``, an automorphism ``alpha`` of ``H`` and a
    homomorphism from ``K`` to the cyclic group it generates; the towers are
    quotients by descending chains of ``alpha``-stable normal subgroups of
    ``H`` and of normal subgroups of ``K`` inside the kernels of the action.
    """
    names = [n for n, f in catalog.GROUPS.items() if f().order <= max_order]
    hname, kname = names[rng.integers(len(names))], names[rng.integers(len(names))]
    H, auts, hnormal = _group_data(hname)
    K, _, knormal = _group_data(kname)
    alpha = auts[rng.integers(len(auts))]
    k = _perm_order(alpha)
    powers = [np.arange(H.order)]
    for _ in range(k - 1):
        powers.append(alpha[powers[-1]])
    powers = np.stack(powers)
    phis = enumerate_homs(K, catalog.cyclic(k))
    phi = phis[rng.integers(len(phis))].table
    act = powers[phi]  # [g, x]
    levels = int(rng.integers(1, depth + 1))
    stable = [m for m in hnormal if m[alpha[m]].all()]
    trivial_h = np.arange(H.order) == H.identity
    nchain = _subchain(rng, stable, trivial_h, levels, lambda m, n: True)
    hproj = [quotient_group_by_mask(H, m) for m in nchain]

    def acts_trivially(g, n):
        Q, p = hproj[n]
        return (p.table[act[g]] == p.table).all()

    kers = [np.array([acts_trivially(g, n) for g in range(K.order)]) for n in range(levels)]
    top_opts = [m for m in knormal if (m <= kers[-1]).all()]
    mchain = _subchain(
        rng, knormal, top_opts[rng.integers(len(top_opts))], levels, lambda m, n: (m <= kers[n]).all()
    )
    kproj = [quotient_group_by_mask(K, m) for m in mchain]
    Xs = [q for q, _ in hproj]
    Gs = [q for q, _ in kproj]
    xp = [p.table for _, p in hproj]
    gp = [p.table for _, p in kproj]
    xr = [_reps(p, Q.order) for Q, p in zip(Xs, xp)]
    gr = [_reps(p, Q.order) for Q, p in zip(Gs, gp)]
    X = Tower.from_levels(Xs, [xp[n][xr[n + 1]] for n in range(levels - 1)])
    G = Tower.from_levels(Gs, [gp[n][gr[n + 1]] for n in range(levels - 1)])
    tables = [xp[n][act[gr[n][:, None], xr[n][None, :]]] for n in range(levels)]
    A = ShiftedGroupAction.levelwise(G, X, lambda n: tables[min(n, levels - 1)])
    desc = {"acting": kname, "carrier": hname, "automorphism_order": k, "levels": levels}
    return GeneratedAction(G, X, A, levels - 1, desc)


@lru_cache(maxsize=None)
def _ring_data(name):
    R = catalog.ring(name)
    return R, ideals(R)


def _ring_tower(R, masks):
    qs = [quotient_ring_by_mask(R, m) for m in masks]
    levels = [q for q, _ in qs]
    proj = [p.table for _, p in qs]
    reps = [_reps(p, Q.order) for Q, p in zip(levels, proj)]
    bonds = [proj[n][reps[n + 1]] for n in range(len(qs) - 1)]
    return Tower.from_levels(levels, bonds), proj, reps


def random_ring_action(rng, depth=6, unital=True):
    """A levelwise action of ``R_n = T/J_n`` on ``S_n = I/I_n`` by multiplication.

    ``T`` is a catalog ring, ``I`` an ideal of it and ``J_n ⊆ I_n ⊆ I``
    descending chains of ideals.  With ``unital=False`` the acting tower is
    ``I/I_n`` itself, so the action is non-unital in general.
    """
    pool = [n for n, f in catalog.RINGS.items() if f().is_unital] if unital else list(catalog.RINGS)
    name = pool[rng.integers(len(pool))]
    T, ids = _ring_data(name)
    nonzero = [m for m in ids if m.sum() > 1] or ids
    Imask = nonzero[rng.integers(len(nonzero))]
    levels = int(rng.integers(1, depth + 1))
    zero = np.arange(T.order) == T.zero
    inside = [m for m in ids if (m <= Imask).all()]
    ichain = _subchain(rng, inside, zero, levels, lambda m, n: True)
    I, inc = substructure(T, Imask)
    rel = np.full(T.order, -1, dtype=np.int64)
    rel[inc.table] = np.arange(I.order)
    S, sproj, sreps = _ring_tower(I, [m[inc.table] for m in ichain])
    if unital:
        jchain = _subchain(rng, ids, zero, levels, lambda m, n: (m <= ichain[n]).all())
        R, rproj, rreps = _ring_tower(T, jchain)
        lift = lambda n: rreps[n]  # noqa: E731
    else:
        R, rproj, rreps = S, sproj, sreps
        lift = lambda n: inc.table[sreps[n]]  # noqa: E731

    def tables(n):
        n = min(n, levels - 1)
        a = inc.table[sreps[n]]
        p = lift(n)
        left = sproj[n][rel[T.mul_table[p[:, None], a[None, :]]]]
        right = sproj[n][rel[T.mul_table[a[:, None], p[None, :]]]]
        return left, right

    A = ShiftedRingAction.levelwise(R, S, lambda n: tables(n)[0], lambda n: tables(n)[1], unital=unital)
    desc = {"ring": name, "ideal_order": int(Imask.sum()), "levels": levels, "unital": unital}
    return GeneratedAction(R, S, A, levels - 1, desc)
