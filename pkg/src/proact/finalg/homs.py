"""Enumeration of homomorphisms between finite structures."""

from __future__ import annotations

import itertools

import numpy as np

from ..config import DEFAULT_SIZE_BOUND
from ..errors import ResourceError, StructureError
from .structures import FinGroup, FinLieAlg, FinRng, FinSet, Hom

MAX_HOMS = 200_000


def _extend(table, gens, images, target_table, source_id, target_id):
    """Extend generator images multiplicatively; None on a conflict.

    Returns the partial map on the submonoid generated by ``gens`` (-1
    elsewhere).  Consistency on every edge ``x -> x*g`` makes the map
    multiplicative on that subgroup.
    """
    f = np.full(table.shape[0], -1, dtype=np.int64)
    f[source_id] = target_id
    frontier = [source_id]
    while frontier:
        nxt = []
        for x in frontier:
            fx = f[x]
            for g, fg in zip(gens, images):
                y = table[x, g]
                v = target_table[fx, fg]
                if f[y] < 0:
                    f[y] = v
                    nxt.append(y)
                elif f[y] != v:
                    return None
        frontier = nxt
    return f


def _group_homs(A, B, limit):
    """All group homs ``A -> B`` as tables (A, B are FinGroups)."""
    gens = A.generators()
    out = []

    def rec(k, images):
        f = _extend(A.table, gens[:k], images, B.table, A.identity, B.identity)
        if f is None:
            return
        if k == len(gens):
            out.append(f)
            if len(out) > limit:
                raise ResourceError(f"more than {limit} homomorphisms")
            return
        # an image must have order dividing the generator's order
        n = A.element_order(gens[k])
        pw = B.power_table(n)
        for b in np.flatnonzero(pw == B.identity):
            rec(k + 1, images + [int(b)])

    rec(0, [])
    return out


def enumerate_homs(A, B, *, bound=None, unital=None, limit=MAX_HOMS):
    """All homomorphisms ``A -> B`` of the shared theory, sorted by table.

    For rings ``unital`` defaults to requiring ``f(1) = 1`` exactly when
    both rings are unital.
    """
    bound = DEFAULT_SIZE_BOUND if bound is None else bound
    if A.order > bound:
        raise ResourceError(f"source of order {A.order} exceeds the size bound {bound}")
    if isinstance(A, FinSet) and isinstance(B, FinSet):
        if B.order ** A.order > limit:
            raise ResourceError(f"more than {limit} maps")
        tables = [np.array(t, dtype=np.int64) for t in itertools.product(range(B.order), repeat=A.order)]
        homs = [Hom(A, B, t, check=False) for t in tables]
        return homs
    if isinstance(A, FinGroup) and isinstance(B, FinGroup):
        tables = _group_homs(A, B, limit)
        flag = False
    elif isinstance(A, FinRng) and isinstance(B, FinRng):
        if unital is None:
            unital = A.is_unital and B.is_unital
        gens = A.add.generators()
        tables = []
        for f in _group_homs(A.add, B.add, limit):
            ok = all(f[A.mul_table[x, y]] == B.mul_table[f[x], f[y]] for x in gens for y in gens)
            if ok and unital and f[A.one] != B.one:
                ok = False
            if ok:
                tables.append(f)
        flag = bool(unital)
    elif isinstance(A, FinLieAlg) and isinstance(B, FinLieAlg):
        if A.scalars.order != B.scalars.order:
            raise StructureError("Lie algebras over different scalar rings")
        gens = A.add.generators()
        tables = []
        for f in _group_homs(A.add, B.add, limit):
            if not all((f[A.smul[:, x]] == B.smul[:, f[x]]).all() for x in gens):
                continue
            if all(f[A.bracket[x, y]] == B.bracket[f[x], f[y]] for x in gens for y in gens):
                tables.append(f)
        flag = False
    else:
        raise StructureError("enumerate_homs needs two structures of the same kind")
    tables.sort(key=lambda t: tuple(t.tolist()))
    return [Hom(A, B, t, check=False, unital=flag) for t in tables]


def count_homs(A, B, **kw):
    return len(enumerate_homs(A, B, **kw))


def find_isomorphism(A, B, **kw):
    """Some isomorphism ``A -> B`` or None."""
    if A.order != B.order or type(A) is not type(B):
        return None
    for h in enumerate_homs(A, B, **kw):
        if h.is_injective():
            return h
    return None
