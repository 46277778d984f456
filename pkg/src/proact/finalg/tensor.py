"""Cyclic decompositions and tensor products of finite abelian groups."""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, prod

import numpy as np
from sympy import Matrix
from sympy.matrices.normalforms import smith_normal_decomp

from ..config import MAX_ORDER
from ..errors import ContractError, ResourceError
from .structures import FinGroup


@dataclass(frozen=True)
class CyclicDecomposition:
    """An isomorphism ``A -> Z/d_1 x ... x Z/d_k`` (all d_i > 1).

    ``coords[x]`` is the coordinate vector of ``x``; ``basis[i]`` is the
    element whose coordinates are the i-th unit vector.
    """

    group: FinGroup
    orders: tuple
    coords: np.ndarray
    basis: tuple

    def element(self, vec):
        """The element with coordinate vector ``vec``."""
        key = tuple(int(v) % d for v, d in zip(vec, self.orders))
        return self._lookup[key]

    @property
    def _lookup(self):
        cache = self.__dict__.get("_lookup_cache")
        if cache is None:
            cache = {tuple(int(c) for c in row): x for x, row in enumerate(self.coords)}
            object.__setattr__(self, "_lookup_cache", cache)
        return cache


def cyclic_decomposition(A):
    if not A.is_abelian():
        raise ContractError("cyclic decomposition needs an abelian group")
    gens = list(A.generators())
    k = len(gens)
    if k == 0:
        return CyclicDecomposition(A, (), np.zeros((A.order, 0), dtype=np.int64), ())
    # word coordinates along a BFS tree; non-tree edges give relations
    word = np.full((A.order, k), 0, dtype=np.int64)
    seen = np.zeros(A.order, dtype=bool)
    seen[A.identity] = True
    frontier = [A.identity]
    rels = set()
    while frontier:
        nxt = []
        for x in frontier:
            for i, g in enumerate(gens):
                y = int(A.table[x, g])
                v = word[x].copy()
                v[i] += 1
                if not seen[y]:
                    seen[y] = True
                    word[y] = v
                    nxt.append(y)
                else:
                    r = tuple((v - word[y]).tolist())
                    if any(r):
                        rels.add(r)
        frontier = nxt
    M = Matrix(sorted(rels))
    S, U, V = smith_normal_decomp(M, domain=None)
    diag = [abs(int(S[i, i])) for i in range(k)]
    if 0 in diag:
        raise ContractError("relation lattice is not of full rank")
    Vn = np.array(V.tolist(), dtype=np.int64)
    keep = [i for i, d in enumerate(diag) if d > 1]
    orders = tuple(diag[i] for i in keep)
    full = word @ Vn
    coords = np.stack([full[:, i] % diag[i] for i in keep], axis=1) if keep else np.zeros((A.order, 0), dtype=np.int64)
    coords.setflags(write=False)
    lookup = {tuple(int(c) for c in row): x for x, row in enumerate(coords)}
    if len(lookup) != A.order:
        raise ContractError("cyclic decomposition is not injective")
    basis = tuple(lookup[tuple(int(i == j) for j in range(len(keep)))] for i in range(len(keep)))
    dec = CyclicDecomposition(A, orders, coords, basis)
    object.__setattr__(dec, "_lookup_cache", lookup)
    return dec


def _mixed_radix(orders):
    n = prod(orders) if orders else 1
    if n > MAX_ORDER:
        raise ResourceError(f"group of order {n} exceeds MAX_ORDER={MAX_ORDER}")
    ids = np.arange(n)
    digits = []
    for d in reversed(orders):
        digits.append(ids % d)
        ids = ids // d
    return n, np.stack(digits[::-1], axis=1) if orders else np.zeros((1, 0), dtype=np.int64)


def abelian_group(orders):
    """``Z/d_1 x ... x Z/d_k`` with mixed-radix ids (last factor fastest)."""
    orders = tuple(int(d) for d in orders)
    n, digits = _mixed_radix(orders)
    weights = np.array([prod(orders[i + 1:]) for i in range(len(orders))], dtype=np.int64)
    s = (digits[:, None, :] + digits[None, :, :]) % np.array(orders, dtype=np.int64)
    table = (s * weights).sum(axis=2) if orders else np.zeros((1, 1), dtype=np.int64)
    return FinGroup(table), digits, weights


@dataclass(frozen=True)
class Tensor:
    group: FinGroup
    bilinear: np.ndarray  # [a, b] -> a (x) b
    left: CyclicDecomposition
    right: CyclicDecomposition
    # factor k of the result is Z/gcd(d_i, e_j) for (i, j) = pairs[k]
    pairs: tuple
    digits: np.ndarray  # [t] -> coordinates along the pairs

    def pure(self, a, b):
        return int(self.bilinear[a, b])


def tensor_abelian(A, B):
    """Tensor product over the integers with its universal bilinear map."""
    if not (A.is_abelian() and B.is_abelian()):
        raise ContractError("tensor_abelian needs abelian groups")
    da, db = cyclic_decomposition(A), cyclic_decomposition(B)
    pairs, orders = [], []
    for i, d in enumerate(da.orders):
        for j, e in enumerate(db.orders):
            g = gcd(d, e)
            if g > 1:
                pairs.append((i, j))
                orders.append(g)
    T, digits, weights = abelian_group(orders)
    if pairs:
        ca, cb = da.coords, db.coords
        prods = np.stack([ca[:, i][:, None] * cb[:, j][None, :] % g for (i, j), g in zip(pairs, orders)], axis=2)
        bil = (prods * weights).sum(axis=2)
    else:
        bil = np.zeros((A.order, B.order), dtype=np.int64)
    bil.setflags(write=False)
    return Tensor(T, bil, da, db, tuple(pairs), digits)
