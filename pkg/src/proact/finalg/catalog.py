"""Named small groups, rings and Lie algebras."""

from __future__ import annotations

import itertools

import numpy as np

from ..errors import ContractError
from .constructions import direct_product, zmod_ring
from .structures import FinGroup, FinLieAlg, FinRng
from .tensor import abelian_group


def table_from_elements(elements, op):
    """Operation table of ``op`` on a list of hashable elements."""
    index = {e: i for i, e in enumerate(elements)}
    n = len(elements)
    t = np.empty((n, n), dtype=np.int64)
    for i, a in enumerate(elements):
        for j, b in enumerate(elements):
            t[i, j] = index[op(a, b)]
    return t


def cyclic(n):
    a = np.arange(n)
    return FinGroup((a[:, None] + a[None, :]) % n, name=f"Z{n}")


def elementary(p, k):
    G, _, _ = abelian_group((p,) * k)
    return G


def dihedral(n):
    """Dihedral group of order 2n; r^i s^j has id ``i + n*j``."""
    els = [(i, j) for j in range(2) for i in range(n)]
    return FinGroup(
        table_from_elements(els, lambda a, b: ((a[0] + (-1) ** a[1] * b[0]) % n, (a[1] + b[1]) % 2)),
        name=f"D{n}",
    )


def dicyclic(n):
    """Dicyclic group of order 4n (quaternion group for n = 2)."""
    m = 2 * n

    def op(a, b):
        (i, j), (k, l) = a, b
        if j == 0:
            return ((i + k) % m, l)
        if l == 0:
            return ((i - k) % m, 1)
        return ((i - k + n) % m, 0)

    els = [(i, j) for j in range(2) for i in range(m)]
    return FinGroup(table_from_elements(els, op), name=f"Dic{n}")


def permutation_group(gens, name=None):
    """Group generated by permutations given as tuples."""
    gens = [tuple(g) for g in gens]
    n = len(gens[0])
    ident = tuple(range(n))
    els = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = tuple(x[g[i]] for i in range(n))
                if y not in els:
                    els.add(y)
                    nxt.append(y)
        frontier = nxt
    els = sorted(els)
    return FinGroup(table_from_elements(els, lambda a, b: tuple(a[b[i]] for i in range(n))), name=name)


def symmetric(n):
    gens = [tuple([1, 0] + list(range(2, n)))] if n > 1 else [(0,)]
    if n > 2:
        gens.append(tuple(list(range(1, n)) + [0]))
    return permutation_group(gens, name=f"S{n}")


def alternating4():
    return permutation_group([(1, 2, 0, 3), (1, 0, 3, 2)], name="A4")


def zero_ring(n):
    """``Z/n`` with zero multiplication."""
    a = np.arange(n)
    return FinRng((a[:, None] + a[None, :]) % n, np.zeros((n, n), dtype=np.int64), name=f"Z{n}^0")


def matrix_ring(p, upper=False):
    """2x2 matrices over ``Z/p`` (upper triangular ones when ``upper``)."""
    els = [m for m in itertools.product(range(p), repeat=4) if not (upper and m[2])]

    def add(a, b):
        return tuple((x + y) % p for x, y in zip(a, b))

    def mul(a, b):
        return (
            (a[0] * b[0] + a[1] * b[2]) % p,
            (a[0] * b[1] + a[1] * b[3]) % p,
            (a[2] * b[0] + a[3] * b[2]) % p,
            (a[2] * b[1] + a[3] * b[3]) % p,
        )

    one = els.index((1, 0, 0, 1))
    name = f"UT2(F{p})" if upper else f"M2(F{p})"
    return FinRng(table_from_elements(els, add), table_from_elements(els, mul), one=one, name=name)


def strict_upper(p):
    """Strictly upper triangular 2x2 matrices: ``Z/p`` with zero product."""
    return zero_ring(p)


def poly_quotient(p, coeffs):
    """``F_p[x] / (x^k + c_{k-1} x^{k-1} + ... + c_0)`` for ``coeffs = [c_0, ..., c_{k-1}]``."""
    k = len(coeffs)
    els = list(itertools.product(range(p), repeat=k))

    def mul(a, b):
        prodc = [0] * (2 * k - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                prodc[i + j] += x * y
        for d in range(2 * k - 2, k - 1, -1):
            c = prodc[d]
            prodc[d] = 0
            for i in range(k):
                prodc[d - k + i] -= c * coeffs[i]
        return tuple(v % p for v in prodc[:k])

    def add(a, b):
        return tuple((x + y) % p for x, y in zip(a, b))

    one = els.index(tuple([1] + [0] * (k - 1)))
    return FinRng(table_from_elements(els, add), table_from_elements(els, mul), one=one)


def field4():
    return poly_quotient(2, [1, 1])


def dual_numbers(p):
    return poly_quotient(p, [0, 0])


def prime_field(p):
    return zmod_ring(p)


def lie_from_constants(p, dim, constants):
    """Lie algebra on ``F_p^dim`` with ``[e_i, e_j] = sum_k constants[i][j][k] e_k``."""
    K = zmod_ring(p)
    c = np.asarray(constants, dtype=np.int64).reshape(dim, dim, dim) % p
    G, digits, weights = abelian_group((p,) * dim)
    n = G.order
    vec = digits  # [x] -> coordinates
    # bracket of coordinate vectors: sum_{ij} x_i y_j c_ij
    br = np.einsum("ai,bj,ijk->abk", vec, vec, c) % p if dim else np.zeros((1, 1, 0), dtype=np.int64)
    bracket = (br * weights).sum(axis=2) if dim else np.zeros((1, 1), dtype=np.int64)
    smul = ((np.arange(p)[:, None, None] * vec[None, :, :]) % p * weights).sum(axis=2) if dim else np.zeros((p, 1), dtype=np.int64)
    if n == 1:
        smul = np.zeros((p, 1), dtype=np.int64)
    return FinLieAlg(K, G, smul, bracket)


def abelian_lie(p, dim):
    return lie_from_constants(p, dim, np.zeros((dim, dim, dim), dtype=np.int64))


def vector_coords(p, dim):
    """Coordinate table of the ids used by ``lie_from_constants`` and ``elementary``."""
    _, digits, _ = abelian_group((p,) * dim)
    return digits


GROUPS = {
    "Z1": lambda: cyclic(1),
    "Z2": lambda: cyclic(2),
    "Z3": lambda: cyclic(3),
    "Z4": lambda: cyclic(4),
    "Z5": lambda: cyclic(5),
    "Z6": lambda: cyclic(6),
    "Z8": lambda: cyclic(8),
    "V4": lambda: elementary(2, 2),
    "Z2xZ4": lambda: direct_product(cyclic(2), cyclic(4)),
    "Z2^3": lambda: elementary(2, 3),
    "Z2xZ6": lambda: direct_product(cyclic(2), cyclic(6)),
    "S3": lambda: dihedral(3),
    "D4": lambda: dihedral(4),
    "Q8": lambda: dicyclic(2),
    "D5": lambda: dihedral(5),
    "A4": alternating4,
    "D6": lambda: dihedral(6),
    "Dic3": lambda: dicyclic(3),
}

RINGS = {
    "Z2": lambda: zmod_ring(2),
    "Z3": lambda: zmod_ring(3),
    "Z4": lambda: zmod_ring(4),
    "Z6": lambda: zmod_ring(6),
    "Z8": lambda: zmod_ring(8),
    "F2xF2": lambda: direct_product(zmod_ring(2), zmod_ring(2)),
    "F4": field4,
    "F2[e]": lambda: dual_numbers(2),
    "UT2(F2)": lambda: matrix_ring(2, upper=True),
    "M2(F2)": lambda: matrix_ring(2),
    "Z2^0": lambda: zero_ring(2),
    "Z4^0": lambda: zero_ring(4),
}


def group(name):
    try:
        return GROUPS[name]()
    except KeyError:
        raise ContractError(f"unknown group {name!r}") from None


def ring(name):
    try:
        return RINGS[name]()
    except KeyError:
        raise ContractError(f"unknown ring {name!r}") from None
