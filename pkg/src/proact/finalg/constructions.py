"""Quotients, substructures, products and split extensions of finite structures."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ContractError, StructureError
from .structures import FinGroup, FinLieAlg, FinRng, FinSet, Hom, additive_group


def _seed_array(S, seeds):
    seeds = np.array(sorted({int(s) for s in seeds}), dtype=np.int64)
    if seeds.size and (seeds.min() < 0 or seeds.max() >= S.order):
        raise ContractError("seed elements must belong to the structure")
    return seeds


def _coset_labels(group, mask):
    """Label each element by its coset of the subgroup ``mask`` (normal or additive).

    Labels are ordered by the smallest element of each coset, so the
    coset of the identity gets the label of the identity's position.
    """
    members = np.flatnonzero(mask)
    cosets = group.table[:, members]  # x * n
    rep = cosets.min(axis=1)
    reps = np.unique(rep)
    label = np.searchsorted(reps, rep)
    return reps, label


def quotient_group_by_mask(G, mask):
    if not G.is_normal_mask(mask):
        raise ContractError("subgroup is not normal")
    reps, label = _coset_labels(G, mask)
    table = label[G.table[np.ix_(reps, reps)]]
    Q = FinGroup(table)
    return Q, Hom(G, Q, label, check=False)


def quotient_by_normal_closure(G, seeds):
    """Quotient of ``G`` by the normal closure of ``seeds``, with the projection."""
    if not isinstance(G, FinGroup):
        raise StructureError("quotient_by_normal_closure needs a FinGroup")
    mask = G.normal_closure_mask(_seed_array(G, seeds))
    return quotient_group_by_mask(G, mask)


def _check_additive(R, f):
    a = R.add.table
    if not (f[a] == a[f[:, None], f[None, :]]).all():
        return False
    return True


def ideal_closure_mask(R, seeds, stable_under=()):
    """Smallest two-sided ideal containing ``seeds`` and closed under the maps."""
    maps = [np.asarray(f, dtype=np.int64) for f in stable_under]
    for f in maps:
        if f.shape != (R.order,) or not _check_additive(R, f):
            raise ContractError("ideal closure: a stabilizing map is not additive")
    mask = R.add.subgroup_mask(_seed_array(R, seeds))
    while True:
        members = np.flatnonzero(mask)
        grown = [R.mul_table[:, members].ravel(), R.mul_table[members, :].ravel()]
        grown += [f[members] for f in maps]
        new = np.unique(np.concatenate(grown))
        if mask[new].all():
            return mask
        mask = R.add.subgroup_mask(np.concatenate([members, new]))


def quotient_ring_by_mask(R, mask):
    reps, label = _coset_labels(R.add, mask)
    add = FinGroup(label[R.add.table[np.ix_(reps, reps)]])
    mul = label[R.mul_table[np.ix_(reps, reps)]]
    one = None if R.one is None else int(label[R.one])
    Q = FinRng(add, mul, one=one)
    return Q, Hom(R, Q, label, check=False, unital=R.is_unital)


def quotient_by_ideal_closure(R, seeds, stable_under=()):
    """Quotient of ``R`` by the ideal generated by ``seeds`` (stable under maps)."""
    if not isinstance(R, FinRng):
        raise StructureError("quotient_by_ideal_closure needs a FinRng")
    mask = ideal_closure_mask(R, seeds, stable_under)
    return quotient_ring_by_mask(R, mask)


def lie_ideal_closure_mask(L, seeds):
    mask = L.add.subgroup_mask(_seed_array(L, seeds))
    while True:
        members = np.flatnonzero(mask)
        new = np.unique(np.concatenate([L.bracket[:, members].ravel(), L.smul[:, members].ravel()]))
        if mask[new].all():
            return mask
        mask = L.add.subgroup_mask(np.concatenate([members, new]))


def quotient_lie_by_mask(L, mask):
    reps, label = _coset_labels(L.add, mask)
    add = FinGroup(label[L.add.table[np.ix_(reps, reps)]])
    Q = FinLieAlg(
        L.scalars,
        add,
        label[L.smul[:, reps]],
        label[L.bracket[np.ix_(reps, reps)]],
    )
    return Q, Hom(L, Q, label, check=False)


def quotient_by_kernel_seeds(S, seeds):
    """Quotient by the smallest congruence of the structure's kind containing seeds."""
    if isinstance(S, FinGroup):
        return quotient_by_normal_closure(S, seeds)
    if isinstance(S, FinRng):
        return quotient_by_ideal_closure(S, seeds)
    if isinstance(S, FinLieAlg):
        return quotient_lie_by_mask(S, lie_ideal_closure_mask(S, seeds))
    raise StructureError(f"no kernel quotients for {S!r}")


def abelianize(G):
    return quotient_by_normal_closure(G, G.commutator_seeds())


# -- substructures ----------------------------------------------------------


def substructure(S, mask):
    """The substructure on the elements of ``mask`` with its inclusion.

    Elements keep their relative order.  Raises if ``mask`` is not closed.
    """
    mask = np.asarray(mask, dtype=bool)
    ids = np.flatnonzero(mask)
    relabel = np.full(S.order, -1, dtype=np.int64)
    relabel[ids] = np.arange(ids.size)

    def restrict(table):
        sub = table[np.ix_(ids, ids)]
        if (relabel[sub] < 0).any():
            raise StructureError("subset is not closed under the operations")
        return relabel[sub]

    if isinstance(S, FinSet):
        Sub = FinSet(ids.size)
    elif isinstance(S, FinGroup):
        Sub = FinGroup(restrict(S.table))
    elif isinstance(S, FinRng):
        one = None
        if S.one is not None and mask[S.one]:
            one = int(relabel[S.one])
        Sub = FinRng(FinGroup(restrict(S.add.table)), restrict(S.mul_table), one=one)
    elif isinstance(S, FinLieAlg):
        smul = S.smul[:, ids]
        if (relabel[smul] < 0).any():
            raise StructureError("subset is not closed under scalars")
        Sub = FinLieAlg(S.scalars, FinGroup(restrict(S.add.table)), relabel[smul], restrict(S.bracket))
    else:
        raise StructureError(f"no substructures for {S!r}")
    return Sub, Hom(Sub, S, ids, check=False)


def image_mask(f):
    mask = np.zeros(f.target.order, dtype=bool)
    mask[np.asarray(f.table)] = True
    return mask


def subring_generated(R, seeds):
    """Smallest subring (closed under + and *) containing ``seeds`` and zero."""
    mask = R.add.subgroup_mask(_seed_array(R, seeds))
    while True:
        members = np.flatnonzero(mask)
        prods = np.unique(R.mul_table[np.ix_(members, members)])
        if mask[prods].all():
            return mask
        mask = R.add.subgroup_mask(np.concatenate([members, prods]))


# -- products -----------------------------------------------------------------


def _pair_table(ta, tb):
    na, nb = ta.shape[0], tb.shape[0]
    return (ta[:, None, :, None] * nb + tb[None, :, None, :]).reshape(na * nb, na * nb)


def direct_product(A, B):
    """Product with element (a, b) at id ``a * |B| + b``."""
    if isinstance(A, FinSet) and isinstance(B, FinSet):
        return FinSet(A.order * B.order)
    if isinstance(A, FinGroup) and isinstance(B, FinGroup):
        return FinGroup(_pair_table(A.table, B.table))
    if isinstance(A, FinRng) and isinstance(B, FinRng):
        one = None
        if A.is_unital and B.is_unital:
            one = A.one * B.order + B.one
        add = FinGroup(_pair_table(A.add.table, B.add.table))
        return FinRng(add, _pair_table(A.mul_table, B.mul_table), one=one)
    raise StructureError("direct_product needs two structures of the same kind")


def pair_id(a, b, nb):
    return a * nb + b


def split_pair(e, nb):
    return divmod(e, nb)


# -- split extensions ---------------------------------------------------------


@dataclass(frozen=True)
class SplitExtension:
    """``kernel -> total <-> base`` with ``project o section = id``."""

    kernel: object
    total: object
    base: object
    include: Hom
    project: Hom
    section: Hom

    def check(self):
        """Validate the split extension laws; returns a list of violated laws."""
        bad = []
        for name, h in (("include", self.include), ("project", self.project), ("section", self.section)):
            if not h.is_hom():
                bad.append(f"{name} is not a homomorphism")
        if not (self.project.table[self.section.table] == np.arange(self.base.order)).all():
            bad.append("p o s != id")
        if not self.include.is_injective():
            bad.append("i is not injective")
        ker = self.project.kernel_mask()
        img = image_mask(self.include)
        if not (ker == img).all():
            bad.append("image of i != kernel of p")
        if self.total.order != self.kernel.order * self.base.order:
            bad.append("carrier is not the product of the carriers")
        return bad


def check_group_action(G, X, act):
    act = np.asarray(act, dtype=np.int64)
    if act.shape != (G.order, X.order):
        raise ContractError("action table has the wrong shape")
    ar = np.arange(X.order)
    if not (act[G.identity] == ar).all():
        raise ContractError("action law a(1, x) = x fails", law="a(1, x) = x")
    if not (act[G.table] == act[np.arange(G.order)[:, None, None], act[None, :, :]]).all():
        raise ContractError("action law a(gh, x) = a(g, a(h, x)) fails", law="a(gh, x) = a(g, a(h, x))")
    if not (act[:, X.table] == X.table[act[:, :, None], act[:, None, :]]).all():
        raise ContractError("action law a(g, xy) = a(g, x) a(g, y) fails", law="a(g, xy) = a(g, x)a(g, y)")
    return act


def check_ring_action(R, S, left, right, *, unital=False, central=None):
    """Validate the bimodule-ring laws for ``left: R x S -> S``, ``right: S x R -> S``."""
    l = np.asarray(left, dtype=np.int64)
    r = np.asarray(right, dtype=np.int64)
    if l.shape != (R.order, S.order) or r.shape != (S.order, R.order):
        raise ContractError("action tables have the wrong shape")
    sa, sm = S.add.table, S.mul_table
    ra, rm = R.add.table, R.mul_table
    nR, nS = np.arange(R.order), np.arange(S.order)

    def need(ok, law):
        if not ok:
            raise ContractError(f"action law {law} fails", law=law)

    need((l[:, sa] == sa[l[:, :, None], l[:, None, :]]).all(), "l(p, a + b) = l(p, a) + l(p, b)")
    need((l[ra] == sa[l[:, None, :], l[None, :, :]]).all(), "l(p + q, a) = l(p, a) + l(q, a)")
    need((r[sa] == sa[r[:, None, :], r[None, :, :]]).all(), "r(a + b, p) = r(a, p) + r(b, p)")
    need((r[:, ra] == sa[r[:, :, None], r[:, None, :]]).all(), "r(a, p + q) = r(a, p) + r(a, q)")
    need((l[rm] == l[nR[:, None, None], l[None, :, :]]).all(), "(pq)a = p(qa)")
    need((r[:, rm] == r[r[:, :, None], nR[None, None, :]]).all(), "a(pq) = (ap)q")
    # (pa)q = p(aq): r(l(p, a), q) == l(p, r(a, q))
    need((r[l[:, :, None], nR[None, None, :]] == l[nR[:, None, None], r[None, :, :]]).all(), "(pa)q = p(aq)")
    # p(ab) = (pa)b
    need((l[:, sm] == sm[l[:, :, None], nS[None, None, :]]).all(), "p(ab) = (pa)b")
    # (ap)b = a(pb)
    need((sm[r[:, :, None], nS[None, None, :]] == sm[nS[:, None, None], l[None, :, :]]).all(), "(ap)b = a(pb)")
    # a(bp) = (ab)p
    need((sm[nS[:, None, None], r[None, :, :]] == r[sm[:, :, None], nR[None, None, :]]).all(), "a(bp) = (ab)p")
    if unital:
        need(R.is_unital, "R is unital")
        need((l[R.one] == nS).all() and (r[:, R.one] == nS).all(), "1a = a = a1")
    if central is not None:
        ks = np.flatnonzero(np.asarray(central, dtype=bool))
        need((l[ks, :] == r[:, ks].T).all(), "ka = ak")
    return l, r


def check_lie_action(L, M, act):
    act = np.asarray(act, dtype=np.int64)
    if act.shape != (L.order, M.order):
        raise ContractError("action table has the wrong shape")
    ma, mb, lb = M.add.table, M.bracket, L.bracket
    nL, nM = np.arange(L.order), np.arange(M.order)
    if not (act[:, ma] == ma[act[:, :, None], act[:, None, :]]).all():
        raise ContractError("Lie action is not additive in the module", law="bilinear")
    if not (act[L.add.table] == ma[act[:, None, :], act[None, :, :]]).all():
        raise ContractError("Lie action is not additive in the algebra", law="bilinear")
    if not (act[L.smul] == M.smul[:, act]).all():
        raise ContractError("Lie action is not homogeneous", law="bilinear")
    # a(x, [u, v]) = [a(x, u), v] + [u, a(x, v)]
    lhs = act[:, mb]
    rhs = ma[mb[act[:, :, None], nM[None, None, :]], mb[nM[None, :, None], act[:, None, :]]]
    if not (lhs == rhs).all():
        raise ContractError("Lie action is not by derivations", law="a(x, [u, v]) = [a(x, u), v] + [u, a(x, v)]")
    neg = M.add.inverse
    lhs = act[lb]
    rhs = ma[act[nL[:, None, None], act[None, :, :]], neg[act[nL[None, :, None], act[:, None, :]]]]
    if not (lhs == rhs).all():
        raise ContractError("Lie action does not respect brackets", law="a([x, y], u) = a(x, a(y, u)) - a(y, a(x, u))")
    return act


def classical_semidirect(X, G, act, right=None, *, unital=None, central=None):
    """Classical semidirect product ``X ⋊ G`` with its split extension maps.

    ``act`` is an action table ``G x X -> X`` for groups and Lie algebras;
    for rings pass the left action as ``act`` and the right one as ``right``.
    Element ``(x, g)`` has id ``x * |G| + g``.
    """
    nX, nG = X.order, G.order
    xs = np.repeat(np.arange(nX), nG)
    gs = np.tile(np.arange(nG), nX)
    if isinstance(X, FinGroup) and isinstance(G, FinGroup):
        a = check_group_action(G, X, act)
        # (x, g)(y, h) = (x a(g, y), gh)
        x2 = X.table[xs[:, None], a[gs[:, None], xs[None, :]]]
        g2 = G.table[gs[:, None], gs[None, :]]
        total = FinGroup(x2 * nG + g2)
        neutral_x, neutral_g = X.identity, G.identity
    elif isinstance(X, FinRng) and isinstance(G, FinRng):
        if right is None:
            raise ContractError("ring semidirect products need both left and right actions")
        if unital is None:
            unital = G.is_unital
        l, r = check_ring_action(G, X, act, right, unital=unital, central=central)
        add = FinGroup(_pair_table(X.add.table, G.add.table))
        sa = X.add.table
        # (a, p)(b, q) = (ab + l(p, b) + r(a, q), pq)
        a2 = sa[sa[X.mul_table[xs[:, None], xs[None, :]], l[gs[:, None], xs[None, :]]], r[xs[:, None], gs[None, :]]]
        p2 = G.mul_table[gs[:, None], gs[None, :]]
        one = X.zero * nG + G.one if (unital and G.is_unital) else None
        total = FinRng(add, a2 * nG + p2, one=one)
        neutral_x, neutral_g = X.zero, G.zero
    elif isinstance(X, FinLieAlg) and isinstance(G, FinLieAlg):
        a = check_lie_action(G, X, act)
        add = FinGroup(_pair_table(X.add.table, G.add.table))
        ma, neg = X.add.table, X.add.inverse
        # [(u, x), (v, y)] = ([u, v] + a(x, v) - a(y, u), [x, y])
        u2 = ma[ma[X.bracket[xs[:, None], xs[None, :]], a[gs[:, None], xs[None, :]]], neg[a[gs[None, :], xs[:, None]]]]
        x2 = G.bracket[gs[:, None], gs[None, :]]
        smul = X.smul[:, xs] * nG + G.smul[:, gs]
        total = FinLieAlg(X.scalars, add, smul, u2 * nG + x2)
        neutral_x, neutral_g = X.zero, G.zero
    else:
        raise StructureError("classical_semidirect needs two structures of the same kind")
    include = Hom(X, total, np.arange(nX) * nG + neutral_g)
    project = Hom(total, G, gs, unital=bool(unital))
    section = Hom(G, total, neutral_x * nG + np.arange(nG), unital=bool(unital))
    return SplitExtension(X, total, G, include, project, section)


def direct_sum_extension(X, G):
    """The split extension of the trivial action."""
    if isinstance(X, FinGroup):
        return classical_semidirect(X, G, np.tile(np.arange(X.order), (G.order, 1)))
    if isinstance(X, FinRng):
        zl = np.full((G.order, X.order), X.zero)
        return classical_semidirect(X, G, zl, zl.T.copy(), unital=False)
    raise StructureError("direct_sum_extension supports groups and rings")


@dataclass(frozen=True)
class Unitalization:
    ring: FinRng
    embedding: Hom
    augmentation: Hom


def zmod_ring(m):
    ar = np.arange(m)
    return FinRng(FinGroup((ar[:, None] + ar[None, :]) % m), (ar[:, None] * ar[None, :]) % m, one=1 % m)


def unitalize_mod_m(R, m):
    """Unital ring on ``R x Z/m`` with unit (0, 1); element (r, k) at id ``r * m + k``."""
    if not isinstance(R, FinRng):
        raise StructureError("unitalize_mod_m needs a FinRng")
    if m < 1:
        raise ContractError("m must be positive")
    mult = R.multiple_table(m)
    if not (mult == R.zero).all():
        raise ContractError(f"{m} does not annihilate the ring additively")
    n = R.order
    rs = np.repeat(np.arange(n), m)
    ks = np.tile(np.arange(m), n)
    multiples = np.stack([R.multiple_table(k) for k in range(m)])  # [k, r] -> k*r
    add = FinGroup(_pair_table(R.add.table, (np.arange(m)[:, None] + np.arange(m)[None, :]) % m))
    sa = R.add.table
    # (r, n)(s, k) = (rs + n s + k r, nk)
    r2 = sa[sa[R.mul_table[rs[:, None], rs[None, :]], multiples[ks[:, None], rs[None, :]]], multiples[ks[None, :], rs[:, None]]]
    k2 = (ks[:, None] * ks[None, :]) % m
    ring = FinRng(add, r2 * m + k2, one=R.zero * m + 1 % m)
    embedding = Hom(R, ring, np.arange(n) * m)
    augmentation = Hom(ring, zmod_ring(m), ks, unital=True)
    return Unitalization(ring, embedding, augmentation)
