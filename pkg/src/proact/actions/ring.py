"""Ring actions with shifted indices: normalization and strictification.

One pipeline handles unital algebras ``K -> R`` acting on rings; unital
rings, commutative unital rings and the non-unital flavors reduce to it.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from math import lcm

import numpy as np

from ..config import DEFAULT_DEPTH
from ..errors import ContractError
from ..finalg.constructions import (
    classical_semidirect,
    ideal_closure_mask,
    quotient_ring_by_mask,
    subring_generated,
    substructure,
    unitalize_mod_m,
)
from ..proobj import ObjectStructure, Op, ring_action_axioms, structure_ops
from ..prosys import IsoWitness, RawProMorphism, Tower
from .common import LevelSearch, bullet_report, first_by_key, missing_lifts

FLAVORS = ("alg", "ring", "cring", "rng", "crng")


def _full_mask(T):
    return lambda n: np.ones(T.level(n).order, dtype=bool)


def _unit_mask(T):
    return lambda n: subring_generated(T.level(n), [T.level(n).one])


class ShiftedRingAction:
    """``l_n : R_{rho(n)} x S_{sigma(n)} -> S_n`` and ``r_n : S_{sigma(n)} x R_{rho(n)} -> S_n``.

    ``scalars(n)`` is an optional boolean mask of a central subring of
    ``R_n`` (the algebra case).  ``unital`` asks for ``1a = a = a1``.
    """

    def __init__(self, R, S, rho, sigma, left, right, *, scalars=None, unital=None, name=None):
        if R.kind != "ring" or S.kind != "ring":
            raise ContractError("ring actions need towers of rings")
        self.R, self.S = R, S
        self._rho, self._sigma = rho, sigma
        self._left, self._right = left, right
        self.scalars = scalars
        self.unital = R.level(0).is_unital if unital is None else unital
        self.name = name
        self._cache = {}
        self._lock = threading.RLock()

    def rho(self, n):
        return int(self._rho(n))

    def sigma(self, n):
        return int(self._sigma(n))

    def _get(self, side, n):
        with self._lock:
            key = (side, n)
            if key not in self._cache:
                fn = self._left if side == "l" else self._right
                t = np.asarray(fn(n), dtype=np.int64)
                nr, ns = self.R.level(self.rho(n)).order, self.S.level(self.sigma(n)).order
                shape = (nr, ns) if side == "l" else (ns, nr)
                if t.shape != shape:
                    raise ContractError(f"{side}-table at level {n} has shape {t.shape}, expected {shape}", level=n)
                t.setflags(write=False)
                self._cache[key] = t
            return self._cache[key]

    def left(self, n):
        return self._get("l", n)

    def right(self, n):
        return self._get("r", n)

    @classmethod
    def levelwise(cls, R, S, left, right, **kw):
        return cls(R, S, lambda n: n, lambda n: n, left, right, **kw)

    @classmethod
    def by_multiplication(cls, R, S, embed, **kw):
        """Strict action through ring maps ``embed(n) : S_n -> R_n`` onto an ideal.

        ``l(p, a) = p * a`` and ``r(a, p) = a * p`` computed in ``R_n`` and
        pulled back along the (injective) embedding.
        """

        def tables(n):
            Rn, e = R.level(n), np.asarray(embed(n), dtype=np.int64)
            back = np.full(Rn.order, -1, dtype=np.int64)
            back[e] = np.arange(len(e))
            left = back[Rn.mul_table[:, e]]
            right = back[Rn.mul_table[e, :]]
            if (left < 0).any() or (right < 0).any():
                raise ContractError("the embedded ring is not an ideal", level=n)
            return left, right

        return cls.levelwise(R, S, lambda n: tables(n)[0], lambda n: tables(n)[1], **kw)

    def conjugate(self, u):
        """Transport along the reindexing iso ``reindex(S, u) -> S``."""
        from ..prosys import reindex_iso

        Sh = Tower.reindex(self.S, u)
        iso, wit = reindex_iso(self.S, u)
        iso = RawProMorphism(Sh, self.S, iso.idx, iso.map)
        a = self

        def left(n):
            m = u(n)
            c = a.sigma(m)
            return a.left(m)[:, a.S.bond_table(u(c), c)]

        def right(n):
            m = u(n)
            c = a.sigma(m)
            return a.right(m)[a.S.bond_table(u(c), c), :]

        act = ShiftedRingAction(
            self.R, Sh, lambda n: a.rho(u(n)), lambda n: a.sigma(u(n)), left, right,
            scalars=self.scalars, unital=self.unital,
        )
        return act, iso, wit

    def object_structure(self):
        a = self
        ops = [
            Op("l", ("R", "S"), "S", lambda n: (a.rho(n), a.sigma(n)), a.left),
            Op("r", ("S", "R"), "S", lambda n: (a.sigma(n), a.rho(n)), a.right),
        ]
        ops += structure_ops(self.R, "R", "R_") + structure_ops(self.S, "S", "S_")
        carriers = {"R": self.R, "S": self.S}
        central = self.scalars is not None
        if central:
            K = scalar_tower(self.R, self.scalars)
            carriers["K"] = K
            ops.append(Op("K_incl", ("K",), "R", lambda n: (n,), lambda n: np.flatnonzero(a.scalars(n))))
        return ObjectStructure(carriers, ops, ring_action_axioms(unital=self.unital, central=central))


def scalar_tower(R, mask):
    """The subring tower picked out by ``mask(n)``, with induced bonds."""

    def sub(n):
        return substructure(R.level(n), mask(n))

    def bond(n):
        _, inc1 = sub(n + 1)
        S0, inc0 = sub(n)
        relabel = np.full(R.level(n).order, -1, dtype=np.int64)
        relabel[inc0.table] = np.arange(S0.order)
        t = relabel[R.bond(n).table[inc1.table]]
        if (t < 0).any():
            raise ContractError(f"bond {n + 1}->{n} does not map the scalars into the scalars", level=n + 1)
        return t

    return Tower("ring", lambda n: sub(n)[0], bond, stable_from=R.stable_from)


# -- normalization ------------------------------------------------------------------


def _retables(raw, m, vals):
    rb = raw.R.bond_table(vals[0], raw.rho(m))
    sb = raw.S.bond_table(vals[1], raw.sigma(m))
    return raw.left(m)[rb[:, None], sb[None, :]], raw.right(m)[sb[:, None], rb[None, :]]


def _ring_bullets(raw, n, vals, stop_early=True):
    R, S = raw.R, raw.S
    bad = []

    def fail(law):
        bad.append(law)
        return stop_early

    rn, sn = vals(n)
    if rn < n or sn < n:
        bad.append("rho(i) >= i and sigma(i) >= i")
        return bad
    L, Rt = _retables(raw, n, (rn, sn))
    Rr, Ss, Sn = R.level(rn), S.level(sn), S.level(n)
    sb = S.bond_table(sn, n)
    add, mul = Sn.add.table, Sn.mul_table
    if n > 0:
        rp, sp = vals(n - 1)
        if rp > rn or sp > sn:
            bad.append("rho and sigma are monotone")
            return bad
        Lp, Rp = _retables(raw, n - 1, (rp, sp))
        down = S.bond_table(n, n - 1)
        rb, sbb = R.bond_table(rn, rp), S.bond_table(sn, sp)
        if not ((down[L] == Lp[rb[:, None], sbb[None, :]]).all() and (down[Rt] == Rp[sbb[:, None], rb[None, :]]).all()):
            if fail("l_j(p, a)|_i = l_i(p|, a|) and r_j(a, p)|_i = r_i(a|, p|)"):
                return bad
    biadd = (
        (L[:, Ss.add.table] == add[L[:, :, None], L[:, None, :]]).all()
        and (L[Rr.add.table] == add[L[:, None, :], L[None, :, :]]).all()
        and (Rt[Ss.add.table] == add[Rt[:, None, :], Rt[None, :, :]]).all()
        and (Rt[:, Rr.add.table] == add[Rt[:, :, None], Rt[:, None, :]]).all()
    )
    if not biadd and fail("l_i and r_i are biadditive"):
        return bad
    c = sn
    rc, scc = vals(c)
    Lc, Rc = _retables(raw, c, (rc, scc))
    qb = R.bond_table(rc, rn)  # R_rho(c) -> R_rho(n)
    ab = S.bond_table(scc, c)  # S_sigma(c) -> S_sigma(n)
    nR = np.arange(Rr.order)
    # l_i(p, l_c(q, a)) = l_i(p q|, a|)
    if not (L[nR[:, None, None], Lc[None, :, :]] == L[Rr.mul_table[:, qb][:, :, None], ab[None, None, :]]).all():
        if fail("l_i(p, l_sigma(i)(q, a)) = l_i(p q|, a|)"):
            return bad
    # l_i(p|, r_c(a, q)) = r_i(l_c(p, a), q|) for p, q in R_rho(c), a in S_sigma(c)
    lhs = L[qb[:, None, None], Rc[None, :, :]]
    rhs = Rt[Lc[:, :, None], qb[None, None, :]]
    if not (lhs == rhs).all() and fail("l_i(p|, r_sigma(i)(a, q)) = r_i(l_sigma(i)(p, a), q|)"):
        return bad
    # r_i(r_c(a, p), q) = r_i(a|, p| q) for a in S_sigma(c), p in R_rho(c), q in R_rho(i)
    lhs = Rt[Rc[:, :, None], nR[None, None, :]]
    rhs = Rt[ab[:, None, None], Rr.mul_table[qb][None, :, :]]
    if not (lhs == rhs).all() and fail("r_i(r_sigma(i)(a, p), q) = r_i(a|, p| q)"):
        return bad
    nS = np.arange(Ss.order)
    if not (L[:, Ss.mul_table] == mul[L[:, :, None], sb[None, None, :]]).all():
        if fail("l_i(p, ab) = l_i(p, a) b|"):
            return bad
    if not (mul[Rt[:, :, None], sb[None, None, :]] == mul[sb[:, None, None], L[None, :, :]]).all():
        if fail("r_i(a, p) b| = a| l_i(p, b)"):
            return bad
    if not (Rt[Ss.mul_table] == mul[sb[:, None, None], Rt[None, :, :]]).all():
        if fail("r_i(ab, p) = a| r_i(b, p)"):
            return bad
    if raw.unital:
        if not ((L[Rr.one] == sb).all() and (Rt[:, Rr.one] == sb).all()):
            if fail("l_i(1, a) = a| = r_i(a, 1)"):
                return bad
    if raw.scalars is not None:
        ks = np.flatnonzero(raw.scalars(rn))
        if not (L[ks, :] == Rt[:, ks].T).all():
            fail("l_i(k, a) = r_i(a, k)")
    del nS
    return bad


class NormalizedRingAction:
    def __init__(self, raw, search=4, extra_shift=0):
        self.raw = raw
        self.R, self.S = raw.R, raw.S
        self.scalars, self.unital = raw.scalars, raw.unital
        self._search = LevelSearch(
            lambda m: (raw.rho(m), raw.sigma(m)),
            lambda n, cand, tent: (_ring_bullets(raw, n, lambda m: cand if m == n else tent(m)) or [None])[0],
            search,
            extra_shift,
        )
        self._tables = {}
        self._lock = threading.RLock()

    def rho(self, n):
        return self._search.values(n)[0]

    def sigma(self, n):
        return self._search.values(n)[1]

    def _both(self, n):
        with self._lock:
            if n not in self._tables:
                L, R = _retables(self.raw, n, self._search.values(n))
                L.setflags(write=False)
                R.setflags(write=False)
                self._tables[n] = (L, R)
            return self._tables[n]

    def left(self, n):
        return self._both(n)[0]

    def right(self, n):
        return self._both(n)[1]

    def check(self, up_to):
        vals = self._search.values
        return bullet_report(lambda n: _ring_bullets(self.raw, n, vals, stop_early=False), up_to)


def normalize_ring_action(raw, bound=DEFAULT_DEPTH, search=4, extra_shift=0):
    A = NormalizedRingAction(raw, search=search, extra_shift=extra_shift)
    for n in range(bound + 1):
        A.sigma(n)
    return A


# -- strictification -------------------------------------------------------------------


@dataclass
class _RingLevel:
    c: int  # sigma^3(n)
    r: int  # rho sigma^2(n)
    quotient: object
    proj: np.ndarray
    reps: np.ndarray
    left: np.ndarray
    right: np.ndarray
    scalars: np.ndarray


def _iterate(f, n, k):
    for _ in range(k):
        n = f(n)
    return n


class RingStrictification:
    """Strict towers ``R'``, ``K'``, ``S'`` and ``S' ⋊ R'`` with the comparison maps."""

    theory = "ring"

    def __init__(self, A, flavor="alg"):
        if not A.unital or A.scalars is None:
            raise ContractError("the algebra pipeline needs a unital action with a scalar subring")
        self.action, self.flavor = A, flavor
        self.R, self.S = A.R, A.S
        self._levels = {}
        self._split = {}
        self._lock = threading.RLock()
        self.acting = Tower(
            "ring", lambda n: self.R.level(self.rtop(n)), lambda n: self.R.bond_table(self.rtop(n + 1), self.rtop(n))
        )
        self.carrier = Tower("ring", lambda n: self.level(n).quotient, self._carrier_bond)
        self.extension = Tower("ring", lambda n: self.split(n).total, self._extension_bond)

    def rtop(self, n):
        A = self.action
        return A.rho(_iterate(A.sigma, n, 2))

    def level(self, n):
        with self._lock:
            if n not in self._levels:
                self._levels[n] = self._compute(n)
            return self._levels[n]

    def split(self, n):
        with self._lock:
            if n not in self._split:
                L = self.level(n)
                self._split[n] = classical_semidirect(
                    L.quotient, self.acting.level(n), L.left, L.right, unital=True, central=L.scalars
                )
            return self._split[n]

    def _compute(self, n):
        A, R, S = self.action, self.R, self.S
        c = _iterate(A.sigma, n, 3)
        r2 = self.rtop(n)
        rc, sc = A.rho(c), A.sigma(c)
        Lc, Rc = A.left(c), A.right(c)
        Rr, Scc = R.level(r2), S.level(c)
        pb = R.bond_table(rc, r2)
        ab = S.bond_table(sc, c)
        nR, nS = Rr.order, Scc.order
        repL, okL = first_by_key(pb[:, None] * nS + ab[None, :], Lc, nR * nS)
        repR, okR = first_by_key(ab[:, None] * nR + pb[None, :], Rc, nS * nR)
        if not okL.all():
            raise missing_lifts(okL, (nR, nS), "symbols p (x) a", n)
        if not okR.all():
            raise missing_lifts(okR, (nS, nR), "symbols a (x) p", n)
        repL, repR = repL.reshape(nR, nS), repR.reshape(nS, nR)
        add, neg = Scc.add.table, Scc.add.inverse
        ks = np.flatnonzero(A.scalars(r2))
        seeds = [
            add[Lc, neg[repL[pb[:, None], ab[None, :]]]].ravel(),
            add[Rc, neg[repR[ab[:, None], pb[None, :]]]].ravel(),
            add[repL[ks, :], neg[repR[:, ks].T]].ravel(),
            add[repL[Rr.one], neg[np.arange(nS)]],
        ]
        mask = ideal_closure_mask(Scc, np.unique(np.concatenate(seeds)))
        while True:
            members = np.flatnonzero(mask)
            img = np.unique(np.concatenate([repL[:, members].ravel(), repR[members, :].ravel()]))
            if mask[img].all():
                break
            mask = ideal_closure_mask(Scc, np.concatenate([members, img]))
        down = S.bond_table(c, n)
        if (down[mask] != S.level(n).zero).any():
            raise ContractError(f"relation ideal at level {n} is not inside the kernel of the restriction", level=n)
        Q, proj = quotient_ring_by_mask(Scc, mask)
        p = proj.table
        reps = first_by_key(p, np.arange(nS), Q.order)[0]
        vl, vr = p[repL], p[repR]
        left, right = vl[:, reps], vr[reps, :]
        if not ((vl == left[:, p]).all() and (vr == right[p, :]).all()):
            raise ContractError(f"induced action at level {n} is not well defined", level=n)
        return _RingLevel(c, r2, Q, p, reps, left, right, A.scalars(r2))

    def _carrier_bond(self, n):
        L1, L0 = self.level(n + 1), self.level(n)
        vals = L0.proj[self.S.bond_table(L1.c, L0.c)]
        t = vals[L1.reps]
        if not (t[L1.proj] == vals).all():
            raise ContractError(f"relations at level {n + 1} do not map into those at level {n}", level=n + 1)
        return t

    def _extension_bond(self, n):
        E1 = self.split(n + 1).total
        x1, g1 = np.divmod(np.arange(E1.order), self.acting.level(n + 1).order)
        return self.carrier.bond(n).table[x1] * self.acting.level(n).order + self.acting.bond(n).table[g1]

    @property
    def scalars(self):
        return lambda n: self.level(n).scalars

    # comparison maps --------------------------------------------------------------

    def carrier_forward(self, n):
        L = self.level(n)
        return self.S.bond_table(L.c, n)[L.reps]

    def carrier_witness(self):
        return IsoWitness(lambda i: self.level(i).c, lambda i: self.level(i).proj)

    def acting_forward(self, n):
        return self.R.bond_table(self.rtop(n), n)

    def acting_witness(self):
        return IsoWitness(self.rtop, lambda i: np.arange(self.R.level(self.rtop(i)).order))

    def extension_forward(self, n):
        E = self.extension.level(n)
        x, g = np.divmod(np.arange(E.order), self.acting.level(n).order)
        return self.carrier_forward(n)[x] * self.R.level(n).order + self.acting_forward(n)[g]

    def extension_witness(self):
        def level(i):
            return max(self.level(i).c, self.rtop(i))

        def back(i):
            j = level(i)
            L = self.level(i)
            nRj = self.R.level(j).order
            x, g = np.divmod(np.arange(self.S.level(j).order * nRj), nRj)
            return L.proj[self.S.bond_table(j, L.c)[x]] * self.acting.level(i).order + self.R.bond_table(j, L.r)[g]

        return IsoWitness(level, back)

    def certificate(self, depth=DEFAULT_DEPTH):
        return ring_certificate(self, depth)


def strictify_algebra_action(A, depth=None):
    """Strictify a normalized action of a unital algebra (scalars given by ``A.scalars``)."""
    S = RingStrictification(A, flavor="alg")
    if depth is not None:
        for n in range(depth + 1):
            S.extension.level(n)
    return S


def unital_ring_action(raw):
    """Attach the scalars of the unital-ring case: the subring generated by 1."""
    return ShiftedRingAction(
        raw.R, raw.S, raw.rho, raw.sigma, raw.left, raw.right, scalars=_unit_mask(raw.R), unital=True, name=raw.name
    )


def commutative_ring_action(raw):
    """Commutative case: every element is a scalar and ``r(a, k) = l(k, a)``."""
    return ShiftedRingAction(
        raw.R, raw.S, raw.rho, raw.sigma, raw.left, lambda n: raw.left(n).T, scalars=_full_mask(raw.R), unital=True, name=raw.name
    )


def strictify_unital_ring_action(A, depth=None):
    """Unital-ring flavor: delegates to the algebra pipeline with the scalars generated by 1."""
    if A.scalars is None:
        raise ContractError("normalize the action of unital_ring_action(raw) first")
    S = RingStrictification(A, flavor="ring")
    if depth is not None:
        for n in range(depth + 1):
            S.extension.level(n)
    return S


# -- non-unital flavors ------------------------------------------------------------------


def _modulus(raw, top):
    m = 1
    for n in range(top + 1):
        m = lcm(m, raw.R.level(n).additive_exponent(), raw.S.level(n).additive_exponent())
    return m


class Unitalized:
    """``R~_n = R_n x Z/m`` with the extended action ``l~((p, k), a) = l(p, a) + k a|``."""

    def __init__(self, raw, m):
        self.raw, self.m = raw, m
        self._u = {}
        self._lock = threading.RLock()
        R = raw.R

        def bond(n):
            b = R.bond(n).table
            return (b[:, None] * m + np.arange(m)[None, :]).ravel()

        self.tower = Tower("ring", lambda n: self.unitalization(n).ring, bond, stable_from=R.stable_from)

    def unitalization(self, n):
        with self._lock:
            if n not in self._u:
                self._u[n] = unitalize_mod_m(self.raw.R.level(n), self.m)
            return self._u[n]

    def embedding(self, n):
        return self.unitalization(n).embedding.table

    def augmentation(self, n):
        return self.unitalization(n).augmentation.table

    def action(self, commutative):
        raw, m, S = self.raw, self.m, self.raw.S

        def extend(n, table, side):
            Sn = S.level(n)
            sb = S.bond_table(raw.sigma(n), n)
            mult = np.stack([Sn.multiple_table(k) for k in range(m)])  # [k, a] -> k a
            if side == "l":
                t = Sn.add.table[np.repeat(table, m, axis=0), mult[np.tile(np.arange(m), table.shape[0])][:, sb]]
            else:
                t = Sn.add.table[np.repeat(table, m, axis=1), mult[np.tile(np.arange(m), table.shape[1])][:, sb].T]
            return t

        left = lambda n: extend(n, raw.left(n), "l")  # noqa: E731
        if commutative:
            right = lambda n: left(n).T  # noqa: E731
            scalars = _full_mask(self.tower)
        else:
            right = lambda n: extend(n, raw.right(n), "r")  # noqa: E731
            scalars = _unit_mask(self.tower)
        return ShiftedRingAction(self.tower, S, raw.rho, raw.sigma, left, right, scalars=scalars, unital=True, name=raw.name)


class NonunitalStrictification:
    """A unital strictification of the unitalized action plus augmentation kernels."""

    theory = "ring"

    def __init__(self, unital, unitalized, flavor):
        self.unital, self.unitalized, self.flavor = unital, unitalized, flavor
        self.m = unitalized.m

    def acting_kernel(self, n):
        """Mask of ``Ker(R~'_n -> Z/m)`` inside ``R~'_n``."""
        return self.unitalized.augmentation(self.unital.rtop(n)) == 0

    def extension_kernel(self, n):
        split = self.unital.split(n)
        return self.acting_kernel(n)[split.project.table]

    def kernel_extension(self, n):
        """The split extension ``S'_n -> Ker_n <-> R'_n`` cut out by the kernels."""
        split = self.unital.split(n)
        Ek, inc_e = substructure(split.total, self.extension_kernel(n))
        Rk, inc_r = substructure(split.base, self.acting_kernel(n))
        return Ek, Rk, inc_e, inc_r

    def certificate(self, depth=DEFAULT_DEPTH):
        doc = ring_certificate(self.unital, depth)
        top = len(doc["strict"]["extension"]["levels"]) - 1
        doc["flavor"] = self.flavor
        from ..serialize import tower_to_json

        doc["kernel"] = {
            "modulus": self.m,
            "original": tower_to_json(self.unitalized.raw.R, top),
            "embedding": [self.unitalized.embedding(n) for n in range(top + 1)],
            "augmentation": [self.unitalized.augmentation(n) for n in range(top + 1)],
        }
        return doc


def strictify_nonunital_action(raw, kind="rng", bound=DEFAULT_DEPTH, search=4, extra_shift=0, modulus_levels=None):
    """Unitalize by ``Z/m``, strictify, and expose the augmentation kernels.

    ``m`` is the lcm of the additive exponents of the R- and S-levels up to
    ``modulus_levels`` (default: the stable level of both towers, else the
    level cap); a level that ``m`` does not annihilate raises a contract error.
    """
    if kind not in ("rng", "crng"):
        raise ContractError(f"unknown non-unital flavor {kind!r}")
    if modulus_levels is None:
        if raw.R.eventually_constant and raw.S.eventually_constant:
            modulus_levels = max(raw.R.stable_from, raw.S.stable_from)
        else:
            from ..config import level_cap

            modulus_levels = level_cap()
    U = Unitalized(raw, _modulus(raw, modulus_levels))
    A = normalize_ring_action(U.action(kind == "crng"), bound=bound, search=search, extra_shift=extra_shift)
    return NonunitalStrictification(RingStrictification(A, flavor=kind), U, kind)


def strictify_ring(raw, flavor, bound=DEFAULT_DEPTH, search=4, extra_shift=0):
    """Normalize and strictify ``raw`` in the requested flavor."""
    if flavor in ("rng", "crng"):
        return strictify_nonunital_action(raw, flavor, bound=bound, search=search, extra_shift=extra_shift)
    if flavor == "ring":
        raw = unital_ring_action(raw)
    elif flavor == "cring":
        raw = commutative_ring_action(raw)
    elif flavor != "alg":
        raise ContractError(f"unknown flavor {flavor!r}")
    A = normalize_ring_action(raw, bound=bound, search=search, extra_shift=extra_shift)
    return RingStrictification(A, flavor=flavor)


# -- certificates ----------------------------------------------------------------------


def ring_certificate(S, depth=DEFAULT_DEPTH):
    from ..serialize import tower_to_json
    from .certificate import _maps

    A = S.action
    top = max(max(S.level(n).c, S.rtop(n)) for n in range(depth + 1))
    strict = {
        "acting": tower_to_json(S.acting, top),
        "carrier": tower_to_json(S.carrier, top),
        "extension": tower_to_json(S.extension, top),
        "scalars": [S.level(n).scalars for n in range(top + 1)],
        "include": [S.split(n).include.table for n in range(top + 1)],
        "project": [S.split(n).project.table for n in range(top + 1)],
        "section": [S.split(n).section.table for n in range(top + 1)],
    }
    return {
        "type": "certificate",
        "theory": "ring",
        "flavor": S.flavor,
        "depth": depth,
        "source": {
            "acting": tower_to_json(S.R, top),
            "carrier": tower_to_json(S.S, top),
            "scalars": [A.scalars(n) for n in range(top + 1)],
        },
        "action": {
            "rho": [A.rho(n) for n in range(depth + 1)],
            "sigma": [A.sigma(n) for n in range(depth + 1)],
            "left": [A.left(n) for n in range(depth + 1)],
            "right": [A.right(n) for n in range(depth + 1)],
        },
        "strict": strict,
        "maps": {
            "acting": _maps(S.acting_forward, S.acting_witness(), top, depth),
            "carrier": _maps(S.carrier_forward, S.carrier_witness(), top, depth),
            "extension": _maps(S.extension_forward, S.extension_witness(), top, depth),
        },
    }


def verify_ring_certificate(doc, d, rep):
    from .certificate import (
        _check_morphism,
        _check_split,
        _check_witness,
        _level_morphism,
        _load_towers,
        _table,
        _top,
        check_towers,
    )

    towers = _load_towers(
        doc,
        {
            "R": ("source", "acting"),
            "S": ("source", "carrier"),
            "R'": ("strict", "acting"),
            "S'": ("strict", "carrier"),
            "E": ("strict", "extension"),
        },
    )
    top = _top(doc)
    check_towers(towers, top, rep)
    R, S, Rp, E = towers["R"], towers["S"], towers["R'"], towers["E"]
    for name, T in (("R", R), ("R'", Rp), ("E", E)):
        for n in range(top + 1):
            if not T.level(n).is_unital:
                rep.fail(n, f"tower {name}: level is not unital")
            elif n < top and T.bond(n).table[T.level(n + 1).one] != T.level(n).one:
                rep.fail(n + 1, f"tower {name}: bond is not unital")
    _check_split(E, towers["S'"], Rp, doc["strict"], top, rep, unital=True)
    P = Tower.product(S, R)
    maps = doc["maps"]
    fa = _level_morphism(Rp, R, maps["acting"], top)
    fc = _level_morphism(towers["S'"], S, maps["carrier"], top)
    fe = _level_morphism(E, P, maps["extension"], top)
    _check_morphism("acting map", fa, top, rep, unital=True)
    _check_morphism("carrier map", fc, top, rep)
    _check_morphism("extension map", fe, top, rep, structural=False)
    for name, f, m in (("acting map", fa, maps["acting"]), ("carrier map", fc, maps["carrier"]), ("extension map", fe, maps["extension"])):
        _check_witness(name, f, m, d, rep)
    # scalars: central in the extension and carried onto each other by the acting iso
    ks_src = [np.asarray(k, dtype=bool) for k in doc["source"]["scalars"]]
    ks = [np.asarray(k, dtype=bool) for k in doc["strict"]["scalars"]]
    for n in range(min(d, top) + 1):
        En = E.level(n)
        sec = _table(doc["strict"]["section"], n)
        kel = sec[np.flatnonzero(ks[n])]
        if not (En.mul_table[kel, :] == En.mul_table[:, kel].T).all():
            rep.fail(n, "scalars are not central in the extension")
        if not ks_src[n][_table(maps["acting"]["forward"], n)[ks[n]]].all():
            rep.fail(n, "acting map does not send scalars to scalars")
        j = int(maps["acting"]["level"][n])
        back = np.asarray(maps["acting"]["back"][n], dtype=np.int64)
        if not ks[n][back[ks_src[j]]].all():
            rep.fail(n, "witness does not send scalars to scalars")
    # the comparison map carries the ring operations of the action
    act = doc["action"]
    for n in range(d + 1):
        rn, sn = int(act["rho"][n]), int(act["sigma"][n])
        k = max(n, rn, sn)
        Lt, Rt = _table(act["left"], n), _table(act["right"], n)
        if Lt.shape != (R.level(rn).order, S.level(sn).order) or Rt.shape != (S.level(sn).order, R.level(rn).order):
            rep.fail(n, "action tables have the wrong shape")
            continue
        e_n, e_k = _table(maps["extension"]["forward"], n), _table(maps["extension"]["forward"], k)
        Rn, Sn, Rk = R.level(n), S.level(n), R.level(k)
        En = E.level(n)
        x, g = np.divmod(e_n, Rn.order)
        # additivity is levelwise
        if not (e_n[En.add.table] == Sn.add.table[x[:, None], x[None, :]] * Rn.order + Rn.add.table[g[:, None], g[None, :]]).all():
            rep.fail(n, "extension comparison map is not additive")
        if e_n[En.one] != Sn.zero * Rn.order + Rn.one:
            rep.fail(n, "extension comparison map does not preserve the unit")
        eb = E.bond_table(k, n)
        lhs = e_n[En.mul_table[eb[:, None], eb[None, :]]]
        xk, gk = np.divmod(e_k, Rk.order)
        xs, gs = S.bond_table(k, n)[xk], R.bond_table(k, n)[gk]
        xr, gr = S.bond_table(k, sn)[xk], R.bond_table(k, rn)[gk]
        sa = Sn.add.table
        first = sa[sa[Sn.mul_table[xs[:, None], xs[None, :]], Lt[gr[:, None], xr[None, :]]], Rt[xr[:, None], gr[None, :]]]
        rhs = first * Rn.order + Rn.mul_table[gs[:, None], gs[None, :]]
        if not (lhs == rhs).all():
            rep.fail(n, "extension comparison map is not multiplicative for the action")
        rep.checked += 1
    if "kernel" in doc:
        _verify_kernels(doc, towers, top, rep)


def _verify_kernels(doc, towers, top, rep):
    from ..finalg.constructions import zmod_ring
    from ..serialize import tower_from_json
    from .certificate import _table

    kern = doc["kernel"]
    m = int(kern["modulus"])
    Zm = zmod_ring(m)
    orig = tower_from_json(kern["original"])
    R, Rp, E = towers["R"], towers["R'"], towers["E"]
    fwd = doc["maps"]["acting"]["forward"]
    for n in range(top + 1):
        emb, aug = _table(kern["embedding"], n), _table(kern["augmentation"], n)
        On, Rn = orig.level(n), R.level(n)
        if On.hom_violation(emb, Rn) or len(np.unique(emb)) != On.order:
            rep.fail(n, "embedding is not an injective ring map")
        if Rn.hom_violation(aug, Zm, unital=True):
            rep.fail(n, "augmentation is not a unital ring map")
        img = np.zeros(Rn.order, dtype=bool)
        img[emb] = True
        if not ((aug == 0) == img).all():
            rep.fail(n, "augmentation kernel differs from the embedded ring")
        if n < top:
            emb1, aug1 = _table(kern["embedding"], n + 1), _table(kern["augmentation"], n + 1)
            if not (R.bond(n).table[emb1] == emb[orig.bond(n).table]).all():
                rep.fail(n + 1, "embedding does not commute with the bonds")
            if not (aug[R.bond(n).table] == aug1).all():
                rep.fail(n + 1, "augmentation does not commute with the bonds")
        # strict side: the kernel of R'_n -> R~_n -> Z/m and of E'_n -> R'_n -> Z/m
        augp = aug[_table(fwd, n)]
        if Rp.level(n).hom_violation(augp, Zm, unital=True):
            rep.fail(n, "strict augmentation is not a unital ring map")
        kR = augp == 0
        kE = kR[_table(doc["strict"]["project"], n)]
        En = E.level(n)
        ids = np.flatnonzero(kE)
        if not (kE[En.add.table[np.ix_(ids, ids)]].all() and kE[En.mul_table[np.ix_(ids, ids)]].all()):
            rep.fail(n, "extension kernel is not a subring")
        if int(kR.sum()) * m != Rp.level(n).order:
            rep.fail(n, "strict acting kernel has the wrong order")
        rep.checked += 1
