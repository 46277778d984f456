"""Group actions with shifted indices: normalization and strictification."""

from __future__ import annotations

import threading
from dataclasses import dataclass

import numpy as np

from ..config import DEFAULT_DEPTH
from ..errors import ContractError
from ..finalg.constructions import classical_semidirect, quotient_group_by_mask
from ..proobj import ObjectStructure, Op, group_action_axioms, structure_ops
from ..prosys import IsoWitness, RawProMorphism, Tower
from .common import LevelSearch, bullet_report, first_by_key, missing_lifts


class ShiftedGroupAction:
    """Action data ``a_n : G_{gamma(n)} x X_{chi(n)} -> X_n`` of a pro-group on a pro-group.

    ``table(n)`` is an integer array of shape ``(|G_gamma(n)|, |X_chi(n)|)``.
    """

    def __init__(self, G, X, gamma, chi, table, name=None):
        if G.kind != "group" or X.kind != "group":
            raise ContractError("group actions need towers of groups")
        self.G, self.X = G, X
        self._gamma, self._chi, self._table = gamma, chi, table
        self._cache = {}
        self._lock = threading.RLock()
        self.name = name

    def gamma(self, n):
        return int(self._gamma(n))

    def chi(self, n):
        return int(self._chi(n))

    def table(self, n):
        with self._lock:
            if n not in self._cache:
                t = np.asarray(self._table(n), dtype=np.int64)
                shape = (self.G.level(self.gamma(n)).order, self.X.level(self.chi(n)).order)
                if t.shape != shape:
                    raise ContractError(f"action table at level {n} has shape {t.shape}, expected {shape}", level=n)
                t.setflags(write=False)
                self._cache[n] = t
            return self._cache[n]

    @classmethod
    def levelwise(cls, G, X, act, name=None):
        """A strict action: ``act(n)`` is a classical action table of ``G_n`` on ``X_n``."""
        return cls(G, X, lambda n: n, lambda n: n, act, name=name)

    def conjugate(self, u):
        """Transport along the reindexing iso ``reindex(X, u) -> X`` (``u(n) >= n``).

        Returns the action on the reindexed tower together with the iso
        (level morphism to X given by bonds) and its witness.
        """
        from ..prosys import reindex_iso

        Xh = Tower.reindex(self.X, u)
        iso, wit = reindex_iso(self.X, u)
        iso = RawProMorphism(Xh, self.X, iso.idx, iso.map)
        a = self

        def table(n):
            # a_{u(n)}(g, x^|) with x^ in Xh_{chi(u(n))} = X_{u(chi(u(n)))}
            m = u(n)
            c = a.chi(m)
            return a.table(m)[:, a.X.bond_table(u(c), c)]

        act = ShiftedGroupAction(self.G, Xh, lambda n: a.gamma(u(n)), lambda n: a.chi(u(n)), table)
        return act, iso, wit

    def structure_map(self):
        """The action as a raw morphism ``G x X -> X`` of pro-sets."""
        P = Tower.product(self.G, self.X)
        a = self

        def idx(n):
            return max(a.gamma(n), a.chi(n))

        def maps(n):
            k = idx(n)
            gb = a.G.bond_table(k, a.gamma(n))
            xb = a.X.bond_table(k, a.chi(n))
            return a.table(n)[gb[:, None], xb[None, :]].ravel()

        return RawProMorphism(P, self.X, idx, maps)

    def object_structure(self):
        a = self
        act = Op("act", ("G", "X"), "X", lambda n: (a.gamma(n), a.chi(n)), a.table)
        ops = [act] + structure_ops(self.G, "G", "G_") + structure_ops(self.X, "X", "X_")
        return ObjectStructure({"G": self.G, "X": self.X}, ops, group_action_axioms())


# -- normalization --------------------------------------------------------------------


def _retable(raw, m, vals):
    """Raw table at level m read from ``G_{vals[0]} x X_{vals[1]}``."""
    gb = raw.G.bond_table(vals[0], raw.gamma(m))
    xb = raw.X.bond_table(vals[1], raw.chi(m))
    return raw.table(m)[gb[:, None], xb[None, :]]


def _group_bullets(raw, n, vals, stop_early=True):
    """Failed laws at level n; ``vals(m)`` gives (gamma(m), chi(m))."""
    G, X = raw.G, raw.X
    bad = []
    gn, cn = vals(n)
    if gn < n or cn < n:
        bad.append("gamma(i) >= i and chi(i) >= i")
        return bad
    A = _retable(raw, n, (gn, cn))
    Gg, Xc, Xn = G.level(gn), X.level(cn), X.level(n)
    if n > 0:
        gp, cp = vals(n - 1)
        if gp > gn or cp > cn:
            bad.append("gamma and chi are monotone")
            return bad
        Ap = _retable(raw, n - 1, (gp, cp))
        lhs = X.bond_table(n, n - 1)[A]
        rhs = Ap[G.bond_table(gn, gp)[:, None], X.bond_table(cn, cp)[None, :]]
        if not (lhs == rhs).all():
            bad.append("a_j(g, x)|_i = a_i(g|, x|)")
            if stop_early:
                return bad
    if not (A[:, Xc.table] == Xn.table[A[:, :, None], A[:, None, :]]).all():
        bad.append("a_i(g, xy) = a_i(g, x) a_i(g, y)")
        if stop_early:
            return bad
    if not (A[Gg.identity] == X.bond_table(cn, n)).all():
        bad.append("a_i(1, x) = x|_i")
        if stop_early:
            return bad
    gc, cc = vals(cn)
    Ac = _retable(raw, cn, (gc, cc))
    # a_i(g, a_chi(i)(h, x)) = a_i(g h|, x|) for g in G_gamma(i), h in G_gamma(chi(i)), x in X_chi(chi(i))
    hb = G.bond_table(gc, gn)
    xb = X.bond_table(cc, cn)
    lhs = A[np.arange(Gg.order)[:, None, None], Ac[None, :, :]]
    rhs = A[Gg.table[:, hb][:, :, None], xb[None, None, :]]
    if not (lhs == rhs).all():
        bad.append("a_i(g, a_chi(i)(h, x)) = a_i(g h|, x|)")
    return bad


class NormalizedGroupAction:
    """Monotone ``gamma, chi`` and action tables satisfying the normalization laws.

    Index values are fixed lazily, level by level, by the smallest shift
    (in total) of the raw indices that makes every law hold at that level.
    """

    def __init__(self, raw, search=4, extra_shift=0):
        self.raw = raw
        self.G, self.X = raw.G, raw.X
        self._search = LevelSearch(
            lambda m: (raw.gamma(m), raw.chi(m)),
            lambda n, cand, tent: (_group_bullets(raw, n, lambda m: cand if m == n else tent(m)) or [None])[0],
            search,
            extra_shift,
        )
        self._tables = {}
        self._lock = threading.RLock()

    def gamma(self, n):
        return self._search.values(n)[0]

    def chi(self, n):
        return self._search.values(n)[1]

    def table(self, n):
        with self._lock:
            if n not in self._tables:
                t = _retable(self.raw, n, self._search.values(n))
                t.setflags(write=False)
                self._tables[n] = t
            return self._tables[n]

    def check(self, up_to):
        """Re-check every law with the fixed index values."""
        vals = self._search.values
        return bullet_report(lambda n: _group_bullets(self.raw, n, vals, stop_early=False), up_to)

    def as_shifted(self):
        return ShiftedGroupAction(self.G, self.X, self.gamma, self.chi, self.table)


def normalize_group_action(raw, bound=DEFAULT_DEPTH, search=4, extra_shift=0):
    """Fix index shifts so that the laws hold exactly at levels ``0..bound``."""
    A = NormalizedGroupAction(raw, search=search, extra_shift=extra_shift)
    for n in range(bound + 1):
        A.chi(n)
    return A


# -- strictification ---------------------------------------------------------------------


def _semidirect_bond(E1, E0, xbond, gbond, nG1, nG0):
    x1, g1 = np.divmod(np.arange(E1.order), nG1)
    return xbond[x1] * nG0 + gbond[g1]


def build_split_extension_tower(Gp, Xp, act):
    """Tower of classical semidirect products ``X'_n ⋊ G'_n`` with levelwise i, p, s."""
    cache = {}
    lock = threading.RLock()

    def ext(n):
        with lock:
            if n not in cache:
                a = act(n)
                if isinstance(a, tuple):  # ring actions come as (left, right)
                    cache[n] = classical_semidirect(Xp.level(n), Gp.level(n), *a)
                else:
                    cache[n] = classical_semidirect(Xp.level(n), Gp.level(n), a)
            return cache[n]

    def bond(n):
        E1, E0 = ext(n + 1), ext(n)
        return _semidirect_bond(E1.total, E0.total, Xp.bond(n).table, Gp.bond(n).table, Gp.level(n + 1).order, Gp.level(n).order)

    stable = None
    if Xp.eventually_constant and Gp.eventually_constant:
        stable = max(Xp.stable_from, Gp.stable_from)
    E = Tower(Xp.kind, lambda n: ext(n).total, bond, stable_from=stable)
    return E, ext


@dataclass
class _GroupLevel:
    c: int
    g: int
    quotient: object
    proj: np.ndarray
    act: np.ndarray
    reps: np.ndarray


class GroupStrictification:
    """Strict towers ``G'``, ``X'``, ``X' ⋊ G'`` with the comparison maps."""

    theory = "group"

    def __init__(self, A):
        self.action = A
        self.G, self.X = A.G, A.X
        self._levels = {}
        self._lock = threading.RLock()
        A_ = A
        self.acting = Tower(
            "group", lambda n: A_.G.level(A_.gamma(n)), lambda n: A_.G.bond_table(A_.gamma(n + 1), A_.gamma(n))
        )
        self.carrier = Tower("group", lambda n: self.level(n).quotient, self._carrier_bond)
        self.extension, self.split = build_split_extension_tower(self.acting, self.carrier, lambda n: self.level(n).act)

    def level(self, n):
        with self._lock:
            if n not in self._levels:
                self._levels[n] = self._compute(n)
            return self._levels[n]

    def _compute(self, n):
        A, G, X = self.action, self.G, self.X
        c, gn = A.chi(n), A.gamma(n)
        gc, cc = A.gamma(c), A.chi(c)
        T = A.table(c)
        Gg, Xc = G.level(gn), X.level(c)
        hb = G.bond_table(gc, gn)
        xb = X.bond_table(cc, c)
        keys = hb[:, None] * Xc.order + xb[None, :]
        rep, present = first_by_key(keys, T, Gg.order * Xc.order)
        if not present.all():
            raise missing_lifts(present, (Gg.order, Xc.order), "symbols (g, y)", n)
        R = rep.reshape(Gg.order, Xc.order)
        inv = Xc.inverse
        # values of lifts with equal restrictions agree, and the symbol of 1 is y itself
        seeds = np.concatenate([Xc.table[T, inv[R[hb[:, None], xb[None, :]]]].ravel(), Xc.table[R[Gg.identity], inv]])
        mask = Xc.normal_closure_mask(np.unique(seeds))
        while True:
            members = np.flatnonzero(mask)
            img = np.unique(R[:, members])
            if mask[img].all():
                break
            mask = Xc.normal_closure_mask(np.concatenate([members, img]))
        down = X.bond_table(c, n)
        if (down[mask] != X.level(n).identity).any():
            raise ContractError(f"relation subgroup at level {n} is not inside the kernel of the restriction", level=n)
        Q, proj = quotient_group_by_mask(Xc, mask)
        p = proj.table
        reps = first_by_key(p, np.arange(Xc.order), Q.order)[0]
        vals = p[R]
        act = vals[:, reps]
        if not (vals == act[:, p]).all():
            raise ContractError(f"induced action at level {n} is not well defined", level=n)
        return _GroupLevel(c, gn, Q, p, act, reps)

    def _carrier_bond(self, n):
        L1, L0 = self.level(n + 1), self.level(n)
        down = self.X.bond_table(L1.c, L0.c)
        vals = L0.proj[down]
        t = vals[L1.reps]
        if not (t[L1.proj] == vals).all():
            raise ContractError(f"relations at level {n + 1} do not map into those at level {n}", level=n + 1)
        return t

    # comparison maps --------------------------------------------------------------

    def carrier_forward(self, n):
        L = self.level(n)
        return self.X.bond_table(L.c, n)[L.reps]

    def carrier_witness(self):
        return IsoWitness(lambda i: self.level(i).c, lambda i: self.level(i).proj)

    def acting_forward(self, n):
        return self.G.bond_table(self.action.gamma(n), n)

    def acting_witness(self):
        A = self.action
        return IsoWitness(lambda i: A.gamma(i), lambda i: np.arange(self.G.level(A.gamma(i)).order))

    def extension_forward(self, n):
        """``E'_n -> X_n x G_n``, ``(x', g) -> (f_n(x'), g|_n)`` as product ids."""
        E = self.extension.level(n)
        nG = self.acting.level(n).order
        x, g = np.divmod(np.arange(E.order), nG)
        return self.carrier_forward(n)[x] * self.G.level(n).order + self.acting_forward(n)[g]

    def extension_witness(self):
        A = self.action

        def level(i):
            return max(A.chi(i), A.gamma(i))

        def back(i):
            j = level(i)
            L = self.level(i)
            nG = self.acting.level(i).order
            x, g = np.divmod(np.arange(self.X.level(j).order * self.G.level(j).order), self.G.level(j).order)
            return L.proj[self.X.bond_table(j, L.c)[x]] * nG + self.G.bond_table(j, A.gamma(i))[g]

        return IsoWitness(level, back)

    def certificate(self, depth=DEFAULT_DEPTH):
        from .certificate import group_certificate

        return group_certificate(self, depth)


def strictify_group_action(A, depth=None):
    """Strictify a normalized action; ``depth`` eagerly builds levels 0..depth."""
    S = GroupStrictification(A)
    if depth is not None:
        for n in range(depth + 1):
            S.extension.level(n)
    return S
