"""Comparisons between strictified extensions, protomodularity and the action-bijection smoke check."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import ContractError, Inconclusive
from ..finalg.constructions import SplitExtension
from ..finalg.structures import FinGroup, FinRng, Hom
from ..prosys import (
    CheckReport,
    IsoWitness,
    RawProMorphism,
    Tower,
    identity_witness,
    search_equivalence,
    verify_iso_witness,
)
from .group import ShiftedGroupAction, build_split_extension_tower, normalize_group_action, strictify_group_action


def check_level_morphism(f, up_to, structural=True):
    """Level maps are homomorphisms commuting with the bonds, for levels <= up_to."""
    rep = CheckReport()
    for n in range(up_to + 1):
        if structural:
            bad = f.hom(n).violation()
            if bad:
                rep.fail(n, f"level map does not preserve {bad}")
        rep.checked += 1
    return rep.merge(f.check_coherence(up_to))


def product_tower(S):
    """``P = X x G`` (or ``S x R``) with ids ``x * |G| + g``, the common target of the extension maps."""
    return Tower.product(S.X, S.G) if S.theory == "group" else Tower.product(S.S, S.R)


def extension_map(S, P=None):
    """The extension comparison map of a strictification as a level morphism into ``P``."""
    return RawProMorphism.level_morphism(S.extension, P or product_tower(S), S.extension_forward)


def compose_isos(f, wf, g, wg):
    """``g o f`` for level isos ``f : A -> B`` and ``g : B -> C`` with the composite witness."""
    h = RawProMorphism.level_morphism(f.source, g.target, lambda n: g.map(n)[f.map(n)])

    def level(i):
        return wg.at(wf.at(i)[0])[0]

    def back(i):
        j1, u1 = wf.at(i)
        return u1[wg.at(j1)[1]]

    return h, IsoWitness(level, back)


@dataclass
class Comparison:
    """``psi : reindex(A, j) -> B`` with witness, plus the reindexing iso back to A."""

    psi: RawProMorphism
    witness: IsoWitness
    reindex: RawProMorphism

    def verify(self, up_to):
        rep = check_level_morphism(self.psi, up_to)
        return rep.merge(verify_iso_witness(self.psi, self.witness, up_to))


def compare_through(fa, wa, fb, wb):
    """A pro-iso ``A ~ B`` from level isos ``fa : A -> P`` and ``fb : B -> P`` with witnesses.

    ``psi_i = ub_i o fa_{jb(i)}`` on ``A_{jb(i)}``; its witness at ``i`` is
    ``ua_{jb(i)} o fb`` read at level ``ja(jb(i))``.
    """
    if fa.target is not fb.target:
        raise ContractError("both maps must land in the same tower")
    A, B = fa.source, fb.source

    def jb(i):
        return wb.at(i)[0]

    Ah = Tower.reindex(A, jb)
    psi = RawProMorphism.level_morphism(Ah, B, lambda i: wb.at(i)[1][fa.map(jb(i))])

    def level(i):
        return wa.at(jb(i))[0]

    def back(i):
        j, ua = wa.at(jb(i))
        return ua[fb.map(j)]

    return Comparison(psi, IsoWitness(level, back), RawProMorphism.bond_shift(A, jb))


def compare_extensions(S1, S2):
    """Pro-iso between the extension towers of two strictifications of actions on the same towers."""
    P = product_tower(S1)
    Q = product_tower(S2)
    if [P.level(n).order for n in range(3)] != [Q.level(n).order for n in range(3)]:
        raise ContractError("the strictifications act on different towers")
    return compare_through(extension_map(S1, P), S1.extension_witness(), extension_map(S2, P), S2.extension_witness())


def classical_extension(G, X, act):
    """The tower of classical split extensions of a levelwise action with its identity map into ``X x G``."""
    E, split = build_split_extension_tower(G, X, act)
    P = Tower.product(X, G)
    f = RawProMorphism.level_morphism(E, P, lambda n: np.arange(E.level(n).order))
    return E, split, f, identity_witness(E)


# -- protomodularity -------------------------------------------------------------------


def _decompose(split, e):
    """``e = i(x) s(g)`` for groups and ``e = i(x) + s(g)`` for rings; returns ``(x, g)``."""
    T = split.total
    g = split.project.table[e]
    s = split.section.table[g]
    if isinstance(T, FinGroup):
        rest = T.table[e, T.inverse[s]]
    else:
        rest = T.add.table[e, T.add.inverse[s]]
    back = np.full(T.order, -1, dtype=np.int64)
    back[split.include.table] = np.arange(split.kernel.order)
    return back[rest], g


def _combine(split, x, g):
    T = split.total
    i, s = split.include.table[x], split.section.table[g]
    return T.table[i, s] if isinstance(T, FinGroup) else T.add.table[i, s]


def relabelled_extension(E, split, rng, up_to):
    """A copy of a split-extension tower with every level relabelled by a random permutation."""
    perms = [rng.permutation(E.level(n).order) for n in range(up_to + 1)]
    inv = [np.argsort(p) for p in perms]

    def level(n):
        T, p, q = E.level(n), perms[n], inv[n]
        if isinstance(T, FinGroup):
            return FinGroup(p[T.table[q[:, None], q[None, :]]])
        one = None if T.one is None else int(p[T.one])
        return FinRng(FinGroup(p[T.add.table[q[:, None], q[None, :]]]), p[T.mul_table[q[:, None], q[None, :]]], one=one)

    levels = [level(n) for n in range(up_to + 1)]
    bonds = [perms[n][E.bond(n).table[inv[n + 1]]] for n in range(up_to)]
    E2 = Tower.from_levels(levels, bonds)

    def split2(n):
        s = split(n)
        p, q = perms[n], inv[n]
        unital = getattr(s.project, "unital", False)
        return SplitExtension(
            s.kernel,
            levels[n],
            s.base,
            Hom(s.kernel, levels[n], p[s.include.table], check=False),
            Hom(levels[n], s.base, s.project.table[q], check=False, unital=unital),
            Hom(s.base, levels[n], p[s.section.table], check=False, unital=unital),
        )

    return E2, split2


def extension_morphism(E1, split1, E2, split2, up_to):
    """The morphism ``i1(x) s1(g) -> i2(x) s2(g)`` of split extensions with equal ends, and its candidate inverse."""

    def fwd(n):
        x, g = _decompose(split1(n), np.arange(E1.level(n).order))
        return _combine(split2(n), x, g)

    def bwd(n):
        x, g = _decompose(split2(n), np.arange(E2.level(n).order))
        return _combine(split1(n), x, g)

    for n in range(up_to + 1):
        if (_decompose(split1(n), np.arange(E1.level(n).order))[0] < 0).any():
            raise ContractError("split extension does not decompose", level=n)
    f = RawProMorphism.level_morphism(E1, E2, fwd)
    return f, IsoWitness(lambda i: i, bwd)


@dataclass
class ProtomodularityReport:
    morphism: CheckReport
    squares: CheckReport
    iso: CheckReport

    @property
    def ok(self):
        return self.morphism.ok and self.squares.ok and self.iso.ok


def protomodularity_check(E1, split1, E2, split2, up_to):
    """Build the extension morphism, check it is one, and verify it is a pro-iso."""
    f, w = extension_morphism(E1, split1, E2, split2, up_to)
    morph = check_level_morphism(f, up_to)
    squares = CheckReport()
    for n in range(up_to + 1):
        s1, s2, t = split1(n), split2(n), f.map(n)
        if not (t[s1.include.table] == s2.include.table).all():
            squares.fail(n, "morphism does not commute with the inclusions")
        if not (s2.project.table[t] == s1.project.table).all():
            squares.fail(n, "morphism does not commute with the projections")
        if not (t[s1.section.table] == s2.section.table).all():
            squares.fail(n, "morphism does not commute with the sections")
        squares.checked += 1
    return ProtomodularityReport(morph, squares, verify_iso_witness(f, w, up_to))


# -- action bijection smoke check -----------------------------------------------------


@dataclass
class BijectionReport:
    distinguished: list = field(default_factory=list)  # (i, j, verdict kind)
    round_trips: list = field(default_factory=list)  # (i, CheckReport)
    inconclusive: list = field(default_factory=list)

    @property
    def ok(self):
        return (
            all(kind != "equivalent" for _, _, kind in self.distinguished)
            and all(r.ok for _, r in self.round_trips)
            and not self.inconclusive
        )

    @property
    def status(self):
        if not all(kind != "equivalent" for _, _, kind in self.distinguished) or any(r.failures for _, r in self.round_trips):
            return "violation"
        if self.inconclusive or any(r.inconclusive for _, r in self.round_trips):
            return "inconclusive"
        return "verified"


def verify_action_bijection_smoke(G, X, actions, bound, up_to=4):
    """Distinct strict actions give non-equivalent object-actions, and each strictifies back.

    ``actions`` is a list of functions ``n -> classical action table`` of
    ``G_n`` on ``X_n``.  Pairs are separated with a bounded equivalence
    search on the structure maps; each action is normalized, strictified
    and its extension compared with the classical extension tower.
    """
    rep = BijectionReport()
    acts = [ShiftedGroupAction.levelwise(G, X, a) for a in actions]
    maps = [a.structure_map() for a in acts]
    for i in range(len(acts)):
        for j in range(i + 1, len(acts)):
            v = search_equivalence(maps[i], maps[j], bound, up_to=up_to)
            rep.distinguished.append((i, j, v.kind))
    for i, a in enumerate(acts):
        try:
            S = strictify_group_action(normalize_group_action(a, bound=up_to))
            E, split, f, w = classical_extension(G, X, a.table)
            P = product_tower(S)
            f = RawProMorphism.level_morphism(E, P, f.map)
            cmp = compare_through(extension_map(S, P), S.extension_witness(), f, w)
            rep.round_trips.append((i, cmp.verify(up_to)))
        except Inconclusive as e:
            rep.inconclusive.append((i, str(e)))
    return rep


def conjugate_comparison(A, u, up_to=4):
    """Strictify ``A`` and its conjugate by ``reindex(X, u)``; compare the extensions over ``X x G``.

    The conjugate's extension map lands in ``G x reindex(X, u)``; composing
    with the level iso to ``X x G`` puts both over the same tower.
    """
    C, iso, wit = A.conjugate(u)
    S = strictify_group_action(normalize_group_action(A, bound=up_to))
    Sc = strictify_group_action(normalize_group_action(C, bound=up_to))
    P = product_tower(S)
    Pc = product_tower(Sc)
    nG = lambda n: A.G.level(n).order  # noqa: E731
    to_p = RawProMorphism.level_morphism(
        Pc, P, lambda n: iso.map(n)[np.arange(Pc.level(n).order) // nG(n)] * nG(n) + np.arange(Pc.level(n).order) % nG(n)
    )

    def back(i):
        j = u(i)
        ids = np.arange(P.level(j).order)
        x, g = ids // nG(j), ids % nG(j)
        return x * nG(i) + A.G.bond_table(j, i)[g]

    fc, wc = compose_isos(extension_map(Sc, Pc), Sc.extension_witness(), to_p, IsoWitness(u, back))
    return compare_through(fc, wc, extension_map(S, P), S.extension_witness())
