"""Algebraic structures carried by towers of sets, and their strictification.

An :class:`ObjectStructure` equips one or more carrier towers with
operations whose level maps may read their inputs from deeper levels.
Axioms are equations between terms; an axiom holds at level n when both
sides agree after restricting all variables from a common witness level.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ContractError, Inconclusive
from .finalg.constructions import (
    ideal_closure_mask,
    lie_ideal_closure_mask,
    quotient_group_by_mask,
    quotient_lie_by_mask,
    quotient_ring_by_mask,
    substructure,
)
from .finalg.structures import FinGroup, FinLieAlg, FinRng
from .prosys import CheckReport, IsoWitness, RawProMorphism, Tower, verify_iso_witness

# -- terms ------------------------------------------------------------------------


@dataclass(frozen=True)
class Var:
    name: str
    sort: str


@dataclass(frozen=True)
class App:
    op: str
    args: tuple = ()


def app(op, *args):
    return App(op, tuple(args))


@dataclass
class Op:
    """Operation ``sorts -> out``; ``idx(n)`` gives the input levels at output level n.

    ``table(n)`` is an array indexed by the input elements (one axis per
    input) whose entries lie in the output carrier at level n.
    """

    name: str
    sorts: tuple
    out: str
    idx: object
    table: object
    _cache: dict = field(default_factory=dict, repr=False)

    def levels(self, n):
        return tuple(int(v) for v in self.idx(n))

    def at(self, n):
        if n not in self._cache:
            self._cache[n] = np.asarray(self.table(n), dtype=np.int64)
        return self._cache[n]


@dataclass(frozen=True)
class Axiom:
    name: str
    lhs: object
    rhs: object


class ObjectStructure:
    """Carrier towers (one per sort) with operations and axioms."""

    def __init__(self, carriers, ops, axioms, name=None):
        self.carriers = dict(carriers)
        self.ops = {op.name: op for op in ops}
        self.axioms = list(axioms)
        self.name = name

    def carrier_size(self, sort, n):
        return self.carriers[sort].level(n).order

    # level requirements ---------------------------------------------------

    def _needs(self, term, n, acc):
        """Record, per variable, the levels its occurrences are read at."""
        if isinstance(term, Var):
            acc.setdefault(term.name, (term.sort, set()))[1].add(n)
            return
        op = self.ops[term.op]
        for arg, lv in zip(term.args, op.levels(n)):
            self._needs(arg, lv, acc)

    def requirements(self, axiom, n):
        acc = {}
        self._needs(axiom.lhs, n, acc)
        self._needs(axiom.rhs, n, acc)
        return {v: (s, max(lvs)) for v, (s, lvs) in acc.items()}

    def _eval(self, term, n, env, w):
        if isinstance(term, Var):
            arr = env[term.name]
            return self.carriers[term.sort].bond_table(w, n)[arr]
        op = self.ops[term.op]
        table = op.at(n)
        if not term.args:
            return table
        args = [self._eval(a, lv, env, w) for a, lv in zip(term.args, op.levels(n))]
        return table[tuple(args)]

    def check_axiom(self, axiom, n, witness=None):
        """True/False, or None when the witness level is missing or too low."""
        req = self.requirements(axiom, n)
        need = max([n] + [lv for _, lv in req.values()])
        w = need if witness is None else witness
        if w is None or w < need:
            return None
        names = sorted(req)
        sizes = [self.carrier_size(req[v][0], w) for v in names]
        env = {}
        for k, v in enumerate(names):
            shape = [1] * len(names)
            shape[k] = sizes[k]
            env[v] = np.arange(sizes[k]).reshape(shape)
        lhs = self._eval(axiom.lhs, n, env, w)
        rhs = self._eval(axiom.rhs, n, env, w)
        return bool(np.all(np.broadcast_to(lhs, np.broadcast(lhs, rhs).shape) == rhs))


def check_object_axioms(S, up_to, witnesses=None):
    """Check every axiom at levels ``0..up_to``.

    ``witnesses`` maps an axiom name to a function ``n -> level`` (or to a
    constant shift ``int``); levels missing from it default to the minimal
    level that makes both sides defined.
    """
    witnesses = witnesses or {}
    rep = CheckReport()
    for ax in S.axioms:
        wf = witnesses.get(ax.name)
        for n in range(up_to + 1):
            if wf is None:
                w = None
            elif isinstance(wf, int):
                w = n + wf
            else:
                w = wf(n)
            if wf is not None and w is None:
                rep.inconclusive.append((n, f"{ax.name}: no witness"))
                continue
            ok = S.check_axiom(ax, n, w)
            rep.checked += 1
            if ok is None:
                rep.inconclusive.append((n, f"{ax.name}: witness {w} below the required level"))
            elif not ok:
                rep.fail(n, f"axiom {ax.name} fails")
                break
    return rep


# -- theories ------------------------------------------------------------------------


def group_axioms(sort="X", prefix=""):
    a, b, c = Var("x", sort), Var("y", sort), Var("z", sort)
    mul, e, inv = prefix + "mul", prefix + "unit", prefix + "inv"
    return [
        Axiom(prefix + "associativity", app(mul, app(mul, a, b), c), app(mul, a, app(mul, b, c))),
        Axiom(prefix + "left unit", app(mul, app(e), a), a),
        Axiom(prefix + "right unit", app(mul, a, app(e)), a),
        Axiom(prefix + "left inverse", app(mul, app(inv, a), a), app(e)),
        Axiom(prefix + "right inverse", app(mul, a, app(inv, a)), app(e)),
    ]


def abelian_axioms(sort="X", prefix="", op="mul"):
    a, b = Var("x", sort), Var("y", sort)
    return [Axiom(prefix + "commutativity", app(prefix + op, a, b), app(prefix + op, b, a))]


def ring_axioms(sort="X", prefix="", unital=False, commutative=False):
    a, b, c = Var("x", sort), Var("y", sort), Var("z", sort)
    add, mul = prefix + "add", prefix + "mul"
    axs = group_axioms(sort, prefix + "add_")
    axs = [Axiom(ax.name, _rename(ax.lhs, prefix), _rename(ax.rhs, prefix)) for ax in axs]
    axs += [
        Axiom(prefix + "additive commutativity", app(add, a, b), app(add, b, a)),
        Axiom(prefix + "multiplicative associativity", app(mul, app(mul, a, b), c), app(mul, a, app(mul, b, c))),
        Axiom(prefix + "left distributivity", app(mul, a, app(add, b, c)), app(add, app(mul, a, b), app(mul, a, c))),
        Axiom(prefix + "right distributivity", app(mul, app(add, a, b), c), app(add, app(mul, a, c), app(mul, b, c))),
    ]
    if unital:
        axs += [
            Axiom(prefix + "left one", app(mul, app(prefix + "one"), a), a),
            Axiom(prefix + "right one", app(mul, a, app(prefix + "one")), a),
        ]
    if commutative:
        axs += [Axiom(prefix + "multiplicative commutativity", app(mul, a, b), app(mul, b, a))]
    return axs


def _rename(term, prefix):
    """Map the add_ group operation names onto the ring's add/zero/neg."""
    if isinstance(term, Var):
        return term
    names = {
        prefix + "add_mul": prefix + "add",
        prefix + "add_unit": prefix + "zero",
        prefix + "add_inv": prefix + "neg",
    }
    return App(names.get(term.op, term.op), tuple(_rename(t, prefix) for t in term.args))


def lie_axioms(sort="X", prefix="", scalars=()):
    a, b, c = Var("x", sort), Var("y", sort), Var("z", sort)
    add, br = prefix + "add", prefix + "bracket"
    axs = [Axiom(ax.name, _rename(ax.lhs, prefix), _rename(ax.rhs, prefix)) for ax in group_axioms(sort, prefix + "add_")]
    axs += [
        Axiom(prefix + "additive commutativity", app(add, a, b), app(add, b, a)),
        Axiom(prefix + "bracket additive", app(br, app(add, a, b), c), app(add, app(br, a, c), app(br, b, c))),
        Axiom(prefix + "alternating", app(br, a, a), app(prefix + "zero")),
        Axiom(
            prefix + "jacobi",
            app(add, app(add, app(br, a, app(br, b, c)), app(br, b, app(br, c, a))), app(br, c, app(br, a, b))),
            app(prefix + "zero"),
        ),
    ]
    for k in scalars:
        s = f"{prefix}scale{k}"
        axs += [
            Axiom(f"{s} additive", app(s, app(add, a, b)), app(add, app(s, a), app(s, b))),
            Axiom(f"{s} homogeneous bracket", app(br, app(s, a), b), app(s, app(br, a, b))),
        ]
    return axs


def group_action_axioms():
    g, h = Var("g", "G"), Var("h", "G")
    a, b = Var("x", "X"), Var("y", "X")
    return [
        Axiom("a(gh, x) = a(g, a(h, x))", app("act", app("G_mul", g, h), a), app("act", g, app("act", h, a))),
        Axiom("a(1, x) = x", app("act", app("G_unit"), a), a),
        Axiom("a(g, xy) = a(g, x)a(g, y)", app("act", g, app("X_mul", a, b)), app("X_mul", app("act", g, a), app("act", g, b))),
    ]


def ring_action_axioms(unital=False, central=False):
    p, q = Var("p", "R"), Var("q", "R")
    a, b = Var("a", "S"), Var("b", "S")
    Sa, Ra, Sm, Rm = "S_add", "R_add", "S_mul", "R_mul"
    axs = [
        Axiom("l(p, a + b) = l(p, a) + l(p, b)", app("l", p, app(Sa, a, b)), app(Sa, app("l", p, a), app("l", p, b))),
        Axiom("l(p + q, a) = l(p, a) + l(q, a)", app("l", app(Ra, p, q), a), app(Sa, app("l", p, a), app("l", q, a))),
        Axiom("r(a + b, p) = r(a, p) + r(b, p)", app("r", app(Sa, a, b), p), app(Sa, app("r", a, p), app("r", b, p))),
        Axiom("r(a, p + q) = r(a, p) + r(a, q)", app("r", a, app(Ra, p, q)), app(Sa, app("r", a, p), app("r", a, q))),
        Axiom("(pq)a = p(qa)", app("l", app(Rm, p, q), a), app("l", p, app("l", q, a))),
        Axiom("(pa)q = p(aq)", app("r", app("l", p, a), q), app("l", p, app("r", a, q))),
        Axiom("a(pq) = (ap)q", app("r", a, app(Rm, p, q)), app("r", app("r", a, p), q)),
        Axiom("p(ab) = (pa)b", app("l", p, app(Sm, a, b)), app(Sm, app("l", p, a), b)),
        Axiom("(ap)b = a(pb)", app(Sm, app("r", a, p), b), app(Sm, a, app("l", p, b))),
        Axiom("a(bp) = (ab)p", app(Sm, a, app("r", b, p)), app("r", app(Sm, a, b), p)),
    ]
    if unital:
        axs += [
            Axiom("1a = a", app("l", app("R_one"), a), a),
            Axiom("a1 = a", app("r", a, app("R_one")), a),
        ]
    if central:
        k = Var("k", "K")
        axs += [Axiom("ka = ak", app("l", app("K_incl", k), a), app("r", a, app("K_incl", k)))]
    return axs


def lie_action_axioms(scalars=()):
    u, v = Var("u", "L"), Var("v", "L")
    m, m2 = Var("x", "M"), Var("y", "M")
    axs = [
        Axiom("a(u, x + y) = a(u, x) + a(u, y)", app("act", u, app("M_add", m, m2)), app("M_add", app("act", u, m), app("act", u, m2))),
        Axiom("a(u + v, x) = a(u, x) + a(v, x)", app("act", app("L_add", u, v), m), app("M_add", app("act", u, m), app("act", v, m))),
        Axiom(
            "a(u, [x, y]) = [a(u, x), y] + [x, a(u, y)]",
            app("act", u, app("M_bracket", m, m2)),
            app("M_add", app("M_bracket", app("act", u, m), m2), app("M_bracket", m, app("act", u, m2))),
        ),
        Axiom(
            "a([u, v], x) = a(u, a(v, x)) - a(v, a(u, x))",
            app("act", app("L_bracket", u, v), m),
            app("M_add", app("act", u, app("act", v, m)), app("M_neg", app("act", v, app("act", u, m)))),
        ),
    ]
    for k in scalars:
        axs += [
            Axiom(f"a(ku, x) = k a(u, x) [k={k}]", app("act", app(f"L_scale{k}", u), m), app(f"M_scale{k}", app("act", u, m))),
            Axiom(f"a(u, kx) = k a(u, x) [k={k}]", app("act", u, app(f"M_scale{k}", m)), app(f"M_scale{k}", app("act", u, m))),
        ]
    return axs


# -- strict systems as objects ------------------------------------------------------------


def _lvl(n, k=1):
    return (n,) * k


def structure_ops(T, sort="X", prefix=""):
    """Level operations of a strict tower (no index shifts)."""
    kind = T.kind
    if kind == "group":
        return [
            Op(prefix + "mul", (sort, sort), sort, lambda n: _lvl(n, 2), lambda n: T.level(n).table),
            Op(prefix + "unit", (), sort, lambda n: (), lambda n: T.level(n).identity),
            Op(prefix + "inv", (sort,), sort, lambda n: _lvl(n), lambda n: T.level(n).inverse),
        ]
    if kind in ("ring", "lie"):
        ops = [
            Op(prefix + "add", (sort, sort), sort, lambda n: _lvl(n, 2), lambda n: T.level(n).add.table),
            Op(prefix + "zero", (), sort, lambda n: (), lambda n: T.level(n).zero),
            Op(prefix + "neg", (sort,), sort, lambda n: _lvl(n), lambda n: T.level(n).add.inverse),
        ]
        if kind == "ring":
            ops.append(Op(prefix + "mul", (sort, sort), sort, lambda n: _lvl(n, 2), lambda n: T.level(n).mul_table))
            if T.level(0).is_unital:
                ops.append(Op(prefix + "one", (), sort, lambda n: (), lambda n: T.level(n).one))
        else:
            ops.append(Op(prefix + "bracket", (sort, sort), sort, lambda n: _lvl(n, 2), lambda n: T.level(n).bracket))
            for k in range(T.level(0).scalars.order):
                ops.append(Op(f"{prefix}scale{k}", (sort,), sort, lambda n: _lvl(n), lambda n, k=k: T.level(n).smul[k]))
        return ops
    raise ContractError(f"no operations for towers of {kind}s")


def theory_axioms(T, sort="X", prefix=""):
    S0 = T.level(0)
    if T.kind == "group":
        return group_axioms(sort, prefix)
    if T.kind == "ring":
        return ring_axioms(sort, prefix, unital=S0.is_unital)
    if T.kind == "lie":
        return lie_axioms(sort, prefix, scalars=range(S0.scalars.order))
    raise ContractError(f"no theory for towers of {T.kind}s")


def strict_object(T, sort="X"):
    """View a strict tower as an object structure with unshifted operations."""
    return ObjectStructure({sort: T}, structure_ops(T, sort), theory_axioms(T, sort))


# -- promotion of maps ------------------------------------------------------------------


@dataclass
class Promotion:
    morphism: RawProMorphism
    original: RawProMorphism

    def shift(self, n):
        return self.morphism.idx(n) - self.original.idx(n)

    def witness(self, n):
        return self.morphism.idx(n)


def promote_hom(f, bound):
    """Post-compose level maps with bonds until each is a homomorphism.

    Returns a raw morphism with homomorphic level maps, equivalent to
    ``f`` with witness ``n -> new idx(n)``.  Raises :class:`Inconclusive`
    when no shift up to ``bound`` works at some level.
    """
    X, Y = f.source, f.target

    def find(n):
        i = f.idx(n)
        for k in range(i, i + bound + 1):
            t = f.shifted(n, k)
            if X.level(k).hom_violation(t, Y.level(n)) is None:
                return k
        raise Inconclusive(f"no homomorphic representative within {bound} shifts", level=n)

    cache = {}

    def idx(n):
        if n not in cache:
            cache[n] = find(n)
        return cache[n]

    g = RawProMorphism(X, Y, idx, lambda n: f.shifted(n, idx(n)))
    return Promotion(g, f)


# -- levelwise quotients -----------------------------------------------------------------


@dataclass
class Strictification:
    """Quotient tower ``Q`` of ``T``, the quotient level morphism and its iso witness."""

    tower: Tower
    quotient: RawProMorphism
    witness: IsoWitness
    witness_levels: dict

    def verify(self, up_to):
        return verify_iso_witness(self.quotient, self.witness, up_to)


def _quotient_tower(T, mask_at, witness_level, check_killed):
    """Levelwise quotients ``T_n / N_n`` with induced bonds and the iso witness.

    ``witness_level(i)`` is a level j whose bond to i kills ``N_j``; the
    backward map at i is ``[x] -> x|_i``.
    """
    data = {}

    def quot(n):
        if n not in data:
            S = T.level(n)
            mask = mask_at(n)
            if isinstance(S, FinGroup):
                Q, proj = quotient_group_by_mask(S, mask)
            elif isinstance(S, FinRng):
                Q, proj = quotient_ring_by_mask(S, mask)
            else:
                Q, proj = quotient_lie_by_mask(S, mask)
            data[n] = (Q, proj.table)
        return data[n]

    def bond(n):
        Q1, p1 = quot(n + 1)
        _, p0 = quot(n)
        t = np.zeros(Q1.order, dtype=np.int64)
        t[p1] = p0[T.bond(n).table]
        return t

    Q = Tower(T.kind, lambda n: quot(n)[0], bond, stable_from=T.stable_from if T.eventually_constant else None)
    proj = RawProMorphism.level_morphism(T, Q, lambda n: quot(n)[1])
    levels = {}

    def wl(i):
        if i not in levels:
            j = witness_level(i)
            check_killed(i, j)
            levels[i] = j
        return levels[i]

    def back(i):
        j = wl(i)
        Qj, pj = quot(j)
        u = np.zeros(Qj.order, dtype=np.int64)
        u[pj] = T.bond_table(j, i)
        return u

    return Q, proj, IsoWitness(wl, back), levels


def _validate(w, up_to):
    for i in range(up_to + 1):
        w.level(i)


def _search_level(i, bound, kills, what):
    for j in range(i, i + bound + 1):
        if kills(i, j):
            return j
    raise Inconclusive(f"no level up to {i + bound} kills the {what} at level {i}", level=i)


def strictify_abelian(G, witnesses=None, bound=4, up_to=8):
    """Levelwise abelianization of a tower that is an abelian object.

    ``witnesses`` maps a level i to a level j whose bond to i kills all
    commutators (Lie: all brackets); otherwise one is searched up to
    ``bound`` levels deep.
    """
    if G.kind == "group":

        def seeds(n):
            return G.level(n).commutator_seeds()

        def mask(n):
            return G.level(n).normal_closure_mask(seeds(n))

    elif G.kind == "lie":

        def seeds(n):
            return np.unique(G.level(n).bracket)

        def mask(n):
            return lie_ideal_closure_mask(G.level(n), seeds(n))

    else:
        raise ContractError("strictify_abelian needs a tower of groups or Lie algebras")

    def killed(i, j):
        img = G.bond_table(j, i)[seeds(j)]
        zero = G.level(i).identity if G.kind == "group" else G.level(i).zero
        return bool((img == zero).all())

    def level(i):
        if witnesses is not None:
            return witnesses(i) if callable(witnesses) else witnesses[i]
        return _search_level(i, bound, killed, "commutators")

    def check(i, j):
        if j < i or not killed(i, j):
            raise ContractError(f"bond {j}->{i} does not kill all commutators", level=i)

    Q, proj, w, levels = _quotient_tower(G, mask, level, check)
    _validate(w, up_to)
    return Strictification(Q, proj, w, levels)


def _unit_at(unit, R, i):
    """The designated element at level i from a map ``{*} -> R`` given as (idx, elt)."""
    if unit is None:
        raise ContractError("the unital flavor needs a designated unit")
    k, e = unit(i)
    return R.restrict(e, k, i)


def strictify_ring_flavor(R, flavor, unit=None, witnesses=None, bound=4, up_to=8):
    """Commutative and/or unital quotient tower of a tower of rngs.

    ``unit(i)`` returns ``(level, element)`` representing the identity
    element of the ring object at level i.
    """
    if flavor not in ("commutative", "unital", "both"):
        raise ContractError(f"unknown flavor {flavor!r}")
    if R.kind != "ring":
        raise ContractError("strictify_ring_flavor needs a tower of rings")
    commutative = flavor in ("commutative", "both")
    unital = flavor in ("unital", "both")

    def seeds(n):
        S = R.level(n)
        out = []
        a, m, neg = S.add.table, S.mul_table, S.add.inverse
        if commutative:
            out.append(a[m, neg[m.T]].ravel())
        if unital:
            e = _unit_at(unit, R, n)
            ar = np.arange(S.order)
            out.append(a[m[e], neg[ar]])
            out.append(a[m[:, e], neg[ar]])
        return np.unique(np.concatenate(out))

    def mask(n):
        return ideal_closure_mask(R.level(n), seeds(n))

    def killed(i, j):
        return bool((R.bond_table(j, i)[seeds(j)] == R.level(i).zero).all())

    def level(i):
        if witnesses is not None:
            return witnesses(i) if callable(witnesses) else witnesses[i]
        return _search_level(i, bound, killed, "ideal generators")

    def check(i, j):
        if j < i or not killed(i, j):
            raise ContractError(f"bond {j}->{i} does not kill the ideal generators", level=i)

    Q, proj, w, levels = _quotient_tower(R, mask, level, check)
    _validate(w, up_to)
    if unital:
        base, base_map = Q, proj.map

        def gen(n):
            S = base.level(n)
            e = int(base_map(n)[_unit_at(unit, R, n)])
            return FinRng(S.add, S.mul_table, one=e)

        Q = Tower("ring", gen, lambda n: base.bond(n).table, stable_from=base.stable_from)
        proj = RawProMorphism.level_morphism(R, Q, base_map)
    return Strictification(Q, proj, w, levels)


@dataclass
class AlgebraPresentation:
    """A unital algebra tower ``K' -> R'`` iso to the input ``f: K -> R``."""

    scalars: Tower
    ring: Tower
    inclusion: RawProMorphism
    ring_iso: Strictification
    scalar_map: RawProMorphism
    scalar_witness: IsoWitness

    def verify(self, up_to):
        rep = self.ring_iso.verify(up_to)
        rep.merge(verify_iso_witness(self.scalar_map, self.scalar_witness, up_to), "scalars: ")
        return rep


def strictify_unital_algebra(K, R, f, witnesses=None, bound=4, up_to=8):
    """Quotient ``R`` by the ideals of commutators ``[x, f(y)]``.

    ``f`` is a level morphism of unital ring towers ``K -> R`` that must be
    injective at every level; centrality in the object sense is witnessed
    by levels whose bonds kill the commutator ideal.
    """
    for n in range(up_to + 1):
        t = f.map(n)
        if len(np.unique(t)) != K.level(n).order:
            raise ContractError("the scalar map is not injective", level=n)
        if K.level(n).hom_violation(t, R.level(n), unital=True):
            raise ContractError("the scalar map is not a unital ring homomorphism", level=n)

    def seeds(n):
        S = R.level(n)
        a, m, neg = S.add.table, S.mul_table, S.add.inverse
        fy = f.map(n)
        return np.unique(a[m[:, fy], neg[m[fy, :].T]])

    def mask(n):
        return ideal_closure_mask(R.level(n), seeds(n))

    def killed(i, j):
        return bool((R.bond_table(j, i)[seeds(j)] == R.level(i).zero).all())

    def level(i):
        if witnesses is not None:
            return witnesses(i) if callable(witnesses) else witnesses[i]
        try:
            return _search_level(i, bound, killed, "commutators with scalars")
        except Inconclusive:
            raise ContractError("the scalar map is not central", level=i) from None

    def check(i, j):
        if j < i or not killed(i, j):
            raise ContractError(f"the scalar map is not central at level {i}", level=i)

    Q, proj, w, levels = _quotient_tower(R, mask, level, check)
    _validate(w, up_to)
    ring_iso = Strictification(Q, proj, w, levels)

    subs = {}

    def sub(n):
        if n not in subs:
            img = np.zeros(Q.level(n).order, dtype=bool)
            img[proj.map(n)[f.map(n)]] = True
            Kp, inc = substructure(Q.level(n), img)
            rel = np.full(Q.level(n).order, -1, dtype=np.int64)
            rel[inc.table] = np.arange(Kp.order)
            subs[n] = (Kp, inc.table, rel)
        return subs[n]

    Kp = Tower("ring", lambda n: sub(n)[0], lambda n: sub(n)[2][Q.bond(n).table[sub(n + 1)[1]]])
    inclusion = RawProMorphism.level_morphism(Kp, Q, lambda n: sub(n)[1])
    scalar_map = RawProMorphism.level_morphism(K, Kp, lambda n: sub(n)[2][proj.map(n)[f.map(n)]])

    def back(i):
        j = w.level(i)
        Kj, _, rel = sub(j)
        # [f_j(y)] -> y|_i, well defined because f is injective and central
        u = np.zeros(Kj.order, dtype=np.int64)
        u[rel[proj.map(j)[f.map(j)]]] = K.bond_table(j, i)
        return u

    return AlgebraPresentation(Kp, Q, inclusion, ring_iso, scalar_map, IsoWitness(w.level, back))


__all__ = [
    "AlgebraPresentation",
    "App",
    "Axiom",
    "ObjectStructure",
    "Op",
    "Promotion",
    "Strictification",
    "Var",
    "app",
    "check_object_axioms",
    "group_action_axioms",
    "group_axioms",
    "lie_action_axioms",
    "lie_axioms",
    "promote_hom",
    "ring_action_axioms",
    "ring_axioms",
    "strict_object",
    "strictify_abelian",
    "strictify_ring_flavor",
    "strictify_unital_algebra",
    "structure_ops",
    "theory_axioms",
]
