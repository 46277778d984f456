"""Towers of finite structures and morphisms between them.

A tower is an inverse system indexed by the natural numbers.  Levels and
bonding maps are produced lazily and memoized behind a lock, so a tower
can be shared across threads.  Every "for each level there is a level"
statement is carried by an explicit witness function and checked level by
level up to a bound.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT_SIZE_BOUND, level_cap
from .errors import ContractError, ProactError, ResourceError
from .finalg.constructions import direct_product, image_mask, substructure
from .finalg.homs import enumerate_homs
from .finalg.structures import FinGroup, FinLieAlg, FinRng, Hom, identity_hom, same_structure

KINDS = ("set", "group", "ring", "lie")


def kind_of(S):
    if isinstance(S, FinGroup):
        return "group"
    if isinstance(S, FinRng):
        return "ring"
    if isinstance(S, FinLieAlg):
        return "lie"
    return "set"


def _as_table(m):
    return m.table if isinstance(m, Hom) else np.asarray(m, dtype=np.int64)


@dataclass
class CheckReport:
    """Outcome of a per-level check: truthy when there are no failures."""

    checked: int = 0
    failures: list = field(default_factory=list)
    inconclusive: list = field(default_factory=list)

    def fail(self, level, message):
        self.failures.append((level, message))

    def __bool__(self):
        return not self.failures and not self.inconclusive

    @property
    def ok(self):
        return bool(self)

    @property
    def status(self):
        if self.failures:
            return "violation"
        if self.inconclusive:
            return "inconclusive"
        return "verified"

    @property
    def first_failure(self):
        return self.failures[0] if self.failures else None

    def merge(self, other, prefix=""):
        self.checked += other.checked
        self.failures += [(lv, prefix + msg) for lv, msg in other.failures]
        self.inconclusive += [(lv, prefix + msg) for lv, msg in other.inconclusive]
        return self


class Tower:
    """An inverse system ``X_0 <- X_1 <- X_2 <- ...`` of finite structures.

    ``gen(n)`` returns the structure at level n and ``bond(n)`` the map
    ``X_{n+1} -> X_n`` as a Hom or a table.  ``stable_from`` declares that
    levels and bonds are constant (identity bonds) from that level on;
    ``period`` additionally declares periodic repetition from
    ``stable_from``.
    """

    def __init__(self, kind, gen, bond, *, stable_from=None, period=None, name=None):
        if kind not in KINDS:
            raise ContractError(f"unknown tower kind {kind!r}")
        self.kind = kind
        self._gen, self._bond = gen, bond
        self.stable_from = stable_from
        self.period = period
        self.name = name
        self._levels, self._bonds, self._composites = {}, {}, {}
        self._lock = threading.RLock()

    # -- queries -------------------------------------------------------------

    def _check_level(self, n):
        if n < 0:
            raise ContractError("levels are non-negative")
        if n > level_cap():
            raise ResourceError(f"level {n} exceeds the level cap {level_cap()}")

    def level(self, n):
        self._check_level(n)
        with self._lock:
            if n not in self._levels:
                S = self._gen(n)
                if kind_of(S) != self.kind:
                    raise ContractError(f"level {n} is a {kind_of(S)}, tower kind is {self.kind}", level=n)
                self._levels[n] = S
            return self._levels[n]

    def bond(self, n):
        """The bonding map ``X_{n+1} -> X_n`` (not validated; see check_tower)."""
        self._check_level(n + 1)
        with self._lock:
            if n not in self._bonds:
                m = self._bond(n)
                self._bonds[n] = Hom(self.level(n + 1), self.level(n), _as_table(m), check=False)
            return self._bonds[n]

    def bond_table(self, j, i):
        """Table of the composite bond ``X_j -> X_i`` for ``j >= i``."""
        if j < i:
            raise ContractError(f"no bond from level {j} to the finer level {i}")
        with self._lock:
            key = (j, i)
            if key not in self._composites:
                if j == i:
                    t = np.arange(self.level(i).order)
                else:
                    t = self.bond(i).table[self.bond_table(j, i + 1)]
                t.setflags(write=False)
                self._composites[key] = t
            return self._composites[key]

    def bond_between(self, j, i):
        return Hom(self.level(j), self.level(i), self.bond_table(j, i), check=False)

    def restrict(self, x, j, i):
        """``x|_i`` for ``x`` at level ``j``."""
        return int(self.bond_table(j, i)[x])

    def orders(self, up_to):
        return [self.level(n).order for n in range(up_to + 1)]

    @property
    def stabilization(self):
        if self.stable_from is None:
            return None
        if self.period:
            return {"kind": "periodic", "from": self.stable_from, "period": self.period}
        return {"kind": "constant", "from": self.stable_from}

    @property
    def eventually_constant(self):
        return self.stable_from is not None and not self.period

    def __repr__(self):
        label = f" {self.name}" if self.name else ""
        return f"<Tower{label} of {self.kind}s>"

    # -- constructors --------------------------------------------------------

    @classmethod
    def constant(cls, S, name=None):
        ident = np.arange(S.order)
        return cls(kind_of(S), lambda n: S, lambda n: ident, stable_from=0, name=name)

    @classmethod
    def from_levels(cls, levels, bonds, name=None):
        """Explicit levels ``X_0..X_L`` and bonds ``X_{n+1} -> X_n``, constant after L."""
        levels = list(levels)
        bonds = [_as_table(b) for b in bonds]
        if len(bonds) != len(levels) - 1:
            raise ContractError("need exactly one bond between consecutive explicit levels")
        last = len(levels) - 1
        kind = kind_of(levels[0])
        ident = np.arange(levels[-1].order)

        def gen(n):
            return levels[min(n, last)]

        def bond(n):
            return bonds[n] if n < last else ident

        return cls(kind, gen, bond, stable_from=last, name=name)

    @classmethod
    def cyclic_2power(cls):
        """``Z/2^{n+1}`` with reduction bonds."""
        from .finalg.catalog import cyclic

        return cls("group", lambda n: cyclic(2 ** (n + 1)), lambda n: np.arange(2 ** (n + 2)) % 2 ** (n + 1), name="Z/2^(n+1)")

    @classmethod
    def vector(cls, p, stable_from=None):
        """``(Z/p)^n`` with bonds dropping the last coordinate.

        Ids are base-p numbers with the first coordinate most significant,
        so dropping the last coordinate is ``x // p``.  With ``stable_from``
        the tower is constant from that level on.
        """
        from .finalg.catalog import elementary

        def dim(n):
            return n if stable_from is None else min(n, stable_from)

        def gen(n):
            return elementary(p, dim(n))

        def bond(n):
            if dim(n + 1) == dim(n):
                return np.arange(p ** dim(n))
            return np.arange(p ** (n + 1)) // p

        return cls("group", gen, bond, stable_from=stable_from, name=f"(Z/{p})^n")

    @classmethod
    def product(cls, X, Y):
        """Levelwise product; pair (x, y) has id ``x * |Y_n| + y``."""
        if X.kind != Y.kind:
            raise ContractError("product of towers of different kinds")

        def gen(n):
            return direct_product(X.level(n), Y.level(n))

        def bond(n):
            bx, by = X.bond(n).table, Y.bond(n).table
            ny = Y.level(n).order
            return (bx[:, None] * ny + by[None, :]).ravel()

        stable = None
        if X.eventually_constant and Y.eventually_constant:
            stable = max(X.stable_from, Y.stable_from)
        return cls(X.kind, gen, bond, stable_from=stable, name=f"{X.name}x{Y.name}")

    @classmethod
    def reindex(cls, X, u):
        """The tower ``n -> X_{u(n)}`` for a monotone map ``u``."""
        _check_monotone(u)
        stable = None
        if X.eventually_constant:
            # first n with u(n) >= stable_from, searched up to the cap
            for n in range(level_cap() + 1):
                if u(n) >= X.stable_from:
                    stable = n
                    break
        return cls(X.kind, lambda n: X.level(u(n)), lambda n: X.bond_table(u(n + 1), u(n)), stable_from=stable)


def _check_monotone(u, up_to=8):
    vals = [u(n) for n in range(up_to + 1)]
    if any(b < a for a, b in zip(vals, vals[1:])):
        raise ContractError("index map is not monotone")


def check_tower(T, up_to):
    """Validate level structures, bond homomorphisms and declared stabilization."""
    if up_to < 0:
        raise ContractError("up_to must be non-negative")
    rep = CheckReport()
    for n in range(up_to + 1):
        try:
            T.level(n)
            if n < up_to:
                bad = T.bond(n).violation()
                if bad:
                    rep.fail(n, f"bond {n + 1}->{n} does not preserve {bad}")
        except ProactError as e:
            rep.fail(n, str(e))
            continue
        rep.checked += 1
        s = T.stable_from
        if s is not None and n > s:
            if T.period:
                ref = s + (n - s) % T.period
                if not same_structure(T.level(n), T.level(ref)):
                    rep.fail(n, f"level {n} breaks the declared period")
            else:
                if not same_structure(T.level(n), T.level(s)):
                    rep.fail(n, f"level {n} differs from the stable level {s}")
                elif not (T.bond(n - 1).table == np.arange(T.level(n).order)).all():
                    rep.fail(n, f"bond {n}->{n - 1} is not the identity past the stable level")
    return rep


# -- morphisms ------------------------------------------------------------------


class RawProMorphism:
    """Index map plus level maps ``f_n : X_{idx(n)} -> Y_n``."""

    def __init__(self, source, target, idx, maps):
        self.source, self.target = source, target
        self._idx, self._maps = idx, maps
        self._cache = {}
        self._lock = threading.RLock()

    def idx(self, n):
        return int(self._idx(n))

    def map(self, n):
        """Table of ``f_n``."""
        with self._lock:
            if n not in self._cache:
                t = np.array(_as_table(self._maps(n)), dtype=np.int64)
                X, Y = self.source.level(self.idx(n)), self.target.level(n)
                if t.shape != (X.order,) or (t.size and (t.min() < 0 or t.max() >= Y.order)):
                    raise ContractError(f"level map {n} has the wrong shape or range", level=n)
                t.setflags(write=False)
                self._cache[n] = t
            return self._cache[n]

    def hom(self, n):
        return Hom(self.source.level(self.idx(n)), self.target.level(n), self.map(n), check=False)

    def is_level(self, up_to=8):
        return all(self.idx(n) == n for n in range(up_to + 1))

    def shifted(self, n, k):
        """``f_n`` precomposed with the bond ``X_k -> X_{idx(n)}``."""
        return self.map(n)[self.source.bond_table(k, self.idx(n))]

    def check_coherence(self, up_to):
        """For n < m: ``Y(m->n) o f_m`` and ``f_n`` agree at ``k = max(idx)``."""
        rep = CheckReport()
        for m in range(1, up_to + 1):
            n = m - 1
            k = max(self.idx(n), self.idx(m))
            lhs = self.target.bond_table(m, n)[self.shifted(m, k)]
            if not (lhs == self.shifted(n, k)).all():
                rep.fail(m, f"level maps {m} and {n} are not coherent")
            rep.checked += 1
        return rep

    def then(self, other):
        """Composite ``other o self``."""
        f, g = self, other

        def maps(n):
            return g.map(n)[f.map(g.idx(n))]

        return RawProMorphism(f.source, g.target, lambda n: f.idx(g.idx(n)), maps)

    @classmethod
    def identity(cls, X):
        return cls(X, X, lambda n: n, lambda n: np.arange(X.level(n).order))

    @classmethod
    def level_morphism(cls, X, Y, maps):
        return cls(X, Y, lambda n: n, maps)

    @classmethod
    def bond_shift(cls, X, u):
        """Level morphism ``reindex(X, u) -> X`` given by bonds (needs u(n) >= n)."""
        R = Tower.reindex(X, u)
        return cls(R, X, lambda n: n, lambda n: X.bond_table(u(n), n))


def morphisms_equivalent(f, g, witness=None, up_to=8):
    """Whether ``f_n`` and ``g_n`` agree after the bonds to ``witness(n)``.

    ``witness(n)`` must be at least both index values at ``n``; the default
    is their maximum.
    """
    for n in range(up_to + 1):
        lo = max(f.idx(n), g.idx(n))
        k = lo if witness is None else witness(n)
        if isinstance(k, tuple):
            k = max(k)
        if k < lo:
            raise ContractError(f"witness level {k} is below the required level {lo}", level=n)
        if not (f.shifted(n, k) == g.shifted(n, k)).all():
            return False
    return True


@dataclass
class EquivalenceVerdict:
    kind: str  # "equivalent" | "not_equivalent_up_to"
    bound: int
    witness: dict = field(default_factory=dict)
    level: int | None = None

    @property
    def equivalent(self):
        return self.kind == "equivalent"

    def witness_fn(self):
        w = dict(self.witness)
        return lambda n: w[n]


def search_equivalence(f, g, bound, up_to=8):
    """Search witnesses ``k in [max idx, max idx + bound]`` level by level."""
    if bound < 0:
        raise ContractError("bound must be non-negative")
    wit = {}
    for n in range(up_to + 1):
        lo = max(f.idx(n), g.idx(n))
        for k in range(lo, min(lo + bound, level_cap()) + 1):
            if (f.shifted(n, k) == g.shifted(n, k)).all():
                wit[n] = k
                break
        else:
            return EquivalenceVerdict("not_equivalent_up_to", bound, wit, level=n)
    return EquivalenceVerdict("equivalent", bound, wit)


@dataclass
class HomClasses:
    classes: list
    source_level: int
    target_level: int
    exact: bool

    @property
    def status(self):
        return "exact" if self.exact else "truncated"

    def __len__(self):
        return len(self.classes)


def hom_classes(X, Y, bound, *, size_bound=None):
    """Morphism classes ``X -> Y`` computed from the truncation at ``bound``.

    The colimit over source levels is read off at the last source level
    considered and the limit over target levels at the last target level;
    both are exact once the towers are constant from there on.
    """
    if X.kind != Y.kind:
        raise ContractError("hom_classes needs towers of the same kind")
    i = bound if X.stable_from is None else min(bound, X.stable_from)
    j = bound if Y.stable_from is None else min(bound, Y.stable_from)
    A, B = X.level(i), Y.level(j)
    homs = enumerate_homs(A, B, bound=size_bound or DEFAULT_SIZE_BOUND)
    exact = X.eventually_constant and Y.eventually_constant and i == X.stable_from and j == Y.stable_from
    return HomClasses(homs, i, j, exact)


def hom_class_morphism(X, Y, hc, k):
    """The raw morphism represented by class ``k`` of a HomClasses result."""
    h = hc.classes[k]
    i, j = hc.source_level, hc.target_level

    def maps(n):
        return Y.bond_table(max(n, j), n)[h.table[X.bond_table(max(n, i), i)]]

    return RawProMorphism(X, Y, lambda n: max(n, i, j), maps)


# -- isomorphism criterion --------------------------------------------------------


@dataclass
class IsoWitness:
    """For each level ``i`` a level ``j >= i`` and a map ``u_i : Y_j -> X_i``."""

    level: object  # i -> j
    back: object  # i -> table of u_i

    def at(self, i):
        return int(self.level(i)), np.asarray(_as_table(self.back(i)), dtype=np.int64)


def verify_iso_witness(f, w, up_to):
    """Check ``f_i o u_i = Y(j->i)`` and ``u_i o f_j = X(j->i)`` for i <= up_to."""
    X, Y = f.source, f.target
    rep = CheckReport()
    for i in range(up_to + 1):
        if f.idx(i) != i:
            raise ContractError("verify_iso_witness needs a level morphism", level=i)
        j, u = w.at(i)
        if j < i:
            raise ContractError(f"witness level {j} is below {i}", level=i)
        if f.idx(j) != j:
            raise ContractError("verify_iso_witness needs a level morphism", level=j)
        Xi, Yj = X.level(i), Y.level(j)
        if u.shape != (Yj.order,) or (u.size and (u.min() < 0 or u.max() >= Xi.order)):
            rep.fail(i, "backward map has the wrong shape or range")
            continue
        if not (f.map(i)[u] == Y.bond_table(j, i)).all():
            rep.fail(i, "f_i o u_i differs from the target bond")
        if not (u[f.map(j)] == X.bond_table(j, i)).all():
            rep.fail(i, "u_i o f_j differs from the source bond")
        rep.checked += 1
    return rep


def reindex_iso(X, u):
    """Level morphism ``reindex(X, u) -> X`` and its witness (j = u(i), identity)."""
    f = RawProMorphism.bond_shift(X, u)
    w = IsoWitness(lambda i: u(i), lambda i: np.arange(X.level(u(i)).order))
    return f, w


def identity_witness(X):
    return IsoWitness(lambda i: i, lambda i: np.arange(X.level(i).order))


# -- images and mono/epi ------------------------------------------------------------


@dataclass
class ImageDecomposition:
    image: Tower
    epi: RawProMorphism
    mono: RawProMorphism


def image_decomposition(f):
    """Factor a level morphism through the levelwise image tower."""
    X, Y = f.source, f.target
    subs = {}
    lock = threading.RLock()

    def sub(n):
        with lock:
            if n not in subs:
                if f.idx(n) != n:
                    raise ContractError("image_decomposition needs a level morphism", level=n)
                mask = image_mask(f.hom(n))
                S, inc = substructure(Y.level(n), mask)
                relabel = np.full(Y.level(n).order, -1, dtype=np.int64)
                relabel[inc.table] = np.arange(S.order)
                subs[n] = (S, inc.table, relabel)
            return subs[n]

    def bond(n):
        S1, inc1, _ = sub(n + 1)
        _, _, rel0 = sub(n)
        return rel0[Y.bond(n).table[inc1]]

    stable = None
    if X.eventually_constant and Y.eventually_constant:
        stable = max(X.stable_from, Y.stable_from)
    image = Tower(Y.kind, lambda n: sub(n)[0], bond, stable_from=stable)
    epi = RawProMorphism.level_morphism(X, image, lambda n: sub(n)[2][f.map(n)])
    mono = RawProMorphism.level_morphism(image, Y, lambda n: sub(n)[1])
    return ImageDecomposition(image, epi, mono)


def mono_epi_check(f, up_to):
    """Levelwise injectivity and surjectivity (sufficient conditions only)."""
    mono = epi = True
    for n in range(up_to + 1):
        t = f.map(n)
        k = len(np.unique(t))
        mono &= k == f.source.level(f.idx(n)).order
        epi &= k == f.target.level(n).order
    return {"mono": bool(mono), "epi": bool(epi), "levelwise": True, "up_to": up_to}


# -- two-parameter systems ------------------------------------------------------------


class BiTower:
    """A system over ``N x N`` with bonds lowering either coordinate.

    ``row_bond(m, n)`` maps ``X_{(m+1, n)} -> X_{(m, n)}`` and
    ``col_bond(m, n)`` maps ``X_{(m, n+1)} -> X_{(m, n)}``; the two kinds
    of bond must commute.
    """

    def __init__(self, kind, gen, row_bond, col_bond):
        self.kind = kind
        self._gen, self._row, self._col = gen, row_bond, col_bond
        self._levels = {}
        self._lock = threading.RLock()

    def level(self, m, n):
        with self._lock:
            if (m, n) not in self._levels:
                self._levels[(m, n)] = self._gen(m, n)
            return self._levels[(m, n)]

    def row_bond(self, m, n):
        return _as_table(self._row(m, n))

    def col_bond(self, m, n):
        return _as_table(self._col(m, n))

    def check_commuting(self, up_to):
        rep = CheckReport()
        for m in range(up_to):
            for n in range(up_to):
                a = self.row_bond(m, n)[self.col_bond(m + 1, n)]
                b = self.col_bond(m, n)[self.row_bond(m, n + 1)]
                if not (a == b).all():
                    rep.fail(max(m, n), f"bonds do not commute at {(m, n)}")
                rep.checked += 1
        return rep

    @classmethod
    def from_tower(cls, X):
        """``(m, n) -> X_{max(m, n)}``."""

        def row(m, n):
            return X.bond_table(max(m + 1, n), max(m, n))

        def col(m, n):
            return X.bond_table(max(m, n + 1), max(m, n))

        return cls(X.kind, lambda m, n: X.level(max(m, n)), row, col)

    @classmethod
    def from_pair(cls, X, Y):
        """``(m, n) -> X_m x Y_n``."""

        def gen(m, n):
            return direct_product(X.level(m), Y.level(n))

        def row(m, n):
            ny = Y.level(n).order
            return (X.bond(m).table[:, None] * ny + np.arange(ny)[None, :]).ravel()

        def col(m, n):
            ny = Y.level(n).order
            return (np.arange(X.level(m).order)[:, None] * ny + Y.bond(n).table[None, :]).ravel()

        return cls(X.kind, gen, row, col)

    @classmethod
    def constant_in_rows(cls, X):
        """``(m, n) -> X_n``, ignoring the first coordinate."""
        return cls(
            X.kind,
            lambda m, n: X.level(n),
            lambda m, n: np.arange(X.level(n).order),
            lambda m, n: X.bond(n).table,
        )


def _staircase(k):
    return ((k + 1) // 2, k // 2)


@dataclass
class DiagonalReindex:
    diagonal: Tower
    staircase: Tower
    iso: RawProMorphism
    witness: IsoWitness


def diagonal_reindex(B):
    """Diagonal tower ``n -> X_{(n,n)}`` with its canonical pro-isomorphism.

    The comparison tower is the staircase ``(0,0), (1,0), (1,1), (2,1), ...``,
    which is cofinal and passes through the diagonal at every even step;
    the level morphism from the diagonal to the staircase is given by its
    bonds and comes with an explicit iso witness.
    """

    def stair_bond(k):
        m, n = _staircase(k)
        return B.row_bond(m, n) if k % 2 == 0 else B.col_bond(m, n)

    stair = Tower(B.kind, lambda k: B.level(*_staircase(k)), stair_bond)
    diag = Tower(B.kind, lambda n: B.level(n, n), lambda n: stair.bond_table(2 * n + 2, 2 * n))
    iso = RawProMorphism.level_morphism(diag, stair, lambda n: stair.bond_table(2 * n, n))
    witness = IsoWitness(lambda i: 2 * i, lambda i: np.arange(B.level(i, i).order))
    return DiagonalReindex(diag, stair, iso, witness)


__all__ = [
    "BiTower",
    "CheckReport",
    "DiagonalReindex",
    "EquivalenceVerdict",
    "HomClasses",
    "ImageDecomposition",
    "IsoWitness",
    "RawProMorphism",
    "Tower",
    "check_tower",
    "diagonal_reindex",
    "hom_class_morphism",
    "hom_classes",
    "identity_hom",
    "identity_witness",
    "image_decomposition",
    "kind_of",
    "mono_epi_check",
    "morphisms_equivalent",
    "reindex_iso",
    "search_equivalence",
    "verify_iso_witness",
]
