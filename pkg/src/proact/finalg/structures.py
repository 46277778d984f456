"""Table-backed finite structures.

Elements of every structure are the dense ids ``0..order-1``.  Operation
tables are read-only numpy arrays; every constructor validates its axioms
before returning, so holding an instance means holding a lawful structure.
"""

from __future__ import annotations

import numpy as np

from ..config import MAX_ORDER
from ..errors import ResourceError, StructureError


def _check_range(arr, n, what):
    if arr.size and (arr.min() < 0 or arr.max() >= n):
        raise StructureError(f"{what}: entries must lie in 0..{n - 1}")


def _check_order(n):
    if n < 1:
        raise StructureError("a structure needs at least one element")
    if n > MAX_ORDER:
        raise ResourceError(f"structure of order {n} exceeds MAX_ORDER={MAX_ORDER}")


def _closure(table, start, gens):
    """Elements reachable from ``start`` by right multiplication with ``gens``."""
    n = table.shape[0]
    mask = np.zeros(n, dtype=bool)
    mask[list(start)] = True
    gens = np.asarray(list(gens), dtype=np.int64)
    if gens.size == 0:
        return mask
    frontier = np.flatnonzero(mask)
    while frontier.size:
        reached = np.unique(table[np.ix_(frontier, gens)])
        new = reached[~mask[reached]]
        mask[new] = True
        frontier = new
    return mask


def _greedy_generators(table, identity):
    n = table.shape[0]
    gens = []
    mask = _closure(table, [identity], gens)
    while not mask.all():
        gens.append(int(np.flatnonzero(~mask)[0]))
        mask = _closure(table, [identity], gens)
    return tuple(gens)


class Structure:
    """Common surface of all finite structures."""

    kind = "set"

    @property
    def order(self):
        raise NotImplementedError

    @property
    def elements(self):
        return range(self.order)

    def hom_violation(self, table, target):
        """Name of the first operation ``table`` fails to preserve, or None."""
        return None

    def __len__(self):
        return self.order


class FinSet(Structure):
    kind = "set"

    def __init__(self, order, name=None):
        _check_order(order)
        self._order = int(order)
        self.name = name or f"Set{order}"

    @property
    def order(self):
        return self._order

    def __eq__(self, other):
        return isinstance(other, FinSet) and other._order == self._order

    def __hash__(self):
        return hash(("set", self._order))

    def __repr__(self):
        return f"FinSet({self._order})"


class FinGroup(Structure):
    """A finite group given by its multiplication table."""

    kind = "group"

    def __init__(self, table, name=None):
        arr = np.array(table, dtype=np.int64)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise StructureError("group table must be square")
        n = arr.shape[0]
        _check_order(n)
        _check_range(arr, n, "group table")
        arr.setflags(write=False)
        self.table = arr
        self.name = name
        ar = np.arange(n)
        ids = [e for e in range(n) if (arr[e] == ar).all() and (arr[:, e] == ar).all()]
        if not ids:
            raise StructureError("group table has no two-sided identity")
        self.identity = ids[0]
        # Latin square: every row and column is a permutation.
        rows_ok = (np.sort(arr, axis=1) == ar).all()
        cols_ok = (np.sort(arr, axis=0) == ar[:, None]).all()
        if not (rows_ok and cols_ok):
            raise StructureError("group table is not a Latin square")
        inv = np.argmax(arr == self.identity, axis=1)
        if not (arr[inv, ar] == self.identity).all():
            raise StructureError("left and right inverses disagree")
        inv.setflags(write=False)
        self.inverse = inv
        self._gens = _greedy_generators(arr, self.identity)
        # Light's test: associativity on a generating set suffices.
        for g in self._gens:
            if not (arr[arr[:, g], :] == arr[:, arr[g, :]]).all():
                raise StructureError("group table is not associative")

    @property
    def order(self):
        return self.table.shape[0]

    def generators(self):
        return self._gens

    def mul(self, a, b):
        return int(self.table[a, b])

    def inv(self, a):
        return int(self.inverse[a])

    def is_abelian(self):
        return bool((self.table == self.table.T).all())

    def element_order(self, a):
        k, x = 1, a
        while x != self.identity:
            x = int(self.table[x, a])
            k += 1
        return k

    def exponent(self):
        from math import lcm

        out = 1
        for a in range(self.order):
            out = lcm(out, self.element_order(a))
        return out

    def power_table(self, m):
        """Array x -> x^m."""
        out = np.full(self.order, self.identity, dtype=np.int64)
        base = np.arange(self.order)
        while m:
            if m & 1:
                out = self.table[out, base]
            base = self.table[base, base]
            m >>= 1
        return out

    def subgroup_mask(self, seeds):
        seeds = sorted({int(s) for s in seeds} | {self.identity})
        return _closure(self.table, [self.identity], seeds)

    def normal_closure_mask(self, seeds):
        mask = self.subgroup_mask(seeds)
        gens = np.array(self._gens or (self.identity,), dtype=np.int64)
        while True:
            members = np.flatnonzero(mask)
            # g n g^-1 for g among the generators
            conj = self.table[self.table[np.ix_(gens, members)], self.inverse[gens][:, None]]
            conj = np.unique(conj)
            if mask[conj].all():
                return mask
            mask = self.subgroup_mask(np.concatenate([members, conj]))

    def is_normal_mask(self, mask):
        members = np.flatnonzero(mask)
        conj = self.table[self.table[:, members], self.inverse[:, None]]
        return bool(mask[conj].all())

    def commutator_seeds(self):
        t, inv = self.table, self.inverse
        ar = np.arange(self.order)
        # x y x^-1 y^-1
        c = t[t[t[ar[:, None], ar[None, :]], inv[ar][:, None]], inv[ar][None, :]]
        return np.unique(c)

    def hom_violation(self, table, target):
        if not isinstance(target, FinGroup):
            return "target kind"
        f = np.asarray(table)
        if not (f[self.table] == target.table[f[:, None], f[None, :]]).all():
            return "multiplication"
        return None

    def __repr__(self):
        label = f" {self.name}" if self.name else ""
        return f"<FinGroup{label} order={self.order}>"


class FinRng(Structure):
    """A finite associative ring, unital when ``one`` is given."""

    kind = "ring"

    def __init__(self, add, mul, one=None, name=None):
        if not isinstance(add, FinGroup):
            add = FinGroup(add)
        if not add.is_abelian():
            raise StructureError("ring addition must be commutative")
        n = add.order
        m = np.array(mul, dtype=np.int64)
        if m.shape != (n, n):
            raise StructureError(f"ring multiplication must have shape {(n, n)}")
        _check_range(m, n, "ring multiplication")
        m.setflags(write=False)
        self.add = add
        self.mul_table = m
        self.name = name
        a = add.table
        for g in add.generators():
            # x -> c*x and x -> x*c additive for every c, checked on generators
            if not (m[:, a[:, g]] == a[m, m[:, g][:, None]]).all():
                raise StructureError("multiplication is not left distributive")
            if not (m[a[:, g], :] == a[m, m[g, :][None, :]]).all():
                raise StructureError("multiplication is not right distributive")
        gens = add.generators()
        for x in gens:
            for y in gens:
                for z in gens:
                    if m[m[x, y], z] != m[x, m[y, z]]:
                        raise StructureError("multiplication is not associative")
        if one is not None:
            one = int(one)
            ar = np.arange(n)
            if not ((m[one] == ar).all() and (m[:, one] == ar).all()):
                raise StructureError(f"element {one} is not a two-sided unit")
        self.one = one

    @property
    def order(self):
        return self.add.order

    @property
    def zero(self):
        return self.add.identity

    @property
    def is_unital(self):
        return self.one is not None

    def is_commutative(self):
        return bool((self.mul_table == self.mul_table.T).all())

    def neg(self, a):
        return int(self.add.inverse[a])

    def plus(self, a, b):
        return int(self.add.table[a, b])

    def times(self, a, b):
        return int(self.mul_table[a, b])

    def multiple_table(self, k):
        """Array x -> k*x for an integer k >= 0."""
        return self.add.power_table(k)

    def additive_exponent(self):
        return self.add.exponent()

    def hom_violation(self, table, target, unital=False):
        if not isinstance(target, FinRng):
            return "target kind"
        f = np.asarray(table)
        if not (f[self.add.table] == target.add.table[f[:, None], f[None, :]]).all():
            return "addition"
        if not (f[self.mul_table] == target.mul_table[f[:, None], f[None, :]]).all():
            return "multiplication"
        if unital and self.is_unital and target.is_unital and f[self.one] != target.one:
            return "unit"
        return None

    def __repr__(self):
        label = f" {self.name}" if self.name else ""
        unit = " unital" if self.is_unital else ""
        return f"<FinRng{label}{unit} order={self.order}>"


class FinLieAlg(Structure):
    """A finite Lie algebra over a finite unital commutative ring ``scalars``."""

    kind = "lie"

    def __init__(self, scalars, add, smul, bracket, name=None):
        if not (isinstance(scalars, FinRng) and scalars.is_unital and scalars.is_commutative()):
            raise StructureError("Lie scalars must be a unital commutative ring")
        if not isinstance(add, FinGroup):
            add = FinGroup(add)
        if not add.is_abelian():
            raise StructureError("Lie algebra addition must be commutative")
        n, k = add.order, scalars.order
        s = np.array(smul, dtype=np.int64)
        b = np.array(bracket, dtype=np.int64)
        if s.shape != (k, n) or b.shape != (n, n):
            raise StructureError("bad scalar or bracket table shape")
        _check_range(s, n, "scalar table")
        _check_range(b, n, "bracket table")
        s.setflags(write=False)
        b.setflags(write=False)
        self.scalars, self.add, self.smul, self.bracket = scalars, add, s, b
        self.name = name
        a, ka, km = add.table, scalars.add.table, scalars.mul_table
        ar = np.arange(n)
        # module laws
        if not (s[:, a] == a[s[:, :, None], s[:, None, :]]).all():
            raise StructureError("scalar action is not additive in the vector")
        if not (s[ka] == a[s[:, None, :], s[None, :, :]]).all():
            raise StructureError("scalar action is not additive in the scalar")
        if not (s[km] == s[np.arange(k)[:, None, None], s[None, :, :]]).all():
            raise StructureError("scalar action is not associative")
        if not (s[scalars.one] == ar).all():
            raise StructureError("unit scalar does not act trivially")
        for g in add.generators():
            if not (b[:, a[:, g]] == a[b, b[:, g][:, None]]).all():
                raise StructureError("bracket is not additive in the second slot")
            if not (b[a[:, g], :] == a[b, b[g, :][None, :]]).all():
                raise StructureError("bracket is not additive in the first slot")
        if not (b[s[:, :, None], ar[None, None, :]] == s[np.arange(k)[:, None, None], b[None, :, :]]).all():
            raise StructureError("bracket is not homogeneous")
        if not (b[ar, ar] == add.identity).all():
            raise StructureError("bracket is not alternating")
        gens = add.generators()
        for x in gens:
            for y in gens:
                for z in gens:
                    t = a[a[b[x, b[y, z]], b[y, b[z, x]]], b[z, b[x, y]]]
                    if t != add.identity:
                        raise StructureError("bracket violates the Jacobi identity")

    @property
    def order(self):
        return self.add.order

    @property
    def zero(self):
        return self.add.identity

    def is_abelian(self):
        return bool((self.bracket == self.zero).all())

    def hom_violation(self, table, target):
        if not isinstance(target, FinLieAlg):
            return "target kind"
        f = np.asarray(table)
        if not (f[self.add.table] == target.add.table[f[:, None], f[None, :]]).all():
            return "addition"
        if not (f[self.smul] == target.smul[:, f]).all():
            return "scalar multiplication"
        if not (f[self.bracket] == target.bracket[f[:, None], f[None, :]]).all():
            return "bracket"
        return None

    def __repr__(self):
        return f"<FinLieAlg order={self.order} over {self.scalars.order}>"


class Hom:
    """A map of element tables, validated as a homomorphism when ``check``."""

    def __init__(self, source, target, table, *, check=True, unital=False):
        arr = np.array(table, dtype=np.int64)
        if arr.shape != (source.order,):
            raise StructureError(f"map table must have length {source.order}")
        _check_range(arr, target.order, "map table")
        arr.setflags(write=False)
        self.source, self.target, self.table = source, target, arr
        self.unital = unital
        if check:
            bad = self.violation()
            if bad:
                raise StructureError(f"map does not preserve {bad}")

    def violation(self):
        if isinstance(self.source, FinRng):
            return self.source.hom_violation(self.table, self.target, unital=self.unital)
        return self.source.hom_violation(self.table, self.target)

    def is_hom(self):
        return self.violation() is None

    def __call__(self, x):
        return int(self.table[x])

    def then(self, other):
        """The composite ``other o self``."""
        return Hom(self.source, other.target, other.table[self.table], check=False)

    def is_injective(self):
        return len(np.unique(self.table)) == self.source.order

    def is_surjective(self):
        return len(np.unique(self.table)) == self.target.order

    def kernel_mask(self):
        zero = _neutral(self.target)
        return self.table == zero

    def __repr__(self):
        return f"<Hom {self.source!r} -> {self.target!r}>"


def identity_hom(S):
    return Hom(S, S, np.arange(S.order), check=False)


def _neutral(S):
    if isinstance(S, FinGroup):
        return S.identity
    if isinstance(S, (FinRng, FinLieAlg)):
        return S.zero
    return None


def neutral(S):
    return _neutral(S)


def additive_group(S):
    """The group underlying a structure's addition (the group itself for groups)."""
    if isinstance(S, FinGroup):
        return S
    return S.add


def same_structure(A, B):
    """Exact table equality of two structures."""
    if type(A) is not type(B) or A.order != B.order:
        return False
    if isinstance(A, FinSet):
        return True
    if isinstance(A, FinGroup):
        return bool((A.table == B.table).all())
    if isinstance(A, FinRng):
        return (
            bool((A.add.table == B.add.table).all())
            and bool((A.mul_table == B.mul_table).all())
            and A.one == B.one
        )
    return (
        bool((A.add.table == B.add.table).all())
        and bool((A.smul == B.smul).all())
        and bool((A.bracket == B.bracket).all())
    )
