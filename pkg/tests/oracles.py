"""Slow, independent reference computations used as test oracles.

Everything here works on plain Python lists and ``itertools`` so that it
shares no code path with the package under test.
"""

import itertools


def table(S):
    return [list(map(int, row)) for row in S.table]


def identity_of(t):
    n = len(t)
    return next(e for e in range(n) if all(t[e][x] == x and t[x][e] == x for x in range(n)))


def normal_closure(t, seeds):
    """Saturate under products, inverses and conjugation."""
    n = len(t)
    e = identity_of(t)
    inv = [next(y for y in range(n) if t[x][y] == e) for x in range(n)]
    members = {e} | set(seeds)
    while True:
        new = set(members)
        for a in members:
            new.add(inv[a])
            for b in members:
                new.add(t[a][b])
            for g in range(n):
                new.add(t[t[g][a]][inv[g]])
        if new == members:
            return members
        members = new


def ideal_closure(add, mul, seeds):
    n = len(add)
    zero = identity_of(add)
    neg = [next(y for y in range(n) if add[x][y] == zero) for x in range(n)]
    members = {zero} | set(seeds)
    while True:
        new = set(members)
        for a in members:
            new.add(neg[a])
            for b in members:
                new.add(add[a][b])
            for r in range(n):
                new.add(mul[r][a])
                new.add(mul[a][r])
        if new == members:
            return members
        members = new


def all_group_homs(ta, tb):
    """Every map preserving the tables, by enumeration of all functions."""
    na, nb = len(ta), len(tb)
    out = []
    for f in itertools.product(range(nb), repeat=na):
        if all(f[ta[x][y]] == tb[f[x]][f[y]] for x in range(na) for y in range(na)):
            out.append(f)
    return out


def isomorphic_groups(ta, tb):
    n = len(ta)
    if n != len(tb):
        return False
    for f in itertools.permutations(range(n)):
        if all(f[ta[x][y]] == tb[f[x]][f[y]] for x in range(n) for y in range(n)):
            return True
    return False


def cyclic_tensor_order(m, n):
    """Order of 1 (x) 1 in Z/m (x) Z/n: the least positive element of mZ + nZ."""
    k = 1
    while not any((k - a * m) % n == 0 for a in range(n + 1)):
        k += 1
    return k


def isomorphic_rings(A, B):
    """Brute-force search for a bijection preserving both tables (small orders only)."""
    add_a, mul_a = table(A.add), [list(map(int, r)) for r in A.mul_table]
    add_b, mul_b = table(B.add), [list(map(int, r)) for r in B.mul_table]
    n = len(add_a)
    if n != len(add_b):
        return False
    pairs = [(x, y) for x in range(n) for y in range(n)]
    for f in itertools.permutations(range(n)):
        if all(f[add_a[x][y]] == add_b[f[x]][f[y]] and f[mul_a[x][y]] == mul_b[f[x]][f[y]] for x, y in pairs):
            return True
    return False


def homs_backtrack(tables_a, tables_b, fixed=()):
    """All maps preserving every binary table pair, by depth-first assignment.

    ``tables_a[k]`` and ``tables_b[k]`` are matching operation tables;
    ``fixed`` lists (a, b) pairs the map must send a to b.  A constraint
    ``f(t[x][y]) = t'[f(x)][f(y)]`` is checked as soon as x, y and t[x][y]
    all have images.
    """
    n, m = len(tables_a[0]), len(tables_b[0])
    f = [None] * n
    out = []
    forced = dict(fixed)

    def consistent(x):
        for ta, tb in zip(tables_a, tables_b):
            for y in range(n):
                if f[y] is None:
                    continue
                for a, b in ((x, y), (y, x)):
                    z = ta[a][b]
                    if f[z] is not None and f[z] != tb[f[a]][f[b]]:
                        return False
        return True

    def go(x):
        if x == n:
            out.append(tuple(f))
            return
        choices = [forced[x]] if x in forced else range(m)
        for v in choices:
            f[x] = v
            if consistent(x):
                go(x + 1)
            f[x] = None

    go(0)
    return out
