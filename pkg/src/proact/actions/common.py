"""Shared pieces of the normalization and strictification pipelines."""

from __future__ import annotations

import threading

import numpy as np

from ..errors import ContractError, Inconclusive
from ..prosys import CheckReport


def first_by_key(keys, values, nkeys):
    """For each key the value at its first occurrence (row-major order).

    Returns ``(rep, present)``; keys that never occur have ``present`` False.
    """
    keys = np.asarray(keys).ravel()
    values = np.asarray(values).ravel()
    order = np.argsort(keys, kind="stable")
    sk = keys[order]
    starts = np.flatnonzero(np.r_[True, sk[1:] != sk[:-1]])
    rep = np.full(nkeys, -1, dtype=np.int64)
    rep[sk[starts]] = values[order[starts]]
    return rep, rep >= 0


def missing_lifts(present, shape, what, level):
    miss = np.argwhere(~present.reshape(shape))
    sample = [tuple(int(v) for v in m) for m in miss[:5]]
    return Inconclusive(
        f"{len(miss)} {what} have no lift at level {level}; bonds are not surjective",
        level=level,
        diagnostic={"unlifted": sample, "count": int(len(miss))},
    )


class LevelSearch:
    """Lazily fixed monotone index pairs chosen level by level.

    ``lower(n)`` gives the raw lower bounds at level n.  ``accept(n, vals,
    tentative)`` returns None when the candidate ``vals`` satisfies every
    condition at level n, else the name of the first failing one;
    ``tentative(m)`` gives the values to assume at any level m.  Later
    levels are only ever raised, which keeps earlier checks valid.
    """

    def __init__(self, lower, accept, search, extra_shift=0):
        self._lower, self._accept = lower, accept
        self.search, self.extra_shift = search, extra_shift
        self._fixed = []
        self._lock = threading.RLock()

    def floor(self, m, pending=None):
        base = tuple(max(v, m + self.extra_shift) for v in self._lower(m))
        prev = pending if pending is not None else (self._fixed[m - 1] if 0 < m <= len(self._fixed) else None)
        if prev is not None and m > 0:
            base = tuple(max(b, p) for b, p in zip(base, prev))
        return base

    def values(self, n):
        with self._lock:
            while len(self._fixed) <= n:
                self._fix(len(self._fixed))
            return self._fixed[n]

    def _fix(self, n):
        base = self.floor(n)
        first_bad = None
        for total in range(self.search + 1):
            for s in range(total + 1):
                cand = (base[0] + s, base[1] + total - s)

                def tentative(m, cand=cand):
                    if m < n:
                        return self._fixed[m]
                    if m == n:
                        return cand
                    return self.floor(m, pending=cand)

                bad = self._accept(n, cand, tentative)
                if bad is None:
                    self._fixed.append(cand)
                    return
                first_bad = first_bad or bad
        raise ContractError(
            f"no index shift up to {self.search} satisfies '{first_bad}' at level {n}", level=n, law=first_bad
        )


def bullet_report(checks, up_to):
    """Run ``checks(n) -> list of failed laws`` for n <= up_to."""
    rep = CheckReport()
    for n in range(up_to + 1):
        for law in checks(n):
            rep.fail(n, law)
        rep.checked += 1
    return rep
