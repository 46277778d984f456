"""A pro-group with an automorphism of finite order, made strict."""

from __future__ import annotations

from math import lcm

import numpy as np

from ..errors import ContractError
from ..finalg.catalog import cyclic, vector_coords
from ..prosys import Tower
from .group import ShiftedGroupAction, normalize_group_action, strictify_group_action


def _ids(p, dim):
    digits = vector_coords(p, dim)
    weights = p ** np.arange(dim - 1, -1, -1)
    enc = digits @ weights if dim else np.zeros(1, dtype=np.int64)
    lookup = np.empty(p**dim, dtype=np.int64)
    lookup[enc] = np.arange(p**dim)
    return digits, weights, lookup


def pairing_shift(p, stable_from):
    """``Z/p`` acting on the vector tower ``(Z/p)^n`` by ``T = 1 + N``.

    ``N`` sends ``e_{k+1}`` to ``e_k`` for odd k, so ``N^2 = 0`` and ``T``
    has order p.  Coordinate ``k`` of ``T(x)`` needs ``x_{k+1}``, hence the
    action at level m reads ``X_{m+1}``.  ``stable_from`` must be even so
    that ``T`` is defined on the constant tail.
    """
    if stable_from % 2:
        raise ContractError("the stable level of the pairing shift must be even")
    X = Tower.vector(p, stable_from=stable_from)
    G = Tower.constant(cyclic(p))

    def apply(k, dim_in, dim_out):
        digits, weights, lookup = _ids(p, dim_in)
        y = digits.copy()
        for _ in range(k):
            z = y.copy()
            z[:, 0:dim_in - 1:2] = (y[:, 0:dim_in - 1:2] + y[:, 1:dim_in:2]) % p
            y = z
        _, w_out, look_out = _ids(p, dim_out)
        return look_out[y[:, :dim_out] @ w_out] if dim_out else np.zeros(len(y), dtype=np.int64)

    def table(m):
        dim_in = min(m + 1, stable_from)
        dim_out = min(m, stable_from)
        return np.stack([apply(k, dim_in, dim_out) for k in range(p)])

    return ShiftedGroupAction(G, X, lambda m: m, lambda m: m + 1, table, name=f"pairing shift mod {p}")


def order_n_demo(n, depth=6, stable_from=None):
    """Strictify the pairing shift for ``n`` in {2, 3}; report the automorphism orders.

    Returns ``(strictification, report)``; the report lists, per level of the
    strict tower, the order of the automorphism given by the action.
    """
    if n not in (2, 3):
        raise ContractError("the order-n demo is defined for n in {2, 3}")
    stable_from = stable_from or (8 if n == 2 else 4)
    A = normalize_group_action(pairing_shift(n, stable_from), bound=depth)
    S = strictify_group_action(A, depth=depth)
    orders = []
    for m in range(depth + 1):
        act = S.level(m).act
        k = 1
        for g in range(act.shape[0]):
            t, e = act[g], 1
            while not (t == np.arange(len(t))).all():
                t, e = act[g][t], e + 1
            k = lcm(k, e)
        orders.append(k)
    report = {
        "n": n,
        "depth": depth,
        "gamma": [A.gamma(m) for m in range(depth + 1)],
        "chi": [A.chi(m) for m in range(depth + 1)],
        "carrier_orders": S.carrier.orders(depth),
        "automorphism_orders": orders,
        "orders_divide_n": all(n % k == 0 for k in orders),
    }
    return S, report
