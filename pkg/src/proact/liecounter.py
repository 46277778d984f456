"""A Lie object-action over F_p that no Lie pro-algebra structure can carry.

``M_n = F_p^n`` with zero bracket and bonds dropping the last coordinate;
the one-dimensional algebra ``K = F_p`` acts by
``a_n(k; x_1..x_{n+1}) = (k x_2, ..., k x_{n+1})``, which needs one level of
shift.  Any linear map from level-n semidirect data to a finite Lie
algebra that respects the semidirect bracket must vanish on the M-part.
The checker verifies that per level by exhaustive enumeration; the
statement about the whole pro-object is not finitely decidable and is
not claimed.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import ContractError, ResourceError
from .finalg.catalog import abelian_lie, vector_coords
from .proobj import ObjectStructure, Op, check_object_axioms, lie_action_axioms, structure_ops
from .prosys import Tower

MAX_MAPS = 1 << 22


def _is_prime(p):
    return p >= 2 and all(p % d for d in range(2, int(p**0.5) + 1))


@dataclass
class CounterexampleInstance:
    p: int
    depth: int
    M: Tower
    K: Tower

    def action_table(self, n):
        """``a_n`` as a table ``K x M_{n+1} -> M_n``."""
        p = self.p
        x = vector_coords(p, n + 1)  # first coordinate most significant
        w = p ** np.arange(n - 1, -1, -1)
        return np.stack([((k * x[:, 1:]) % p) @ w if n else np.zeros(len(x), dtype=np.int64) for k in range(p)])

    def bracket_table(self, n):
        """Semidirect bracket ``(M_{n+1} x K)^2 -> M_n x K`` on ids ``x * p + k``; the K-part is 0."""
        p = self.p
        x = vector_coords(p, n + 1)
        els = [(xi, k) for xi in range(len(x)) for k in range(p)]
        w = p ** np.arange(n - 1, -1, -1)
        out = np.zeros((len(els), len(els)), dtype=np.int64)
        for a, (xa, k) in enumerate(els):
            for b, (yb, l) in enumerate(els):
                v = (k * x[yb, 1:] - l * x[xa, 1:]) % p
                out[a, b] = (int(v @ w) if n else 0) * p
        return out

    def object_structure(self):
        inst = self
        act = Op("act", ("L", "M"), "M", lambda n: (n, n + 1), inst.action_table)
        ops = [act] + structure_ops(self.K, "L", "L_") + structure_ops(self.M, "M", "M_")
        return ObjectStructure({"L": self.K, "M": self.M}, ops, lie_action_axioms(scalars=range(self.p)))

    def check_axioms(self, up_to=None):
        return check_object_axioms(self.object_structure(), self.depth if up_to is None else up_to)


def build_instance(p, depth):
    """The shift action of ``F_p`` on the tower ``F_p^n``."""
    if not _is_prime(p):
        raise ContractError(f"{p} is not prime")
    if depth < 1:
        raise ContractError("depth must be at least 1")
    M = Tower("lie", lambda n: abelian_lie(p, n), lambda n: np.arange(p ** (n + 1)) // p, name=f"F_{p}^n")
    K = Tower.constant(abelian_lie(p, 1))
    return CounterexampleInstance(p, depth, M, K)


def lie_constants(p, dim):
    """All structure constants of Lie algebras on ``F_p^dim`` (not up to isomorphism).

    ``c[i, j]`` is the coordinate vector of ``[e_i, e_j]``.
    """
    pairs = [(i, j) for i in range(dim) for j in range(i + 1, dim)]
    if p ** (dim * len(pairs)) > MAX_MAPS:
        raise ResourceError(f"too many bracket candidates in dimension {dim}")
    vecs = list(itertools.product(range(p), repeat=dim))
    out = []
    for choice in itertools.product(vecs, repeat=len(pairs)):
        c = np.zeros((dim, dim, dim), dtype=np.int64)
        for (i, j), v in zip(pairs, choice):
            c[i, j] = v
            c[j, i] = (-np.array(v)) % p
        # Jacobi on basis triples: [[a, b], c] + [[b, c], a] + [[c, a], b] = 0
        ab_c = np.einsum("abm,mcn->abcn", c, c)
        jac = ab_c + ab_c.transpose(1, 2, 0, 3) + ab_c.transpose(2, 0, 1, 3)
        if not (jac % p).any():
            out.append(c)
    return out


def _basis_data(p, n):
    """Restriction and bracket of basis vectors of ``F_p^{n+1} x K``, in coordinates of ``F_p^n x K``."""
    m = n + 2  # x_1..x_{n+1}, k
    restrict = np.zeros((m, n + 1), dtype=np.int64)
    restrict[:n, :n] = np.eye(n, dtype=np.int64)
    restrict[n + 1, n] = 1
    br = np.zeros((m, m, n + 1), dtype=np.int64)
    # [(x; k), (y; l)]_r = k y_{r+1} - l x_{r+1}, r = 1..n
    for r in range(n):
        br[n + 1, r + 1, r] += 1
        br[r + 1, n + 1, r] -= 1
    return restrict, br % p


def compatible_maps(p, n, c):
    """Every linear ``f : F_p^n x K -> L`` respecting the semidirect bracket.

    Rows of each returned matrix are the images of ``e_1..e_n`` and of the
    generator of K.  Bilinearity reduces the identity to basis pairs.
    """
    dim = c.shape[0]
    total = p ** (dim * (n + 1))
    if total > MAX_MAPS:
        raise ResourceError(f"{total} linear maps at level {n} exceed the bound {MAX_MAPS}")
    k = dim * (n + 1)
    coords = np.indices((p,) * k).reshape(k, -1).T if k else np.zeros((1, 0), dtype=np.int64)
    F = coords.reshape(len(coords), n + 1, dim)
    restrict, br = _basis_data(p, n)
    fu = np.einsum("ur,Nrk->Nuk", restrict, F) % p
    lhs = np.einsum("uvr,Nrk->Nuvk", br, F) % p
    rhs = np.einsum("Nui,Nvj,ijk->Nuvk", fu, fu, c) % p
    ok = (lhs == rhs).all(axis=(1, 2, 3))
    return F[ok], total


@dataclass
class ObstructionRow:
    dim: int
    algebra: int
    level: int
    maps: int
    compatible: int
    killing: int
    nonzero_on_scalars: int
    killed_positions: list

    @property
    def confirmed(self):
        return self.compatible == self.killing


def check_obstruction(inst, dim_bound=2):
    """Exhaustive check over all Lie algebras of dimension <= ``dim_bound`` and levels 1..depth."""
    p = inst.p
    rows = []
    for dim in range(dim_bound + 1):
        for a, c in enumerate(lie_constants(p, dim)):
            for n in range(1, inst.depth + 1):
                F, total = compatible_maps(p, n, c)
                on_m = F[:, :n, :]
                kill = ~on_m.any(axis=(1, 2))
                killed = [int(i + 1) for i in range(n) if not F[:, i, :].any()]
                rows.append(
                    ObstructionRow(dim, a, n, total, len(F), int(kill.sum()), int(F[:, n, :].any(axis=1).sum()), killed)
                )
    return ObstructionReport(p, inst.depth, dim_bound, rows)


@dataclass
class ObstructionReport:
    p: int
    depth: int
    dim_bound: int
    rows: list

    @property
    def confirmed(self):
        return all(r.confirmed for r in self.rows)

    def to_json(self):
        return {
            "type": "lie-obstruction",
            "p": self.p,
            "depth": self.depth,
            "dim_bound": self.dim_bound,
            "scope": "per-level annihilation of the M-part by every bracket-compatible linear map; "
            "non-isomorphism of the pro-objects themselves is not decided",
            "confirmed": self.confirmed,
            "algebras": {str(d): len({r.algebra for r in self.rows if r.dim == d}) for d in range(self.dim_bound + 1)},
            "rows": [
                {
                    "dim": r.dim,
                    "algebra": r.algebra,
                    "level": r.level,
                    "maps": r.maps,
                    "compatible": r.compatible,
                    "killing": r.killing,
                    "nonzero_on_scalars": r.nonzero_on_scalars,
                    "killed_positions": r.killed_positions,
                }
                for r in self.rows
            ],
        }
