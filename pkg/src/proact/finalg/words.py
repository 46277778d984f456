"""Bounded normal-form arenas for coproducts and free action objects.

The group arena holds reduced alternating words of ``G * X`` up to a
length bound; the ring arena holds the graded pieces of the kernel of
``R * S -> R`` (alternating tensor shapes containing ``S``) up to a degree
bound.  Products leaving the bound raise :class:`WordOverflow`.
"""

from __future__ import annotations

import itertools

from ..errors import ContractError, StructureError, WordOverflow
from .structures import FinGroup, FinRng
from .tensor import tensor_abelian


class GroupWordArena:
    """Reduced words over ``G`` (letter tag 0) and ``X`` (tag 1)."""

    def __init__(self, G, X, max_len):
        if max_len < 1:
            raise ContractError("max_len must be at least 1")
        self.G, self.X, self.max_len = G, X, max_len
        self._factors = (G, X)
        self.words = self._enumerate()
        self.index = {w: i for i, w in enumerate(self.words)}

    def _enumerate(self):
        out = [()]
        nontrivial = [
            [a for a in range(F.order) if a != F.identity] for F in self._factors
        ]
        for length in range(1, self.max_len + 1):
            for start in (0, 1):
                tags = [(start + k) % 2 for k in range(length)]
                for letters in itertools.product(*(nontrivial[t] for t in tags)):
                    out.append(tuple(zip(tags, letters)))
        return out

    def __len__(self):
        return len(self.words)

    def reduce(self, letters):
        out = []
        for tag, a in letters:
            F = self._factors[tag]
            if a == F.identity:
                continue
            if out and out[-1][0] == tag:
                b = int(F.table[out[-1][1], a])
                out.pop()
                if b != F.identity:
                    out.append((tag, b))
            else:
                out.append((tag, a))
        return tuple(out)

    def multiply(self, u, v):
        w = self.reduce(u + v)
        if len(w) > self.max_len:
            raise WordOverflow(f"product has length {len(w)} > {self.max_len}")
        return w

    def inverse(self, w):
        return tuple((t, int(self._factors[t].inverse[a])) for t, a in reversed(w))

    def letter(self, tag, a):
        return self.reduce(((tag, a),))

    def projection(self, w):
        """Image in ``G`` under ``G * X -> G`` (X letters go to 1)."""
        g = self.G.identity
        for t, a in w:
            if t == 0:
                g = int(self.G.table[g, a])
        return g

    def kernel_words(self):
        """Words of the free action object: those projecting to 1 in ``G``."""
        return [w for w in self.words if self.projection(w) == self.G.identity]

    def action_symbol(self, g, x):
        """The generator ``g x g^-1`` of the free action object."""
        return self.multiply(self.multiply(self.letter(0, g), self.letter(1, x)), self.letter(0, self.G.inverse[g]))


class RingWordArena:
    """Graded pieces ``S, R(x)S, S(x)R, R(x)S(x)R, ...`` up to a degree bound.

    An element is a dict mapping a shape (tuple of 'R'/'S') to an element
    id of that shape's iterated tensor group.
    """

    def __init__(self, R, S, max_len):
        if max_len < 1:
            raise ContractError("max_len must be at least 1")
        if not (isinstance(R, FinRng) and isinstance(S, FinRng)):
            raise StructureError("ring arena needs two rings")
        self.R, self.S, self.max_len = R, S, max_len
        self._ring = {"R": R, "S": S}
        self.shapes = []
        for length in range(1, max_len + 1):
            for start in "RS":
                shape = tuple("RS"[("RS".index(start) + k) % 2] for k in range(length))
                if "S" in shape:
                    self.shapes.append(shape)
        self.shapes.sort(key=lambda s: (len(s), s != ("S",) * len(s), s))
        self._tensors = {}
        self._expr = {}
        for shape in self.shapes:
            self._component(shape)

    def _component(self, shape):
        """(group, pure) where pure(letters) is the id of the pure tensor."""
        if shape in self._tensors:
            return self._tensors[shape]
        if len(shape) == 1:
            A = self._ring[shape[0]].add
            entry = (A, lambda letters: int(letters[0]), None)
        else:
            head, _ = self._component(shape[:-1])[:2]
            T = tensor_abelian(head, self._ring[shape[-1]].add)
            prev = self._component(shape[:-1])[1]

            def pure(letters, T=T, prev=prev):
                return T.pure(prev(letters[:-1]), int(letters[-1]))

            entry = (T.group, pure, T)
        self._tensors[shape] = entry
        return entry

    def component_order(self, shape):
        return self._component(tuple(shape))[0].order

    def pure(self, shape, letters):
        shape = tuple(shape)
        if shape not in self._tensors:
            raise WordOverflow(f"shape of degree {len(shape)} exceeds {self.max_len}")
        return {shape: self._tensors[shape][1](letters)}

    def _decompose(self, shape, x):
        """``x`` as a list of (multiplicity, letters) pure tensors."""
        key = (shape, int(x))
        if key in self._expr:
            return self._expr[key]
        _, _, T = self._tensors[shape]
        if T is None:
            out = [(1, (int(x),))] if x != self._tensors[shape][0].identity else []
        else:
            out = []
            for (i, j), c in zip(T.pairs, T.digits[x]):
                if not c:
                    continue
                for c2, letters in self._decompose(shape[:-1], T.left.basis[i]):
                    out.append((int(c) * c2, letters + (T.right.basis[j],)))
        self._expr[key] = out
        return out

    def add(self, u, v):
        out = dict(u)
        for shape, x in v.items():
            group = self._tensors[shape][0]
            out[shape] = int(group.table[out[shape], x]) if shape in out else x
        return {s: x for s, x in out.items() if x != self._tensors[s][0].identity}

    def scale(self, k, u):
        return {s: int(self._tensors[s][0].power_table(k)[x]) for s, x in u.items()}

    def _mul_pure(self, s1, l1, s2, l2):
        if s1[-1] == s2[0]:
            ring = self._ring[s1[-1]]
            mid = int(ring.mul_table[l1[-1], l2[0]])
            shape, letters = s1 + s2[1:], l1[:-1] + (mid,) + l2[1:]
        else:
            shape, letters = s1 + s2, l1 + l2
        if len(shape) > self.max_len:
            raise WordOverflow(f"product has degree {len(shape)} > {self.max_len}")
        return self.pure(shape, letters)

    def multiply(self, u, v):
        out = {}
        for s1, x in u.items():
            for s2, y in v.items():
                for c1, l1 in self._decompose(s1, x):
                    for c2, l2 in self._decompose(s2, y):
                        out = self.add(out, self.scale(c1 * c2, self._mul_pure(s1, l1, s2, l2)))
        return out


def free_object_words(theory, G, X, max_len):
    """Bounded arena for ``G * X`` (groups) or the kernel of ``R * S -> R`` (rings)."""
    if theory == "group":
        if not (isinstance(G, FinGroup) and isinstance(X, FinGroup)):
            raise StructureError("group arena needs two groups")
        return GroupWordArena(G, X, max_len)
    if theory == "ring":
        return RingWordArena(G, X, max_len)
    raise ContractError(f"unknown theory {theory!r}")
