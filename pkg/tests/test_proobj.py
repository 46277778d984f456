import itertools

import numpy as np
import pytest

from proact.errors import ContractError, Inconclusive
from proact.finalg import FinRng, direct_product, zmod_ring
from proact.finalg.catalog import cyclic, lie_from_constants, matrix_ring, symmetric
from proact.liecounter import build_instance
from proact.proobj import (
    ObjectStructure,
    Op,
    check_object_axioms,
    promote_hom,
    strict_object,
    strictify_abelian,
    strictify_ring_flavor,
    strictify_unital_algebra,
    structure_ops,
    theory_axioms,
)
from proact.prosys import RawProMorphism, Tower, check_tower, verify_iso_witness

UPPER = [m for m in itertools.product(range(2), repeat=4) if not m[2]]


def _upper_diagonal_tower():
    """UT2(F2) at every level; each bond keeps only the diagonal."""
    R = matrix_ring(2, upper=True)
    diag = np.array([UPPER.index((m[0], 0, 0, m[3])) for m in UPPER])
    return Tower("ring", lambda n: R, lambda n: diag), R


def test_strict_towers_satisfy_their_axioms():
    for T in (Tower.cyclic_2power(), Tower.constant(matrix_ring(2)), Tower.constant(lie_from_constants(2, 2, [[[0, 0], [1, 0]], [[1, 0], [0, 0]]]))):
        rep = check_object_axioms(strict_object(T), 3)
        assert rep.ok and rep.checked > 0


def test_shift_action_axioms_with_one_level_of_witness():
    inst = build_instance(2, 3)
    S = inst.object_structure()
    once = [ax.name for ax in S.axioms if not ax.name.startswith("a([u, v]")]
    rep = check_object_axioms(S, 3, witnesses={name: 1 for name in once})
    assert rep.ok
    # the commutator law nests the action twice and needs two levels
    nested = [ax.name for ax in S.axioms if ax.name.startswith("a([u, v]")]
    rep = check_object_axioms(S, 3, witnesses={name: 1 for name in nested})
    assert not rep.failures and rep.inconclusive
    assert check_object_axioms(S, 3, witnesses={name: 2 for name in nested}).ok


def test_corrupted_unit_reported_at_first_failing_level():
    T = Tower.cyclic_2power()
    ops = [op for op in structure_ops(T) if op.name != "unit"]
    ops.append(Op("unit", (), "X", lambda n: (), lambda n: 1 if n >= 2 else 0))
    rep = check_object_axioms(ObjectStructure({"X": T}, ops, theory_axioms(T)), 5)
    assert not rep.ok
    assert min(lv for lv, _ in rep.failures) == 2
    assert any("unit" in msg for _, msg in rep.failures)


def test_missing_witness_is_inconclusive_not_failure():
    T = Tower.cyclic_2power()
    rep = check_object_axioms(strict_object(T), 2, witnesses={"associativity": lambda n: None})
    assert not rep.failures and rep.inconclusive and rep.status == "inconclusive"


def test_promote_hom_keeps_homomorphic_maps():
    X = Tower.cyclic_2power()
    f = RawProMorphism.identity(X)
    p = promote_hom(f, 3)
    assert all(p.shift(n) == 0 for n in range(5))
    assert all((p.morphism.map(n) == f.map(n)).all() for n in range(5))


def test_promote_hom_needs_one_bond():
    Z2, Z3 = cyclic(2), cyclic(3)
    X = Tower("group", lambda n: Z2, lambda n: [0, 0])
    Y = Tower.constant(Z3)
    # 1 -> 2 is not a homomorphism Z/2 -> Z/3, but after the zero bond it is
    f = RawProMorphism.level_morphism(X, Y, lambda n: [0, 2])
    p = promote_hom(f, 3)
    for n in range(4):
        assert p.shift(n) == 1
        assert p.morphism.hom(n).is_hom()
        assert (p.morphism.map(n) == f.shifted(n, p.witness(n))).all()


def test_promote_hom_bound_exhausted():
    Z2, Z3 = cyclic(2), cyclic(3)
    f = RawProMorphism.level_morphism(Tower.constant(Z2), Tower.constant(Z3), lambda n: [0, 2])
    with pytest.raises(Inconclusive):
        promote_hom(f, 2).morphism.idx(0)


def test_abelian_tower_unchanged():
    X = Tower.cyclic_2power()
    s = strictify_abelian(X)
    assert s.tower.orders(4) == X.orders(4)
    assert s.verify(5).ok


def _sign_tower():
    """S3 at every level; the bond is x -> t^sign(x) for a fixed transposition t."""
    G = symmetric(3)
    t = next(x for x in range(6) if G.element_order(x) == 2)
    odd = [x for x in range(6) if G.element_order(x) == 2]
    bond = np.array([t if x in odd else G.identity for x in range(6)])
    return Tower("group", lambda n: G, lambda n: bond)


def test_abelianization_when_bonds_kill_commutators():
    T = _sign_tower()
    assert check_tower(T, 5).ok
    s = strictify_abelian(T)
    assert s.tower.orders(5) == [2] * 6
    assert s.verify(5).ok
    assert all(s.witness_levels[i] == i + 1 for i in range(6))
    assert check_object_axioms(strict_object(s.tower), 3).ok


def test_abelian_witness_that_fails_is_rejected():
    with pytest.raises(ContractError):
        strictify_abelian(_sign_tower(), witnesses=lambda i: i)


def test_nonabelian_constant_tower_is_inconclusive():
    with pytest.raises(Inconclusive):
        strictify_abelian(Tower.constant(symmetric(3)), bound=3)


def test_lie_abelianization():
    # Heisenberg algebra [e1, e2] = e3 over F2; bonds keep only e1
    c = np.zeros((3, 3, 3), dtype=np.int64)
    c[0, 1, 2] = c[1, 0, 2] = 1
    L = lie_from_constants(2, 3, c)
    # ids are base-2 digits with e1 most significant
    bond = np.array([4 * (x // 4) for x in range(8)])
    T = Tower("lie", lambda n: L, lambda n: bond)
    assert check_tower(T, 3).ok
    s = strictify_abelian(T)
    assert s.tower.orders(3) == [4] * 4
    assert s.verify(5).ok


def test_commutativization_of_upper_triangular_tower():
    T, R = _upper_diagonal_tower()
    assert check_tower(T, 3).ok
    s = strictify_ring_flavor(T, "commutative")
    # the commutator ideal of UT2(F2) is the off-diagonal line
    assert s.tower.orders(4) == [4] * 5
    assert s.verify(5).ok
    assert all(s.tower.level(n).is_commutative for n in range(3))


def test_commutative_tower_unchanged():
    T = Tower.constant(zmod_ring(6))
    s = strictify_ring_flavor(T, "both", unit=lambda i: (i, 1))
    assert s.tower.orders(3) == [6] * 4
    assert s.verify(4).ok


def test_unit_supplied_one_level_deep():
    R = matrix_ring(2)
    T = Tower.constant(FinRng(R.add, R.mul_table))
    s = strictify_ring_flavor(T, "unital", unit=lambda i: (i + 1, R.one))
    assert s.tower.orders(3) == [16] * 4
    assert s.tower.level(2).one == s.quotient.map(2)[R.one]
    assert s.verify(4).ok


def test_unital_flavor_needs_unit():
    with pytest.raises(ContractError):
        strictify_ring_flavor(Tower.constant(zmod_ring(4)), "unital")


def _scalars(K, R, images):
    return RawProMorphism.level_morphism(Tower.constant(K), R, lambda n: images)


def test_algebra_with_image_of_one_unchanged():
    R = zmod_ring(4)
    T = Tower.constant(R)
    a = strictify_unital_algebra(T, T, RawProMorphism.identity(T))
    assert a.ring.orders(3) == [4] * 4
    assert a.verify(4).ok


def test_matrix_scalars_give_no_defects():
    R = matrix_ring(2)
    T = Tower.constant(R)
    zero = int(R.zero)
    a = strictify_unital_algebra(Tower.constant(zmod_ring(2)), T, _scalars(zmod_ring(2), T, [zero, R.one]))
    assert a.ring.orders(3) == [16] * 4
    assert a.scalars.orders(3) == [2] * 4
    assert a.verify(4).ok


def test_diagonal_scalars_become_central_after_a_bond():
    T, R = _upper_diagonal_tower()
    K = direct_product(zmod_ring(2), zmod_ring(2))
    # (a, c) -> diag(a, c); K ids are a * 2 + c
    images = [UPPER.index((a, 0, 0, c)) for a in range(2) for c in range(2)]
    a = strictify_unital_algebra(Tower.constant(K), T, _scalars(K, T, images))
    assert a.ring.orders(3) == [4] * 4
    assert a.verify(4).ok
    assert verify_iso_witness(a.scalar_map, a.scalar_witness, 4).ok


def test_non_central_scalars_rejected():
    R = matrix_ring(2, upper=True)
    K = direct_product(zmod_ring(2), zmod_ring(2))
    images = [UPPER.index((a, 0, 0, c)) for a in range(2) for c in range(2)]
    T = Tower.constant(R)
    with pytest.raises(ContractError):
        strictify_unital_algebra(Tower.constant(K), T, _scalars(K, T, images))


def test_non_injective_scalars_rejected():
    T = Tower.constant(zmod_ring(2))
    with pytest.raises(ContractError):
        strictify_unital_algebra(Tower.constant(zmod_ring(4)), T, _scalars(zmod_ring(4), T, [0, 1, 0, 1]))
