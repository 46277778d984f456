import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from proact.actions import (
    ShiftedGroupAction,
    conjugate_comparison,
    normalize_group_action,
    strictify_group_action,
    verify_action_bijection_smoke,
    verify_certificate,
)
from proact.actions.demos import pairing_shift
from proact.actions.generators import random_group_action
from proact.errors import ContractError
from proact.finalg import classical_semidirect, direct_product
from proact.finalg.catalog import cyclic, symmetric
from proact.proobj import check_object_axioms
from proact.prosys import Tower, check_tower
from proact.serialize import dumps, loads

INVERSION = np.array([[0, 1, 2], [0, 2, 1]])
TRIVIAL = np.array([[0, 1, 2], [0, 1, 2]])


def _constant(act):
    G, X = Tower.constant(cyclic(2)), Tower.constant(cyclic(3))
    return ShiftedGroupAction.levelwise(G, X, lambda n: act)


def test_levelwise_action_is_already_normalized():
    g = random_group_action(np.random.default_rng(7))
    A = normalize_group_action(g.action, bound=6)
    for n in range(7):
        assert A.gamma(n) == n and A.chi(n) == n
        assert (A.table(n) == g.action.table(n)).all()
    assert A.check(6).ok


@pytest.mark.parametrize("c", [1, 2, 3])
def test_conjugate_normalizes_to_constant_shift(c):
    g = random_group_action(np.random.default_rng(11))
    C, iso, wit = g.action.conjugate(lambda n: n + c)
    A = normalize_group_action(C, bound=6)
    assert [A.gamma(n) for n in range(7)] == [n + c for n in range(7)]
    assert [A.chi(n) for n in range(7)] == [n + c for n in range(7)]
    assert A.check(6).ok


def test_shift_action_needs_one_level():
    raw = pairing_shift(2, 8)
    A = normalize_group_action(raw, bound=8)
    assert [A.chi(n) for n in range(9)] == [n + 1 for n in range(9)]
    assert [A.gamma(n) for n in range(9)] == list(range(9))
    # the action object itself satisfies its axioms with one level of slack
    assert check_object_axioms(raw.object_structure(), 4).ok


def test_non_action_rejected_with_law():
    bad = _constant(np.array([[0, 1, 2], [1, 2, 0]]))
    with pytest.raises(ContractError) as e:
        normalize_group_action(bad, bound=3)
    assert e.value.level == 0
    assert e.value.law == "a_i(g, xy) = a_i(g, x) a_i(g, y)"


def test_wrong_table_shape_rejected():
    bad = _constant(np.array([[0, 1], [0, 1]]))
    with pytest.raises(ContractError):
        bad.table(0)


def test_trivial_action_gives_direct_products():
    g = random_group_action(np.random.default_rng(5))
    G, X = g.acting, g.carrier
    triv = ShiftedGroupAction.levelwise(G, X, lambda n: np.tile(np.arange(X.level(n).order), (G.level(n).order, 1)))
    S = strictify_group_action(normalize_group_action(triv, bound=5), depth=5)
    for n in range(6):
        assert S.carrier.level(n).order == X.level(S.level(n).c).order
        D = direct_product(S.carrier.level(n), S.acting.level(n))
        assert (S.extension.level(n).table == D.table).all()


def test_constant_inversion_gives_s3_tower():
    S = strictify_group_action(normalize_group_action(_constant(INVERSION), bound=4), depth=4)
    E = classical_semidirect(cyclic(3), cyclic(2), INVERSION).total
    for n in range(5):
        assert (S.extension.level(n).table == E.table).all()
        assert not S.extension.level(n).is_abelian()
    assert symmetric(3).order == S.extension.level(0).order


@given(st.integers(0, 2**32 - 1), st.integers(0, 2))
@settings(max_examples=15, deadline=None)
def test_strictification_invariants(seed, c):
    g = random_group_action(np.random.default_rng(seed))
    raw = g.action.conjugate(lambda n: n + c)[0] if c else g.action
    S = strictify_group_action(normalize_group_action(raw, bound=6), depth=6)
    for n in range(7):
        L = S.level(n)
        # relations live inside the kernel of the restriction to level n
        killed = np.flatnonzero(L.proj == L.proj[raw.X.level(L.c).identity])
        assert (raw.X.bond_table(L.c, n)[killed] == raw.X.level(n).identity).all()
        # the extension carrier is the product of the two carriers
        E = S.extension.level(n)
        assert E.order == S.carrier.level(n).order * S.acting.level(n).order
        assert S.split(n).check() == []
    for T in (S.acting, S.carrier, S.extension):
        assert check_tower(T, 6).ok
    rep = verify_certificate(loads(dumps(S.certificate(6))), 6)
    assert rep.ok, rep.failures[:3]


def test_conjugate_recovers_original_extension():
    g = random_group_action(np.random.default_rng(13))
    cmp = conjugate_comparison(g.action, lambda n: n + 2, up_to=4)
    assert cmp.verify(4).ok


def test_bijection_smoke_trivial_and_inversion():
    G, X = Tower.constant(cyclic(2)), Tower.constant(cyclic(3))
    rep = verify_action_bijection_smoke(G, X, [lambda n: TRIVIAL, lambda n: INVERSION], bound=3, up_to=3)
    assert rep.distinguished == [(0, 1, "not_equivalent_up_to")]
    assert len(rep.round_trips) == 2
    assert rep.ok and rep.status == "verified"


def test_single_trivial_action_round_trips():
    G, X = Tower.constant(cyclic(2)), Tower.constant(cyclic(3))
    rep = verify_action_bijection_smoke(G, X, [lambda n: TRIVIAL], bound=2, up_to=3)
    assert rep.ok and rep.distinguished == []


def _certificate():
    S = strictify_group_action(normalize_group_action(pairing_shift(2, 8), bound=6), depth=6)
    return loads(dumps(S.certificate(6)))


def test_certificate_round_trip_verifies():
    doc = _certificate()
    rep = verify_certificate(doc, 6)
    assert rep.ok and rep.status == "verified"
    assert dumps(doc) == dumps(loads(dumps(doc)))


def test_corrupted_witness_detected_at_its_level():
    doc = _certificate()
    back = doc["maps"]["carrier"]["back"][3]
    back[1] = (back[1] + 1) % (max(back) + 1)
    rep = verify_certificate(doc, 6)
    assert rep.status == "violation"
    assert {lv for lv, _ in rep.failures} == {3}
    assert all("carrier" in msg for _, msg in rep.failures)


def test_corrupted_action_table_detected():
    doc = _certificate()
    t = doc["strict"]["extension"]["structures"][-1]["table"]
    t[1][2], t[1][3] = t[1][3], t[1][2]
    assert verify_certificate(doc, 6).status == "violation"


def test_depth_beyond_certificate_is_inconclusive():
    rep = verify_certificate(_certificate(), 9)
    assert rep.status == "inconclusive"
