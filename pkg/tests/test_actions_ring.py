import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import isomorphic_rings
from proact.actions import (
    ShiftedRingAction,
    compare_extensions,
    normalize_ring_action,
    strictify_ring,
    verify_certificate,
)
from proact.actions.generators import random_ring_action
from proact.actions.ring import commutative_ring_action, strictify_algebra_action, unital_ring_action
from proact.errors import ContractError
from proact.finalg import FinRng, direct_product, substructure, zmod_ring
from proact.finalg.catalog import matrix_ring, zero_ring
from proact.prosys import Tower, check_tower
from proact.serialize import dumps, loads


def _dim(n):
    return min(n, 3)


def _vector_rings():
    """``F_2^n`` with componentwise product, constant from dimension 3 on."""

    def gen(n):
        R = zmod_ring(1)
        for _ in range(_dim(n)):
            R = direct_product(R, zmod_ring(2))
        return R

    return Tower("ring", gen, lambda n: np.arange(2 ** _dim(n + 1)) // 2 ** (_dim(n + 1) - _dim(n)), stable_from=3)


def _shifted_scalars():
    """``F_2`` acting on ``F_2^n`` by scalars, read one level deeper."""
    S = _vector_rings()

    def left(n):
        x = S.bond_table(n + 1, n)
        return np.stack([np.zeros_like(x), x])

    R = Tower.constant(zmod_ring(2))
    return ShiftedRingAction(R, S, lambda n: n, lambda n: n + 1, left, lambda n: left(n).T, scalars=lambda n: np.ones(2, dtype=bool))


def _self_action(R, **kw):
    T = Tower.constant(R)
    return ShiftedRingAction.by_multiplication(T, T, lambda n: np.arange(R.order), **kw)


def test_levelwise_bimodule_unchanged():
    g = random_ring_action(np.random.default_rng(2))
    A = normalize_ring_action(unital_ring_action(g.action), bound=5)
    for n in range(6):
        assert A.rho(n) == n and A.sigma(n) == n
        assert (A.left(n) == g.action.left(n)).all() and (A.right(n) == g.action.right(n)).all()
    assert A.check(5).ok


def test_shifted_scalar_action_keeps_its_shift():
    raw = _shifted_scalars()
    assert check_tower(raw.S, 5).ok
    A = normalize_ring_action(raw, bound=5)
    assert [A.sigma(n) for n in range(6)] == [n + 1 for n in range(6)]
    assert [A.rho(n) for n in range(6)] == list(range(6))
    S = strictify_algebra_action(A, depth=4)
    rep = verify_certificate(loads(dumps(S.certificate(4))), 4)
    assert rep.ok


def test_non_central_scalars_rejected_with_law():
    R = matrix_ring(2, upper=True)
    raw = _self_action(R, scalars=lambda n: np.ones(R.order, dtype=bool))
    with pytest.raises(ContractError) as e:
        normalize_ring_action(raw, bound=2)
    assert e.value.law == "l_i(k, a) = r_i(a, k)"


def test_scalar_multiplication_needs_no_relations():
    R = zmod_ring(4)
    S = strictify_ring(_self_action(R), "cring", bound=4)
    for n in range(5):
        assert S.level(n).quotient.order == 4
        assert (S.level(n).quotient.mul_table == R.mul_table).all()


def test_unit_subring_of_z4_is_everything():
    raw = unital_ring_action(_self_action(zmod_ring(4)))
    assert raw.scalars(0).all()


def test_unit_subring_of_matrices_is_the_prime_field():
    R = matrix_ring(2)
    raw = unital_ring_action(_self_action(R))
    mask = raw.scalars(0)
    assert mask.sum() == 2
    assert mask[R.one] and mask[R.zero]


def test_algebra_pipeline_needs_scalars():
    R = zmod_ring(4)
    with pytest.raises(ContractError):
        strictify_ring(_self_action(R), "alg", bound=2)


@pytest.mark.parametrize("flavor", ["ring", "cring", "rng", "crng"])
def test_every_flavor_certifies(flavor):
    R = zmod_ring(4)
    raw = _self_action(R)
    C, _, _ = raw.conjugate(lambda n: n + 1)
    S = strictify_ring(C, flavor, bound=4)
    rep = verify_certificate(loads(dumps(S.certificate(4))), 4)
    assert rep.ok, rep.failures[:3]


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=10, deadline=None)
def test_ring_and_algebra_pipelines_agree(seed):
    g = random_ring_action(np.random.default_rng(seed), depth=4)
    S1 = strictify_ring(g.action, "ring", bound=5)
    raw = unital_ring_action(g.action)
    S2 = strictify_ring(
        ShiftedRingAction.levelwise(g.acting, g.carrier, g.action.left, g.action.right, scalars=raw.scalars, unital=True),
        "alg",
        bound=5,
        extra_shift=1,
    )
    assert compare_extensions(S1, S2).verify(4).ok


def test_relations_inside_restriction_kernel():
    g = random_ring_action(np.random.default_rng(21), depth=4)
    C, _, _ = g.action.conjugate(lambda n: n + 1)
    S = strictify_ring(C, "ring", bound=5)
    for n in range(5):
        L = S.level(n)
        killed = np.flatnonzero(L.proj == L.proj[C.S.level(L.c).zero])
        assert (C.S.bond_table(L.c, n)[killed] == C.S.level(n).zero).all()
        assert S.extension.level(n).order == L.quotient.order * S.acting.level(n).order


def test_zero_rng_action_gives_product_extension():
    Z = zero_ring(2)
    T = Tower.constant(Z)
    zero = np.zeros((2, 2), dtype=np.int64)
    raw = ShiftedRingAction.levelwise(T, T, lambda n: zero, lambda n: zero, unital=False)
    N = strictify_ring(raw, "rng", bound=3)
    assert N.m == 2
    for n in range(4):
        Ek, Rk, _, _ = N.kernel_extension(n)
        assert Ek.order == 4 and Rk.order == 2
        assert (Ek.mul_table == Ek.zero).all()
        assert (Ek.add.table == direct_product(Z, Z).add.table).all()


def test_crng_over_z2_matches_cring():
    R = zmod_ring(2)
    raw = _self_action(R)
    direct = strictify_ring(raw, "cring", bound=3)
    N = strictify_ring(raw, "crng", bound=3)
    for n in range(4):
        Ek, Rk, _, _ = N.kernel_extension(n)
        assert isomorphic_rings(FinRng(Ek.add, Ek.mul_table), FinRng(direct.extension.level(n).add, direct.extension.level(n).mul_table))
        assert Rk.order == 2


@given(st.integers(0, 2**32 - 1), st.sampled_from(["rng", "crng"]))
@settings(max_examples=8, deadline=None)
def test_augmentation_kernel_is_the_original_ring(seed, flavor):
    g = random_ring_action(np.random.default_rng(seed), depth=4, unital=False)
    raw = g.action
    if flavor == "crng":
        raw = ShiftedRingAction.levelwise(raw.R, raw.S, raw.left, lambda n: raw.left(n).T, unital=False)
        if not all((raw.left(n) == g.action.right(n).T).all() for n in range(4)):
            return
    N = strictify_ring(raw, flavor, bound=4)
    for n in range(4):
        r = N.unital.rtop(n)
        Rk, inc = substructure(N.unital.acting.level(n), N.acting_kernel(n))
        emb = N.unitalized.embedding(r)
        assert sorted(inc.table.tolist()) == sorted(emb.tolist())
        orig = raw.R.level(r)
        # the embedding is a ring isomorphism onto the kernel
        rel = np.argsort(np.argsort(emb))
        assert (Rk.add.table[rel[:, None], rel[None, :]] == rel[orig.add.table]).all()
        assert (Rk.mul_table[rel[:, None], rel[None, :]] == rel[orig.mul_table]).all()
