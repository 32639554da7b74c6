import functools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from triplet_locc import (
    DimensionError,
    PartySignature,
    ZeroVectorError,
    basis_state,
    condition_on,
    embed,
    inner,
    is_product_across,
    make_product,
    make_state,
    merge_parties,
)
from triplet_locc.sampling import haar_locals, random_product_state, random_state
from triplet_locc.statecore import as_product, is_fully_product, merge_product

S2 = 1 / np.sqrt(2)
PHI_PLUS = make_state([2, 2], [1, 0, 0, 1])
PHI_MINUS = make_state([2, 2], [1, 0, 0, -1])


def test_signature_invariants():
    assert PartySignature((2, 3)).total == 6
    with pytest.raises(DimensionError):
        PartySignature((2,))
    with pytest.raises(DimensionError):
        PartySignature((2, 1))


def test_make_state_keeps_normalized_input():
    s = make_state([2, 2], [1, 0, 0, 0])
    np.testing.assert_allclose(s.amps, [1, 0, 0, 0])
    assert s.scale == 1.0


def test_make_state_normalizes_and_records_scale():
    s = make_state([2, 2], [1, 0, 0, 1])
    np.testing.assert_allclose(s.amps, [S2, 0, 0, S2])
    assert s.scale == pytest.approx(np.sqrt(2))


def test_make_state_errors():
    with pytest.raises(DimensionError):
        make_state([2, 2], [1, 0, 0])
    with pytest.raises(ZeroVectorError):
        make_state([2, 2], [0, 0, 0, 1e-13])


def test_inner_examples():
    ket00 = basis_state([2, 2], [0, 0])
    assert inner(ket00, ket00) == pytest.approx(1)
    assert abs(inner(PHI_PLUS, PHI_MINUS)) < 1e-15
    # direct expansion: Phi+ has amplitude 1/sqrt2 on |00>
    assert inner(PHI_PLUS, ket00) == pytest.approx(S2)


def test_inner_signature_mismatch():
    with pytest.raises(DimensionError):
        inner(PHI_PLUS, basis_state([2, 3], [0, 0]))


def test_embed_examples():
    np.testing.assert_allclose(embed(make_product([[1, 0], [0, 1]])).amps, [0, 1, 0, 0])
    p = make_product([[1, 0]] * 3)
    np.testing.assert_allclose(embed(p).amps, np.eye(8)[0])
    # (|0>+|1>)/sqrt2 (x) |0> = (|00> + |10>)/sqrt2
    q = make_product([[S2, S2], [1, 0]])
    np.testing.assert_allclose(embed(q).amps, [S2, 0, S2, 0])


def test_merge_basis_state():
    m = merge_parties(basis_state([2, 2, 2], [0, 1, 0]), 0, 1)
    assert m.dims == (4, 2)
    np.testing.assert_allclose(m.tensor()[1, 0], 1)


def test_merge_ghz():
    ghz = make_state([2, 2, 2], [1, 0, 0, 0, 0, 0, 0, 1])
    m = merge_parties(ghz, 0, 1).tensor()
    # |000> -> |0>_4|0>, |111> -> |3>_4|1>
    expected = np.zeros((4, 2))
    expected[0, 0] = expected[3, 1] = S2
    np.testing.assert_allclose(m, expected)


def test_merge_commutes_with_embed():
    rng = np.random.default_rng(3)
    p = random_product_state([2, 3, 2], rng)
    np.testing.assert_allclose(merge_parties(embed(p), 1, 2).amps, embed(merge_product(p, 1, 2)).amps)


def test_merge_bad_indices():
    s = random_state([2, 2, 2], 0)
    with pytest.raises(IndexError):
        merge_parties(s, 0, 0)
    with pytest.raises(IndexError):
        merge_parties(s, 0, 5)
    with pytest.raises(IndexError):
        merge_parties(s, 0, 2)


def test_condition_on_examples():
    ghz = make_state([2, 2, 2], [1, 0, 0, 0, 0, 0, 0, 1])
    np.testing.assert_allclose(condition_on(ghz, {0, 1}, [[1, 0]]), [S2, 0, 0, 0])
    ket01 = basis_state([2, 2], [0, 1])
    np.testing.assert_allclose(condition_on(ket01, {0}, [[0, 1]]), [1, 0])
    np.testing.assert_allclose(condition_on(ket01, {0}, [[1, 0]]), [0, 0])


def test_condition_on_non_prefix_kept():
    s = random_state([2, 3, 2], 5)
    theta = haar_locals([3], 1)
    probe = haar_locals([2, 2], 2)
    v = condition_on(s, [1], probe)
    full = np.kron(np.kron(probe[0], theta[0]), probe[1])
    assert np.vdot(v, theta[0]) == pytest.approx(np.vdot(s.amps, full), abs=1e-12)


def test_condition_on_mismatch():
    with pytest.raises(DimensionError):
        condition_on(random_state([2, 2], 0), [0], [[1, 0, 0]])


def test_is_product_across_examples():
    assert is_product_across(basis_state([2, 2], [0, 1]), [0])
    assert not is_product_across(PHI_PLUS, [0])
    # 2x2 determinant of Phi+ is 1/2
    assert abs(np.linalg.det(PHI_PLUS.amps.reshape(2, 2))) == pytest.approx(0.5)
    a, b = 0.6, 0.8
    assert not is_product_across(make_state([2, 2], [a, 0, 0, b]), [0])


def test_as_product_roundtrip():
    p = random_product_state([3, 2, 2], 11)
    q = as_product(embed(p))
    assert abs(inner(embed(p), embed(q))) == pytest.approx(1)
    assert is_fully_product(embed(p))


signatures = st.lists(st.integers(2, 3), min_size=2, max_size=3).map(tuple)


@settings(max_examples=60, deadline=None)
@given(signatures, st.integers(0, 2**32 - 1))
def test_inner_conjugate_symmetry(dims, seed):
    rng = np.random.default_rng(seed)
    a, b = random_state(dims, rng), random_state(dims, rng)
    assert inner(a, b) == pytest.approx(np.conj(inner(b, a)), abs=1e-14)
    assert abs(inner(a, b)) <= 1 + 1e-9


@settings(max_examples=60, deadline=None)
@given(signatures, st.integers(0, 2**32 - 1))
def test_embed_inner_factorizes(dims, seed):
    rng = np.random.default_rng(seed)
    p, q = random_product_state(dims, rng), random_product_state(dims, rng)
    factors = np.prod([np.vdot(u, v) for u, v in zip(p.locals, q.locals)])
    assert abs(inner(embed(p), embed(q)) - factors) <= 1e-12
    assert is_product_across(embed(p), [0], 1e-12)


@settings(max_examples=60, deadline=None)
@given(signatures, st.integers(0, 2**32 - 1), st.data())
def test_condition_on_consistency(dims, seed, data):
    rng = np.random.default_rng(seed)
    psi = random_state(dims, rng)
    n = len(dims)
    kept = data.draw(st.sets(st.integers(0, n - 1), min_size=1, max_size=n - 1))
    rest = [j for j in range(n) if j not in kept]
    theta = haar_locals([dims[j] for j in sorted(kept)], rng)
    omega = haar_locals([dims[j] for j in rest], rng)
    locals_ = {j: f for j, f in zip(sorted(kept), theta)}
    locals_.update({j: f for j, f in zip(rest, omega)})
    full = make_product([locals_[j] for j in range(n)])
    v = condition_on(psi, kept, omega)
    theta_vec = functools.reduce(np.kron, theta)
    assert abs(np.vdot(v, theta_vec) - inner(psi, full)) <= 1e-12


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(2, 3), min_size=3, max_size=4).map(tuple), st.integers(0, 2**32 - 1))
def test_merge_preserves_inner_products(dims, seed):
    rng = np.random.default_rng(seed)
    a, b = random_state(dims, rng), random_state(dims, rng)
    assert inner(merge_parties(a, 0, 1), merge_parties(b, 0, 1)) == inner(a, b)
