from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from triplet_locc import StateSet
from triplet_locc.errors import DimensionError, PreconditionError
from triplet_locc.protocol import (
    LocalBasisSet,
    complete_basis,
    complete_local_bases,
    outcome_distribution,
    run_protocol,
    simulate_shot,
)
from triplet_locc.sampling import haar_vector, random_state, random_triple
from triplet_locc.statecore import PartySignature, make_product, make_state
from triplet_locc.witness import Witness, classify

S2 = 1 / np.sqrt(2)


def _witness(S, x, locals_):
    phi = make_product(locals_)
    return Witness(x, phi, float(abs(np.vdot(phi.kron(), S[x].amps)) ** 2))


def test_complete_basis_examples():
    assert np.allclose(complete_basis([1, 0]), np.eye(2))
    b = complete_basis([S2, S2])
    assert np.allclose(b[0], [S2, S2])
    assert abs(np.vdot(b[1], [S2, -S2])) == pytest.approx(1.0)
    assert np.allclose(complete_basis([0, 0, 1]), [[0, 0, 1], [1, 0, 0], [0, 1, 0]])


@settings(max_examples=50, deadline=None)
@given(st.integers(2, 6), st.integers(0, 2**31))
def test_complete_basis_is_unitary(d, seed):
    v = haar_vector(d, np.random.default_rng(seed))
    b = complete_basis(v)
    assert np.allclose(b @ b.conj().T, np.eye(d), atol=1e-12)
    assert np.allclose(b[0], v)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([(2, 2), (2, 3), (3, 3), (2, 2, 2)]), st.integers(0, 2**31))
def test_outcome_distribution_is_resolution_of_identity(dims, seed):
    rng = np.random.default_rng(seed)
    sig = PartySignature(dims)
    bases = LocalBasisSet(sig, tuple(complete_basis(haar_vector(d, rng)) for d in dims))
    psi = random_state(sig, rng)
    t = psi.tensor()
    for j, b in enumerate(bases.bases):
        t = np.moveaxis(np.tensordot(b.conj(), t, axes=([1], [j])), 0, j)
    raw = np.abs(t) ** 2
    assert abs(raw.sum() - 1.0) <= 1e-9
    assert np.allclose(outcome_distribution(psi, bases), raw, atol=1e-12)


def test_shot_on_eigenstate_and_orthogonal_state():
    sig = PartySignature((2, 2))
    bases = complete_local_bases(Witness(0, make_product([[1, 0], [0, 1]]), 1.0))
    rng = np.random.default_rng(0)
    eig = make_state(sig, [0, 1, 0, 0])
    orth = make_state(sig, [1, 0, 0, 1])
    assert all(simulate_shot(eig, bases, rng) == (0, 0) for _ in range(50))
    assert all(simulate_shot(orth, bases, rng) != (0, 0) for _ in range(50))


def test_born_frequencies_within_five_sigma():
    rng = np.random.default_rng(3)
    sig = PartySignature((2, 3))
    bases = LocalBasisSet(sig, tuple(complete_basis(haar_vector(d, rng)) for d in sig.dims))
    psi = random_state(sig, rng)
    probs = outcome_distribution(psi, bases).reshape(-1)
    n = 20_000
    counts = np.zeros(probs.size)
    for _ in range(n):
        counts[np.ravel_multi_index(simulate_shot(psi, bases, rng), sig.dims)] += 1
    sigma = np.sqrt(probs * (1 - probs) / n)
    assert np.all(np.abs(counts / n - probs) <= 5 * sigma + 1e-12)


def test_psi_plus_in_product_basis(bell_triple):
    w = _witness(bell_triple, 2, [[1, 0], [0, 1]])
    summ = run_protocol(bell_triple, w, 300_000, rng=5)
    assert summ.false_conclusive_count == 0
    assert summ.predicted_probability == pytest.approx(0.5)
    assert abs(summ.empirical_frequency - 0.5) <= 3 * summ.sigma


def test_dimension_mismatch():
    bases = LocalBasisSet(PartySignature((2, 2)), (np.eye(2), np.eye(2)))
    with pytest.raises(DimensionError):
        outcome_distribution(make_state([2, 3], np.ones(6)), bases)


def test_counterexample_run(ce_set):
    rep = classify(ce_set, rng=0)
    w = rep.per_state[2].witness
    summ = run_protocol(ce_set, w, 10_000, rng=1)
    assert summ.empirical_frequency == 1.0
    assert summ.false_conclusive_count == 0
    assert summ.conclusive_count == summ.target_shots
    assert sum(v["shots"] for v in summ.per_true_state_counts.values()) == 10_000


def test_priors_weight_preparation():
    S0 = random_triple([2, 2], 1, "product")
    S = StateSet(S0.states, priors=(0.8, 0.1, 0.1))
    w = classify(S, rng=0).per_state[0].witness
    summ = run_protocol(S, w, 20_000, rng=2)
    assert abs(summ.target_shots / 20_000 - 0.8) < 0.02


def test_zero_shots(bell_triple):
    w = _witness(bell_triple, 2, [[1, 0], [0, 1]])
    summ = run_protocol(bell_triple, w, 0, rng=0)
    assert summ.target_shots == 0 and summ.empirical_frequency == 0.0 and summ.sigma == 0.0


def test_rejects_non_witness(bell_triple):
    w = _witness(bell_triple, 2, [[1, 0], [1, 0]])
    with pytest.raises(PreconditionError):
        run_protocol(bell_triple, w, 10, rng=0)


def test_outcome_space_cap():
    S = random_triple([2, 2, 2], 0, "product")
    w = classify(S, rng=0).per_state[0].witness
    with pytest.raises(PreconditionError):
        run_protocol(S, w, 10, rng=0, max_dim=4)
